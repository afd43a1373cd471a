"""Exact multiplicative-function arithmetic.

Factorization up to 10**12, the standard functions mu/tau/omega/Omega/phi,
root counting of the tuple product polynomial modulo primes, and the exact
rational evaluators rho, rho2, rho3, theta3 used by the divisor-weighted
sieve sums. rho3(p) = k+1 - k^2/p is non-integral, so everything downstream
of it stays in fractions.Fraction until the final float accumulation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, SingularityError
from .primes import _base_primes, is_prime_u64

FACTORIZE_LIMIT = 10**12
_TRIAL_LIMIT = 10**4


@dataclass(frozen=True)
class Factorization:
    """n = prod p^e with primes strictly increasing and exponents >= 1."""

    n: int
    factors: tuple[tuple[int, int], ...]


def _pollard_brent(n: int) -> int:
    """A nontrivial factor of composite n (no small factors expected)."""
    if n % 2 == 0:
        return 2
    for c in range(1, 100):
        x = y = 2
        d = 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = math.gcd(abs(x - y), n)
        if d != n:
            return d
    raise ArithmeticError(f"rho splitting failed for {n}")  # pragma: no cover


def factorize(n: int) -> Factorization:
    """Exact factorization for 1 <= n <= 10**12."""
    if not (1 <= n <= FACTORIZE_LIMIT):
        raise DomainError(f"factorize supports 1 <= n <= {FACTORIZE_LIMIT}, got {n}")
    m = n
    out = []
    for p in _base_primes(_TRIAL_LIMIT):
        p = int(p)
        if p * p > m:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
    if m > 1:
        # no factor <= 10^4 remains, so m is prime, p^2, or p*q
        if is_prime_u64(m):
            out.append((m, 1))
        else:
            r = math.isqrt(m)
            if r * r == m:
                out.append((r, 2))
            else:
                d = _pollard_brent(m)
                a, b = sorted((d, m // d))
                if a == b:
                    out.append((a, 2))
                else:
                    out.append((a, 1))
                    out.append((b, 1))
            out.sort()
    return Factorization(n, tuple(out))


def mobius(n: int) -> int:
    f = factorize(n)
    if any(e > 1 for _, e in f.factors):
        return 0
    return -1 if len(f.factors) % 2 else 1


def tau(n: int) -> int:
    f = factorize(n)
    out = 1
    for _, e in f.factors:
        out *= e + 1
    return out


def omega(n: int) -> int:
    return len(factorize(n).factors)


def big_omega(n: int) -> int:
    return sum(e for _, e in factorize(n).factors)


def euler_phi(n: int) -> int:
    out = n
    for p, _ in factorize(n).factors:
        out -= out // p
    return out


def is_squarefree(n: int) -> bool:
    return all(e == 1 for _, e in factorize(n).factors)


def classify_almost_prime(n: int, B: int) -> tuple[bool, int]:
    """On squarefree n: (tau(n) < B, omega(n)).

    tau = 2^omega on squarefree n, so tau(n) < B forces
    omega(n) <= floor(log2 B)."""
    if B < 2:
        raise DomainError(f"need B >= 2, got {B}")
    f = factorize(n)
    if any(e > 1 for _, e in f.factors):
        raise DomainError(f"{n} is not squarefree")
    w = len(f.factors)
    return (2**w < B, w)


def prime_factor_cap(B: int) -> int:
    """floor(log2 B), computed exactly on integers."""
    if B < 2:
        raise DomainError(f"need B >= 2, got {B}")
    return B.bit_length() - 1


def count_roots_mod_p(t, p: int) -> int:
    """#{0 <= a < p : prod_i (A*a + b_i) == 0 mod p} for a tuple in
    factored-A form (duck-typed: needs a_factors, offsets, a0_residue(p)).

    For p | A the product is constant in a, so the count is 0 or p.
    For p not dividing A it equals the number of distinct offsets mod p,
    independent of the shift a0."""
    if p in t.a_factors:
        a0 = t.a0_residue(p)
        if any((a0 + h) % p == 0 for h in t.offsets):
            return p
        return 0
    return len({h % p for h in t.offsets})


def _rho_from_prime_values(d: int, a_factors, prime_value) -> Fraction:
    """Multiplicative extension over squarefree d coprime to A; 0 off support."""
    if d < 1:
        raise DomainError(f"need d >= 1, got {d}")
    f = factorize(d)
    if any(e > 1 for _, e in f.factors):
        return Fraction(0)
    out = Fraction(1)
    for p, _ in f.factors:
        if p in a_factors:
            return Fraction(0)
        out *= prime_value(p)
    return out


def rho(d: int, k: int, a_factors=frozenset()) -> Fraction:
    """rho(p) = k for p not dividing A; the generic root-count density."""
    return _rho_from_prime_values(d, a_factors, lambda p: Fraction(k))


def rho2(d: int, k: int, a_factors=frozenset()) -> Fraction:
    """rho2(p) = k-1; density for the prime-detecting sums."""
    return _rho_from_prime_values(d, a_factors, lambda p: Fraction(k - 1))


def rho3(d: int, k: int, a_factors=frozenset()) -> Fraction:
    """rho3(p) = k+1 - k^2/p; density for the divisor-weighted sum."""
    return _rho_from_prime_values(d, a_factors, lambda p: k + 1 - Fraction(k * k, p))


def theta3(d: int, k: int, a_factors=frozenset()) -> Fraction:
    """prod over p|d of (1 - rho3(p)/p)^(-1), exact; d squarefree coprime to A."""
    if d < 1:
        raise DomainError(f"need d >= 1, got {d}")
    f = factorize(d)
    if any(e > 1 for _, e in f.factors):
        raise DomainError(f"theta3 needs squarefree d, got {d}")
    out = Fraction(1)
    for p, _ in f.factors:
        if p in a_factors:
            raise DomainError(f"theta3 needs d coprime to A; {p} divides both")
        factor = 1 - (k + 1 - Fraction(k * k, p)) / p
        if factor == 0:
            raise SingularityError(f"1 - rho3({p})/{p} vanishes at k={k}")
        out /= factor
    return out
