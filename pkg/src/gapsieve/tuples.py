"""Admissible k-tuples of offsets.

Covers admissibility checking (full scan over p <= k, or a documented
sampled subset), the structural certificate for tuples built from
consecutive primes, the shift-to-coprime normalization that replaces
n + h_i by A*n + b_i, and the singular series of a normalized tuple.

A is only ever held in factored form: at k = 4.5e6 it would have about a
million digits, and every use reduces to "p | A?" plus residues mod p.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DomainError,
    InadmissibleTupleError,
    ResourceLimitError,
    ScaleError,
    SingularityError,
)
from .lognum import LogNumber
from .primes import (
    DEFAULT_CEILING,
    DEFAULT_SEGMENT_BUDGET,
    _base_primes,
    is_prime_u64,
    segment_bounds,
    sieve_segment,
)

FULL_CHECK_CAP = 100_000
NORMALIZE_CAP = 20_000
SAMPLED_BASE_LIMIT = 1_000
SAMPLED_EXTRA_COUNT = 1_000
_CRT_MATERIALIZE_LIMIT = 2**63


@dataclass(frozen=True)
class OffsetTuple:
    """Strictly increasing offsets h_1 < ... < h_k, canonicalized to h_1 = 0."""

    offsets: tuple[int, ...]

    @classmethod
    def from_offsets(cls, offsets) -> "OffsetTuple":
        offs = sorted(int(h) for h in offsets)
        if not offs:
            raise DomainError("empty tuple")
        if len(set(offs)) != len(offs):
            raise DomainError("offsets must be distinct")
        base = offs[0]
        return cls(tuple(h - base for h in offs))

    @property
    def k(self) -> int:
        return len(self.offsets)

    @property
    def width(self) -> int:
        return self.offsets[-1] - self.offsets[0]

    def as_array(self) -> np.ndarray:
        return np.asarray(self.offsets, dtype=np.int64)


@dataclass(frozen=True)
class AdmissibilityResult:
    admissible: bool
    witness: int | None
    mode: str
    primes_checked: int

    def __iter__(self):  # unpacks as (admissible, witness)
        yield self.admissible
        yield self.witness


def _covering_witness(offsets: np.ndarray, ps) -> tuple[int | None, int]:
    """Least prime in ps whose residue classes are fully covered, if any."""
    k = len(offsets)
    checked = 0
    seen = np.zeros(int(max(ps)) if len(ps) else 1, dtype=bool)
    for p in ps:
        p = int(p)
        checked += 1
        if p > k:
            continue  # k residues cannot cover p classes
        view = seen[:p]
        view[:] = False
        view[offsets % p] = True
        if view.all():
            return p, checked
    return None, checked


def check_admissible(t: OffsetTuple, mode: str = "full") -> AdmissibilityResult:
    """Is there, for every prime p, a residue class missed by the offsets?

    Only p <= k can cover; full mode scans them all (k capped), sampled mode
    scans all p <= 1000 plus ~1000 index-equispaced primes up to k and can
    only report "no counterexample found"."""
    offs = t.as_array()
    k = t.k
    if mode == "full":
        if k > FULL_CHECK_CAP:
            raise ScaleError(
                f"full admissibility scan capped at k <= {FULL_CHECK_CAP} "
                f"(cost grows as k*pi(k)); got k={k}"
            )
        ps = _base_primes(max(k, 2))
    elif mode == "sampled":
        ps = _base_primes(max(min(k, SAMPLED_BASE_LIMIT), 2))
        if k > SAMPLED_BASE_LIMIT:
            extra = _base_primes(k)
            extra = extra[extra > SAMPLED_BASE_LIMIT]
            if len(extra) > SAMPLED_EXTRA_COUNT:
                idx = np.linspace(0, len(extra) - 1, SAMPLED_EXTRA_COUNT).astype(int)
                extra = extra[np.unique(idx)]
            ps = np.concatenate([ps, extra])
    else:
        raise DomainError(f"unknown admissibility mode {mode!r}")
    witness, checked = _covering_witness(offs, ps)
    return AdmissibilityResult(witness is None, witness, mode, checked)


def check_admissible_shifted_primes(
    t: OffsetTuple, shift: int, ceiling: int = DEFAULT_CEILING
) -> bool:
    """Structural certificate: every h_i + shift prime and > k.

    Sufficient for admissibility: for p <= k the class -shift mod p is then
    uncovered, since no element of the tuple can be divisible by p."""
    k = t.k
    values = t.as_array() + shift
    if int(values[0]) <= k:
        return False
    hi = int(values[-1])
    if k >= 1000 and hi < ceiling:
        # dense bulk check: sieve the covering interval once
        pos = 0
        for a, b in segment_bounds(shift, hi + 1, DEFAULT_SEGMENT_BUDGET):
            seg = sieve_segment(a, b)
            end = int(np.searchsorted(values, b))
            if not seg.flags[values[pos:end] - a].all():
                return False
            pos = end
        return True
    return all(is_prime_u64(int(v)) for v in values)


def construct_consecutive_prime_tuple(
    k: int, x0: int, ceiling: int = DEFAULT_CEILING
) -> tuple[OffsetTuple, int]:
    """h_i = p_{m+i} - p_{m+1} where p_m is the largest prime below x0."""
    if k < 1:
        raise DomainError(f"need k >= 1, got {k}")
    if x0 <= 2:
        raise DomainError(f"need x0 > 2 so a prime below x0 exists, got {x0}")
    collected: list[np.ndarray] = []
    have = 0
    for a, b in segment_bounds(x0, ceiling + 1, DEFAULT_SEGMENT_BUDGET):
        ps = sieve_segment(a, b).primes()
        if have + len(ps) >= k:
            ps = ps[: k - have]
        collected.append(ps)
        have += len(ps)
        if have == k:
            break
    else:
        raise ResourceLimitError(
            f"p_(m+{k}) from x0={x0} exceeds sieve ceiling {ceiling}"
        )
    primes = np.concatenate(collected)
    shift = int(primes[0])
    return OffsetTuple(tuple((primes - shift).tolist())), shift


@dataclass(frozen=True)
class AdmissibleTuple:
    """Offsets plus the shift-to-coprime data: A (factored), a0 (residues), b_i.

    Invariants after normalize(): root count of prod_i (A*a + b_i) mod p is
    0 for p | A and k otherwise; every prime p <= k divides A."""

    offsets: tuple[int, ...]
    a_factors: tuple[int, ...]
    a0_residues: tuple[tuple[int, int], ...]

    @property
    def k(self) -> int:
        return len(self.offsets)

    @property
    def width(self) -> int:
        return self.offsets[-1] - self.offsets[0]

    def a0_residue(self, p: int) -> int:
        for q, r in self.a0_residues:
            if q == p:
                return r
        raise DomainError(f"{p} does not divide A")

    def a_integer(self) -> int:
        a = 1
        for p in self.a_factors:
            a *= p
            if a >= _CRT_MATERIALIZE_LIMIT:
                raise ResourceLimitError("A does not fit in 63 bits; use the factored form")
        return a

    def a0_integer(self) -> int:
        """CRT lift of the residue system; canonical 1 when A = 1."""
        a = self.a_integer()
        if a == 1:
            return 1
        x = 0
        for p, r in self.a0_residues:
            m = a // p
            x = (x + r * m * pow(m, -1, p)) % a
        return x

    def b_values(self) -> list[int]:
        a0 = self.a0_integer()
        return [a0 + h for h in self.offsets]

    def offset_tuple(self) -> OffsetTuple:
        return OffsetTuple(self.offsets)


def normalize(t: OffsetTuple) -> AdmissibleTuple:
    """Pick A = product of all primes where the offsets collide mod p, and
    per p | A the least shift a0 with no b_i = a0 + h_i divisible by p."""
    k = t.k
    if k > NORMALIZE_CAP:
        raise ScaleError(
            f"normalize enumerates collision primes up to the width; capped at k <= {NORMALIZE_CAP}"
        )
    res = check_admissible(t, mode="full")
    if not res.admissible:
        raise InadmissibleTupleError(
            f"tuple is inadmissible (residues cover mod {res.witness})", witness=res.witness
        )
    offs = t.as_array()
    a_factors = []
    scan_limit = max(t.width, k, 2)
    for p in _base_primes(scan_limit):
        p = int(p)
        if len(np.unique(offs % p)) < k:
            a_factors.append(p)
    a0_residues = []
    for p in a_factors:
        forbidden = set((-offs % p).tolist())
        r = next(r for r in range(p) if r not in forbidden)
        a0_residues.append((p, r))
    return AdmissibleTuple(t.offsets, tuple(a_factors), tuple(a0_residues))


def verify_normalization(t: AdmissibleTuple, prime_limit: int = 1000) -> bool:
    """Root-count pattern check: 0 on p | A, k on p <= prime_limit otherwise."""
    from .arith import count_roots_mod_p

    a_set = set(t.a_factors)
    for p in _base_primes(prime_limit):
        p = int(p)
        expected = 0 if p in a_set else t.k
        if count_roots_mod_p(t, p) != expected:
            return False
    return True


def singular_series(t: AdmissibleTuple, cutoff: int) -> tuple[LogNumber, float]:
    """Truncated log of prod_{p|A}(1-1/p)^-k * prod_{p not | A}(1-k/p)(1-1/p)^-k
    over p <= cutoff, with a rigorous bound on the omitted log-factors.

    Tail: for p > cutoff >= k the log-factor is sum_{j>=2} (k - k^j)/(j p^j),
    bounded by (k^2/2p^2)/(1 - k/p); summing 1/p^2 < 1/cutoff over p > cutoff
    gives (k^2 / (2 cutoff)) * (cutoff+1)/(cutoff+1-k)."""
    k = t.k
    if cutoff < k:
        raise DomainError(f"cutoff must be >= k={k}, got {cutoff}")
    a_set = set(t.a_factors)
    missing = [p for p in a_set if p > cutoff]
    if missing:
        raise DomainError(f"cutoff {cutoff} excludes primes of A: {sorted(missing)[:5]}")
    terms = []
    for p in _base_primes(cutoff):
        p = int(p)
        if p in a_set:
            terms.append(-k * math.log1p(-1.0 / p))
        else:
            if p <= k:
                raise SingularityError(
                    f"prime {p} <= k is not in A; factor (1-k/p) nonpositive "
                    "(normalization bug)"
                )
            terms.append(math.log1p(-k / p) - k * math.log1p(-1.0 / p))
    log_value = math.fsum(terms)
    tail = (k * k / (2.0 * cutoff)) * (cutoff + 1) / (cutoff + 1 - k)
    return LogNumber.from_ln(log_value), tail


def write_tuple_json(path, t: OffsetTuple, shift: int | None = None) -> None:
    doc = {"k": t.k, "offsets": list(t.offsets)}
    if shift is not None:
        doc["shift"] = shift
    with open(path, "w") as fh:
        json.dump(doc, fh)
        fh.write("\n")


def read_tuple_file(path) -> tuple[OffsetTuple, int | None]:
    """JSON {"k":..., "offsets":[...], "shift":...} or one offset per line."""
    with open(path) as fh:
        text = fh.read()
    stripped = text.lstrip()
    if stripped.startswith("{"):
        doc = json.loads(text)
        t = OffsetTuple.from_offsets(doc["offsets"])
        if "k" in doc and doc["k"] != t.k:
            raise DomainError(f"tuple file declares k={doc['k']} but has {t.k} offsets")
        return t, doc.get("shift")
    offsets = [int(line) for line in text.split() if line.strip()]
    return OffsetTuple.from_offsets(offsets), None
