import math
import random
from fractions import Fraction

import mpmath as mp
import pytest

from gapsieve import constants as C
from gapsieve.errors import DomainError, InfeasibleError
from gapsieve.lognum import LogNumber, working_precision

PAPER = C.GpyParameters(k=4_500_000, l=300, varpi=Fraction(1, 1168), B=2**32 - 1)

# regression values, recomputed once at 200-bit precision before freezing
LN_KAPPA1_REF = -3204.4599996261590232
LN_KAPPA2_REF = -3186.6195425498841491
LN_KAPPA3_REF = -3222.3071178289759558
LN_DELTA1_REF = -15384.63036953501106
LN_DELTA2_REF = 3115.3264337796694232


def rel(a, b):
    return abs(a - b) / max(abs(a), abs(b))


def test_log_binomial_hand_cases():
    assert abs(float(C.log_binomial(4, 2).ln()) - math.log(6)) < 1e-12
    assert float(C.log_binomial(10, 10).ln()) == 0.0
    assert abs(float(C.log_binomial(6, 3).ln()) - math.log(20)) < 1e-12
    with pytest.raises(DomainError):
        C.log_binomial(3, 5)
    with pytest.raises(DomainError):
        C.log_binomial(-1, 0)
    with pytest.raises(DomainError):
        C.log_binomial(100_000, 50_000)  # reduced index above the cap


def test_log_binomial_against_exact_big_integer():
    # exact big-integer binomial as oracle, then ln at high precision
    with working_precision(200):
        want = float(mp.log(mp.mpf(math.comb(4_500_600, 600))))
    got = float(C.log_binomial(4_500_600, 600).ln())
    assert rel(got, want) < 1e-15
    for n, r in ((50, 13), (1000, 7), (12345, 1234)):
        assert rel(float(C.log_binomial(n, r).ln()), math.log(math.comb(n, r))) < 1e-12


def test_log_binomial_pascal_consistency():
    rng = random.Random(17)
    for _ in range(1000):
        n = rng.randint(2, 10**7)
        r = rng.randint(1, min(n, rng.choice([30, 200, 10_000])))
        r = min(r, n)
        lhs = float(C.log_binomial(n, r).ln())
        rhs = float(C.log_binomial(n - 1, r - 1).ln()) + math.log(n) - math.log(r)
        assert rel(lhs, rhs) < 1e-9 or abs(lhs - rhs) < 1e-9


def test_delta1():
    p = C.GpyParameters(k=1, l=1, varpi=Fraction(1, 1168), B=2)
    assert rel(float(C.delta1(p).ln()), -math.log(1 + 4 / 1168)) < 1e-12
    # k = 0 limit: delta1 -> 1 is the trivial boundary; smallest legal k is 1
    assert float(C.delta1(p).ln()) * 0 == 0.0


def test_delta2_against_float_oracle():
    p = C.GpyParameters(k=1, l=1, varpi=Fraction(1, 1168), B=2)
    got = C.delta2(p).to_float()
    # direct 293-term summation in plain floating arithmetic
    acc, term = 1.0, 1.0
    for v in range(1, 294):
        term /= v
        acc += math.log(293) * term
    assert rel(got, acc) < 1e-12
    assert abs(got - 10.7605) < 1e-3
    p7 = C.GpyParameters(k=7, l=1, varpi=Fraction(1, 1168), B=2)
    acc, term = 1.0, 1.0
    for v in range(1, 294):
        term *= 7 / v
        acc += math.log(293) * term
    assert rel(C.delta2(p7).to_float(), acc) < 1e-12


def test_kappa_paper_values():
    k1, k2, k3 = (C.kappa(i, PAPER) for i in (1, 2, 3))
    for kp in (k1, k2, k3):
        assert float(kp.ln()) <= -1000
    assert rel(float(k1.ln()), LN_KAPPA1_REF) < 1e-12
    assert rel(float(k2.ln()), LN_KAPPA2_REF) < 1e-12
    assert rel(float(k3.ln()), LN_KAPPA3_REF) < 1e-12
    with pytest.raises(DomainError):
        C.kappa(4, PAPER)


def test_kappa_hand_check_with_delta2_zeroed():
    p = C.GpyParameters(k=2, l=1, varpi=Fraction(1, 1168), B=2)
    got = C.kappa(1, p, d2=LogNumber.zero()).to_float()
    want = (1 + 4 / 1168) ** -2 * (1 + math.log(293) * 2) * math.comb(4, 2)
    assert rel(got, want) < 1e-12


def test_main_coefficient():
    # exact rational oracle with kappas zeroed
    got = C.main_coefficient(PAPER, LogNumber.zero(), LogNumber.zero())
    want = Fraction(4_499_999 * 601 * 1172, 4_500_601 * 602 * 1168) - 1
    assert rel(got, float(want)) < 1e-12
    # hand case
    p = C.GpyParameters(k=2, l=1, varpi=Fraction(0), B=2)
    got = C.main_coefficient(p, LogNumber.zero(), LogNumber.zero())
    assert rel(got, 1 * 3 * 1 / (5 * 4) - 1) < 1e-12
    assert abs(got + 0.85) < 1e-12


def test_c0():
    p = C.GpyParameters(k=1, l=1, varpi=Fraction(0), B=2, log_ratio=Fraction(4))
    got = C.c0(p, LogNumber.zero())
    assert rel(got, (1 * 3 / 2) * (2 / 3 + 4)) < 1e-12
    assert abs(got - 7.0) < 1e-12
    # kappa3 = exp(-1000) perturbs c0 below any float resolution:
    k3 = LogNumber.from_ln(-1000)
    assert C.c0(PAPER, k3) == C.c0(PAPER, LogNumber.zero())
    # magnitude comparison in log domain: perturbation < c0 * 1e-400
    l, k = PAPER.l, PAPER.k
    pert_ln = -1000 + math.log(l * (k + 2 * l) / (4 * l - 2) * (6 / 1168 + 3.9864))
    assert pert_ln < math.log(C.c0(PAPER, LogNumber.zero())) - 400 * math.log(10)


def test_s_coefficient_and_prime_factor_bound():
    k1, k2, k3 = (C.kappa(i, PAPER) for i in (1, 2, 3))
    main = C.main_coefficient(PAPER, k1, k2)
    c0v = C.c0(PAPER, k3)
    s = C.s_coefficient(PAPER, main, c0v)
    assert s >= 0.00045
    assert rel(s, 5.8e-4) < 0.01
    assert C.prime_factor_bound(2**32 - 1) == 31
    assert C.prime_factor_bound(1024) == 10
    assert C.prime_factor_bound(2) == 1


def test_report_paper_chain_passes():
    rep = C.constants_report(PAPER)
    assert rep.chain_passes
    assert rep.prime_factor_bound == 31
    assert max(rep.ln_kappa1, rep.ln_kappa2, rep.ln_kappa3) <= -1000
    assert rep.main_coefficient >= 0.0016
    assert rep.c0 <= 4.6e6
    assert rep.s_coefficient >= 0.00045
    d = rep.to_dict()
    assert d["params"]["varpi"] == "1/1168"
    assert d["chain_passes"] is True


def test_report_stable_under_doubled_precision():
    rep1 = C.constants_report(PAPER)
    with working_precision(160):
        rep2 = C.constants_report(PAPER)
    for name in (
        "ln_delta1",
        "ln_delta2",
        "ln_kappa1",
        "ln_kappa2",
        "ln_kappa3",
        "main_coefficient",
        "c0",
        "s_coefficient",
    ):
        assert rel(getattr(rep1, name), getattr(rep2, name)) < 1e-6


def test_monotonicity_under_perturbation():
    k1, k2, k3 = (C.kappa(i, PAPER) for i in (1, 2, 3))
    main0 = C.main_coefficient(PAPER, k1, k2)
    bigger = LogNumber.from_float(1e-6)
    assert C.main_coefficient(PAPER, bigger, k2) < main0
    assert C.main_coefficient(PAPER, k1, bigger) < main0
    c0v = C.c0(PAPER, k3)
    assert C.c0(PAPER, LogNumber.from_float(1e-3)) > c0v
    s0 = C.s_coefficient(PAPER, main0, c0v)
    assert C.s_coefficient(PAPER, main0, c0v * 1.01) < s0


def test_parameter_validation():
    with pytest.raises(DomainError):
        C.GpyParameters(k=0, l=1, varpi=Fraction(1, 1168), B=2)
    with pytest.raises(DomainError):
        C.GpyParameters(k=2, l=0, varpi=Fraction(1, 1168), B=2)
    with pytest.raises(DomainError):
        C.GpyParameters(k=2, l=1, varpi=Fraction(1, 2), B=2)
    with pytest.raises(DomainError):
        C.GpyParameters(k=2, l=1, varpi=Fraction(1, 1168), B=1)


def test_optimizer_paper_passthrough():
    k, l, B, bound = C.optimize_parameters(
        Fraction(1, 1168), candidates=[(4_500_000, 300)]
    )
    assert (k, l, B, bound) == (4_500_000, 300, 2**32 - 1, 31)


def test_optimizer_finds_31_at_paper_varpi():
    k, l, B, bound = C.optimize_parameters(Fraction(1, 1168))
    assert bound <= 31
    rep = C.constants_report(C.GpyParameters(k=k, l=l, varpi=Fraction(1, 1168), B=B))
    assert rep.s_coefficient > 0


def test_optimizer_bound_monotone_in_varpi():
    bounds = [
        C.optimize_parameters(w)[3]
        for w in (Fraction(1, 2336), Fraction(1, 1168), Fraction(1, 584))
    ]
    assert bounds[0] >= bounds[1] >= bounds[2]


def test_optimizer_infeasible():
    with pytest.raises(InfeasibleError):
        C.optimize_parameters(Fraction(1, 1168), candidates=[(10, 1)])
    with pytest.raises(DomainError):
        C.optimize_parameters(Fraction(1, 2))
