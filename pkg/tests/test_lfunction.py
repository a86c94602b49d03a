from collections import Counter
from fractions import Fraction

import mpmath
import pytest
from flint import acb, arb

from heckecrit._arith import digits, pari
from heckecrit._mellin import incomplete_mellin
from heckecrit.characters import InfinityType, enumerate_characters
from heckecrit.errors import PoleAtS
from heckecrit.ideals import enumerate_ideals
from heckecrit.lfunction import (completed_value, dirichlet_coefficients, evaluate_Lf, gamma_factor,
                                 linf_ratio_exact)


@pytest.fixture(scope="module")
def psi(gaussian):
    """The unramified type (-4, 0) character of Q(i): (α) ↦ α^{-4}."""
    return enumerate_characters(gaussian, InfinityType((-4, 0), 1, 1))[0]


def pari_hecke_L(poly, chi_vec, s, prec=40):
    """PARI's L-function of a Grössencharacter (unitary normalization) at s."""
    old = pari.set_real_precision(prec)
    try:
        gc = pari.gcharinit(pari.bnfinit(poly, 1), 1)
        return pari.lfun(pari.lfuncreate([gc, pari(chi_vec).Col()]), s)
    finally:
        pari.set_real_precision(old)


def test_trivial_coefficients_count_ideals(gaussian_trivial, gaussian):
    coeffs = dirichlet_coefficients(gaussian_trivial, 0, 200, 30)
    counts = Counter(I.norm for I in enumerate_ideals(gaussian.K, 200))
    for n in range(1, 201):
        a = coeffs.values[n]
        assert (0 if a is None else int(a.real.unique_fmpz())) == counts[n]
    assert coeffs.values[1] == 1 and coeffs.values[5] == 2


def test_inert_prime_coefficients(psi):
    coeffs = dirichlet_coefficients(psi, 0, 100, 30)
    assert coeffs.values[3] is None or coeffs.values[3] == 0
    # (3) is principal with generator 3, so ψ((3)) = 3^{-4}
    assert abs(coeffs.values[9] - acb(3) ** -4) < 1e-30


def test_gamma_factor_trivial_type():
    typ = InfinityType((0, 0), 1, 1)
    expected = 1 / (2 * arb.pi() ** 2)
    assert abs(gamma_factor(typ, 2) - expected) < 1e-40
    with pytest.raises(PoleAtS):
        gamma_factor(typ, 0)


def test_critical_gamma_factor_is_finite():
    assert gamma_factor(InfinityType((-4, 0), 1, 1), 0).is_finite()


def test_trivial_character_pole(gaussian_trivial):
    with pytest.raises(PoleAtS):
        evaluate_Lf(gaussian_trivial, 0, 0, 30)


def numeric_linf_ratio(typ):
    return gamma_factor(typ, 0, 40) / gamma_factor(typ.restricted(), 0, 40)


@pytest.mark.parametrize("n,neg,expected", [(3, -1, Fraction(2)), (2, -2, Fraction(1, 3)), (1, -4, Fraction(1))])
def test_linf_ratio(n, neg, expected):
    typ = InfinityType((0,) * n + (neg,) * n, n, 1)
    got = linf_ratio_exact(typ)
    assert isinstance(got, Fraction) and got == expected
    assert abs(numeric_linf_ratio(typ) - arb(expected.numerator) / expected.denominator) < 1e-10


@pytest.mark.parametrize("mus,s,x", [([2], 0, 1.5), ([2, 2, 2], 0, 1.5), ([1, 2], 0.5, 4.0), ([2, 2, 2], 0, 40.0)])
def test_kernel_against_meijer_g(mus, s, x):
    with digits(50):
        (ours,) = incomplete_mellin([arb(m) for m in mus], arb(s), [arb(x)])
    mpmath.mp.dps = 40
    s_, x_ = mpmath.mpf(s), mpmath.mpf(x)
    oracle = x_ ** s_ * mpmath.meijerg([[], [1 - s_]], [[mpmath.mpf(m) for m in mus] + [-s_], []], x_)
    assert abs(float(ours.mid()) - float(oracle)) < 1e-25 * max(1, abs(float(oracle)))
    assert abs(ours - arb(mpmath.nstr(oracle, 35))) < 1e-30 * max(1, abs(float(oracle)))


def catalan_series(terms=200000):
    """Σ (-1)^k/(2k+1)^2 summed directly, with the alternating-series midpoint correction."""
    mpmath.mp.dps = 30
    acc = mpmath.mpf(0)
    for k in range(terms):
        acc += (-1) ** k / mpmath.mpf(2 * k + 1) ** 2
    acc += (-1) ** terms / mpmath.mpf(2 * terms + 1) ** 2 / 2
    return acc


def test_dedekind_zeta_at_two(gaussian_trivial):
    res = evaluate_Lf(gaussian_trivial, 0, 2, 30)
    oracle = mpmath.pi ** 2 / 6 * catalan_series()
    assert abs(float(res.value.real.mid()) - float(oracle)) < 1e-12
    assert abs(float(oracle) - float(mpmath.pi ** 2 / 6 * mpmath.catalan)) < 1e-13


def test_psi_matches_pari(psi):
    # PARI's character [1, 0] is the unitary normalization of ψ; ψ has weight -4
    res = evaluate_Lf(psi, 0, 0, 30)
    oracle = pari_hecke_L("x^2+1", [1, 0], 2)
    assert abs(float(res.value.real.mid()) - float(pari.real(oracle))) < 1e-25
    assert abs(res.value.imag) < 1e-25


def test_psi_cutoff_stability(psi):
    a = evaluate_Lf(psi, 0, 0, 50)
    b = evaluate_Lf(psi, 0, 0, 50, cutoff=2 * a.cutoff_used)
    assert abs(a.value - b.value) < 1e-20
    assert abs(abs(a.root_number) - 1) < 1e-40


def test_functional_equation_involution(psi):
    # Λ(s, ψ) = W·Λ(1 + w - s, ψ̄) with w = -4
    lam, W, *_ = completed_value(psi, 0, 0, 40)
    lam_dual, W_dual, *_ = completed_value(psi, 0, -3, 40, dual=True)
    assert abs(lam - W * lam_dual) < 1e-30 * abs(lam)
    assert abs(W * W_dual - 1) < 1e-30


def test_desk_L_value_matches_pari(desk_quotient):
    # weight 0, so PARI's unitary normalization agrees at s = 0
    oracle = float(pari.real(pari_hecke_L("x^6-2*x^3+2", [1, 0, 0, 0, 0, 0], 0, 30)))
    for rho, res in desk_quotient.l_chi.items():
        assert abs(float(res.value.real.mid()) - oracle) < 1e-20
