from fractions import Fraction
from itertools import permutations

import mpmath
import pytest
from flint import acb

from heckecrit._arith import pari
from heckecrit.characters import InfinityType, enumerate_characters, evaluate
from heckecrit.errors import QuadratureFailed, Ramified
from heckecrit.field_tower import DESK_POLY, build_field
from heckecrit.local_integrals import (TATE, MonomialSchwartz, archimedean_tate_integral, gram_determinant,
                                       measure_constant, monomial_tate_integral, tate_integral, tate_zeta,
                                       unramified_euler_identity)

PRIMES = (2, 3, 5, 7, 13)


def leibniz_det(rows):
    """Exact determinant by the permutation expansion."""
    n = len(rows)
    total = 0
    for perm in permutations(range(n)):
        inv = sum(perm[i] > perm[j] for i in range(n) for j in range(i + 1, n))
        term = (-1) ** inv
        for i, p in enumerate(perm):
            term *= rows[i][p]
        total += term
    return total


@pytest.mark.parametrize("n", range(2, 9))
def test_gram_determinant_equals_n(n):
    # Gram matrix of ε_i - ε_n is 2I + (J - I) of size n - 1
    G = [[2 if i == j else 1 for j in range(n - 1)] for i in range(n - 1)]
    assert gram_determinant(n) == n
    if n <= 6:
        assert leibniz_det(G) == n


def test_gram_small_cases():
    assert gram_determinant(1) == 1
    assert leibniz_det([[2, 1], [1, 2]]) == gram_determinant(3) == 3
    assert gram_determinant(4) == 4


def test_measure_constant():
    assert measure_constant(1, 2).value == 1
    mc = measure_constant(3, 2)
    assert (mc.value, mc.gram_determinant, mc.polar_factor) == (48, 3, 4)
    assert measure_constant(2, 4).value == (4 * 2) ** 2
    with pytest.raises(ValueError):
        measure_constant(2, 3)


def test_tate_measure_normalization():
    mpmath.mp.dps = 30
    assert abs(tate_zeta(1) - 1 / mpmath.pi) < mpmath.mpf(10) ** -25
    # polar density 4/r integrated against e^{-2πr²}·r² recovers ζ_{K_w}(1)
    val = mpmath.quad(lambda r: TATE.radial_density(r) * r ** 2 * mpmath.exp(-2 * mpmath.pi * r * r), [0, mpmath.inf])
    assert abs(val - 1 / mpmath.pi) < mpmath.mpf(10) ** -25


@pytest.mark.parametrize("t", [0.5, 1, 1.5, 2, 3, 5])
def test_archimedean_tate_integral(t):
    mpmath.mp.dps = 30
    oracle = (2 * mpmath.pi) ** (-mpmath.mpf(t)) * mpmath.gamma(t)
    assert abs(archimedean_tate_integral(t) - oracle) < 1e-8
    assert abs(tate_integral(t) - 2 * oracle) < 1e-8


@pytest.mark.parametrize("t", [1, 2, 3])
def test_tate_closed_forms(t):
    mpmath.mp.dps = 30
    expected = {1: 1 / (2 * mpmath.pi), 2: (2 * mpmath.pi) ** -2, 3: 2 * (2 * mpmath.pi) ** -3}[t]
    assert abs(archimedean_tate_integral(t, precision=25) - expected) < mpmath.mpf(10) ** -20


def test_tate_integral_refuses_small_t():
    with pytest.raises(QuadratureFailed):
        archimedean_tate_integral(0.3)
    with pytest.raises(QuadratureFailed):
        monomial_tate_integral(1, 0, 0.2)


@pytest.mark.parametrize("a,b", [(a, b) for a in range(4) for b in range(4) if a != b])
def test_angular_orthogonality(a, b):
    assert abs(monomial_tate_integral(a, b, 1.0)) < 1e-8


@pytest.mark.parametrize("a", range(4))
def test_diagonal_monomials(a):
    # x^a x̄^a = |x|^a, so the integral shifts t by a
    assert abs(monomial_tate_integral(a, a, 1.5) - tate_integral(1.5 + a)) < 1e-12


def test_monomial_schwartz():
    mpmath.mp.dps = 20
    f = MonomialSchwartz((2, 0))
    x = mpmath.mpc(0.3, 0.4)
    assert abs(f([x, 1]) - x ** 2 * mpmath.exp(-2 * mpmath.pi * (abs(x) ** 2 + 1))) < 1e-15


def test_euler_split_prime_closed_form():
    chk = unramified_euler_identity(build_field("x^2+1"), 5)
    assert abs(chk.closed_form - acb(625) / 576) < 1e-25
    assert chk.error < 1e-12


def test_euler_inert_prime_closed_form():
    chk = unramified_euler_identity(build_field("x^2+1"), 3)
    assert len(chk.primes) == 1 and chk.primes[0][0] == 9
    assert abs(chk.closed_form - acb(81) / 80) < 1e-25
    assert chk.error < 1e-12


@pytest.mark.parametrize("poly", ["x^2+1", DESK_POLY])
def test_euler_identity_over_primes(poly):
    F = build_field(poly)
    disc = int(pari.nfdisc(pari(poly)))
    for p in PRIMES:
        if disc % p == 0:
            with pytest.raises(Ramified):
                unramified_euler_identity(F, p)
        else:
            assert unramified_euler_identity(F, p).error < 1e-12


def test_euler_identity_with_character_values(gaussian):
    (psi,) = enumerate_characters(gaussian, InfinityType((-4, 0), 1, 1))
    for p in (3, 5, 13):
        chk = unramified_euler_identity(gaussian.K, p, values=lambda P: evaluate(psi, 0, P))
        assert chk.error < 1e-12
        # |ψ(𝔭)| = N𝔭^{-2}, the purity of weight -4
        for norm, v in chk.primes:
            assert abs(abs(v) - acb(norm) ** -2) < 1e-25


def test_euler_truncation_rate():
    # one inert prime: the tail after k terms is x^k/(1 - x) with x = N𝔭^{-s}
    F = build_field("x^2+1")
    for k in (3, 5, 8):
        chk = unramified_euler_identity(F, 3, terms=k)
        x = Fraction(1, 81)
        assert chk.error <= 1.01 * float(x ** k / (1 - x))
        assert chk.error >= 0.99 * float(x ** k / (1 - x))


def test_euler_wrong_value_count():
    with pytest.raises(ValueError):
        unramified_euler_identity(build_field("x^2+1"), 5, values=[1])
