import pytest
from flint import acb, arb, fmpq_poly

from heckecrit._arith import pari
from heckecrit.errors import InconsistentTower, NoCMSubfield, NonMonic, PrecisionTooLow, ReduciblePolynomial
from heckecrit.field_tower import (DESK_POLY, build_field, build_tower, complex_embeddings,
                                   delta_k0, delta_relative, desk_tower, maximal_cm_subfield)


def resultant_disc(poly):
    """(-1)^{n(n-1)/2} Res(f, f') for monic f."""
    f = pari(poly)
    n = int(f.poldegree())
    return int((-1) ** (n * (n - 1) // 2) * pari.polresultant(f, f.deriv()))


@pytest.mark.parametrize("poly", ["x^2+1", "x^3-2"])
def test_discriminant_matches_resultant(poly):
    # both are monogenic, so disc of the field equals disc of the polynomial
    F = build_field(poly)
    assert F.discriminant == resultant_disc(poly)
    assert (F.degree, F.discriminant) == {"x^2+1": (2, -4), "x^3-2": (3, -108)}[poly]


def test_rational_field():
    F = build_field("x-1")
    assert (F.degree, F.discriminant) == (1, 1)
    (e,) = complex_embeddings(F, 30)
    assert e.root == 1


@pytest.mark.parametrize("poly,err", [("2*x^2+1", NonMonic), ("x^2-1", ReduciblePolynomial)])
def test_bad_polynomials(poly, err):
    with pytest.raises(err):
        build_field(poly)


def test_embeddings_of_gaussian_field():
    roots = [e.root for e in complex_embeddings(build_field("x^2+1"), 30)]
    assert len(roots) == 2
    assert any(abs(z - acb(0, 1)) < 1e-30 for z in roots)
    assert any(abs(z - acb(0, -1)) < 1e-30 for z in roots)


def test_embeddings_of_cube_root_two():
    roots = [e.root for e in complex_embeddings(build_field("x^3-2"), 40)]
    c = arb(2).root(3)
    zeta = (2 * arb.pi() * acb(0, 1) / 3).exp()
    for target in (acb(c), zeta * c, zeta ** 2 * c):
        assert sum(abs(z - target) < 1e-35 for z in roots) == 1


def test_embedding_precision_floor():
    with pytest.raises(PrecisionTooLow):
        complex_embeddings(build_field("x^2+1"), 20)


def test_maximal_cm_subfield():
    assert maximal_cm_subfield(build_field("x^4+1")).defining_polynomial == (1, 0, 0, 0, 1)
    assert maximal_cm_subfield(build_field(DESK_POLY)).defining_polynomial == (1, 0, 1)
    with pytest.raises(NoCMSubfield):
        maximal_cm_subfield(build_field("x^2-2"))


def test_gaussian_order():
    t = build_tower("x^2+1")
    assert t.n == 1 and t.r == 1
    assert t.roots_k()[0].imag > 0 and t.roots_k()[1].imag < 0


def test_desk_fibers_and_conjugation(desk):
    assert (desk.n, desk.r) == (3, 1)
    assert [len(desk.fiber(j)) for j in range(2)] == [3, 3]
    rK = desk.roots_K()
    for i in range(3):
        assert abs(rK[3 + i] - rK[i].conjugate()) < 1e-40


@pytest.mark.parametrize("poly,value", [("x^4+x^3+x^2+x+1", 5), ("x^4+1", 8), ("x^2+1", 1)])
def test_delta_k0(poly, value):
    t = build_tower(poly)
    assert abs(delta_k0(t) - arb(value).sqrt()) < 1e-40


def test_delta_relative_trivial_extension():
    t = build_tower("x^2+1")
    assert delta_relative(t, 0) == 1


def test_desk_delta(desk):
    # oracle: the 3x3 Vandermonde-type determinant built directly from 2^{1/3}·ζ3^j
    c = arb(2).root(3)
    zeta = (2 * arb.pi() * acb(0, 1) / 3).exp()
    vals = [acb(c) * zeta ** j for j in range(3)]
    vdm = 1
    for a in range(3):
        for b in range(a + 1, 3):
            vdm *= vals[b] - vals[a]
    six_root3 = 6 * arb(3).sqrt()
    assert abs(abs(vdm) - six_root3) < 1e-40
    for j in range(2):
        assert abs(abs(delta_relative(desk, j)) - six_root3) < 1e-40


def test_basis_swap_negates_delta(desk):
    alpha = fmpq_poly([0, 0, -1, 0, 0, 1])
    swapped = build_tower(DESK_POLY, basis=[alpha, fmpq_poly([1]), alpha * alpha], precision_digits=50)
    for j in range(2):
        assert abs(delta_relative(swapped, j) + delta_relative(desk, j)) < 1e-40


def test_power_basis_gives_other_period():
    t = build_tower(DESK_POLY, precision_digits=50)
    assert abs(abs(delta_relative(t, 0)) - 3 * arb(6).sqrt()) < 1e-40


def test_seed_order_validation(zeta8):
    with pytest.raises(InconsistentTower):
        build_tower("x^8+6*x^4+1", seed_order=(0, 0))


def test_desk_closure(desk_closure):
    assert desk_closure.degree == 12
    assert len(desk_closure.elements) == 12
    assert desk_closure.elements[0].perm_K == tuple(range(6))
    assert sum(e.is_conjugation for e in desk_closure.elements) == 1


def test_tower_is_rebuilt_not_mutated():
    a = desk_tower(40)
    b = desk_tower(40, seed_order=(0,))
    assert a.order_K == b.order_K and a is not b
