import random
from dataclasses import replace

import pytest
from flint import acb, arb, fmpq_poly

from heckecrit.characters import InfinityType
from heckecrit.errors import NotTowerCompatible
from heckecrit.field_tower import DESK_POLY, GaloisClosure, build_tower
from heckecrit.periods_signs import (decompose_sigma, embedding_permutation, kappa_sign, n_sign, omega,
                                     omega_covariance, random_compatible_permutation, sigma_of_omega, u_sign,
                                     verify_omega_covariance)

ALPHA = fmpq_poly([0, 0, -1, 0, 0, 1])          # 2^{1/3} in Q[x]/(x^6 - 2x^3 + 2)


def cycle_parity(perm):
    """Parity of a permutation of range(len) from its cycle count."""
    seen, cycles = set(), 0
    for start in range(len(perm)):
        if start in seen:
            continue
        cycles += 1
        p = start
        while p not in seen:
            seen.add(p)
            p = perm[p]
    return (len(perm) - cycles) % 2


@pytest.fixture(scope="module")
def desk_types(desk):
    return [InfinityType.from_fibers(desk, [pair]) for pair in ((0, -1), (-1, 0))]


@pytest.fixture(scope="module")
def zeta8_closure(zeta8):
    return GaloisClosure(zeta8)


def test_identity_decomposition(desk):
    dec = decompose_sigma(tuple(range(6)), desk)
    assert dec.sigma1 == dec.sigma2 == tuple(range(6))
    assert dec.p0 == 0 and set(dec.p_fiber.values()) == {0}


def test_conjugation_over_rational_k0(desk_closure, desk):
    (c,) = [e for e in desk_closure.elements if e.is_conjugation]
    assert decompose_sigma(c, desk).p0 == 0


def test_cube_root_cycle(desk_closure, desk):
    # σ fixes i and multiplies 2^{1/3} by ζ3: a 3-cycle inside each fiber
    cyc = [e for e in desk_closure.elements
           if e.perm_k == (0, 1) and all(e.perm_K[p] != p for p in range(6))]
    assert len(cyc) == 2
    for e in cyc:
        dec = decompose_sigma(e, desk)
        for j in range(2):
            fiber = list(desk.fiber(j))
            local = [fiber.index(e.perm_K[p]) for p in fiber]
            assert dec.p_fiber[j] % 2 == cycle_parity(local) == 0


def test_incompatible_permutation(desk):
    with pytest.raises(NotTowerCompatible):
        embedding_permutation(desk, (0, 1, 3, 2, 4, 5))


def test_trivial_omega():
    t = build_tower("x^2+1")
    assert omega(InfinityType((-4, 0), 1, 1), tower=t).omega == 1


def test_desk_omega(desk, desk_types):
    om = omega(desk_types[0], tower=desk)
    assert om.negative == (1,)
    assert abs(abs(om.omega) - 6 * arb(3).sqrt()) < 1e-40


def test_basis_change_scales_omega(desk, desk_types):
    # replacing α by (1+i)α multiplies δ(K/k, ῑ) by ῑ(1+i) = 1 - i
    i_in_K = desk.k_in_K
    other = build_tower(DESK_POLY, basis=[fmpq_poly([1]), (1 + i_in_K) * ALPHA, ALPHA * ALPHA],
                        precision_digits=50)
    ratio = omega(desk_types[0], tower=other).omega / omega(desk_types[0], tower=desk).omega
    assert abs(ratio - acb(1, -1)) < 1e-40
    ratio = omega(desk_types[1], tower=other).omega / omega(desk_types[1], tower=desk).omega
    assert abs(ratio - acb(1, 1)) < 1e-40


def test_n_sign_identity(desk, desk_types):
    assert n_sign(tuple(range(6)), desk_types[0], tower=desk) == 0


def test_n_sign_parity_rules(desk, desk_closure, desk_types, zeta8, zeta8_closure):
    for e in desk_closure.elements:
        dec = decompose_sigma(e, desk)
        # n = 3 is odd: only the fiber terms count
        assert n_sign(e, desk_types[0], tower=desk) == dec.p_fiber[1] % 2
    typ = InfinityType.from_fibers(zeta8, [(0, -1), (0, -1)])
    for e in zeta8_closure.elements:
        dec = decompose_sigma(e, zeta8)
        assert n_sign(e, typ, tower=zeta8) == (dec.p0 + dec.p_fiber[2] + dec.p_fiber[3]) % 2


def test_sign_law_identity(desk, desk_types):
    chk = omega_covariance(tuple(range(6)), desk_types[0], tower=desk)
    assert chk.passed and chk.sign == 1 and abs(chk.ratio - 1) < 1e-40


def test_sign_law_all_closure_elements(desk100, desk_types):
    closure = GaloisClosure(desk100, d=100)
    for typ in desk_types:
        for e in closure.elements:
            chk = omega_covariance(e, typ, tower=desk100, precision=100)
            assert chk.discrepancy < 1e-25, (e.label, chk)


def test_sign_law_on_zeta8(zeta8, zeta8_closure):
    for pairs in ([(0, -1), (0, -1)], [(-1, 0), (0, -1)], [(0, -1), (-1, 0)]):
        typ = InfinityType.from_fibers(zeta8, pairs)
        for e in zeta8_closure.elements:
            assert verify_omega_covariance(e, typ, tower=zeta8)


def test_corrupted_fiber_parity_fails(desk, desk_closure, desk_types):
    failures = 0
    for e in desk_closure.elements:
        dec = decompose_sigma(e, desk)
        bad = replace(dec, p_fiber={j: p + 1 for j, p in dec.p_fiber.items()})
        failures += not omega_covariance(e, desk_types[0], tower=desk, decomposition=bad).passed
    assert failures > 0


def test_sigma_of_omega_for_conjugation(desk, desk_closure, desk_types):
    (c,) = [e for e in desk_closure.elements if e.is_conjugation]
    for typ in desk_types:
        assert abs(sigma_of_omega(c, typ, tower=desk) - omega(typ, tower=desk).omega.conjugate()) < 1e-40


def test_kappa_and_u_identity(desk, desk_types):
    ident = tuple(range(6))
    assert kappa_sign(ident, desk) == 1 and u_sign(ident, desk_types[0], tower=desk) == 1


def test_product_law_random(desk, desk_types):
    rng = random.Random(7)
    for _ in range(1000):
        s = random_compatible_permutation(desk, rng)
        typ = desk_types[rng.randrange(2)]
        assert kappa_sign(s, desk) * u_sign(s, typ, tower=desk) == (-1) ** n_sign(s, typ, tower=desk)


def test_kappa_with_odd_p0(zeta8, zeta8_closure):
    odd = [e for e in zeta8_closure.elements if decompose_sigma(e, zeta8).p0 == 1]
    assert odd
    assert all(kappa_sign(e, zeta8) == -1 for e in odd)


def test_seed_order(zeta8):
    flipped = build_tower("x^8+6*x^4+1", precision_digits=50, seed_order=(1, 0))
    typ = InfinityType.from_fibers(zeta8, [(0, -1), (0, -1)])
    # fixed root of disc(k0): Ω does not see the seed order
    assert abs(omega(typ, tower=flipped).omega - omega(typ, tower=zeta8).omega) < 1e-40
    # ordered determinant: sign (-1)^{(n-1)·parity} with n = 2 and an odd seed permutation
    a = omega(typ, tower=zeta8, normalization="ordered").omega
    b = omega(typ, tower=flipped, normalization="ordered").omega
    assert abs(a + b) < 1e-40
