from collections import Counter

import pytest

from heckecrit._arith import pari
from heckecrit.errors import ModulusTooLarge, NotCoprime, NotTotallyImaginary
from heckecrit.field_tower import build_field
from heckecrit.ideals import (Ideal, enumerate_ideals, factor_rational_prime, ideal_from_pari,
                              ray_class_group)


@pytest.fixture(scope="module")
def Qi():
    return build_field("x^2+1")


def gaussian_norm_counts(X):
    """Ideals of Z[i] by norm: one generator a + bi with a > 0, b ≥ 0 per ideal."""
    c = Counter()
    for a in range(1, int(X ** 0.5) + 1):
        for b in range(0, int(X ** 0.5) + 1):
            if a * a + b * b <= X:
                c[a * a + b * b] += 1
    c[1] = 1
    return c


def test_splitting_types(Qi):
    split = factor_rational_prime(Qi, 5)
    assert [(P.residue_degree, e) for P, e in split] == [(1, 1), (1, 1)]
    (inert,) = factor_rational_prime(Qi, 3)
    assert inert[0].residue_degree == 2 and inert[1] == 1
    (ram,) = factor_rational_prime(Qi, 2)
    assert (ram[0].residue_degree, ram[1]) == (1, 2)


def test_small_ideals(Qi):
    assert [I.norm for I in enumerate_ideals(Qi, 5)] == [1, 2, 4, 5, 5]
    assert [I.norm for I in enumerate_ideals(build_field("x^6-2*x^3+2"), 1)] == [1]


def test_ideal_count_matches_lattice_points(Qi):
    ours = Counter(I.norm for I in enumerate_ideals(Qi, 100))
    assert ours == gaussian_norm_counts(100)
    assert sum(ours.values()) == sum(gaussian_norm_counts(100).values())


def test_ideals_are_distinct(Qi):
    ideals = list(enumerate_ideals(Qi, 200))
    assert len(set(ideals)) == len(ideals)


def test_round_trip_through_pari(Qi):
    I = ideal_from_pari(Qi, pari.idealhnf(Qi.nf, pari("x+2")))
    assert I.norm == 5 and len(I.factorization) == 1
    J = ideal_from_pari(Qi, I.to_pari(Qi))
    assert I == J


def test_class_group_of_gaussian_field(Qi):
    G = ray_class_group(Qi)
    assert G.order == 1
    assert G.class_index(Ideal.unit()) == 0


def brute_force_ray_order_mod_3():
    residues = [(a, b) for a in range(3) for b in range(3) if (a * a + b * b) % 3]
    units = {(1, 0), (2, 0), (0, 1), (0, 2)}
    return len(residues) // len(units)


def test_ray_class_group_mod_3(Qi):
    G = ray_class_group(Qi, ideal_from_pari(Qi, pari.idealhnf(Qi.nf, 3)))
    assert G.order == brute_force_ray_order_mod_3() == 2
    assert G.class_index(Ideal.unit()) == 0
    with pytest.raises(NotCoprime):
        G.log(G.modulus)


def test_class_group_of_minus_five():
    G = ray_class_group(build_field("x^2+5"))
    assert G.cyc == (2,)
    # the non-principal class is represented by a prime above 2
    assert G.class_representatives[1].norm == 2


def test_real_field_rejected():
    with pytest.raises(NotTotallyImaginary):
        ray_class_group(build_field("x^2-2"))


def test_modulus_size_guard(Qi):
    with pytest.raises(ModulusTooLarge):
        ray_class_group(Qi, ideal_from_pari(Qi, pari.idealhnf(Qi.nf, 101)))
