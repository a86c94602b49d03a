"""Period factor Ω(ρχ) and the permutation signs attached to σ ∈ Aut(C).

A permutation σ of E_K is stored through the tower order: ``perm_K[p]`` is the
position of σ∘τ_p.  Only parities of permutation numbers are ever used, and
they are taken as inversion counts.
"""

import random
from dataclasses import dataclass, field

from flint import acb, acb_mat, arb

from ._arith import GUARD_DIGITS, digits
from .characters import InfinityType, check_critical, critical_type
from .errors import NotCritical, NotTowerCompatible
from .field_tower import delta_k0, k0_basis_determinant, relative_period_matrix


@dataclass(frozen=True)
class EmbeddingPermutation:
    perm_K: tuple
    perm_k: tuple
    perm_k0: tuple
    label: object = None
    is_conjugation: bool = False

    def __mul__(self, other):
        """self ∘ other."""
        return EmbeddingPermutation(tuple(self.perm_K[q] for q in other.perm_K),
                                    tuple(self.perm_k[q] for q in other.perm_k),
                                    tuple(self.perm_k0[q] for q in other.perm_k0))


@dataclass(frozen=True)
class SigmaDecomposition:
    sigma: EmbeddingPermutation
    sigma1: tuple
    sigma2: tuple
    p0: int
    p_fiber: dict = field(hash=False)     # ι (position in E_k) -> p(σ, ι)


@dataclass(frozen=True)
class PeriodFactor:
    omega: acb
    delta_k0_power: acb
    deltas: tuple                         # ((ι, δ(K/k, ι)), ...) over E_k^-
    negative: tuple

    def __post_init__(self):
        if self.omega == 0:
            raise ValueError("Ω vanishes")


def inversions(perm):
    return sum(1 for i in range(len(perm)) for j in range(i + 1, len(perm)) if perm[i] > perm[j])


def embedding_permutation(tower, sigma):
    """Validate a permutation of E_K (tuple, ClosureElement or EmbeddingPermutation)."""
    perm_K = tuple(getattr(sigma, "perm_K", sigma))
    n, r = tower.n, tower.r
    if sorted(perm_K) != list(range(2 * r * n)):
        raise NotTowerCompatible(f"{perm_K} is not a permutation of E_K")
    perm_k = []
    for j in range(2 * r):
        images = {perm_K[p] // n for p in tower.fiber(j)}
        if len(images) != 1:
            raise NotTowerCompatible(f"σ splits the fiber over ι_{j}")
        perm_k.append(images.pop())
    perm_k0 = []
    for c in range(r):
        images = {perm_k[j] % r for j in (c, c + r)}
        if len(images) != 1:
            raise NotTowerCompatible(f"σ does not descend to E_k0 at position {c}")
        perm_k0.append(images.pop())
    if any(perm_k[tower.conj_k(j)] != tower.conj_k(perm_k[j]) for j in range(2 * r)):
        raise NotTowerCompatible("σ does not commute with conjugation on E_k")
    return EmbeddingPermutation(perm_K, tuple(perm_k), tuple(perm_k0),
                                getattr(sigma, "label", None), getattr(sigma, "is_conjugation", False))


def closure_permutations(closure):
    return [embedding_permutation(closure.tower, e) for e in closure.elements]


def decompose_sigma(sigma, tower):
    """σ = σ₂∘σ₁ with σ₁ order preserving between fibers and σ₂ fiberwise.

    p(σ, ι) is the parity datum of σ₂ on the fiber E_K(σ∘ι): it compares the
    bijection E_K(ι) → E_K(σ∘ι), τ ↦ σ∘τ, with the order-preserving one.
    """
    s = sigma if isinstance(sigma, EmbeddingPermutation) else embedding_permutation(tower, sigma)
    n = tower.n
    sigma1 = tuple(s.perm_k[p // n] * n + p % n for p in range(len(s.perm_K)))
    inv1 = [None] * len(sigma1)
    for p, q in enumerate(sigma1):
        inv1[q] = p
    sigma2 = tuple(s.perm_K[inv1[q]] for q in range(len(sigma1)))
    p_fiber = {}
    for j in range(2 * tower.r):
        target = tower.fiber(s.perm_k[j])
        p_fiber[j] = inversions([sigma2[q] for q in target])
    return SigmaDecomposition(s, sigma1, sigma2, inversions(s.perm_k0), p_fiber)


# -- Ω ------------------------------------------------------------------------------

def _type_of(chi, rho):
    if isinstance(chi, InfinityType):
        if not critical_type(chi):
            raise NotCritical(f"{chi} is not critical")
        return chi
    if not check_critical(chi).is_critical:
        raise NotCritical(f"{chi} is not critical")
    return chi.avatar_type(chi.base_rho if rho is None else rho)


def negative_set(chi, rho=None):
    """E_k^-(ρχ̌): positions ι with ρχ̌_ι ≤ -n."""
    typ = _type_of(chi, rho)
    tk = typ.restricted()
    return tuple(j for j in range(len(tk)) if tk[j] <= -typ.n)


def _delta_k0_sign(tower, d):
    """ε = ±1 with δ(k0) = ε·det[ι'_i(ω_j)]."""
    with digits(d + GUARD_DIGITS):
        q = delta_k0(tower, d) / k0_basis_determinant(tower, d)
    return 1 if q.real > 0 else -1


def omega(chi, rho=None, tower=None, d=None, normalization="fixed"):
    """Ω(ρχ) = δ(k0)^{n-1}·∏_{ι ∈ E_k^-(ρχ̌)} δ(K/k, ι).

    ``normalization="ordered"`` replaces the fixed root δ(k0) by det[ι'_i(ω_j)]
    taken in the tower order on E_k0, which changes sign with the seed order.
    """
    tower = tower or chi.tower
    d = d or tower.precision_digits
    neg = negative_set(chi, rho)
    with digits(d + GUARD_DIGITS):
        base = delta_k0(tower, d) if normalization == "fixed" else k0_basis_determinant(tower, d)
        dk = base ** (tower.n - 1)
        deltas = tuple((j, relative_period_matrix(tower, j, d).det()) for j in neg)
        val = dk
        for _, v in deltas:
            val *= v
    return PeriodFactor(val, dk, deltas, neg)


def sigma_of_omega(sigma, chi, rho=None, tower=None, d=None):
    """σ(Ω(ρχ)), with σ acting on each determinant through its rows."""
    tower = tower or chi.tower
    d = d or tower.precision_digits
    s = embedding_permutation(tower, sigma)
    neg = negative_set(chi, rho)
    with digits(d + GUARD_DIGITS):
        M = tower.k0.embedding_matrix(d)
        rows = [[M[tower.order_k0[s.perm_k0[c]], j] for j in range(tower.r)] for c in range(tower.r)]
        val = (_delta_k0_sign(tower, d) * acb_mat(rows).det()) ** (tower.n - 1)
        for j in neg:
            val *= relative_period_matrix(tower, j, d, [s.perm_K[p] for p in tower.fiber(j)]).det()
    return val


def _sigma_type(chi, rho, s):
    return _type_of(chi, rho).permuted(s.perm_K)


def n_sign(sigma, chi, rho=None, tower=None, decomposition=None):
    """n(σ, ρχ) mod 2."""
    tower = tower or chi.tower
    dec = decomposition or decompose_sigma(sigma, tower)
    neg = negative_set(chi, rho)
    return ((tower.n - 1) * dec.p0 + sum(dec.p_fiber[j] for j in neg)) % 2


def kappa_sign(sigma, tower, decomposition=None):
    dec = decomposition or decompose_sigma(sigma, tower)
    return -1 if (tower.n - 1) * dec.p0 % 2 else 1


def u_sign(sigma, chi, rho=None, tower=None, decomposition=None):
    tower = tower or chi.tower
    dec = decomposition or decompose_sigma(sigma, tower)
    return -1 if sum(dec.p_fiber[j] for j in negative_set(chi, rho)) % 2 else 1


@dataclass(frozen=True)
class CovarianceCheck:
    sigma: EmbeddingPermutation
    ratio: acb
    sign: int
    discrepancy: float
    passed: bool


def omega_covariance(sigma, chi, rho=None, tower=None, precision=None, decomposition=None):
    """Compare σ(Ω(ρχ))/Ω(σ∘ρχ) with (-1)^{n(σ,ρχ)}."""
    tower = tower or chi.tower
    d = precision or tower.precision_digits
    s = embedding_permutation(tower, sigma)
    dec = decomposition or decompose_sigma(s, tower)
    top = sigma_of_omega(s, chi, rho, tower, d)
    bottom = omega(_sigma_type(chi, rho, s), tower=tower, d=d).omega
    sign = -1 if n_sign(s, chi, rho, tower, dec) else 1
    with digits(d + GUARD_DIGITS):
        ratio = top / bottom
        disc = abs(ratio - sign)
    tol = arb(10) ** (10 - d)
    return CovarianceCheck(s, ratio, sign, float(disc.upper()), bool(disc < tol))


def verify_omega_covariance(sigma, chi, rho=None, tower=None, precision=None, decomposition=None):
    return omega_covariance(sigma, chi, rho, tower, precision, decomposition).passed


def random_compatible_permutation(tower, rng=None):
    """A uniformly random permutation of E_K that respects the tower and conjugation on k."""
    rng = rng or random.Random()
    n, r = tower.n, tower.r
    base = list(range(r))
    rng.shuffle(base)
    perm_k = [None] * (2 * r)
    for c in range(r):
        flip = rng.random() < 0.5
        perm_k[c] = base[c] + (r if flip else 0)
        perm_k[c + r] = base[c] + (0 if flip else r)
    perm_K = [None] * (2 * r * n)
    for j in range(2 * r):
        inner = list(range(n))
        rng.shuffle(inner)
        for i in range(n):
            perm_K[j * n + i] = perm_k[j] * n + inner[i]
    return embedding_permutation(tower, tuple(perm_K))
