"""Weight index sets Λ(ρχ), Υ(ρχ), Υ_n and the explicit vectors u_λ, φ_β.

Everything is driven by the restricted type χ̌ = (χ̌_ι) on E_k and n = [K:k].
An index such as λ is a tuple of rows, one per ι in the tower order on E_k;
indices on E_k^+ only (β, ν) are dicts keyed by the position of ι.
"""

from dataclasses import dataclass
from itertools import product
from math import comb

from flint import acb, acb_mat, arb

from ._arith import GUARD_DIGITS, digits
from .characters import InfinityType
from .errors import IndexMismatch, NotCritical, SingularInput, ZeroBottomRow


@dataclass(frozen=True)
class WeightData:
    chi_check: tuple        # χ̌_ι in the tower order on E_k
    n: int

    def __post_init__(self):
        if len(self.chi_check) % 2:
            raise ValueError("E_k has even size")
        for j in range(len(self.chi_check)):
            a, b = self.chi_check[j], self.chi_check[self.conj(j)]
            if not (min(a, b) <= -self.n and max(a, b) >= 0):
                raise NotCritical(f"χ̌ = {self.chi_check} is not critical for n = {self.n}")

    @classmethod
    def of(cls, chi, rho=None, n=None):
        """From a character (and ρ), an infinity type over K, or a bare χ̌ with n."""
        if isinstance(chi, WeightData):
            return chi
        if isinstance(chi, InfinityType):
            return cls(tuple(chi.restricted().exponents), chi.n)
        if hasattr(chi, "avatar_type"):
            typ = chi.avatar_type(chi.base_rho if rho is None else rho)
            return cls(tuple(typ.restricted().exponents), typ.n)
        if n is None:
            raise ValueError("a bare χ̌ needs n")
        return cls(tuple(chi), n)

    @property
    def r(self):
        return len(self.chi_check) // 2

    def conj(self, j):
        return (j + self.r) % (2 * self.r)

    @property
    def plus(self):
        return tuple(j for j, c in enumerate(self.chi_check) if c >= 0)

    @property
    def minus(self):
        return tuple(j for j, c in enumerate(self.chi_check) if c <= -self.n)

    def lambda_row_sum(self, j):
        c = self.chi_check[j]
        return c if c >= 0 else -c - self.n

    def upsilon_row_sum(self, j):
        return self.chi_check[j] - self.chi_check[self.conj(j)]


def compositions(m, n):
    """All tuples of n non-negative integers summing to m, in lexicographic order."""
    if n == 1:
        yield (m,)
        return
    for first in range(m, -1, -1):
        for rest in compositions(m - first, n - 1):
            yield (first,) + rest


# -- Λ -------------------------------------------------------------------------------

def enumerate_lambda(chi, rho=None, n=None):
    w = WeightData.of(chi, rho, n)
    rows = [list(compositions(w.lambda_row_sum(j), w.n)) for j in range(2 * w.r)]
    return [tuple(choice) for choice in product(*rows)]


def lambda_cardinality(chi, rho=None, n=None):
    """Stars and bars: ∏_ι C(m_ι + n - 1, n - 1)."""
    w = WeightData.of(chi, rho, n)
    out = 1
    for j in range(2 * w.r):
        out *= comb(w.lambda_row_sum(j) + w.n - 1, w.n - 1)
    return out


def lambda_circ(chi, rho=None, n=None):
    """The element of Λ with constant rows, or None if some row sum is not divisible by n."""
    w = WeightData.of(chi, rho, n)
    sums = [w.lambda_row_sum(j) for j in range(2 * w.r)]
    if any(m % w.n for m in sums):
        return None
    return tuple((m // w.n,) * w.n for m in sums)


def is_in_lambda(lam, w):
    return (len(lam) == 2 * w.r and all(len(row) == w.n and min(row) >= 0 for row in lam)
            and all(sum(lam[j]) == w.lambda_row_sum(j) for j in range(2 * w.r)))


# -- Υ and Υ_n -------------------------------------------------------------------------

def enumerate_upsilon(chi, rho=None, n=None):
    w = WeightData.of(chi, rho, n)
    rows = [list(compositions(w.upsilon_row_sum(j), w.n)) for j in w.plus]
    return [dict(zip(w.plus, choice)) for choice in product(*rows)]


def enumerate_upsilon_n(chi, rho=None, n=None):
    w = WeightData.of(chi, rho, n)
    rows = [list(compositions(w.n, w.n)) for _ in w.plus]
    return [dict(zip(w.plus, choice)) for choice in product(*rows)]


def nu_circ(w):
    return {j: (1,) * w.n for j in w.plus}


def nu_tilde(w):
    return {j: (0,) * (w.n - 1) + (w.n,) for j in w.plus}


def is_in_upsilon(beta, w):
    return (set(beta) == set(w.plus) and all(len(beta[j]) == w.n and min(beta[j]) >= 0 for j in beta)
            and all(sum(beta[j]) == w.upsilon_row_sum(j) for j in beta))


def beta_map(nu, lam, chi, rho=None, n=None):
    """β_{ν,λ}: β^ι_j = ν^ι_j + λ^ι_j + λ^ῑ_j for ι ∈ E_k^+."""
    w = WeightData.of(chi, rho, n)
    if set(nu) != set(w.plus) or any(len(v) != w.n or sum(v) != w.n or min(v) < 0 for v in nu.values()):
        raise IndexMismatch(f"ν = {nu} is not in Υ_n")
    if not is_in_lambda(lam, w):
        raise IndexMismatch(f"λ = {lam} is not in Λ")
    return {j: tuple(a + b + c for a, b, c in zip(nu[j], lam[j], lam[w.conj(j)])) for j in w.plus}


def beta_circ(chi, rho=None, n=None):
    """β_{ν∘,λ∘}."""
    w = WeightData.of(chi, rho, n)
    lam = lambda_circ(w)
    if lam is None:
        raise IndexMismatch("λ∘ does not exist")
    return beta_map(nu_circ(w), lam, w)


# -- the vectors -------------------------------------------------------------------------

def _mat(g):
    return g if isinstance(g, acb_mat) else acb_mat([[acb(x) for x in row] for row in g])


def _minor(M, col):
    """det_col: delete the last row and the given column."""
    n = M.nrows()
    if n == 1:
        return acb(1)
    return acb_mat([[M[i, j] for j in range(n) if j != col] for i in range(n - 1)]).det()


def evaluate_u_lambda(lam, g, chi, rho=None, n=None, precision=30):
    """u_λ(g) for g = (g^ι) over E_k in the tower order."""
    w = WeightData.of(chi, rho, n)
    if not is_in_lambda(lam, w):
        raise IndexMismatch(f"λ = {lam} is not in Λ")
    if len(g) != 2 * w.r:
        raise IndexMismatch(f"need {2 * w.r} matrices, got {len(g)}")
    with digits(precision + GUARD_DIGITS):
        val = acb(1)
        for j in range(2 * w.r):
            M = _mat(g[j])
            det = M.det()
            if not abs(det) > arb(10) ** (-precision):
                raise SingularInput(f"g^ι at position {j} is singular")
            if j in w.plus:
                for c in range(w.n):
                    val *= M[0, c] ** lam[j][c]
            else:
                val /= det
                for c in range(w.n):
                    val *= (_minor(M, c) / det) ** lam[j][c]
    return val


def u_lambda_weight(lam, t, chi, rho=None, n=None, side="right", precision=30):
    """Predicted factor u_λ(g·t)/u_λ(g) (or t·g for side="left") for diagonal t = (t^ι)."""
    w = WeightData.of(chi, rho, n)
    with digits(precision + GUARD_DIGITS):
        val = acb(1)
        for j in range(2 * w.r):
            tj = [acb(x) for x in t[j]]
            full = acb(1)
            for x in tj:
                full *= x
            m = sum(lam[j])
            if side == "right":
                if j in w.plus:
                    for c in range(w.n):
                        val *= tj[c] ** lam[j][c]
                else:
                    for c in range(w.n):
                        val *= tj[c] ** (-1 - lam[j][c])
            else:
                if j in w.plus:
                    val *= tj[0] ** m
                else:
                    val *= tj[-1] ** (-m) / full
    return val


def evaluate_phi_beta(beta, g, chi, rho=None, n=None, precision=30):
    """φ_β(g) for g = {g^v} keyed like β (positions of ι_v ∈ E_k^+)."""
    w = WeightData.of(chi, rho, n)
    if not is_in_upsilon(beta, w):
        raise IndexMismatch(f"β = {beta} violates the row sums of Υ")
    with digits(precision + GUARD_DIGITS):
        val = acb(1)
        for j in w.plus:
            M = _mat(g[j])
            bottom = [M[w.n - 1, c] for c in range(w.n)]
            if all(b == 0 for b in bottom):
                raise ZeroBottomRow(f"bottom row of g^v at position {j} vanishes")
            norm = sum((abs(b) ** 2 for b in bottom), arb(0))
            for b, e in zip(bottom, beta[j]):
                val *= b ** e
            val *= acb(norm) ** w.chi_check[w.conj(j)]
    return val
