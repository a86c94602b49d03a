"""Certification that L(0,ρχ)/(Ω(ρχ)·L(0,ρχ̌)) comes from a single element of E.

The quotient is computed for every embedding ρ of E, the tuple is solved for
rational coordinates in the power basis of E, and the candidate is re-embedded
to measure residuals.  Galois covariance is checked for every permutation of
E_K induced by the Galois closure.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from flint import acb, acb_mat, arb

from ._arith import GUARD_DIGITS, digits, gp, pari
from .characters import check_critical, restrict_to_k
from .errors import CovarianceViolation, HeightExceeded, NotCritical, RestrictionLValueZero
from .field_tower import GaloisClosure, NumberField
from .lfunction import estimate_cutoff, evaluate_Lf, linf_ratio_exact
from .periods_signs import (decompose_sigma, embedding_permutation, n_sign, omega,
                            sigma_of_omega)

TRIVIAL_QUOTIENT = 1          # the quotient when K = k
DEFAULT_HEIGHT = 10 ** 6


@dataclass
class ETuple:
    values: dict                  # canonical index ρ of E -> acb
    precision_digits: int
    l_chi: dict = field(default_factory=dict)       # ρ -> LValueResult over K
    l_check: dict = field(default_factory=dict)     # ρ -> LValueResult over k
    omega: dict = field(default_factory=dict)       # ρ -> PeriodFactor
    linf_ratio: Fraction = Fraction(1)
    condition: dict = field(default_factory=dict)   # ρ -> 1/|L_f(0, ρχ̌)|
    trivial: bool = False

    def l_ratio(self, rho):
        """L(0,ρχ)/L(0,ρχ̌) including the archimedean factors."""
        with digits(self.precision_digits + GUARD_DIGITS):
            r = self.linf_ratio
            return self.l_chi[rho].value / self.l_check[rho].value * r.numerator / r.denominator


@dataclass
class AlgebraicityCertificate:
    candidate: tuple              # rational coordinates on 1, θ, θ², ...
    residuals: dict               # ρ -> float
    minimal_polynomial: tuple     # integer coefficients, ascending
    passed: bool
    height_bound: int
    field_polynomial: str = ""

    def candidate_str(self):
        terms = []
        for i, c in enumerate(self.candidate):
            if c:
                terms.append(f"{c}" if i == 0 else f"({c})*x^{i}")
        return " + ".join(terms) or "0"


def _default_cutoff(F, modulus, typ, D, scale):
    return int(scale * 2 * estimate_cutoff(F, modulus, typ, 0, D))


def main_quotient(chi, tower=None, precision=50, cutoff_scale=1, aux_point=1.2, cutoff=None):
    """(L_f(0,ρχ)/L_f(0,ρχ̌))·L_∞-ratio/Ω(ρχ) for every ρ ∈ E_E.

    ``cutoff`` fixes the number of terms over K; otherwise twice the estimate
    is used, times ``cutoff_scale`` (which also scales the series over k).
    """
    tower = tower or chi.tower
    D = int(precision)
    rhos = chi.rho_list()
    if tower.n == 1:
        return ETuple({r: acb(TRIVIAL_QUOTIENT) for r in rhos}, D, trivial=True)
    if not check_critical(chi).is_critical:
        raise NotCritical(f"{chi} is not critical")
    chk = restrict_to_k(chi)
    linf = linf_ratio_exact(chi)
    X_K = cutoff or _default_cutoff(tower.K, chi.modulus, chi.infinity_type, D, cutoff_scale)
    X_k = _default_cutoff(tower.k, chk.modulus, chk.infinity_type, D, cutoff_scale)
    out = ETuple({}, D, linf_ratio=linf)
    for rho in rhos:
        a = evaluate_Lf(chi, rho, 0, D, X_K, aux_point)
        b = evaluate_Lf(chk, rho, 0, D, X_k, aux_point)
        with digits(D + GUARD_DIGITS):
            if not abs(b.value) > arb(10) ** (10 - D):
                raise RestrictionLValueZero(f"L_f(0, ρχ̌) vanishes numerically at ρ = {rho}")
            om = omega(chi, rho, tower, D)
            val = a.value / b.value * linf.numerator / linf.denominator / om.omega
            out.condition[rho] = float((1 / abs(b.value)).mid())
        out.values[rho] = val
        out.l_chi[rho], out.l_check[rho], out.omega[rho] = a, b, om
    return out


# -- recognition ---------------------------------------------------------------------

def _field_of(E):
    return E.field if hasattr(E, "field") and isinstance(E.field, NumberField) else E


def _to_fraction(x, D, height):
    s = x.mid().str(D + 5, radius=False)
    return Fraction(s).limit_denominator(height)


def recognize_in_E(t, E, height_bound=DEFAULT_HEIGHT, raise_on_failure=True):
    """Rational coordinates c with Σ c_i ρ(θ)^i = t_ρ for every ρ, within 10^(15-D)."""
    F = _field_of(E)
    D = t.precision_digits
    deg = F.degree
    if sorted(t.values) != list(range(deg)):
        raise ValueError(f"need values at all {deg} embeddings of E")
    rts = F.roots(D)
    with digits(D + GUARD_DIGITS):
        V = acb_mat([[rts[r] ** i for i in range(deg)] for r in range(deg)])
        rhs = acb_mat([[t.values[r]] for r in range(deg)])
        sol = V.solve(rhs)
        coords, ok = [], True
        for i in range(deg):
            c = sol[i, 0]
            if not abs(c.imag) < arb(10) ** (15 - D) * max(1, abs(c).mid()):
                ok = False
            coords.append(_to_fraction(c.real, D, height_bound))
        residuals = {}
        for r in range(deg):
            z = acb(0)
            for i, c in enumerate(coords):
                z += acb(c.numerator) / c.denominator * rts[r] ** i
            residuals[r] = float(abs(z - t.values[r]).upper())
    tol = 10.0 ** (15 - D)
    ok = ok and all(v < tol for v in residuals.values())
    mp = _minimal_polynomial(coords, F)
    cert = AlgebraicityCertificate(tuple(coords), residuals, mp, ok, height_bound, str(F.poly))
    if not ok and raise_on_failure:
        worst = max(residuals.values())
        raise HeightExceeded(f"no element of height ≤ {height_bound} fits (worst residual {worst:.3e})")
    return cert


def _minimal_polynomial(coords, F):
    terms = " + ".join(f"({c})*x^{i}" for i, c in enumerate(coords)) or "0"
    mp = gp("minpoly")(pari.Mod(pari(terms), F.pari_poly()))
    mp = mp / pari.content(mp)
    if mp.pollead() < 0:
        mp = -mp
    return tuple(int(c) for c in pari.Vecrev(mp))


def algdep_minimal_polynomial(z, degree, digits_):
    """Integer relation fallback: PARI algdep on a single complex value."""
    old = pari.set_real_precision(digits_)
    try:
        with digits(digits_ + GUARD_DIGITS):
            re = z.real.mid().str(digits_, radius=False)
            im = z.imag.mid().str(digits_, radius=False)
        p = pari.algdep(pari(f"{re} + ({im})*I"), degree)
        if p.pollead() < 0:
            p = -p
        return tuple(int(c) for c in pari.Vecrev(p))
    finally:
        pari.set_real_precision(old)


# -- Galois covariance ------------------------------------------------------------------

@dataclass
class CovarianceRow:
    label: object
    rho: int
    sigma_rho: int
    sign: int
    kind: str                     # "direct" (complex conjugation) or "certified"
    discrepancy: float
    passed: bool


@dataclass
class CovarianceReport:
    rows: list
    passed: bool
    tolerance: float


def e_permutations(chi, tower=None, d=None):
    """Closure elements with their action on E_K and on the canonical embeddings of E."""
    tower = tower or chi.tower
    E = chi.coefficients.field
    closure = GaloisClosure(tower, extra=(E,), d=d)
    return [(e, e.perm_extra[0]) for e in closure.elements]


def verify_galois_covariance(chi, t, certificate=None, tower=None, sigmas=None, precision=None,
                             apply_sign=True, raise_on_failure=True):
    """σ(L-ratio_ρ) = (-1)^{n(σ,ρχ)} L-ratio_{σ∘ρ}, and the Ω-normalized tuple is σ-covariant.

    Complex conjugation is checked directly on the computed values.  Every
    other σ is checked through the certified element e: σ(L-ratio_ρ) is
    (σ∘ρ)(e)·σ(Ω(ρχ)), with σ acting on Ω through the rows of its determinants.
    """
    tower = tower or chi.tower
    D = precision or t.precision_digits
    tol = 10.0 ** (15 - D)
    if t.trivial:
        return CovarianceReport([], True, tol)
    pairs = sigmas if sigmas is not None else e_permutations(chi, tower, max(D, 40))
    F = chi.coefficients.field
    rts = F.roots(D)
    rows = []
    for elt, perm_E in pairs:
        s = embedding_permutation(tower, elt)
        dec = decompose_sigma(s, tower)
        for rho in t.values:
            srho = perm_E[rho]
            if chi.avatar_type(srho) != chi.avatar_type(rho).permuted(s.perm_K):
                raise CovarianceViolation(f"σ = {elt.label} does not intertwine the avatars at ρ = {rho}",
                                          sigma=elt.label)
            sign = -1 if n_sign(s, chi, rho, tower, dec) else 1
            if not apply_sign:
                sign = 1
            with digits(D + GUARD_DIGITS):
                target = sign * t.l_ratio(srho)
                if elt.is_conjugation:
                    kind = "direct"
                    image = t.l_ratio(rho).conjugate()
                else:
                    if certificate is None:
                        continue
                    kind = "certified"
                    e_val = acb(0)
                    for i, c in enumerate(certificate.candidate):
                        e_val += acb(c.numerator) / c.denominator * rts[srho] ** i
                    image = e_val * sigma_of_omega(s, chi, rho, tower, D)
                disc = float((abs(image - target) / abs(target)).upper())
            rows.append(CovarianceRow(elt.label, rho, srho, sign, kind, disc, disc < tol))
    report = CovarianceReport(rows, all(r.passed for r in rows), tol)
    if not report.passed and raise_on_failure:
        bad = max((r for r in rows if not r.passed), key=lambda r: r.discrepancy)
        raise CovarianceViolation(f"σ = {bad.label} at ρ = {bad.rho}: discrepancy {bad.discrepancy:.3e}",
                                  sigma=bad.label, discrepancy=bad.discrepancy, report=report)
    return report
