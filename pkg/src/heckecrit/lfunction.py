"""Finite L-values of Hecke characters by a smoothed approximate functional equation.

Normalisation.  For a character of the field F (degree 2d, totally imaginary)
with modulus 𝔪 and shifts μ_w = -min(χ_τ, χ_τ̄), put

    γ(s) = ∏_w Γ(s + μ_w),    A = sqrt(|d_F| N𝔪) / (2π)^d,
    Λ(s) = A^s γ(s) L_f(s),

so that L_∞(s) = ∏ Γ_C(s + μ_w) differs from A^s γ(s) by elementary factors.
The functional equation reads Λ(s, χ) = W Λ(1 + w - s, χ̄).  Splitting the
Mellin integral of the theta series at t gives

    Λ(s) = Σ a_n (A/n)^s Φ_s(nt/A) + W Σ ā_n (A/n)^{s'} Φ_{s'}(n/(tA)) + polar terms,

with s' = 1 + w - s and Φ the incomplete Mellin transform of γ.  The identity
holds for every t > 0; comparing t = 1 with an auxiliary t determines W.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, factorial, log

from flint import acb, arb

from ._arith import GUARD_DIGITS, digits, eval_poly, gp, pari, pari_to_fmpq_poly
from ._mellin import incomplete_mellin, kernel_precision_digits
from .characters import InfinityType, _critical, evaluate
from .errors import NotConverged, NotCritical, PoleAtS, RootNumberInconsistent
from .ideals import Ideal, factor_rational_prime


@dataclass
class LSeriesCoefficients:
    cutoff: int
    values: list                    # values[n] for 0 ≤ n ≤ cutoff; None means 0

    def __getitem__(self, n):
        v = self.values[n]
        return acb(0) if v is None else v

    def nonzero(self, upto=None):
        upto = self.cutoff if upto is None else min(upto, self.cutoff)
        return [(n, self.values[n]) for n in range(1, upto + 1) if self.values[n] is not None]


@dataclass
class LValueResult:
    value: acb
    s: object
    cutoff_used: int
    precision_digits: int
    root_number: acb
    drift: float
    completed: acb = None           # Λ(s)
    aux_point: object = None

    def to_dict(self):
        def c(z):
            z = acb(z)
            return [z.real.mid().str(self.precision_digits, radius=False),
                    z.imag.mid().str(self.precision_digits, radius=False)]
        return {"value": c(self.value), "s": str(self.s), "cutoff_used": self.cutoff_used,
                "precision_digits": self.precision_digits, "root_number": c(self.root_number),
                "drift": self.drift}


# -- archimedean data ------------------------------------------------------------------

def gamma_shifts(inf_type):
    """μ_w = -min(χ_τ, χ_τ̄), one per complex place (τ taken from the first half)."""
    half = len(inf_type) // 2
    return [-min(inf_type[p], inf_type[inf_type.conj(p)]) for p in range(half)]


def _gamma_C(z):
    return 2 * (2 * arb.pi()) ** (-z) * z.gamma()


def gamma_factor(inf_type, s, d=50):
    """∏_w Γ_C(s + μ_w)."""
    with digits(d + GUARD_DIGITS):
        s = acb(s)
        out = acb(1)
        for mu in gamma_shifts(inf_type):
            z = s + mu
            if z.imag == 0 and z.real.is_integer() and int(z.real.unique_fmpz()) <= 0:
                raise PoleAtS(f"Γ_C has a pole at s + μ = {z.real}")
            out *= _gamma_C(z)
        return out


def linf_ratio_exact(chi):
    """L_∞(0, χ)/L_∞(0, χ̌) = ∏_{E_k^-} 2^{n-1} Γ(-χ̌_ι/n)^n / Γ(-χ̌_ι), exactly."""
    typ = chi if isinstance(chi, InfinityType) else chi.infinity_type
    typ.weight
    if not _critical(typ):
        raise NotCritical(f"type {typ} is not critical")
    n = typ.n
    tk = typ.restricted()
    out = Fraction(1)
    for j in range(len(tk)):
        if tk[j] <= -n:
            m = -tk[j] // n
            out *= Fraction(2 ** (n - 1) * factorial(m - 1) ** n, factorial(n * m - 1))
    return out


# -- coefficients ----------------------------------------------------------------------

def _spf(X):
    spf = list(range(X + 1))
    for p in range(2, int(X ** 0.5) + 1):
        if spf[p] == p:
            for m in range(p * p, X + 1, p):
                if spf[m] == m:
                    spf[m] = p
    return spf


def prime_value(chi, rho, P, d):
    """ρχ(𝔭) for a prime 𝔭 of the base field of χ, coprime to the modulus."""
    if chi.level == "k":
        return evaluate(chi, rho, Ideal.from_factors([(P, 1)]), d)
    key = ("pdec", P)
    if key not in chi._cache:
        res = pari.bnrisprincipal(chi.ray.bnr, P.pr, 1)
        chi._cache[key] = (tuple(int(c) for c in res[0]),
                           pari_to_fmpq_poly(pari.nfbasistoalg(chi.field.nf, res[1])))
    e, alpha = chi._cache[key]
    ekey = ("emb", P, d)
    if ekey not in chi._cache:
        rts = chi.tower.roots_K(d)
        with digits(d + GUARD_DIGITS):
            chi._cache[ekey] = [eval_poly(alpha, z) for z in rts]
    avals = chi._cache[ekey]
    tkey = ("avatar", rho)
    if tkey not in chi._cache:
        chi._cache[tkey] = (chi.avatar_type(rho).exponents, chi.coefficients.v_values(rho, d + 20))
    typ, vs = chi._cache[tkey]
    with digits(d + GUARD_DIGITS):
        val = acb(1)
        for p, k in enumerate(typ):
            if k:
                val *= avals[p] ** k
        for v, k in zip(vs, e):
            if k:
                val *= v ** k
    return val


def dirichlet_coefficients(chi, rho=None, X=100, d=None, conjugate=False):
    """a_n = Σ_{N𝔞 = n} ρχ(𝔞) for n ≤ X, built from the Euler product."""
    d = d or chi.precision_digits
    rho = chi.base_rho if rho is None else rho
    X = int(X)
    F = chi.field
    bad = {P.residue_characteristic for P in chi.modulus.primes()}
    spf = _spf(X)
    local = {}
    with digits(d + GUARD_DIGITS):
        for p in range(2, X + 1):
            if spf[p] != p:
                continue
            kmax = int(log(X) / log(p) + 1e-9)
            while p ** (kmax + 1) <= X:
                kmax += 1
            while p ** kmax > X:
                kmax -= 1
            series = [acb(1)] + [acb(0)] * kmax
            for P, _ in factor_rational_prime(F, p):
                if P.norm > X or (p in bad and P in chi.modulus.primes()):
                    continue
                c = prime_value(chi, rho, P, d)
                if conjugate:
                    c = c.conjugate()
                f = P.residue_degree
                # multiply by 1/(1 - c T^f)
                for k in range(f, kmax + 1):
                    series[k] += c * series[k - f]
            local[p] = series
        vals = [None] * (X + 1)
        vals[1] = acb(1)
        for n in range(2, X + 1):
            p = spf[n]
            m, k = n, 0
            while m % p == 0:
                m //= p
                k += 1
            b = local[p][k]
            if vals[m] is not None and b != 0:
                vals[n] = vals[m] * b
    return LSeriesCoefficients(X, vals)


# -- the approximate functional equation -------------------------------------------------

def conductor_parameter(F, modulus, d):
    with digits(d + GUARD_DIGITS):
        return (arb(abs(F.discriminant) * modulus.norm)).sqrt() / (2 * arb.pi()) ** (F.degree // 2)


def _x_needed(dd, mus, s, w, D):
    """Largest argument at which Φ still matters at D digits."""
    c = max(0.0, sum(mus) / dd + abs(float(s)) + abs(w) + 2)
    target = (D + 5) * log(10)
    lo, hi = 1.0, 2.0
    while dd * hi ** (1 / dd) - c * log(hi) < target:
        hi *= 2
    for _ in range(60):
        mid = (lo + hi) / 2
        if dd * mid ** (1 / dd) - c * log(mid) < target:
            lo = mid
        else:
            hi = mid
    return hi


def estimate_cutoff(F, modulus, inf_type, s, D, aux_point=1.2):
    """Terms needed for D digits: n ≤ x·A·max(t, 1/t)."""
    mus = gamma_shifts(inf_type)
    w = inf_type.weight
    A = float(conductor_parameter(F, modulus, 20).mid())
    t = max(float(aux_point), 1 / float(aux_point))
    return int(ceil(_x_needed(len(mus), mus, s, w, D) * A * t)) + 1


def _residue_at_one(F, d):
    """Residue of the Dedekind zeta function at s = 1 (F totally imaginary)."""
    info = gp("(b)->[b.no, b.tu[1], b.fu]")(F.bnf)
    h, wtor = int(info[0]), int(info[1])
    units = [pari_to_fmpq_poly(pari.lift(u)) for u in info[2]]
    r2 = F.degree // 2
    with digits(d + GUARD_DIGITS):
        rts = F.roots(d)
        # one root per complex place
        places = [z for z in rts if z.imag > 0]
        if units:
            from flint import arb_mat
            M = arb_mat([[2 * abs(eval_poly(u, z)).log() for z in places[:len(units)]] for u in units])
            R = abs(M.det())
        else:
            R = arb(1)
        return (2 * arb.pi()) ** r2 * h * R / (wtor * arb(abs(F.discriminant)).sqrt())


def _afe_sums(items, mus, s, A, ts, cuts, conj=False):
    """Σ_{n ≤ c} a_n (A/n)^s Φ_s(n t / A) for every t in ``ts`` and every cut c (ascending)."""
    pts = [arb(n) * t / A for t in ts for n, _ in items]
    phi = incomplete_mellin(mus, s, pts)
    m = len(items)
    out = []
    for i in range(len(ts)):
        acc, sums, k = acb(0), [], 0
        for c in cuts:
            while k < m and items[k][0] <= c:
                n, a = items[k]
                acc += (a.conjugate() if conj else a) * (A / n) ** s * phi[i * m + k]
                k += 1
            sums.append(acc)
        out.append(sums)
    return out


def _is_trivial(chi):
    return chi.infinity_type.is_trivial and chi.modulus.norm == 1 and not any(chi.roots_choice)


def completed_value(chi, rho=None, s=0, precision_digits=50, cutoff=None, aux_point=1.2,
                    dual=False):
    """Λ(s) for ρχ (or its dual ρχ̄), the root number, and truncation data."""
    D = int(precision_digits)
    rho = chi.base_rho if rho is None else rho
    F = chi.field
    typ = chi.infinity_type
    mus = gamma_shifts(typ)
    w = typ.weight
    dd = len(mus)
    s = arb(s)
    s_dual = 1 + w - s
    X_est = estimate_cutoff(F, chi.modulus, typ, s, D, aux_point)
    X = int(cutoff) if cutoff else 2 * X_est
    half = max(X // 2, 1)
    coeffs = dirichlet_coefficients(chi, rho, X, D + GUARD_DIGITS, conjugate=dual)
    A_f = float(conductor_parameter(F, chi.modulus, 20).mid())
    tmax = max(float(aux_point), 1 / float(aux_point))
    wd = kernel_precision_digits(dd, X * tmax / A_f, D)
    with digits(wd):
        A = conductor_parameter(F, chi.modulus, wd)
        t1, t2 = arb(1), arb(str(aux_point))
        items = coeffs.nonzero(X)
        cuts = (half, X)
        F1 = _afe_sums(items, mus, s, A, (t1, t2), cuts)
        F2 = _afe_sums(items, mus, s_dual, A, (1 / t1, 1 / t2), cuts, conj=True)
        P = [acb(0), acb(0)]
        if _is_trivial(chi):
            r1 = A * _residue_at_one(F, wd)
            for i, tt in enumerate((t1, t2)):
                P[i] = r1 * tt ** (s - 1) / (s - 1) - r1 * tt ** s / s
        results = {}
        for c, upto in enumerate(cuts):
            den = F2[0][c] - F2[1][c]
            if abs(den) < arb(10) ** (-D // 2):
                raise RootNumberInconsistent("auxiliary point gives a singular root-number equation")
            W = (F1[1][c] + P[1] - F1[0][c] - P[0]) / den
            results[upto] = (F1[0][c] + W * F2[0][c] + P[0], W)
        lam, W = results[X]
        lam_h, _ = results[half]
        drift = abs(lam - lam_h) / max(abs(lam), arb(10) ** (-D))
        return lam, W, float(drift.mid()), X, A


def evaluate_Lf(chi, rho=None, s=0, precision_digits=50, cutoff=None, aux_point=1.2,
                dual=False, check=True):
    """L_f(s, ρχ) via the approximate functional equation."""
    D = int(precision_digits)
    typ = chi.infinity_type
    mus = gamma_shifts(typ)
    with digits(D + GUARD_DIGITS):
        for mu in mus:
            z = arb(s) + mu
            if z.is_integer() and int(z.unique_fmpz()) <= 0:
                raise PoleAtS(f"Γ(s + {mu}) has a pole at s = {s}")
    lam, W, drift, X, A = completed_value(chi, rho, s, D, cutoff, aux_point, dual)
    with digits(D + 2 * GUARD_DIGITS):
        g = acb(1)
        for mu in mus:
            g *= (arb(s) + mu).gamma()
        val = lam / (acb(A) ** arb(s) * g)
        if check:
            if not abs(abs(W) - 1) < arb(10) ** (8 - D):
                raise RootNumberInconsistent(f"|W| - 1 = {(abs(W) - 1).mid().str(5, radius=False)}")
            if not drift < 10.0 ** (10 - D):
                raise NotConverged(f"relative drift {drift:.3e} under cutoff doubling")
    return LValueResult(val, s, X, D, W, drift, lam, aux_point)
