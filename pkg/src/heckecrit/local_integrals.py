"""Local integrals at a single place: unramified Euler factors and complex Tate integrals.

On a complex place |x|_w = x·x̄.  The additive measure dx_w is self-dual for
x ↦ exp(2πi·tr x), i.e. twice Lebesgue measure, so the unit disc has volume
2π, and d°x_w = ζ_{K_w}(1)·dx_w/|x|_w with ζ_{K_w}(s) = 2(2π)^{-s}Γ(s).  In
polar coordinates x = re^{iθ} this is (dθ/2π)·(4 dr/r).
"""

from dataclasses import dataclass
from fractions import Fraction

import mpmath
from flint import acb, fmpz_mat

from ._arith import GUARD_DIGITS, digits
from .errors import QuadratureFailed, Ramified
from .ideals import factor_rational_prime


@dataclass(frozen=True)
class TateMeasureSpec:
    """Tate measure on C^× in the normalization above."""
    disc_volume: str = "2*pi"
    zeta_at_one: str = "1/pi"
    polar_factor: int = 4          # d°x = (dθ/2π)·(polar_factor·dr/r)

    def radial_density(self, r):
        return self.polar_factor / r


TATE = TateMeasureSpec()


def tate_zeta(s):
    """ζ_{K_w}(s) = 2(2π)^{-s}Γ(s)."""
    return 2 * (2 * mpmath.pi) ** (-s) * mpmath.gamma(s)


@dataclass(frozen=True)
class MonomialSchwartz:
    """x ↦ ∏ x_j^{β_j}·exp(-2π Σ|x_j|_w) on C^n."""
    beta: tuple

    def __call__(self, xs):
        val = mpmath.mpf(1)
        for x, b in zip(xs, self.beta):
            val *= x ** b
        return val * mpmath.exp(-2 * mpmath.pi * sum(abs(x) ** 2 for x in xs))


# -- unramified places --------------------------------------------------------------

@dataclass(frozen=True)
class EulerCheck:
    p: int
    s: object
    primes: tuple              # (norm, χ(𝔭)) per prime above p
    truncated: acb
    closed_form: acb
    error: float
    terms: int


def unramified_euler_identity(F, p, values=None, s=2, terms=40, modulus=None, precision=30):
    """Truncated Σ_k χ(𝔭)^k N𝔭^{-ks} against (1 - χ(𝔭)N𝔭^{-s})^{-1}, multiplied over 𝔭 | p.

    ``values`` lists χ(𝔭) in the order of the primes above p (default: all 1),
    or is a callable on :class:`PrimeIdeal`.  Primes ramified in F or dividing
    ``modulus`` are refused.
    """
    primes = [P for P, _ in factor_rational_prime(F, p)]
    if any(P.ramification_index > 1 for P in primes):
        raise Ramified(f"{p} ramifies in {F}")
    if modulus is not None and any(P in set(modulus.primes()) for P in primes):
        raise Ramified(f"{p} divides the modulus")
    if values is None:
        values = [1] * len(primes)
    elif callable(values):
        values = [values(P) for P in primes]
    if len(values) != len(primes):
        raise ValueError(f"{len(primes)} primes above {p}, got {len(values)} values")
    with digits(precision + GUARD_DIGITS):
        s = acb(s)
        trunc, closed = acb(1), acb(1)
        for P, v in zip(primes, values):
            x = acb(v) * acb(P.norm) ** (-s)
            acc, term = acb(0), acb(1)
            for _ in range(terms):
                acc += term
                term *= x
            trunc *= acc
            closed *= 1 / (1 - x)
        err = abs(trunc - closed)
    return EulerCheck(int(p), s, tuple((P.norm, acb(v)) for P, v in zip(primes, values)),
                      trunc, closed, float(err.upper()), terms)


# -- the complex place --------------------------------------------------------------

def _log_r_range(t, precision):
    """[log r_min, log r_max] outside which both tails of the t-integrand are below 10^-precision."""
    eps = mpmath.mpf(10) ** (-precision - 3)
    lo = mpmath.log(eps * t / 2) / (2 * t)                 # ∫_0^{r_min} 4r^{2t-1} dr = 2r_min^{2t}/t
    hi = mpmath.log(mpmath.sqrt((precision + 3) * mpmath.log(10) / (2 * mpmath.pi) + t) + 1)
    return lo, hi


def _radial(f, t, precision):
    """∫_0^∞ f(r)·4 dr/r by tanh-sinh in u = log r."""
    with mpmath.workdps(precision + 5):
        lo, hi = _log_r_range(t, precision)
        pts = mpmath.linspace(lo, hi, 6)
        val, err = mpmath.quad(lambda u: 4 * f(mpmath.exp(u)), pts, error=True)
    return val, err


def tate_integral(t, precision=20):
    """∫_{C^×} |x|^t e^{-2π|x|} d°x (equals ζ_{K_w}(t))."""
    if t < 0.5:
        raise QuadratureFailed(f"t = {t} is below the stable range t ≥ 0.5")
    t = mpmath.mpf(t)
    val, err = _radial(lambda r: r ** (2 * t) * mpmath.exp(-2 * mpmath.pi * r * r), t, precision)
    if err > mpmath.mpf(10) ** (3 - precision) * abs(val):
        raise QuadratureFailed(f"quadrature error {err} at t = {t}")
    return val


def archimedean_tate_integral(t, precision=20):
    """(2π)^{-t}Γ(t), computed as ∫|x|^t e^{-2π|x|} against d°x/2 = (dθ/2π)(2dr/r).

    The factor 1/2 trades the self-dual additive measure for Lebesgue measure.
    """
    return tate_integral(t, precision) / 2


def monomial_tate_integral(a, b, t, precision=20):
    """∫ x^a x̄^b |x|^t e^{-2π|x|} d°x.

    With x = re^{iθ} the integrand is e^{i(a-b)θ} times a radial function, so
    the tensor rule (Gauss-Legendre in θ, tanh-sinh in log r) factors.
    """
    if t < 0.5:
        raise QuadratureFailed(f"t = {t} is below the stable range t ≥ 0.5")
    with mpmath.workdps(precision + 5):
        t = mpmath.mpf(t)
        k = a - b
        ang = mpmath.quad(lambda th: mpmath.expj(k * th), mpmath.linspace(0, 2 * mpmath.pi, 9),
                          method="gauss-legendre") / (2 * mpmath.pi)
        tt = t + mpmath.mpf(a + b) / 2
        rad, err = _radial(lambda r: r ** (2 * tt) * mpmath.exp(-2 * mpmath.pi * r * r), tt, precision)
    if err > mpmath.mpf(10) ** (3 - precision) * abs(rad):
        raise QuadratureFailed(f"quadrature error {err}")
    return ang * rad


# -- the measure constant ------------------------------------------------------------

@dataclass(frozen=True)
class MeasureConstant:
    value: int
    gram_determinant: int
    polar_factor: int


def gram_determinant(n):
    """det of the Gram matrix of ε_i - ε_n (i < n) in R^n."""
    if n <= 1:
        return 1
    vecs = [[(1 if j == i else 0) - (1 if j == n - 1 else 0) for j in range(n)] for i in range(n - 1)]
    G = fmpz_mat([[sum(a * b for a, b in zip(u, v)) for v in vecs] for u in vecs])
    return int(G.det())


def measure_constant(n, k_degree):
    """(4^{n-1}·n)^{[k:Q]/2}, with the Gram determinant and the polar factor it is built from."""
    if k_degree % 2:
        raise ValueError("[k:Q] is even for a CM field")
    g = gram_determinant(n)
    per_place = Fraction(TATE.polar_factor) ** (n - 1) * g
    value = per_place ** (k_degree // 2)
    return MeasureConstant(int(value), g, TATE.polar_factor)
