"""Shared plumbing: the PARI session, flint precision handling, conversions."""

from contextlib import contextmanager
from fractions import Fraction

from cypari import pari
from flint import acb, arb, ctx, fmpq, fmpq_poly, fmpz_poly

pari.allocatemem(10**8, 2 * 10**9, silent=True)

GUARD_DIGITS = 10


@contextmanager
def digits(d):
    """Run a block with flint working precision set to ``d`` decimal digits."""
    old = ctx.prec
    ctx.dps = int(d)
    try:
        yield
    finally:
        ctx.prec = old


@contextmanager
def bits(b):
    old = ctx.prec
    ctx.prec = int(b)
    try:
        yield
    finally:
        ctx.prec = old


def gp(name):
    """A PARI function by name, e.g. ``gp('nfsubfields')(f)``."""
    return pari(name)


# -- polynomials -----------------------------------------------------------

def parse_poly(spec, var="x"):
    """Integer/rational polynomial from a string, a flint poly or an ascending coefficient list."""
    if isinstance(spec, (fmpz_poly, fmpq_poly)):
        return fmpq_poly(spec)
    if isinstance(spec, str):
        g = pari(spec.replace("**", "^"))
        if g.type() not in ("t_POL", "t_INT", "t_FRAC"):
            raise ValueError(f"not a polynomial: {spec!r}")
        if g.type() == "t_POL" and str(g.variable()) != var:
            g = pari.subst(g, g.variable(), pari(var))
        return pari_to_fmpq_poly(g)
    return fmpq_poly([fmpq(Fraction(c).numerator, Fraction(c).denominator) for c in spec])


def pari_to_fmpq_poly(g):
    g = pari.lift(g) if g.type() == "t_POLMOD" else g
    if g.type() in ("t_INT", "t_FRAC"):
        return fmpq_poly([pari_to_fmpq(g)])
    return fmpq_poly([pari_to_fmpq(c) for c in g.Vecrev()])


def pari_to_fmpq(c):
    return fmpq(int(c.numerator()), int(c.denominator()))


def fmpq_to_fraction(q):
    return Fraction(int(q.p), int(q.q))


def poly_to_pari(p, var="x"):
    coeffs = [fmpq_to_fraction(c) for c in p.coeffs()] or [Fraction(0)]
    terms = [f"({c})*{var}^{i}" for i, c in enumerate(coeffs) if c]
    return pari(" + ".join(terms) if terms else "0")


def poly_str(p, var="x"):
    return str(poly_to_pari(p, var))


def int_coeffs(p):
    """Ascending integer coefficient tuple of an integral polynomial."""
    out = []
    for c in p.coeffs():
        if c.q != 1:
            raise ValueError("polynomial has non-integral coefficients")
        out.append(int(c.p))
    return tuple(out)


# -- numerics --------------------------------------------------------------

def eval_poly(p, z):
    """Evaluate a rational polynomial at an acb point by Horner's rule."""
    acc = acb(0)
    for c in reversed(p.coeffs()):
        acc = acc * z + arb(c)
    return acc


def to_complex(z):
    z = acb(z)
    return complex(float(z.real.mid()), float(z.imag.mid()))


def mid(z):
    z = acb(z)
    return acb(z.real.mid(), z.imag.mid())


def acb_from_pari(x):
    x = pari(x)
    re, im = pari.real(x), pari.imag(x)
    return acb(arb(str(re).replace(" E", "e")), arb(str(im).replace(" E", "e")))


def close(a, b, tol):
    return abs(acb(a) - acb(b)).mid() <= arb(tol).mid()


def to_fraction(x, max_den=None):
    """Nearest fraction to a real ball midpoint (optionally denominator-bounded)."""
    f = Fraction(arb(x).mid().str(ctx.dps + 5, radius=False))
    return f.limit_denominator(max_den) if max_den else f
