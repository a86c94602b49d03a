"""Incomplete Mellin transforms of products of Gamma functions.

For γ(z) = ∏ Γ(z + μ_j) (d factors) and real s, the kernel is

    Φ_s(x) = (1/2πi) ∫ γ(z) x^{s-z} dz/(z - s),    Re z > Re s,

i.e. the tail ∫_x^∞ f(y) y^s dy/y of the inverse Mellin transform f of γ.
For d = 1 this is Γ(s + μ, x).  For d > 1 the value at the smallest point is
taken from the residue series, and the derivative g = θΦ (θ = x d/dx)
satisfies a linear ODE of order d in u = log x; its Taylor expansion is
stepped outward from there.
"""

from math import factorial, log

from flint import arb, arb_poly, arb_series, ctx


def _is_nonpos_int(a):
    return a.is_integer() and int(a.unique_fmpz()) <= 0


def residue_state(mus, s, x, d_out):
    """Φ_s(x) and the Taylor coefficients of g(u) = θΦ at u = log x, from residues."""
    prec = ctx.prec
    lx = arb(x).log()
    pole_s = any(_is_nonpos_int(s + m) for m in mus)
    phi = arb(0)
    g = [arb(0)] * d_out
    if not pole_s:
        v = arb(1)
        for m in mus:
            v *= (s + m).gamma()
        phi += v
    m0 = min(mus)
    m = m0
    biggest = arb(0)
    while True:
        q = sum(1 for mu in mus if mu <= m)     # pole order of γ at z = -m
        extra = 1 if pole_s and s.is_integer() and int(s.unique_fmpz()) == -m else 0
        L = q + extra + 1
        # ε^q γ(-m + ε) as a power series in ε
        ser = arb_series([1], prec=L)
        for mu in mus:
            a = mu - m
            if a <= 0:
                r = arb_series([arb(a), 1], prec=L + 1).rgamma()
                ser = ser * arb_series(r.coeffs()[1:] + [arb(0)], prec=L).inv()
            else:
                ser = ser * arb_series([arb(a), 1], prec=L).gamma()
        base = ser * (x ** (s + m)) * arb_series([0, -lx], prec=L).exp()
        if extra:
            fphi = base
        else:
            fphi = base * arb_series([arb(-m) - s, 1], prec=L).inv()
        qq = q + extra
        c = fphi.coeffs()
        term = c[qq - 1] if len(c) >= qq else arb(0)
        phi += term
        tmax = abs(term)
        # g_i: residues of -γ(z) x^{s-z} (s - z)^i / i!
        for i in range(d_out):
            fi = base * (arb_series([s + m, -1], prec=L) ** i) * (-1 / arb(factorial(i)))
            ci = fi.coeffs()
            val = ci[q - 1] if q >= 1 and len(ci) >= q else arb(0)
            g[i] += val
            tmax = max(tmax, abs(val))
        biggest = max(biggest, tmax)
        if m > m0 + 5 and tmax < biggest * arb(2) ** (-prec - 20):
            break
        m += 1
    return phi, g


def _taylor(bs, x0, g0, K):
    """Taylor coefficients (in u) of g from its first d coefficients.

    g solves ∏(θ - b_j) g = (-1)^d x g with x = x0·e^u, written coefficientwise.
    """
    d = len(bs)
    p = arb_poly([1])
    for b in bs:
        p = p * arb_poly([-b, 1])
    pc = p.coeffs()
    c = x0 if d % 2 == 0 else -x0
    g = list(g0) + [arb(0)] * (K + 1 - d)
    invfac = [arb(1)]
    for k in range(1, K + 2):
        invfac.append(invfac[-1] / k)
    for k in range(K + 1 - d):
        conv = arb(0)
        for j in range(k + 1):
            conv += g[j] * invfac[k - j]
        acc = c * conv
        fall = arb(1)
        for i in range(d):
            if i > 0:
                fall *= k + i
            acc -= pc[i] * fall * g[k + i]
        fall *= k + d
        g[k + d] = acc / fall
    return g


def incomplete_mellin(mus, s, xs, step=1.0):
    """Φ_s at every point of ``xs`` (positive reals), returned in the input order.

    The caller sets the working precision; stepping toward large x costs about
    d·x^{1/d}/ln 10 digits of absolute accuracy (twice that, relative).
    """
    mus = [arb(m) for m in mus]
    s = arb(s)
    if not xs:
        return []
    order = sorted(range(len(xs)), key=lambda i: float(arb(xs[i]).mid()))
    # exact midpoints: an inexact start state would be amplified by the growing solutions
    pts = [arb(xs[i]).mid() for i in order]
    if len(mus) == 1:
        vals = [x.gamma_upper(s + mus[0]) for x in pts]
    else:
        vals = _stepped(mus, s, pts, step)
    out = [None] * len(xs)
    for i, v in zip(order, vals):
        out[i] = v
    return out


def _stepped(mus, s, xs, step):
    d = len(mus)
    bs = [s + m for m in mus]
    phi0, g0 = residue_state(mus, s, xs[0], d)
    u0 = xs[0].log()
    eps = arb(2) ** (-ctx.prec)
    out = []
    idx = 0
    while idx < len(xs):
        x0 = u0.exp()
        h = arb(step) / x0.root(d)
        K = 20
        while True:
            g = _taylor(bs, x0, g0, K)
            tail = max(abs(g[K]), abs(g[K - 1])) * h ** K
            if tail < eps * (abs(g[0]) + abs(phi0) + eps):
                break
            K = int(K * 1.4)
        gpoly = arb_poly(g)
        P = arb_poly([phi0] + [g[k] / (k + 1) for k in range(len(g))])
        uend = u0 + h
        pts = []
        while idx < len(xs) and xs[idx].log() <= uend:
            pts.append(xs[idx].log() - u0)
            idx += 1
        if pts:
            out.extend(P.evaluate(pts, algorithm="iter"))
        # restart from midpoints; the truncation error is below eps by construction
        phi0 = P(h).mid()
        ng, q, f = [], gpoly, arb(1)
        for i in range(d):
            ng.append((q(h) / f).mid())
            q = q.derivative()
            f *= i + 1
        g0 = ng
        u0 = uend
    return out


def kernel_precision_digits(d, x_max, target_digits, guard=15):
    """Decimal working precision for evaluating Φ up to ``x_max`` to ``target_digits``."""
    loss = d * float(x_max) ** (1.0 / d) / log(10) if d > 1 else 0.0
    return int(target_digits + guard + loss)
