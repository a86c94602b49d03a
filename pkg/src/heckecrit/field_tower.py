"""Number fields, their complex embeddings and the ordered tower Q ⊂ k0 ⊂ k ⊂ K.

Embeddings are kept as indices into a canonical root list (roots sorted by
real part, then imaginary part); the tower records three permutations of
those lists giving the total orders on E_{k0}, E_k and E_K.  Numerical roots
can then be produced at any precision without re-deciding the order.
"""

from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import cached_property

from flint import acb, acb_mat, arb, fmpq_poly, fmpz_poly

from ._arith import (GUARD_DIGITS, digits, eval_poly, fmpq_to_fraction, gp, int_coeffs,
                     parse_poly, pari, pari_to_fmpq_poly, poly_to_pari, poly_str)
from .errors import (InconsistentTower, NoCMSubfield, NonMonic, PrecisionTooLow,
                     ReduciblePolynomial, SingularMatrix)

_ROOTS = {}


def _sort_key(z):
    return (round(float(z.real.mid()), 12), round(float(z.imag.mid()), 12))


def _nearest(z, candidates, what="root"):
    dists = [abs(z - c).mid() for c in candidates]
    best = min(range(len(dists)), key=lambda i: dists[i])
    ordered = sorted(dists)
    if len(ordered) > 1 and not ordered[0] * 1000 < ordered[1]:
        raise InconsistentTower(f"cannot match {what} unambiguously")
    return best


@dataclass(frozen=True, eq=False)
class NumberField:
    defining_polynomial: tuple          # ascending integer coefficients
    degree: int
    integral_basis: tuple               # power-basis coordinates (Fractions)
    discriminant: int

    def __eq__(self, other):
        return isinstance(other, NumberField) and self.defining_polynomial == other.defining_polynomial

    def __hash__(self):
        return hash(self.defining_polynomial)

    def __repr__(self):
        return f"NumberField({self})"

    def __str__(self):
        return poly_str(self.poly)

    @property
    def poly(self):
        return fmpq_poly(list(self.defining_polynomial))

    def pari_poly(self, var="x"):
        return poly_to_pari(self.poly, var)

    @cached_property
    def nf(self):
        return pari.nfinit(self.pari_poly())

    @cached_property
    def bnf(self):
        b = pari.bnfinit(self.pari_poly(), 1)
        if self.degree <= 8 and abs(self.discriminant) < 10**9:
            gp("bnfcertify")(b)
        return b

    def roots(self, d):
        """Complex roots at ``d`` digits in canonical (lexicographic) order."""
        key = (self.defining_polynomial, int(d))
        if key not in _ROOTS:
            with digits(d + GUARD_DIGITS):
                if self.degree == 1:
                    rts = [acb(-self.defining_polynomial[0])]
                else:
                    rts = [z for z, _ in fmpz_poly(list(self.defining_polynomial)).complex_roots()]
                rts.sort(key=_sort_key)
            _ROOTS[key] = tuple(rts)
        return _ROOTS[key]

    def embed(self, elt, d):
        """Values of a power-basis element at all canonical roots."""
        elt = reduce_element(self, elt)
        with digits(d + GUARD_DIGITS):
            return [eval_poly(elt, z) for z in self.roots(d)]

    def embedding_matrix(self, d):
        """[σ_i(ω_j)] for the integral basis ω_j, rows in canonical order."""
        basis = [parse_poly(w) for w in self.integral_basis]
        cols = [self.embed(w, d) for w in basis]
        with digits(d + GUARD_DIGITS):
            return acb_mat([[cols[j][i] for j in range(self.degree)] for i in range(self.degree)])

    @property
    def is_totally_imaginary(self):
        return all(not abs(z.imag.mid()) < 1e-20 for z in self.roots(30))


def reduce_element(F, elt):
    if isinstance(elt, str):
        elt = parse_poly(elt)
    elt = fmpq_poly(elt)
    if elt.degree() >= F.degree:
        elt = elt % F.poly
    return elt


@dataclass(frozen=True, eq=False)
class Embedding:
    parent: NumberField
    root: acb
    index: int                  # position in the fixed total order
    canonical: int = -1         # position in the canonical root list

    def __call__(self, elt):
        return eval_poly(reduce_element(self.parent, elt), self.root)


def build_field(min_poly):
    """NumberField for a monic irreducible integer polynomial (maximal order via PARI)."""
    p = parse_poly(min_poly)
    if p.degree() < 1:
        raise ReduciblePolynomial("constant polynomial")
    if p.coeffs()[-1] != 1:
        raise NonMonic(f"{poly_str(p)} is not monic")
    coeffs = int_coeffs(p)
    g = poly_to_pari(p)
    if not pari.polisirreducible(g):
        raise ReduciblePolynomial(f"{poly_str(p)} is reducible")
    if p.degree() == 1:
        return NumberField(coeffs, 1, ((Fraction(1),),), 1)
    basis = []
    for w in g.nfbasis():
        c = [fmpq_to_fraction(a) for a in pari_to_fmpq_poly(w).coeffs()]
        basis.append(tuple(c + [Fraction(0)] * (p.degree() - len(c))))
    return NumberField(coeffs, p.degree(), tuple(basis), int(g.nfdisc()))


def complex_embeddings(F, precision_digits):
    if precision_digits < 30:
        raise PrecisionTooLow(f"{precision_digits} < 30 digits")
    return [Embedding(F, z, i, i) for i, z in enumerate(F.roots(precision_digits))]


# -- subfields and the CM property ---------------------------------------

def _automorphisms(g):
    return [pari_to_fmpq_poly(a) for a in gp("nfgaloisconj")(g)]


def is_cm_field(F):
    """True when complex conjugation induces one automorphism of F for every embedding."""
    if F.degree % 2 or not F.is_totally_imaginary:
        return False
    rts = F.roots(40)
    with digits(50):
        for c in _automorphisms(F.pari_poly()):
            if all(abs(eval_poly(c, z) - z.conjugate()).mid() < 1e-30 for z in rts):
                return True
    return False


def _subfields(F, degree=None):
    args = [F.pari_poly()] + ([degree] if degree else [])
    out = []
    for entry in gp("nfsubfields")(*args):
        out.append(pari.polredabs(entry[0]))
    return out


def maximal_cm_subfield(K):
    if K.is_totally_imaginary is False and K.degree > 1:
        raise NoCMSubfield(f"{K} has a real embedding")
    if K.degree == 1:
        raise NoCMSubfield("the rational field has no CM subfield")
    cands = sorted(_subfields(K), key=lambda g: -int(g.poldegree()))
    for g in cands:
        if int(g.poldegree()) % 2 == 0 and int(g.poldegree()) >= 2:
            sub = build_field(str(g))
            if is_cm_field(sub):
                return sub
    raise NoCMSubfield(f"{K} contains no CM subfield")


def maximal_totally_real_subfield(k):
    if k.degree == 2:
        return build_field("x - 1")
    for g in _subfields(k, k.degree // 2):
        sub = build_field(str(g))
        if all(abs(z.imag.mid()) < 1e-20 for z in sub.roots(30)):
            return sub
    raise InconsistentTower(f"{k} has no totally real subfield of index 2")


def inclusion(sub, F):
    """Image of the generator of ``sub`` in ``F`` (first of PARI's embeddings)."""
    if sub.degree == 1:
        return fmpq_poly([-sub.defining_polynomial[0]])
    if sub == F:
        return fmpq_poly([0, 1])
    imgs = gp("nfisincl")(sub.pari_poly(), F.pari_poly())
    if imgs == 0 or len(imgs) == 0:
        raise InconsistentTower(f"{sub} is not a subfield of {F}")
    return pari_to_fmpq_poly(imgs[0])


# -- the tower ---------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class FieldTower:
    K: NumberField
    k: NumberField
    k0: NumberField
    k_in_K: fmpq_poly
    k0_in_k: fmpq_poly
    n: int
    r: int
    relative_basis: tuple
    precision_digits: int
    seed_order: tuple
    order_K: tuple = ()
    order_k: tuple = ()
    order_k0: tuple = ()
    delta_k0_branch: str = "positive-real"
    _cache: dict = field(default_factory=dict, repr=False)

    # embeddings in the fixed total order
    def roots_K(self, d=None):
        d = d or self.precision_digits
        rts = self.K.roots(d)
        return [rts[c] for c in self.order_K]

    def roots_k(self, d=None):
        d = d or self.precision_digits
        rts = self.k.roots(d)
        return [rts[c] for c in self.order_k]

    def roots_k0(self, d=None):
        d = d or self.precision_digits
        rts = self.k0.roots(d)
        return [rts[c] for c in self.order_k0]

    @property
    def emb_K(self):
        return [Embedding(self.K, z, i, c) for i, (z, c) in enumerate(zip(self.roots_K(), self.order_K))]

    @property
    def emb_k(self):
        return [Embedding(self.k, z, i, c) for i, (z, c) in enumerate(zip(self.roots_k(), self.order_k))]

    @property
    def emb_k0(self):
        return [Embedding(self.k0, z, i, c) for i, (z, c) in enumerate(zip(self.roots_k0(), self.order_k0))]

    def embed_K(self, elt, d=None):
        d = d or self.precision_digits
        elt = reduce_element(self.K, elt)
        with digits(d + GUARD_DIGITS):
            return [eval_poly(elt, z) for z in self.roots_K(d)]

    # index bookkeeping; positions refer to the total orders
    def fiber(self, j):
        return range(j * self.n, (j + 1) * self.n)

    def conj_k(self, j):
        return (j + self.r) % (2 * self.r)

    def conj_K(self, p):
        return self.conj_k(p // self.n) * self.n + p % self.n

    def below_K(self, p):
        return p // self.n

    def below_k(self, j):
        return j % self.r

    @property
    def is_trivial(self):
        return self.n == 1


def _restriction(sub_roots, F_roots, image, what):
    out = []
    for z in F_roots:
        out.append(_nearest(eval_poly(image, z), sub_roots, what))
    return out


def build_tower(K_poly, k_poly=None, k0_poly=None, basis=None, precision_digits=50,
                seed_order=None):
    """Assemble and order the tower; ``k`` and ``k0`` are detected when omitted."""
    if precision_digits < 30:
        raise PrecisionTooLow(f"{precision_digits} < 30 digits")
    K = build_field(K_poly)
    cm = maximal_cm_subfield(K)
    if k_poly is None:
        k = cm
    else:
        k = build_field(k_poly)
        if k.degree != cm.degree or not gp("nfisisom")(k.pari_poly(), cm.pari_poly()):
            raise InconsistentTower(f"{k} is not the maximal CM subfield of {K}")
    k0 = maximal_totally_real_subfield(k) if k0_poly is None else build_field(k0_poly)
    if 2 * k0.degree != k.degree:
        raise InconsistentTower("[k:k0] must be 2")
    k_in_K = inclusion(k, K)
    k0_in_k = inclusion(k0, k)
    n = K.degree // k.degree
    if basis is None:
        basis = [fmpq_poly([0] * j + [1]) for j in range(n)]
    basis = tuple(reduce_element(K, b) for b in basis)
    if len(basis) != n:
        raise InconsistentTower(f"relative basis needs {n} elements, got {len(basis)}")
    tower = FieldTower(K, k, k0, k_in_K, k0_in_k, n, k0.degree, basis, int(precision_digits),
                       tuple(range(k0.degree)))
    tower = order_embeddings(tower, seed_order)
    for j in range(2 * tower.r):
        if abs(delta_relative(tower, j)).mid() < arb(10) ** (5 - precision_digits):
            raise SingularMatrix(f"basis is not a k-basis (fiber {j})")
    return tower


def order_embeddings(tower, seed_order=None):
    """Impose the total orders: seed on E_k0, then ι's before ῑ's, then fibers."""
    r, n = tower.r, tower.n
    seed = tuple(range(r)) if seed_order is None else tuple(seed_order)
    if sorted(seed) != list(range(r)):
        raise InconsistentTower(f"seed order {seed} is not a permutation of range({r})")
    d = tower.precision_digits
    rK, rk, rk0 = tower.K.roots(d), tower.k.roots(d), tower.k0.roots(d)
    with digits(d + GUARD_DIGITS):
        res_k = _restriction(rk0, rk, tower.k0_in_k, "k -> k0")
        res_K = _restriction(rk, rK, tower.k_in_K, "K -> k")
        order_k0 = tuple(seed)
        iotas, iotabars = [], []
        for c0 in order_k0:
            pair = [c for c in range(len(rk)) if res_k[c] == c0]
            if len(pair) != 2:
                raise InconsistentTower("each real embedding of k0 needs two extensions to k")
            pair.sort(key=lambda c: -float(rk[c].imag.mid()))
            iotas.append(pair[0])
            iotabars.append(pair[1])
        order_k = tuple(iotas + iotabars)
        fibers = []
        for j, c in enumerate(iotas):
            fib = [t for t in range(len(rK)) if res_K[t] == c]
            if len(fib) != n:
                raise InconsistentTower("fiber sizes differ from [K:k]")
            fibers.append(sorted(fib, key=lambda t: _sort_key(rK[t])))
        for j, c in enumerate(iotabars):
            conj = [_nearest(rK[t].conjugate(), rK) for t in fibers[j]]
            if any(res_K[t] != c for t in conj):
                raise InconsistentTower("conjugation does not map E_K(ι) onto E_K(ῑ)")
            fibers.append(conj)
    order_K = tuple(t for fib in fibers for t in fib)
    branch = "positive-real" if tower.k0.discriminant > 0 else "positive-imaginary"
    return replace(tower, seed_order=seed, order_K=order_K, order_k=order_k, order_k0=order_k0,
                   delta_k0_branch=branch, _cache={})


def delta_k0(tower, d=None):
    """Fixed square root of disc(k0): positive real, or positive imaginary."""
    d = d or tower.precision_digits
    D = tower.k0.discriminant
    with digits(d + GUARD_DIGITS):
        return acb(arb(D).sqrt()) if D > 0 else acb(0, arb(-D).sqrt())


def k0_basis_determinant(tower, d=None):
    """det[ι'_i(ω_j)] with rows in the tower order on E_k0; its square is disc(k0)."""
    d = d or tower.precision_digits
    M = tower.k0.embedding_matrix(d)
    with digits(d + GUARD_DIGITS):
        rows = [[M[c, j] for j in range(tower.r)] for c in tower.order_k0]
        return acb_mat(rows).det()


def relative_period_matrix(tower, iota, d=None, rows=None):
    """D(K/k,ι) = [τ_i(α_j)] for τ_i running through E_K(ι) (or through ``rows``)."""
    d = d or tower.precision_digits
    j = iota.index if isinstance(iota, Embedding) else int(iota)
    rows = list(tower.fiber(j)) if rows is None else list(rows)
    key = ("basis-values", d)
    if key not in tower._cache:
        tower._cache[key] = [tower.embed_K(b, d) for b in tower.relative_basis]
    vals = tower._cache[key]
    with digits(d + GUARD_DIGITS):
        return acb_mat([[vals[b][t] for b in range(tower.n)] for t in rows])


def delta_relative(tower, iota, d=None, rows=None):
    d = d or tower.precision_digits
    M = relative_period_matrix(tower, iota, d, rows)
    with digits(d + GUARD_DIGITS):
        det = M.det()
    if rows is None and abs(det).mid() < arb(10) ** (5 - d):
        raise SingularMatrix("relative basis is singular at this embedding")
    return det


# -- the Galois closure --------------------------------------------------------

@dataclass(frozen=True)
class ClosureElement:
    """σ in Gal(M/Q) seen as the permutations τ ↦ σ∘τ on the ordered embedding sets.

    ``perm_K[i]`` is the position of σ∘τ_i in E_K; likewise for E_k and E_k0.
    ``perm_extra[m][c]`` acts on canonical root indices of the m-th extra field.
    """
    label: int
    perm_K: tuple
    perm_k: tuple
    perm_k0: tuple
    perm_extra: tuple
    is_conjugation: bool
    restricts_to_conjugation_on_k: bool


class GaloisClosure:
    """Splitting field M of K (and any extra fields) with its automorphisms as permutations."""

    def __init__(self, tower, extra=(), d=None):
        self.tower = tower
        self.extra = tuple(extra)
        self.digits = d or max(tower.precision_digits, 40)
        P = tower.K.pari_poly()
        for E in self.extra:
            P = pari.polcompositum(P, E.pari_poly())[0]
        M = pari.polredbest(gp("nfsplitting")(P))
        self.poly = pari.subst(M, "x", "y")
        self.degree = int(self.poly.poldegree())
        self.field = build_field(str(M))
        self.autos = [pari_to_fmpq_poly(pari.subst(pari.lift(a), "y", "x"))
                      for a in gp("nfgaloisconj")(M)]
        d = self.digits
        with digits(d + 2 * GUARD_DIGITS):
            self.y0 = self.field.roots(d + GUARD_DIGITS)[0]
            self.images = [eval_poly(a, self.y0) for a in self.autos]
        self._nfM = pari.nfinit(self.poly)
        self.elements = self._elements()

    def roots_in_M(self, F):
        """Roots of F's polynomial as polynomials in the generator of M."""
        rts = gp("nfroots")(self._nfM, F.pari_poly())
        return [pari_to_fmpq_poly(pari.subst(pari.lift(z), "y", "x")) for z in rts]

    def _perm_on(self, F):
        d = self.digits
        with digits(d + 2 * GUARD_DIGITS):
            canon = F.roots(d)
            rpolys = self.roots_in_M(F)
            if len(rpolys) != F.degree:
                raise InconsistentTower(f"{F} does not split in the closure")
            perms = []
            for img in self.images:
                src = [_nearest(eval_poly(rp, self.y0), canon) for rp in rpolys]
                dst = [_nearest(eval_poly(rp, img), canon) for rp in rpolys]
                perm = [None] * F.degree
                for a, b in zip(src, dst):
                    perm[a] = b
                perms.append(tuple(perm))
        return perms

    def _elements(self):
        t = self.tower
        pK, pk, pk0 = self._perm_on(t.K), self._perm_on(t.k), self._perm_on(t.k0)
        pE = [self._perm_on(E) for E in self.extra]
        posK = {c: i for i, c in enumerate(t.order_K)}
        posk = {c: i for i, c in enumerate(t.order_k)}
        posk0 = {c: i for i, c in enumerate(t.order_k0)}
        out = []
        with digits(self.digits):
            conj_flags = [abs(img - self.y0.conjugate()).mid() < 1e-20 for img in self.images]
        for a in range(len(self.autos)):
            perm_K = tuple(posK[pK[a][c]] for c in t.order_K)
            perm_k = tuple(posk[pk[a][c]] for c in t.order_k)
            perm_k0 = tuple(posk0[pk0[a][c]] for c in t.order_k0)
            conj_on_k = all(perm_k[j] == t.conj_k(j) for j in range(2 * t.r))
            out.append(ClosureElement(a, perm_K, perm_k, perm_k0, tuple(p[a] for p in pE),
                                      bool(conj_flags[a]), conj_on_k))
        # identity first, for readability of reports
        out.sort(key=lambda e: (e.perm_K != tuple(range(len(e.perm_K))), e.label))
        return out

    def fixed_field(self, labels):
        """Subfield of M fixed by the automorphisms with the given labels, with the value
        of its generator at the base embedding of M."""
        H = [self.autos[a] for a in labels]
        target = self.degree // len(H)
        Mpol = self.field.poly
        for shift in range(0, 50):
            prim = fmpq_poly([shift, 1])
            if shift > 10:
                prim = fmpq_poly([shift - 10, 1, 1])
            t = fmpq_poly(0)
            for h in H:
                t += _compose(prim, h, Mpol)
            t = t % Mpol
            mp = gp("minpoly")(pari.Mod(poly_to_pari(t), self.field.pari_poly()))
            if int(mp.poldegree()) == target:
                with digits(self.digits + GUARD_DIGITS):
                    val = eval_poly(t, self.y0)
                return mp, val, t
        raise InconsistentTower("no primitive element found for fixed field")


def _compose(p, h, mod):
    """p(h(y)) reduced modulo ``mod``."""
    acc = fmpq_poly(0)
    for c in reversed(p.coeffs()):
        acc = (acc * h + c) % mod
    return acc


DESK_POLY = "x^6-2*x^3+2"        # Q(i, 2^{1/3}); x^3 = 1 + i


def desk_tower(precision_digits=50, seed_order=None):
    """Q(i, 2^{1/3}) over Q(i) with relative basis 1, α, α² for α = x⁵ - x² = 2^{1/3}."""
    alpha = fmpq_poly([0, 0, -1, 0, 0, 1])
    return build_tower(DESK_POLY, basis=[fmpq_poly([1]), alpha, alpha * alpha],
                       precision_digits=precision_digits, seed_order=seed_order)
