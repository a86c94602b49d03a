"""Algebraic Hecke characters in classical form.

A character over F (= K, or k after restriction) is pinned down by

* an infinity type {χ_τ} indexed by the ordered embeddings of F, and
* a modulus 𝔪 together with values v_j = χ(g_j) on the generators of the
  ray class group mod 𝔪.

Writing an ideal as 𝔞 = (α)·∏ g_j^{e_j} with α ≡ 1 mod* 𝔪 gives
χ(𝔞) = ∏ v_j^{e_j} · ∏_τ τ(α)^{χ_τ}.  Values lie in a number field E built
exactly: first the fixed field T of the stabilizer of the type inside the
Galois closure, then the radicals v_j.  An embedding ρ of E acts on the type
through its restriction to T, which is how the avatars ρχ are evaluated.
"""

from dataclasses import dataclass, field
from itertools import product

from flint import acb, arb

from ._arith import (GUARD_DIGITS, digits, eval_poly, gp, pari, pari_to_fmpq_poly,
                     poly_to_pari)
from .errors import (FiberInconstant, NoCharacterExists, NotCoprime, PurityViolation)
from .field_tower import GaloisClosure, _nearest, build_field
from .ideals import Ideal, PrimeIdeal, factor_rational_prime, ideal_from_pari, ray_class_group


# -- infinity types ------------------------------------------------------------

@dataclass(frozen=True)
class InfinityType:
    """Exponents χ_τ listed in the tower order of E_F; fibers have size n."""
    exponents: tuple
    n: int
    r: int

    def __post_init__(self):
        if len(self.exponents) != 2 * self.n * self.r:
            raise ValueError(f"expected {2 * self.n * self.r} exponents, got {len(self.exponents)}")
        object.__setattr__(self, "exponents", tuple(int(e) for e in self.exponents))

    @classmethod
    def from_fibers(cls, tower, pairs):
        """Fiber-constant type from pairs (value on E_K(ι_j), value on E_K(ῑ_j))."""
        if len(pairs) != tower.r:
            raise ValueError(f"need {tower.r} pairs")
        up = [a for a, _ in pairs for _ in range(tower.n)]
        down = [b for _, b in pairs for _ in range(tower.n)]
        return cls(tuple(up + down), tower.n, tower.r)

    def __len__(self):
        return len(self.exponents)

    def __getitem__(self, p):
        return self.exponents[p]

    def conj(self, p):
        j, i = divmod(p, self.n)
        return ((j + self.r) % (2 * self.r)) * self.n + i

    @property
    def weight(self):
        ws = {self[p] + self[self.conj(p)] for p in range(len(self))}
        if len(ws) != 1:
            raise PurityViolation(f"χ_τ + χ_τ̄ takes values {sorted(ws)}")
        return ws.pop()

    def fiber_value(self, j):
        vals = set(self.exponents[j * self.n:(j + 1) * self.n])
        if len(vals) != 1:
            raise FiberInconstant(f"type is not constant on fiber {j}")
        return vals.pop()

    @property
    def is_fiber_constant(self):
        return all(len(set(self.exponents[j * self.n:(j + 1) * self.n])) == 1
                   for j in range(2 * self.r))

    def permuted(self, perm):
        """The type of σχ when σ moves position p to perm[p]."""
        out = [None] * len(self)
        for p, q in enumerate(perm):
            out[q] = self[p]
        return InfinityType(tuple(out), self.n, self.r)

    def restricted(self):
        """χ̌_ι = n·χ_τ for τ over ι."""
        return InfinityType(tuple(self.n * self.fiber_value(j) for j in range(2 * self.r)), 1, self.r)

    @property
    def is_trivial(self):
        return not any(self.exponents)

    def __str__(self):
        return "(" + ", ".join(str(e) for e in self.exponents) + ")"


# -- exact arithmetic in the Galois closure ---------------------------------------

def _closure_root_polys(closure):
    """Roots of K inside M, as PARI polynomials in y, listed in the tower order of E_K."""
    t = closure.tower
    d = closure.digits
    polys = closure.roots_in_M(t.K)
    rts = t.roots_K(d)
    with digits(d + GUARD_DIGITS):
        vals = [eval_poly(p, closure.y0) for p in polys]
    out = [None] * len(rts)
    for p, v in zip(polys, vals):
        out[_nearest(v, rts)] = poly_to_pari(p, "y")
    return out


def _monomial_in_M(closure, root_polys, alpha, inf_type):
    """∏_τ τ(α)^{χ_τ} as an element of M (PARI t_POLMOD in y)."""
    a = pari.lift(pari(alpha)) if not isinstance(alpha, str) else pari(alpha)
    acc = pari.Mod(1, closure.poly)
    for p, e in enumerate(inf_type.exponents):
        if e:
            acc *= pari.Mod(pari.subst(a, "x", root_polys[p]), closure.poly) ** e
    return acc


def _coords_in_powers(gen, elt, closure):
    """Rational coordinates of ``elt`` on 1, gen, gen², ... (both in M), or None."""
    deg = closure.degree
    cols, g = [], pari.Mod(1, closure.poly)
    target = pari.lift(elt)
    for _ in range(deg):
        cols.append(pari.lift(g))
        g *= gen
        A = pari.matrix(deg, len(cols), [pari.polcoef(c, i, "y") for i in range(deg) for c in cols])
        b = pari.vector(deg, [pari.polcoef(target, i, "y") for i in range(deg)]).Col()
        sol = pari.matinverseimage(A, b)
        if len(sol):
            return sol
    return None


# -- the coefficient field ------------------------------------------------------------

@dataclass(eq=False)
class CoefficientField:
    """E with the images of the type-field generator t and of the radicals v_j."""
    field: object                   # NumberField
    t_expr: object                  # t as a polynomial in the generator of E (fmpq_poly)
    v_exprs: tuple                  # v_j likewise
    base_index: int                 # canonical index of ρ0
    sigma_of: tuple                 # per canonical ρ: label of a closure element σ with ρ|T = σ|T
    degree: int = 0

    def __post_init__(self):
        self.degree = self.field.degree

    def roots(self, d):
        return self.field.roots(d)

    def t_value(self, rho, d):
        with digits(d + GUARD_DIGITS):
            return eval_poly(self.t_expr, self.roots(d)[rho])

    def v_values(self, rho, d):
        with digits(d + GUARD_DIGITS):
            z = self.roots(d)[rho]
            return [eval_poly(v, z) for v in self.v_exprs]

    def embed(self, elt, rho, d):
        with digits(d + GUARD_DIGITS):
            return eval_poly(elt, self.roots(d)[rho])


def _build_coefficient_field(closure, type_K, gens_data, d):
    """Exact E = T(v_1, ..., v_m) and the matching of its embeddings with cosets.

    ``gens_data`` holds (d_j, c_j, v_j) with c_j ∈ M exact and v_j the chosen
    complex d_j-th root of the base value of c_j.
    """
    stab = [e.label for e in closure.elements
            if type_K.permuted(e.perm_K).exponents == type_K.exponents]
    tpol, t0, t_in_M = closure.fixed_field(stab)
    red = pari.polredabs(tpol, 1)
    tpol, tmap = red[0], red[1]              # old root = tmap(new root)
    # express the new generator of T in M
    inv = pari.modreverse(tmap)              # new root = inv(old root)
    t_in_M_pari = pari.Mod(poly_to_pari(t_in_M, "y"), closure.poly)
    tnew_M = pari.subst(pari.lift(inv), "x", t_in_M_pari)
    with digits(d + GUARD_DIGITS):
        t0 = eval_poly(pari_to_fmpq_poly(pari.subst(pari.lift(tnew_M), "y", "x")), closure.y0)

    # current field Q(ξ) with expressions (polynomials in x) for t and the v's;
    # while adjoining, the base field uses the variable w so that x stays the
    # (higher priority) relative variable
    x, w = pari("x"), pari("w")
    cur = tpol
    t_expr = x
    v_exprs = []
    for dj, cj, vj in gens_data:
        coords = _coords_in_powers(tnew_M, cj, closure)
        c_T = sum(coords[i] * x ** i for i in range(len(coords)))
        c_cur = pari.lift(pari.Mod(pari.subst(c_T, "x", t_expr), cur))
        cur_w = pari.subst(cur, "x", w)
        nf = pari.nfinit(cur_w)
        relpol = x ** dj - pari.Mod(pari.subst(c_cur, "x", w), cur_w)
        xi0 = _current_base_value(cur, t_expr, v_exprs, t0, gens_data, d)
        facs = pari.nffactor(nf, relpol)
        best = min((facs[i, 0] for i in range(int(pari.matsize(facs)[0]))),
                   key=lambda f: _eval_relative(f, xi0, vj, d))
        if int(pari.poldegree(best, "x")) == 1:
            root = -pari.polcoef(best, 0, "x") / pari.polcoef(best, 1, "x")
            v_exprs.append(pari.subst(pari.lift(pari.lift(root)), "w", x))
            continue
        eq = pari.rnfequation(nf, best, 1)
        newpol, old_in_new, k = eq[0], pari.lift(eq[1]), int(eq[2])
        # new root = x_rel + k·ξ, hence x_rel = new root - k·ξ
        t_expr = pari.lift(pari.Mod(pari.subst(t_expr, "x", old_in_new), newpol))
        v_exprs = [pari.lift(pari.Mod(pari.subst(v, "x", old_in_new), newpol)) for v in v_exprs]
        v_exprs.append(pari.lift(pari.Mod(x - k * old_in_new, newpol)))
        cur = newpol
    # polish the final presentation
    red = pari.polredabs(cur, 1)
    cur, m = red[0], pari.lift(red[1])
    t_expr = pari.lift(pari.Mod(pari.subst(t_expr, "x", m), cur))
    v_exprs = [pari.lift(pari.Mod(pari.subst(v, "x", m), cur)) for v in v_exprs]

    E = build_field(str(cur))
    t_fx = pari_to_fmpq_poly(t_expr)
    v_fx = tuple(pari_to_fmpq_poly(v) for v in v_exprs)
    rts = E.roots(d)
    with digits(d + GUARD_DIGITS):
        # σ(t) for every closure element
        tM = pari_to_fmpq_poly(pari.subst(pari.lift(tnew_M), "y", "x"))
        sig_vals = [eval_poly(tM, img) for img in closure.images]
        sigma_of = []
        for z in rts:
            tv = eval_poly(t_fx, z)
            dists = [abs(tv - sv).mid() for sv in sig_vals]
            best = min(dists)
            lab = min(a for a in range(len(dists)) if dists[a] <= best * 1000 + arb(10) ** (10 - d))
            sigma_of.append(lab)
        base = None
        for i, z in enumerate(rts):
            if not abs(eval_poly(t_fx, z) - t0).mid() < arb(10) ** (10 - d):
                continue
            if all(abs(eval_poly(v, z) - g[2]).mid() < arb(10) ** (10 - d) for v, g in zip(v_fx, gens_data)):
                base = i
                break
    if base is None:
        raise NoCharacterExists("could not locate the base embedding of the coefficient field")
    return CoefficientField(E, t_fx, v_fx, base, tuple(sigma_of))


def _current_base_value(cur, t_expr, v_exprs, t0, gens_data, d):
    """Base complex value of the current generator ξ (matched through t and the v's)."""
    rts = build_field(str(cur)).roots(d)
    te = pari_to_fmpq_poly(t_expr)
    ve = [pari_to_fmpq_poly(v) for v in v_exprs]
    with digits(d + GUARD_DIGITS):
        for z in rts:
            if abs(eval_poly(te, z) - t0).mid() > arb(10) ** (10 - d):
                continue
            if all(abs(eval_poly(v, z) - g[2]).mid() < arb(10) ** (10 - d) for v, g in zip(ve, gens_data)):
                return z
    raise NoCharacterExists("lost track of the base embedding while adjoining radicals")


def _eval_relative(f, xi, z, d):
    """|f(ξ, z)| for a relative polynomial in x with coefficients in Q[w]/(·), w ↦ ξ."""
    with digits(d + GUARD_DIGITS):
        acc = acb(0)
        for i in range(int(pari.poldegree(f, "x")), -1, -1):
            c = pari.subst(pari.lift(pari.lift(pari.polcoef(f, i, "x"))), "w", "x")
            acc = acc * z + eval_poly(pari_to_fmpq_poly(c), xi)
        return abs(acc).mid()


# -- characters ---------------------------------------------------------------------

@dataclass(eq=False)
class AlgebraicHeckeCharacter:
    tower: object
    infinity_type: InfinityType
    modulus: Ideal
    ray: object                     # RayClassGroup of the field the character lives on
    roots_choice: tuple             # k_j: v_j = (principal root)·ζ_{d_j}^{k_j}
    coefficients: CoefficientField
    level: str = "K"                # "K", or "k" for a restriction
    parent: object = None           # the character over K when level == "k"
    closure: object = None
    precision_digits: int = 50
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def field(self):
        return self.tower.K if self.level == "K" else self.tower.k

    @property
    def coefficient_field(self):
        return self.coefficients.field

    @property
    def weight(self):
        return self.infinity_type.weight

    @property
    def base_rho(self):
        return self.coefficients.base_index

    def rho_list(self):
        return list(range(self.coefficients.degree))

    def avatar_type(self, rho):
        """Infinity type of ρχ (indexed by the tower order on E_F)."""
        sigma = self.closure_element(rho)
        if self.level == "K":
            return self.infinity_type.permuted(sigma.perm_K)
        return self.parent.avatar_type(rho).restricted()

    def closure_element(self, rho):
        lab = self.coefficients.sigma_of[rho]
        return next(e for e in self.closure.elements if e.label == lab)

    def __str__(self):
        return (f"χ over {self.level} with type {self.infinity_type}, modulus {self.modulus}, "
                f"E = Q[x]/({self.coefficient_field})")


def _decompose(chi, ideal):
    """(e, α) with ideal = (α)·∏ g_j^{e_j}, α ≡ 1 mod* 𝔪; α as a polynomial in x."""
    key = ("dec", ideal)
    if key not in chi._cache:
        F = chi.ray.field
        res = pari.bnrisprincipal(chi.ray.bnr, ideal.to_pari(F), 1)
        e = tuple(int(c) for c in res[0])
        alpha = pari_to_fmpq_poly(pari.nfbasistoalg(F.nf, res[1]))
        chi._cache[key] = (e, alpha)
    return chi._cache[key]


def _monomial(chi, alpha, rho, d):
    """∏_τ τ(α)^{(ρχ)_τ} numerically, τ over the embeddings of the base field of χ."""
    typ = chi.avatar_type(rho)
    t = chi.tower
    rts = t.roots_K(d) if chi.level == "K" else t.roots_k(d)
    with digits(d + GUARD_DIGITS):
        acc = acb(1)
        for p, e in enumerate(typ.exponents):
            if e:
                acc *= eval_poly(alpha, rts[p]) ** e
        return acc


def evaluate(chi, rho, ideal, d=None):
    """ρχ(𝔞) for 𝔞 coprime to the modulus."""
    d = d or chi.precision_digits
    rho = getattr(rho, "index", rho) if not isinstance(rho, int) else rho
    if isinstance(ideal, (int, str)):
        ideal = ideal_from_pari(chi.field, pari(ideal))
    elif isinstance(ideal, PrimeIdeal):
        ideal = Ideal.from_factors([(ideal, 1)])
    if not ideal.is_coprime_to(chi.modulus):
        raise NotCoprime(f"{ideal} is not coprime to the modulus {chi.modulus}")
    if chi.level == "k":
        return evaluate(chi.parent, rho, extend_ideal(chi.tower, ideal), d)
    e, alpha = _decompose(chi, ideal)
    val = _monomial(chi, alpha, rho, d)
    if e:
        vs = chi.coefficients.v_values(rho, d)
        with digits(d + GUARD_DIGITS):
            for v, k in zip(vs, e):
                val *= v ** k
    return val


def evaluate_prime(chi, rho, P, d=None):
    return evaluate(chi, rho, Ideal.from_factors([(P, 1)]), d)


# -- restriction to k -----------------------------------------------------------------

def extend_ideal(tower, ideal):
    """𝔞·O_K for an ideal 𝔞 of O_k."""
    if not ideal.factorization:
        return Ideal.unit()
    K = tower.K
    img = poly_to_pari(tower.k_in_K)
    pairs = []
    for P, e in ideal.factorization:
        g = pari.subst(poly_to_pari(_gen_poly(P)), "x", img)
        J = pari.idealadd(K.nf, P.residue_characteristic, pari.Mod(g, K.pari_poly()))
        for Q, f in ideal_from_pari(K, J).factorization:
            pairs.append((Q, f * e))
    return Ideal.from_factors(pairs)


def _gen_poly(P):
    from ._arith import parse_poly
    return parse_poly(P.generators[1])


def contract_modulus(tower, modulus):
    """𝔪 ∩ O_k for an ideal 𝔪 of O_K."""
    if not modulus.factorization:
        return Ideal.unit()
    pairs = []
    seen = set()
    for Q, _ in modulus.factorization:
        for P, _ in factor_rational_prime(tower.k, Q.residue_characteristic):
            if P in seen:
                continue
            ext = dict((R, f) for R, f in extend_ideal(tower, Ideal.from_factors([(P, 1)])).factorization)
            need = 0
            for R, m in modulus.factorization:
                if R in ext:
                    need = max(need, -(-m // ext[R]))
            if need:
                pairs.append((P, need))
                seen.add(P)
    return Ideal.from_factors(pairs)


def restrict_to_k(chi):
    """χ̌ = χ restricted to the ideles of k, i.e. 𝔞 ↦ χ(𝔞·O_K)."""
    if chi.level != "K":
        raise ValueError("restriction applies to characters over K")
    typ = chi.infinity_type.restricted()
    m = contract_modulus(chi.tower, chi.modulus)
    ray = ray_class_group(chi.tower.k, m)
    return AlgebraicHeckeCharacter(chi.tower, typ, m, ray, (), chi.coefficients, "k", chi,
                                   chi.closure, chi.precision_digits)


# -- criticality ---------------------------------------------------------------------

@dataclass(frozen=True)
class CriticalityReport:
    is_critical: bool
    weight: int
    E_K_minus: tuple
    E_K_plus: tuple
    E_k_minus: tuple
    E_k_plus: tuple
    per_rho: tuple              # verdict for every ρ ∈ E_E


def _critical(typ):
    return all(min(typ[p], typ[typ.conj(p)]) <= -1 and max(typ[p], typ[typ.conj(p)]) >= 0
               for p in range(len(typ)))


def _critical_cm(typ_k, n):
    return all(min(typ_k[j], typ_k[typ_k.conj(j)]) <= -n and max(typ_k[j], typ_k[typ_k.conj(j)]) >= 0
               for j in range(len(typ_k)))


def critical_type(typ):
    """Criticality of a bare infinity type over K; raises on impurity."""
    typ.weight
    return _critical(typ)


def check_critical(chi, rho=None):
    if chi.level != "K":
        raise ValueError("criticality is checked on the character over K")
    w = chi.infinity_type.weight
    verdicts = []
    for r in chi.rho_list():
        typ = chi.avatar_type(r)
        a = _critical(typ)
        b = _critical_cm(typ.restricted(), typ.n) if typ.is_fiber_constant else a
        if a != b:
            raise AssertionError(f"criticality conditions disagree at ρ = {r}")
        verdicts.append(a)
    if len(set(verdicts)) != 1:
        raise AssertionError("criticality depends on ρ")
    rho = chi.base_rho if rho is None else rho
    typ = chi.avatar_type(rho)
    minus = tuple(p for p in range(len(typ)) if typ[p] <= -1)
    plus = tuple(p for p in range(len(typ)) if typ[p] >= 0)
    tk = typ.restricted() if typ.is_fiber_constant else None
    kminus = tuple(j for j in range(len(tk)) if tk[j] <= -typ.n) if tk else ()
    kplus = tuple(j for j in range(len(tk)) if tk[j] >= 0) if tk else ()
    return CriticalityReport(verdicts[0], w, minus, plus, kminus, kplus, tuple(verdicts))


# -- construction ---------------------------------------------------------------------

def unit_obstruction(tower, inf_type, ray, d=None):
    """Units ≡ 1 mod* 𝔪 (generators) on which the monomial is not 1."""
    d = d or tower.precision_digits
    K = tower.K
    info = gp("(b)->[b.tu[2], b.fu]")(K.bnf)
    units = [pari.lift(info[0])] + [pari.lift(u) for u in info[1]]
    if ray.modulus.norm == 1:
        kernel = [[1 if i == j else 0 for i in range(len(units))] for j in range(len(units))]
    else:
        cyc = list(gp("(b)->b.bid.cyc")(ray.bnr))
        M = pari.matrix(len(cyc), len(units), [ray.unit_images[j][i] for i in range(len(cyc))
                                               for j in range(len(units))])
        big = pari.matconcat([M, pari.matdiagonal(cyc)]) if cyc else M
        ker = pari.matkerint(big)
        kernel = [[int(ker[i, c]) for i in range(len(units))] for c in range(int(pari.matsize(ker)[1]))]
    rts = tower.roots_K(d)
    bad = []
    with digits(d + GUARD_DIGITS):
        vals = [[eval_poly(pari_to_fmpq_poly(u), z) for z in rts] for u in units]
        for vec in kernel:
            acc = acb(1)
            for c, uv in zip(vec, vals):
                if c:
                    m = acb(1)
                    for p, e in enumerate(inf_type.exponents):
                        if e:
                            m *= uv[p] ** e
                    acc *= m ** c
            if not abs(acc - 1).mid() < arb(10) ** (10 - d):
                bad.append(tuple(vec))
    return bad


def enumerate_characters(tower, inf_type, modulus=None, precision_digits=None, closure=None):
    """All characters over K with this infinity type and modulus."""
    d = precision_digits or max(tower.precision_digits, 50)
    if not isinstance(inf_type, InfinityType):
        inf_type = InfinityType(tuple(inf_type), tower.n, tower.r)
    inf_type.weight
    for j in range(2 * tower.r):
        inf_type.fiber_value(j)
    ray = ray_class_group(tower.K, modulus)
    bad = unit_obstruction(tower, inf_type, ray, d)
    if bad:
        raise NoCharacterExists(f"the monomial is nontrivial on units ≡ 1 mod {ray.modulus}")
    closure = closure or GaloisClosure(tower, d=d)
    roots = _closure_root_polys(closure)
    gens = list(gp("(b)->b.gen")(ray.bnr)) if ray.cyc else []
    exact = []
    rK = tower.roots_K(d)
    for g, dj in zip(gens, ray.cyc):
        res = pari.bnrisprincipal(ray.bnr, pari.idealpow(tower.K.nf, g, dj), 1)
        alpha = pari.nfbasistoalg(tower.K.nf, res[1])
        c_exact = _monomial_in_M(closure, roots, alpha, inf_type)
        a = pari_to_fmpq_poly(alpha)
        with digits(d + GUARD_DIGITS):
            c_num = acb(1)
            for p, e in enumerate(inf_type.exponents):
                if e:
                    c_num *= eval_poly(a, rK[p]) ** e
            principal = (c_num.log() / dj).exp()
        exact.append((dj, c_exact, principal))
    chars = []
    for choice in product(*[range(dj) for dj in ray.cyc]):
        gdata = []
        with digits(d + GUARD_DIGITS):
            for (dj, c, v), k in zip(exact, choice):
                zeta = (2 * arb.pi() * acb(0, 1) * k / dj).exp()
                gdata.append((dj, c, v * zeta))
        coeff = _build_coefficient_field(closure, inf_type, gdata, d)
        chars.append(AlgebraicHeckeCharacter(tower, inf_type, ray.modulus, ray, tuple(choice), coeff,
                                             "K", None, closure, d))
    return chars


def desk_character(tower, pairs=None, modulus=None, precision_digits=None):
    """First character found for a fiber type (default: smallest admissible one)."""
    if pairs is None:
        return find_smallest_character(tower, precision_digits=precision_digits)
    typ = InfinityType.from_fibers(tower, pairs)
    return enumerate_characters(tower, typ, modulus, precision_digits)[0]


def find_smallest_character(tower, max_norm=50, max_abs=6, precision_digits=None):
    """Smallest-modulus critical character with a fiber-constant type.

    Moduli are tried by increasing norm; for each, types are ordered by |w|,
    then by the largest absolute exponent, then lexicographically.
    """
    from .ideals import enumerate_ideals
    types = []
    for combo in product(range(-max_abs, max_abs + 1), repeat=2 * tower.r):
        pairs = [(combo[2 * j], combo[2 * j + 1]) for j in range(tower.r)]
        if len({a + b for a, b in pairs}) != 1:
            continue
        typ = InfinityType.from_fibers(tower, pairs)
        if not critical_type(typ):
            continue
        types.append((abs(typ.weight), max(abs(c) for c in combo), tuple(-c for c in combo), typ))
    types.sort(key=lambda t: t[:3])
    for m in enumerate_ideals(tower.K, max_norm):
        ray = ray_class_group(tower.K, m)
        for *_, typ in types:
            if not unit_obstruction(tower, typ, ray, precision_digits):
                return enumerate_characters(tower, typ, m, precision_digits)[0]
    raise NoCharacterExists(f"no critical character with modulus norm ≤ {max_norm}")
