"""Integral ideals in factored form, prime decomposition and ray class groups.

The maximal order and all class-group questions go through PARI; an ideal is
kept as its factorization into :class:`PrimeIdeal` objects, which is all the
character and L-function code needs.
"""

from dataclasses import dataclass, field
from functools import cached_property, reduce

from ._arith import gp, pari, pari_to_fmpq_poly, fmpq_to_fraction
from .errors import ModulusTooLarge, NotCoprime, NotTotallyImaginary

MAX_MODULUS_NORM = 10**4


@dataclass(frozen=True)
class PrimeIdeal:
    residue_characteristic: int
    residue_degree: int
    ramification_index: int
    norm: int
    index: int                  # position among the primes above p
    field_key: tuple            # defining polynomial of the ambient field
    pr: object = field(default=None, compare=False, repr=False, hash=False)

    @property
    def key(self):
        return (self.norm, self.residue_characteristic, self.index)

    def __lt__(self, other):
        return self.key < other.key

    @cached_property
    def generators(self):
        """(p, coefficients of g(θ), ascending) with 𝔭 = (p, g(θ))."""
        g = pari_to_fmpq_poly(pari.nfbasistoalg(_nf(self.field_key), self.pr[1]))
        coeffs = tuple(fmpq_to_fraction(c) for c in g.coeffs())
        return (self.residue_characteristic, tuple(int(c) if c.denominator == 1 else c for c in coeffs))

    def __str__(self):
        g = pari_poly_str(self.generators[1])
        return f"({self.residue_characteristic}, {g})"


_NF = {}


def _nf(key):
    if key not in _NF:
        _NF[key] = pari.nfinit(pari(" + ".join(f"({c})*x^{i}" for i, c in enumerate(key) if c)))
    return _NF[key]


def pari_poly_str(coeffs):
    terms = [f"({c})*x^{i}" for i, c in enumerate(coeffs) if c]
    return str(pari(" + ".join(terms) if terms else "0"))


@dataclass(frozen=True)
class Ideal:
    factorization: tuple        # ((PrimeIdeal, exponent), ...) sorted by prime
    norm: int

    @classmethod
    def unit(cls):
        return cls((), 1)

    @classmethod
    def from_factors(cls, pairs):
        acc = {}
        for P, e in pairs:
            acc[P] = acc.get(P, 0) + e
        fac = tuple(sorted(((P, e) for P, e in acc.items() if e), key=lambda t: t[0].key))
        return cls(fac, reduce(lambda a, t: a * t[0].norm ** t[1], fac, 1))

    def __mul__(self, other):
        return Ideal.from_factors(self.factorization + other.factorization)

    def __pow__(self, k):
        return Ideal.from_factors(tuple((P, e * k) for P, e in self.factorization))

    def primes(self):
        return [P for P, _ in self.factorization]

    def is_coprime_to(self, other):
        mine = {P for P, _ in self.factorization}
        return not any(P in mine for P, _ in other.factorization)

    def to_pari(self, F):
        if not self.factorization:
            return pari.idealhnf(F.nf, 1)
        return pari.idealfactorback(F.nf, pari.matrix(len(self.factorization), 2,
                                    [x for P, e in self.factorization for x in (P.pr, e)]))

    def __str__(self):
        if not self.factorization:
            return "(1)"
        return "·".join(str(P) + (f"^{e}" if e != 1 else "") for P, e in self.factorization)


_PRIMES = {}


def factor_rational_prime(F, p):
    """Primes of O_F above p, each with its ramification index as exponent."""
    key = (F.defining_polynomial, int(p))
    if key not in _PRIMES:
        out = []
        for i, pr in enumerate(pari.idealprimedec(F.nf, int(p))):
            e, f = int(pr[2]), int(pr[3])
            out.append((PrimeIdeal(int(p), f, e, int(p) ** f, i, F.defining_polynomial, pr), e))
        _PRIMES[key] = tuple(out)
    return list(_PRIMES[key])


def ideal_from_pari(F, x):
    """Ideal in factored form from anything PARI accepts as an ideal of F."""
    fa = pari.idealfactor(F.nf, x)
    pairs = []
    for i in range(int(pari.matsize(fa)[0])):
        pr, e = fa[i, 0], int(fa[i, 1])
        for P, _ in factor_rational_prime(F, int(pr[0])):
            if bool(pari.idealval(F.nf, pr, P.pr) > 0) and P.norm == int(pr[0]) ** int(pr[3]):
                pairs.append((P, e))
                break
    return Ideal.from_factors(pairs)


def prime_ideals_up_to(F, X):
    """All prime ideals of norm ≤ X, sorted by norm."""
    out = []
    for p in pari.primes([2, int(X)]) if X >= 2 else []:
        for P, _ in factor_rational_prime(F, int(p)):
            if P.norm <= X:
                out.append(P)
    out.sort(key=lambda P: P.key)
    return out


def enumerate_ideals(F, X):
    """Every integral ideal of norm ≤ X exactly once, in order of norm."""
    X = int(X)
    primes = prime_ideals_up_to(F, X)
    # all ideals as products of prime powers, P_i used in increasing index order
    found = [(1, ())]
    for i, P in enumerate(primes):
        extra = []
        for n, fac in found:
            m, e = n * P.norm, 1
            while m <= X:
                extra.append((m, fac + ((P, e),)))
                m *= P.norm
                e += 1
        found.extend(extra)
    found.sort(key=lambda t: (t[0], tuple((P.key, e) for P, e in t[1])))
    for n, fac in found:
        yield Ideal(fac, n)


@dataclass(frozen=True, eq=False)
class RayClassGroup:
    modulus: Ideal
    cyc: tuple                      # elementary divisors
    class_representatives: tuple    # Ideals coprime to the modulus, one per class
    composition_table: tuple        # table[i][j] = index of the class of rep_i·rep_j
    unit_images: tuple              # discrete logs in (O/𝔪)^× of torsion and fundamental units
    bnr: object = field(repr=False, default=None)
    field: object = field(repr=False, default=None)

    @property
    def order(self):
        return len(self.class_representatives)

    def log(self, ideal):
        """Coordinates of the class of ``ideal`` on the PARI generators."""
        if not ideal.is_coprime_to(self.modulus):
            raise NotCoprime(f"{ideal} is not coprime to {self.modulus}")
        return tuple(int(c) for c in pari.bnrisprincipal(self.bnr, ideal.to_pari(self.field), 0))

    def class_index(self, ideal):
        return _flat_index(self.log(ideal), self.cyc)


def _flat_index(v, cyc):
    i = 0
    for c, d in zip(v, cyc):
        i = i * d + int(c) % d
    return i


def _unflatten(i, cyc):
    out = []
    for d in reversed(cyc):
        out.append(i % d)
        i //= d
    return tuple(reversed(out))


def _as_ideal(F, modulus):
    if isinstance(modulus, Ideal):
        return modulus
    return ideal_from_pari(F, pari(modulus) if isinstance(modulus, str) else modulus)


def ray_class_group(F, modulus=None):
    """Ray class group of F for a finite modulus, with explicit representatives."""
    if not F.is_totally_imaginary:
        raise NotTotallyImaginary(f"{F} has a real embedding")
    m = Ideal.unit() if modulus is None else _as_ideal(F, modulus)
    if m.norm > MAX_MODULUS_NORM:
        raise ModulusTooLarge(f"N(m) = {m.norm} > {MAX_MODULUS_NORM}")
    bnr = pari.bnrinit(F.bnf, m.to_pari(F), 1)
    cyc = tuple(int(c) for c in gp("(b)->b.cyc")(bnr))
    size = 1
    for c in cyc:
        size *= c
    reps = {0: Ideal.unit()}
    X = 2
    while len(reps) < size:
        for I in enumerate_ideals(F, X):
            if len(reps) == size:
                break
            if not I.is_coprime_to(m):
                continue
            idx = _flat_index(pari.bnrisprincipal(bnr, I.to_pari(F), 0), cyc)
            reps.setdefault(idx, I)
        X *= 2
    reps = tuple(reps[i] for i in range(size))
    table = tuple(tuple(_flat_index(tuple(a + b for a, b in zip(_unflatten(i, cyc), _unflatten(j, cyc))), cyc)
                        for j in range(size)) for i in range(size))
    info = gp("(b)->[b.tu[2], b.fu]")(F.bnf)
    units = [info[0]] + list(info[1])
    if m.norm == 1:
        images = tuple(() for _ in units)
    else:
        bid = gp("(b)->b.bid")(bnr)
        images = tuple(tuple(int(c) for c in pari.ideallog(F.nf, u, bid)) for u in units)
    return RayClassGroup(m, cyc, reps, table, images, bnr, F)
