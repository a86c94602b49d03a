"""Command-line front end.

Tower and character files are TOML documents::

    # tower.toml
    K.poly = "x^6 - 2*x^3 + 2"
    k.poly = "x^2 + 1"               # optional
    basis = ["1", "x^5 - x^2", "(x^5 - x^2)^2"]
    precision_digits = 50

    # char.toml
    inf_type = [2, 2, 2, -2, -2, -2]  # or: pairs = [[2, -2]]
    modulus = 1                       # or [p, "g(x)"], or a list of such pairs
    finite_char = [0]                 # optional: picks the character by its root choices
    enumerate = true                  # instead of the above: smallest critical character

Without ``--tower`` the built-in tower Q(i, 2^{1/3}) over Q(i) is used.
Exit codes: 0 success, 1 usage, 2 input or precondition, 3 certification
failure, 4 convergence failure.
"""

import argparse
import json
import random
import sys
from dataclasses import dataclass

try:
    import tomllib
except ImportError:                # Python < 3.11
    import tomli as tomllib

from flint import acb

from ._arith import parse_poly, pari, poly_str
from .errors import HeckeError, NoCharacterExists, PrecisionTooLow

MIN_DIGITS = 30
MIN_CUTOFF = 100
SHOW = 30                          # significant digits printed for complex values


class UsageError(Exception):
    pass


class InputError(HeckeError):
    """Unreadable or incomplete input file (exit code 2)."""


@dataclass
class RunConfig:
    command: str
    tower: str = None
    char: str = None
    digits: int = 50
    cutoff: int = None
    cutoff_scale: float = 1
    seed_order: tuple = None
    report: str = None
    json: bool = False
    kernel: str = "all"
    height: int = 10 ** 6

    def __post_init__(self):
        if self.digits < MIN_DIGITS:
            raise PrecisionTooLow(f"--digits {self.digits} is below {MIN_DIGITS}")
        if self.cutoff is not None and self.cutoff < MIN_CUTOFF:
            raise UsageError(f"--cutoff must be at least {MIN_CUTOFF}")
        if self.cutoff_scale <= 0:
            raise UsageError("--cutoff-scale must be positive")


# -- reports ------------------------------------------------------------------------

class Report:
    """Ordered sections of key/value pairs and tables, rendered as text or JSON."""

    def __init__(self, title):
        self.title = title
        self.sections = []

    def section(self, name):
        self.sections.append((name, []))
        return self

    def add(self, key, value):
        self.sections[-1][1].append((key, value))
        return self

    def as_dict(self):
        return {"title": self.title,
                "sections": {name: {k: v for k, v in items} for name, items in self.sections}}

    def as_text(self):
        lines = [self.title, "=" * len(self.title)]
        for name, items in self.sections:
            lines += ["", f"[{name}]"]
            for k, v in items:
                if isinstance(v, list) and v and isinstance(v[0], dict):
                    lines.append(f"{k}:")
                    cols = list(v[0])
                    rows = [[str(row[c]) for c in cols] for row in v]
                    widths = [max(len(c), *(len(r[i]) for r in rows)) for i, c in enumerate(cols)]
                    lines.append("  " + "  ".join(c.ljust(w) for c, w in zip(cols, widths)))
                    for r in rows:
                        lines.append("  " + "  ".join(x.ljust(w) for x, w in zip(r, widths)))
                else:
                    lines.append(f"{k}: {_plain(v)}")
        return "\n".join(lines) + "\n"


def _plain(v):
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_plain(x) for x in v) + "]"
    return str(v)


def fmt(z, d=SHOW):
    """A complex value with an explicit precision tag."""
    z = acb(z)
    re, im = ("0" if x.contains(0) else x.mid().str(d, radius=False) for x in (z.real, z.imag))
    sign = "+"
    if im.startswith("-"):
        sign, im = "-", im[1:]
    return f"{re} {sign} {im}*I [{d} digits]"


def fmt_err(x):
    return f"{x:.3e}"


def emit(report, cfg, out=None):
    text = json.dumps(report.as_dict(), indent=2, ensure_ascii=False) + "\n" if cfg.json else report.as_text()
    if cfg.report:
        with open(cfg.report, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        (out or sys.stdout).write(text)


# -- input files ----------------------------------------------------------------------

def _load(path):
    try:
        with open(path, "rb") as fh:
            return tomllib.load(fh)
    except (OSError, tomllib.TOMLDecodeError) as e:
        raise InputError(f"cannot read {path}: {e}") from e


def load_tower(cfg):
    from .field_tower import build_tower, desk_tower
    if cfg.tower is None:
        return desk_tower(cfg.digits, cfg.seed_order)
    data = _load(cfg.tower)
    try:
        K = data["K"]["poly"]
    except KeyError:
        raise InputError("tower file needs K.poly") from None
    basis = data.get("basis")
    if basis is not None:
        basis = [parse_poly(str(b)) for b in basis]
    digits_ = max(cfg.digits, int(data.get("precision_digits", cfg.digits)))
    return build_tower(K, data.get("k", {}).get("poly"), data.get("k0", {}).get("poly"),
                       basis, digits_, cfg.seed_order)


def parse_modulus(F, spec):
    """1, an integer, a two-element ideal [p, "g(x)"], or a list of such pairs."""
    from .ideals import ideal_from_pari
    if spec is None or spec == 1:
        return None
    if isinstance(spec, int):
        return ideal_from_pari(F, pari.idealhnf(F.nf, spec))
    if len(spec) == 2 and isinstance(spec[0], int) and isinstance(spec[1], str):
        spec = [spec]
    acc = pari.idealhnf(F.nf, 1)
    for p, g in spec:
        acc = pari.idealmul(F.nf, acc, pari.idealhnf(F.nf, int(p), pari(g.replace("**", "^"))))
    return ideal_from_pari(F, acc)


def _type_from(tower, data):
    from .characters import InfinityType
    if "pairs" in data:
        return InfinityType.from_fibers(tower, [tuple(p) for p in data["pairs"]])
    if "inf_type" in data:
        return InfinityType(tuple(data["inf_type"]), tower.n, tower.r)
    raise InputError("character file needs inf_type, pairs or enumerate = true")


def load_characters(cfg, tower):
    from .characters import enumerate_characters, find_smallest_character
    data = _load(cfg.char) if cfg.char else {"enumerate": True}
    if data.get("enumerate") and "inf_type" not in data and "pairs" not in data:
        return [find_smallest_character(tower, precision_digits=cfg.digits)]
    typ = _type_from(tower, data)
    modulus = parse_modulus(tower.K, data.get("modulus"))
    chars = enumerate_characters(tower, typ, modulus, cfg.digits)
    if "finite_char" in data:
        want = tuple(data["finite_char"])
        chars = [c for c in chars if c.roots_choice == want]
        if not chars:
            raise NoCharacterExists(f"no character with finite part {list(want)}")
    return chars


# -- commands -------------------------------------------------------------------------

def _degree_one_notice(cfg):
    if cfg.tower is None:
        return None
    K = _load(cfg.tower).get("K", {}).get("poly")
    if K is not None and parse_poly(str(K)).degree() == 1:
        return (Report("field").section("tower").add("K", str(K)).add("n", 1)
                .add("notice", "K = Q: nothing to certify, the quotient is taken to be 1"))
    return None


def cmd_field(cfg):
    from .field_tower import delta_k0, delta_relative
    notice = _degree_one_notice(cfg)
    if notice:
        return notice, 0
    t = load_tower(cfg)
    rep = Report("field").section("tower")
    for name, F in (("K", t.K), ("k", t.k), ("k0", t.k0)):
        rep.add(f"{name}", str(F)).add(f"{name}.degree", F.degree).add(f"{name}.discriminant", F.discriminant)
    rep.add("maximal CM subfield", str(t.k)).add("n", t.n).add("r", t.r)
    rep.add("seed order", list(t.seed_order))
    rep.add("relative basis", [poly_str(b) for b in t.relative_basis])
    if t.n == 1:
        rep.add("notice", "K = k: nothing to certify, the quotient is taken to be 1")
    rep.section("embeddings")
    rep.add("E_K", [{"position": p, "over E_k": p // t.n, "value": fmt(z, 20)}
                    for p, z in enumerate(t.roots_K())])
    rep.add("E_k", [{"position": j, "value": fmt(z, 20)} for j, z in enumerate(t.roots_k())])
    rep.section("periods").add("delta(k0)", fmt(delta_k0(t)))
    for j in range(2 * t.r):
        rep.add(f"delta(K/k, iota_{j})", fmt(delta_relative(t, j)))
    return rep, 0


def _char_rows(chars):
    from .characters import check_critical
    rows = []
    for i, c in enumerate(chars):
        crit = check_critical(c)
        rows.append({"index": i, "finite part": list(c.roots_choice), "E": str(c.coefficient_field),
                     "weight": crit.weight, "critical": crit.is_critical,
                     "E_k^-": list(crit.E_k_minus)})
    return rows


def cmd_chars(cfg):
    t = load_tower(cfg)
    rep = Report("chars").section("input").add("tower K", str(t.K))
    try:
        chars = load_characters(cfg, t)
    except NoCharacterExists as e:
        rep.section("characters").add("count", 0).add("reason", str(e))
        return rep, 0
    c0 = chars[0]
    rep.add("infinity type", str(c0.infinity_type)).add("modulus", str(c0.modulus))
    rep.add("ray class group", list(c0.ray.cyc))
    rep.section("characters").add("count", len(chars)).add("list", _char_rows(chars))
    return rep, 0


def cmd_period(cfg):
    from .field_tower import GaloisClosure
    from .periods_signs import decompose_sigma, embedding_permutation, omega, omega_covariance
    t = load_tower(cfg)
    chi = load_characters(cfg, t)[0]
    d = cfg.digits
    rep = Report("period").section("character").add("infinity type", str(chi.infinity_type))
    rep.add("modulus", str(chi.modulus))
    om = omega(chi, tower=t, d=d)
    rep.section("omega").add("E_k^-", list(om.negative)).add("delta(k0)^(n-1)", fmt(om.delta_k0_power))
    for j, v in om.deltas:
        rep.add(f"delta(K/k, iota_{j})", fmt(v))
    rep.add("omega", fmt(om.omega))
    rows, ok = [], True
    for e in GaloisClosure(t, d=d).elements:
        s = embedding_permutation(t, e)
        dec = decompose_sigma(s, t)
        chk = omega_covariance(s, chi, None, t, d, dec)
        ok &= chk.passed
        rows.append({"sigma": e.label, "perm_K": list(s.perm_K), "p0": dec.p0,
                     "sign": chk.sign, "discrepancy": fmt_err(chk.discrepancy), "passed": chk.passed})
    rep.section("covariance").add("table", rows).add("passed", ok)
    return rep, 0 if ok else 3


def cmd_certify(cfg):
    from .certifier import (main_quotient, recognize_in_E, verify_galois_covariance,
                            TRIVIAL_QUOTIENT)
    t = load_tower(cfg)
    rep = Report("certify").section("run")
    rep.add("tower K", str(t.K)).add("k", str(t.k)).add("n", t.n).add("digits", cfg.digits)
    rep.add("cutoff", cfg.cutoff if cfg.cutoff else f"default x {cfg.cutoff_scale:g}")
    rep.add("seed order", list(t.seed_order))
    rep.add("height bound", cfg.height)
    if t.n == 1:
        rep.section("result").add("quotient", TRIVIAL_QUOTIENT)
        rep.add("notice", "K = k: quotient ≡ 1").add("passed", True)
        return rep, 0
    chi = load_characters(cfg, t)[0]
    rep.add("infinity type", str(chi.infinity_type)).add("modulus", str(chi.modulus))
    rep.add("finite part", list(chi.roots_choice)).add("E", str(chi.coefficient_field))
    tup = main_quotient(chi, t, cfg.digits, cutoff_scale=cfg.cutoff_scale, cutoff=cfg.cutoff)
    rep.section("quotient").add("L_inf ratio", str(tup.linf_ratio))
    rows = []
    for r in sorted(tup.values):
        rows.append({"rho": r, "Q": fmt(tup.values[r]), "L_f(0,chi)": fmt(tup.l_chi[r].value, 20),
                     "L_f(0,chi_check)": fmt(tup.l_check[r].value, 20),
                     "cutoff": tup.l_chi[r].cutoff_used, "drift": fmt_err(tup.l_chi[r].drift),
                     "condition": fmt_err(tup.condition[r])})
    rep.add("components", rows)
    cert = recognize_in_E(tup, chi.coefficients, cfg.height, raise_on_failure=False)
    rep.section("certificate").add("candidate", cert.candidate_str())
    rep.add("coordinates", [str(c) for c in cert.candidate])
    rep.add("minimal polynomial", list(cert.minimal_polynomial))
    rep.add("residuals", [fmt_err(cert.residuals[r]) for r in sorted(cert.residuals)])
    rep.add("passed", cert.passed)
    cov = verify_galois_covariance(chi, tup, cert if cert.passed else None, t, raise_on_failure=False)
    rep.section("covariance").add("tolerance", fmt_err(cov.tolerance))
    rep.add("table", [{"sigma": row.label, "rho": row.rho, "sigma.rho": row.sigma_rho, "sign": row.sign,
                       "kind": row.kind, "discrepancy": fmt_err(row.discrepancy), "passed": row.passed}
                      for row in cov.rows])
    rep.add("passed", cov.passed)
    ok = cert.passed and cov.passed
    rep.section("result").add("passed", ok)
    if not cov.passed:
        bad = max((r for r in cov.rows if not r.passed), key=lambda r: r.discrepancy)
        rep.add("error", f"CovarianceViolation at sigma = {bad.label}, rho = {bad.rho}")
    elif not cert.passed:
        rep.add("error", "HeightExceeded")
    return rep, 0 if ok else 3


# -- self tests -------------------------------------------------------------------------

def _battery_local(cfg):
    import mpmath
    from .field_tower import build_field
    from .errors import Ramified
    from .local_integrals import (archimedean_tate_integral, gram_determinant, measure_constant,
                                  monomial_tate_integral, unramified_euler_identity)
    rows = []
    for n in range(2, 9):
        g = gram_determinant(n)
        rows.append(("gram determinant n=%d" % n, abs(g - n), 0, g == n))
    mc = measure_constant(3, 2).value
    rows.append(("measure constant n=3, [k:Q]=2", abs(mc - 48), 0, mc == 48))
    for t in (0.5, 1, 1.5, 2, 3, 5):
        with mpmath.workdps(30):
            err = abs(archimedean_tate_integral(t) - (2 * mpmath.pi) ** (-t) * mpmath.gamma(t))
        rows.append((f"tate t={t}", float(err), 1e-8, err < 1e-8))
    for a in range(4):
        for b in range(4):
            if a != b:
                err = abs(monomial_tate_integral(a, b, 1))
                rows.append((f"orthogonality a={a} b={b}", float(err), 1e-8, err < 1e-8))
    for poly in ("x^2+1", "x^6-2*x^3+2"):
        F = build_field(poly)
        for p in (2, 3, 5, 7, 13):
            try:
                chk = unramified_euler_identity(F, p)
            except Ramified:
                rows.append((f"euler {poly} p={p}", 0.0, 0, "excluded (ramified)"))
                continue
            rows.append((f"euler {poly} p={p}", chk.error, 1e-12, chk.error < 1e-12))
    return rows


def _battery_weights(cfg):
    from flint import acb_mat
    from .weights import (WeightData, beta_map, enumerate_lambda, enumerate_upsilon_n, evaluate_u_lambda,
                          is_in_upsilon, lambda_cardinality, u_lambda_weight)
    rng = random.Random(0)
    w = WeightData((6, -6), 3)
    lams = enumerate_lambda(w)
    rows = [("|Lambda| desk", abs(len(lams) - lambda_cardinality(w)), 0, len(lams) == lambda_cardinality(w))]
    bad = sum(not is_in_upsilon(beta_map(nu, lam, w), w) for nu in enumerate_upsilon_n(w) for lam in lams)
    rows.append(("beta membership desk", bad, 0, bad == 0))
    worst = 0.0
    for _ in range(20):
        lam = rng.choice(lams)
        g = [acb_mat([[acb(rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in range(3)] for _ in range(3)])
             for _ in range(2)]
        t = [[acb(rng.uniform(0.5, 2), rng.uniform(-1, 1)) for _ in range(3)] for _ in range(2)]
        tg = [acb_mat([[g[j][a, b] * t[j][b] for b in range(3)] for a in range(3)]) for j in range(2)]
        ratio = evaluate_u_lambda(lam, tg, w) / evaluate_u_lambda(lam, g, w)
        pred = u_lambda_weight(lam, t, w)
        worst = max(worst, float((abs(ratio - pred) / abs(pred)).upper()))
    rows.append(("u_lambda eigenvector (20 draws)", worst, 1e-8, worst < 1e-8))
    return rows


def _battery_signs(cfg):
    from .characters import InfinityType
    from .field_tower import GaloisClosure, desk_tower
    from .periods_signs import omega_covariance
    t = desk_tower(cfg.digits)
    els = GaloisClosure(t, d=cfg.digits).elements
    rows = []
    for pair in ((0, -1), (-1, 0)):
        typ = InfinityType.from_fibers(t, [pair])
        worst, ok = 0.0, True
        for e in els:
            chk = omega_covariance(e, typ, tower=t, precision=cfg.digits)
            worst = max(worst, chk.discrepancy)
            ok &= chk.passed
        rows.append((f"omega sign law type {pair} ({len(els)} sigma)", worst, 10.0 ** (10 - cfg.digits), ok))
    return rows


BATTERIES = {"local-integrals": _battery_local, "weights": _battery_weights, "signs": _battery_signs}


def cmd_selftest(cfg):
    names = list(BATTERIES) if cfg.kernel == "all" else [cfg.kernel]
    rep = Report("selftest").section("settings").add("digits", cfg.digits).add("kernels", names)
    ok = True
    for name in names:
        rows = BATTERIES[name](cfg)
        table = []
        for label, err, tol, passed in rows:
            table.append({"check": label, "error": fmt_err(float(err)), "tolerance": fmt_err(float(tol)),
                          "result": passed if isinstance(passed, str) else ("pass" if passed else "FAIL")})
            ok &= passed is True or isinstance(passed, str)
        rep.section(name).add("table", table)
    rep.section("result").add("passed", ok)
    return rep, 0 if ok else 3


COMMANDS = {"field": cmd_field, "chars": cmd_chars, "period": cmd_period,
            "certify": cmd_certify, "selftest": cmd_selftest}


# -- entry point ------------------------------------------------------------------------

def build_parser():
    parser = argparse.ArgumentParser(prog="heckecrit",
                                     description="Critical values of algebraic Hecke characters.")
    sub = parser.add_subparsers(dest="command")

    def common(p):
        p.add_argument("--tower", help="tower file (default: Q(i, 2^(1/3)) over Q(i))")
        p.add_argument("--digits", type=int, default=50)
        p.add_argument("--seed-order", type=lambda s: tuple(int(x) for x in s.split(",")),
                       help="comma-separated order of E_k0")
        p.add_argument("--report", help="write the report to this file")
        p.add_argument("--json", action="store_true", help="JSON instead of text")

    common(sub.add_parser("field", help="tower data, embeddings and periods"))
    for name, helptext in (("chars", "enumerate characters"), ("period", "period factor and sign law")):
        p = sub.add_parser(name, help=helptext)
        common(p)
        p.add_argument("--char", help="character file (default: smallest critical character)")
    p = sub.add_parser("certify", help="certify the main quotient")
    common(p)
    p.add_argument("--char", help="character file (default: smallest critical character)")
    p.add_argument("--cutoff", type=int, help="terms over K (overrides the estimate)")
    p.add_argument("--cutoff-scale", type=float, help="multiply both estimated cutoffs")
    p.add_argument("--height", type=int, default=10 ** 6, help="denominator bound")
    p = sub.add_parser("selftest", help="local integral, weight and sign batteries")
    common(p)
    p.add_argument("--kernel", choices=["all", *BATTERIES], default="all")
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 1
    if not args.command:
        parser.print_usage(sys.stderr)
        return 1
    try:
        cfg = RunConfig(**{k: v for k, v in vars(args).items() if v is not None})
        rep, code = COMMANDS[cfg.command](cfg)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 1
    except HeckeError as e:
        print(f"{type(e).__name__}: {e}", file=sys.stderr)
        return e.exit_code
    emit(rep, cfg)
    return code


if __name__ == "__main__":
    sys.exit(main())
