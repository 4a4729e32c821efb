import argparse
import json
import logging
import re
import sys
from dataclasses import replace
from fractions import Fraction
from typing import List, Optional

from rich.console import Console
from rich.logging import RichHandler

from . import bounds
from .config import AppConfig
from .deltabases import BasisKind, ExpansionVector, multiplicity_from_coeffs
from .errors import MultizeroError, UsageError
from .extremal import (
    SearchProblem,
    bound_vs_search_table,
    exhaustive_search,
    search_max_multiplicity,
    verify_witness,
)
from .families import (
    ClosedForm,
    FamilyKind,
    FamilySpec,
    dual_orthogonality_check,
    g_squared,
    gram_check,
    kernel,
    norm_constant,
    tail_sum,
    unit,
    unnormalized_value,
    weight,
)
from .macwilliams import (
    NAMED,
    DistanceDistribution,
    code_polynomial,
    macwilliams_transform,
    vanishing_factor,
)
from .report import (
    DEFAULT_DIGITS,
    emit_records,
    emit_report,
    parse_rational,
    parse_rational_list,
    verdict_exit_code,
)

log = logging.getLogger("multizero")

FAMILY_OPS = ("weight", "value", "norm", "gsq", "kernel", "tail", "dual", "gram")
BOUND_NAMES = ("ozl2", "condg2", "eq1", "eq2", "eq3", "meixner1", "meixner2", "charlier3",
               "oze", "schur", "all")
LIST_FLAGS = ("--coeffs", "--alphabet", "--distribution")
NEGATIVE_LIST = re.compile(r"^-[\d/.,\s-]+$")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _add_family_flags(p: argparse.ArgumentParser, prefix: str) -> None:
    p.add_argument("--family", choices=[k.value for k in FamilyKind])
    p.add_argument(f"--{prefix}n", dest="fam_n", type=int)
    p.add_argument(f"--{prefix}alpha", dest="fam_alpha", type=parse_rational)
    p.add_argument(f"--{prefix}beta", dest="fam_beta", type=parse_rational)
    p.add_argument(f"--{prefix}q", dest="fam_q", type=parse_rational)
    p.add_argument(f"--{prefix}lambda", dest="fam_lambda", type=parse_rational)
    p.add_argument("--shift", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--decimal", action="store_true",
                        help="Render rationals as decimals instead of p/q")
    common.add_argument("--digits", type=int, default=DEFAULT_DIGITS)
    common.add_argument("--verbose", "-v", action="store_true")

    ap = _Parser(prog="multizero",
                 description="Exact bounds on the multiplicity of zeros via discrete orthogonal polynomials")
    sub = ap.add_subparsers(dest="verb", required=True)

    fp = sub.add_parser("families", parents=[common], help="Evaluate a discrete orthogonal family")
    fp.add_argument("op", choices=FAMILY_OPS)
    _add_family_flags(fp, "")
    for name in ("k", "j", "x", "y", "s", "lo", "hi", "mu"):
        fp.add_argument(f"--{name}", type=int)

    bp = sub.add_parser("bounds", parents=[common], help="Check a bound on an expansion")
    bp.add_argument("name", choices=BOUND_NAMES)
    bp.add_argument("--coeffs", help="Comma list or JSON array; '-' reads stdin")
    bp.add_argument("--basis", choices=[b.value for b in BasisKind if b is not BasisKind.CUSTOM],
                    default=BasisKind.MONOMIAL.value)
    bp.add_argument("--alpha", type=parse_rational, default=Fraction(0),
                    help="Laguerre parameter of the laguerre basis")
    bp.add_argument("--n", type=int)
    bp.add_argument("--k", type=int)
    bp.add_argument("--q", type=parse_rational, action="append")
    bp.add_argument("--s", type=int, default=0)
    bp.add_argument("--mu", type=int)
    bp.add_argument("--nu", type=int)
    _add_family_flags(bp, "family-")

    vp = sub.add_parser("verify", parents=[common], help="Verify a claimed multiplicity at 1")
    vp.add_argument("--coeffs", required=True)
    vp.add_argument("--mu", type=int, required=True)

    sp = sub.add_parser("search", parents=[common], help="Maximal multiplicity at 1 over an alphabet")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--alphabet", required=True)
    sp.add_argument("--allow-zero-a0", action="store_true")
    sp.add_argument("--no-prune", action="store_true", help="Plain enumeration")
    sp.add_argument("--workers", type=int)
    sp.add_argument("--max-nodes", type=int)

    mp = sub.add_parser("macwilliams", parents=[common], help="MacWilliams transform demo")
    mp.add_argument("--distribution", required=True,
                    help=f"JSON array, comma list or one of {', '.join(sorted(NAMED))}")
    mp.add_argument("--d", type=int)

    tp = sub.add_parser("table", parents=[common], help="Searched mu* against the closed-form cap")
    tp.add_argument("--n-min", type=int, required=True)
    tp.add_argument("--n-max", type=int, required=True)
    tp.add_argument("--alphabet", required=True)
    tp.add_argument("--workers", type=int)
    tp.add_argument("--max-nodes", type=int)
    return ap


def _need(args, name: str, what: str):
    value = getattr(args, name)
    if value is None:
        raise UsageError(f"{what} is required here")
    return value


def _family_from_args(args, default_n: Optional[int] = None) -> FamilySpec:
    kind = args.family
    if kind is None:
        raise UsageError("--family is required")
    kind = FamilyKind(kind)
    n = args.fam_n if args.fam_n is not None else default_n
    if kind is FamilyKind.HAHN:
        if n is None:
            raise UsageError("hahn needs n")
        fam = FamilySpec.hahn(n, _need(args, "fam_alpha", "alpha"), _need(args, "fam_beta", "beta"))
    elif kind is FamilyKind.CHEBYSHEV:
        if n is None:
            raise UsageError("chebyshev needs n")
        fam = FamilySpec.chebyshev(n)
    elif kind is FamilyKind.KRAWTCHOUK:
        if n is None:
            raise UsageError("krawtchouk needs n")
        fam = FamilySpec.krawtchouk(n, _need(args, "fam_q", "q"))
    elif kind is FamilyKind.MEIXNER:
        fam = FamilySpec.meixner(_need(args, "fam_beta", "beta"), _need(args, "fam_q", "q"))
    else:
        fam = FamilySpec.charlier(_need(args, "fam_lambda", "lambda"))
    return fam.shifted(args.shift) if args.shift else fam


def _read_coeffs(text: str) -> List[Fraction]:
    if text == "-":
        text = sys.stdin.read()
    return parse_rational_list(text)


def _expansion(args) -> ExpansionVector:
    coeffs = _read_coeffs(_need(args, "coeffs", "--coeffs"))
    if args.n is not None and args.n != len(coeffs) - 1:
        raise UsageError(f"--n {args.n} does not match {len(coeffs)} coefficients")
    return ExpansionVector.in_basis(BasisKind(args.basis), coeffs, alpha=args.alpha)


def _write(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _run_families(args, cfg: AppConfig) -> int:
    fam = _family_from_args(args)
    op = args.op
    record = {"op": op, **fam.describe()}
    if op == "weight":
        x = _need(args, "x", "--x")
        record.update(x=x, value=weight(fam, x))
    elif op == "value":
        k, x = _need(args, "k", "--k"), _need(args, "x", "--x")
        record.update(k=k, x=x, value=unnormalized_value(fam, k, x), norm=norm_constant(fam, k))
    elif op == "norm":
        k = _need(args, "k", "--k")
        record.update(k=k, value=norm_constant(fam, k))
    elif op == "gsq":
        k, x = _need(args, "k", "--k"), _need(args, "x", "--x")
        record.update(k=k, x=x, value=g_squared(fam, k, x))
    elif op == "kernel":
        s, x = _need(args, "s", "--s"), _need(args, "x", "--x")
        lo = args.lo if args.lo is not None else 0
        hi = args.hi if args.hi is not None else fam.n
        if hi is None:
            raise UsageError("--hi is required on an infinite support")
        record.update(s=s, x=x, lo=lo, hi=hi, value=kernel(fam, s, x, lo, hi))
    elif op == "tail":
        s, mu = _need(args, "s", "--s"), _need(args, "mu", "--mu")
        value = tail_sum(fam, s, mu)
        record.update(s=s, mu=mu, value=value)
        if isinstance(value, ClosedForm):
            record["closed_form"] = {"constant": value.constant,
                                     "coefficient": value.coefficient,
                                     "unit": str(value.unit)}
    elif op == "dual":
        x, y = _need(args, "x", "--x"), _need(args, "y", "--y")
        record.update(x=x, y=y, value=dual_orthogonality_check(fam, x, y))
    else:
        i, j = _need(args, "k", "--k"), _need(args, "j", "--j")
        record.update(i=i, j=j, value=gram_check(fam, i, j))
    u = unit(fam)
    if not u.is_one and op in ("value", "norm", "gsq", "kernel"):
        record["unit"] = str(u)
    _write(emit_records([record], args.format, args.decimal, args.digits))
    return 0


def _run_bounds(args, cfg: AppConfig) -> int:
    bits = dict(start_bits=cfg.start_bits, max_bits=cfg.max_bits)
    name = args.name
    if name == "oze":
        n = _need(args, "n", "--n")
        ks = [args.k] if args.k is not None else range(n + 1)
        reports = [bounds.oze_check(n, k, **bits) for k in ks]
    else:
        v = _expansion(args)
        qs = args.q or []
        if name == "all":
            reports = bounds.standard_battery(v, tuple(qs) or (Fraction(1, 2), Fraction(1), Fraction(2)),
                                              **bits)
        elif name == "eq1":
            reports = [bounds.eq1_check(v, **bits)]
        elif name == "eq2":
            reports = [bounds.eq2_check(v, **bits)]
        elif name == "eq3":
            reports = [bounds.eq3_check(v, q) for q in _need(args, "q", "--q")]
        elif name in bounds.THEOREM4:
            reports = [bounds.theorem4_check(v, name, q, **bits) for q in _need(args, "q", "--q")]
        elif name == "ozl2":
            fam = _family_from_args(args, default_n=v.n)
            reports = [bounds.ozl2_check(v, fam, args.s, args.mu)]
        elif name == "condg2":
            fam = _family_from_args(args, default_n=v.n)
            reports = [bounds.condg2_check(v, fam, args.s, args.mu, **bits)]
        else:
            inp = bounds.SchurInput(v.a[0], v.a[-1], v.n, _need(args, "nu", "--nu"))
            l2 = sum((x * x for x in v.a), Fraction(0))
            l1 = sum((abs(x) for x in v.a), Fraction(0))
            reports = list(bounds.schur_bounds(inp, l2, l1, **bits))
    for r in reports:
        log.debug("%s: holds=%s sharp=%s", r.name, r.holds, r.sharp)
    _write(emit_report(reports, args.format, args.decimal, args.digits))
    return verdict_exit_code(r.holds for r in reports)


def _run_verify(args, cfg: AppConfig) -> int:
    coeffs = _read_coeffs(args.coeffs)
    ok = verify_witness(coeffs, args.mu)
    record = {"coeffs": coeffs, "claimed_mu": args.mu, "verified": ok}
    if any(coeffs):
        record["multiplicity"] = multiplicity_from_coeffs(ExpansionVector.monomial(coeffs))
    _write(emit_records([record], args.format, args.decimal, args.digits))
    return 0 if ok else 1


def _search_config(args, cfg: AppConfig) -> AppConfig:
    if args.workers is not None:
        cfg = replace(cfg, workers=args.workers)
    if args.max_nodes is not None:
        cfg = replace(cfg, max_nodes=args.max_nodes)
    return cfg


def _run_search(args, cfg: AppConfig) -> int:
    cfg = _search_config(args, cfg)
    prob = SearchProblem.of(args.n, parse_rational_list(args.alphabet),
                            require_a0_nonzero=not args.allow_zero_a0)
    if args.no_prune:
        result = exhaustive_search(prob)
    else:
        result = search_max_multiplicity(prob, config=cfg)
    record = {
        "n": prob.n,
        "alphabet": list(prob.alphabet),
        "mu_max": result.mu_max,
        "witness_count": result.witness_count,
        "nodes_explored": result.nodes_explored,
        "bound_used": result.bound_used,
        "within_bound": result.mu_max <= result.bound_used,
        "witnesses": [list(w) for w in result.witnesses],
    }
    _write(emit_records([record], args.format, args.decimal, args.digits))
    return 0 if record["within_bound"] else 1


def _distribution(text: str) -> DistanceDistribution:
    key = text.strip().lower()
    if key in NAMED:
        return NAMED[key]()
    return DistanceDistribution.of(parse_rational_list(text))


def _run_macwilliams(args, cfg: AppConfig) -> int:
    dist = _distribution(args.distribution)
    dual = macwilliams_transform(dist)
    poly = code_polynomial(dist)
    scaled = [dist.size * b for b in dual]
    identity = list(poly.coeffs) + [Fraction(0)] * (len(scaled) - len(poly.coeffs)) == scaled
    record = {"B": list(dist.B), "size": dist.size, "dual": list(dual),
              "code_polynomial": poly, "identity_holds": identity}
    round_trip = None
    if all(b >= 0 for b in dual):
        round_trip = macwilliams_transform(DistanceDistribution(dual)) == dist.B
    record["round_trip"] = round_trip
    if args.d is not None:
        quotient, mu = vanishing_factor(dist, args.d)
        record.update(d=args.d, quotient=quotient, mu=mu)
    _write(emit_records([record], args.format, args.decimal, args.digits))
    return 0 if identity and round_trip is not False else 1


def _run_table(args, cfg: AppConfig) -> int:
    cfg = _search_config(args, cfg)
    if args.n_min < 1 or args.n_max < args.n_min:
        raise UsageError("need 1 <= --n-min <= --n-max")
    rows = bound_vs_search_table(range(args.n_min, args.n_max + 1),
                                 parse_rational_list(args.alphabet), config=cfg)
    records = [{"n": r.n, "mu_star": r.mu_star, "cap": r.cap, "envelope": round(r.envelope, 6),
                "within_cap": r.within_cap, "witness_count": r.witness_count} for r in rows]
    _write(emit_records(records, args.format, args.decimal, args.digits))
    return 0 if all(r.within_cap for r in rows) else 1


HANDLERS = {
    "families": _run_families,
    "bounds": _run_bounds,
    "verify": _run_verify,
    "search": _run_search,
    "macwilliams": _run_macwilliams,
    "table": _run_table,
}


def _fail(exc: Exception) -> int:
    sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
    return 2


def _setup_logging(verbose: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(message)s",
        handlers=[RichHandler(console=Console(stderr=True), show_path=False)],
        force=True,
    )


def _glue_lists(argv: List[str]) -> List[str]:
    """Attach values like "-1,0,1" to their flag; argparse would read them as options."""
    out: List[str] = []
    for token in argv:
        if out and out[-1] in LIST_FLAGS and NEGATIVE_LIST.match(token):
            out[-1] = f"{out[-1]}={token}"
        else:
            out.append(token)
    return out


def main(argv: Optional[list] = None) -> int:
    argv = _glue_lists(list(sys.argv[1:] if argv is None else argv))
    try:
        args = build_parser().parse_args(argv)
    except MultizeroError as exc:
        return _fail(exc)
    _setup_logging(args.verbose)
    cfg = AppConfig.load()
    try:
        return HANDLERS[args.verb](args, cfg)
    except MultizeroError as exc:
        log.debug("%s failed: %s", args.verb, exc)
        return _fail(exc)


if __name__ == "__main__":
    sys.exit(main())
