"""``pglab``: command-line front end.

Every subcommand builds a JSON-able report; ``--format text`` renders the
same data as indented key/value lines.  Exit codes: 0 success, 2 input
error, 3 algorithm guard, 4 invariant violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Any, Callable

import numpy as np

from . import generators, io
from .classify import (
    VARIANTS,
    CensusGuard,
    DbvParams,
    NotACodeword,
    classify,
    dbv_general,
    prime_plane,
    triple_support_census,
)
from .code import Codeword, combination, decompose, line_code
from .field import FieldError, create_field, format_modulus, parse_modulus, prime_power
from .multiset import (
    AffineChart,
    MultisetError,
    WeightedMultiset,
    g_table,
    gcd_degree_check,
    hn_inequality_check,
    index_dichotomy_violations,
    index_thresholds,
    quadratic_bound_violations,
    secant_spectrum,
)
from .plane import Collineation, Plane, PlaneError, build_plane
from .stability import blocking_set, repair

EXIT_OK, EXIT_INPUT, EXIT_GUARD, EXIT_INVARIANT = 0, 2, 3, 4


class InputError(Exception):
    pass


class Outcome(Exception):
    """Carries a report together with a nonzero exit code."""

    def __init__(self, report: Any, code: int):
        super().__init__(code)
        self.report = report
        self.code = code


# ---------- helpers ----------

def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x


def _render_text(x, indent: int = 0) -> list[str]:
    pad = "  " * indent
    out = []
    if isinstance(x, dict):
        for k, v in x.items():
            if isinstance(v, (dict, list)) and v and not _flat(v):
                out.append(f"{pad}{k}:")
                out.extend(_render_text(v, indent + 1))
            else:
                out.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(x, list):
        for v in x:
            if isinstance(v, (dict, list)) and not _flat(v):
                out.append(f"{pad}-")
                out.extend(_render_text(v, indent + 1))
            else:
                out.append(f"{pad}- {_scalar(v)}")
    else:
        out.append(pad + _scalar(x))
    return out


def _flat(v) -> bool:
    return isinstance(v, list) and all(not isinstance(e, (dict, list)) for e in v)


def _scalar(v) -> str:
    if isinstance(v, list):
        return " ".join(_scalar(e) for e in v)
    if isinstance(v, bool) or v is None:
        return json.dumps(v)
    return str(v)


def _emit(args, report) -> None:
    data = _jsonable(report)
    if args.format == "text":
        text = "\n".join(_render_text(data)) + "\n"
    else:
        text = json.dumps(data, indent=2) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _write_payload(args, write: Callable) -> None:
    if args.out:
        with open(args.out, "w") as fh:
            write(fh)
    else:
        write(sys.stdout)


def _read_lines(args) -> list[str]:
    if not args.inp:
        raise InputError("--in is required")
    if args.inp == "-":
        return sys.stdin.read().splitlines()
    try:
        with open(args.inp) as fh:
            return fh.read().splitlines()
    except OSError as exc:
        raise InputError(str(exc)) from exc


def _field_args(args) -> tuple[int, int] | None:
    """(p, h) requested on the command line, or None if nothing was given."""
    if args.q is not None:
        try:
            p, h = prime_power(args.q)
        except FieldError as exc:
            raise InputError(str(exc)) from exc
        if (args.p is not None and args.p != p) or (args.h is not None and args.h != h):
            raise InputError(f"--q {args.q} disagrees with --p/--h")
        return p, h
    if args.p is None:
        return None
    return args.p, args.h or 1


def _plane(args, default_q: int | None = None) -> Plane:
    ph = _field_args(args)
    if ph is None:
        if default_q is None:
            raise InputError("field parameters required (--q, or --p and --h)")
        ph = prime_power(default_q)
    try:
        field = create_field(ph[0], ph[1], parse_modulus(args.modulus or "-"))
    except FieldError as exc:
        raise InputError(str(exc)) from exc
    return build_plane(field)


def _check_file_field(args, plane: Plane) -> None:
    f = plane.field
    ph = _field_args(args)
    if ph is not None and ph != (f.p, f.h):
        raise InputError(f"file is over GF({f.p}^{f.h}) but the command line asks for GF({ph[0]}^{ph[1]})")
    if args.modulus and parse_modulus(args.modulus) not in (None, f.modulus):
        raise InputError("file modulus disagrees with --modulus")


def _load_multiset(args) -> tuple[WeightedMultiset, int]:
    m, k = io.read_multiset(_read_lines(args))
    _check_file_field(args, m.plane)
    if args.k is not None and args.k != k:
        raise InputError(f"--k {args.k} disagrees with k={k} in the file")
    return m, k


def _load_codeword(args) -> Codeword:
    c = io.read_codeword(_read_lines(args))
    _check_file_field(args, c.plane)
    return c


def _coords(plane: Plane, i: int) -> list[int]:
    return [int(v) for v in plane.coords(int(i))]


def _parse_lines(plane: Plane, text: str) -> list[int]:
    out = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        try:
            out.append(plane.index([int(t) for t in chunk.split(",")]))
        except (ValueError, PlaneError, FieldError) as exc:
            raise InputError(f"bad line {chunk!r}: {exc}") from exc
    return out


def _histogram(values) -> dict[int, int]:
    vals, counts = np.unique(np.asarray(values), return_counts=True)
    return {int(v): int(c) for v, c in zip(vals, counts)}


# ---------- subcommands ----------

def cmd_plane_info(args) -> dict:
    plane = _plane(args)
    f = plane.field
    return {
        "q": plane.q,
        "p": f.p,
        "h": f.h,
        "modulus": format_modulus(f),
        "points": plane.n,
        "lines": plane.n,
        "points_per_line": plane.q + 1,
    }


def _thresholds_json(th) -> dict:
    return {
        "small_bound": th.small_bound,
        "large_bound": th.large_bound,
        "general_ok": th.general_ok,
        "lemma_small": th.lemma_small,
        "lemma_large": th.lemma_large,
        "lemma_ok": th.lemma_ok,
        "flags": th.flags,
    }


def cmd_analyze(args) -> dict:
    m, k = _load_multiset(args)
    plane = m.plane
    spec = secant_spectrum(m, k)
    th = index_thresholds(plane.q, spec.delta)
    gap = index_dichotomy_violations(spec, plane.q)
    lemma_gap = []
    if th.lemma_ok:
        lemma_gap = [i for i, s in enumerate(spec.indices.tolist()) if th.lemma_small < s < th.lemma_large]
    ksec = [l for l in range(plane.n) if spec.residues[l] == k]
    hn_fail = [l for l in ksec if not hn_inequality_check(m, k, l).holds]
    return {
        "q": plane.q,
        "k": k,
        "delta": spec.delta,
        "residue_histogram": _histogram(spec.residues),
        "index_histogram": _histogram(spec.indices),
        "thresholds": _thresholds_json(th),
        "dichotomy": {
            "applies": th.general_ok,
            "points_in_gap": len(gap),
            "lemma_applies": th.lemma_ok,
            "points_in_lemma_gap": len(lemma_gap),
        },
        "quadratic_bound_violations": len(quadratic_bound_violations(m, k)),
        "hn": {"ideal_lines_checked": len(ksec), "violations": len(hn_fail)},
    }


def cmd_repair(args) -> dict:
    m, k = _load_multiset(args)
    plane = m.plane
    rep = repair(m, k)
    report = {
        "delta0": rep.delta0,
        "target": rep.target,
        "steps": [
            {"point": _coords(plane, s.point), "added": s.added, "k_i": s.k_i, "delta_after": s.delta_after}
            for s in rep.steps
        ],
        "final_delta": rep.final_delta,
        "changed_points": rep.changed_points,
        "hypothesis_ok": rep.hypothesis_ok,
        "verdicts": rep.verdicts,
        "status": rep.status,
    }
    if rep.failure:
        report["failure"] = rep.failure
    if args.write_multiset:
        with open(args.write_multiset, "w") as fh:
            io.write_multiset(rep.M_prime, k, fh)
    if rep.status == "guard":
        raise Outcome(report, EXIT_GUARD)
    return report


def cmd_cover(args) -> dict:
    m, k = _load_multiset(args)
    plane = m.plane
    rep = blocking_set(m, k)
    return {
        "S": [_coords(plane, i) for i in rep.S],
        "delta": rep.delta,
        "target_size": rep.target_size,
        "size_ok": rep.size_ok,
        "blocks_all": rep.blocks_all,
        "per_point_index": [rep.per_point_index[i] for i in rep.S],
        "unblocked": len(rep.unblocked),
        "hypothesis_ok": rep.hypothesis_ok,
    }


def _terms_json(plane: Plane, terms: dict[int, int]) -> list:
    return [{"line": _coords(plane, l), "coefficient": int(v)} for l, v in sorted(terms.items())]


def cmd_code(args):
    c = _load_codeword(args)
    plane = c.plane
    action = args.action
    if action == "weight":
        return {"weight": c.weight}
    if action == "member":
        cert = line_code(plane).is_codeword(c)
        out: dict[str, Any] = {"member": cert is not None}
        if cert is not None:
            out["certificate"] = _terms_json(plane, cert.terms)
            out["certificate_ok"] = cert.evaluate(plane) == c
        return out
    if action == "dual":
        sums = c.line_sums()
        return {"dual": not sums.any(), "line_sum_values": sorted({int(v) for v in sums})}
    if action == "decompose":
        if not args.lines:
            raise InputError("decompose needs --lines 'x0,x1,x2;...'")
        lines = _parse_lines(plane, args.lines)
        if len(lines) > 4:
            raise InputError("decompose takes at most 4 lines")
        lam = decompose(c, lines)
        out = {"lines": [_coords(plane, l) for l in lines], "decomposable": lam is not None}
        if lam is not None:
            out["coefficients"] = [lam[l] for l in dict.fromkeys(lines)]
        return out
    if action == "dump":
        if args.dense:
            return io.dense(c)
        return [_coords(plane, i) + [int(c.values[i])] for i in c.support]
    raise InputError(f"unknown code action {action!r}")


def cmd_classify(args) -> dict:
    c = _load_codeword(args)
    try:
        cl = classify(c)
    except NotACodeword as exc:
        raise InputError(str(exc)) from exc
    report = cl.to_json(c.plane)
    report["weight"] = c.weight
    if cl.certificate is not None and not cl.certificate_ok:
        raise Outcome(report, EXIT_INVARIANT)
    return report


def cmd_census(args) -> list:
    p = _census_p(args)
    try:
        res = triple_support_census(p, args.max_weight)
    except CensusGuard as exc:
        raise Outcome({"error": str(exc)}, EXIT_GUARD) from exc
    if res["certificate_failures"]:
        raise Outcome(res["entries"], EXIT_INVARIANT)
    return res["entries"]


def _census_p(args) -> int:
    ph = _field_args(args)
    if ph is None:
        raise InputError("census needs --p")
    if ph[1] != 1:
        raise InputError("census runs over prime fields only")
    return ph[0]


def cmd_dbv(args) -> None:
    p = _census_p(args)
    if p == 2:
        raise InputError("the DBV codeword needs an odd prime")
    plane = prime_plane(p)
    rng = np.random.default_rng(args.seed)
    try:
        lambdas = tuple(int(t) for t in args.lambdas.split(",")) if args.lambdas else (0, 0, 0)
        pi = Collineation.random(plane, rng) if args.random_pi else None
        params = DbvParams(p, args.gamma, lambdas, pi, args.variant)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    c = dbv_general(params)
    _write_payload(args, lambda fh: io.write_codeword(c, fh))


# ---------- verify suites ----------

def _suite_plane(args, default_q: int) -> Plane:
    return _plane(args, default_q)


def _planted(plane: Plane, rng: np.random.Generator) -> tuple[WeightedMultiset, int, int]:
    k = int(rng.integers(0, plane.p))
    base = generators.random_kmodp(plane, k, rng)
    eps = int(rng.integers(1, 5))
    m, _ = generators.plant(base, eps, rng)
    return m, k, eps


def verify_lemma_index(plane: Plane, rng) -> dict:
    m, k, line = generators.random_instance(plane, rng)
    quad = quadratic_bound_violations(m, k)
    chart = AffineChart(plane, line, weights=m.weights)
    gcd_bad = [y for y in range(plane.q) if not gcd_degree_check(m, k, line, y, chart).agree]
    return {"ok": not quad and not gcd_bad, "quadratic_violations": len(quad), "gcd_mismatches": len(gcd_bad)}


def verify_hn(plane: Plane, rng) -> dict:
    m, k, line = generators.random_instance(plane, rng)
    chart = AffineChart(plane, line, weights=m.weights)
    hn = hn_inequality_check(m, k, line, chart)
    table = g_table(m, k, line, chart)
    # expected value k - |l cap M| for every affine line Y = yX + x
    w = m.weights
    lp = plane.line_points
    expect = np.array(
        [[(k - w[lp[chart.affine_line(x, y)]].sum()) % plane.p for x in range(plane.q)] for y in range(plane.q)]
    )
    g_ok = bool(np.array_equal(table % plane.p, expect))
    return {"ok": hn.holds and g_ok, "hn_holds": hn.holds, "g_identity": g_ok}


def verify_thresholds(plane: Plane, rng) -> dict:
    m, k, _ = _planted(plane, rng)
    spec = secant_spectrum(m, k)
    th = index_thresholds(plane.q, spec.delta)
    gap = index_dichotomy_violations(spec, plane.q) if th.general_ok else []
    return {"ok": not gap, "applies": th.general_ok, "points_in_gap": len(gap)}


def verify_repair(plane: Plane, rng) -> dict:
    m, k, eps = _planted(plane, rng)
    rep = repair(m, k)
    cov = blocking_set(m, k)
    exact = rep.final_delta == 0 and rep.changed_points == eps == rep.target
    cover_ok = cov.blocks_all and cov.size_ok
    ok = (exact and cover_ok) if rep.hypothesis_ok else True
    return {
        "ok": ok,
        "eps": eps,
        "changed_points": rep.changed_points,
        "final_delta": rep.final_delta,
        "hypothesis_ok": rep.hypothesis_ok,
        "cover_ok": cover_ok,
        "guard": rep.status == "guard",
    }


def verify_codes(plane: Plane, rng) -> dict:
    code = line_code(plane)
    p = plane.p
    lines = [int(l) for l in rng.choice(plane.n, size=min(3, plane.n), replace=False)]
    coeffs = {l: int(rng.integers(0, p)) for l in lines}
    c = combination(plane, coeffs)
    sums = c.line_sums()
    const_ok = bool(np.all(sums == sum(coeffs.values()) % p))
    cert = code.is_codeword(c)
    member_ok = cert is not None and cert.evaluate(plane) == c
    return {"ok": const_ok and member_ok, "line_sums_constant": const_ok, "member": member_ok}


def _code_facts(plane: Plane) -> dict:
    code = line_code(plane)
    prime = plane.field.h == 1
    rel = code.dimension == code.dual_dimension + 1
    incl = all(code.contains(Codeword(plane, row)) for row in code.dual_basis)
    return {
        "dimension": code.dimension,
        "dual_dimension": code.dual_dimension,
        "dimension_relation": rel,
        "dual_contained": incl,
        "ok": (rel and incl) if prime else True,
        "applies": prime,
    }


SUITES: dict[str, tuple[Callable, int]] = {
    "lemma-index": (verify_lemma_index, 9),
    "hn": (verify_hn, 25),
    "thresholds": (verify_thresholds, 25),
    "repair": (verify_repair, 25),
    "codes": (verify_codes, 5),
}


def cmd_verify(args) -> dict:
    fn, default_q = SUITES[args.suite]
    plane = _suite_plane(args, default_q)
    trials = 100 if args.trials is None else args.trials
    results = [fn(plane, rng) for rng in generators.seed_streams(args.seed, trials)]
    failed = [i for i, r in enumerate(results) if not r["ok"]]
    report: dict[str, Any] = {
        "suite": args.suite,
        "q": plane.q,
        "seed": args.seed,
        "trials": trials,
        "passed": trials - len(failed),
        "failed": len(failed),
        "failed_trials": failed[:20],
    }
    if args.suite == "codes":
        facts = _code_facts(plane)
        report["facts"] = facts
        if not facts["ok"]:
            failed.append(-1)
    if args.suite == "repair":
        report["hypothesis_ok"] = sum(r["hypothesis_ok"] for r in results)
        report["changed_points_match"] = sum(r["changed_points"] == r["eps"] for r in results)
    if args.suite == "thresholds":
        report["applicable"] = sum(r["applies"] for r in results)
    report["status"] = "fail" if failed else "pass"
    if failed:
        raise Outcome(report, EXIT_INVARIANT)
    return report


# ---------- argument parsing ----------

def _common() -> argparse.ArgumentParser:
    c = argparse.ArgumentParser(add_help=False)
    g = c.add_argument_group("global options")
    g.add_argument("--p", type=int, help="characteristic")
    g.add_argument("--h", type=int, help="extension degree (default 1)")
    g.add_argument("--q", type=int, help="field order, alternative to --p/--h")
    g.add_argument("--modulus", help="comma-separated modulus coefficients, constant term first; '-' for the default")
    g.add_argument("--k", type=int, help="expected k (must match the input file)")
    g.add_argument("--in", dest="inp", help="input file ('-' for stdin)")
    g.add_argument("--out", help="output file (default stdout)")
    g.add_argument("--format", choices=("json", "text"), default="json")
    g.add_argument("--seed", type=int, default=0, help="64-bit seed")
    g.add_argument("--trials", type=int, help="trial count for verify suites")
    return c


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    ap = argparse.ArgumentParser(prog="pglab", description="Weighted multisets and line codes of finite projective planes.")
    sub = ap.add_subparsers(dest="command", required=True)

    sub.add_parser("plane-info", parents=[common], help="field and plane parameters").set_defaults(func=cmd_plane_info)
    sub.add_parser("analyze", parents=[common], help="secant spectrum and threshold verdicts").set_defaults(func=cmd_analyze)
    r = sub.add_parser("repair", parents=[common], help="repair into a k mod p multiset")
    r.add_argument("--write-multiset", help="also write the repaired multiset here")
    r.set_defaults(func=cmd_repair)
    sub.add_parser("cover", parents=[common], help="blocking set of the bad secants").set_defaults(func=cmd_cover)

    c = sub.add_parser("code", parents=[common], help="codeword queries")
    c.add_argument("action", choices=("weight", "member", "dual", "decompose", "dump"))
    c.add_argument("--lines", help="for decompose: 'x0,x1,x2;...' line coordinates")
    c.add_argument("--dense", action="store_true", help="for dump: all values in canonical order")
    c.set_defaults(func=cmd_code)

    sub.add_parser("classify", parents=[common], help="classify a small-weight codeword").set_defaults(func=cmd_classify)
    cen = sub.add_parser("census", parents=[common], help="exhaustive census of codewords on three lines")
    cen.add_argument("--max-weight", type=int)
    cen.set_defaults(func=cmd_census)

    d = sub.add_parser("dbv", parents=[common], help="write a DBV-type codeword file")
    d.add_argument("--variant", choices=VARIANTS, default="canonical")
    d.add_argument("--gamma", type=int, default=1)
    d.add_argument("--lambdas", help="three comma-separated coefficients")
    d.add_argument("--random-pi", action="store_true", help="apply a random collineation drawn from --seed")
    d.set_defaults(func=cmd_dbv)

    v = sub.add_parser("verify", parents=[common], help="batch invariant suites")
    v.add_argument("suite", choices=tuple(SUITES))
    v.set_defaults(func=cmd_verify)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        report = args.func(args)
    except Outcome as out:
        _emit(args, out.report)
        return out.code
    except io.ParseError as exc:
        print(f"pglab: parse error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (InputError, FieldError, PlaneError, MultisetError, OSError) as exc:
        print(f"pglab: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if report is not None:
        if isinstance(report, str):
            _write_payload(args, lambda fh: fh.write(report + "\n"))
        else:
            _emit(args, report)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
