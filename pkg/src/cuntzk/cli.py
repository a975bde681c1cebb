"""Command-line interface.

Exit codes: 0 success / yes, 1 failure (invalid space, diffs, failed
identities), 2 usage or input errors, 3 no, 4 hypothesis not met.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
import time
from pathlib import Path
from typing import List, Optional, Sequence

from . import paperrun
from .classify import (BundleClass, DecisionReport, RankOneError, SpaceModel, Verdict,
                       count_algebras, decide_embedding, decide_iso_pn, decide_iso_Tn,
                       decide_isomorphism, decide_line_bundle, decide_suspension, trivialization_test)
from .equivrel import HypothesisError, canonical_representatives, count_classes, reduce_to_representative
from .invariants import RankMismatch, mu_n, q_invariant
from .ringcore import SubmodulePresentation, validate
from .spaces import SchemaError, ValidationFailed, builtin, load, to_dict

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NO, EXIT_HYP = 0, 1, 2, 3, 4
_VERDICT_EXIT = {Verdict.YES: EXIT_OK, Verdict.NO: EXIT_NO,
                 Verdict.HYPOTHESIS_NOT_MET: EXIT_HYP, Verdict.UNDECIDED: EXIT_HYP}


class InputError(ValueError):
    pass


_BUNDLE_RE = re.compile(r"^\s*rank\s*(\d+)\s*:\s*\[([^\]]*)\]\s*$")


def parse_bundle(text: str, X: SpaceModel) -> BundleClass:
    """``rankR:[a1,...,ak]`` with coordinates in generator order."""
    m = _BUNDLE_RE.match(text)
    if not m:
        raise InputError(f"bad bundle literal {text!r}; expected rankR:[a1,...,ak]")
    coeffs = _int_list(m.group(2), text)
    k = X.kring.rank
    if len(coeffs) != k:
        raise InputError(f"{X.name} has {k} generators {list(X.kring.generator_names)}, got {len(coeffs)} coordinates")
    return X.bundle(int(m.group(1)), coeffs)


def _int_list(body: str, whole: str) -> List[int]:
    body = body.strip()
    if not body:
        return []
    try:
        return [int(x) for x in body.split(",")]
    except ValueError:
        raise InputError(f"non-integer coordinate in {whole!r}") from None


def _vector(text: str) -> List[int]:
    m = re.match(r"^\s*\[([^\]]*)\]\s*$", text)
    if not m:
        raise InputError(f"bad vector {text!r}; expected [a1,...]")
    return _int_list(m.group(1), text)


def resolve_space(spec: str) -> SpaceModel:
    if spec.endswith(".json") or Path(spec).is_file():
        return load(spec)
    return builtin(spec)


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def _emit(args, command: str, inputs: dict, payload: dict, lines: List[str], code: int, started: float):
    if args.format == "json":
        doc = {"command": command, "inputs": inputs, "result": payload, "exit_code": code}
        if args.timing:
            doc["seconds"] = round(time.perf_counter() - started, 6)
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        for line in lines:
            print(line)
    return code


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_validate(args, started):
    try:
        X = load(args.space, check=False) if args.space.endswith(".json") or Path(args.space).exists() \
            else builtin(args.space)
    except FileNotFoundError:
        print(f"error: no such file {args.space}", file=sys.stderr)
        return EXIT_USAGE
    rep = validate(X.kring)
    lines = [f"{X.name}: {'valid' if rep.valid else 'invalid'}"] + ([] if rep.valid else rep.lines())
    payload = {"valid": rep.valid, "violations": [] if rep.valid else rep.lines()}
    return _emit(args, "validate", {"space": args.space}, payload, lines,
                 EXIT_OK if rep.valid else EXIT_FAIL, started)


def _report(args, command, inputs, rep: DecisionReport, started):
    return _emit(args, command, inputs, rep.to_dict(), rep.lines(), _VERDICT_EXIT[rep.verdict], started)


def cmd_decide(args, started):
    X = resolve_space(args.space)
    inputs = {"mode": args.mode, "space": X.name, "e": args.e, "f": args.f}
    if args.mode == "line":
        H = X.cohomology
        if H is None:
            raise InputError(f"{X.name} has no cohomology")
        rep = decide_line_bundle(H, H.cls(2, _vector(args.e)), H.cls(2, _vector(args.f or "[]")))
        return _report(args, "decide line", inputs, rep, started)
    E = parse_bundle(args.e, X)
    if args.mode == "trivial":
        return _report(args, "decide trivial", inputs, trivialization_test(X, E), started)
    if args.f is None:
        raise InputError("--f is required")
    F = parse_bundle(args.f, X)
    if args.mode == "embed":
        rep = decide_embedding(X, E, F)
    elif args.mode == "suspension":
        rep = decide_suspension(X, E.rank - 1, E, F)
    else:
        inputs["via"] = args.via
        rep = {"direct": decide_isomorphism, "tn": decide_iso_Tn, "pn": decide_iso_pn}[args.via](X, E, F)
    return _report(args, f"decide {args.mode}", inputs, rep, started)


def cmd_invariant(args, started):
    X = resolve_space(args.space)
    m, n = args.m, args.n
    inputs = {"kind": args.kind, "space": X.name, "n": n, "m": m, "e": args.e}
    if args.kind == "mu":
        if args.e is None:
            raise InputError("--e is required for mu")
        E = parse_bundle(args.e, X)
        if m is None:
            m = E.rank - 1
        value = mu_n(X.kring, m, E, n)
        R = X.kring
        mod = SubmodulePresentation(R, [tuple(m ** n * int(t == i) for t in range(R.rank)) for i in range(R.rank)]
                                    + [g for g in _level_gens(R, n + 1)]).reduce(value)
        payload = {"mu": str(value), "mod_m^n": str(mod)}
        lines = [f"mu_{n} = {value}", f"mu_{n} mod {m ** n} = {mod}"]
        return _emit(args, "invariant mu", inputs, payload, lines, EXIT_OK, started)
    H = X.cohomology
    if H is None:
        raise InputError(f"{X.name} has no cohomology")
    if m is None:
        raise InputError("--m is required for q")
    if args.s is not None:
        vecs = json.loads(args.s)
        if len(vecs) < n:
            raise InputError(f"need s_1..s_{n}")
        s = [H.cls(2 * k, v) for k, v in enumerate(vecs, start=1)]
    elif args.e is not None:
        s = X.s_of(parse_bundle(args.e, X).reduced, n)
    else:
        raise InputError("give --e or --s")
    q = q_invariant(H, m, s, n)
    payload = {"q": str(q.integral), "mod_m^n": str(q.mod_class)}
    lines = [f"q_{n} = {q.integral}", f"q_{n} mod {m ** n} = {q.mod_class}"]
    return _emit(args, "invariant q", inputs, payload, lines, EXIT_OK, started)


def _level_gens(R, q):
    return [tuple(int(t == i) for t in range(R.rank)) for i in range(R.rank) if R.filtration_levels[i] >= q]


def cmd_count(args, started):
    X = resolve_space(args.space)
    inputs = {"space": X.name, "m": args.m}
    rep = count_algebras(X, args.m)
    try:
        rep.values["|R/~|"] = str(count_classes(X.kring, args.m))
    except HypothesisError as exc:
        rep.notes.append(f"undecided by counting: {exc}")
    return _report(args, "count", inputs, rep, started)


def cmd_reps(args, started):
    X = resolve_space(args.space)
    inputs = {"space": X.name, "m": args.m}
    try:
        rs = canonical_representatives(X.kring, args.m)
    except HypothesisError as exc:
        lines = [f"hypothesis not met: {exc}"]
        return _emit(args, "reps", inputs, {"hypothesis_not_met": str(exc)}, lines, EXIT_HYP, started)
    reps = [str(r) for r in rs.reps]
    lines = [f"{len(reps)} representatives"] + reps
    if args.reduce is not None:
        x = X.kring.element(_vector(args.reduce))
        red = reduce_to_representative(X.kring, args.m, x)
        lines.append(f"{x} ~ {red.rep} via h = {red.witness.h}")
        inputs["reduce"] = args.reduce
        payload = {"count": len(reps), "reps": reps, "reduced": str(red.rep), "witness": str(red.witness.h)}
    else:
        payload = {"count": len(reps), "reps": reps}
    return _emit(args, "reps", inputs, payload, lines, EXIT_OK, started)


def cmd_verify(args, started):
    if args.inject_fault:
        with paperrun.corrupted_p():
            rows = paperrun.verify_identities(args.max_n, args.max_m)
    else:
        rows = paperrun.verify_identities(args.max_n, args.max_m)
    failed = [label for label, ok in rows if not ok]
    lines = [f"{label}: {'ok' if ok else 'FAILED'}" for label, ok in rows] if args.verbose else []
    lines.append(f"{len(rows) - len(failed)}/{len(rows)} identities hold")
    lines += [f"FAILED: {label}" for label in failed if not args.verbose]
    payload = {"total": len(rows), "failed": failed}
    return _emit(args, "verify-identities", {"max_n": args.max_n, "max_m": args.max_m}, payload, lines,
                 EXIT_FAIL if failed else EXIT_OK, started)


def cmd_reproduce(args, started):
    only = args.only.split(",") if args.only else paperrun.SECTIONS
    rep = paperrun.reproduce(only, Path(args.golden_dir) if args.golden_dir else None)
    text = rep.text()
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    payload = {"report": rep.lines, "diffs": rep.diffs}
    return _emit(args, "reproduce-paper", {"only": list(only)}, payload, text.rstrip("\n").split("\n"),
                 EXIT_OK if rep.ok else EXIT_FAIL, started)


def cmd_show(args, started):
    X = resolve_space(args.space)
    print(json.dumps(to_dict(X), indent=2))
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--timing", action="store_true", help="include wall time in JSON reports")

    p = argparse.ArgumentParser(prog="cuntzk", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", parents=[common], help="check a space file's ring axioms")
    v.add_argument("space")
    v.set_defaults(func=cmd_validate)

    d = sub.add_parser("decide", parents=[common], help="isomorphism, embedding and triviality decisions")
    d.add_argument("mode", choices=("iso", "embed", "trivial", "line", "suspension"))
    d.add_argument("--space", required=True, help="builtin name (cp2, wedge(rp2,cp2), ...) or JSON file")
    d.add_argument("--e", required=True, help="bundle rankR:[a1,...]; for line, a degree-2 vector [c,...]")
    d.add_argument("--f")
    d.add_argument("--via", choices=("direct", "tn", "pn"), default="direct",
                   help="iso only: direct solve, T_n criterion or p_n criterion")
    d.set_defaults(func=cmd_decide)

    i = sub.add_parser("invariant", parents=[common], help="mu_n or q_n of a bundle")
    i.add_argument("kind", choices=("mu", "q"))
    i.add_argument("--space", required=True)
    i.add_argument("--n", type=int, required=True)
    i.add_argument("--m", type=int)
    i.add_argument("--e")
    i.add_argument("--s", help="q only: JSON list of s_k vectors over degree-2k generators")
    i.set_defaults(func=cmd_invariant)

    c = sub.add_parser("count", parents=[common], help="number of algebras with fibre O_{m+1}")
    c.add_argument("--space", required=True)
    c.add_argument("--m", type=int, required=True)
    c.set_defaults(func=cmd_count)

    r = sub.add_parser("reps", parents=[common], help="canonical representatives of K~^0/~")
    r.add_argument("--space", required=True)
    r.add_argument("--m", type=int, required=True)
    r.add_argument("--reduce", help="also reduce this coefficient vector to its representative")
    r.set_defaults(func=cmd_reps)

    vi = sub.add_parser("verify-identities", parents=[common], help="run the polynomial identity suite")
    vi.add_argument("--max-n", type=int, default=8)
    vi.add_argument("--max-m", type=int, default=5)
    vi.add_argument("--verbose", action="store_true")
    vi.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    vi.set_defaults(func=cmd_verify)

    rp = sub.add_parser("reproduce-paper", parents=[common], help="recompute printed formulas and diff goldens")
    rp.add_argument("--only", help=f"comma-separated sections: {','.join(paperrun.SECTIONS)}")
    rp.add_argument("--golden-dir", help=argparse.SUPPRESS)
    rp.add_argument("--output", help="also write the report to this file")
    rp.set_defaults(func=cmd_reproduce)

    s = sub.add_parser("show", help="print a space as JSON")
    s.add_argument("space")
    s.set_defaults(func=cmd_show)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    started = time.perf_counter()
    try:
        return args.func(args, started)
    except (InputError, SchemaError, ValidationFailed, RankOneError, RankMismatch,
            json.JSONDecodeError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
