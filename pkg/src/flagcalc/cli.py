"""Command-line front end.

Every subcommand prints either human-readable text (``--format
markdown``, the default) or deterministic JSON (``--format json``,
sorted keys, stable ordering).  Exit codes: 0 for success, 1 for a
mathematical failure (corpus mismatch, failed ellipticity check,
table that does not collapse to a complex, unsupported twist), 2 for
usage errors — bad flags, unparsable labels, an empty fixture
directory.

A JSON config file (``--config``) may supply defaults for ``n``,
``twist``, ``mode``, ``format`` and ``fibration``; explicit flags win.
"""

from __future__ import annotations

import argparse
import json
import pathlib
import sys
from dataclasses import dataclass
from importlib import resources

from .bbw import MODES, DirectImageTable, direct_images, global_cohomology
from .bundles import (
    BundleLabel,
    FilteredBundle,
    exterior_power,
    label_from_string,
    pieri_tensor,
    rank,
    tensor_line,
    trivial_label,
)
from .geometry import (
    conormal,
    pullback_factors,
    pullback_line,
    registry,
    relative_cotangent,
)
from .notation import ParseError, format_weight, parse_label
from .transform import (
    ComplexOnM,
    FormType,
    UnsupportedTwistError,
    assemble_transform,
    check_ellipticity,
    complex_from_form_types,
    emit_realization,
    formal_adjoint,
    involutive_cohomology,
)
from .weights import SINGULAR, bbw_reduce

__all__ = ["main", "RunConfig"]

USAGE_ERROR = 2
MATH_ERROR = 1


class CliError(Exception):
    """Fatal command error carrying its exit code."""

    def __init__(self, message: str, code: int = MATH_ERROR):
        super().__init__(message)
        self.code = code


@dataclass(frozen=True)
class RunConfig:
    """Merged settings: config-file defaults overridden by flags."""

    n: int = 3
    twist: str | None = None
    mode: str = "paper"
    format: str = "markdown"
    fibration: str = "mu"

    def __post_init__(self):
        if self.n < 2:
            raise CliError(f"n must be at least 2, got {self.n}", USAGE_ERROR)
        if self.mode not in MODES:
            raise CliError(f"mode must be one of {MODES}, got {self.mode!r}", USAGE_ERROR)
        if self.format not in ("markdown", "json"):
            raise CliError(f"format must be markdown or json, got {self.format!r}", USAGE_ERROR)

    @staticmethod
    def from_args(args: argparse.Namespace) -> "RunConfig":
        base: dict = {}
        if getattr(args, "config", None):
            try:
                with open(args.config, encoding="utf-8") as fh:
                    loaded = json.load(fh)
            except (OSError, json.JSONDecodeError) as exc:
                raise CliError(f"cannot read config {args.config}: {exc}", USAGE_ERROR)
            if not isinstance(loaded, dict):
                raise CliError("config file must hold a JSON object", USAGE_ERROR)
            base.update(loaded)
        for key in ("n", "twist", "mode", "format", "fibration"):
            value = getattr(args, key, None)
            if value is not None:
                base[key] = value
        allowed = {"n", "twist", "mode", "format", "fibration"}
        unknown = set(base) - allowed
        if unknown:
            raise CliError(f"unknown config keys: {sorted(unknown)}", USAGE_ERROR)
        return RunConfig(**base)


# ------------------------------------------------------------- parsing

def _parse_or_usage(text: str):
    try:
        return parse_label(text)
    except ParseError as exc:
        raise CliError(f"cannot parse {text!r}: {exc}", USAGE_ERROR)


def _label(text: str, space: str | None = None) -> BundleLabel:
    parsed = _parse_or_usage(text)
    if space is None:
        if parsed.double_bar:
            space = "M" if len(parsed.blocks) == 2 else "X"
        else:
            space = "Z" if len(parsed.blocks) == 3 else "fiber"
    try:
        return label_from_string(text, space)
    except (ParseError, ValueError) as exc:
        raise CliError(f"cannot read {text!r} as a bundle on {space}: {exc}", USAGE_ERROR)


def _twist_label(cfg: RunConfig) -> BundleLabel | None:
    if cfg.twist is None or cfg.twist == "trivial":
        return None
    label = _label(cfg.twist)
    if label.space not in ("Z", "X"):
        raise CliError(f"twists live on Z or X, got {label!r}", USAGE_ERROR)
    return label


# -------------------------------------------------------- serialization

def _j(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def filtered_to_json(f: FilteredBundle) -> dict:
    return {
        "factors": [str(b) for b in f.factors],
        "components": list(f.components),
        "levels": list(f.levels),
        "display": str(f),
    }


def table_to_json(t: DirectImageTable) -> dict:
    return {
        "cells": {f"{p},{q}": [str(b) for b in labs] for (p, q), labs in t.cells.items()},
        "mode": t.mode,
        "cancellations": [
            {
                "p": r.p,
                "quotient": str(r.quotient),
                "sub": str(r.sub),
                "q": r.q,
                "image": str(r.base_label),
                "applied": r.applied,
            }
            for r in t.log
        ],
    }


def complex_to_json(c: ComplexOnM) -> dict:
    return {
        "terms": [[str(b) for b in term] for term in c.terms],
        "q": c.q_row,
        "start_p": c.start_p,
        "ranks": list(c.ranks()),
        "form_types": (
            None if c.form_types is None
            else [[str(ft) for ft in t] for t in c.form_types]
        ),
        "claims": None if c.claims is None else list(c.claims),
        "claim_tags": (
            None if c.claim_tags is None
            else {str(k): v for k, v in sorted(c.claim_tags.items())}
        ),
    }


def _table_markdown(t: DirectImageTable) -> str:
    if not t.cells:
        return "(all direct images vanish)"
    ps = sorted({p for p, _ in t.cells})
    qs = sorted({q for _, q in t.cells}, reverse=True)
    head = "| q \\ p | " + " | ".join(str(p) for p in ps) + " |"
    sep = "|---" * (len(ps) + 1) + "|"
    rows = []
    for q in qs:
        cells = []
        for p in ps:
            labs = t.cells.get((p, q), ())
            cells.append(" (+) ".join(str(b) for b in labs) if labs else "-")
        rows.append(f"| {q} | " + " | ".join(cells) + " |")
    lines = [head, sep, *rows]
    for r in t.log:
        lines.append(r.describe())
    return "\n".join(lines)


def _complex_markdown(c: ComplexOnM) -> str:
    lines = [str(c)]
    lines.append(f"ranks: {list(c.ranks())}  (alternating sum {c.alternating_rank_sum()})")
    if c.form_types is not None:
        named = ["+".join(str(ft) for ft in t) for t in c.form_types]
        lines.append("form types: " + " -> ".join(named))
    if c.claims is not None:
        shown = []
        for i, d in enumerate(c.claims):
            tag = (c.claim_tags or {}).get(i)
            shown.append(f"{i}:{d}" + (f" ({tag})" if tag else ""))
        lines.append("cohomology claims: " + ", ".join(shown))
    return "\n".join(lines)


# ----------------------------------------------------------- commands

def cmd_bbw(args) -> int:
    cfg = RunConfig.from_args(args)
    weight = _parse_or_usage(args.weight).weight
    k = args.k if args.k is not None else len(weight)
    try:
        result = bbw_reduce(weight, k)
    except ValueError as exc:
        raise CliError(str(exc), USAGE_ERROR)
    if cfg.format == "json":
        out = {"weight": list(weight), "k": k}
        if result is SINGULAR:
            out["singular"] = True
        else:
            out["singular"] = False
            out["q"], out["dominant"] = result[0], list(result[1])
        print(_j(out))
    else:
        if result is SINGULAR:
            print("singular")
        else:
            print(f"q={result[0]} -> {format_weight(result[1])}")
    return 0


def cmd_rank(args) -> int:
    cfg = RunConfig.from_args(args)
    label = _label(args.label, args.space)
    r = rank(label)
    if cfg.format == "json":
        print(_j({"label": str(label), "space": label.space, "rank": r}))
    else:
        print(f"rank {label} = {r}")
    return 0


def cmd_tensor(args) -> int:
    cfg = RunConfig.from_args(args)
    label = _label(args.label, "M")
    if args.line is not None:
        line = _label(args.line, "M")
        terms = [tensor_line(label, line)]
    else:
        terms = list(pieri_tensor(label))
    if cfg.format == "json":
        print(_j({"input": str(label), "terms": [str(t) for t in terms]}))
    else:
        for t in terms:
            print(str(t))
    return 0


def cmd_relative_forms(args) -> int:
    cfg = RunConfig.from_args(args)
    reg = registry(cfg.n)
    if cfg.fibration not in reg:
        raise CliError(f"unknown fibration {cfg.fibration!r}", USAGE_ERROR)
    fib = reg[cfg.fibration]
    try:
        if args.conormal:
            bundle = conormal(fib)
        else:
            bundle = relative_cotangent(fib)
            if args.p != 1:
                bundle = exterior_power(bundle, args.p)
        twist = _twist_label(cfg)
        if twist is not None:
            bundle = bundle.twist_by(twist if twist.space == "X" else pullback_line(twist))
    except ValueError as exc:
        raise CliError(str(exc))
    if cfg.format == "json":
        print(_j(filtered_to_json(bundle)))
    else:
        print(str(bundle))
        for b, c, v in zip(bundle.factors, bundle.components, bundle.levels):
            print(f"  {b}  component={c} level={v}")
    return 0


def _assemble_table(cfg: RunConfig, p_only: int | None = None) -> DirectImageTable:
    reg = registry(cfg.n)
    twist = _twist_label(cfg)
    tx = None
    if twist is not None:
        tx = twist if twist.space == "X" else pullback_line(twist)
    lam = relative_cotangent(reg["mu"])
    ps = range(len(lam) + 1) if p_only is None else [p_only]
    columns = []
    for p in ps:
        fb = exterior_power(lam, p)
        if tx is not None:
            fb = fb.twist_by(tx)
        columns.append(direct_images(fb, reg["nu"], cfg.mode, p))
    return DirectImageTable.merge(columns)


def cmd_direct_images(args) -> int:
    cfg = RunConfig.from_args(args)
    try:
        table = _assemble_table(cfg, args.p)
    except ValueError as exc:
        raise CliError(str(exc))
    if cfg.format == "json":
        print(_j(table_to_json(table)))
    else:
        print(_table_markdown(table))
    return 0


def cmd_transform(args) -> int:
    cfg = RunConfig.from_args(args)
    try:
        res = assemble_transform(_twist_label(cfg), cfg.n, cfg.mode)
    except ValueError as exc:
        raise CliError(str(exc))
    if cfg.format == "json":
        out = {
            "E1": table_to_json(res.table)["cells"],
            "cancellations": table_to_json(res.table)["cancellations"],
            "complex": None if res.complex_ is None else complex_to_json(res.complex_),
            "reason": res.reason,
            "mode": res.mode,
        }
        print(_j(out))
    else:
        print(_table_markdown(res.table))
        if res.complex_ is not None:
            print(_complex_markdown(res.complex_))
        else:
            print(res.reason)
    return 0 if res.complex_ is not None else MATH_ERROR


def cmd_involutive(args) -> int:
    cfg = RunConfig.from_args(args)
    twist = _twist_label(cfg)
    if twist is None:
        twist = trivial_label("Z", cfg.n)
    if twist.space != "Z":
        raise CliError("involutive cohomology expects a twist on Z", USAGE_ERROR)
    try:
        coh = involutive_cohomology(twist, cfg.n)
    except UnsupportedTwistError as exc:
        raise CliError(str(exc))
    if cfg.format == "json":
        print(_j({"by_degree": {str(r): coh.dim_at(r) for r in coh.degrees()}}))
    else:
        if not coh.degrees():
            print("H^r = 0 for all r")
        for r in coh.degrees():
            print(f"H^{r} = C^{coh.dim_at(r)}")
    return 0


def cmd_adjoint(args) -> int:
    cfg = RunConfig.from_args(args)
    try:
        res = assemble_transform(_twist_label(cfg), cfg.n, cfg.mode)
        if res.complex_ is None:
            raise CliError(f"no complex to dualize: {res.reason}")
        adj = formal_adjoint(res.complex_, cfg.n)
    except ValueError as exc:
        raise CliError(str(exc))
    if cfg.format == "json":
        print(_j({"adjoint": complex_to_json(adj)}))
    else:
        print(_complex_markdown(adj))
    return 0


def cmd_check(args) -> int:
    cfg = RunConfig.from_args(args)
    try:
        res = assemble_transform(_twist_label(cfg), cfg.n, cfg.mode)
        if res.complex_ is None:
            raise CliError(f"nothing to check: {res.reason}")
        report = check_ellipticity(res.complex_)
    except ValueError as exc:
        raise CliError(str(exc))
    if cfg.format == "json":
        print(_j({
            "ranks": list(report.ranks),
            "alternating_sum": report.alternating_sum,
            "arrows": [
                {
                    "index": a.index,
                    "ok": a.ok,
                    "admissible": [[str(s), str(t)] for s, t in a.admissible],
                    "inadmissible": [[str(s), str(t)] for s, t in a.inadmissible],
                }
                for a in report.arrows
            ],
            "passed": report.passed,
        }))
    else:
        print(f"ranks {list(report.ranks)}, alternating sum {report.alternating_sum}")
        for a in report.arrows:
            status = "ok" if a.ok else "NO ADMISSIBLE COMPONENT"
            print(f"arrow {a.index}: {len(a.admissible)} admissible, "
                  f"{len(a.inadmissible)} inadmissible ({status})")
            for s, t in a.inadmissible:
                print(f"  forbidden: {s} -> {t}")
        print("PASS" if report.passed else "FAIL")
    return 0 if report.passed else MATH_ERROR


# ------------------------------------------------------- corpus runner

def _run_case(case: dict) -> dict:
    """Execute one fixture case and return the actual outcome."""
    op = case["op"]
    n = case.get("n", 3)
    reg = registry(n)

    def twisted_wedge(p):
        lam = relative_cotangent(reg["mu"])
        fb = exterior_power(lam, p)
        if case.get("twist"):
            t = _label(case["twist"])
            fb = fb.twist_by(t if t.space == "X" else pullback_line(t))
        return fb

    if op == "relative_cotangent":
        return filtered_to_json(relative_cotangent(reg[case.get("fibration", "mu")]))
    if op == "conormal":
        return filtered_to_json(conormal(reg[case.get("fibration", "nu")]))
    if op == "pullback_factors":
        return filtered_to_json(pullback_factors(_label(case["label"], "M")))
    if op == "pullback_line":
        return {"image": str(pullback_line(_label(case["label"], "Z")))}
    if op == "exterior_power":
        return filtered_to_json(twisted_wedge(case["p"]))
    if op == "direct_images":
        col = direct_images(twisted_wedge(case["p"]), reg["nu"],
                            case.get("mode", "paper"), case["p"])
        data = table_to_json(col)
        return {
            "cells": data["cells"],
            "applied": sum(r.applied for r in col.log),
            "candidates": len(col.log),
        }
    if op == "transform":
        res = assemble_transform(
            _label(case["twist"]) if case.get("twist") else None,
            n, case.get("mode", "paper"))
        return {
            "cells": table_to_json(res.table)["cells"],
            "applied": sum(r.applied for r in res.table.log),
            "complex": None if res.complex_ is None else complex_to_json(res.complex_),
        }
    if op == "pieri":
        terms = pieri_tensor(_label(case["label"], "M"))
        return {"terms": [str(t) for t in terms]}
    if op == "global_cohomology":
        coh = global_cohomology(_label(case["label"], case.get("space", "Z")))
        return {"by_degree": {str(r): [str(b) for b in coh.by_degree[r]]
                              for r in coh.degrees()}}
    if op == "involutive":
        coh = involutive_cohomology(_label(case["twist"], "Z"), n)
        return {"by_degree": {str(r): coh.dim_at(r) for r in coh.degrees()}}
    if op == "adjoint":
        res = assemble_transform(
            _label(case["twist"]) if case.get("twist") else None,
            n, case.get("mode", "paper"))
        if res.complex_ is None:
            return {"error": res.reason}
        return {"adjoint": complex_to_json(formal_adjoint(res.complex_, n))}
    if op == "form_complex":
        types = [tuple(FormType(*ft) for ft in term) for term in case["types"]]
        cx = complex_from_form_types(types, n)
        report = check_ellipticity(cx)
        return {
            "terms": [[str(b) for b in t] for t in cx.terms],
            "ranks": list(cx.ranks()),
            "alternating_sum": report.alternating_sum,
            "passed": report.passed,
        }
    if op == "check":
        res = assemble_transform(
            _label(case["twist"]) if case.get("twist") else None,
            n, case.get("mode", "paper"))
        if res.complex_ is None:
            return {"error": res.reason}
        report = check_ellipticity(res.complex_)
        unreachable = []
        for a in report.arrows:
            hit = {t for _s, t in a.admissible}
            missing = sorted(str(t) for t in set(res.complex_.terms[a.index + 1]) - hit)
            if missing:
                unreachable.append({"arrow": a.index, "targets": missing})
        return {
            "ranks": list(report.ranks),
            "alternating_sum": report.alternating_sum,
            "passed": report.passed,
            "unreachable": unreachable,
        }
    if op == "realization":
        rep = emit_realization(n=n)
        return {
            "degree": rep.degree,
            "source": str(rep.source),
            "dbar_targets": [str(b) for b in rep.dbar_targets],
            "d_targets": [str(b) for b in rep.d_targets],
            "dbar_full": [str(b) for b in rep.dbar_full],
            "d_full": [str(b) for b in rep.d_full],
        }
    raise CliError(f"unknown fixture op {op!r}", USAGE_ERROR)


def _fixture_files(directory: str | None):
    if directory is not None:
        root = pathlib.Path(directory)
        if not root.is_dir():
            raise CliError(f"fixture directory {directory!r} does not exist", USAGE_ERROR)
        files = sorted(root.glob("*.json"))
        return [(f.stem, f.read_text(encoding="utf-8")) for f in files]
    pkg = resources.files("flagcalc") / "fixtures"
    out = []
    for entry in sorted(pkg.iterdir(), key=lambda e: e.name):
        if entry.name.endswith(".json"):
            out.append((entry.name[:-5], entry.read_text(encoding="utf-8")))
    return out


def cmd_corpus(args) -> int:
    cfg = RunConfig.from_args(args)
    files = _fixture_files(args.fixtures)
    if args.only:
        files = [(k, t) for k, t in files if k == args.only]
    if not files:
        raise CliError("no fixtures found: nothing was verified", USAGE_ERROR)
    results = []
    for key, text in files:
        doc = json.loads(text)
        for idx, case in enumerate(doc["cases"]):
            actual = _run_case(case)
            ok = actual == case["expect"]
            results.append((key, idx, ok, case["expect"], actual))
    failed = [r for r in results if not r[2]]
    if cfg.format == "json":
        print(_j({
            "results": [
                {"key": k, "case": i, "ok": ok} for k, i, ok, _, _ in results
            ],
            "passed": len(results) - len(failed),
            "failed": len(failed),
        }))
    else:
        for k, i, ok, expect, actual in results:
            print(f"{k}[{i}] {'PASS' if ok else 'FAIL'}")
            if not ok:
                print(f"  expected: {json.dumps(expect, sort_keys=True)}")
                print(f"  actual:   {json.dumps(actual, sort_keys=True)}")
        print(f"{len(results) - len(failed)} passed, {len(failed)} failed")
    return MATH_ERROR if failed else 0


# --------------------------------------------------------------- main

def _add_common(p: argparse.ArgumentParser, *, n=True, twist=False, mode=False,
                fibration=False):
    p.add_argument("--format", choices=("markdown", "json"), default=None)
    p.add_argument("--config", default=None, metavar="FILE")
    if n:
        p.add_argument("-n", "--n", type=int, default=None)
    if twist:
        p.add_argument("--twist", default=None,
                       help="line-bundle twist on Z or X ('trivial' for none)")
    if mode:
        p.add_argument("--mode", choices=MODES, default=None)
    if fibration:
        p.add_argument("--fibration", default=None,
                       choices=("mu", "nu", "eta", "tau"))


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="flagcalc",
        description="exact homogeneous-bundle calculus on flag quotients of GL(n+1)",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bbw", help="reduce a fiber weight to (q, dominant) or 'singular'")
    p.add_argument("weight")
    p.add_argument("--k", type=int, default=None)
    _add_common(p, n=False)
    p.set_defaults(func=cmd_bbw)

    p = sub.add_parser("rank", help="rank of an irreducible bundle label")
    p.add_argument("label")
    p.add_argument("--space", choices=("M", "Z", "X", "fiber"), default=None)
    _add_common(p, n=False)
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("tensor", help="Pieri decomposition (or line tensor) on the base")
    p.add_argument("label")
    p.add_argument("--line", default=None)
    _add_common(p, n=False)
    p.set_defaults(func=cmd_tensor)

    p = sub.add_parser("relative-forms",
                       help="relative cotangent bundle and its wedge powers")
    p.add_argument("-p", type=int, default=1)
    p.add_argument("--conormal", action="store_true")
    _add_common(p, twist=True, fibration=True)
    p.set_defaults(func=cmd_relative_forms)

    p = sub.add_parser("direct-images", help="direct-image table of one wedge column")
    p.add_argument("-p", type=int, default=None,
                   help="column to push down (default: all)")
    _add_common(p, twist=True, mode=True)
    p.set_defaults(func=cmd_direct_images)

    p = sub.add_parser("transform",
                       help="full pipeline: first page plus the collapsed complex")
    _add_common(p, twist=True, mode=True)
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("involutive", help="cohomology of the involutive complex")
    _add_common(p, twist=True)
    p.set_defaults(func=cmd_involutive)

    p = sub.add_parser("adjoint", help="formal adjoint of the collapsed complex")
    _add_common(p, twist=True, mode=True)
    p.set_defaults(func=cmd_adjoint)

    p = sub.add_parser("check", help="symbol-level ellipticity checks")
    _add_common(p, twist=True, mode=True)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("corpus", help="replay the bundled worked examples")
    p.add_argument("--fixtures", default=None, metavar="DIR")
    p.add_argument("--only", default=None, metavar="KEY")
    _add_common(p, n=False)
    p.set_defaults(func=cmd_corpus)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except BrokenPipeError:
        return 0


if __name__ == "__main__":
    sys.exit(main())
