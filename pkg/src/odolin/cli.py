"""Command-line front end.

Configuration comes from an optional JSON file (``--config``) with
individual flags layered on top. Masses and other rationals must be
written exactly, as integers or ``"p/q"`` strings.

Exit codes: 0 success, 2 configuration or input error, 3 size-limit
abort, 4 verification failure.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction
from typing import Any

from . import cylinders as cyl
from . import measures as M
from . import report as rep
from .classifier import Thresholds, classify, evidence
from .errors import ConfigError, HorizonExhausted, NotFound, OdolinError, SizeLimit
from .odometer import BaseSeq
from .operator_window import OperatorQuery, approx_root, indicator_orbit, norm_ratio_Tfk, star_constant
from .reproduce import CHECKS, DEFAULT_BASES
from .shift_disjoint import psi_range, size_cap
from .witness import ex33_witness, mixing_witness, nonmixing_probe, transitive_witness

EXIT_OK, EXIT_CONFIG, EXIT_SIZE, EXIT_VERIFY = 0, 2, 3, 4
CONFIG_KEYS = {"base", "measure", "horizon", "size_cap", "p", "format", "thresholds", "set"}
_EXACT = re.compile(r"^-?\d+(/\d+)?$")


# ---------------------------------------------------------------- parsing


def parse_rational(value: Any, where: str) -> Fraction:
    if isinstance(value, bool):
        raise ConfigError(where, "expected an exact rational")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str) and _EXACT.match(value.strip()):
        q = Fraction(value.strip())
        return q
    raise ConfigError(where, f"expected an exact rational like \"3/4\", got {value!r}")


def parse_int(value: Any, where: str, minimum: int | None = None) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise ConfigError(where, f"expected an integer, got {value!r}")
    try:
        n = int(value)
    except ValueError:
        raise ConfigError(where, f"expected an integer, got {value!r}") from None
    if minimum is not None and n < minimum:
        raise ConfigError(where, f"must be >= {minimum}, got {n}")
    return n


def _int_list(value: Any, where: str) -> list[int]:
    if isinstance(value, str):
        value = [v for v in value.split(",") if v.strip()]
    if not isinstance(value, list):
        raise ConfigError(where, "expected a list of integers")
    return [parse_int(v, f"{where}[{n}]", 2) for n, v in enumerate(value)]


def parse_base(doc: Any, where: str = "base") -> BaseSeq:
    if not isinstance(doc, dict):
        raise ConfigError(where, "expected an object with a 'kind' field")
    kind = doc.get("kind")
    try:
        if kind == "constant":
            return BaseSeq.constant(parse_int(doc.get("value"), f"{where}.value", 2))
        if kind == "list":
            values = _int_list(doc.get("values", []), f"{where}.values")
            period = doc.get("period")
            period = None if period is None else _int_list(period, f"{where}.period")
            return BaseSeq.explicit(values, period=period)
        if kind == "power":
            return BaseSeq.power(parse_int(doc.get("offset", 2), f"{where}.offset", 1))
    except OdolinError as e:
        if isinstance(e, ConfigError):
            raise
        raise ConfigError(where, str(e)) from None
    raise ConfigError(f"{where}.kind", f"expected constant, list or power, got {kind!r}")


def parse_declarations(items: Any, where: str) -> list[M.Declaration]:
    if not isinstance(items, list):
        raise ConfigError(where, "expected a list of declarations")
    out = []
    for n, d in enumerate(items):
        at = f"{where}[{n}]"
        if not isinstance(d, dict) or d.get("kind") not in M.DECLARATION_KINDS:
            raise ConfigError(f"{at}.kind", f"expected one of {sorted(M.DECLARATION_KINDS)}")
        value = d.get("value")
        value = None if value is None else parse_rational(value, f"{at}.value")
        out.append(M.Declaration(d["kind"], value, d.get("justification", "user assertion"), verified=False))
    return out


def parse_family(cfg: dict) -> M.MeasureFamily:
    doc = cfg.get("measure")
    if not isinstance(doc, dict):
        raise ConfigError("measure", "expected an object with a 'family' field")
    kind = doc.get("family")
    if kind not in M.FAMILY_KINDS:
        raise ConfigError("measure.family", f"expected one of {list(M.FAMILY_KINDS)}, got {kind!r}")
    base = parse_base(cfg["base"]) if "base" in cfg else None
    if base is None and kind != "ex33":
        base = DEFAULT_BASES.get(kind, BaseSeq.constant(2))
    try:
        if kind == "custom":
            masses = doc.get("masses")
            if not isinstance(masses, list) or not masses:
                raise ConfigError("measure.masses", "expected a nonempty list of mass vectors")
            vectors = []
            for i, v in enumerate(masses):
                if not isinstance(v, list):
                    raise ConfigError(f"measure.masses[{i}]", "expected a list of rationals")
                vectors.append([parse_rational(m, f"measure.masses[{i}][{d}]") for d, m in enumerate(v)])
            declared = parse_declarations(doc.get("declared", []), "measure.declared")
            return M.custom(base, vectors, declared, tail=doc.get("tail", "repeat"))
        if "declared" in doc:
            raise ConfigError("measure.declared", "declarations are only accepted for custom families")
        return M.build(kind, base)
    except ConfigError:
        raise
    except OdolinError as e:
        raise ConfigError("measure", str(e)) from None


def parse_thresholds(doc: Any) -> Thresholds:
    if doc is None:
        return Thresholds()
    if not isinstance(doc, dict):
        raise ConfigError("thresholds", "expected an object")
    kw = {}
    for key in ("eta_gap", "psi_gap"):
        if key in doc:
            kw[key] = parse_rational(doc[key], f"thresholds.{key}")
    for key in ("psi_sample_cap", "block_sample_cap"):
        if key in doc:
            kw[key] = parse_int(doc[key], f"thresholds.{key}", 1)
    unknown = set(doc) - {"eta_gap", "psi_gap", "psi_sample_cap", "block_sample_cap"}
    if unknown:
        raise ConfigError(f"thresholds.{sorted(unknown)[0]}", "unknown key")
    return Thresholds(**kw)


def parse_set(doc: Any, where: str = "set") -> cyl.WindowSet:
    """``{"0": [0], "2": [1, 3]}`` or the flag form ``"0:0;2:1,3"``."""
    if isinstance(doc, str):
        parsed = {}
        for part in filter(None, (p.strip() for p in doc.split(";"))):
            if ":" not in part:
                raise ConfigError(where, f"expected 'coordinate:digits', got {part!r}")
            i, digits = part.split(":", 1)
            parsed[i] = digits.split(",")
        doc = parsed
    if not isinstance(doc, dict):
        raise ConfigError(where, "expected coordinate -> digit list")
    constraints = {}
    for i, digits in doc.items():
        at = f"{where}.{i}"
        if isinstance(digits, (int, str)):
            digits = [digits]
        constraints[parse_int(i, at, 0)] = [parse_int(d, at, 0) for d in digits]
    return cyl.make_box(constraints)


def load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise ConfigError(path, e.strerror or str(e)) from None
    try:
        doc = json.loads(text, parse_float=_reject_float(path))
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}:{e.lineno}:{e.colno}", e.msg) from None
    if not isinstance(doc, dict):
        raise ConfigError(path, "top level must be an object")
    unknown = set(doc) - CONFIG_KEYS
    if unknown:
        raise ConfigError(f"{path}: {sorted(unknown)[0]}", "unknown key")
    return doc


def _reject_float(path):
    def hook(text):
        raise ConfigError(path, f"floating-point number {text} not accepted; write rationals as \"p/q\" strings")

    return hook


def merge_flags(cfg: dict, args: argparse.Namespace) -> dict:
    cfg = json.loads(json.dumps(cfg))
    if args.base_kind or args.base_value or args.base_values or args.base_offset:
        kind = args.base_kind or (
            "constant" if args.base_value else "list" if args.base_values else "power"
        )
        base = {"kind": kind}
        if args.base_value:
            base["value"] = args.base_value
        if args.base_values:
            base["values"] = args.base_values
        if args.base_period:
            base["period"] = args.base_period
        if args.base_offset:
            base["offset"] = args.base_offset
        cfg["base"] = base
    measure = cfg.setdefault("measure", {})
    if args.family:
        measure["family"] = args.family
    if args.masses:
        try:
            measure["masses"] = json.loads(args.masses, parse_float=_reject_float("--masses"))
        except json.JSONDecodeError as e:
            raise ConfigError("--masses", e.msg) from None
    if args.tail:
        measure["tail"] = args.tail
    for key in ("horizon", "size_cap", "p", "format"):
        value = getattr(args, key, None)
        if value is not None:
            cfg[key] = value
    if getattr(args, "set", None):
        cfg["set"] = args.set
    measure.setdefault("family", "uniform")
    return cfg


# ---------------------------------------------------------------- commands


def _horizon(cfg, default=20) -> int:
    return parse_int(cfg.get("horizon", default), "horizon", 1)


def _cap(cfg) -> int:
    return parse_int(cfg["size_cap"], "size_cap", 1) if "size_cap" in cfg else size_cap()


def cmd_family_show(cfg, args):
    fam = parse_family(cfg)
    L = _horizon(cfg)
    table = evidence(fam, L, parse_thresholds(cfg.get("thresholds")))
    rows = [
        {
            "i": r.i,
            "alpha": r.alpha,
            "eta": r.eta,
            "delta": r.delta,
            "lambda_0": r.lambda0,
            "defect": r.defect,
            "rho": r.rho,
            "diamond_running": r.diamond,
            "psi": r.psi,
        }
        for r in table.rows
    ]
    results = {"family": fam.kind, "base": fam.base.describe(), "rows": rows, "psi_omitted": table.omitted}
    text = f"family {fam.kind} on base {fam.base.describe()}, horizon {L}\n" + rep.text_table(rows)
    if table.omitted:
        text += f"\npsi omitted above the sample cap at {[i for i, _ in table.omitted]}"
    return results, [], text, rows, EXIT_OK


def cmd_classify(cfg, args):
    fam = parse_family(cfg)
    L = _horizon(cfg)
    v = classify(fam, L, parse_thresholds(cfg.get("thresholds")))
    rules = [{"rule": r.rule_id, "condition": r.condition, "inputs": list(r.inputs), "conclusion": r.conclusion} for r in v.rules_fired]
    results = {
        "headline": v.headline(),
        "transitive": v.transitive,
        "mixing": v.mixing,
        "continuity": v.continuity,
        "notes": v.notes,
        "horizon": L,
    }
    lines = [v.headline(), f"transitive: {v.transitive.value}", f"mixing: {v.mixing.value}", f"continuity: {v.continuity}"]
    lines += [f"rule {r['rule']}: {r['condition']} => {r['conclusion']}; inputs: {'; '.join(r['inputs'])}" for r in rules]
    lines += [f"note: {n}" for n in v.notes]
    code = EXIT_VERIFY if v.continuity == "not-established" else EXIT_OK
    return results, rules, "\n".join(lines), None, code


def cmd_psi(cfg, args):
    fam = parse_family(cfg)
    i = parse_int(args.i, "--i", 0)
    j = parse_int(args.j if args.j is not None else args.i, "--j", i)
    budget = _int_list_any(args.k_budget, "--k-budget") if args.k_budget else None
    r = psi_range(fam, i, j, k_budget=budget, cap=_cap(cfg))
    results = {
        "i": i,
        "j": j,
        "N": r.N,
        "value": r.value,
        "k": r.k,
        "shift_digits": list(r.shift_digits(fam)),
        "witness_cells": r.witness,
        "witness_digits": [list(c) for c in r.witness_digits(fam)],
    }
    text = f"psi_[{i}..{j}] = {rep.to_text(r.value)} at k = {r.k} (N = {r.N})\nwitness cells: {list(r.witness)}"
    return results, [], text, None, EXIT_OK


def _int_list_any(value, where):
    return [parse_int(v, where, 1) for v in value.split(",") if v.strip()]


def _witness_results(r):
    results = {
        "k": r.k,
        "set": r.set,
        "measure": r.measure,
        "complement_measure": r.complement_measure,
        "disjoint": r.disjoint,
        "eps": r.eps,
        "accepted": r.accepted,
        "construction": r.construction,
        "params": r.params,
    }
    text = (
        f"{r.construction} witness for k = {r.k}: {rep.to_text(r.set)}\n"
        f"mu(B) = {rep.to_text(r.measure)}, mu(complement) = {rep.to_text(r.complement_measure)} "
        f"(< {rep.to_text(r.eps)}: {r.complement_measure < r.eps}), disjoint from f^k(B): {r.disjoint}\n"
        f"params: {rep.to_text(r.params)}"
    )
    return results, text


def cmd_witness(cfg, args):
    fam = parse_family(cfg)
    eps = parse_rational(args.eps, "--eps")
    if args.kind == "mixing":
        if args.k is None:
            raise ConfigError("--k", "required for mixing witnesses")
        k = parse_int(args.k, "--k", 1)
        r = ex33_witness(k, eps, fam) if fam.kind == "ex33" else mixing_witness(fam, k, eps)
        results, text = _witness_results(r)
        return results, [], text, None, EXIT_OK if r.accepted else EXIT_VERIFY
    if args.kind == "transitive":
        r = transitive_witness(fam, eps, window_budget=parse_int(args.window_budget, "--window-budget", 0), cap=_cap(cfg))
        results, text = _witness_results(r)
        return results, [], text, None, EXIT_OK if r.accepted else EXIT_VERIFY
    if args.l is None:
        raise ConfigError("--l", "required for nonmixing probes")
    l = parse_int(args.l, "--l", 0)
    p = nonmixing_probe(fam, l, eps, window_budget=parse_int(args.window_budget, "--window-budget", 0), cap=_cap(cfg))
    results = {
        "l": p.l,
        "a": p.a,
        "b": p.b,
        "m": p.m,
        "eps": p.eps,
        "eps_bound": p.bound,
        "argument": p.argument,
        "maxima": p.maxima,
        "skipped": p.skipped,
        "all_below": p.all_below,
    }
    rows = [{"J": J, "max_disjoint_mass": v, "limit": 1 - eps, "below": v <= 1 - eps} for J, v in p.maxima.items()]
    text = f"nonmixing probe at l = {l}: digits {p.a}, {p.b}, shift m = {p.m}, argument {p.argument}\n" + rep.text_table(rows)
    if p.skipped:
        text += f"\nskipped windows (size cap): {p.skipped}"
    return results, [], text, rows, EXIT_OK if p.all_below else EXIT_VERIFY


def cmd_verify_paper(cfg, args):
    name = args.name
    L = parse_int(cfg.get("horizon", 12 if name == "lemma45" else 20), "--L", 1)
    base = parse_base(cfg["base"]) if "base" in cfg and name not in ("ex33", "lemma45") else None
    checks = CHECKS[name](L, base=base) if base is not None else CHECKS[name](L)
    passed = all(c.passed for c in checks)
    results = {
        "name": name,
        "horizon": L,
        "passed": passed,
        "checks": [{"check": c.name, "passed": c.passed, "values": c.values} for c in checks],
    }
    lines = [f"{'PASS' if c.passed else 'FAIL'}  {c.name}  {rep.to_text(c.values)}" for c in checks]
    lines.append(f"{name}: {'pass' if passed else 'FAIL'}")
    return results, [], "\n".join(lines), None, EXIT_OK if passed else EXIT_VERIFY


def cmd_operator(cfg, args):
    fam = parse_family(cfg)
    if args.kind == "norms":
        J = parse_int(args.window, "--window", 0)
        p = parse_rational(cfg.get("p", "2"), "p")
        N = fam.base.beta(J + 1)
        ks = _int_list_any(args.k, "--k") if args.k else list(range(1, min(N, 17)))
        rows = []
        for k in ks:
            R = norm_ratio_Tfk(OperatorQuery(fam, J, p, k))
            rows.append({"k": k, "ratio": R, "norm_approx": approx_root(R, p)})
        c = star_constant(fam, J)
        results = {"window": J, "p": p, "norms": rows, "star_constant": c}
        text = (
            f"window [0..{J}], p = {rep.to_text(p)}; norm = ratio^(1/p) (decimal is approximate)\n"
            + rep.text_table(rows)
            + f"\nstar constant c_J = {rep.to_text(c)}"
        )
        return results, [], text, rows, EXIT_OK
    if "set" not in cfg:
        raise ConfigError("--set", "an indicator set is required, e.g. --set '0:0'")
    S = parse_set(cfg["set"])
    k_max = parse_int(args.k_max, "--k-max", 0)
    window = parse_int(args.window, "--window", 0) if args.window is not None else None
    orbit = indicator_orbit(S, fam, k_max, window=window)
    rows = [{"k": k, "measure": v} for k, v in enumerate(orbit)]
    results = {"set": S, "orbit": orbit}
    text = f"mu(f^-k(S)) = ||T_f^k 1_S||_p^p for S = {rep.to_text(S)}\n" + rep.text_table(rows)
    return results, [], text, rows, EXIT_OK


# ---------------------------------------------------------------- parser


def _common(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("configuration")
    g.add_argument("--config", help="JSON configuration file")
    g.add_argument("--format", choices=("text", "json", "csv"))
    g.add_argument("--base-kind", choices=("constant", "list", "power"))
    g.add_argument("--base-value", type=int)
    g.add_argument("--base-values", help="comma-separated radices, e.g. 2,3,5")
    g.add_argument("--base-period", help="comma-separated radices repeated after the listed ones")
    g.add_argument("--base-offset", type=int)
    g.add_argument("--family", choices=M.FAMILY_KINDS)
    g.add_argument("--masses", help='JSON list of mass vectors, e.g. [["1/3","2/3"]]')
    g.add_argument("--tail", choices=("repeat", "uniform"))
    g.add_argument("--horizon", "--L", dest="horizon", type=int)
    g.add_argument("--size-cap", dest="size_cap", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="odolin", description="Exact dynamics of composition operators over odometers.")
    sub = parser.add_subparsers(dest="command", required=True)

    fam = sub.add_parser("family", help="measure family tables")
    fam_sub = fam.add_subparsers(dest="action", required=True)
    show = fam_sub.add_parser("show", help="per-coordinate table")
    _common(show)
    show.set_defaults(func=cmd_family_show)

    cls = sub.add_parser("classify", help="transitivity and mixing verdict")
    _common(cls)
    cls.set_defaults(func=cmd_classify)

    psi = sub.add_parser("psi", help="largest shift-disjoint mass on a coordinate block")
    _common(psi)
    psi.add_argument("--i", required=True)
    psi.add_argument("--j")
    psi.add_argument("--k-budget", help="comma-separated candidate shifts")
    psi.set_defaults(func=cmd_psi)

    wit = sub.add_parser("witness", help="explicit witness sets")
    wit.add_argument("kind", choices=("mixing", "transitive", "nonmixing"))
    _common(wit)
    wit.add_argument("--k")
    wit.add_argument("--l")
    wit.add_argument("--eps", required=True)
    wit.add_argument("--window-budget", default=None)
    wit.set_defaults(func=_witness_dispatch)

    ver = sub.add_parser("verify-paper", help="exact reproduction checks for a built-in construction")
    ver.add_argument("name", choices=sorted(CHECKS))
    _common(ver)
    ver.set_defaults(func=cmd_verify_paper)

    op = sub.add_parser("operator", help="window norms and indicator orbits")
    op.add_argument("kind", choices=("norms", "orbit"))
    _common(op)
    op.add_argument("--window")
    op.add_argument("--p")
    op.add_argument("--k", help="comma-separated shifts (norms)")
    op.add_argument("--k-max", default="8")
    op.add_argument("--set", help="indicator set, e.g. '0:0;1:0,1'")
    op.set_defaults(func=cmd_operator)
    return parser


def _witness_dispatch(cfg, args):
    if args.window_budget is None:
        args.window_budget = 12 if args.kind == "transitive" else 2
    return cmd_witness(cfg, args)


def _fill_defaults(args):
    for name in ("base_kind", "base_value", "base_values", "base_period", "base_offset", "family", "masses", "tail", "p", "set"):
        if not hasattr(args, name):
            setattr(args, name, None)
    if args.command == "operator" and args.window is None and args.kind == "norms":
        args.window = "3"


def run(argv: list[str] | None = None) -> tuple[int, str]:
    """Run one command; returns ``(exit code, rendered output)``."""
    parser = build_parser()
    args = parser.parse_args(argv)
    _fill_defaults(args)
    try:
        cfg = merge_flags(load_config(args.config), args)
        fmt = cfg.get("format", "text")
        if fmt not in ("text", "json", "csv"):
            raise ConfigError("format", f"expected text, json or csv, got {fmt!r}")
        results, rules, text, rows, code = args.func(cfg, args)
    except ConfigError as e:
        return EXIT_CONFIG, f"config error at {e}"
    except SizeLimit as e:
        return EXIT_SIZE, f"size limit: {e} (raise ODOLIN_SIZE_CAP or --size-cap)"
    except (NotFound, HorizonExhausted) as e:
        return EXIT_VERIFY, f"verification failed: {e}"
    except (OdolinError, ValueError, IndexError) as e:
        return EXIT_CONFIG, f"input error: {type(e).__name__}: {e}"
    command = " ".join(filter(None, [args.command, getattr(args, "action", None), getattr(args, "kind", None), getattr(args, "name", None)]))
    if fmt == "json":
        return code, rep.dumps(rep.build_report(command, cfg, results, rules, exact=results))
    if fmt == "csv":
        if rows is None:
            rows = [{k: v for k, v in results.items() if not isinstance(v, (list, dict, tuple))}]
        return code, rep.to_csv(rows).rstrip("\n")
    return code, text


def main(argv: list[str] | None = None) -> int:
    code, out = run(argv)
    stream = sys.stdout if code in (EXIT_OK, EXIT_VERIFY) else sys.stderr
    print(out, file=stream)
    return code


if __name__ == "__main__":
    sys.exit(main())
