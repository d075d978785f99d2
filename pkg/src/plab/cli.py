"""Command-line interface: verify, sweep, demo, find-x.

Instance files are JSON: {"group": [moduli] | "integers", "A": [..],
"B": [[..], ..], "l": int} with optional "S" for restricted-sum checks, or
{"cayley": [[..], ..], ...} for an explicit multiplication table.  Exact
rationals serialize as "p/q" strings; sweep output is CSV with a fixed
column order (see README) and is byte-identical across runs of the same
config and seed.

Exit codes: 0 all requested checks hold, 1 a guaranteed inequality failed
(the instance is dumped to stderr for replay), 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import constructions, theorems
from .errors import (ResourceError, TheoremViolationError, UsageError,
                     ValidationError)
from .groups import (GSet, Instance, embed_integer_sets, iterated_sumset,
                     make_abelian_group, make_cayley_group, sumset)
from .magnification import build_plun_graph, gamma_flow, multiplicativity_check

VERIFY_CHECKS = ("plgen", "pldiff", "single", "restricted", "plgen2", "large", "noncomm")
SWEEP_CHECKS = ("plgen", "pldiff", "single", "restricted", "power", "plgen2")
CSV_COLUMNS = ("index", "group", "k", "l", "m", "b_sizes", "check",
               "gamma", "beta_base", "beta_expo_den", "holds", "detail")
ALL_SUBSETS_MAX = 12


# -- instance files -------------------------------------------------------------

def parse_instance(data: dict) -> tuple[Instance, GSet | None]:
    """Build an Instance (and optional restricted set S) from parsed JSON."""
    if not isinstance(data, dict):
        raise UsageError("instance file must contain a JSON object")
    if "A" not in data or "B" not in data or "l" not in data:
        raise UsageError('instance file needs "A", "B" and "l" fields')
    b_lists = data["B"]
    if not isinstance(b_lists, list) or not all(isinstance(b, list) for b in b_lists):
        raise UsageError('"B" must be a list of element lists')
    if "cayley" in data:
        group = make_cayley_group(data["cayley"])
        a = group.set_of(data["A"])
        bs = [group.set_of(b) for b in b_lists]
    else:
        spec = data.get("group")
        if spec == "integers":
            group, a, bs = embed_integer_sets(data["A"], b_lists)
        elif isinstance(spec, list):
            group = make_abelian_group(spec)
            a = group.set_of(data["A"])
            bs = [group.set_of(b) for b in b_lists]
        else:
            raise UsageError('"group" must be a moduli list or "integers"')
    inst = Instance(group, a, tuple(bs), int(data["l"]))
    s = group.set_of(data["S"]) if "S" in data else None
    return inst, s


def serialize_instance(inst: Instance, s: GSet | None = None) -> dict:
    out: dict = {}
    if inst.group.kind == "cayley":
        out["cayley"] = [list(row) for row in inst.group.table]
    else:
        out["group"] = list(inst.group.moduli)
    out["A"] = list(inst.a)
    out["B"] = [list(b) for b in inst.bs]
    out["l"] = inst.l
    if s is not None:
        out["S"] = list(s)
    return out


def load_instance(path: str) -> tuple[Instance, GSet | None]:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise UsageError(
                f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return parse_instance(data)


def _frac(x: Fraction) -> str:
    return str(x)


def _float_str(x: float) -> str:
    return f"{x:.12g}"


# -- verify -----------------------------------------------------------------------

def _verify_one(check: str, inst: Instance, s: GSet | None,
                args: argparse.Namespace) -> list[dict]:
    """Run one check token; returns one result dict per verdict."""
    if check in ("plgen", "pldiff", "single") and not inst.group.is_abelian:
        raise UsageError(f"check {check!r} requires a commutative group")
    if check == "plgen":
        v = theorems.check_plgen(inst)
        return [{"check": check, "holds": v.holds, "gamma": _frac(v.lhs),
                 "beta_base": _frac(v.rhs.base), "beta_expo_den": v.rhs.expo_den,
                 "witness": list(v.witness)}]
    if check == "pldiff":
        v = theorems.check_pldiff(inst)
        return [{"check": check, "holds": v.holds, "gamma": _frac(v.lhs),
                 "beta_base": _frac(v.rhs.base), "beta_expo_den": v.rhs.expo_den,
                 "witness": list(v.witness)}]
    if check == "single":
        v = theorems.check_single_summand(inst.a, inst.bs[0], inst.l, inst.k)
        return [{"check": check, "holds": v.holds, "gamma": _frac(v.lhs),
                 "beta_base": _frac(v.rhs.base), "beta_expo_den": v.rhs.expo_den,
                 "witness": list(v.witness)}]
    if check == "restricted":
        bk = iterated_sumset(inst.bs, sorted(inst.key_set))
        if args.all_subsets:
            if len(bk) > ALL_SUBSETS_MAX:
                raise UsageError(
                    f"--all-subsets needs |B_K| <= {ALL_SUBSETS_MAX}, got {len(bk)}")
            members = list(bk)
            results = []
            for mask in range(1, 1 << len(members)):
                subset = inst.group.set_of(members[i] for i in range(len(members))
                                           if (mask >> i) & 1)
                v = theorems.check_restricted_sum(inst, subset)
                results.append({"check": check, "holds": v.holds, "S": list(subset),
                                "lhs": v.lhs, "rhs": v.rhs})
            return results
        subset = s if s is not None else bk
        v = theorems.check_restricted_sum(inst, subset)
        return [{"check": check, "holds": v.holds, "S": list(subset),
                 "lhs": v.lhs, "rhs": v.rhs}]
    if check == "plgen2":
        emp = theorems.empirical_plgen2(inst, Fraction(args.epsilon).limit_denominator(10**6))
        return [{"check": check, "holds": True, "epsilon": _frac(emp.epsilon),
                 "c_emp": _float_str(emp.c_emp.as_float()),
                 "argmax_j": sorted(emp.argmax_j), "X": list(emp.x),
                 "exhaustive": emp.exhaustive}]
    if check == "large":
        res = theorems.large_subset(inst, args.mode, args.value)
        return [{"check": check, "holds": res.holds, "mode": args.mode,
                 "value": args.value, "lhs": res.lhs, "bound": _float_str(res.bound),
                 "X": list(res.x), "iterations": res.iterations,
                 "near_boundary": res.near_boundary}]
    if check == "noncomm":
        if inst.k != 2:
            raise UsageError("noncomm check needs exactly two summand sets")
        v = theorems.check_noncommutative(inst.group, inst.a, inst.bs[0], inst.bs[1])
        return [{"check": check, "holds": v.holds, "ratio": _frac(v.lhs),
                 "bound": _frac(v.rhs), "witness": list(v.witness), "notes": v.notes}]
    raise UsageError(f"unknown check {check!r}; valid: {', '.join(VERIFY_CHECKS)}")


def _result_line(res: dict) -> str:
    check = res["check"]
    verdict = "HOLDS" if res["holds"] else "FAILS"
    if check in ("plgen", "pldiff", "single"):
        expo = res["beta_expo_den"]
        beta = res["beta_base"] if expo == 1 else f"{res['beta_base']}^(1/{expo})"
        return f"{check}: gamma={res['gamma']} beta={beta} {verdict}"
    if check == "restricted":
        return f"{check}: |S|={len(res['S'])} lhs={res['lhs']} rhs={res['rhs']} {verdict}"
    if check == "plgen2":
        return (f"{check}: epsilon={res['epsilon']} c_emp~{res['c_emp']} "
                f"argmax_J={res['argmax_j']} |X|={len(res['X'])} {verdict}")
    if check == "large":
        return (f"{check}: mode={res['mode']} value={res['value']} |X|={len(res['X'])} "
                f"lhs={res['lhs']} bound={res['bound']} {verdict}")
    if check == "noncomm":
        tail = f" ({res['notes']})" if res["notes"] else ""
        return f"{check}: ratio={res['ratio']} bound={res['bound']} {verdict}{tail}"
    return f"{check}: {verdict}"


def cmd_verify(args: argparse.Namespace) -> int:
    inst, s = load_instance(args.instance)
    checks = []
    for chunk in args.check or ["plgen"]:
        checks.extend(c.strip() for c in chunk.split(",") if c.strip())
    results: list[dict] = []
    for check in checks:
        batch = _verify_one(check, inst, s, args)
        results.extend(batch)
        if check == "restricted" and args.all_subsets:
            held = sum(1 for r in batch if r["holds"])
            print(f"restricted: {held}/{len(batch)} subset checks HOLD")
        else:
            for res in batch:
                print(_result_line(res))
    all_hold = all(r["holds"] for r in results)
    if args.json:
        report = {"instance": serialize_instance(inst, s), "checks": results,
                  "all_hold": all_hold}
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write("\n")
    violated = any(not r["holds"] and r["check"] in theorems.GUARANTEED for r in results)
    if violated:
        print("GUARANTEED CHECK FAILED; instance dump follows", file=sys.stderr)
        json.dump(serialize_instance(inst, s), sys.stderr)
        print(file=sys.stderr)
        return 1
    return 0


# -- sweep ------------------------------------------------------------------------

@dataclass(frozen=True)
class SweepConfig:
    seed: int = 0
    count: int = 100
    k_min: int = 2
    k_max: int = 4
    l_rule: str | int = "all"
    group_min: int = 4
    group_max: int = 64
    set_min: int = 1
    set_max: int = 8
    checks: tuple[str, ...] = ("plgen",)
    insert_identity: bool = True


def load_sweep_config(path: str) -> SweepConfig:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise UsageError(
                f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return sweep_config_from_dict(data)


def sweep_config_from_dict(data: dict) -> SweepConfig:
    k_range = data.get("k_range", [2, 4])
    g_range = data.get("group_size_range", [4, 64])
    s_range = data.get("set_size_range", [1, 8])
    checks = tuple(data.get("checks", ["plgen"]))
    for c in checks:
        if c not in SWEEP_CHECKS:
            raise UsageError(f"unknown sweep check {c!r}; valid: {', '.join(SWEEP_CHECKS)}")
    cfg = SweepConfig(seed=int(data.get("seed", 0)), count=int(data.get("count", 100)),
                      k_min=int(k_range[0]), k_max=int(k_range[1]),
                      l_rule=data.get("l_rule", "all"),
                      group_min=int(g_range[0]), group_max=int(g_range[1]),
                      set_min=int(s_range[0]), set_max=int(s_range[1]),
                      checks=checks,
                      insert_identity=bool(data.get("insert_identity", True)))
    if cfg.count < 0 or cfg.k_min < 2 or cfg.k_max < cfg.k_min:
        raise UsageError("bad sweep config: need count >= 0 and 2 <= k_min <= k_max")
    if cfg.group_min < 1 or cfg.group_max < cfg.group_min or cfg.set_min < 1:
        raise UsageError("bad sweep config: group and set ranges must be positive")
    return cfg


def generate_base(cfg: SweepConfig, index: int) -> Instance | None:
    """Deterministic random instance #index; None when l_rule makes it empty.

    Draw order is fixed: k, then N, then A's size and elements, then each
    B_i's size and elements.  The identity is inserted into every B_i
    unless insert_identity is off.
    """
    rng = random.Random(cfg.seed * (1 << 32) + index)
    k = rng.randint(cfg.k_min, cfg.k_max)
    n = rng.randint(cfg.group_min, cfg.group_max)
    group = make_abelian_group([n])
    size_a = rng.randint(cfg.set_min, min(cfg.set_max, n))
    a = group.set_of(rng.sample(range(n), size_a))
    bs = []
    for _ in range(k):
        size = rng.randint(cfg.set_min, min(cfg.set_max, n))
        if cfg.insert_identity:
            elems = [0] + rng.sample(range(1, n), size - 1) if size > 1 else [0]
        else:
            elems = rng.sample(range(n), size)
        bs.append(group.set_of(elems))
    if cfg.l_rule != "all" and int(cfg.l_rule) >= k:
        return None
    first_l = 1 if cfg.l_rule == "all" else int(cfg.l_rule)
    return Instance(group, a, tuple(bs), first_l)


def _levels(cfg: SweepConfig, k: int) -> list[int]:
    if cfg.l_rule == "all":
        return list(range(1, k))
    return [int(cfg.l_rule)]


def _check_rng(cfg: SweepConfig, index: int, salt: int) -> random.Random:
    return random.Random(cfg.seed * (1 << 40) + index * (1 << 8) + salt)


def _sweep_check_row(cfg: SweepConfig, index: int, inst: Instance,
                     check: str) -> tuple[str, str, str, bool, str]:
    """Returns (gamma, beta_base, beta_expo_den, holds, detail) or raises
    TheoremViolationError with a replayable instance dump."""
    dump = serialize_instance(inst)
    if check == "plgen":
        v = theorems.ensure_holds(theorems.check_plgen(inst), dump)
        return _frac(v.lhs), _frac(v.rhs.base), str(v.rhs.expo_den), v.holds, ""
    if check == "pldiff":
        v = theorems.ensure_holds(theorems.check_pldiff(inst), dump)
        return _frac(v.lhs), _frac(v.rhs.base), str(v.rhs.expo_den), v.holds, ""
    if check == "single":
        v = theorems.ensure_holds(
            theorems.check_single_summand(inst.a, inst.bs[0], inst.l, inst.k), dump)
        return _frac(v.lhs), _frac(v.rhs.base), str(v.rhs.expo_den), v.holds, ""
    if check == "restricted":
        bk = iterated_sumset(inst.bs, sorted(inst.key_set))
        rng = _check_rng(cfg, index, 3)
        members = list(bk)
        size = rng.randint(1, len(members))
        subset = inst.group.set_of(rng.sample(members, size))
        v = theorems.ensure_holds(theorems.check_restricted_sum(inst, subset), dump)
        return "", "", "", v.holds, f"s_size={size};lhs={v.lhs};rhs={v.rhs}"
    if check == "power":
        rep = multiplicativity_check(inst, 2)
        if not rep.equal:
            raise TheoremViolationError(
                f"magnification ratio not multiplicative: {rep.gamma_power} != {rep.gamma_base}^2",
                instance_dump=dump)
        return (_frac(rep.gamma_base), "", "", rep.equal,
                f"r=2;gamma_r={rep.gamma_power}")
    if check == "plgen2":
        emp = theorems.empirical_plgen2(inst, Fraction(1, 2), samples=128,
                                        seed=cfg.seed * 1009 + index)
        return ("", "", "", True,
                f"epsilon=1/2;c_emp={_float_str(emp.c_emp.as_float())};x_size={len(emp.x)}")
    raise UsageError(f"unknown sweep check {check!r}")


def sweep_rows_for_index(cfg: SweepConfig, index: int, timing: bool) -> list[list[str]]:
    inst0 = generate_base(cfg, index)
    if inst0 is None:
        return []
    rows = []
    moduli = "x".join(str(n) for n in inst0.group.moduli)
    b_sizes = ";".join(str(len(b)) for b in inst0.bs)
    for level in _levels(cfg, inst0.k):
        inst = Instance(inst0.group, inst0.a, inst0.bs, level)
        for check in cfg.checks:
            start = time.perf_counter()
            gamma, base, expo, holds, detail = _sweep_check_row(cfg, index, inst, check)
            row = [str(index), moduli, str(inst.k), str(level), str(len(inst.a)),
                   b_sizes, check, gamma, base, expo,
                   "true" if holds else "false", detail]
            if timing:
                row.append(_float_str((time.perf_counter() - start) * 1000.0))
            rows.append(row)
    return rows


def run_sweep(cfg: SweepConfig, *, workers: int = 1, timing: bool = False) -> str:
    """All CSV text for a config; deterministic for fixed (config, seed)
    regardless of worker count.  Raises TheoremViolationError on the
    lowest-index guaranteed-check failure."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS + (("ms",) if timing else ()))
    if workers <= 1:
        for index in range(cfg.count):
            writer.writerows(sweep_rows_for_index(cfg, index, timing))
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for rows in pool.map(lambda i: sweep_rows_for_index(cfg, i, timing),
                                 range(cfg.count)):
                writer.writerows(rows)
    return buf.getvalue()


def cmd_sweep(args: argparse.Namespace) -> int:
    cfg = load_sweep_config(args.config)
    if args.seed is not None:
        cfg = SweepConfig(**{**cfg.__dict__, "seed": args.seed})
    if args.count is not None:
        cfg = SweepConfig(**{**cfg.__dict__, "count": args.count})
    if args.allow_no_identity:
        cfg = SweepConfig(**{**cfg.__dict__, "insert_identity": False})
    try:
        text = run_sweep(cfg, workers=args.workers, timing=args.timing)
    except TheoremViolationError as exc:
        print(f"VIOLATION: {exc}", file=sys.stderr)
        if exc.instance_dump is not None:
            json.dump(exc.instance_dump, sys.stderr)
            print(file=sys.stderr)
        return 1
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


# -- demo -------------------------------------------------------------------------

def cmd_demo(args: argparse.Namespace) -> int:
    inst, s = load_instance(args.instance)
    if args.what == "lemma21":
        if args.q is None:
            raise UsageError("demo lemma21 needs --q")
        rep = constructions.lemma21_demo(inst, args.q)
        setup = rep.setup
        print(f"q={setup.q} n={list(setup.n)} |H|={setup.h_order} "
              f"|G'|={setup.gprime.order}")
        print(f"expected distinct-summand size m*(beta*q)^l = {rep.expected_distinct}")
        for i, size in sorted(rep.distinct_sizes.items()):
            print(f"  |A + B'_(K-{{{i}}})| = {size}")
        print(f"union sum |A+(k-1)B'| = {rep.union_size} vs 2*k*m*(beta*q)^l = "
              f"{rep.union_rhs} -> {'HOLDS' if rep.union_holds else 'fails at this q'}")
        print(f"first admissible q satisfying the union bound: {rep.first_satisfying_q}")
        for term, size in sorted(rep.repeated_sizes.items()):
            summands = "+".join("B'%d" % j for j in term)
            print(f"  repeated term A+{summands} = {size}")
        print(f"repeated/distinct cardinality ratio = "
              f"{_float_str(float(rep.repeated_to_distinct_ratio))}")
        print(f"apex identity |X+(B_K x H)| = {rep.apex_lhs}, |H|*|X+B_K| = "
              f"{rep.apex_rhs} -> {'EQUAL' if rep.apex_equal else 'MISMATCH'}")
        return 0
    if args.what == "power":
        rep = constructions.power_experiment(inst, args.r)
        for row in rep.rows:
            print(f"r={row.r} gamma_r={row.gamma_r} equals gamma^r: "
                  f"{'yes' if row.equals_power else 'NO'} "
                  f"root={_float_str(row.root)} beta~{_float_str(rep.beta_approx)}")
        print(f"all powers exact: {'yes' if rep.all_equal else 'NO'}")
        return 0 if rep.all_equal else 1
    if args.what == "pipeline":
        bk = iterated_sumset(inst.bs, sorted(inst.key_set))
        subset = s if s is not None else bk
        rep = theorems.restricted_pipeline(inst, subset, args.r)
        print(f"branch={rep.branch} |S|={rep.s_size} |S+A|={rep.sa_size} "
              f"s={rep.s_prod}" + (f" t={_float_str(rep.t)}" if rep.t is not None else ""))
        for st in rep.steps:
            kind = "exact" if st.exact else "float"
            print(f"  {st.name}: {st.lhs} <= {st.rhs if st.exact else _float_str(st.rhs)} "
                  f"[{kind}] {'HOLDS' if st.holds else 'FAILS'}")
        for row in rep.power_rows:
            print(f"  r={row.r}: |S^r+A^r|={row.power_size} "
                  f"identity {'HOLDS' if row.identity_holds else 'FAILS'}; "
                  f"bound k^(1/r)(s|S|)^(1/k)={_float_str(row.bound)} "
                  f"{'HOLDS' if row.bound_holds else 'FAILS'}")
        print(f"pipeline: {'ALL HOLD' if rep.all_hold else 'SOME STEP FAILED'}")
        return 0 if rep.all_hold else 1
    raise UsageError(f"unknown demo {args.what!r}")


def cmd_find_x(args: argparse.Namespace) -> int:
    inst, _ = load_instance(args.instance)
    bk = iterated_sumset(inst.bs, sorted(inst.key_set))
    res = gamma_flow(build_plun_graph(inst.a, bk))
    image = sumset(res.witness, bk)
    print(f"X = {sorted(res.witness)}")
    print(f"|X| = {len(res.witness)}  |X+B_K| = {len(image)}  ratio = {res.gamma}")
    return 0


# -- entry point --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plab",
        description="Exact sumset-inequality checks over finite groups")
    sub = parser.add_subparsers(dest="command", required=True)

    p_verify = sub.add_parser("verify", help="run checks on an instance file")
    p_verify.add_argument("instance")
    p_verify.add_argument("--check", action="append",
                          help=f"comma-separated tokens from: {', '.join(VERIFY_CHECKS)}")
    p_verify.add_argument("--json", help="write a JSON report to this path")
    p_verify.add_argument("--all-subsets", action="store_true",
                          help="restricted check over every nonempty S in B_K")
    p_verify.add_argument("--epsilon", type=float, default=0.5,
                          help="admissible-size parameter for plgen2")
    p_verify.add_argument("--mode", choices=("a", "t"), default="t",
                          help="target kind for the large check")
    p_verify.add_argument("--value", type=float, default=0.0,
                          help="target value for the large check")
    p_verify.set_defaults(func=cmd_verify)

    p_sweep = sub.add_parser("sweep", help="seeded random instance sweep to CSV")
    p_sweep.add_argument("config")
    p_sweep.add_argument("--seed", type=int, default=None)
    p_sweep.add_argument("--count", type=int, default=None)
    p_sweep.add_argument("--out", help="CSV output path (default stdout)")
    p_sweep.add_argument("--workers", type=int, default=1)
    p_sweep.add_argument("--allow-no-identity", action="store_true",
                         help="sample summand sets without forcing the identity in")
    p_sweep.add_argument("--timing", action="store_true",
                         help="append a per-row ms column (breaks byte determinism)")
    p_sweep.set_defaults(func=cmd_sweep)

    p_demo = sub.add_parser("demo", help="construction walkthroughs")
    p_demo.add_argument("what", choices=("lemma21", "power", "pipeline"))
    p_demo.add_argument("instance")
    p_demo.add_argument("--q", type=int, default=None,
                        help="cyclic-extension scale for lemma21")
    p_demo.add_argument("-r", type=int, default=2,
                        help="max direct power for power/pipeline")
    p_demo.set_defaults(func=cmd_demo)

    p_find = sub.add_parser("find-x", help="print the magnification witness")
    p_find.add_argument("instance")
    p_find.set_defaults(func=cmd_find_x)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except TheoremViolationError as exc:
        print(f"VIOLATION: {exc}", file=sys.stderr)
        if exc.instance_dump is not None:
            json.dump(exc.instance_dump, sys.stderr)
            print(file=sys.stderr)
        return 1
    except (UsageError, ValidationError, ResourceError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
