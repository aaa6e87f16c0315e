"""Command-line entry point: ``xiongsets <command> ...``.

Every run validates its flags first (exit 2 with every problem listed),
then dispatches, writes a JSON report and exits with

    0  all assertions passed
    3  an assertion failed
    4  the schedule cannot realise the request (no tuple, or prefix too short)
    5  a resource budget was exceeded
"""

from __future__ import annotations

import argparse
import itertools
import json
import os
import random
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import reports
from .chaos import TargetSpec, find_target_block, proximal_check, return_to_z_check, scrambled_pair_check, verify_target_time
from .construction import (Budget, ConstructionParams, build_delta, build_delta_countable,
                           check_stage_densities, endpoint_densities)
from .contfrac import erase_digit_ratio, gap_bound, min_sibling_gap, quasi_mult_ratio
from .cover import CoverElement, cover_certify
from .dimension import claim_s, dim_bisect, jarnik_bounds, weishu_check
from .errors import BudgetExceeded, CoverError, HorizonError, NoSuchTuple, ScheduleError
from .gauss import exactness_probe, invariance_defect, scrambled_stats
from .ledger import SegmentLedger
from .symbolic import COUNTABLE, ArraySource, gamma_erase, metric_base

EXIT_OK, EXIT_CONFIG, EXIT_FAIL, EXIT_SCHEDULE, EXIT_BUDGET = 0, 2, 3, 4, 5
THREADS_ENV = "XIONGSETS_THREADS"

STOCHASTIC = {"cf check", "gauss invariance", "gauss exactness", "gauss scrambled"}


class ConfigError(ValueError):
    def __init__(self, problems: list[str]):
        super().__init__("; ".join(problems))
        self.problems = problems


@dataclass
class RunConfig:
    command: str
    options: dict
    seed: int | None = None
    out: str | None = None
    threads: int = 1
    warnings: list[str] = field(default_factory=list)

    def echo(self) -> dict:
        d = {k: v for k, v in sorted(self.options.items()) if v is not None}
        d["command"] = self.command
        if self.seed is not None:
            d["seed"] = self.seed
        d["threads"] = self.threads
        return d


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="xiongsets", description=__doc__.splitlines()[0])
    p.add_argument("--config", help="JSON file of default flag values")
    sub = p.add_subparsers(dest="group", required=True)

    def common(sp, seed=False):
        sp.add_argument("--report", help="report path (default: stdout)")
        if seed:
            sp.add_argument("--seed", type=int)

    c = sub.add_parser("construct", help="build a ledger")
    c.add_argument("--alphabet", default="2")
    c.add_argument("--stages", type=int, default=1)
    c.add_argument("--schedule", default="full")
    c.add_argument("--z")
    c.add_argument("--x")
    c.add_argument("--paper-literal", action="store_true")
    c.add_argument("--reembed", action="store_true")
    c.add_argument("--out", help="ledger output path")
    common(c)

    v = sub.add_parser("verify", help="chaos checks on a ledger")
    v.add_argument("check", choices=["proximal", "return", "target", "scrambled"])
    v.add_argument("--ledger")
    v.add_argument("--ledger2")
    v.add_argument("--stage", type=int, default=1)
    v.add_argument("--d", type=int, default=1)
    v.add_argument("--spec")
    common(v)

    cf = sub.add_parser("cf", help="continued-fraction checks")
    cf.add_argument("check", choices=["check", "dim", "certify"])
    cf.add_argument("--lemma", choices=["dz", "quasimult", "gap"])
    cf.add_argument("--samples", type=int, default=1000)
    cf.add_argument("--max-digit", type=int, default=30)
    cf.add_argument("--max-len", type=int, default=8)
    cf.add_argument("--digit-bound", type=int)
    cf.add_argument("--depth", type=int, default=4)
    cf.add_argument("--tol", type=float, default=1e-6)
    cf.add_argument("--jarnik", action="store_true")
    cf.add_argument("--cover")
    common(cf, seed=True)

    d = sub.add_parser("dim", help="dimension proxies for constructed sets")
    d.add_argument("check", choices=["weishu"])
    d.add_argument("--ledger")
    d.add_argument("--depth", type=int, default=16)
    common(d)

    g = sub.add_parser("gauss", help="Gauss map checks")
    g.add_argument("check", choices=["invariance", "exactness", "scrambled"])
    g.add_argument("--pairs", type=int, default=50)
    g.add_argument("--horizon", type=int, default=10_000)
    g.add_argument("--k", type=int, default=4)
    g.add_argument("--samples", type=int, default=100)
    g.add_argument("--branches", type=int, default=10 ** 6)
    g.add_argument("--steps", type=int, default=10)
    g.add_argument("--out", help="report path")
    common(g, seed=True)
    return p


def validate_config(raw: dict, env: dict | None = None) -> RunConfig:
    """Normalise parsed flags into a :class:`RunConfig`, collecting every violation."""
    env = os.environ if env is None else env
    raw = dict(raw)
    problems, warnings = [], []
    group = raw.pop("group", None)
    check = raw.pop("check", None)
    command = group if check is None else f"{group} {check}"
    seed = raw.pop("seed", None)
    out = raw.pop("report", None)
    raw.pop("config", None)
    if group == "gauss":
        out = raw.pop("out", None) or out

    known = _known_options(group)
    for key in sorted(set(raw) - known):
        problems.append(f"unknown option {key!r} for {command}")

    threads = env.get(THREADS_ENV, "1")
    try:
        threads = int(threads)
        if threads < 1:
            raise ValueError
    except ValueError:
        problems.append(f"{THREADS_ENV} must be a positive integer, got {threads!r}")
        threads = 1

    if command in STOCHASTIC and seed is None:
        problems.append(f"--seed is required for {command}")

    def need(key, flag):
        if raw.get(key) in (None, ""):
            problems.append(f"missing {flag}")
            return False
        return True

    def positive(key, flag, minimum=1):
        v = raw.get(key)
        if v is not None and v < minimum:
            problems.append(f"{flag} must be at least {minimum}, got {v}")

    def existing(key, flag):
        if need(key, flag) and not Path(raw[key]).is_file():
            problems.append(f"{flag} file not found: {raw[key]}")

    if group == "construct":
        a = str(raw.get("alphabet", "2")).strip().lower()
        if a in ("inf", "countable", "infinity"):
            raw["alphabet"] = COUNTABLE
        else:
            try:
                raw["alphabet"] = int(a)
                if raw["alphabet"] < 2:
                    problems.append(f"--alphabet must be at least 2, got {raw['alphabet']}")
            except ValueError:
                problems.append(f"--alphabet must be an integer or 'inf', got {a!r}")
        positive("stages", "--stages")
        sched = str(raw.get("schedule", "full"))
        if sched != "full":
            try:
                kind, vals = sched.split(":")
                m, b = (int(v) for v in vals.split(","))
                if kind != "budget" or m < 1 or b < 1:
                    raise ValueError
            except ValueError:
                problems.append(f"--schedule must be 'full' or 'budget:<maps>,<blocks>', got {sched!r}")
        existing("z", "--z")
        existing("x", "--x")
        need("out", "--out")
    elif group == "verify":
        existing("ledger", "--ledger")
        positive("stage", "--stage")
        positive("d", "--d")
        if check == "target":
            existing("spec", "--spec")
        if check == "scrambled":
            existing("ledger2", "--ledger2")
        elif raw.get("ledger2"):
            existing("ledger2", "--ledger2")
    elif group == "cf":
        if check == "check":
            need("lemma", "--lemma")
            positive("samples", "--samples")
            positive("max_digit", "--max-digit", 2 if raw.get("lemma") == "gap" else 1)
            positive("max_len", "--max-len")
        else:
            if need("digit_bound", "--digit-bound"):
                positive("digit_bound", "--digit-bound", 2)
        if check == "dim":
            positive("depth", "--depth")
            if raw.get("tol") is not None and raw["tol"] <= 0:
                problems.append("--tol must be positive")
            k = raw.get("digit_bound")
            if raw.get("jarnik") and k is not None and k <= 8:
                warnings.append(f"digit bound {k} is outside the range k > 8 of the Jarnik estimate")
        if check == "certify":
            existing("cover", "--cover")
    elif group == "dim":
        existing("ledger", "--ledger")
        positive("depth", "--depth")
    elif group == "gauss":
        positive("pairs", "--pairs")
        positive("horizon", "--horizon")
        positive("k", "--k", 2)
        positive("samples", "--samples")
        positive("branches", "--branches")
        positive("steps", "--steps")

    if problems:
        raise ConfigError(problems)
    return RunConfig(command, _relevant(command, raw), seed, out, threads, warnings)


_OPTIONS = {
    "construct": {"alphabet", "stages", "schedule", "z", "x", "paper_literal", "reembed", "out"},
    "verify": {"ledger", "ledger2", "stage", "d", "spec"},
    "cf": {"lemma", "samples", "max_digit", "max_len", "digit_bound", "depth", "tol", "jarnik", "cover"},
    "dim": {"ledger", "depth"},
    "gauss": {"pairs", "horizon", "k", "samples", "branches", "steps"},
}

_USED = {
    "cf check": {"lemma", "samples", "max_digit", "max_len"},
    "cf dim": {"digit_bound", "depth", "tol", "jarnik"},
    "cf certify": {"digit_bound", "cover"},
    "gauss invariance": {"samples", "branches"},
    "gauss exactness": {"samples", "steps"},
    "gauss scrambled": {"pairs", "horizon", "k"},
}


def _known_options(group) -> set:
    return _OPTIONS.get(group, set())


def _relevant(command: str, raw: dict) -> dict:
    keys = _USED.get(command)
    return dict(raw) if keys is None else {k: raw.get(k) for k in keys}


# ---------------------------------------------------------------------------
# commands


def read_digits(path) -> list[int]:
    text = Path(path).read_text().split()
    try:
        vals = [int(t) for t in text]
    except ValueError as e:
        raise ConfigError([f"{path}: not a whitespace-separated list of integers ({e})"])
    if not vals or min(vals) < 1:
        raise ConfigError([f"{path}: needs at least one symbol, all positive"])
    return vals


def _source(path, alphabet):
    vals = read_digits(path)
    if alphabet != COUNTABLE and max(vals) > alphabet:
        raise ConfigError([f"{path}: symbol {max(vals)} outside the alphabet 1..{alphabet}"])
    return ArraySource(np.asarray(vals, dtype=np.int64), None if alphabet == COUNTABLE else alphabet, periodic=True)


def cmd_construct(cfg: RunConfig):
    o = cfg.options
    budget = None
    if o["schedule"] != "full":
        m, b = (int(v) for v in o["schedule"].split(":")[1].split(","))
        budget = Budget(m, b)
    params = ConstructionParams(o["alphabet"], o["stages"], budget, _source(o["z"], o["alphabet"]),
                                _source(o["x"], o["alphabet"]), o["paper_literal"], o["reembed"])
    builder = build_delta_countable if o["alphabet"] == COUNTABLE else build_delta
    ledger = builder(params)
    ledger.check_contiguity()
    ledger.save(o["out"])

    point = ledger.point()
    free = ledger.total_length - ledger.mark_count(ledger.total_length)
    n_out = min(free, 1 << 16)
    erased = gamma_erase(ledger.marks, point, n_out)
    identity = erased.symbols.tolist() == ledger.sources["x"].take(1, n_out).tolist()
    rows = check_stage_densities(ledger)
    ends = endpoint_densities(ledger)
    out = [
        reports.assertion("erasing the marks recovers the base point", identity, n_out, provenance="paper"),
        reports.assertion("endpoint densities strictly decrease", all(a > b for a, b in zip(ends, ends[1:])), ends,
                          provenance="paper"),
    ]
    for r in rows:
        out.append(reports.assertion(f"stage {r['stage']} density case {r['case']}", r["ok"], r["sup"], r["bound"],
                                     provenance="paper"))
    data = {"total_length": ledger.total_length, "segments": len(ledger),
            "stages": [L.to_dict() for L in ledger.stages], "ledger": o["out"]}
    return out, data


def _load_ledger(path) -> SegmentLedger:
    raw = json.loads(Path(path).read_text())
    reports.validate(raw, "ledger")
    return SegmentLedger.from_dict(raw)


def cmd_verify(cfg: RunConfig):
    o = cfg.options
    ledger = _load_ledger(o["ledger"])
    k = o["stage"]
    ledger.stage(k)
    check = cfg.command.split()[1]
    if check == "proximal":
        out, data = [], {}
        for n in range(1, k + 1):
            rep = proximal_check(ledger.point(), ledger.sources["z"], min(o["d"], n), n)
            out.append(reports.assertion(f"stage {n} multiply proximal", rep.passed, rep.max, rep.bound,
                                         provenance="paper"))
            data[f"stage_{n}"] = {"anchor": rep.anchor, "distances": rep.distances}
        return out, data
    if check == "return":
        family = [ledger.point()]
        if o.get("ledger2"):
            family.append(_load_ledger(o["ledger2"]).point())
        diam = return_to_z_check(family, ledger.sources["z"], k)
        bound = Fraction(1, metric_base(ledger.alphabet) ** k)
        return [reports.assertion(f"stage {k} return to z", diam <= bound, diam, bound, provenance="paper")], \
            {"B": ledger.stage(k).B}
    if check == "target":
        spec = TargetSpec.from_dict(json.loads(Path(o["spec"]).read_text()))
        ordinal, q = find_target_block(spec, k, ledger)
        rep = verify_target_time(q, spec, ledger, k)
        L = ledger.stage(k)
        exact = all(j * q + 1 == L.r(ordinal, j) for j in range(1, spec.d + 1))
        return [
            reports.assertion("targets read back at j*q+1", rep.passed, rep.checked, provenance="paper"),
            reports.assertion("j*q+1 equals the block anchors", exact, provenance="trivial"),
        ], {"q": q, "block": ordinal, "failures": rep.failures}
    other = _load_ledger(o["ledger2"])
    rep = scrambled_pair_check(ledger.point(), other.point(), k)
    return [reports.assertion("sampled min and max distances", rep.passed, [rep.min, rep.max],
                              [Fraction(1, rep.base ** k), Fraction(1, rep.base)], provenance="derived")], \
        {"shifts": rep.shifts}


def _random_digits(rng: random.Random, max_len: int, max_digit: int, min_len: int = 1) -> tuple[int, ...]:
    return tuple(rng.randint(1, max_digit) for _ in range(rng.randint(min_len, max_len)))


def cmd_cf_check(cfg: RunConfig):
    o = cfg.options
    rng = random.Random(cfg.seed)
    S, D, L = o["samples"], o["max_digit"], o["max_len"]
    lemma = o["lemma"]
    violations, worst, worst_key = 0, None, None
    if lemma == "dz":
        for _ in range(S):
            w = _random_digits(rng, L, D)
            pos = rng.randint(1, len(w))
            a = w[pos - 1]
            lo, hi = Fraction(a + 1, 2), Fraction(a + 1)
            try:
                r = erase_digit_ratio(w, pos)
            except AssertionError:
                violations += 1
                continue
            slack = min(r / lo, hi / r)
            if worst_key is None or slack < worst_key:
                worst_key, worst = slack, {"input": {"digits": list(w), "k": pos}, "value": r, "bound": [lo, hi]}
        passed = violations == 0
    elif lemma == "quasimult":
        lam_bound = Fraction(8)
        for _ in range(S):
            mu, nu = _random_digits(rng, L, D), _random_digits(rng, L, D)
            r = quasi_mult_ratio(mu, nu)
            need = max(r, 1 / r)
            if worst_key is None or need > worst_key:
                worst_key, worst = need, {"input": {"mu": list(mu), "nu": list(nu)}, "value": need, "bound": lam_bound}
        violations = int(worst_key > lam_bound)
        passed = violations == 0
    else:
        for _ in range(S):
            k = rng.randint(2, D)
            w = _random_digits(rng, L, k)
            try:
                gap, pair = min_sibling_gap(w, k)
            except AssertionError:
                violations += 1
                continue
            b = gap_bound(w, k)
            slack = gap / b
            if worst_key is None or slack < worst_key:
                worst_key, worst = slack, {"input": {"prefix": list(w), "k": k, "digits": list(pair)},
                                           "value": gap, "bound": b}
        passed = violations == 0
    a = reports.assertion(f"lemma {lemma} over {S} samples", passed, violations, 0, provenance="derived")
    return [a], {"lemma": lemma, "samples": S, "violations": violations, "worst_case": worst}


def cmd_cf_dim(cfg: RunConfig):
    o = cfg.options
    k = o["digit_bound"]
    est = dim_bisect(k, o["depth"], o["tol"])
    data = {"s": est.s, "lo": est.lo, "hi": est.hi, "iterations": est.iterations,
            "previous_depth": est.previous_depth, "s_sum": est.s_sum}
    out = [reports.assertion("bisection bracket below tolerance", est.width <= o["tol"], est.width, o["tol"],
                             provenance="trivial")]
    if o["jarnik"]:
        jb = jarnik_bounds(k)
        data["jarnik"] = {"lower": jb.lower, "upper": jb.upper, "in_range": jb.in_range}
        out.append(reports.assertion("estimate inside the Jarnik enclosure", jb.lower <= est.s <= jb.upper,
                                     est.s, [jb.lower, jb.upper], provenance="paper",
                                     note=None if jb.in_range else "k <= 8: enclosure not guaranteed"))
    return out, data


def _frac(v) -> Fraction:
    return Fraction(v) if not isinstance(v, float) else Fraction(v).limit_denominator(1 << 62)


def load_cover(path):
    raw = json.loads(Path(path).read_text())
    if isinstance(raw, list):
        raw = {"elements": raw}
    prefix = tuple(int(a) for a in raw.get("prefix", []))
    elems = []
    for e in raw["elements"]:
        if isinstance(e, dict):
            if "digits" in e:
                elems.append(CoverElement.fundamental(tuple(e["digits"])))
            else:
                elems.append(CoverElement(_frac(e["lo"]), _frac(e["hi"])))
        else:
            elems.append(CoverElement(_frac(e[0]), _frac(e[1])))
    return prefix, elems, raw.get("s")


def cmd_cf_certify(cfg: RunConfig):
    o = cfg.options
    k = o["digit_bound"]
    prefix, elems, s = load_cover(o["cover"])
    s = float(claim_s(k)) if s is None else float(s)
    if not 0 < s < 1:
        return [reports.assertion("exponent in (0, 1)", False, s, provenance="trivial")], {}
    try:
        cert = cover_certify(elems, k, s, prefix)
    except CoverError as e:
        return [reports.assertion("four-phase reduction", False, provenance="derived", note=str(e))], {}
    data = {"s": s, "input_sum": cert.input_sum, "bound": cert.bound, "J_sum": cert.j_sum,
            "sums": cert.phases["sums"], "J_size": len(cert.phases["J"]), "merges": cert.merges,
            "dropped_empty": cert.dropped_empty, "dropped_degenerate": cert.dropped_degenerate}
    return [reports.assertion("s-sum certified", cert.holds, cert.input_sum, cert.bound, provenance="paper")], data


WEISHU_MAX_FREE = 16


def cmd_dim_weishu(cfg: RunConfig):
    o = cfg.options
    ledger = _load_ledger(o["ledger"])
    if ledger.alphabet == COUNTABLE:
        raise ConfigError(["dim weishu needs a finite-alphabet ledger"])
    N, depth = ledger.alphabet, o["depth"]
    if depth > ledger.total_length:
        raise HorizonError(f"depth {depth} exceeds the built prefix {ledger.total_length}")
    free = depth - ledger.mark_count(depth)
    # the free symbols up to depth are exactly x[1..free]; enumerate them all
    if N ** free > 1 << WEISHU_MAX_FREE:
        raise BudgetExceeded(f"{N}^{free} base prefixes exceed the enumeration budget 2^{WEISHU_MAX_FREE}")
    z = ledger.sources["z"]
    words = (ledger.point(ArraySource(np.asarray(w, dtype=np.int64), N, periodic=True), z).take(1, depth)
             for w in itertools.product(range(1, N + 1), repeat=max(free, 1)))
    rep = weishu_check(words, ledger.marks, depth, N)
    return [reports.assertion("box count at least 1 - density bound", rep.passed, rep.estimate, 1 - rep.lam,
                              provenance="paper")], {"count": rep.count, "lambda": rep.lam, "free": free}


def cmd_gauss(cfg: RunConfig):
    o = cfg.options
    check = cfg.command.split()[1]
    rng = random.Random(cfg.seed)
    if check == "invariance":
        worst, fails = None, 0
        for _ in range(o["samples"]):
            a, b = sorted(Fraction(rng.randint(0, 10 ** 6), 10 ** 6) for _ in range(2))
            if a == b:
                b = a + Fraction(1, 10 ** 6)
            rep = invariance_defect(a, b, o["branches"])
            fails += not rep.passed
            if worst is None or rep.defect > worst.defect:
                worst = rep
        return [reports.assertion("invariance defect within the tail bound", fails == 0, worst.defect,
                                  worst.tail + worst.slack, provenance="derived")], \
            {"worst": {"a": worst.a, "b": worst.b, "defect": worst.defect, "tail": worst.tail}, "failures": fails}
    if check == "exactness":
        steps_needed, fails = [], 0
        for _ in range(o["samples"]):
            c = Fraction(rng.randint(1, 10 ** 6 - 1), 10 ** 6)
            # widths in [1e-3, 1e-1]: near the slowest expansion rate (phi^2) narrower starts need > 10 steps
            w = Fraction(rng.randint(1000, 100_000), 10 ** 6)
            lo, hi = max(Fraction(0), c - w / 2), min(Fraction(1), c + w / 2)
            traj = exactness_probe([(lo, hi)], o["steps"])
            r = traj.reached(1 - 1e-3)
            steps_needed.append(r)
            fails += r is None
        return [reports.assertion("forward images fill the interval", fails == 0, fails, 0, provenance="derived")], \
            {"steps_needed": steps_needed}
    rep = scrambled_stats(cfg.seed, o["pairs"], o["horizon"], o["k"])
    d = rep.details
    data = {"frequency": rep.value, "reference": rep.reference, "tolerance": rep.tolerance,
            "fraction_max_ge": d["fraction_max_ge"], "fraction_min_le": d["fraction_min_le"], "redraws": d["redraws"]}
    return [
        reports.assertion("pairs reaching the max threshold", d["fraction_max_ge"] >= 0.95, d["fraction_max_ge"],
                          0.95, provenance="derived"),
        reports.assertion("pairs reaching the min threshold", d["fraction_min_le"] >= 0.9, d["fraction_min_le"],
                          0.9, provenance="derived"),
        reports.assertion("box-visit frequency", abs(rep.value - rep.reference) <= rep.tolerance * rep.reference,
                          rep.value, rep.reference, provenance="derived"),
    ], data


COMMANDS = {
    "construct": cmd_construct,
    "verify proximal": cmd_verify, "verify return": cmd_verify,
    "verify target": cmd_verify, "verify scrambled": cmd_verify,
    "cf check": cmd_cf_check, "cf dim": cmd_cf_dim, "cf certify": cmd_cf_certify,
    "dim weishu": cmd_dim_weishu,
    "gauss invariance": cmd_gauss, "gauss exactness": cmd_gauss, "gauss scrambled": cmd_gauss,
}


def run_report(cfg: RunConfig, timestamp: str | None = None) -> tuple[int, dict]:
    """Dispatch a validated config; returns the exit code and the report."""
    code = None
    try:
        assertions, data = COMMANDS[cfg.command](cfg)
    except (NoSuchTuple, HorizonError, ScheduleError) as e:
        code, assertions, data = EXIT_SCHEDULE, [reports.assertion("schedule realises the request", False,
                                                                   provenance="trivial", note=str(e))], {}
    except BudgetExceeded as e:
        code, assertions, data = EXIT_BUDGET, [reports.assertion("within budget", False, provenance="trivial",
                                                                 note=str(e))], {}
    report = reports.make_report(cfg.command, cfg.echo(), assertions, data, cfg.warnings, timestamp)
    reports.validate(report)
    if code is None:
        code = EXIT_OK if report["pass"] else EXIT_FAIL
    return code, report


def _merge_config_file(parser, argv):
    """Flags from ``--config`` become parser defaults; command-line flags win."""
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return None
    raw = json.loads(Path(known.config).read_text())
    return {k.replace("-", "_"): v for k, v in raw.items()}


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    parser = build_parser()
    ns = parser.parse_args(argv)
    raw = vars(ns)
    defaults = None
    try:
        defaults = _merge_config_file(parser, argv)
    except (OSError, json.JSONDecodeError) as e:
        print(f"error: cannot read --config: {e}", file=sys.stderr)
        return EXIT_CONFIG
    if defaults:
        given = {a.split("=")[0].lstrip("-").replace("-", "_") for a in argv if a.startswith("--")}
        for k, v in defaults.items():
            if k not in given:
                raw[k] = v
    try:
        cfg = validate_config(raw)
        code, report = run_report(cfg)
    except ConfigError as e:
        for p in e.problems:
            print(f"error: {p}", file=sys.stderr)
        return EXIT_CONFIG
    except (ValueError, KeyError, OSError) as e:
        # bad input content discovered while running (malformed spec, short prefix, ...)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    for w in cfg.warnings:
        print(f"warning: {w}", file=sys.stderr)
    text = reports.dumps(report)
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
