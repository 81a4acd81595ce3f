"""Experiment plumbing: instance generation, solving, benchmarking, reports.

Instances and ground truth live in separate JSON files so that solvers never
see the answer. Everything here is deterministic given the seed, except the
timing fields of result records.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import os
import random
import statistics
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterator, Sequence

from .baselines import (
    BranchExplosion,
    Exhausted,
    Infeasible,
    NoSolution,
    branch_and_prune,
    brute_force_coppersmith,
)
from .cnfenc import Leak, fixed_high_bits_of_d, write_dimacs
from .coppersmith import BoundTooSmall
from .numtheory import gen_prime, mod_inverse
from .pipeline import (
    HybridConfig,
    RunStats,
    ThresholdExceedsK,
    Timeout,
    UnsatEncoding,
    build_formula,
    factor,
    result_record,
    verify_factors,
)

__all__ = [
    "SCHEMA_VERSION",
    "METHODS",
    "SchemaError",
    "Instance",
    "Truth",
    "generate",
    "leak_count",
    "write_instance_files",
    "load_instance",
    "load_truth",
    "solve_instance",
    "verify_result",
    "bench",
    "cell_median",
    "report",
    "main",
]

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1
METHODS = ("sat", "satcas", "bnp", "brute")
DEFAULT_TIMEOUT_S = 600.0

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NO_FACTORS = 2

BENCH_COLUMNS = [
    "n_bits",
    "leak_pct",
    "with_d",
    "method",
    "seed",
    "status",
    "wall_ms",
    "oracle_calls",
    "oracle_ms",
    "blocking_clauses",
    "conflicts",
    "peak_frontier",
]
SUMMARY_COLUMNS = ["n_bits", "leak_pct", "with_d", "method", "keys", "timeouts", "median_wall_ms"]


class SchemaError(ValueError):
    """A JSON file does not match the expected layout."""

    def __init__(self, path: str | os.PathLike, fld: str, msg: str):
        super().__init__(f"{path}: field '{fld}': {msg}")
        self.path = str(path)
        self.field = fld


@dataclass
class Instance:
    N: int
    k: int
    leaks: list[Leak]
    with_d: bool
    seed: int
    schema_version: int = SCHEMA_VERSION

    def to_json(self) -> dict[str, Any]:
        return {
            "schema_version": self.schema_version,
            "n_hex": f"{self.N:x}",
            "k": self.k,
            "with_d": self.with_d,
            "seed": self.seed,
            "leaks": [list(leak) for leak in self.leaks],
        }

    @classmethod
    def from_json(cls, data: Any, path: str | os.PathLike = "<instance>") -> Instance:
        if not isinstance(data, dict):
            raise SchemaError(path, "<root>", "expected a JSON object")
        _check_version(data, path)
        N = _hex_field(data, "n_hex", path)
        if N % 2 == 0 or N < 3:
            raise SchemaError(path, "n_hex", "modulus must be odd and > 1")
        k = _typed(data, "k", int, path)
        if k < 2 or not 2 * k - 1 <= N.bit_length() <= 2 * k:
            raise SchemaError(path, "k", f"{N.bit_length()}-bit modulus cannot have {k}-bit factors")
        with_d = _typed(data, "with_d", bool, path)
        seed = _typed(data, "seed", int, path)
        raw = _typed(data, "leaks", list, path)
        lengths = {"p": k, "q": k}
        if with_d:
            lengths["d"] = N.bit_length()
        leaks: list[Leak] = []
        for i, item in enumerate(raw):
            where = f"leaks[{i}]"
            if not (isinstance(item, list) and len(item) == 3):
                raise SchemaError(path, where, "expected [target, index, value]")
            target, index, value = item
            if target not in lengths:
                raise SchemaError(path, where, f"unknown target {target!r}")
            if type(index) is not int or not 0 <= index < lengths[target]:
                raise SchemaError(path, where, f"index {index!r} out of range for {target}")
            if value not in (0, 1) or type(value) is not int:
                raise SchemaError(path, where, f"value must be 0 or 1, got {value!r}")
            leaks.append((target, index, value))
        return cls(N, k, leaks, with_d, seed)


@dataclass
class Truth:
    p: int
    q: int
    d: int | None = None
    schema_version: int = SCHEMA_VERSION

    def to_json(self) -> dict[str, Any]:
        return {
            "schema_version": self.schema_version,
            "p_hex": f"{self.p:x}",
            "q_hex": f"{self.q:x}",
            "d_hex": None if self.d is None else f"{self.d:x}",
        }

    @classmethod
    def from_json(cls, data: Any, path: str | os.PathLike = "<truth>") -> Truth:
        if not isinstance(data, dict):
            raise SchemaError(path, "<root>", "expected a JSON object")
        _check_version(data, path)
        p = _hex_field(data, "p_hex", path)
        q = _hex_field(data, "q_hex", path)
        d = None if data.get("d_hex") is None else _hex_field(data, "d_hex", path)
        return cls(p, q, d)


def _check_version(data: dict, path: str | os.PathLike) -> None:
    if "schema_version" not in data:
        raise SchemaError(path, "schema_version", "missing")
    if data["schema_version"] != SCHEMA_VERSION:
        raise SchemaError(path, "schema_version", f"unsupported version {data['schema_version']!r}")


def _typed(data: dict, key: str, kind: type, path: str | os.PathLike) -> Any:
    if key not in data:
        raise SchemaError(path, key, "missing")
    value = data[key]
    # bool is a subclass of int; keep them apart
    if not isinstance(value, kind) or (kind is int and isinstance(value, bool)):
        raise SchemaError(path, key, f"expected {kind.__name__}, got {type(value).__name__}")
    return value


def _hex_field(data: dict, key: str, path: str | os.PathLike) -> int:
    text = _typed(data, key, str, path)
    try:
        return int(text, 16)
    except ValueError:
        raise SchemaError(path, key, f"not a hex integer: {text!r}") from None


# --- generation ---------------------------------------------------------------


def leak_count(pct: float, length: int) -> int:
    """``round(pct * length / 100)`` with halves rounded up."""
    return math.floor(pct * length / 100 + 0.5)


def generate(bits: int, leak_pct: float, with_d: bool = False, seed: int = 0) -> tuple[Instance, Truth]:
    """Random semiprime of ``bits`` bits with a fraction of its key bits leaked.

    Leak positions are drawn without replacement per component (``p``, ``q``
    and, with ``with_d``, ``d``). With ``with_d`` the primes avoid 1 mod 3 so
    that ``e = 3`` is a valid exponent, and the provable leading bits of ``d``
    are appended as extra leaks.
    """
    if bits < 16 or bits % 2:
        raise ValueError("bits must be even and at least 16")
    if not 0 <= leak_pct <= 100:
        raise ValueError("leak_pct must lie in [0, 100]")
    rng = random.Random(seed)
    k = bits // 2
    while True:
        p = gen_prime(k, rng, avoid_1_mod_3=with_d)
        q = gen_prime(k, rng, avoid_1_mod_3=with_d)
        if p != q and (p * q).bit_length() == bits:
            break
    N = p * q
    parts: dict[str, tuple[int, int]] = {"p": (p, k), "q": (q, k)}
    d = None
    if with_d:
        d = mod_inverse(3, (p - 1) * (q - 1))
        parts["d"] = (d, bits)
    leaks: list[Leak] = []
    for target, (value, length) in parts.items():
        for i in sorted(rng.sample(range(length), leak_count(leak_pct, length))):
            leaks.append((target, i, (value >> i) & 1))
    if with_d:
        l, prefix = fixed_high_bits_of_d(N, bits)
        leaks.extend(("d", bits - 1 - j, int(ch)) for j, ch in enumerate(prefix))
    return Instance(N, k, leaks, with_d, seed), Truth(p, q, d)


def instance_stem(bits: int, leak_pct: float, with_d: bool, seed: int) -> str:
    return f"n{bits}-leak{leak_pct:g}{'-d' if with_d else ''}-s{seed}"


def _dump(obj: dict[str, Any]) -> str:
    return json.dumps(obj, indent=2) + "\n"


def write_instance_files(inst: Instance, truth: Truth, out_dir: str | os.PathLike, stem: str) -> dict[str, Path]:
    """Write ``<stem>.json``, ``<stem>.truth.json`` and ``<stem>.cnf``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {
        "instance": out / f"{stem}.json",
        "truth": out / f"{stem}.truth.json",
        "dimacs": out / f"{stem}.cnf",
    }
    paths["instance"].write_text(_dump(inst.to_json()))
    paths["truth"].write_text(_dump(truth.to_json()))
    cnf, varmap = build_formula(inst.N, inst.k, inst.leaks, inst.with_d)
    paths["dimacs"].write_text(write_dimacs(cnf, varmap))
    return paths


def _load_json(path: str | os.PathLike) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(path, "<root>", f"invalid JSON: {exc}") from None


def load_instance(path: str | os.PathLike) -> Instance:
    return Instance.from_json(_load_json(path), path)


def load_truth(path: str | os.PathLike) -> Truth:
    return Truth.from_json(_load_json(path), path)


# --- solving ------------------------------------------------------------------


def solve_instance(
    inst: Instance,
    method: str,
    theta: float = 0.6,
    timeout_s: float | None = DEFAULT_TIMEOUT_S,
    seed: int = 0,
) -> tuple[int, dict[str, Any]]:
    """Run one method on one instance; returns ``(exit_code, result_record)``.

    Statuses: ``factored`` (exit 0); ``timeout``, ``exhausted``,
    ``infeasible``, ``unsat`` (exit 2); ``error`` (exit 1).
    """
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}")
    start = time.perf_counter()
    stats = RunStats()
    p = q = None
    extra: dict[str, Any] = {}
    status = "factored"
    try:
        if method in ("sat", "satcas"):
            cfg = HybridConfig(theta=theta, method=method, use_d_encoding=inst.with_d, seed=seed, time_limit=timeout_s)
            p, q, stats = factor(inst.N, inst.k, inst.leaks, cfg)
        elif method == "bnp":
            res = branch_and_prune(inst.N, inst.k, inst.leaks, track_d=inst.with_d, time_limit=timeout_s)
            p, q = res.p, res.q
            extra = {"peak_frontier": res.peak_frontier, "levels_completed": res.levels_completed}
        else:
            p_leaks = [leak for leak in inst.leaks if leak[0] == "p"]
            res = brute_force_coppersmith(inst.N, inst.k, p_leaks, theta=theta, time_limit=timeout_s)
            p, q = res.p, res.q
            stats.oracle_calls = res.oracle_calls
            stats.oracle_time = res.oracle_time
            stats.threshold = res.threshold
    except Timeout as exc:
        status = "timeout"
        stats = exc.stats or stats
    except UnsatEncoding as exc:
        status = "unsat"
        stats = exc.stats or stats
    except BranchExplosion as exc:
        status = "exhausted"
        extra = {"peak_frontier": exc.count, "levels_completed": exc.level - 1}
    except (Exhausted, NoSolution) as exc:
        status = "exhausted"
        if isinstance(exc, Exhausted):
            stats.oracle_calls = exc.calls
    except (Infeasible, ThresholdExceedsK, BoundTooSmall) as exc:
        status = "infeasible"
        extra = {"detail": str(exc)}
    except Exception as exc:  # reported in the record, never swallowed silently
        log.exception("solver crashed")
        status = "error"
        extra = {"detail": f"{type(exc).__name__}: {exc}"}
    stats.wall_time = time.perf_counter() - start
    if status == "factored" and not verify_factors(inst.N, p, q):
        status, p, q = "error", None, None
        extra["detail"] = "returned factors do not multiply to N"
    rec = result_record(status, p, q, stats, seed, method, **extra)
    rec["schema_version"] = SCHEMA_VERSION
    code = {"factored": EXIT_OK, "error": EXIT_ERROR}.get(status, EXIT_NO_FACTORS)
    return code, rec


def verify_result(inst: Instance, truth: Truth, result: dict[str, Any]) -> bool:
    """True iff the result's factors multiply to ``N`` and match the truth (any order)."""
    try:
        p, q = int(result["p_hex"], 16), int(result["q_hex"], 16)
    except (KeyError, TypeError, ValueError):
        return False
    return p * q == inst.N and {p, q} == {truth.p, truth.q}


# --- benchmarking -------------------------------------------------------------


def _bench_task(args: tuple) -> dict[str, Any]:
    bits, pct, with_d, method, key_seed, theta, timeout_s = args
    inst, _ = generate(bits, pct, with_d, key_seed)
    _, rec = solve_instance(inst, method, theta, timeout_s, seed=key_seed)
    return {
        "n_bits": bits,
        "leak_pct": f"{pct:g}",
        "with_d": int(with_d),
        "method": method,
        "seed": key_seed,
        "status": rec["status"],
        "wall_ms": rec["wall_ms"],
        "oracle_calls": rec["oracle_calls"],
        "oracle_ms": rec["oracle_ms"],
        "blocking_clauses": rec["blocking_clauses"],
        "conflicts": rec["conflicts"],
        "peak_frontier": rec.get("peak_frontier", ""),
    }


def cell_median(walls: Sequence[float | None]) -> float | None:
    """Median with failures counted as infinitely slow; None means "timeout".

    A cell is a timeout as soon as at least half of its keys failed.
    """
    if not walls:
        return None
    failed = sum(w is None for w in walls)
    if 2 * failed >= len(walls):
        return None
    return statistics.median(math.inf if w is None else w for w in walls)


def _summarize(rows: list[dict[str, Any]]) -> list[dict[str, Any]]:
    cells: dict[tuple, list[float | None]] = {}
    for r in rows:
        key = (int(r["n_bits"]), str(r["leak_pct"]), int(r["with_d"]), r["method"])
        wall = float(r["wall_ms"]) if r["status"] == "factored" else None
        cells.setdefault(key, []).append(wall)
    out = []
    for (bits, pct, with_d, method), walls in sorted(cells.items(), key=lambda kv: (kv[0][0], float(kv[0][1]), kv[0][2], kv[0][3])):
        med = cell_median(walls)
        out.append(
            {
                "n_bits": bits,
                "leak_pct": pct,
                "with_d": with_d,
                "method": method,
                "keys": len(walls),
                "timeouts": sum(w is None for w in walls),
                "median_wall_ms": "timeout" if med is None else f"{med:.3f}",
            }
        )
    return out


def bench(
    sizes: Sequence[int],
    leak_pcts: Sequence[float],
    methods: Sequence[str],
    keys: int,
    seed: int = 0,
    timeout_s: float | None = DEFAULT_TIMEOUT_S,
    with_d: bool = False,
    theta: float = 0.6,
    workers: int = 1,
    out_dir: str | os.PathLike = ".",
) -> tuple[Path, Path]:
    """Run every (size, leak, method) cell on ``keys`` keys; write two CSVs.

    Key ``j`` of every cell uses seed ``seed + j``, so all methods and leak
    levels of one size see the same moduli. Rows are appended and flushed as
    runs finish; an interrupt still leaves a valid CSV and summary behind.
    """
    if keys < 1:
        raise ValueError("keys must be >= 1")
    for m in methods:
        if m not in METHODS:
            raise ValueError(f"unknown method {m!r}")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rows_path, summary_path = out / "bench.csv", out / "bench_summary.csv"
    tasks = [
        (bits, pct, with_d, method, seed + j, theta, timeout_s)
        for bits in sizes
        for pct in leak_pcts
        for method in methods
        for j in range(keys)
    ]
    rows: list[dict[str, Any]] = []
    with rows_path.open("w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=BENCH_COLUMNS)
        writer.writeheader()
        fh.flush()
        try:
            for row in _run_tasks(tasks, workers):
                writer.writerow(row)
                fh.flush()
                rows.append(row)
                log.info("%s", row)
        finally:
            _write_csv(summary_path, SUMMARY_COLUMNS, _summarize(rows))
    return rows_path, summary_path


def _run_tasks(tasks: list[tuple], workers: int) -> Iterator[dict[str, Any]]:
    if workers <= 1:
        for t in tasks:
            yield _bench_task(t)
        return
    # map() keeps submission order, so the CSV does not depend on scheduling
    with ProcessPoolExecutor(max_workers=workers) as pool:
        yield from pool.map(_bench_task, tasks)


def _write_csv(path: Path, columns: list[str], rows: list[dict[str, Any]]) -> None:
    with path.open("w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=columns)
        writer.writeheader()
        writer.writerows(rows)


# --- reporting ----------------------------------------------------------------


@dataclass
class Report:
    table: str
    series: dict[str, list[tuple[float, float]]] = field(default_factory=dict)


def _read_bench_rows(path: str | os.PathLike) -> list[dict[str, str]]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            return []
        missing = [c for c in ("n_bits", "leak_pct", "with_d", "method", "status", "wall_ms") if c not in reader.fieldnames]
        if missing:
            raise SchemaError(path, missing[0], "missing CSV column")
        return list(reader)


def report(csv_path: str | os.PathLike, out_dir: str | os.PathLike | None = None) -> Report:
    """Median tables and plot-ready series from a bench CSV.

    A size series (median vs ``n_bits``) is emitted per method and leak level
    when the CSV spans at least two sizes; a leak series likewise when it
    spans two leak levels. Timeout cells contribute no point. Each series is
    written as ``<name>.tsv`` with raw and log2 columns.
    """
    summary = _summarize(_read_bench_rows(csv_path))
    sizes = sorted({s["n_bits"] for s in summary})
    pcts = sorted({s["leak_pct"] for s in summary}, key=float)
    series: dict[str, list[tuple[float, float]]] = {}
    for s in summary:
        if s["median_wall_ms"] == "timeout":
            continue
        med = float(s["median_wall_ms"])
        tag = f"{s['method']}{'-d' if s['with_d'] else ''}"
        if len(sizes) > 1:
            series.setdefault(f"size-{tag}-leak{s['leak_pct']}", []).append((s["n_bits"], med))
        if len(pcts) > 1:
            series.setdefault(f"leak-{tag}-n{s['n_bits']}", []).append((float(s["leak_pct"]), med))
    for pts in series.values():
        pts.sort()
    lines = ["n_bits\tleak_pct\twith_d\tmethod\tkeys\ttimeouts\tmedian_wall_ms"]
    lines += ["\t".join(str(s[c]) for c in SUMMARY_COLUMNS) for s in summary]
    table = "\n".join(lines) + "\n" if summary else ""
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        for name, pts in series.items():
            xname = "n_bits" if name.startswith("size-") else "leak_pct"
            body = [f"{xname}\tmedian_wall_ms\tlog2_{xname}\tlog2_median_wall_ms"]
            body += [f"{x:g}\t{y:.3f}\t{_log2(x):.6f}\t{_log2(y):.6f}" for x, y in pts]
            (out / f"{name}.tsv").write_text("\n".join(body) + "\n")
        (out / "report.txt").write_text(table)
    return Report(table, series)


def _log2(x: float) -> float:
    return math.log2(x) if x > 0 else -math.inf


# --- command line -------------------------------------------------------------


def _configure_logging() -> None:
    level = os.environ.get("COPPERBOLT_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), format="%(levelname)s %(name)s: %(message)s")


def _cmd_gen(args: argparse.Namespace) -> int:
    inst, truth = generate(args.bits, args.leak_pct, args.with_d, args.seed)
    stem = instance_stem(args.bits, args.leak_pct, args.with_d, args.seed)
    paths = write_instance_files(inst, truth, args.out_dir, stem)
    for kind, path in paths.items():
        print(f"{kind}\t{path}")
    return EXIT_OK


def _cmd_solve(args: argparse.Namespace) -> int:
    inst = load_instance(args.instance)
    timeout = args.timeout_s if args.timeout_s > 0 else None
    code, rec = solve_instance(inst, args.method, args.theta, timeout, args.seed)
    text = _dump(rec)
    if args.out:
        Path(args.out).write_text(text)
    elif args.out_dir:
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / f"{Path(args.instance).stem}.{args.method}.result.json").write_text(text)
    sys.stdout.write(text)
    return code


def _cmd_bench(args: argparse.Namespace) -> int:
    timeout = args.timeout_s if args.timeout_s > 0 else None
    rows, summary = bench(
        args.bits,
        args.leak_pct,
        args.method,
        args.keys,
        args.seed,
        timeout,
        args.with_d,
        args.theta,
        args.workers,
        args.out_dir,
    )
    print(f"rows\t{rows}\nsummary\t{summary}")
    return EXIT_OK


def _cmd_report(args: argparse.Namespace) -> int:
    rep = report(args.csv, args.out_dir)
    sys.stdout.write(rep.table)
    return EXIT_OK


def _cmd_verify(args: argparse.Namespace) -> int:
    inst = load_instance(args.instance)
    truth = load_truth(args.truth)
    result = _load_json(args.result)
    if not isinstance(result, dict):
        raise SchemaError(args.result, "<root>", "expected a JSON object")
    ok = verify_result(inst, truth, result)
    print("ok" if ok else "mismatch")
    return EXIT_OK if ok else EXIT_ERROR


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="copperbolt", description="Factor RSA moduli from partially leaked key bits.")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate an instance, its ground truth and DIMACS file")
    g.add_argument("--bits", type=int, required=True, help="bit length of N (even, >= 16)")
    g.add_argument("--leak-pct", type=float, required=True, help="percentage of each key component leaked")
    g.add_argument("--with-d", action="store_true", help="use e = 3 and leak bits of d as well")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out-dir", default=".")
    g.set_defaults(func=_cmd_gen)

    s = sub.add_parser("solve", help="factor one instance")
    s.add_argument("instance")
    s.add_argument("--method", choices=METHODS, default="satcas")
    s.add_argument("--theta", type=float, default=0.6)
    s.add_argument("--timeout-s", type=float, default=DEFAULT_TIMEOUT_S, help="0 disables the limit")
    s.add_argument("--seed", type=int, default=0, help="solver seed")
    s.add_argument("--out", help="result JSON path")
    s.add_argument("--out-dir", help="directory for <instance>.<method>.result.json")
    s.set_defaults(func=_cmd_solve)

    b = sub.add_parser("bench", help="run a grid of sizes, leak levels and methods")
    b.add_argument("--bits", type=int, nargs="+", required=True)
    b.add_argument("--leak-pct", type=float, nargs="+", required=True)
    b.add_argument("--method", choices=METHODS, nargs="+", default=["sat", "satcas"])
    b.add_argument("--with-d", action="store_true")
    b.add_argument("--keys", type=int, default=15)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--theta", type=float, default=0.6)
    b.add_argument("--timeout-s", type=float, default=DEFAULT_TIMEOUT_S, help="0 disables the limit")
    b.add_argument("--workers", type=int, default=1)
    b.add_argument("--out-dir", default=".")
    b.set_defaults(func=_cmd_bench)

    r = sub.add_parser("report", help="median tables and series files from a bench CSV")
    r.add_argument("csv")
    r.add_argument("--out-dir", default=None)
    r.set_defaults(func=_cmd_report)

    v = sub.add_parser("verify", help="check a result against the ground truth")
    v.add_argument("instance")
    v.add_argument("truth")
    v.add_argument("result")
    v.set_defaults(func=_cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    _configure_logging()
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (SchemaError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except KeyboardInterrupt:
        print("interrupted; partial results were flushed", file=sys.stderr)
        return 130
