"""Experiment harness: repeated runs over (instance, algorithm, k) cells,
CSV emission, arithmetic-then-geometric averaging, and the performance-ratio
table behind the comparison plots."""

from __future__ import annotations

import csv
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, asdict

import numpy as np

from .edge_partition import evaluate
from .graph import Graph, parse_instance
from .pipeline import ALGORITHMS, run_algorithm

__all__ = [
    "ExperimentSpec",
    "ResultRow",
    "RESULT_FIELDS",
    "run_experiment",
    "scaling_run",
    "summarize",
    "aggregate",
    "performance_ratios",
    "write_rows",
    "read_rows",
    "write_dicts",
    "worker_cap",
]

RESULT_FIELDS = [
    "instance", "algorithm", "k", "pes", "seed",
    "vertex_cut", "replication_factor", "max_imbalance", "feasible",
    "construction_ms", "partition_ms", "total_ms",
    "messages_sent", "message_bytes", "error",
]


@dataclass
class ResultRow:
    """One run of one algorithm on one instance; the unit of every CSV."""

    instance: str
    algorithm: str
    k: int
    pes: int
    seed: int
    vertex_cut: int | None = None
    replication_factor: float | None = None
    max_imbalance: float | None = None
    feasible: bool | None = None
    construction_ms: float | None = None
    partition_ms: float | None = None
    total_ms: float | None = None
    messages_sent: int | None = None
    message_bytes: int | None = None
    error: str = ""

    def sort_key(self):
        return (self.instance, self.algorithm, self.k, self.pes, self.seed)


@dataclass
class ExperimentSpec:
    """Declarative description of a benchmark sweep."""

    instances: list[str]
    algorithms: list[dict] = field(default_factory=lambda: [{"name": "dspac-lp"}])
    k_values: list[int] = field(default_factory=lambda: [2, 4, 8, 16, 32, 64, 128])
    epsilon: float = 0.03
    repetitions: int = 5
    base_seed: int = 0
    pes: int = 1

    def __post_init__(self):
        if self.repetitions < 1:
            raise ValueError("repetitions must be >= 1")
        if any(k < 1 for k in self.k_values):
            raise ValueError("all k must be >= 1")
        normalized = []
        for alg in self.algorithms:
            if isinstance(alg, str):
                alg = {"name": alg}
            if alg.get("name") not in ALGORITHMS:
                raise ValueError(f"unknown algorithm {alg.get('name')!r}")
            normalized.append(dict(alg))
        self.algorithms = normalized

    @classmethod
    def from_file(cls, path) -> "ExperimentSpec":
        with open(path) as f:
            data = json.load(f)
        return cls(**data)


def worker_cap(requested: int | None = None) -> int:
    """Worker-pool size, bounded by the EDGEPART_THREADS environment var."""
    env = os.environ.get("EDGEPART_THREADS")
    cap = int(env) if env else None
    if requested is None:
        requested = cap or 1
    if cap is not None:
        requested = min(requested, cap)
    return max(1, requested)


def _run_cell(g: Graph, row: ResultRow, epsilon: float, opts: dict,
              workers: int = 1) -> ResultRow:
    ep, costs = run_algorithm(row.algorithm, g, row.k, epsilon=epsilon,
                              seed=row.seed, pes=row.pes, workers=workers,
                              **opts)
    report = evaluate(g, ep, epsilon,
                      construction_ms=costs.construction_ms,
                      partition_ms=costs.partition_ms,
                      total_ms=costs.total_ms,
                      messages_sent=costs.messages_sent,
                      message_bytes=costs.message_bytes)
    row.vertex_cut = report.vertex_cut
    row.replication_factor = report.replication_factor
    row.max_imbalance = report.max_imbalance
    row.feasible = report.feasible
    row.construction_ms = round(report.construction_ms, 3)
    row.partition_ms = round(report.partition_ms, 3)
    row.total_ms = round(report.total_ms, 3)
    row.messages_sent = report.messages_sent
    row.message_bytes = report.message_bytes
    return row


def run_experiment(spec: ExperimentSpec, *, keep_going: bool = False,
                   max_workers: int | None = None) -> list[ResultRow]:
    """Run every (instance, algorithm, k, seed) cell of the sweep.

    With ``keep_going``, per-cell failures become rows with an error field
    and the sweep continues. Rows come back sorted by cell key, so the
    output is deterministic regardless of pool size.
    """
    graphs: dict[str, Graph | Exception] = {}
    for inst in spec.instances:
        if inst not in graphs:
            try:
                graphs[inst] = parse_instance(inst)
            except Exception as exc:
                if not keep_going:
                    raise
                graphs[inst] = exc

    cells: list[tuple[ResultRow, dict]] = []
    for inst in spec.instances:
        for alg in spec.algorithms:
            opts = {k: v for k, v in alg.items() if k != "name"}
            for k in spec.k_values:
                for r in range(spec.repetitions):
                    row = ResultRow(instance=inst, algorithm=alg["name"], k=k,
                                    pes=spec.pes, seed=spec.base_seed + r)
                    cells.append((row, opts))

    def work(item) -> ResultRow:
        row, opts = item
        g = graphs[row.instance]
        if isinstance(g, Exception):
            row.error = f"load failed: {g}"
            return row
        try:
            return _run_cell(g, row, spec.epsilon, opts)
        except Exception as exc:
            if not keep_going:
                raise
            row.error = str(exc)
            return row

    pool_size = worker_cap(max_workers)
    if pool_size > 1:
        with ThreadPoolExecutor(max_workers=pool_size) as pool:
            rows = list(pool.map(work, cells))
    else:
        rows = [work(c) for c in cells]
    rows.sort(key=ResultRow.sort_key)
    return rows


def scaling_run(instance: str, algorithm: str, k: int, pe_counts: list[int],
                *, seed: int = 0, epsilon: float = 0.03,
                workers: int = 1) -> list[ResultRow]:
    """One row per PE count for a fixed (instance, algorithm, k, seed)."""
    if sorted(pe_counts) != list(pe_counts):
        raise ValueError("pe_counts must be sorted ascending")
    g = parse_instance(instance)
    if max(pe_counts) > g.n:
        raise ValueError(f"PE count {max(pe_counts)} exceeds node count {g.n}")
    rows = []
    for p in pe_counts:
        row = ResultRow(instance=instance, algorithm=algorithm, k=k, pes=p,
                        seed=seed)
        rows.append(_run_cell(g, row, epsilon, {}, workers=workers))
    return rows


# ---------------------------------------------------------------------------
# Aggregation
# ---------------------------------------------------------------------------

def _good(rows):
    return [r for r in rows if not r.error and r.vertex_cut is not None]


def summarize(rows: list[ResultRow]) -> list[dict]:
    """Arithmetic mean over seeds for each (instance, algorithm, k, pes)."""
    groups: dict[tuple, list[ResultRow]] = {}
    for r in _good(rows):
        groups.setdefault((r.instance, r.algorithm, r.k, r.pes), []).append(r)
    out = []
    for (inst, alg, k, pes), grp in sorted(groups.items()):
        out.append({
            "instance": inst, "algorithm": alg, "k": k, "pes": pes,
            "seeds": len(grp),
            "mean_vertex_cut": float(np.mean([r.vertex_cut for r in grp])),
            "best_vertex_cut": int(min(r.vertex_cut for r in grp)),
            "mean_replication_factor":
                float(np.mean([r.replication_factor for r in grp])),
            "mean_total_ms": float(np.mean([r.total_ms for r in grp])),
            "all_feasible": all(r.feasible for r in grp),
        })
    return out


def aggregate(rows: list[ResultRow]) -> list[dict]:
    """Per (algorithm, k): arithmetic mean over seeds within each instance,
    then geometric mean across instances.

    Zero means are handled by taking the geometric mean of (1 + x); rows
    carry a flag when that shift was applied.
    """
    rows = _good(rows)
    if not rows:
        raise ValueError("no successful rows to aggregate")
    per_instance: dict[tuple, list[int]] = {}
    for r in rows:
        per_instance.setdefault((r.algorithm, r.k, r.instance), []).append(
            r.vertex_cut)
    by_cell: dict[tuple, list[float]] = {}
    for (alg, k, inst), cuts in per_instance.items():
        by_cell.setdefault((alg, k), []).append(float(np.mean(cuts)))
    out = []
    for (alg, k), means in sorted(by_cell.items()):
        shifted = any(x == 0 for x in means)
        vals = [1.0 + x for x in means] if shifted else means
        gm = math.exp(sum(math.log(v) for v in vals) / len(vals))
        out.append({"algorithm": alg, "k": k, "instances": len(means),
                    "geomean_vertex_cut": gm, "shifted_by_one": shifted})
    return out


def performance_ratios(rows: list[ResultRow], *, stat: str = "best"
                       ) -> list[dict]:
    """Per-instance quality ratios: 1 - best_cut / own_cut.

    Zero means the algorithm matched the best result on that instance; one
    marks a failed run. ``stat`` picks the per-cell cut: the best over seeds
    (plot convention) or the mean. Rows come out sorted ascending per
    algorithm, ready to plot.
    """
    if stat not in ("best", "mean"):
        raise ValueError("stat must be 'best' or 'mean'")
    cells: dict[tuple, list[ResultRow]] = {}
    for r in rows:
        cells.setdefault((r.instance, r.k, r.algorithm), []).append(r)
    cuts: dict[tuple, float | None] = {}
    for key, grp in cells.items():
        good = _good(grp)
        if not good:
            cuts[key] = None
            continue
        vals = [r.vertex_cut for r in good]
        cuts[key] = float(min(vals)) if stat == "best" else float(np.mean(vals))
    instances = sorted({(i, k) for (i, k, _) in cuts})
    algorithms = sorted({a for (_, _, a) in cuts})
    out = []
    for alg in algorithms:
        entries = []
        for (inst, k) in instances:
            mine = cuts.get((inst, k, alg))
            others = [c for (i2, k2, a2), c in cuts.items()
                      if (i2, k2) == (inst, k) and c is not None]
            if mine is None:
                ratio = 1.0  # failed runs sit at the top of the plot
            else:
                best = min(others)
                ratio = 0.0 if mine == 0 else 1.0 - best / mine
            entries.append({"algorithm": alg, "instance": inst, "k": k,
                            "ratio": ratio})
        entries.sort(key=lambda e: e["ratio"])
        out.extend(entries)
    return out


# ---------------------------------------------------------------------------
# CSV plumbing
# ---------------------------------------------------------------------------

def write_rows(rows: list[ResultRow], path) -> None:
    with open(path, "w", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=RESULT_FIELDS)
        writer.writeheader()
        for r in rows:
            d = asdict(r)
            writer.writerow({k: ("" if d[k] is None else d[k])
                             for k in RESULT_FIELDS})


def read_rows(path) -> list[ResultRow]:
    rows = []
    with open(path, newline="") as f:
        for rec in csv.DictReader(f):
            rows.append(ResultRow(
                instance=rec["instance"], algorithm=rec["algorithm"],
                k=int(rec["k"]), pes=int(rec["pes"]), seed=int(rec["seed"]),
                vertex_cut=int(rec["vertex_cut"]) if rec["vertex_cut"] else None,
                replication_factor=float(rec["replication_factor"])
                    if rec["replication_factor"] else None,
                max_imbalance=float(rec["max_imbalance"])
                    if rec["max_imbalance"] else None,
                feasible=rec["feasible"] == "True" if rec["feasible"] else None,
                construction_ms=float(rec["construction_ms"])
                    if rec["construction_ms"] else None,
                partition_ms=float(rec["partition_ms"])
                    if rec["partition_ms"] else None,
                total_ms=float(rec["total_ms"]) if rec["total_ms"] else None,
                messages_sent=int(rec["messages_sent"])
                    if rec["messages_sent"] else None,
                message_bytes=int(rec["message_bytes"])
                    if rec["message_bytes"] else None,
                error=rec.get("error", "") or "",
            ))
    return rows


def write_dicts(records: list[dict], path) -> None:
    if not records:
        raise ValueError("nothing to write")
    with open(path, "w", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=list(records[0].keys()))
        writer.writeheader()
        writer.writerows(records)
