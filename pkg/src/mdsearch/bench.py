"""Benchmark harness: runs {clustering | proposed | kmeans} x instance x M
setups, computes deviation statistics against best-known solutions, and emits
deterministic CSV tables and route dumps."""

from __future__ import annotations

import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from importlib import resources
from pathlib import Path

import numpy as np

from .baseline import solve_kmeans
from .clustering import cluster
from .grasp import SolverConfig, solve_proposed
from .instance import Instance, load_probabilities, parse_tsplib
from .objective import Solution

METHODS = ("clustering", "proposed", "kmeans")

THREADS_ENV = "MDSEARCH_THREADS"

CSV_HEADER = "instance,m,mode,method,bks,best,pdb,pdm,sd,mean_ms"


@dataclass(frozen=True)
class RunRecord:
    """One benchmark run: method, instance, vehicle count, cost, wall time."""

    method: str
    instance: str
    m: int
    mode: str
    cost: float
    wall_ms: float
    seed: int


@dataclass(frozen=True)
class SetupStats:
    """Aggregated statistics for one (instance, M, method) setup."""

    instance: str
    m: int
    mode: str
    method: str
    bks: float
    best: float
    pdb: float
    pdm: float
    sd: float
    mean_ms: float
    improved_bks: bool = False


def solve_once(inst: Instance, method: str, config: SolverConfig) -> Solution:
    """Dispatch a single solve to the named method."""
    if method == "clustering":
        return cluster(inst)
    if method == "proposed":
        return solve_proposed(inst, config)
    if method == "kmeans":
        return solve_kmeans(inst, config)
    raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")


def run_setup(
    inst: Instance, method: str, m: int, runs: int, config: SolverConfig
) -> list[RunRecord]:
    """Execute `method` `runs` times with derived seeds seed+0..seed+runs-1.

    Clustering is deterministic, so it is solved once and the record is
    replicated. Wall time covers the solve call only, not instance parsing.
    """
    if runs < 1:
        raise ValueError(f"runs must be >= 1, got {runs}")
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")
    inst_m = inst if inst.m == m else inst.with_vehicles(m)
    records = []
    if method == "clustering":
        t0 = time.perf_counter()
        sol = cluster(inst_m)
        wall_ms = (time.perf_counter() - t0) * 1e3
        for i in range(runs):
            records.append(
                RunRecord(method, inst.name, m, inst.mode, sol.cost, wall_ms, config.seed + i)
            )
        return records
    for i in range(runs):
        cfg = replace(config, seed=config.seed + i)
        t0 = time.perf_counter()
        sol = solve_once(inst_m, method, cfg)
        wall_ms = (time.perf_counter() - t0) * 1e3
        records.append(RunRecord(method, inst.name, m, inst.mode, sol.cost, wall_ms, cfg.seed))
    return records


def compute_stats(records: list[RunRecord], bks: float) -> SetupStats:
    """Best/mean percent deviations from the best-known solution, population
    standard deviation of the costs, and mean wall time."""
    if not records:
        raise ValueError("no records")
    if bks <= 0.0:
        raise ValueError(f"bks must be positive, got {bks}")
    costs = np.asarray([r.cost for r in records])
    best = float(costs.min())
    mean = float(costs.mean())
    head = records[0]
    return SetupStats(
        instance=head.instance,
        m=head.m,
        mode=head.mode,
        method=head.method,
        bks=float(bks),
        best=best,
        pdb=100.0 * (best - bks) / bks,
        pdm=100.0 * (mean - bks) / bks,
        sd=float(costs.std()),
        mean_ms=float(np.mean([r.wall_ms for r in records])),
        improved_bks=best < bks - 1e-9,
    )


def _method_rank(method: str) -> int:
    return METHODS.index(method) if method in METHODS else len(METHODS)


def emit_csv(stats: list[SetupStats], include_timing: bool = True) -> str:
    """Deterministic CSV: one row per setup, sorted by instance, M, mode, and
    method; fixed-point decimals. With include_timing=False the mean_ms column
    is written as 0.000 so repeated runs compare byte-for-byte."""
    rows = [CSV_HEADER]
    ordered = sorted(stats, key=lambda s: (s.instance, s.m, s.mode, _method_rank(s.method)))
    for s in ordered:
        mean_ms = s.mean_ms if include_timing else 0.0
        rows.append(
            f"{s.instance},{s.m},{s.mode},{s.method},"
            f"{s.bks:.4f},{s.best:.4f},{s.pdb:.4f},{s.pdm:.4f},{s.sd:.4f},{mean_ms:.3f}"
        )
    return "\n".join(rows) + "\n"


def dump_routes(solution: Solution, inst: Instance) -> str:
    """Plain-text route dump for external plotting: per vehicle, a header line
    then one 'index x y' line per visited vertex."""
    blocks = []
    for i, route in enumerate(solution.routes):
        lines = [f"vehicle {i}"]
        for v in route:
            x, y = inst.coords[v]
            lines.append(f"{v} {x:.6f} {y:.6f}")
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n"


def parse_routes(text: str, inst: Instance) -> Solution:
    """Inverse of dump_routes; recomputes the objective value."""
    routes: list[list[int]] = []
    current: list[int] | None = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("vehicle"):
            current = []
            routes.append(current)
            continue
        if current is None:
            raise ValueError(f"route data before any vehicle header: {line!r}")
        current.append(int(line.split()[0]))
    if not routes:
        raise ValueError("no routes in dump")
    return Solution.from_routes(routes, inst)


def load_bks() -> dict:
    """Bundled best-known-solution tables keyed by mode, instance, and M."""
    with resources.files("mdsearch.data").joinpath("bks.json").open("r") as fh:
        return json.load(fh)


def load_manifest(path: str | Path) -> dict:
    """Read a JSON or TOML benchmark suite manifest."""
    path = Path(path)
    data = path.read_bytes()
    if path.suffix.lower() == ".json":
        return json.loads(data)
    try:
        import tomllib  # Python >= 3.11
    except ModuleNotFoundError:
        try:
            import tomli as tomllib
        except ModuleNotFoundError:
            raise RuntimeError(
                "TOML manifests need Python >= 3.11 or the 'tomli' package; "
                "JSON manifests work everywhere"
            )
    return tomllib.loads(data.decode("utf-8"))


def _config_from_manifest(manifest: dict) -> SolverConfig:
    cfg = manifest.get("config", {})
    return SolverConfig(
        alpha=int(cfg.get("alpha", 20)),
        beta_schedule=tuple(int(b) for b in cfg.get("beta", (5, 5, 5, 5, 1))),
        n_it=int(cfg.get("n_it", 50)),
        lk_trigger=float(cfg.get("lk_trigger", 1.10)),
        rcl_size=int(cfg.get("rcl_size", 10)),
        seed=int(manifest.get("seed", 0)),
    )


def _load_job_instance(job: dict, manifest: dict, base: Path) -> Instance:
    path = Path(job["instance"])
    if not path.is_absolute():
        path = base / path
    mode = manifest.get("mode", "mtdp")
    kwargs: dict = {"mode": mode}
    if mode == "mgsp":
        prob_file = job.get("prob_file")
        if prob_file:
            prob_path = Path(prob_file)
            if not prob_path.is_absolute():
                prob_path = base / prob_path
            text = prob_path.read_text(encoding="utf-8")
            skel = parse_tsplib(Path(path).read_text(encoding="utf-8"))
            kwargs["prob"] = load_probabilities(text, skel.n)
        else:
            kwargs["prob_seed"] = manifest.get("prob_seed", "2016-09-11")
    return Instance.from_file(path, **kwargs)


def worker_count(threads: int | None = None) -> int:
    """Requested worker count, the MDSEARCH_THREADS cap, or the CPU count."""
    if threads is not None and threads >= 1:
        return threads
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            cap = int(env)
            if cap >= 1:
                return cap
        except ValueError:
            pass
    return os.cpu_count() or 1


def run_suite(
    manifest_path: str | Path,
    runs: int | None = None,
    threads: int | None = None,
    include_timing: bool = True,
    log=None,
) -> str:
    """Run every (instance, M, method) setup in the manifest and return the
    stats CSV. Setups run concurrently on a thread pool (the solver kernels
    release the GIL); output order is canonical regardless of scheduling."""
    manifest_path = Path(manifest_path)
    manifest = load_manifest(manifest_path)
    base = manifest_path.parent
    config = _config_from_manifest(manifest)
    n_runs = runs if runs is not None else int(manifest.get("runs", 50))
    mode = manifest.get("mode", "mtdp")

    setups: list[tuple[Instance, str, int]] = []
    for job in manifest.get("jobs", []):
        inst = _load_job_instance(job, manifest, base)
        m_values = job.get("m", [2])
        if isinstance(m_values, int):
            m_values = [m_values]
        methods = job.get("methods", list(METHODS))
        for m in m_values:
            for method in methods:
                setups.append((inst, method, int(m)))

    results: dict[tuple[str, int, str], list[RunRecord]] = {}
    with ThreadPoolExecutor(max_workers=worker_count(threads)) as pool:
        futures = {
            pool.submit(run_setup, inst, method, m, n_runs, config): (inst.name, m, method)
            for inst, method, m in setups
        }
        for future, key in futures.items():
            results[key] = future.result()

    bks_table = load_bks().get(mode, {})
    stats: list[SetupStats] = []
    groups: dict[tuple[str, int], list[str]] = {}
    for name, m, method in results:
        groups.setdefault((name, m), []).append(method)
    for (name, m), methods in groups.items():
        best_found = min(min(r.cost for r in results[(name, m, meth)]) for meth in methods)
        fixture = bks_table.get(name, {}).get(str(m)) if mode == "mtdp" else None
        # Table value when we have one (beating it sets improved_bks and a
        # negative pdb); otherwise BKS is the best the evaluated methods found.
        bks = float(fixture) if fixture is not None else best_found
        for meth in methods:
            s = compute_stats(results[(name, m, meth)], bks)
            stats.append(s)
            if s.improved_bks and fixture is not None and log is not None:
                print(
                    f"improved-BKS: {name} m={m} {meth} best {s.best:.4f} < table {fixture}",
                    file=log,
                )
    return emit_csv(stats, include_timing=include_timing)
