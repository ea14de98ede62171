"""Single-vehicle GRASP meta-heuristic and the integrated cluster-then-route
solver.

Each GRASP run draws randomized greedy routes with two penalty functions
("dist" and "ratio"), improves them by VND over swap and segment-reversal
neighborhoods, and applies a bounded Lin-Kernighan-style chain search to
promising results. All randomness flows from SolverConfig.seed through
counter-derived per-(stream, heuristic, iteration) seeds, so runs are
reproducible and order-independent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._kernels import (
    _construct,
    _init_arrays,
    _lk,
    _route_cost,
    _vnd,
)
from .clustering import cluster
from .instance import Instance
from .objective import Route, Solution
from .seeds import derive_seed

HEURISTICS = ("dist", "ratio")

IMPROVE_EPS = 1e-9


@dataclass(frozen=True)
class SolverConfig:
    """Tuning knobs for the GRASP solver.

    beta_schedule[d-1] bounds the candidate edges tried at chain depth d; the
    last entry applies to all deeper levels. lk_trigger gates the chain search:
    it runs only when the VND result is below lk_trigger times the incumbent.
    """

    alpha: int = 20
    beta_schedule: tuple[int, ...] = (5, 5, 5, 5, 1)
    n_it: int = 50
    lk_trigger: float = 1.10
    rcl_size: int = 10
    seed: int = 0

    def __post_init__(self):
        if self.alpha < 1:
            raise ValueError(f"alpha must be >= 1, got {self.alpha}")
        if not self.beta_schedule or any(b < 1 for b in self.beta_schedule):
            raise ValueError(f"beta_schedule entries must be >= 1, got {self.beta_schedule}")
        if self.n_it < 1:
            raise ValueError(f"n_it must be >= 1, got {self.n_it}")
        if self.lk_trigger < 1.0:
            raise ValueError(f"lk_trigger must be >= 1, got {self.lk_trigger}")
        if self.rcl_size < 1:
            raise ValueError(f"rcl_size must be >= 1, got {self.rcl_size}")


def candidate_lists(inst: Instance, verts: np.ndarray, width: int) -> np.ndarray:
    """Per-vertex nearest-neighbor lists within `verts`, sorted by edge cost.

    Returns an (n, width) matrix indexed by vertex id; rows of vertices outside
    `verts` stay -1, as do unused tail slots.
    """
    k = len(verts)
    width = max(1, min(width, k - 1)) if k > 1 else 1
    cand = np.full((inst.n, width), -1, dtype=np.int64)
    if k <= 1:
        return cand
    sub = inst.cost[np.ix_(verts, verts)]
    order = np.argsort(sub, axis=1, kind="stable")
    for row in range(k):
        u = verts[row]
        picked = 0
        for t in order[row]:
            v = verts[t]
            if v == u:
                continue
            cand[u, picked] = v
            picked += 1
            if picked == width:
                break
    return cand


def _position_index(route_arr: np.ndarray, n: int, pos: np.ndarray | None = None) -> np.ndarray:
    if pos is None:
        pos = np.full(n, -1, dtype=np.int64)
    pos[route_arr] = np.arange(route_arr.size, dtype=np.int64)
    return pos


def _work_arrays(size: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    return np.empty(size), np.empty(size), np.empty(size)


def construct(
    inst: Instance,
    cluster_verts,
    start: int,
    heuristic: str = "dist",
    rcl_size: int = 10,
    seed: int = 0,
) -> Route:
    """One randomized greedy route over the cluster, beginning at start."""
    if heuristic not in HEURISTICS:
        raise ValueError(f"heuristic must be one of {HEURISTICS}, got {heuristic!r}")
    verts = np.asarray(sorted(cluster_verts), dtype=np.int64)
    if start not in cluster_verts:
        raise ValueError(f"start {start} not in cluster")
    route = _construct(
        inst.cost, inst.prob, verts, start, heuristic == "ratio", rcl_size, np.uint64(seed)
    )
    return route.tolist()


def vnd(route: Route, inst: Instance) -> Route:
    """Variable neighborhood descent; never increases the route cost."""
    arr = np.asarray(route, dtype=np.int64).copy()
    pos = _position_index(arr, inst.n)
    tau, pp, w = _work_arrays(arr.size)
    _init_arrays(arr, inst.cost, inst.prob, tau, pp, w)
    _vnd(arr, pos, inst.cost, inst.prob, tau, pp, w, IMPROVE_EPS)
    return arr.tolist()


def lk_op(route: Route, inst: Instance, config: SolverConfig | None = None) -> Route:
    """Bounded Lin-Kernighan chain search; never increases the route cost."""
    config = config or SolverConfig()
    arr = np.asarray(route, dtype=np.int64).copy()
    cand = candidate_lists(inst, np.sort(arr), max(config.beta_schedule))
    beta = np.asarray(config.beta_schedule, dtype=np.int64)
    pos = _position_index(arr, inst.n)
    tau, pp, w = _work_arrays(arr.size)
    _init_arrays(arr, inst.cost, inst.prob, tau, pp, w)
    _lk(arr, pos, inst.cost, inst.prob, tau, pp, w, cand, beta, config.alpha, IMPROVE_EPS)
    return arr.tolist()


def grasp_solve(
    inst: Instance,
    cluster_verts,
    start: int,
    config: SolverConfig,
    *,
    stream: int = 0,
    initial_routes: tuple[Route, ...] = (),
) -> Route:
    """Best route over one cluster after n_it randomized constructions per
    heuristic, each improved by VND and (when promising) the chain search.

    `stream` keeps seed derivation distinct across concurrently solved
    clusters; `initial_routes` are evaluated and improved before the
    constructions, so the result never costs more than the best of them.
    """
    if start not in set(cluster_verts):
        raise ValueError(f"start {start} not in cluster")
    verts = np.asarray(sorted(set(cluster_verts)), dtype=np.int64)
    k = verts.size
    cost_m, prob = inst.cost, inst.prob
    cand = candidate_lists(inst, verts, max(config.beta_schedule))
    beta = np.asarray(config.beta_schedule, dtype=np.int64)
    pos = np.full(inst.n, -1, dtype=np.int64)
    tau, pp, w = _work_arrays(k)

    best_cost = math.inf
    best_route: np.ndarray | None = None

    def improve(arr: np.ndarray, z_best: float) -> float:
        _position_index(arr, inst.n, pos)
        _init_arrays(arr, cost_m, prob, tau, pp, w)
        z = _vnd(arr, pos, cost_m, prob, tau, pp, w, IMPROVE_EPS)
        if z < config.lk_trigger * z_best:
            z = _lk(arr, pos, cost_m, prob, tau, pp, w, cand, beta, config.alpha, IMPROVE_EPS)
        return z

    for r0 in initial_routes:
        arr = np.asarray(r0, dtype=np.int64)
        if arr.size != k or not np.array_equal(np.sort(arr), verts):
            raise ValueError("initial route does not visit exactly the cluster vertices")
        z0 = _route_cost(arr, cost_m, prob)
        if z0 < best_cost:
            best_cost = z0
            best_route = arr.copy()
        work = arr.copy()
        z = improve(work, best_cost)
        if z < best_cost:
            best_cost = z
            best_route = work.copy()

    for h_idx in range(len(HEURISTICS)):
        for it in range(config.n_it):
            seed = derive_seed(config.seed, stream, h_idx, it)
            arr = _construct(
                cost_m, prob, verts, start, h_idx == 1, config.rcl_size, np.uint64(seed)
            )
            z = improve(arr, best_cost)
            if z < best_cost:
                best_cost = z
                best_route = arr.copy()

    assert best_route is not None
    return best_route.tolist()


def solve_proposed(inst: Instance, config: SolverConfig) -> Solution:
    """Cluster-first route-second solver: greedy latency-aware clustering, then
    a GRASP run per cluster. The clustering's own vertex order is injected as
    an extra initial solution, so the result never costs more than clustering
    alone."""
    base = cluster(inst)
    routes = []
    for i, r0 in enumerate(base.routes):
        routes.append(
            grasp_solve(
                inst,
                r0,
                inst.starts[i],
                config,
                stream=i,
                initial_routes=(r0,),
            )
        )
    return Solution.from_routes(routes, inst)
