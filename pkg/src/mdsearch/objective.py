"""Expected-time objective: full and incremental evaluation of vehicle routes.

A route is an ordered list of vertex indices whose first element is the
vehicle's start vertex. The objective of a route tuple is the sum over all
visited vertices of (arrival time x vertex probability); start vertices arrive
at time 0 and contribute nothing.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .instance import Instance

Route = list[int]

COST_CACHE_TOL = 1e-6


class CoverageError(ValueError):
    """Routes do not cover the vertex set / are not disjoint as required."""


class SolutionError(ValueError):
    """A Solution violates its structural invariants."""


def arrival_times(route: Route, inst: Instance) -> np.ndarray:
    """Arrival time of each route position; position 0 (the start) is 0."""
    r = np.asarray(route, dtype=np.intp)
    if r.size == 0:
        raise ValueError("route is empty")
    if (r < 0).any() or (r >= inst.n).any():
        raise ValueError("route contains out-of-range vertex indices")
    if r.size == 1:
        return np.zeros(1)
    edges = inst.cost[r[:-1], r[1:]]
    out = np.empty(r.size)
    out[0] = 0.0
    np.cumsum(edges, out=out[1:])
    return out


def route_cost(route: Route, inst: Instance) -> float:
    """Probability-weighted sum of arrival times along a single route."""
    r = np.asarray(route, dtype=np.intp)
    tau = arrival_times(route, inst)
    return float(np.dot(tau, inst.prob[r]))


def _check_coverage(routes: list[Route], inst: Instance) -> None:
    visits = np.zeros(inst.n, dtype=np.int64)
    for r in routes:
        if len(r) == 0:
            raise CoverageError("empty route")
        seen_here = set()
        for v in r:
            if not 0 <= v < inst.n:
                raise CoverageError(f"vertex {v} outside [0, {inst.n})")
            if v in seen_here:
                raise CoverageError(f"vertex {v} repeated within one route")
            seen_here.add(v)
            visits[v] += 1
    missing = np.nonzero(visits == 0)[0]
    if missing.size:
        raise CoverageError(f"vertices not visited: {missing.tolist()[:10]}")
    starts = set(inst.starts)
    shared = [int(v) for v in np.nonzero(visits > 1)[0] if int(v) not in starts]
    if shared:
        raise CoverageError(f"non-start vertices visited more than once: {shared[:10]}")


def evaluate(routes: list[Route], inst: Instance) -> float:
    """Expected time to find the object for a tuple of routes covering V.

    Additive over routes. Raises CoverageError if the routes do not cover the
    vertex set or share a non-start vertex.
    """
    _check_coverage(routes, inst)
    return float(sum(route_cost(r, inst) for r in routes))


def evaluate_delta_2opt(route: Route, i: int, j: int, inst: Instance) -> float:
    """Cost change from reversing route[i..j] in place.

    Accounts for both replaced edges and the arrival-time shift of the reversed
    segment and of everything after it. O(len(route)) including setup.
    """
    k = len(route)
    if not 0 < i <= j < k:
        raise ValueError(f"need 0 < i <= j < len(route), got i={i} j={j} len={k}")
    r = np.asarray(route, dtype=np.intp)
    tau = arrival_times(route, inst)
    pr = inst.prob[r]
    pp = np.cumsum(pr)
    w = np.cumsum(pr * tau)
    u, a, b = r[i - 1], r[i], r[j]
    gain_in = inst.cost[u, b] - inst.cost[u, a]
    p_seg = pp[j] - pp[i - 1]
    w_seg = w[j] - w[i - 1]
    delta = (tau[i] + tau[j] + gain_in) * p_seg - 2.0 * w_seg
    if j + 1 < k:
        nxt = r[j + 1]
        shift = gain_in + inst.cost[a, nxt] - inst.cost[b, nxt]
        delta += shift * (pp[-1] - pp[j])
    return float(delta)


def reverse_segment(route: Route, i: int, j: int) -> Route:
    """New route with positions i..j reversed."""
    out = list(route)
    out[i : j + 1] = out[i : j + 1][::-1]
    return out


def swap_vertices(route: Route, a: int, b: int) -> Route:
    """New route with the vertices at positions a and b exchanged."""
    out = list(route)
    out[a], out[b] = out[b], out[a]
    return out


@dataclass
class Solution:
    """A tuple of M routes partitioning the vertex set, with its cached cost."""

    routes: list[Route]
    cost: float

    @classmethod
    def from_routes(cls, routes: list[Route], inst: Instance) -> "Solution":
        routes = [list(map(int, r)) for r in routes]
        return cls(routes=routes, cost=evaluate(routes, inst))

    def validate(self, inst: Instance, tol: float = COST_CACHE_TOL) -> None:
        """Check coverage, start anchoring, and that the cached cost is honest."""
        if len(self.routes) != inst.m:
            raise SolutionError(f"{len(self.routes)} routes for m={inst.m} vehicles")
        for i, r in enumerate(self.routes):
            if not r:
                raise SolutionError(f"route {i} is empty")
            if r[0] != inst.starts[i]:
                raise SolutionError(f"route {i} starts at {r[0]}, expected {inst.starts[i]}")
        try:
            actual = evaluate(self.routes, inst)
        except CoverageError as exc:
            raise SolutionError(str(exc)) from exc
        if abs(actual - self.cost) > tol:
            raise SolutionError(f"cached cost {self.cost} != evaluated {actual}")
