"""Greedy latency-aware clustering: partitions vertices among vehicles and
fixes their visiting order in one deterministic pass, usable as a fast
standalone solver."""

from __future__ import annotations

import numpy as np

from ._kernels import _cluster
from .instance import Instance
from .objective import Solution


def cluster(inst: Instance) -> Solution:
    """Assign every vertex to the (route, tail) position with the lowest
    penalty (elapsed + travel)/(1 + prob). Deterministic: ties are broken by
    lowest vertex index, then lowest route index."""
    starts = np.asarray(inst.starts, dtype=np.int64)
    routes_mat, lens = _cluster(inst.cost, inst.prob, starts)
    routes = [routes_mat[i, : lens[i]].tolist() for i in range(inst.m)]
    return Solution.from_routes(routes, inst)
