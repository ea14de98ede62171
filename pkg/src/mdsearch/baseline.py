"""Comparison method: k-means++ spatial clustering, one GRASP run per group."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .grasp import SolverConfig, grasp_solve
from .instance import Instance
from .objective import Solution
from .seeds import derive_seed

LLOYD_MAX_ITER = 100

# Stream tag separating the k-means RNG from the GRASP construction streams.
_KMEANS_STREAM = 0x6B6D6561


@dataclass(frozen=True)
class Partition:
    """Disjoint vertex groups covering V minus the start vertices."""

    groups: tuple[tuple[int, ...], ...]
    centroids: np.ndarray  # (k, 2)


def seed_centroids(points: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """k-means++ seeding: first centroid uniform, the rest proportional to the
    squared distance to the nearest centroid chosen so far."""
    m = points.shape[0]
    centroids = np.empty((k, 2))
    first = int(rng.integers(m))
    centroids[0] = points[first]
    d2 = np.sum((points - centroids[0]) ** 2, axis=1)
    for c in range(1, k):
        total = d2.sum()
        if total <= 0.0:
            idx = int(rng.integers(m))  # all points coincide with a centroid
        else:
            idx = int(rng.choice(m, p=d2 / total))
        centroids[c] = points[idx]
        d2 = np.minimum(d2, np.sum((points - centroids[c]) ** 2, axis=1))
    return centroids


def lloyd_iterations(
    points: np.ndarray, centroids: np.ndarray, max_iter: int = LLOYD_MAX_ITER
) -> Iterator[tuple[np.ndarray, np.ndarray, float, bool]]:
    """Lloyd's algorithm step by step.

    Yields (labels, centroids, sse, reseeded) after each assignment; centroids
    are the updated means for that assignment. Stops when assignments repeat.
    A group left empty by an assignment is reseeded at the point farthest from
    its own centroid (reseeded=True on such iterations).
    """
    centroids = centroids.copy()
    k = centroids.shape[0]
    m = points.shape[0]
    labels = np.full(m, -1, dtype=np.int64)
    for _ in range(max_iter):
        d2 = np.sum((points[:, None, :] - centroids[None, :, :]) ** 2, axis=2)
        new_labels = np.argmin(d2, axis=1)
        own = d2[np.arange(m), new_labels]
        reseeded = False
        for c in range(k):
            if not (new_labels == c).any():
                far = int(np.argmax(own))
                centroids[c] = points[far]
                new_labels[far] = c
                own[far] = 0.0
                reseeded = True
        sse = float(own.sum())
        if not reseeded and np.array_equal(new_labels, labels):
            break
        labels = new_labels
        for c in range(k):
            members = points[labels == c]
            if members.size:
                centroids[c] = members.mean(axis=0)
        yield labels.copy(), centroids.copy(), sse, reseeded


def kmeans_pp(inst: Instance, k: int, rng) -> Partition:
    """Partition the non-start vertices into k groups: k-means++ seeding, then
    Lloyd iterations until assignments stabilize (at most LLOYD_MAX_ITER)."""
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    starts = set(inst.starts)
    verts = np.asarray([v for v in range(inst.n) if v not in starts], dtype=np.int64)
    if k > verts.size:
        raise ValueError(f"k={k} exceeds the {verts.size} clusterable vertices")
    points = inst.coords[verts]
    centroids = seed_centroids(points, k, rng)
    labels = np.zeros(verts.size, dtype=np.int64)
    for labels, centroids, _, _ in lloyd_iterations(points, centroids):
        pass
    groups = tuple(tuple(int(v) for v in verts[labels == c]) for c in range(k))
    return Partition(groups=groups, centroids=centroids)


def solve_kmeans(inst: Instance, config: SolverConfig) -> Solution:
    """Partition the vertices with k-means++, prepend each vehicle's start to
    its group, and route every group with the GRASP solver.

    Groups go to vehicles by ascending centroid x-coordinate (ties: y, then
    group order) so the assembled solution is deterministic for a fixed seed.
    """
    rng = np.random.default_rng(derive_seed(config.seed, _KMEANS_STREAM))
    part = kmeans_pp(inst, inst.m, rng)
    order = sorted(
        range(inst.m),
        key=lambda c: (part.centroids[c, 0], part.centroids[c, 1], c),
    )
    routes = []
    for vehicle, c in enumerate(order):
        start = inst.starts[vehicle]
        group = set(part.groups[c]) | {start}
        if len(group) == 1:
            routes.append([start])  # emptied group: the vehicle stays home
            continue
        routes.append(grasp_solve(inst, group, start, config, stream=vehicle))
    return Solution.from_routes(routes, inst)
