"""Independent oracles used to check the solvers.

Everything here is deliberately written from the problem definition with plain
Python loops, not by calling the library's evaluation paths.
"""

from __future__ import annotations

from itertools import permutations


def brute_cost(routes, cost, prob) -> float:
    """Probability-weighted sum of arrival times, from the definition."""
    total = 0.0
    for route in routes:
        elapsed = 0.0
        for k in range(1, len(route)):
            elapsed += cost[route[k - 1]][route[k]]
            total += elapsed * prob[route[k]]
    return total


def best_order_permutations(cost, prob, free, start) -> float:
    """Exhaustive minimum over every visiting order of `free` from `start`."""
    best = float("inf")
    for perm in permutations(free):
        c = brute_cost([[start, *perm]], cost, prob)
        if c < best:
            best = c
    return best


def best_order_dp(cost, prob, free, start) -> float:
    """Same minimum as best_order_permutations via subset DP.

    When an edge is traversed, every not-yet-visited vertex of the route is
    delayed by its length, so the edge contributes t * (remaining probability
    mass). dp[(mask, last)] = cheapest way to have visited `mask`.
    """
    free = list(free)
    k = len(free)
    if k == 0:
        return 0.0
    p_total = sum(prob[v] for v in free)
    p_mass = [prob[v] for v in free]
    dp = {}
    for i, v in enumerate(free):
        dp[(1 << i, i)] = cost[start][v] * p_total
    for mask in range(1, 1 << k):
        visited_p = sum(p_mass[i] for i in range(k) if mask & (1 << i))
        for last in range(k):
            if not mask & (1 << last):
                continue
            base = dp.get((mask, last))
            if base is None:
                continue
            for nxt in range(k):
                if mask & (1 << nxt):
                    continue
                new = base + cost[free[last]][free[nxt]] * (p_total - visited_p)
                key = (mask | (1 << nxt), nxt)
                if new < dp.get(key, float("inf")):
                    dp[key] = new
    full = (1 << k) - 1
    return min(dp[(full, last)] for last in range(k) if (full, last) in dp)


def best_multi_exhaustive(cost, prob, n, starts) -> float:
    """Exact optimum over every assignment of the non-start vertices to
    vehicles and every visiting order within each vehicle."""
    m = len(starts)
    start_set = set(starts)
    free = [v for v in range(n) if v not in start_set]
    k = len(free)
    best = float("inf")
    for assign in range(m ** k):
        groups = [[] for _ in range(m)]
        a = assign
        for v in free:
            groups[a % m].append(v)
            a //= m
        total = 0.0
        for i in range(m):
            total += best_order_dp(cost, prob, groups[i], starts[i])
            if total >= best:
                break
        if total < best:
            best = total
    return best


def lloyd_reference(points, centroids, max_iter=100):
    """Independent Lloyd's algorithm (no reseeding) from given centroids.

    Returns (labels, centroids, sse). Points and centroids are sequences of
    (x, y) pairs; plain-Python arithmetic throughout.
    """
    cents = [tuple(c) for c in centroids]
    k = len(cents)
    labels = None
    for _ in range(max_iter):
        new_labels = []
        for (x, y) in points:
            dists = [(x - cx) ** 2 + (y - cy) ** 2 for cx, cy in cents]
            new_labels.append(dists.index(min(dists)))
        if new_labels == labels:
            break
        labels = new_labels
        for c in range(k):
            members = [p for p, l in zip(points, labels) if l == c]
            if members:
                cents[c] = (
                    sum(p[0] for p in members) / len(members),
                    sum(p[1] for p in members) / len(members),
                )
    sse = 0.0
    for (x, y), l in zip(points, labels):
        sse += (x - cents[l][0]) ** 2 + (y - cents[l][1]) ** 2
    return labels, cents, sse
