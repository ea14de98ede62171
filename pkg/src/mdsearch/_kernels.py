"""Numba-compiled inner loops shared by the solvers.

Routes are int64 arrays of vertex ids. Kernels that modify a route keep three
prefix arrays in sync: arrival times tau, inclusive probability prefix pp, and
inclusive prefix w of prob*tau (so w[-1] is the route cost). Swap and
segment-reversal deltas are O(1) against these arrays; applying a move costs
O(route length) to refresh them. `pos` maps vertex id -> route position.

All kernels are cache=True (compiled once per machine) and nogil=True (the
benchmark harness runs setups from a thread pool).
"""

from __future__ import annotations

import numpy as np
from numba import njit

# splitmix64 constants; everything stays np.uint64 so arithmetic wraps.
_U_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_U_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_U_MIX2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_INV53 = 1.0 / 9007199254740992.0  # 2**-53


@njit(cache=True, nogil=True, inline="always")
def _next_u64(state):
    state = state + _U_GOLDEN
    z = state
    z = (z ^ (z >> _S30)) * _U_MIX1
    z = (z ^ (z >> _S27)) * _U_MIX2
    z = z ^ (z >> _S31)
    return state, z


@njit(cache=True, nogil=True, inline="always")
def _next_unit(state):
    state, z = _next_u64(state)
    return state, (z >> _S11) * _INV53


@njit(cache=True, nogil=True)
def _route_cost(route, cost, prob):
    t = 0.0
    total = 0.0
    for k in range(1, route.shape[0]):
        t += cost[route[k - 1], route[k]]
        total += t * prob[route[k]]
    return total


@njit(cache=True, nogil=True)
def _recompute_from(route, cost, prob, tau, pp, w, q):
    for t in range(q, route.shape[0]):
        tau[t] = tau[t - 1] + cost[route[t - 1], route[t]]
        pp[t] = pp[t - 1] + prob[route[t]]
        w[t] = w[t - 1] + prob[route[t]] * tau[t]


@njit(cache=True, nogil=True)
def _init_arrays(route, cost, prob, tau, pp, w):
    tau[0] = 0.0
    pp[0] = prob[route[0]]
    w[0] = 0.0
    _recompute_from(route, cost, prob, tau, pp, w, 1)


@njit(cache=True, nogil=True)
def _delta_reverse(route, cost, prob, tau, pp, w, i, j):
    """Cost change of reversing route[i..j]; 0 < i <= j < len(route)."""
    k = route.shape[0]
    u = route[i - 1]
    a = route[i]
    b = route[j]
    gain_in = cost[u, b] - cost[u, a]
    p_seg = pp[j] - pp[i - 1]
    w_seg = w[j] - w[i - 1]
    delta = (tau[i] + tau[j] + gain_in) * p_seg - 2.0 * w_seg
    if j + 1 < k:
        nxt = route[j + 1]
        shift = gain_in + cost[a, nxt] - cost[b, nxt]
        delta += shift * (pp[k - 1] - pp[j])
    return delta


@njit(cache=True, nogil=True)
def _delta_swap(route, cost, prob, tau, pp, w, a, b):
    """Cost change of exchanging the vertices at positions a < b; a >= 1."""
    if b == a + 1:
        return _delta_reverse(route, cost, prob, tau, pp, w, a, b)
    k = route.shape[0]
    prev_a = route[a - 1]
    x = route[a]
    next_a = route[a + 1]
    prev_b = route[b - 1]
    y = route[b]
    d_in = cost[prev_a, y] - cost[prev_a, x]
    delta1 = d_in + cost[y, next_a] - cost[x, next_a]
    tau_a_new = tau[a] + d_in
    tau_b_new = tau[b] + delta1 + cost[prev_b, x] - cost[prev_b, y]
    delta = prob[y] * (tau_a_new - tau[b]) + prob[x] * (tau_b_new - tau[a])
    delta += delta1 * (pp[b - 1] - pp[a])
    if b + 1 < k:
        next_b = route[b + 1]
        delta2 = delta1 + (cost[prev_b, x] + cost[x, next_b]) - (cost[prev_b, y] + cost[y, next_b])
        delta += delta2 * (pp[k - 1] - pp[b])
    return delta


@njit(cache=True, nogil=True)
def _apply_reverse(route, pos, cost, prob, tau, pp, w, i, j):
    lo = i
    hi = j
    while lo < hi:
        route[lo], route[hi] = route[hi], route[lo]
        lo += 1
        hi -= 1
    for t in range(i, j + 1):
        pos[route[t]] = t
    _recompute_from(route, cost, prob, tau, pp, w, i)


@njit(cache=True, nogil=True)
def _apply_swap(route, pos, cost, prob, tau, pp, w, a, b):
    route[a], route[b] = route[b], route[a]
    pos[route[a]] = a
    pos[route[b]] = b
    _recompute_from(route, cost, prob, tau, pp, w, a)


@njit(cache=True, nogil=True)
def _vnd(route, pos, cost, prob, tau, pp, w, eps):
    """Best-improvement VND over the swap then segment-reversal neighborhoods.

    Restarts from the swap neighborhood after any improvement; the start vertex
    never moves. Returns the route cost at the local optimum.
    """
    k = route.shape[0]
    pp_last = pp[k - 1]
    while True:
        best = -eps
        ba = -1
        bb = -1
        for a in range(1, k - 1):
            # loop-invariant loads for this a (numba cannot hoist across
            # possibly-aliasing arrays on its own)
            prev_a = route[a - 1]
            x = route[a]
            next_a = route[a + 1]
            c_pa_x = cost[prev_a, x]
            c_x_na = cost[x, next_a]
            tau_a = tau[a]
            px = prob[x]
            pp_a = pp[a]
            for b in range(a + 1, k):
                if b == a + 1:
                    d = _delta_reverse(route, cost, prob, tau, pp, w, a, b)
                else:
                    y = route[b]
                    prev_b = route[b - 1]
                    d_in = cost[prev_a, y] - c_pa_x
                    delta1 = d_in + cost[y, next_a] - c_x_na
                    tau_b = tau[b]
                    tau_b_new = tau_b + delta1 + cost[prev_b, x] - cost[prev_b, y]
                    d = prob[y] * (tau_a + d_in - tau_b) + px * (tau_b_new - tau_a)
                    d += delta1 * (pp[b - 1] - pp_a)
                    if b + 1 < k:
                        next_b = route[b + 1]
                        delta2 = delta1 + (cost[prev_b, x] + cost[x, next_b])
                        delta2 -= cost[prev_b, y] + cost[y, next_b]
                        d += delta2 * (pp_last - pp[b])
                if d < best:
                    best = d
                    ba = a
                    bb = b
        if ba >= 0:
            _apply_swap(route, pos, cost, prob, tau, pp, w, ba, bb)
            continue
        best = -eps
        bi = -1
        bj = -1
        for i in range(1, k - 1):
            u = route[i - 1]
            a_i = route[i]
            c_u_a = cost[u, a_i]
            tau_i = tau[i]
            pp_prev = pp[i - 1]
            w_prev = w[i - 1]
            for j in range(i + 1, k):
                b_j = route[j]
                gain_in = cost[u, b_j] - c_u_a
                d = (tau_i + tau[j] + gain_in) * (pp[j] - pp_prev) - 2.0 * (w[j] - w_prev)
                if j + 1 < k:
                    nxt = route[j + 1]
                    d += (gain_in + cost[a_i, nxt] - cost[b_j, nxt]) * (pp_last - pp[j])
                if d < best:
                    best = d
                    bi = i
                    bj = j
        if bi >= 0:
            _apply_reverse(route, pos, cost, prob, tau, pp, w, bi, bj)
            continue
        return w[k - 1]


@njit(cache=True, nogil=True)
def _lk(route, pos, cost, prob, tau, pp, w, cand, beta_sched, alpha, eps):
    """Chained segment-reversal search with bounded depth and candidate lists.

    Each position q >= 1 seeds a depth-first search over reversal sequences.
    At depth d the active endpoint is u = route[q-1]; a candidate v (one of the
    beta_sched[d] nearest neighbors of u) is admissible when the new edge (u,v)
    is strictly shorter than the broken edge (u, route[q]) and v sits after q.
    The move reverses [q..pos(v)] and the chain continues at break position
    pos(v)+1. Intermediate moves may worsen the objective; the best cumulative
    improvement found is applied and the scan restarts from the first edge.
    """
    k = route.shape[0]
    if k < 3:
        return w[k - 1]
    width = cand.shape[1]
    nbeta = beta_sched.shape[0]
    qs = np.empty(alpha + 2, np.int64)
    ci = np.empty(alpha + 2, np.int64)
    js = np.empty(alpha + 2, np.int64)
    cum = np.empty(alpha + 2, np.float64)
    best_q = np.empty(alpha + 1, np.int64)
    best_j = np.empty(alpha + 1, np.int64)

    improved = True
    while improved:
        improved = False
        for seed in range(1, k):
            best_delta = -eps
            best_len = 0
            depth = 1
            qs[1] = seed
            ci[1] = 0
            cum[0] = 0.0
            while depth >= 1:
                q = qs[depth]
                u = route[q - 1]
                t_break = cost[u, route[q]]
                bd = beta_sched[min(depth, nbeta) - 1]
                if bd > width:
                    bd = width
                descended = False
                while ci[depth] < bd:
                    c = ci[depth]
                    ci[depth] += 1
                    v = cand[u, c]
                    if v < 0:
                        ci[depth] = bd
                        break
                    t_add = cost[u, v]
                    if t_add >= t_break:
                        ci[depth] = bd  # candidates sorted ascending: done here
                        break
                    j = pos[v]
                    if j <= q:
                        continue
                    d = _delta_reverse(route, cost, prob, tau, pp, w, q, j)
                    js[depth] = j
                    cum[depth] = cum[depth - 1] + d
                    if cum[depth] < best_delta:
                        best_delta = cum[depth]
                        best_len = depth
                        for t in range(1, depth + 1):
                            best_q[t] = qs[t]
                            best_j[t] = js[t]
                    # only moves the search descends through are applied;
                    # leaves are scored from the delta alone
                    if depth < alpha and j + 1 < k:
                        _apply_reverse(route, pos, cost, prob, tau, pp, w, q, j)
                        depth += 1
                        qs[depth] = j + 1
                        ci[depth] = 0
                        descended = True
                        break
                if descended:
                    continue
                depth -= 1
                if depth >= 1:
                    _apply_reverse(route, pos, cost, prob, tau, pp, w, qs[depth], js[depth])
            if best_len > 0:
                for t in range(1, best_len + 1):
                    _apply_reverse(route, pos, cost, prob, tau, pp, w, best_q[t], best_j[t])
                improved = True
                break
    return w[k - 1]


@njit(cache=True, nogil=True)
def _construct(cost, prob, verts, start, use_ratio, rcl_size, seed):
    """Randomized greedy route over `verts` from `start`.

    Candidates are ranked by edge cost (use_ratio=False) or cost/(1+prob)
    (use_ratio=True); one of the rcl_size best is drawn with probability
    proportional to 1/f. A zero-penalty candidate is taken outright.
    """
    k = verts.shape[0]
    route = np.empty(k, np.int64)
    route[0] = start
    rem = np.empty(max(k - 1, 1), np.int64)
    cnt = 0
    skipped = False
    for t in range(k):
        v = verts[t]
        if v == start and not skipped:
            skipped = True
            continue
        rem[cnt] = v
        cnt += 1
    state = seed
    rcl_f = np.empty(rcl_size, np.float64)
    rcl_v = np.empty(rcl_size, np.int64)
    rcl_r = np.empty(rcl_size, np.int64)
    for step in range(1, k):
        last = route[step - 1]
        size = rcl_size if rcl_size < cnt else cnt
        filled = 0
        for t in range(cnt):
            v = rem[t]
            f = cost[last, v]
            if use_ratio:
                f = f / (1.0 + prob[v])
            if filled < size:
                i = filled
                while i > 0 and rcl_f[i - 1] > f:
                    rcl_f[i] = rcl_f[i - 1]
                    rcl_v[i] = rcl_v[i - 1]
                    rcl_r[i] = rcl_r[i - 1]
                    i -= 1
                rcl_f[i] = f
                rcl_v[i] = v
                rcl_r[i] = t
                filled += 1
            elif f < rcl_f[size - 1]:
                i = size - 1
                while i > 0 and rcl_f[i - 1] > f:
                    rcl_f[i] = rcl_f[i - 1]
                    rcl_v[i] = rcl_v[i - 1]
                    rcl_r[i] = rcl_r[i - 1]
                    i -= 1
                rcl_f[i] = f
                rcl_v[i] = v
                rcl_r[i] = t
        chosen = 0
        if filled > 1 and rcl_f[0] > 0.0:
            total = 0.0
            for c in range(filled):
                total += 1.0 / rcl_f[c]
            state, unit = _next_unit(state)
            ticket = unit * total
            acc = 0.0
            chosen = filled - 1
            for c in range(filled):
                acc += 1.0 / rcl_f[c]
                if ticket < acc:
                    chosen = c
                    break
        route[step] = rcl_v[chosen]
        cnt -= 1
        rem[rcl_r[chosen]] = rem[cnt]
    return route


@njit(cache=True, nogil=True)
def _cluster(cost, prob, starts):
    """Greedy latency-aware clustering: repeatedly append the (vertex, route)
    pair with the lowest penalty (elapsed + edge time)/(1 + prob). Ties go to
    the lowest vertex index, then the lowest route index (scan order)."""
    n = cost.shape[0]
    m = starts.shape[0]
    routes = np.full((m, n), -1, np.int64)
    lens = np.empty(m, np.int64)
    elapsed = np.zeros(m, np.float64)
    last = np.empty(m, np.int64)
    for i in range(m):
        routes[i, 0] = starts[i]
        lens[i] = 1
        last[i] = starts[i]
    remaining = np.ones(n, np.bool_)
    for i in range(m):
        remaining[starts[i]] = False
    cnt = 0
    for v in range(n):
        if remaining[v]:
            cnt += 1
    while cnt > 0:
        best_c = np.inf
        bv = -1
        bi = -1
        bd = 0.0
        for v in range(n):
            if not remaining[v]:
                continue
            denom = 1.0 + prob[v]
            for i in range(m):
                d = elapsed[i] + cost[last[i], v]
                c = d / denom
                if c < best_c:
                    best_c = c
                    bv = v
                    bi = i
                    bd = d
        routes[bi, lens[bi]] = bv
        lens[bi] += 1
        elapsed[bi] = bd
        last[bi] = bv
        remaining[bv] = False
        cnt -= 1
    return routes, lens
