from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mdsearch import (
    CoverageError,
    Instance,
    Solution,
    SolutionError,
    arrival_times,
    evaluate,
    evaluate_delta_2opt,
    parse_routes,
    reverse_segment,
    route_cost,
    swap_vertices,
)

from conftest import make_instance, random_covering_routes
from oracles import brute_cost

FIXTURES = Path(__file__).parent / "fixtures"


def line_instance(dists, m=1, mode="mtdp", prob=None):
    """Vertices on a line with consecutive gaps `dists` (complete metric)."""
    xs = np.concatenate(([0.0], np.cumsum(dists)))
    coords = np.column_stack([xs, np.zeros_like(xs)])
    n = len(xs)
    cost = np.abs(xs[:, None] - xs[None, :])
    p = np.ones(n) if prob is None else np.asarray(prob, dtype=float)
    return Instance(
        name="line", n=n, coords=coords, cost=cost, prob=p,
        m=m, starts=(0,) * m, mode=mode,
    )


class TestArrivalTimes:
    def test_single_vertex_route(self):
        inst = line_instance([1.0])
        assert arrival_times([0], inst).tolist() == [0.0]

    def test_three_vertex_route(self):
        inst = line_instance([2.0, 3.0])
        assert arrival_times([0, 1, 2], inst).tolist() == [0.0, 2.0, 5.0]

    def test_matches_prefix_sum_recomputation(self):
        rng = np.random.default_rng(7)
        inst = make_instance(rng, 10, metric=False)
        route = [0, *rng.permutation(np.arange(1, 10)).tolist()]
        taus = arrival_times(route, inst)
        acc, expect = 0.0, [0.0]
        for k in range(1, len(route)):
            acc += inst.cost[route[k - 1], route[k]]
            expect.append(acc)
        assert np.allclose(taus, expect, atol=1e-12)


class TestEvaluate:
    def test_single_edge_latency(self):
        inst = line_instance([5.0])
        assert evaluate([[0, 1]], inst) == 5.0

    def test_starts_contribute_zero(self):
        inst = line_instance([4.0], m=2)
        assert evaluate([[0], [0, 1]], inst) == 4.0

    def test_berlin52_m2_reference_solution(self, instance_dir):
        inst = Instance.from_file(instance_dir / "berlin52.tsp", m=2)
        sol = parse_routes((FIXTURES / "berlin52_m2_best.routes").read_text(), inst)
        assert sol.cost == pytest.approx(70235.0, abs=1e-6)

    def test_coverage_violation_raises(self):
        inst = line_instance([1.0, 1.0])
        with pytest.raises(CoverageError):
            evaluate([[0, 1]], inst)  # vertex 2 missing
        with pytest.raises(CoverageError):
            evaluate([[0, 1, 2], [0, 1]], inst)  # 1 visited twice

    def test_additive_over_routes(self):
        rng = np.random.default_rng(3)
        inst = make_instance(rng, 9, m=3, mode="mgsp")
        routes = random_covering_routes(rng, inst)
        total = evaluate(routes, inst)
        assert total == pytest.approx(sum(route_cost(r, inst) for r in routes), abs=1e-9)

    def test_uniform_p_equals_total_latency(self):
        rng = np.random.default_rng(4)
        inst = make_instance(rng, 8, m=1)
        route = random_covering_routes(rng, inst)[0]
        assert route_cost(route, inst) == pytest.approx(
            arrival_times(route, inst).sum(), abs=1e-9
        )


class TestDelta2opt:
    def test_identity_reversal_is_zero(self):
        rng = np.random.default_rng(5)
        inst = make_instance(rng, 6)
        route = random_covering_routes(rng, inst)[0]
        for i in range(1, len(route)):
            assert evaluate_delta_2opt(route, i, i, inst) == pytest.approx(0.0, abs=1e-9)

    def test_equidistant_square_is_zero(self):
        # all pairwise costs equal -> any reversal leaves the objective alone
        n = 4
        cost = np.full((n, n), 7.0)
        np.fill_diagonal(cost, 0.0)
        inst = Instance(
            name="eq", n=n, coords=np.zeros((n, 2)), cost=cost,
            prob=np.ones(n), m=1, starts=(0,), mode="mtdp",
        )
        route = [0, 2, 1, 3]
        for i in range(1, 4):
            for j in range(i, 4):
                assert evaluate_delta_2opt(route, i, j, inst) == pytest.approx(0.0, abs=1e-9)

    def test_matches_full_reevaluation(self):
        rng = np.random.default_rng(6)
        inst = make_instance(rng, 8, mode="mgsp", metric=False)
        route = random_covering_routes(rng, inst)[0]
        before = route_cost(route, inst)
        for _ in range(50):
            i = int(rng.integers(1, len(route)))
            j = int(rng.integers(i, len(route)))
            after = route_cost(reverse_segment(route, i, j), inst)
            assert evaluate_delta_2opt(route, i, j, inst) == pytest.approx(
                after - before, abs=1e-6
            )

    def test_precondition_enforced(self):
        inst = line_instance([1.0, 1.0])
        with pytest.raises(ValueError):
            evaluate_delta_2opt([0, 1, 2], 0, 1, inst)
        with pytest.raises(ValueError):
            evaluate_delta_2opt([0, 1, 2], 2, 1, inst)


class TestAgainstBruteForce:
    def test_evaluate_matches_oracle(self):
        rng = np.random.default_rng(11)
        for _ in range(200):
            n = int(rng.integers(2, 13))
            m = int(rng.integers(1, 4))
            mode = "mgsp" if rng.random() < 0.5 else "mtdp"
            inst = make_instance(rng, n, m=m, mode=mode, metric=False,
                                 shared_start=bool(rng.random() < 0.5))
            routes = random_covering_routes(rng, inst)
            assert evaluate(routes, inst) == pytest.approx(
                brute_cost(routes, inst.cost, inst.prob), abs=1e-6
            )


@settings(max_examples=50, deadline=None)
@given(scale=st.floats(0.1, 0.9), seed=st.integers(0, 10_000))
def test_probability_scaling_scales_cost(scale, seed):
    # the objective is linear in prob: scaling all probabilities by k scales
    # every route cost by k, so the argmin over solutions is scale-invariant
    rng = np.random.default_rng(seed)
    inst = make_instance(rng, 7, mode="mgsp")
    route = random_covering_routes(rng, inst)[0]
    base = route_cost(route, inst)
    r = np.asarray(route)
    tau = arrival_times(route, inst)
    assert float(np.dot(tau, inst.prob[r] * scale)) == pytest.approx(base * scale, rel=1e-12)


class TestSolutionType:
    def test_round_trip_and_validate(self):
        rng = np.random.default_rng(12)
        inst = make_instance(rng, 9, m=2)
        routes = random_covering_routes(rng, inst)
        sol = Solution.from_routes(routes, inst)
        sol.validate(inst)

    def test_validate_rejects_wrong_start(self):
        rng = np.random.default_rng(13)
        inst = make_instance(rng, 6, m=2)
        routes = random_covering_routes(rng, inst)
        routes[0] = routes[0][::-1]
        if routes[0][0] == inst.starts[0]:  # palindrome-safe
            pytest.skip("reversal kept the start in place")
        sol = Solution(routes=routes, cost=evaluate(routes, inst))
        with pytest.raises(SolutionError):
            sol.validate(inst)

    def test_validate_rejects_stale_cost(self):
        rng = np.random.default_rng(14)
        inst = make_instance(rng, 6, m=1)
        routes = random_covering_routes(rng, inst)
        sol = Solution(routes=routes, cost=evaluate(routes, inst) + 1.0)
        with pytest.raises(SolutionError):
            sol.validate(inst)


class TestMoveHelpers:
    def test_reverse_segment(self):
        assert reverse_segment([0, 1, 2, 3, 4], 1, 3) == [0, 3, 2, 1, 4]

    def test_swap_vertices(self):
        assert swap_vertices([0, 1, 2, 3], 1, 3) == [0, 3, 2, 1]
