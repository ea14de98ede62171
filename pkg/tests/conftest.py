import sys
from pathlib import Path

import numpy as np
import pytest

from mdsearch import Instance, build_costs

sys.path.insert(0, str(Path(__file__).parent))  # makes `oracles` importable

INSTANCE_DIR = Path(__file__).parent.parent / "instances"

BENCHMARK_NAMES = (
    "berlin52", "bier127", "gil262", "lin318", "pcb442", "rat575", "u724", "pr1002",
)


@pytest.fixture(scope="session")
def instance_dir() -> Path:
    return INSTANCE_DIR


@pytest.fixture(scope="session")
def berlin52() -> Instance:
    return Instance.from_file(INSTANCE_DIR / "berlin52.tsp")


@pytest.fixture(scope="session")
def bier127() -> Instance:
    return Instance.from_file(INSTANCE_DIR / "bier127.tsp")


@pytest.fixture(scope="session")
def gil262() -> Instance:
    return Instance.from_file(INSTANCE_DIR / "gil262.tsp")


def make_instance(
    rng: np.random.Generator,
    n: int,
    m: int = 1,
    mode: str = "mtdp",
    metric: bool = True,
    shared_start: bool = True,
) -> Instance:
    """Random test instance; metric=False draws an arbitrary symmetric matrix."""
    coords = rng.uniform(0.0, 100.0, size=(n, 2))
    if metric:
        cost = build_costs(coords)
    else:
        raw = rng.uniform(1.0, 100.0, size=(n, n))
        cost = np.triu(raw, 1)
        cost = cost + cost.T
    if mode == "mtdp":
        prob = np.ones(n)
    else:
        prob = rng.uniform(0.05, 1.0, size=n)
        prob = prob / prob.sum()
    if shared_start:
        starts = (int(rng.integers(n)),) * m
    else:
        starts = tuple(int(s) for s in rng.integers(0, n, size=m))
    return Instance(
        name=f"rand{n}", n=n, coords=coords, cost=cost, prob=prob,
        m=m, starts=starts, mode=mode,
    )


def random_covering_routes(rng: np.random.Generator, inst: Instance) -> list[list[int]]:
    """Random solution-shaped routes: a shuffled split of the non-start
    vertices, each chunk prefixed by its vehicle's start."""
    start_set = set(inst.starts)
    free = [v for v in range(inst.n) if v not in start_set]
    rng.shuffle(free)
    if inst.m == 1:
        cuts = []
    else:
        cuts = sorted(rng.integers(0, len(free) + 1, size=inst.m - 1))
    routes = []
    prev = 0
    for i in range(inst.m):
        end = cuts[i] if i < len(cuts) else len(free)
        routes.append([inst.starts[i], *free[prev:end]])
        prev = end
    return routes
