"""TSPLIB instance loading, cost matrices, and per-vertex probabilities."""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

MODES = ("mtdp", "mgsp")

# Seed string used for generated probabilities when none is supplied.
DEFAULT_PROB_SEED = "2016-09-11"

# Raw probability draws: normal(5.5, 1.5) resampled into [1, 10], then normalized.
_RAW_LOW, _RAW_HIGH = 1.0, 10.0
_RAW_MEAN, _RAW_STD = 5.5, 1.5

PROB_SUM_TOL = 1e-9


class TsplibParseError(ValueError):
    """Malformed TSPLIB input. Carries the offending 1-based line number when known."""

    def __init__(self, message: str, line_no: int | None = None):
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)
        self.line_no = line_no


class ProbabilityFileError(ValueError):
    """Malformed probability file. Carries the offending 1-based line number when known."""

    def __init__(self, message: str, line_no: int | None = None):
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)
        self.line_no = line_no


@dataclass(frozen=True)
class TsplibSkeleton:
    """Name, dimension and coordinates read from a TSPLIB file."""

    name: str
    n: int
    coords: np.ndarray  # (n, 2) float64


def parse_tsplib(text: str) -> TsplibSkeleton:
    """Parse a TSPLIB EUC_2D file into a skeleton (name, n, coords).

    Accepts both ``KEY: value`` and ``KEY : value`` header forms. 1-based vertex
    labels in NODE_COORD_SECTION are mapped to 0-based order of appearance.
    Raises TsplibParseError with a line number for unsupported edge-weight
    types, dimension mismatches, and malformed numeric fields.
    """
    name: str | None = None
    dim: int | None = None
    ewt: str | None = None
    coords: list[tuple[float, float]] = []
    in_coords = False
    section_line = 0

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if not in_coords:
            key = line.split(":", 1)[0].strip().upper()
            if key == "NODE_COORD_SECTION" and ":" not in line:
                in_coords = True
                section_line = line_no
                continue
            if ":" in line:
                value = line.split(":", 1)[1].strip()
                if key == "NAME":
                    name = value
                elif key == "DIMENSION":
                    try:
                        dim = int(value)
                    except ValueError:
                        raise TsplibParseError(f"DIMENSION is not an integer: {value!r}", line_no)
                    if dim < 1:
                        raise TsplibParseError(f"DIMENSION must be >= 1, got {dim}", line_no)
                elif key == "EDGE_WEIGHT_TYPE":
                    if value.upper() != "EUC_2D":
                        raise TsplibParseError(
                            f"unsupported EDGE_WEIGHT_TYPE {value!r} (only EUC_2D)", line_no
                        )
                    ewt = value.upper()
            continue
        # inside NODE_COORD_SECTION
        if line.upper() == "EOF":
            break
        if dim is not None and len(coords) >= dim:
            raise TsplibParseError(
                f"unexpected content after {dim} coordinate lines: {line!r}", line_no
            )
        parts = line.split()
        if len(parts) != 3:
            raise TsplibParseError(f"expected 'index x y', got {line!r}", line_no)
        try:
            float(parts[0])
            x, y = float(parts[1]), float(parts[2])
        except ValueError:
            raise TsplibParseError(f"malformed numeric field in {line!r}", line_no)
        coords.append((x, y))

    if name is None:
        raise TsplibParseError("missing NAME header")
    if dim is None:
        raise TsplibParseError("missing DIMENSION header")
    if ewt is None:
        raise TsplibParseError("missing EDGE_WEIGHT_TYPE header")
    if not in_coords:
        raise TsplibParseError("missing NODE_COORD_SECTION")
    if len(coords) != dim:
        raise TsplibParseError(
            f"DIMENSION is {dim} but NODE_COORD_SECTION holds {len(coords)} coordinates",
            section_line,
        )
    return TsplibSkeleton(name=name, n=dim, coords=np.asarray(coords, dtype=np.float64))


def build_costs(coords: np.ndarray) -> np.ndarray:
    """Travel-time matrix for EUC_2D coordinates: nint(euclidean), zero diagonal."""
    pts = np.asarray(coords, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[0] < 1 or pts.shape[1] != 2:
        raise ValueError(f"coords must be a nonempty (n, 2) array, got shape {pts.shape}")
    diff = pts[:, None, :] - pts[None, :, :]
    cost = np.floor(np.hypot(diff[..., 0], diff[..., 1]) + 0.5)
    np.fill_diagonal(cost, 0.0)
    return cost


def _seed_from_string(seed: str) -> int:
    digest = hashlib.sha256(seed.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little")


def gen_probabilities(n: int, seed: str) -> np.ndarray:
    """Seeded normal draws resampled into [1, 10], assigned in vertex order,
    normalized to sum 1. Same (n, seed) yields the identical vector."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    rng = np.random.default_rng(_seed_from_string(seed))
    raw = rng.normal(_RAW_MEAN, _RAW_STD, size=n)
    bad = (raw < _RAW_LOW) | (raw > _RAW_HIGH)
    while bad.any():
        raw[bad] = rng.normal(_RAW_MEAN, _RAW_STD, size=int(bad.sum()))
        bad = (raw < _RAW_LOW) | (raw > _RAW_HIGH)
    return raw / raw.sum()


def load_probabilities(text: str, expected_n: int | None = None) -> np.ndarray:
    """Read one nonnegative real per line and normalize to sum 1.

    Allows exact replay of an externally generated probability sequence.
    """
    values: list[float] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        try:
            v = float(line)
        except ValueError:
            raise ProbabilityFileError(f"not a number: {line!r}", line_no)
        if not math.isfinite(v) or v < 0.0:
            raise ProbabilityFileError(f"negative or non-finite value: {line!r}", line_no)
        values.append(v)
    if not values:
        raise ProbabilityFileError("empty probability file")
    if expected_n is not None and len(values) != expected_n:
        raise ProbabilityFileError(f"expected {expected_n} values, found {len(values)}")
    p = np.asarray(values, dtype=np.float64)
    total = p.sum()
    if total <= 0.0:
        raise ProbabilityFileError("values sum to zero")
    return p / total


@dataclass(frozen=True, eq=False)
class Instance:
    """Immutable problem instance: complete graph with travel times, per-vertex
    probabilities, vehicle count, and start vertices.

    mTDP instances carry prob = 1 for every vertex (objective = total latency);
    mGSP probabilities sum to 1. Safe to share across concurrent solver workers.
    """

    name: str
    n: int
    coords: np.ndarray        # (n, 2)
    cost: np.ndarray          # (n, n) symmetric, zero diagonal
    prob: np.ndarray          # (n,)
    m: int
    starts: tuple[int, ...]   # one start per vehicle, duplicates allowed
    mode: str = "mtdp"

    def __post_init__(self):
        object.__setattr__(self, "coords", np.ascontiguousarray(self.coords, dtype=np.float64))
        object.__setattr__(self, "cost", np.ascontiguousarray(self.cost, dtype=np.float64))
        object.__setattr__(self, "prob", np.ascontiguousarray(self.prob, dtype=np.float64))
        object.__setattr__(self, "starts", tuple(int(s) for s in self.starts))
        for arr in (self.coords, self.cost, self.prob):
            arr.setflags(write=False)
        self.validate()

    def validate(self) -> None:
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.coords.shape != (self.n, 2):
            raise ValueError(f"coords shape {self.coords.shape} != ({self.n}, 2)")
        if self.cost.shape != (self.n, self.n):
            raise ValueError(f"cost shape {self.cost.shape} != ({self.n}, {self.n})")
        if (self.cost < 0.0).any():
            raise ValueError("cost matrix has negative entries")
        if np.diagonal(self.cost).any():
            raise ValueError("cost matrix diagonal is not zero")
        if not np.array_equal(self.cost, self.cost.T):
            raise ValueError("cost matrix is not symmetric")
        if self.prob.shape != (self.n,):
            raise ValueError(f"prob shape {self.prob.shape} != ({self.n},)")
        if (self.prob < 0.0).any() or (self.prob > 1.0).any():
            raise ValueError("probabilities must lie in [0, 1]")
        if self.mode == "mtdp":
            if not np.all(self.prob == 1.0):
                raise ValueError("mtdp instances require prob = 1 for every vertex")
        else:
            if abs(float(self.prob.sum()) - 1.0) > PROB_SUM_TOL:
                raise ValueError(f"mgsp probabilities sum to {self.prob.sum()}, expected 1")
        if self.m < 1:
            raise ValueError(f"m must be >= 1, got {self.m}")
        if len(self.starts) != self.m:
            raise ValueError(f"{len(self.starts)} start vertices for m={self.m} vehicles")
        for s in self.starts:
            if not 0 <= s < self.n:
                raise ValueError(f"start vertex {s} outside [0, {self.n})")

    @classmethod
    def from_tsplib(
        cls,
        text: str,
        *,
        m: int = 1,
        mode: str = "mtdp",
        starts: tuple[int, ...] | None = None,
        prob: np.ndarray | None = None,
        prob_seed: str = DEFAULT_PROB_SEED,
    ) -> "Instance":
        skel = parse_tsplib(text)
        cost = build_costs(skel.coords)
        if starts is None:
            starts = (0,) * m  # benchmark convention: every vehicle at the first vertex
        if mode == "mtdp":
            p = np.ones(skel.n)
        elif prob is not None:
            p = np.asarray(prob, dtype=np.float64)
        else:
            p = gen_probabilities(skel.n, prob_seed)
        return cls(skel.name, skel.n, skel.coords, cost, p, m, tuple(starts), mode)

    @classmethod
    def from_file(cls, path: str | Path, **kwargs) -> "Instance":
        return cls.from_tsplib(Path(path).read_text(encoding="utf-8"), **kwargs)

    def with_vehicles(self, m: int, starts: tuple[int, ...] | None = None) -> "Instance":
        """Same graph and probabilities with a different vehicle count."""
        if starts is None:
            starts = (self.starts[0],) * m
        return replace(self, m=m, starts=tuple(starts))

    def with_probabilities(self, prob: np.ndarray) -> "Instance":
        """Same graph as an mGSP instance with the given probability vector."""
        return replace(self, prob=np.asarray(prob, dtype=np.float64), mode="mgsp")
