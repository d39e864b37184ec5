"""Learning model core: cost values, sample-size bounds, finite ERM, and shattering probes.

An algorithm family is a deterministic map (index, instance) -> cost, with a
fixed optimization orientation shared by all indices.  Everything here treats
costs as plain floats in [0, H]; the heavier machinery for specific families
(greedy heuristics, gradient descent, sorters) lives in the sibling modules.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import product
from typing import Callable, Sequence

import numpy as np

from .utils import thread_count

MAXIMIZE = "maximize"
MINIMIZE = "minimize"


@dataclass(frozen=True)
class CostValue:
    """A single performance measurement, tagged with its orientation."""

    value: float
    orientation: str = MAXIMIZE

    def __post_init__(self) -> None:
        if self.orientation not in (MAXIMIZE, MINIMIZE):
            raise ValueError(f"bad orientation: {self.orientation!r}")
        if not math.isfinite(self.value) or self.value < 0:
            raise ValueError(f"cost must be finite and >= 0, got {self.value!r}")


@dataclass(frozen=True)
class LearnSpec:
    """Inputs to the uniform-convergence sample-size bound.

    `d` is the pseudo-dimension of the family (or log2 of its size for a
    finite family), `H` the cost range bound, and `c_const` the leading
    constant of the bound, which theory leaves unspecified; it defaults to 1
    and only scales the reported sample size.
    """

    epsilon: float
    delta: float
    H: float
    d: float
    c_const: float = 1.0

    def __post_init__(self) -> None:
        if self.epsilon <= 0:
            raise ValueError("epsilon must be > 0")
        if not 0 < self.delta <= 1:
            raise ValueError("delta must be in (0, 1]")
        if self.H <= 0:
            raise ValueError("H must be > 0")
        if self.d < 0:
            raise ValueError("d must be >= 0")
        if self.c_const <= 0:
            raise ValueError("c_const must be > 0")


def sample_size(spec: LearnSpec) -> int:
    """Number of samples sufficient for uniform convergence to error epsilon.

    Evaluates ceil(c * (H / epsilon)^2 * (d + ln(1/delta))), clamped to >= 1.
    """
    raw = spec.c_const * (spec.H / spec.epsilon) ** 2 * (spec.d + math.log(1.0 / spec.delta))
    return max(1, math.ceil(raw))


@dataclass(frozen=True)
class FiniteFamily:
    """A finite set of algorithms with a deterministic cost evaluator.

    `evaluate(index, instance)` must be pure: identical arguments yield
    identical costs and the instance is never mutated.
    """

    indices: tuple
    evaluate: Callable[[object, object], float]
    orientation: str = MAXIMIZE
    H: float = 1.0

    def __post_init__(self) -> None:
        if len(self.indices) == 0:
            raise ValueError("family needs at least one index")
        if self.orientation not in (MAXIMIZE, MINIMIZE):
            raise ValueError(f"bad orientation: {self.orientation!r}")

    def cost_matrix(self, samples: Sequence) -> np.ndarray:
        """Costs of every index on every sample, shape (len(indices), len(samples)).

        Rows are independent, so they are computed by a thread pool when
        ALGOSELECT_THREADS > 1; results are reduced in index order either way.
        """
        def row(index):
            return [float(self.evaluate(index, x)) for x in samples]

        workers = thread_count()
        if workers > 1 and len(self.indices) > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                rows = list(pool.map(row, self.indices))
        else:
            rows = [row(i) for i in self.indices]
        return np.asarray(rows, dtype=float)


@dataclass(frozen=True)
class ErrorReport:
    """Outcome of an ERM run: the chosen index and its empirical means.

    `estimated_error` is |held-out mean of the chosen index - held-out mean of
    the best candidate on the held-out set|; it is 0 when no held-out set was
    supplied (the training set then doubles as the held-out set).
    """

    chosen: object
    train_mean: float
    holdout_mean: float
    estimated_error: float


def _best_index(means: np.ndarray, orientation: str) -> int:
    # argmax/argmin return the first optimum, which is the smallest index.
    return int(np.argmax(means) if orientation == MAXIMIZE else np.argmin(means))


def erm_finite(family: FiniteFamily, samples: Sequence, holdout: Sequence | None = None) -> ErrorReport:
    """Pick the index with the best average cost on `samples`.

    Ties are broken toward the smallest index so runs are deterministic.  If
    `holdout` is given, the report estimates the error of the choice against
    the empirically best index on the held-out set.
    """
    if len(samples) == 0:
        raise ValueError("need at least one sample")
    train_means = family.cost_matrix(samples).mean(axis=1)
    best = _best_index(train_means, family.orientation)
    chosen = family.indices[best]
    if holdout is not None and len(holdout) > 0:
        hold_means = family.cost_matrix(holdout).mean(axis=1)
        chosen_hold = float(hold_means[best])
        best_hold = float(hold_means[_best_index(hold_means, family.orientation)])
        return ErrorReport(chosen, float(train_means[best]), chosen_hold, abs(chosen_hold - best_hold))
    return ErrorReport(chosen, float(train_means[best]), float(train_means[best]), 0.0)


@dataclass(frozen=True)
class ShatterReport:
    """Result of probing one instance set for pseudo-shattering."""

    set_size: int
    shattered: bool
    witnesses: tuple | None
    labeling_count: int


def _witness_grids(costs: np.ndarray) -> list[np.ndarray]:
    """Candidate witnesses per instance: midpoints between consecutive distinct costs.

    Binary labelings only change as the witness crosses a realized cost value,
    so midpoints cover every achievable labeling column.  An instance on which
    all candidates agree gets its single cost value as a placeholder witness
    (it can never split the candidates).
    """
    grids = []
    for j in range(costs.shape[1]):
        distinct = np.unique(costs[:, j])
        if distinct.size < 2:
            grids.append(distinct)
        else:
            grids.append((distinct[:-1] + distinct[1:]) / 2.0)
    return grids


def realized_labelings(costs: np.ndarray, witnesses: Sequence[float]) -> int:
    """Number of distinct above/below labelings the candidate rows realize."""
    bits = costs > np.asarray(witnesses, dtype=float)[None, :]
    codes = bits @ (1 << np.arange(costs.shape[1]))
    return int(np.unique(codes).size)


def shatter_probe(
    family: FiniteFamily,
    sample_sets: Sequence[Sequence],
    size_cap: int = 4,
    combo_cap: int = 5_000_000,
) -> list[ShatterReport]:
    """Search witness vectors certifying that each instance set is shattered.

    A set of size s is shattered when some witness vector makes the candidate
    indices realize all 2^s labelings.  The search runs over the finite grid
    of per-instance cost midpoints, which is exhaustive for this purpose.
    Reported witnesses can be re-verified with `realized_labelings`.
    """
    reports = []
    for sample_set in sample_sets:
        s = len(sample_set)
        if s > size_cap:
            raise ValueError(f"instance set of size {s} exceeds the cap of {size_cap}")
        costs = family.cost_matrix(sample_set)
        grids = _witness_grids(costs)
        total = math.prod(len(g) for g in grids)
        if total > combo_cap:
            raise ValueError(
                f"witness search space of {total} combinations exceeds the cap of {combo_cap}; "
                "reduce the candidate count or the set size"
            )
        target = 2**s
        best_count, best_wit, shattered = 0, None, False
        for wit in product(*grids):
            count = realized_labelings(costs, wit)
            if count > best_count:
                best_count, best_wit = count, tuple(float(w) for w in wit)
            if count == target:
                shattered = True
                break
        reports.append(ShatterReport(s, shattered, best_wit if shattered else None, best_count))
    return reports
