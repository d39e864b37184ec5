"""Single-parameter greedy heuristics for object assignment problems.

Two built-in problem kinds are provided:

* Knapsack: pack items in order of nonincreasing score v / s^rho.
* Maximum-weight independent set (MWIS): select vertices in order of
  nonincreasing score w / (1 + deg)^rho, with the degree either frozen at its
  initial value (non-adaptive) or recomputed in the residual graph after each
  selection (adaptive).

Scores are compared in log space (ln p - rho * ln d), which preserves order
and avoids overflow for extreme attribute ratios.  Because two members of a
family with arbitrarily close parameters can behave completely differently,
ERM over the continuum is done constructively: every parameter value at which
any two object scores cross is enumerated in closed form, and one
representative per subinterval is evaluated (`breakpoints`, `erm_breakpoint`).
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

import numpy as np

from .core import MAXIMIZE, CostValue, ErrorReport, FiniteFamily, erm_finite

VALUE_ONLY = "value-only"
KNAPSACK_DENSITY = "knapsack-density"
MWIS_DENSITY = "mwis-density"

KNAPSACK_PACK = "knapsack-feasible-pack"
MWIS_NONADAPTIVE = "mwis-nonadaptive"
MWIS_ADAPTIVE = "mwis-adaptive"

# Exact float dedup of coincident crossing points, relative to magnitude.
_BREAKPOINT_MERGE_RTOL = 1e-12


@dataclass(frozen=True)
class ScoringRule:
    """A one-parameter score family; any two attribute curves cross <= kappa times."""

    kind: str
    kappa: int = 1

    def __post_init__(self) -> None:
        if self.kind not in (VALUE_ONLY, KNAPSACK_DENSITY, MWIS_DENSITY):
            raise ValueError(f"unknown scoring rule: {self.kind!r}")
        if self.kappa < 1:
            raise ValueError("kappa must be >= 1")


@dataclass(frozen=True)
class AssignmentRule:
    """How the top-scoring object is assigned; bounds attribute churn per object."""

    kind: str

    def __post_init__(self) -> None:
        if self.kind not in (KNAPSACK_PACK, MWIS_NONADAPTIVE, MWIS_ADAPTIVE):
            raise ValueError(f"unknown assignment rule: {self.kind!r}")

    def beta(self, n: int) -> int:
        # Only the adaptive MWIS rule mutates attributes (residual degrees).
        return n if self.kind == MWIS_ADAPTIVE else 1


@dataclass(frozen=True)
class ParamGreedyFamily:
    """Greedy heuristics indexed by a parameter rho in a finite interval."""

    scoring: ScoringRule
    assignment: AssignmentRule
    interval: tuple[float, float]
    n: int

    def __post_init__(self) -> None:
        lo, hi = self.interval
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise ValueError("interval must be finite")
        if not 0 <= lo <= hi:
            raise ValueError("interval must satisfy 0 <= lo <= hi")
        if self.n < 1:
            raise ValueError("n must be >= 1")
        mwis_scoring = self.scoring.kind == MWIS_DENSITY
        mwis_assign = self.assignment.kind in (MWIS_NONADAPTIVE, MWIS_ADAPTIVE)
        if mwis_scoring != mwis_assign:
            raise ValueError("scoring and assignment rules target different problems")

    @property
    def problem(self) -> str:
        return "mwis" if self.assignment.kind != KNAPSACK_PACK else "knapsack"

    def contains(self, rho) -> bool:
        lo, hi = self.interval
        return lo <= float(rho) <= hi


def mwis_family(n: int, interval=(0.0, 1.0), adaptive: bool = False) -> ParamGreedyFamily:
    rule = MWIS_ADAPTIVE if adaptive else MWIS_NONADAPTIVE
    return ParamGreedyFamily(ScoringRule(MWIS_DENSITY), AssignmentRule(rule), tuple(interval), n)


def knapsack_family(n: int, interval=(0.0, 1.0), value_only: bool = False) -> ParamGreedyFamily:
    scoring = ScoringRule(VALUE_ONLY if value_only else KNAPSACK_DENSITY)
    return ParamGreedyFamily(scoring, AssignmentRule(KNAPSACK_PACK), tuple(interval), n)


class MwisInstance:
    """Undirected vertex-weighted graph with weights in (0, 1].

    `edges` is canonicalized to unique (u, v) pairs with u < v.  Instances
    whose weights are exact powers of an integer base may carry
    (`exact_base`, `exact_exponents`): weight_v proportional to
    base**exponent_v with Fraction exponents.  Greedy runs with a Fraction
    parameter then compare scores exactly, which keeps selections correct even
    when parameter windows are far below float resolution.
    """

    __slots__ = ("n", "edges", "weights", "exact_base", "exact_exponents",
                 "_indptr", "_indices", "_degrees")

    def __init__(self, n, edges, weights, exact_base=None, exact_exponents=None):
        n = int(n)
        if n < 1:
            raise ValueError("need at least one vertex")
        edge_arr = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges,
                              dtype=np.int64).reshape(-1, 2)
        if edge_arr.size:
            if (edge_arr < 0).any() or (edge_arr >= n).any():
                raise ValueError("edge endpoint out of range")
            if (edge_arr[:, 0] == edge_arr[:, 1]).any():
                raise ValueError("self-loops are not allowed")
            edge_arr = np.sort(edge_arr, axis=1)
            edge_arr = np.unique(edge_arr, axis=0)
        w = np.asarray(weights, dtype=float)
        if w.shape != (n,):
            raise ValueError("weights must have one entry per vertex")
        if (w <= 0).any() or (w > 1).any() or not np.isfinite(w).all():
            raise ValueError("weights must lie in (0, 1]")
        self.n = n
        self.edges = edge_arr
        self.weights = w
        self.exact_base = None if exact_base is None else int(exact_base)
        self.exact_exponents = None if exact_exponents is None else tuple(exact_exponents)
        if (self.exact_base is None) != (self.exact_exponents is None):
            raise ValueError("exact_base and exact_exponents must be given together")
        if self.exact_exponents is not None and len(self.exact_exponents) != n:
            raise ValueError("need one exact exponent per vertex")
        self._indptr = None
        self._indices = None
        self._degrees = None

    def _build_csr(self):
        if self._indptr is not None:
            return
        n, e = self.n, self.edges
        both = np.concatenate([e, e[:, ::-1]]) if e.size else np.empty((0, 2), dtype=np.int64)
        order = np.argsort(both[:, 0], kind="stable")
        both = both[order]
        counts = np.bincount(both[:, 0], minlength=n)
        self._indptr = np.concatenate([[0], np.cumsum(counts)]).astype(np.int64)
        self._indices = both[:, 1].copy()
        self._degrees = counts.astype(np.int64)

    @property
    def degrees(self) -> np.ndarray:
        self._build_csr()
        return self._degrees

    def neighbors(self, v: int) -> np.ndarray:
        self._build_csr()
        return self._indices[self._indptr[v]:self._indptr[v + 1]]

    def adjacency_matrix(self) -> np.ndarray:
        adj = np.zeros((self.n, self.n), dtype=bool)
        if self.edges.size:
            adj[self.edges[:, 0], self.edges[:, 1]] = True
            adj[self.edges[:, 1], self.edges[:, 0]] = True
        return adj

    def total_weight(self) -> float:
        return float(math.fsum(self.weights))


class KnapsackInstance:
    """Items with positive values and sizes, and a positive capacity."""

    __slots__ = ("n", "values", "sizes", "capacity")

    def __init__(self, values, sizes, capacity):
        v = np.asarray(values, dtype=float)
        s = np.asarray(sizes, dtype=float)
        if v.ndim != 1 or v.shape != s.shape or v.size < 1:
            raise ValueError("values and sizes must be equal-length nonempty vectors")
        if (v <= 0).any() or (s <= 0).any() or capacity <= 0:
            raise ValueError("values, sizes, and capacity must be positive")
        self.n = int(v.size)
        self.values = v
        self.sizes = s
        self.capacity = float(capacity)


def mask_cost(mask: np.ndarray, payload: np.ndarray) -> float:
    """Solution value with a reduction that is bitwise identical between the
    scalar and the row-vectorized evaluation paths."""
    return float(np.where(mask, payload, 0.0).sum(axis=-1))


def is_independent_set(instance: MwisInstance, solution: Sequence[int]) -> bool:
    """Direct edge scan, independent of any greedy code path."""
    chosen = set(int(v) for v in solution)
    return not any(u in chosen and v in chosen for u, v in instance.edges.tolist())


def knapsack_feasible(instance: KnapsackInstance, solution: Sequence[int]) -> bool:
    return sum(float(instance.sizes[i]) for i in solution) <= instance.capacity + 1e-12


# ---------------------------------------------------------------------------
# Greedy execution
# ---------------------------------------------------------------------------


def _mwis_log_keys(instance: MwisInstance, rho: float, deg: np.ndarray) -> np.ndarray:
    return np.log(instance.weights) - float(rho) * np.log1p(deg)


def _exact_order(instance: MwisInstance, rho: Fraction) -> list[int]:
    """Score order with exact per-pair comparisons.

    Requires every (1 + degree) to be an integer power of `exact_base`, which
    holds for the nested-interval constructions this mode exists for.
    """
    base = instance.exact_base
    ks = []
    for v in range(instance.n):
        d = int(instance.degrees[v]) + 1
        k = round(math.log(d, base)) if d > 1 else 0
        if base**k != d:
            raise ValueError("exact mode requires (1 + degree) to be a power of the base")
        ks.append(k)
    keys = [e - rho * k for e, k in zip(instance.exact_exponents, ks)]
    return sorted(range(instance.n), key=lambda v: (-keys[v], v))


def _greedy_mwis_nonadaptive(instance: MwisInstance, rho) -> np.ndarray:
    if isinstance(rho, Fraction) and instance.exact_base is not None:
        order = _exact_order(instance, rho)
    else:
        keys = _mwis_log_keys(instance, rho, instance.degrees.astype(float))
        order = np.argsort(-keys, kind="stable")
    instance._build_csr()
    indptr, indices = instance._indptr, instance._indices
    chosen = np.zeros(instance.n, dtype=bool)
    for v in order:
        if not chosen[indices[indptr[v]:indptr[v + 1]]].any():
            chosen[v] = True
    return chosen

def _greedy_mwis_adaptive(instance: MwisInstance, rho) -> np.ndarray:
    instance._build_csr()
    indptr, indices = instance._indptr, instance._indices
    n = instance.n
    rho_f = float(rho)
    deg = instance.degrees.astype(float)
    logw = np.log(instance.weights)
    alive = np.ones(n, dtype=bool)
    chosen = np.zeros(n, dtype=bool)
    masked = logw - rho_f * np.log1p(deg)
    remaining = n
    while remaining:
        v = int(np.argmax(masked))
        chosen[v] = True
        nbrs = indices[indptr[v]:indptr[v + 1]]
        removed = np.concatenate([[v], nbrs[alive[nbrs]]])
        alive[removed] = False
        masked[removed] = -np.inf
        remaining -= removed.size
        if remaining == 0:
            break
        # Residual degrees drop by the number of removed neighbors.
        if removed.size == 1:
            affected = nbrs
        else:
            affected = np.concatenate([indices[indptr[r]:indptr[r + 1]] for r in removed])
        affected = affected[alive[affected]]
        if affected.size:
            np.subtract.at(deg, affected, 1.0)
            touched = np.unique(affected)
            masked[touched] = logw[touched] - rho_f * np.log1p(deg[touched])
    return chosen


def _greedy_knapsack(instance: KnapsackInstance, rho, value_only: bool) -> np.ndarray:
    logv = np.log(instance.values)
    keys = logv if value_only else logv - float(rho) * np.log(instance.sizes)
    order = np.argsort(-keys, kind="stable")
    chosen = np.zeros(instance.n, dtype=bool)
    resid = instance.capacity
    for i in order:
        if instance.sizes[i] <= resid:
            chosen[i] = True
            resid -= instance.sizes[i]
    return chosen


def run_greedy(family: ParamGreedyFamily, rho, instance):
    """Run one family member; returns (sorted solution ids, CostValue).

    Objects are assigned in nonincreasing score order, ties broken toward the
    smaller object id; assignments respect feasibility (independence or
    residual capacity).
    """
    if not family.contains(rho):
        raise ValueError(f"rho={rho} outside family interval {family.interval}")
    kind = family.assignment.kind
    if kind == KNAPSACK_PACK:
        if not isinstance(instance, KnapsackInstance):
            raise TypeError("knapsack family needs a KnapsackInstance")
        mask = _greedy_knapsack(instance, rho, family.scoring.kind == VALUE_ONLY)
        value = mask_cost(mask, instance.values)
    else:
        if not isinstance(instance, MwisInstance):
            raise TypeError("MWIS family needs an MwisInstance")
        if kind == MWIS_NONADAPTIVE:
            mask = _greedy_mwis_nonadaptive(instance, rho)
        else:
            mask = _greedy_mwis_adaptive(instance, rho)
        value = mask_cost(mask, instance.weights)
    solution = tuple(int(v) for v in np.flatnonzero(mask))
    return solution, CostValue(value, MAXIMIZE)


def greedy_cost(family: ParamGreedyFamily, rho, instance) -> float:
    return run_greedy(family, rho, instance)[1].value


# ---------------------------------------------------------------------------
# Vectorized evaluation over many parameter values (independent fast path)
# ---------------------------------------------------------------------------

_GRID_MAX_N = 63  # vertex bitmasks live in one uint64 lane


def mwis_grid_masks(instance: MwisInstance, rhos, adaptive: bool) -> np.ndarray:
    """Greedy solutions for every rho at once, shape (len(rhos), n) bool.

    Dense small-graph implementation (n <= 63), kept deliberately separate
    from `run_greedy` so the two can cross-check each other.
    """
    if instance.n > _GRID_MAX_N:
        raise ValueError(f"grid evaluator supports n <= {_GRID_MAX_N}")
    rhos = np.asarray(rhos, dtype=float).ravel()
    n, m = instance.n, rhos.size
    logw = np.log(instance.weights)
    if not adaptive:
        keys = logw[None, :] - rhos[:, None] * np.log1p(instance.degrees.astype(float))[None, :]
        order = np.argsort(-keys, axis=1, kind="stable")
        adj_bits = np.zeros(n, dtype=np.uint64)
        for u, v in instance.edges.tolist():
            adj_bits[u] |= np.uint64(1 << v)
            adj_bits[v] |= np.uint64(1 << u)
        vertex_bit = (np.uint64(1) << np.arange(n, dtype=np.uint64))
        taken_bits = np.zeros(m, dtype=np.uint64)
        chosen = np.zeros((m, n), dtype=bool)
        rows = np.arange(m)
        for pos in range(n):
            cur = order[:, pos]
            feasible = (taken_bits & adj_bits[cur]) == 0
            taken_bits |= np.where(feasible, vertex_bit[cur], np.uint64(0))
            chosen[rows[feasible], cur[feasible]] = True
        return chosen
    adj = instance.adjacency_matrix()
    adj_f = adj.astype(float)
    alive = np.ones((m, n), dtype=bool)
    deg = np.broadcast_to(instance.degrees.astype(float), (m, n)).copy()
    chosen = np.zeros((m, n), dtype=bool)
    rows = np.arange(m)
    for _ in range(n):
        active = alive.any(axis=1)
        if not active.any():
            break
        keys = np.where(alive, logw[None, :] - rhos[:, None] * np.log1p(deg), -np.inf)
        pick = np.argmax(keys, axis=1)
        pick_hot = np.zeros((m, n), dtype=bool)
        pick_hot[rows[active], pick[active]] = True
        chosen |= pick_hot
        removed = alive & (pick_hot | pick_hot @ adj)
        deg -= removed.astype(float) @ adj_f
        alive &= ~removed
    return chosen


def knapsack_grid_masks(instance: KnapsackInstance, rhos, value_only: bool = False) -> np.ndarray:
    rhos = np.asarray(rhos, dtype=float).ravel()
    logv = np.log(instance.values)
    if value_only:
        keys = np.broadcast_to(logv, (rhos.size, instance.n)).copy()
    else:
        keys = logv[None, :] - rhos[:, None] * np.log(instance.sizes)[None, :]
    order = np.argsort(-keys, axis=1, kind="stable")
    m = rhos.size
    resid = np.full(m, instance.capacity)
    chosen = np.zeros((m, instance.n), dtype=bool)
    rows = np.arange(m)
    for pos in range(instance.n):
        cur = order[:, pos]
        fits = instance.sizes[cur] <= resid
        resid -= np.where(fits, instance.sizes[cur], 0.0)
        chosen[rows[fits], cur[fits]] = True
    return chosen


def grid_masks(family: ParamGreedyFamily, rhos, instance) -> np.ndarray:
    if family.problem == "knapsack":
        return knapsack_grid_masks(instance, rhos, family.scoring.kind == VALUE_ONLY)
    return mwis_grid_masks(instance, rhos, family.assignment.kind == MWIS_ADAPTIVE)


def grid_costs(family: ParamGreedyFamily, rhos, instance) -> np.ndarray:
    masks = grid_masks(family, rhos, instance)
    payload = instance.values if family.problem == "knapsack" else instance.weights
    return np.where(masks, payload, 0.0).sum(axis=1)


# ---------------------------------------------------------------------------
# Breakpoints and constructive ERM
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BreakpointSet:
    """Parameter values where some pair of object scores crosses, plus probes.

    `points` are strictly inside the open interval; `representatives` hold one
    parameter per closed subinterval: the interval endpoints for the two
    boundary subintervals and midpoints elsewhere.  Every greedy member of the
    family behaves identically throughout each open subinterval on the sample
    set the breakpoints were computed from.
    """

    points: np.ndarray
    representatives: np.ndarray
    interval: tuple[float, float]

    @property
    def count(self) -> int:
        return int(self.points.size)


def _attribute_pool(family: ParamGreedyFamily, samples) -> tuple[np.ndarray, np.ndarray]:
    """All (primary, denominator-base) attribute pairs reachable on the samples.

    For the adaptive MWIS rule every vertex contributes one pair per residual
    degree 0..deg(v): a superset of what executions can reach, which is sound
    for crossing enumeration.
    """
    primaries, bases = [], []
    for x in samples:
        if family.problem == "knapsack":
            primaries.append(x.values)
            bases.append(np.ones_like(x.values) if family.scoring.kind == VALUE_ONLY else x.sizes)
        elif family.assignment.kind == MWIS_NONADAPTIVE:
            primaries.append(x.weights)
            bases.append(1.0 + x.degrees.astype(float))
        else:
            reps = x.degrees.astype(np.int64) + 1
            primaries.append(np.repeat(x.weights, reps))
            parts = [1.0 + np.arange(d + 1, dtype=float) for d in x.degrees]
            bases.append(np.concatenate(parts))
    pool = np.stack([np.concatenate(primaries), np.concatenate(bases)], axis=1)
    pool = np.unique(pool, axis=0)
    return pool[:, 0], pool[:, 1]


def _merge_close(points: np.ndarray, rtol: float = _BREAKPOINT_MERGE_RTOL) -> np.ndarray:
    if points.size == 0:
        return points
    merged = [points[0]]
    for p in points[1:]:
        if p - merged[-1] > rtol * max(1.0, abs(p)):
            merged.append(p)
    return np.asarray(merged)


def breakpoints(family: ParamGreedyFamily, samples) -> BreakpointSet:
    """Closed-form crossing points of all attribute score curves on the samples.

    For score p / d^rho the curves of two attributes cross where
    rho = ln(p1/p2) / ln(d1/d2), defined only when d1 != d2; equal attributes
    never cross (ties are broken lexicographically, so the comparison outcome
    is constant).  Roots are kept strictly inside the open interval; roots
    closer to an interval endpoint than float noise can resolve are treated as
    boundary crossings, which the endpoint representatives cover exactly.
    """
    if len(samples) == 0:
        raise ValueError("need at least one sample")
    lo, hi = family.interval
    inner_lo = lo + 1e-9 * max(1.0, abs(lo))
    inner_hi = hi - 1e-9 * max(1.0, abs(hi))
    P, D = _attribute_pool(family, samples)
    logp, logd = np.log(P), np.log(D)
    roots = []
    block = 1024
    for start in range(0, logp.size, block):
        stop = min(start + block, logp.size)
        dnum = logp[start:stop, None] - logp[None, :]
        dden = logd[start:stop, None] - logd[None, :]
        with np.errstate(divide="ignore", invalid="ignore"):
            r = dnum / dden
        valid = (dden != 0) & np.isfinite(r) & (r > inner_lo) & (r < inner_hi)
        # Only pairs (i, j) with i < j; the block covers rows start..stop.
        cols = np.arange(logp.size)[None, :]
        rows = np.arange(start, stop)[:, None]
        valid &= cols > rows
        roots.append(r[valid])
    points = np.unique(np.concatenate(roots)) if roots else np.empty(0)
    points = _merge_close(points)
    if points.size == 0:
        reps = np.asarray([(lo + hi) / 2.0])
    else:
        mids = (points[:-1] + points[1:]) / 2.0
        reps = np.concatenate([[lo], mids, [hi]])
    return BreakpointSet(points, reps, (lo, hi))


def _as_finite(family: ParamGreedyFamily, rhos) -> FiniteFamily:
    return FiniteFamily(
        tuple(float(r) for r in rhos),
        lambda rho, x: greedy_cost(family, rho, x),
        orientation=MAXIMIZE,
    )


def erm_breakpoint(family: ParamGreedyFamily, samples, holdout=None, bset: BreakpointSet | None = None):
    """Best single parameter on the samples via subinterval representatives.

    Returns (rho_star, ErrorReport); ties break toward the smaller rho.
    """
    if bset is None:
        bset = breakpoints(family, samples)
    report = erm_finite(_as_finite(family, bset.representatives), samples, holdout)
    return report.chosen, report


def best_of_q(family: ParamGreedyFamily, rhos, instance) -> CostValue:
    """Best solution value over q greedy runs with the given parameters."""
    if len(rhos) == 0:
        raise ValueError("need at least one rho")
    return CostValue(max(greedy_cost(family, r, instance) for r in rhos), MAXIMIZE)


def erm_best_of_q(family: ParamGreedyFamily, samples, q: int, holdout=None, q_cap: int = 3):
    """Exhaustive ERM over q-subsets of the subinterval representatives.

    Returns (rho_tuple, ErrorReport).  `q` is capped to keep the subset
    enumeration tractable.
    """
    if not 1 <= q <= q_cap:
        raise ValueError(f"q must be in 1..{q_cap}")
    reps = breakpoints(family, samples).representatives
    combos = list(combinations(range(reps.size), q))

    def combo_means(instances) -> np.ndarray:
        per_rep = np.asarray([[greedy_cost(family, r, x) for x in instances] for r in reps])
        return np.asarray([per_rep[list(c)].max(axis=0).mean() for c in combos])

    means = combo_means(samples)
    best = int(np.argmax(means))
    chosen = tuple(float(reps[i]) for i in combos[best])
    if holdout is not None and len(holdout) > 0:
        hold = combo_means(holdout)
        err = abs(float(hold[best]) - float(hold.max()))
        return chosen, ErrorReport(chosen, float(means[best]), float(hold[best]), err)
    return chosen, ErrorReport(chosen, float(means[best]), float(means[best]), 0.0)


# ---------------------------------------------------------------------------
# Instance generators and file formats
# ---------------------------------------------------------------------------


def random_mwis_instance(n: int, edge_prob: float, rng: np.random.Generator,
                         weight_choices=None) -> MwisInstance:
    """Erdos-Renyi graph; weights uniform in (0, 1] or drawn from a palette."""
    iu = np.triu_indices(n, k=1)
    mask = rng.random(iu[0].size) < edge_prob
    edges = np.stack([iu[0][mask], iu[1][mask]], axis=1)
    if weight_choices is None:
        weights = rng.uniform(0.0, 1.0, size=n)
        weights[weights == 0.0] = 0.5
    else:
        weights = rng.choice(np.asarray(weight_choices, dtype=float), size=n, replace=False)
    return MwisInstance(n, edges, weights)


def random_knapsack_instance(n: int, rng: np.random.Generator,
                             value_choices=None, size_choices=None,
                             capacity_fraction: float = 0.5) -> KnapsackInstance:
    values = rng.choice(np.asarray(value_choices if value_choices is not None
                                   else np.arange(1, 13), dtype=float), size=n)
    sizes = rng.choice(np.asarray(size_choices if size_choices is not None
                                  else np.arange(1, 9), dtype=float), size=n)
    return KnapsackInstance(values, sizes, max(1.0, capacity_fraction * float(sizes.sum())))


def save_mwis(instance: MwisInstance, path: str) -> None:
    payload = {
        "n": instance.n,
        "edges": instance.edges.tolist(),
        "weights": instance.weights.tolist(),
    }
    if instance.exact_base is not None:
        payload["exact_base"] = instance.exact_base
        payload["exact_exponents"] = [str(e) for e in instance.exact_exponents]
    with open(path, "w") as fh:
        json.dump(payload, fh)


def mwis_from_dict(payload: dict) -> MwisInstance:
    exact_base = payload.get("exact_base")
    exponents = payload.get("exact_exponents")
    if exponents is not None:
        exponents = tuple(Fraction(e) for e in exponents)
    return MwisInstance(payload["n"], payload["edges"], payload["weights"],
                        exact_base=exact_base, exact_exponents=exponents)


def load_mwis(path: str) -> MwisInstance:
    with open(path) as fh:
        return mwis_from_dict(json.load(fh))


def save_knapsack(instance: KnapsackInstance, path: str) -> None:
    with open(path, "w") as fh:
        fh.write(knapsack_to_csv(instance))


def knapsack_to_csv(instance: KnapsackInstance) -> str:
    out = io.StringIO()
    out.write(f"capacity={instance.capacity!r}\n")
    writer = csv.writer(out)
    writer.writerow(["value", "size"])
    for v, s in zip(instance.values, instance.sizes):
        writer.writerow([repr(float(v)), repr(float(s))])
    return out.getvalue()


def load_knapsack(path: str) -> KnapsackInstance:
    with open(path) as fh:
        first = fh.readline().strip()
        if not first.startswith("capacity="):
            raise ValueError(f"{path}:1: expected 'capacity=<C>' header")
        capacity = float(first.split("=", 1)[1])
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["value", "size"]:
            raise ValueError(f"{path}:2: expected 'value,size' column header")
        values, sizes = [], []
        for lineno, row in enumerate(reader, start=3):
            if not row:
                continue
            if len(row) != 2:
                raise ValueError(f"{path}:{lineno}: expected two columns")
            values.append(float(row[0]))
            sizes.append(float(row[1]))
    return KnapsackInstance(values, sizes, capacity)
