"""Online selection of greedy MWIS heuristics: regret, adversaries, smoothing.

The learner picks a parameter rho each round, then observes the cost of every
net point on the revealed instance (full information).  Two instance models
are provided:

* `adversary_sequence` draws nested parameter windows of width n^-j and emits
  one three-layer graph per window; only parameters inside the final window
  score well at every step.  Window endpoints are exact rationals, so the
  construction stays sound long after the widths drop below float resolution;
  the graphs carry exact weight exponents for the same reason.
* `smooth_sequence` draws vertex weights from bounded-density distributions
  over [0, 1] on arbitrary graphs.  Costs are then piecewise constant in rho
  with pieces delimited by the closed-form `transition_points`, which is what
  makes a finite net competitive with the whole continuum.

Costs are normalized to [0, 1] (smoothed instances divide by total vertex
weight, which preserves the per-instance ranking of parameters).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterator

import numpy as np

from .greedy import MwisInstance, grid_costs, mwis_family
from .utils import labeled_rng


# ---------------------------------------------------------------------------
# Hard instances: a parameter window (r, s] scores 1, everything else o(1)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HardInstanceParams:
    """Three-layer graph sizes and weights derived from (m, r, s).

    Layer sizes are m^2-2 (hubs), m^3-1 (mass), m^2+m+1 (stars); hub weight
    t*m^r, mass weight t, star weight t*m^-s with t = 1/(m^3-1), so the mass
    layer's total weight is exactly 1.  Greedy selection returns exactly the
    mass layer iff rho lies in (r, s].
    """

    m: int
    r: Fraction
    s: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "r", Fraction(self.r))
        object.__setattr__(self, "s", Fraction(self.s))
        if self.m < 3:
            raise ValueError("need m >= 3")
        if not 0 < self.r < self.s < 1:
            raise ValueError("need 0 < r < s < 1")

    @property
    def size_a(self) -> int:
        return self.m**2 - 2

    @property
    def size_b(self) -> int:
        return self.m**3 - 1

    @property
    def size_c(self) -> int:
        return self.m**2 + self.m + 1

    @property
    def n(self) -> int:
        return self.size_a + self.size_b + self.size_c

    @property
    def t(self) -> float:
        return 1.0 / self.size_b

    @property
    def weight_a(self) -> float:
        return self.t * self.m ** float(self.r)

    @property
    def weight_c(self) -> float:
        return self.t * self.m ** -float(self.s)

    def inside_cost(self) -> float:
        """Total mass-layer weight as the float sum a greedy run produces."""
        return float(np.full(self.size_b, self.t).sum())

    def outside_cost(self) -> float:
        """Hub plus star total weight: the value of any parameter outside (r, s]."""
        return self.size_a * self.weight_a + self.size_c * self.weight_c

    def cost_at(self, rho) -> float:
        """Closed-form greedy value; exact window comparisons via rationals.

        At rho == r the hub/mass score tie breaks toward the lower-id hubs
        (outside behavior); at rho == s the mass/star tie breaks toward the
        mass layer (inside behavior).  Cross-checked against `run_greedy` in
        the float-resolvable regime.
        """
        rho = Fraction(rho)
        return self.inside_cost() if self.r < rho <= self.s else self.outside_cost()


def build_hard_instance(params: HardInstanceParams) -> MwisInstance:
    """Materialize the graph: hubs complete to the mass layer, stars of size m-1.

    Vertex order is hubs, then mass, then stars.  The instance carries exact
    weight exponents in base m so greedy runs with Fraction parameters compare
    scores exactly.
    """
    a, b, c, m = params.size_a, params.size_b, params.size_c, params.m
    ids_a = np.arange(a, dtype=np.int64)
    ids_b = a + np.arange(b, dtype=np.int64)
    ids_c = a + b + np.arange(c, dtype=np.int64)
    hub_edges = np.stack([np.repeat(ids_a, b), np.tile(ids_b, a)], axis=1)
    star_edges = np.stack([ids_b, ids_c[np.arange(b) // (m - 1)]], axis=1)
    edges = np.concatenate([hub_edges, star_edges])
    weights = np.concatenate([
        np.full(a, params.weight_a),
        np.full(b, params.t),
        np.full(c, params.weight_c),
    ])
    exponents = (params.r,) * a + (Fraction(0),) * b + (-params.s,) * c
    return MwisInstance(params.n, edges, weights, exact_base=m, exact_exponents=exponents)


def largest_hard_size(n_budget: int) -> int:
    """Largest m >= 3 whose graph fits in n_budget vertices (at least half of it)."""
    m = 3
    while (m + 1) ** 3 + 2 * (m + 1) ** 2 + (m + 1) <= n_budget:
        m += 1
    size = m**3 + 2 * m**2 + m
    if size > n_budget:
        raise ValueError(f"budget {n_budget} below the minimum construction size {size}")
    if 2 * size < n_budget:
        raise ValueError(f"budget {n_budget} not realizable within a factor of 2 (got {size})")
    return m


def adversary_sequence(n_budget: int, T: int, seed: int) -> list[HardInstanceParams]:
    """Nested parameter windows, width n^-j at step j, drawn uniformly inside
    the previous window.  Endpoints are exact rationals, so nesting is sound
    for any horizon; instances are descriptors (`build_hard_instance`
    materializes the graphs on demand).
    """
    if T < 1:
        raise ValueError("need T >= 1")
    m = largest_hard_size(n_budget)
    n = (m**2 - 2) + (m**3 - 1) + (m**2 + m + 1)  # actual vertex count
    rng = labeled_rng(seed, "adversary-intervals")
    lo, hi = Fraction(0), Fraction(1)
    out = []
    for j in range(1, T + 1):
        width = Fraction(1, n**j)
        u = Fraction(int(rng.integers(1, 2**53)), 2**53)
        lo = lo + u * ((hi - lo) - width)
        hi = lo + width
        out.append(HardInstanceParams(m, lo, hi))
    return out


# ---------------------------------------------------------------------------
# Smoothed instances
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class UniformUnion:
    """Uniform distribution over a union of disjoint subintervals of [0, 1]."""

    intervals: tuple

    def __post_init__(self) -> None:
        ivs = tuple((float(lo), float(hi)) for lo, hi in self.intervals)
        object.__setattr__(self, "intervals", ivs)
        if not ivs:
            raise ValueError("need at least one interval")
        last = -1.0
        for lo, hi in ivs:
            if not 0.0 <= lo < hi <= 1.0:
                raise ValueError(f"bad interval ({lo}, {hi}); need 0 <= lo < hi <= 1")
            if lo < last:
                raise ValueError("intervals must be disjoint and sorted")
            last = hi

    @property
    def total_length(self) -> float:
        return sum(hi - lo for lo, hi in self.intervals)

    @property
    def density(self) -> float:
        return 1.0 / self.total_length

    def sample(self, rng: np.random.Generator) -> float:
        u = rng.uniform(0.0, self.total_length)
        for lo, hi in self.intervals:
            if u <= hi - lo:
                return lo + u
            u -= hi - lo
        return self.intervals[-1][1]


@dataclass(frozen=True)
class SmoothSpec:
    """Per-vertex weight distributions with density at most 1/sigma."""

    sigma: float
    distributions: tuple

    def __post_init__(self) -> None:
        if not 0 < self.sigma < 1:
            raise ValueError("sigma must be in (0, 1)")
        dists = tuple(self.distributions)
        object.__setattr__(self, "distributions", dists)
        if not dists:
            raise ValueError("need at least one vertex distribution")
        for d in dists:
            if d.density > 1.0 / self.sigma + 1e-12:
                raise ValueError(
                    f"distribution density {d.density} exceeds the bound 1/sigma = {1 / self.sigma}"
                )

    @property
    def n(self) -> int:
        return len(self.distributions)


def uniform_smooth_spec(n: int, sigma: float, intervals=((0.0, 1.0),)) -> SmoothSpec:
    return SmoothSpec(sigma, (UniformUnion(tuple(intervals)),) * n)


def erdos_renyi_generator(n: int, p: float) -> Callable[[np.random.Generator], np.ndarray]:
    iu = np.triu_indices(n, k=1)

    def gen(rng: np.random.Generator) -> np.ndarray:
        mask = rng.random(iu[0].size) < p
        return np.stack([iu[0][mask], iu[1][mask]], axis=1)

    return gen


def smooth_stream(spec: SmoothSpec, graph_generator, T: int, seed: int) -> Iterator[MwisInstance]:
    rng = labeled_rng(seed, "smooth-sequence")
    for _ in range(T):
        edges = graph_generator(rng)
        weights = np.empty(spec.n)
        for v, dist in enumerate(spec.distributions):
            w = dist.sample(rng)
            while w <= 0.0:  # probability-zero corner of a closed interval at 0
                w = dist.sample(rng)
            weights[v] = w
        yield MwisInstance(spec.n, edges, weights)


def smooth_sequence(spec: SmoothSpec, graph_generator, T: int, seed: int) -> list[MwisInstance]:
    """Materialized `smooth_stream`; identical seeds give identical sequences."""
    return list(smooth_stream(spec, graph_generator, T, seed))


# ---------------------------------------------------------------------------
# Transition points
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _canonical_denominators(n: int) -> tuple:
    """Distinct values of ln(k1) - ln(k2) over k1 != k2 in {2..n}, canonicalized.

    Ratios are reduced before taking logs so mathematically equal
    denominators are bitwise equal, which keeps deduplication exact.
    """
    seen = {}
    for k1 in range(2, n + 1):
        for k2 in range(2, n + 1):
            if k1 == k2:
                continue
            g = math.gcd(k1, k2)
            key = (k1 // g, k2 // g)
            if key not in seen:
                seen[key] = math.log(key[0]) - math.log(key[1])
    return tuple(sorted(set(seen.values())))


def transition_points(instance: MwisInstance) -> np.ndarray:
    """Every parameter in [0, 1] where two score curves w / k^rho can cross.

    The returned set is a superset of the parameters at which the greedy
    output actually changes, for both degree variants.  Weights must be
    distinct and positive (almost sure under smoothing).
    """
    w = instance.weights
    if np.unique(w).size != w.size:
        raise ValueError("transition points require distinct vertex weights")
    if instance.n < 2:
        return np.empty(0)
    denoms = np.asarray(_canonical_denominators(instance.n))
    if denoms.size == 0:
        return np.empty(0)
    logw = np.log(w)
    iu = np.triu_indices(instance.n, k=1)
    dlogw = logw[iu[0]] - logw[iu[1]]
    roots = (dlogw[:, None] / denoms[None, :]).ravel()
    roots = roots[(roots >= 0.0) & (roots <= 1.0)]
    return np.unique(roots)


def min_pairwise_gap(points: np.ndarray) -> float:
    pts = np.sort(np.asarray(points, dtype=float))
    if pts.size < 2:
        return math.inf
    return float(np.diff(pts).min())


def theoretical_m(n: int, sigma: float, d_exp: int) -> int:
    return math.ceil(n**d_exp * math.log(1.0 / sigma))


def theoretical_q(n: int, sigma: float, d_exp: int, m: int | None = None) -> float:
    if m is None:
        m = theoretical_m(n, sigma, d_exp)
    return 1.0 / (n**d_exp * 4.0 * (1.0 / sigma) * m**2 * n**8 * math.log(n))


def collision_probability_bound(n: int, sigma: float, d_exp: int, q: float | None = None,
                                m: int | None = None) -> float:
    """Upper bound on the chance that two transition points land within q."""
    if m is None:
        m = theoretical_m(n, sigma, d_exp)
    if q is None:
        q = theoretical_q(n, sigma, d_exp, m)
    return 4.0 * q * (1.0 / sigma) * m**2 * n**8 * math.log(n)


# ---------------------------------------------------------------------------
# Multiplicative-weights learner (Hedge with gains)
# ---------------------------------------------------------------------------


class HedgeLearner:
    """Full-information exponential weights over a finite net of parameters.

    Gains in [0, 1]; update multiplies each weight by exp(eta * gain).
    Weights are kept in log space and renormalized, so they stay positive and
    finite at any horizon.
    """

    def __init__(self, net, T: int | None = None, eta="auto"):
        self.net = np.asarray(net, dtype=float)
        if self.net.size == 0:
            raise ValueError("empty net")
        if eta == "auto":
            if T is None or T < 1:
                raise ValueError("auto eta needs the horizon T")
            eta = math.sqrt(8.0 * math.log(max(self.net.size, 2)) / T)
        if eta <= 0:
            raise ValueError("eta must be positive")
        self.eta = float(eta)
        self._log_w = np.zeros(self.net.size)

    def probabilities(self) -> np.ndarray:
        shifted = self._log_w - self._log_w.max()
        w = np.exp(shifted)
        return w / w.sum()

    def sample(self, rng: np.random.Generator) -> int:
        p = self.probabilities()
        return int(np.searchsorted(np.cumsum(p), rng.random(), side="right").clip(0, p.size - 1))

    def update(self, gains: np.ndarray) -> None:
        gains = np.asarray(gains, dtype=float)
        if gains.shape != self._log_w.shape:
            raise ValueError("one gain per net point required")
        self._log_w += self.eta * gains
        self._log_w -= self._log_w.max()


def mw_learner(net, T: int | None = None, eta="auto") -> HedgeLearner:
    return HedgeLearner(net, T, eta)


# ---------------------------------------------------------------------------
# Regret traces and online runs
# ---------------------------------------------------------------------------


@dataclass
class RegretTrace:
    """Per-step record of an online run plus two hindsight comparators.

    `best_net_*` is the best fixed net point; `best_ref_*` is the reference
    comparator (best parameter over the union of per-instance transition
    points for smoothed runs, the surviving-window optimum for adversarial
    runs).  Average regret is (comparator total - collected total) / T.
    """

    net: np.ndarray
    chosen_rho: np.ndarray
    costs: np.ndarray
    cum_cost: np.ndarray
    cum_best: np.ndarray
    best_net_rho: float
    best_net_total: float
    best_ref_rho: float
    best_ref_total: float
    q_theoretical: float | None = None
    min_comparator_gap: float | None = None

    @property
    def T(self) -> int:
        return int(self.costs.size)

    @property
    def avg_regret(self) -> float:
        return (self.best_net_total - float(self.cum_cost[-1])) / self.T

    @property
    def avg_regret_ref(self) -> float:
        return (self.best_ref_total - float(self.cum_cost[-1])) / self.T

    def to_csv(self) -> str:
        lines = ["step,chosen_rho,cost,cum_cost,cum_best,avg_regret"]
        for i in range(self.T):
            regret = (self.cum_best[i] - self.cum_cost[i]) / (i + 1)
            row = (self.chosen_rho[i], self.costs[i], self.cum_cost[i], self.cum_best[i], regret)
            lines.append(f"{i + 1}," + ",".join(repr(float(v)) for v in row))
        return "\n".join(lines) + "\n"


def _piece_costs(instance: MwisInstance, tau: np.ndarray, family) -> np.ndarray:
    """Greedy value on each open interval between consecutive transition points,
    normalized by total vertex weight so costs lie in [0, 1]."""
    grid = np.concatenate([[0.0], tau, [1.0]])
    reps = (grid[:-1] + grid[1:]) / 2.0
    return grid_costs(family, reps, instance) / instance.total_weight()


def run_smoothed_online(
    spec: SmoothSpec,
    graph_generator,
    T: int,
    d_exp: int,
    seed: int,
    net=None,
    net_cap: int = 10**7,
    eta="auto",
) -> RegretTrace:
    """Hedge over a parameter net against a smoothed instance sequence.

    With `net=None` the theoretical spacing q is used, which is astronomically
    fine for realistic sizes; pass an int for a practical uniform net of that
    many points.  The trace reports the theoretical q either way, plus the
    minimum gap among all observed transition points so q-collisions can be
    detected.
    """
    n = spec.n
    q = theoretical_q(n, spec.sigma, d_exp)
    if net is None:
        required = math.floor(1.0 / q) + 2
        if required > net_cap:
            raise ValueError(
                f"theoretical net needs {required} points (> cap {net_cap}); "
                "shrink n or d_exp, or pass a practical net size"
            )
        net_arr = np.unique(np.concatenate([np.arange(0.0, 1.0, q), [1.0]]))
    elif isinstance(net, int):
        net_arr = np.linspace(0.0, 1.0, net)
    else:
        net_arr = np.asarray(net, dtype=float)
    family = mwis_family(n)
    learner = HedgeLearner(net_arr, T, eta)
    rng_learner = labeled_rng(seed, "mw-learner")

    chosen_rho = np.empty(T)
    costs = np.empty(T)
    cum_cost = np.empty(T)
    cum_best = np.empty(T)
    net_totals = np.zeros(net_arr.size)
    step_functions = []
    min_gap = math.inf
    running = 0.0
    for t, inst in enumerate(smooth_stream(spec, graph_generator, T, seed)):
        tau = transition_points(inst)
        pieces = _piece_costs(inst, tau, family)
        step_functions.append((tau, pieces))
        if tau.size >= 2:
            min_gap = min(min_gap, float(np.diff(tau).min()))
        idx = learner.sample(rng_learner)
        gains = pieces[np.searchsorted(tau, net_arr, side="right")]
        learner.update(gains)
        net_totals += gains
        chosen_rho[t] = net_arr[idx]
        costs[t] = gains[idx]
        running += costs[t]
        cum_cost[t] = running
        cum_best[t] = net_totals.max()
    best_net_idx = int(np.argmax(net_totals))
    best_ref_rho, best_ref_total = _transition_comparator(step_functions, net_arr[best_net_idx])
    return RegretTrace(
        net=net_arr,
        chosen_rho=chosen_rho,
        costs=costs,
        cum_cost=cum_cost,
        cum_best=cum_best,
        best_net_rho=float(net_arr[best_net_idx]),
        best_net_total=float(net_totals[best_net_idx]),
        best_ref_rho=best_ref_rho,
        best_ref_total=best_ref_total,
        q_theoretical=q,
        min_comparator_gap=None if min_gap == math.inf else min_gap,
    )


def _transition_comparator(step_functions, net_best_rho: float, max_candidates: int = 256):
    """Best parameter over the union of all transition points (piece midpoints).

    A coarse pass over delta events ranks the union pieces; the leaders are
    then re-totaled by direct per-step evaluation in step order, which makes
    the result float-comparable with the net totals.
    """
    positions = [np.zeros(1)]
    deltas = [np.zeros(1)]
    for tau, pieces in step_functions:
        positions.append(np.concatenate([[0.0], tau]))
        deltas.append(np.concatenate([[pieces[0]], np.diff(pieces)]))
    pos = np.concatenate(positions)
    del_ = np.concatenate(deltas)
    order = np.argsort(pos, kind="stable")
    pos, del_ = pos[order], del_[order]
    totals = np.cumsum(del_)
    top = totals.max()
    candidate_pos = pos[totals >= top - 1e-9]
    if candidate_pos.size > max_candidates:
        candidate_pos = candidate_pos[np.argsort(totals[totals >= top - 1e-9])[-max_candidates:]]
    # Evaluate at a point strictly inside the piece to the right of each event.
    all_pos = np.unique(pos)
    candidates = []
    for p in np.unique(candidate_pos):
        nxt = all_pos[np.searchsorted(all_pos, p, side="right"):]
        hi = nxt[0] if nxt.size else 1.0
        candidates.append(min((p + hi) / 2.0 if hi > p else p, 1.0))
    candidates.append(net_best_rho)
    candidates = np.unique(np.asarray(candidates))
    totals_direct = np.zeros(candidates.size)
    for tau, pieces in step_functions:
        totals_direct += pieces[np.searchsorted(tau, candidates, side="right")]
    best = int(np.argmax(totals_direct))
    return float(candidates[best]), float(totals_direct[best])


def run_adversary_online(n_budget: int, T: int, seed: int, net=None, eta="auto") -> RegretTrace:
    """Hedge over a uniform grid against the nested-window adversary.

    Per-step costs come from the closed-form window evaluation with exact
    rational containment tests.  The reference comparator is any parameter in
    the final window, which scores the inside value at every step.
    """
    params_list = adversary_sequence(n_budget, T, seed)
    n = params_list[0].n
    if net is None:
        net_fracs = [Fraction(k, n) for k in range(n + 1)]
    else:
        net_fracs = [Fraction(x) for x in net]
    net_arr = np.asarray([float(f) for f in net_fracs])
    learner = HedgeLearner(net_arr, T, eta)
    rng_learner = labeled_rng(seed, "mw-learner")

    chosen_rho = np.empty(T)
    costs = np.empty(T)
    cum_cost = np.empty(T)
    cum_best = np.empty(T)
    net_totals = np.zeros(net_arr.size)
    ref_total = 0.0
    running = 0.0
    uniform_grid = net is None
    grid_n = n
    for t, params in enumerate(params_list):
        inside = params.inside_cost()
        outside = params.outside_cost()
        gains = np.full(net_arr.size, outside)
        if uniform_grid:
            k_min = math.floor(params.r * grid_n) + 1
            k_max = math.floor(params.s * grid_n)
            if k_min <= k_max:
                gains[max(k_min, 0):min(k_max, grid_n) + 1] = inside
        else:
            for i, f in enumerate(net_fracs):
                if params.r < f <= params.s:
                    gains[i] = inside
        idx = learner.sample(rng_learner)
        learner.update(gains)
        net_totals += gains
        ref_total += inside
        chosen_rho[t] = net_arr[idx]
        costs[t] = gains[idx]
        running += costs[t]
        cum_cost[t] = running
        cum_best[t] = net_totals.max()
    final = params_list[-1]
    best_net_idx = int(np.argmax(net_totals))
    return RegretTrace(
        net=net_arr,
        chosen_rho=chosen_rho,
        costs=costs,
        cum_cost=cum_cost,
        cum_best=cum_best,
        best_net_rho=float(net_arr[best_net_idx]),
        best_net_total=float(net_totals[best_net_idx]),
        best_ref_rho=float((final.r + final.s) / 2),
        best_ref_total=ref_total,
    )


# ---------------------------------------------------------------------------
# Replay serialization (JSON lines, one instance per line)
# ---------------------------------------------------------------------------


def instance_to_jsonl(obj) -> str:
    if isinstance(obj, HardInstanceParams):
        return json.dumps({"kind": "hard", "m": obj.m, "r": str(obj.r), "s": str(obj.s)})
    if isinstance(obj, MwisInstance):
        return json.dumps({
            "kind": "mwis",
            "n": obj.n,
            "edges": obj.edges.tolist(),
            "weights": obj.weights.tolist(),
        })
    raise TypeError(f"cannot serialize {type(obj)!r}")


def instance_from_jsonl(line: str):
    payload = json.loads(line)
    if payload["kind"] == "hard":
        return HardInstanceParams(payload["m"], Fraction(payload["r"]), Fraction(payload["s"]))
    if payload["kind"] == "mwis":
        return MwisInstance(payload["n"], payload["edges"], payload["weights"])
    raise ValueError(f"unknown instance kind {payload['kind']!r}")
