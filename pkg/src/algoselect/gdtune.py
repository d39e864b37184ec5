"""Step-size selection for gradient descent with guaranteed per-step progress.

The algorithm family is plain gradient descent z <- z - rho * grad f(z) with
the step size rho drawn from a closed interval.  Instances are diagonal
quadratics f(z) = 1/2 * sum(lambda_i * z_i^2), which are L-smooth and strongly
convex by construction and admit closed-form gradients.  Every generated
instance satisfies the guaranteed progress condition: a single step shrinks
||z|| by a factor of at least (1 - c) for every admissible step size.

Cost is the number of iterations until the stopping rule fires.  Although two
step sizes can differ, their iteration counts differ by at most 1 once they
are within the net spacing K of each other; `knet` builds that net and
`verify_lemmas` stress-tests the three inequalities this rests on:

1. single-step expansion is at most D(rho) = max(1, L*rho - 1),
2. two paths from one start drift at most (eta-rho) * D(rho)^j * L * Z / c
   after j steps,
3. iteration counts of rho and eta differ by at most 1 when eta - rho <= K.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .core import MINIMIZE, FiniteFamily, erm_finite

STOP_NORM = "norm"
STOP_GRAD = "grad"


class GuaranteedProgressError(RuntimeError):
    """A run violated the guaranteed progress contract (invalid family/instance pair)."""


@dataclass(frozen=True)
class GdFamily:
    """Gradient descent with step size in [rho_l, rho_u] on a restricted class.

    The stopping rule compares ||z|| to the tolerance `nu` (this is the
    variant the iteration-count guarantees are proved for; a gradient-norm
    rule is available via `run_gd(..., stop="grad")` without those
    guarantees).  `c` is the guaranteed progress factor and must satisfy
    c <= rho_l * m_sc so that the built-in function class makes progress at
    the smallest admissible step size.
    """

    rho_l: float
    rho_u: float
    L: float
    m_sc: float
    c: float
    Z: float
    nu: float

    def __post_init__(self) -> None:
        if not 0 < self.rho_l <= self.rho_u:
            raise ValueError("need 0 < rho_l <= rho_u")
        if not 0 < self.m_sc <= self.L:
            raise ValueError("need 0 < m_sc <= L")
        if not 0 < self.c < 1:
            raise ValueError("need c in (0, 1)")
        if self.c > self.rho_l * self.m_sc + 1e-15:
            raise ValueError(
                f"progress factor c={self.c} exceeds rho_l * m_sc = {self.rho_l * self.m_sc}; "
                "the smallest step could not guarantee it"
            )
        if not 0 < self.nu < self.Z:
            raise ValueError("need 0 < nu < Z")

    @property
    def H(self) -> float:
        """Iteration bound: progress factor (1-c) per step from norm Z down to nu."""
        return math.log(self.nu / self.Z) / math.log(1.0 - self.c)

    @property
    def iteration_cap(self) -> int:
        return math.ceil(self.H)

    def D(self, rho: float) -> float:
        """Single-step Lipschitz bound of the step map at step size rho."""
        return max(1.0, self.L * rho - 1.0)

    @property
    def K(self) -> float:
        """Net spacing below which iteration counts differ by at most 1."""
        return self.nu * self.c**2 / (self.L * self.Z) * self.D(self.rho_u) ** (-self.H)

    def contains(self, rho: float) -> bool:
        return self.rho_l <= rho <= self.rho_u

    def safe_lambda_range(self) -> tuple[float, float]:
        """Eigenvalue range for which every admissible step size makes progress."""
        hi = min(self.L, (2.0 - self.c) / self.rho_u)
        if hi < self.m_sc:
            raise ValueError("no eigenvalue in [m_sc, L] makes guaranteed progress at rho_u")
        return self.m_sc, hi

    def check_instance(self, instance: GdInstance) -> None:
        lam = instance.lambdas
        if (lam < self.m_sc - 1e-12).any() or (lam > self.L + 1e-12).any():
            raise ValueError("instance eigenvalues outside [m_sc, L]")
        if np.linalg.norm(instance.z0) > self.Z * (1 + 1e-12):
            raise ValueError("initial point norm exceeds Z")


@dataclass(frozen=True, eq=False)
class GdInstance:
    """Diagonal quadratic objective and a start point: f(z) = 1/2 sum(lambda_i z_i^2)."""

    lambdas: np.ndarray
    z0: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "lambdas", np.asarray(self.lambdas, dtype=float))
        object.__setattr__(self, "z0", np.asarray(self.z0, dtype=float))
        if self.lambdas.shape != self.z0.shape or self.lambdas.ndim != 1:
            raise ValueError("lambdas and z0 must be equal-length vectors")
        if (self.lambdas <= 0).any() or not np.isfinite(self.lambdas).all():
            raise ValueError("eigenvalues must be positive and finite")
        if not np.isfinite(self.z0).all():
            raise ValueError("z0 must be finite")

    def gradient(self, z: np.ndarray) -> np.ndarray:
        return self.lambdas * z


def step_map(rho: float, z: np.ndarray, instance: GdInstance) -> np.ndarray:
    """One gradient step z - rho * grad f(z); pure, used directly by the verifiers."""
    z = np.asarray(z, dtype=float)
    return z - rho * instance.gradient(z)


def random_instance(family: GdFamily, dim: int, rng: np.random.Generator) -> GdInstance:
    """Instance satisfying guaranteed progress for every rho in the family interval.

    Eigenvalues are drawn from [m_sc, min(L, (2-c)/rho_u)]; the upper clip is
    what makes |1 - rho*lambda| <= 1 - c hold across the whole interval.  The
    start norm is uniform in (nu, Z] so runs take at least one step.
    """
    lo, hi = family.safe_lambda_range()
    lambdas = rng.uniform(lo, hi, size=dim)
    direction = rng.normal(size=dim)
    direction /= np.linalg.norm(direction)
    norm = rng.uniform(family.nu, family.Z)
    return GdInstance(lambdas, direction * norm)


def _stop_measure(z: np.ndarray, instance: GdInstance, stop: str) -> float:
    if stop == STOP_NORM:
        return float(np.linalg.norm(z))
    return float(np.linalg.norm(instance.gradient(z)))


def _cap_for(family: GdFamily, stop: str) -> int:
    if stop == STOP_NORM:
        return family.iteration_cap
    # ||grad f(z)|| <= L ||z||, so the gradient rule fires at most
    # ln(L) / -ln(1-c) steps later than the norm rule.
    extra = math.log(max(family.L, 1.0)) / -math.log(1.0 - family.c)
    return math.ceil(family.H + extra)


def run_gd(family: GdFamily, rho: float, instance: GdInstance, stop: str = STOP_NORM) -> int:
    """Iteration count of gradient descent at step size rho.

    Stops when the stop measure (||z|| by default) falls to nu.  Per-step
    guaranteed progress is asserted; exceeding the iteration cap or failing to
    make progress signals an invalid family/instance pairing, not a normal
    outcome.
    """
    if stop not in (STOP_NORM, STOP_GRAD):
        raise ValueError(f"unknown stop rule: {stop!r}")
    if not family.contains(rho):
        raise ValueError(f"rho={rho} outside [{family.rho_l}, {family.rho_u}]")
    family.check_instance(instance)
    z = instance.z0
    cap = _cap_for(family, stop)
    steps = 0
    while _stop_measure(z, instance, stop) > family.nu:
        if steps >= cap:
            raise GuaranteedProgressError(
                f"no convergence within {cap} iterations; guaranteed progress violated"
            )
        z_next = step_map(rho, z, instance)
        if np.linalg.norm(z_next) > (1.0 - family.c) * np.linalg.norm(z) * (1 + 1e-12):
            raise GuaranteedProgressError(
                f"step at rho={rho} shrank ||z|| by less than the guaranteed factor {1 - family.c}"
            )
        z = z_next
        steps += 1
    return steps


def knet(family: GdFamily, max_points: int = 10**7) -> np.ndarray:
    """The K-net: integer multiples of K inside the interval plus both endpoints.

    Within one net cell every step size has an iteration count within 1 of the
    cell's net points, so exhaustive search over the net is a faithful proxy
    for the continuum.
    """
    K = family.K
    k_lo = math.ceil(family.rho_l / K - 1e-9)
    k_hi = math.floor(family.rho_u / K + 1e-9)
    count = max(0, k_hi - k_lo + 1)
    if count > max_points:
        raise ValueError(
            f"net would hold {count} points (> {max_points}); rescale nu, c, or the interval"
        )
    multiples = np.arange(k_lo, k_hi + 1, dtype=float) * K
    multiples = np.clip(multiples, family.rho_l, family.rho_u)
    points = np.concatenate([[family.rho_l], multiples, [family.rho_u]])
    points = np.sort(points)
    merged = [points[0]]
    for p in points[1:]:
        if p - merged[-1] > 1e-9 * max(1.0, abs(p)):
            merged.append(p)
    return np.asarray(merged)


def erm_stepsize(family: GdFamily, samples: Sequence[GdInstance], net=None, holdout=None):
    """Exhaustive ERM over the net, minimizing mean iteration count.

    Returns (rho_star, ErrorReport); ties break toward the smaller step size.
    """
    points = knet(family) if net is None else np.asarray(net, dtype=float)
    if points.size == 0:
        raise ValueError("empty net")
    finite = FiniteFamily(
        tuple(float(r) for r in points),
        lambda rho, x: float(run_gd(family, rho, x)),
        orientation=MINIMIZE,
        H=float(family.iteration_cap),
    )
    report = erm_finite(finite, samples, holdout)
    return report.chosen, report


@dataclass(frozen=True)
class DriftBound:
    """Worst-case distance of the rho- and eta-paths after `steps` steps."""

    rho: float
    eta: float
    steps: int
    value: float


def drift_bound(family: GdFamily, rho: float, eta: float, steps: int) -> DriftBound:
    if eta < rho:
        raise ValueError("need rho <= eta")
    value = (eta - rho) * family.D(rho) ** steps * family.L * family.Z / family.c
    return DriftBound(rho, eta, steps, value)


@dataclass
class LemmaReport:
    """Outcome of randomized verification of the three step-size inequalities.

    Ratios are max observed left-hand side over right-hand side (1.0 means the
    bound was met with equality somewhere); `violations` holds serialized
    counterexamples and is empty on success.
    """

    trials: int
    max_single_step_ratio: float
    max_drift_ratio: float
    max_cost_gap: int
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def _iterations_from_norms(norms: list[float], nu: float) -> int:
    for j, value in enumerate(norms):
        if value <= nu:
            return j
    return len(norms) - 1


def verify_lemmas(family: GdFamily, trials: int, seed: int = 0, max_dim: int = 4) -> LemmaReport:
    """Random search for violations of the Lipschitz / drift / cost-gap bounds.

    Each trial draws an instance, two points, and a step-size pair
    rho <= eta <= rho + K, then checks all three inequalities along full
    trajectories.  Any violation is reported with its inputs serialized.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    rng = np.random.default_rng(seed)
    report = LemmaReport(trials, 0.0, 0.0, 0)
    rtol = 1e-9
    cap = family.iteration_cap
    for trial in range(trials):
        dim = int(rng.integers(1, max_dim + 1))
        inst = random_instance(family, dim, rng)
        rho = float(rng.uniform(family.rho_l, family.rho_u))
        eta = float(min(rho + rng.uniform(0.0, 1.0) * family.K, family.rho_u))

        def flag(kind, **detail):
            report.violations.append(
                {"kind": kind, "trial": trial, "rho": rho, "eta": eta,
                 "lambdas": inst.lambdas.tolist(), "z0": inst.z0.tolist()} | detail
            )

        # (a) single-step Lipschitz bound at rho, for two random points.
        w = rng.normal(size=dim)
        w *= rng.uniform(0, family.Z) / np.linalg.norm(w)
        y = rng.normal(size=dim)
        y *= rng.uniform(0, family.Z) / np.linalg.norm(y)
        lhs = float(np.linalg.norm(step_map(rho, w, inst) - step_map(rho, y, inst)))
        rhs = family.D(rho) * float(np.linalg.norm(w - y))
        if rhs > 0:
            report.max_single_step_ratio = max(report.max_single_step_ratio, lhs / rhs)
        if lhs > rhs * (1 + rtol) + 1e-15:
            flag("single-step", lhs=lhs, bound=rhs)

        # (b) + (c): run both trajectories to the cap, tracking drift and norms.
        z_r, z_e = inst.z0, inst.z0
        norms_r = [float(np.linalg.norm(z_r))]
        norms_e = norms_r.copy()
        for j in range(1, cap + 1):
            z_r = step_map(rho, z_r, inst)
            z_e = step_map(eta, z_e, inst)
            norms_r.append(float(np.linalg.norm(z_r)))
            norms_e.append(float(np.linalg.norm(z_e)))
            drift = float(np.linalg.norm(z_r - z_e))
            bound = drift_bound(family, rho, eta, j).value
            if bound > 0:
                report.max_drift_ratio = max(report.max_drift_ratio, drift / bound)
            if drift > bound * (1 + rtol) + 1e-15:
                flag("drift", steps=j, drift=drift, bound=bound)
        cost_r = _iterations_from_norms(norms_r, family.nu)
        cost_e = _iterations_from_norms(norms_e, family.nu)
        gap = abs(cost_r - cost_e)
        report.max_cost_gap = max(report.max_cost_gap, gap)
        if gap > 1:
            flag("cost-gap", cost_rho=cost_r, cost_eta=cost_e)
        if trial % 100 == 0:
            # Spot-check that the trajectory-derived counts match run_gd.
            if cost_r != run_gd(family, rho, inst) or cost_e != run_gd(family, eta, inst):
                flag("cost-accounting", cost_rho=cost_r, cost_eta=cost_e)
    return report


def save_gd_instance(instance: GdInstance, path: str) -> None:
    with open(path, "w") as fh:
        json.dump({"lambdas": instance.lambdas.tolist(), "z0": instance.z0.tolist()}, fh)


def load_gd_instance(path: str) -> GdInstance:
    with open(path) as fh:
        payload = json.load(fh)
    return GdInstance(payload["lambdas"], payload["z0"])
