"""Angle-schedule parameterizations and the variational optimization driver.

Two schemes: "full" optimizes all 2p angles independently; "linearized"
optimizes four numbers (slope and intercept for gamma and beta as functions
of k/p).
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .evolution import CircuitSimulator, CostKind
from .ising import IsingInstance
from .operators import alpha
from .powell import OptResult, PowellOptions, powell_minimize

SCHEMES = ("full", "linearized")

DEFAULT_DT = 1.0

# Cap on the geometric ladder of gamma-scale factors tried for linearized runs.
MAX_INIT_SCALE = 4096.0


@dataclass(frozen=True)
class AngleSchedule:
    """Per-layer cost angles gamma_k and mixer angles beta_k, k = 1..p."""

    gamma: tuple[float, ...]
    beta: tuple[float, ...]

    def __post_init__(self):
        if len(self.gamma) != len(self.beta):
            raise ValueError("gamma and beta must have equal length")
        if len(self.gamma) < 1:
            raise ValueError("schedules need at least one layer")
        object.__setattr__(self, "gamma", tuple(float(g) for g in self.gamma))
        object.__setattr__(self, "beta", tuple(float(b) for b in self.beta))

    @property
    def p(self) -> int:
        return len(self.gamma)

    def to_params(self) -> np.ndarray:
        return np.concatenate([self.gamma, self.beta])


@dataclass(frozen=True)
class LinearParams:
    """gamma_k = gamma_slope * k/p + gamma_intcp, and likewise for beta."""

    gamma_slope: float
    gamma_intcp: float
    beta_slope: float
    beta_intcp: float

    def to_vector(self) -> np.ndarray:
        return np.array(
            [self.gamma_slope, self.gamma_intcp, self.beta_slope, self.beta_intcp]
        )

    @classmethod
    def from_vector(cls, v) -> "LinearParams":
        if len(v) != 4:
            raise ValueError(f"linear parameters need 4 entries, got {len(v)}")
        return cls(*(float(x) for x in v))


def tqa_schedule(p: int, dt: float = DEFAULT_DT) -> AngleSchedule:
    """Trotterized-annealing ramp: gamma_k = (k/p) dt, beta_k = (1 - k/p) dt."""
    if p < 1:
        raise ValueError(f"depth must be >= 1, got {p}")
    if dt <= 0:
        raise ValueError(f"time step must be positive, got {dt}")
    k = np.arange(1, p + 1) / p
    return AngleSchedule(gamma=tuple(k * dt), beta=tuple((1.0 - k) * dt))


def tqa_linear_init(dt: float = DEFAULT_DT) -> LinearParams:
    """Linear parameters whose schedule equals tqa_schedule(p, dt) for any p."""
    return LinearParams(gamma_slope=dt, gamma_intcp=0.0, beta_slope=-dt, beta_intcp=dt)


def linear_to_schedule(lp: LinearParams, p: int) -> AngleSchedule:
    if p < 1:
        raise ValueError(f"depth must be >= 1, got {p}")
    k = np.arange(1, p + 1) / p
    return AngleSchedule(
        gamma=tuple(lp.gamma_slope * k + lp.gamma_intcp),
        beta=tuple(lp.beta_slope * k + lp.beta_intcp),
    )


def schedule_from_params(scheme: str, params, p: int) -> AngleSchedule:
    params = np.asarray(params, dtype=float)
    if scheme == "full":
        if params.size != 2 * p:
            raise ValueError(f"full scheme at depth {p} needs 2p={2*p} parameters, got {params.size}")
        return AngleSchedule(gamma=tuple(params[:p]), beta=tuple(params[p:]))
    if scheme == "linearized":
        return linear_to_schedule(LinearParams.from_vector(params), p)
    raise ValueError(f"unknown scheme {scheme!r}")


class QaoaProblem:
    """Objective callable binding an instance, cost kind, scheme, and depth.

    The underlying simulator (and any eigendecomposition) is built once and
    reused for every objective evaluation.
    """

    def __init__(self, inst: IsingInstance, kind: CostKind, scheme: str, p: int):
        if scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {scheme!r}")
        if p < 1:
            raise ValueError(f"depth must be >= 1, got {p}")
        self.inst = inst
        self.kind = kind
        self.scheme = scheme
        self.p = p
        self.simulator = CircuitSimulator(inst, kind)
        self._k = np.arange(1, p + 1) / p

    def split(self, params: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        params = np.asarray(params, dtype=float)
        if self.scheme == "full":
            if params.size != 2 * self.p:
                raise ValueError(
                    f"full scheme at depth {self.p} needs {2*self.p} parameters, got {params.size}"
                )
            return params[: self.p], params[self.p:]
        if params.size != 4:
            raise ValueError(f"linearized scheme needs 4 parameters, got {params.size}")
        return params[0] * self._k + params[1], params[2] * self._k + params[3]

    def objective(self, params) -> float:
        gammas, betas = self.split(params)
        return self.simulator.objective_angles(gammas, betas)

    def schedule(self, params) -> AngleSchedule:
        gammas, betas = self.split(params)
        return AngleSchedule(gamma=tuple(gammas), beta=tuple(betas))


def objective(inst: IsingInstance, kind: CostKind, scheme: str, params, p: int) -> float:
    """One-off objective evaluation (builds the simulator each call)."""
    return QaoaProblem(inst, kind, scheme, p).objective(np.asarray(params, dtype=float))


def linearized_init_battery(
    kind: CostKind, dt: float = DEFAULT_DT, alpha_value: float = 0.0
) -> list[LinearParams]:
    """Deterministic starting points for linearized runs.

    The ramp image of the annealing schedule, at a geometric ladder of
    cost-angle scales and two mixer-angle scales, in both mixer-sign
    conventions. The ladder compensates the exp(-alpha/T) suppression of
    the Gibbs-encoding cost operator; for the classical cost a single scale
    suffices. The plain annealing image comes first.
    """
    if kind.method == "sbo" and alpha_value > 0.0:
        scale_cap = min(float(np.exp(alpha_value / kind.temperature)), MAX_INIT_SCALE)
    else:
        scale_cap = 1.0
    kappas = [1.0]
    while kappas[-1] * 2.0 <= scale_cap:
        kappas.append(kappas[-1] * 2.0)
    inits = []
    for kappa in kappas:
        for mu in (1.0, 0.25):
            inits.append(LinearParams(kappa * dt, 0.0, -mu * dt, mu * dt))
            inits.append(LinearParams(kappa * dt, 0.0, mu * dt, -mu * dt))
    return inits


@dataclass
class QaoaOutcome:
    """Winning optimization run plus the measurement distribution it yields."""

    result: OptResult
    schedule: AngleSchedule
    distribution: np.ndarray
    total_evaluations: int
    n_starts: int


def optimize_qaoa(
    inst: IsingInstance,
    kind: CostKind,
    scheme: str,
    p: int,
    options: PowellOptions | None = None,
    dt: float = DEFAULT_DT,
    restarts: int = 0,
    seed: int = 0,
) -> QaoaOutcome:
    """Optimize the angles and return the best run's distribution.

    Full-scheme runs start from the annealing ramp. Linearized runs try the
    deterministic battery of ramp images and keep the best final objective;
    the 4-dimensional landscape is riddled with poor local minima that the
    plain ramp image alone falls into. `restarts` adds seeded random
    perturbations of the base starts. A time budget in `options` spans the
    whole point (all starts together).
    """
    problem = QaoaProblem(inst, kind, scheme, p)
    opts = options or PowellOptions()

    if scheme == "full":
        starts = [tqa_schedule(p, dt).to_params()]
    else:
        a = alpha(inst) if kind.method == "sbo" else 0.0
        starts = [lp.to_vector() for lp in linearized_init_battery(kind, dt, a)]
    if restarts > 0:
        rng = np.random.default_rng(seed)
        base = starts[0]
        for _ in range(restarts):
            starts.append(base + rng.uniform(-0.5, 0.5, size=base.size))

    deadline = None
    if opts.time_budget is not None:
        deadline = time.perf_counter() + opts.time_budget

    best: OptResult | None = None
    total_evals = 0
    n_started = 0
    for x0 in starts:
        run_opts = opts
        if deadline is not None:
            remaining = deadline - time.perf_counter()
            if best is not None and remaining <= 0:
                break
            run_opts = PowellOptions(
                ftol=opts.ftol,
                xtol=opts.xtol,
                max_iterations=opts.max_iterations,
                max_evaluations=opts.max_evaluations,
                initial_step=opts.initial_step,
                time_budget=max(remaining, 1e-3),
            )
        n_started += 1
        result = powell_minimize(problem.objective, x0, run_opts)
        total_evals += result.n_evaluations
        if best is None or result.best_value < best.best_value:
            best = result

    schedule = problem.schedule(best.best_params)
    distribution = problem.simulator.probabilities(schedule)
    return QaoaOutcome(
        result=best,
        schedule=schedule,
        distribution=distribution,
        total_evaluations=total_evals,
        n_starts=n_started,
    )
