"""Quantum-speed-limit times from relative purity.

The generic bound works on any sampled trajectory with exact generator
output: with sigma_i the singular values of d rho/dt and rho_i those of
rho, and bars denoting the time average over the driving window,

    tau_qsl = max( 1 / avg(sum_i sigma_i rho_i),
                   1 / avg(sqrt(sum_i sigma_i^2)) )
              * |f_final - 1| * Tr(rho_t^2),

with f the relative purity between the window endpoints. For the pure
dephasing qubit the same bound collapses to a closed form in the
coherence factor q(t), which this module also provides (and which serves
as the oracle for the generic path).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import bath, dephasing
from .errors import (
    DegenerateInputError,
    DimensionError,
    DomainError,
    InvariantViolationError,
)
from .linalg import singular_values
from .quadrature import adaptive_simpson

OPERATOR_SUM = "operator-sum"
ROOT_SUM_SQUARE = "root-sum-square"

RATIO_SLACK = 1e-6


@dataclass(frozen=True)
class QslResult:
    """Speed-limit time for one driving window."""

    tau_qsl: float
    tau_d: float
    branch: str
    f_final: float

    def __post_init__(self):
        if self.tau_d <= 0.0:
            raise DomainError(f"driving time must be > 0, got {self.tau_d}")
        if self.tau_qsl < 0.0:
            raise InvariantViolationError(f"negative speed-limit time {self.tau_qsl}")
        if self.ratio > 1.0 + RATIO_SLACK:
            raise InvariantViolationError(
                f"tau_qsl/tau_d = {self.ratio} exceeds 1; the bound cannot beat the actual driving"
            )
        if self.tau_qsl == 0.0 and abs(self.f_final - 1.0) > 1e-12:
            raise InvariantViolationError("zero bound with a non-trivial purity change")

    @property
    def ratio(self) -> float:
        return self.tau_qsl / self.tau_d


@dataclass(frozen=True)
class StateTrajectory:
    """Grid-sampled states with exact generator output as derivatives."""

    grid: np.ndarray
    states: np.ndarray
    derivatives: np.ndarray
    pulsed: bool = False

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        states = np.asarray(self.states, dtype=complex)
        derivs = np.asarray(self.derivatives, dtype=complex)
        if states.shape != derivs.shape or states.ndim != 3 or states.shape[1] != states.shape[2]:
            raise DimensionError("states/derivatives must be matching (n, d, d) stacks")
        if len(grid) != states.shape[0]:
            raise DimensionError("grid length does not match the number of samples")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "derivatives", derivs)

    def index_of(self, t: float) -> int:
        i = int(np.argmin(np.abs(self.grid - t)))
        if abs(self.grid[i] - t) > 1e-9 * max(1.0, abs(t)):
            raise DomainError(f"t={t} is not a grid point of this trajectory")
        return i


def from_dephasing(traj: dephasing.DephasingTrajectory) -> StateTrajectory:
    return StateTrajectory(grid=traj.grid, states=traj.states(),
                           derivatives=traj.derivatives(), pulsed=traj.pulsed)


def reduce_to_qubit_a(traj: StateTrajectory) -> StateTrajectory:
    """Trajectory of the first qubit of a two-qubit trajectory.

    The partial trace commutes with the time derivative, so the reduced
    derivatives are still exact generator output.
    """
    from .linalg import partial_trace_b

    states = np.stack([partial_trace_b(s) for s in traj.states])
    derivs = np.stack([partial_trace_b(d) for d in traj.derivatives])
    return StateTrajectory(grid=traj.grid, states=states, derivatives=derivs, pulsed=traj.pulsed)


def relative_purity(rho_initial, rho_final) -> float:
    """f = Tr[rho_final rho_initial] / Tr[rho_initial^2]."""
    rho_initial = np.asarray(rho_initial, dtype=complex)
    rho_final = np.asarray(rho_final, dtype=complex)
    if rho_initial.shape != rho_final.shape:
        raise DimensionError(f"shape mismatch {rho_initial.shape} vs {rho_final.shape}")
    denom = float(np.real(np.trace(rho_initial @ rho_initial)))
    if denom <= 0.0:
        raise DegenerateInputError("initial state has zero purity")
    return float(np.real(np.trace(rho_final @ rho_initial))) / denom


def qsl_generic(traj: StateTrajectory, t: float, tau_d: float) -> QslResult:
    """Unified speed-limit bound evaluated on a sampled trajectory.

    The time averages use the composite trapezoid on the trajectory grid;
    derivative samples are exact, so grid density alone controls the
    averaging error. Pulse-lattice trajectories are refused: their coarse
    sampling makes the averages meaningless.
    """
    if traj.pulsed:
        raise DomainError("the generic bound needs densely sampled trajectories, not pulse lattices")
    if tau_d <= 0.0:
        raise DomainError(f"driving time must be > 0, got {tau_d}")
    i0 = traj.index_of(t)
    i1 = traj.index_of(t + tau_d)
    if i1 <= i0:
        raise DomainError("driving window collapses on this grid")
    window = slice(i0, i1 + 1)
    times = traj.grid[window]

    s_op = np.empty(len(times))
    s_rss = np.empty(len(times))
    for j, idx in enumerate(range(i0, i1 + 1)):
        sig = singular_values(traj.derivatives[idx])
        rho_sig = singular_values(traj.states[idx])
        s_op[j] = float(np.dot(sig, rho_sig))
        s_rss[j] = float(math.sqrt(np.dot(sig, sig)))

    avg_op = float(np.trapezoid(s_op, times)) / tau_d
    avg_rss = float(np.trapezoid(s_rss, times)) / tau_d

    rho_t = traj.states[i0]
    f_final = relative_purity(rho_t, traj.states[i1])
    purity = float(np.real(np.trace(rho_t @ rho_t)))
    numerator = abs(f_final - 1.0) * purity

    if numerator == 0.0:
        return QslResult(tau_qsl=0.0, tau_d=tau_d, branch=OPERATOR_SUM, f_final=f_final)
    if avg_op == 0.0 and avg_rss == 0.0:
        raise InvariantViolationError(
            "frozen dynamics (zero generator averages) with a purity change: inconsistent trajectory"
        )
    bound_op = numerator / avg_op if avg_op > 0.0 else 0.0
    bound_rss = numerator / avg_rss if avg_rss > 0.0 else 0.0
    if bound_op >= bound_rss:
        return QslResult(tau_qsl=bound_op, tau_d=tau_d, branch=OPERATOR_SUM, f_final=f_final)
    return QslResult(tau_qsl=bound_rss, tau_d=tau_d, branch=ROOT_SUM_SQUARE, f_final=f_final)


def _closed_form_result(init, q_t, q_end, tau_d, speed_avg) -> QslResult:
    a = init.transverse
    two_re = abs(2.0 * float(np.real((q_t - q_end) * np.conj(q_t))))
    purity = 0.5 * (1.0 + init.v_z**2 + a * a * abs(q_t) ** 2)
    overlap = 0.5 * (1.0 + init.v_z**2) + 0.5 * a * a * float(np.real(q_end * np.conj(q_t)))
    f_final = overlap / purity
    if two_re == 0.0:
        return QslResult(tau_qsl=0.0, tau_d=tau_d, branch=OPERATOR_SUM, f_final=f_final)
    tau = 0.5 * a * two_re / speed_avg
    return QslResult(tau_qsl=tau, tau_d=tau_d, branch=OPERATOR_SUM, f_final=f_final)


def qsl_dephasing_closed(spec, temperature: float, omega: float, init: dephasing.BlochState,
                         t: float, tau_d: float,
                         pulse_interval: float | None = None) -> QslResult:
    """Closed-form speed-limit time for the dephasing qubit.

    tau_qsl = (1/2) sqrt(v_x^2+v_y^2) |(q_t - q_{t+tau_d}) q_t^* + c.c.|
              / [ (1/tau_d) int_t^{t+tau_d} |dq/dt| dt' ],
    with |dq/dt| = exp(-Gamma) sqrt(Gamma_dot^2 + Omega^2). The speed
    integral uses adaptive Simpson to 1e-8. In the pulsed case both t and
    tau_d must sit on the 2*N*dt lattice and the speed integral becomes the
    sum of |q| jumps between adjacent lattice points.
    """
    if init.transverse == 0.0:
        raise DegenerateInputError(
            "the dephasing bound is vacuous for incoherent initial states (v_x = v_y = 0)"
        )
    if tau_d <= 0.0:
        raise DomainError(f"driving time must be > 0, got {tau_d}")
    if t < 0.0:
        raise DomainError(f"start time must be >= 0, got {t}")

    if pulse_interval is None:
        q_t, _ = dephasing.coherence_factor(spec, temperature, omega, t)
        q_end, _ = dephasing.coherence_factor(spec, temperature, omega, t + tau_d)

        def speed(tp):
            g = bath.decoherence_factor(spec, temperature, tp)
            gdot = bath.decoherence_rate(spec, temperature, tp)
            return math.exp(-g) * math.hypot(gdot, omega)

        integral = adaptive_simpson(speed, t, t + tau_d, tol=1e-8)
        speed_avg = integral / tau_d
    else:
        period = 2.0 * pulse_interval
        n0 = dephasing._lattice_index(t, pulse_interval)
        n_steps = dephasing._lattice_index(t + tau_d, pulse_interval) - n0
        if n_steps < 1:
            raise DomainError("driving window shorter than one pulse cycle")
        qs = []
        for n in range(n0, n0 + n_steps + 1):
            qn, _ = dephasing.coherence_factor(spec, temperature, omega, n * period,
                                               pulse_interval=pulse_interval)
            qs.append(qn)
        q_t, q_end = qs[0], qs[-1]
        integral = float(sum(abs(qs[j + 1] - qs[j]) for j in range(n_steps)))
        speed_avg = integral / tau_d

    if speed_avg == 0.0:
        raise InvariantViolationError("zero average speed over the driving window")
    return _closed_form_result(init, q_t, q_end, tau_d, speed_avg)


def window_series(traj: StateTrajectory, start_times, tau_d: float):
    """Generic bound for many start times sharing one trajectory.

    The per-sample singular-value sums and their trapezoid prefix sums are
    computed once, so each window costs O(1) afterwards. Start times and
    start+tau_d must be grid points.
    """
    if traj.pulsed:
        raise DomainError("the generic bound needs densely sampled trajectories, not pulse lattices")
    if tau_d <= 0.0:
        raise DomainError(f"driving time must be > 0, got {tau_d}")
    n = len(traj.grid)
    s_op = np.empty(n)
    s_rss = np.empty(n)
    for i in range(n):
        sig = singular_values(traj.derivatives[i])
        rho_sig = singular_values(traj.states[i])
        s_op[i] = float(np.dot(sig, rho_sig))
        s_rss[i] = float(math.sqrt(np.dot(sig, sig)))
    dt = np.diff(traj.grid)
    cum_op = np.concatenate([[0.0], np.cumsum(0.5 * dt * (s_op[1:] + s_op[:-1]))])
    cum_rss = np.concatenate([[0.0], np.cumsum(0.5 * dt * (s_rss[1:] + s_rss[:-1]))])

    results = []
    for t in start_times:
        i0 = traj.index_of(float(t))
        i1 = traj.index_of(float(t) + tau_d)
        avg_op = (cum_op[i1] - cum_op[i0]) / tau_d
        avg_rss = (cum_rss[i1] - cum_rss[i0]) / tau_d
        rho_t = traj.states[i0]
        f_final = relative_purity(rho_t, traj.states[i1])
        purity = float(np.real(np.trace(rho_t @ rho_t)))
        numerator = abs(f_final - 1.0) * purity
        if numerator == 0.0:
            results.append(QslResult(tau_qsl=0.0, tau_d=tau_d, branch=OPERATOR_SUM, f_final=f_final))
            continue
        if avg_op == 0.0 and avg_rss == 0.0:
            raise InvariantViolationError("frozen dynamics with a purity change in window series")
        bound_op = numerator / avg_op if avg_op > 0.0 else 0.0
        bound_rss = numerator / avg_rss if avg_rss > 0.0 else 0.0
        if bound_op >= bound_rss:
            results.append(QslResult(tau_qsl=bound_op, tau_d=tau_d, branch=OPERATOR_SUM, f_final=f_final))
        else:
            results.append(QslResult(tau_qsl=bound_rss, tau_d=tau_d, branch=ROOT_SUM_SQUARE, f_final=f_final))
    return results


def qsl_coherence_ratio(spec, temperature: float, omega: float, init: dephasing.BlochState,
                        t: float, tau_d: float) -> float:
    """tau_qsl divided by the instantaneous l1 coherence C_t.

    C_t = sqrt(v_x^2 + v_y^2) * exp(-Gamma_t); figure-style plots then
    additionally normalise by the driving time.
    """
    result = qsl_dephasing_closed(spec, temperature, omega, init, t, tau_d)
    gamma = bath.decoherence_factor(spec, temperature, t)
    c_t = init.transverse * math.exp(-gamma)
    if c_t < 1e-14:
        raise DegenerateInputError(f"coherence {c_t} too small for a meaningful ratio")
    return result.tau_qsl / c_t
