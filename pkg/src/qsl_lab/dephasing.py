"""Exact time evolution of a single qubit dephasing in an Ohmic-like bath.

Populations are constants of motion; the whole dynamics sits in the
coherence factor q(t) = exp(i*Omega*t - Gamma(t)) multiplying the initial
off-diagonal element. With pi-pulse trains the exponent is replaced by the
filtered variant and the dynamics is defined on the pulse lattice
t = 2*N*dt only.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from . import bath
from .errors import AccuracyError, DomainError, InvariantViolationError
from .linalg import check_density_matrix

LATTICE_TOL = 1e-9


@dataclass(frozen=True)
class BlochState:
    """Bloch vector of the initial qubit state."""

    v_x: float
    v_y: float
    v_z: float

    def __post_init__(self):
        norm_sq = self.v_x**2 + self.v_y**2 + self.v_z**2
        if norm_sq > 1.0 + 1e-12:
            raise InvariantViolationError(f"Bloch vector norm^2 = {norm_sq} exceeds 1")

    @property
    def transverse(self) -> float:
        """sqrt(v_x^2 + v_y^2), the initial coherence amplitude."""
        return math.hypot(self.v_x, self.v_y)


PLUS_STATE = BlochState(1.0, 0.0, 0.0)


def _lattice_index(t: float, pulse_interval: float) -> int:
    """Index N with t = 2*N*dt, or raise if t is off the pulse lattice."""
    period = 2.0 * pulse_interval
    n = round(t / period)
    if abs(t - n * period) > LATTICE_TOL * max(1.0, abs(t)):
        raise DomainError(
            f"pulsed dynamics is defined at t = 2*N*dt only; t={t} is off the dt={pulse_interval} lattice"
        )
    return int(n)


def _gamma(spec, temperature, t, pulse_interval):
    if pulse_interval is None:
        return bath.decoherence_factor(spec, temperature, t)
    n = _lattice_index(t, pulse_interval)
    if n == 0:
        return 0.0
    return bath.decoherence_factor_pulsed(spec, temperature, n, pulse_interval)


def coherence_factor(spec, temperature: float, omega: float, t: float,
                     pulse_interval: float | None = None):
    """(q, dq/dt) at time t; q = exp(i*Omega*t - Gamma(t)).

    For the free evolution dq/dt = (i*Omega - dGamma/dt) * q with the rate
    from the differentiated bath integral. Under a pulse train Gamma is
    defined on the lattice only, so the derivative is the two-point
    difference of q across the adjacent lattice point.
    """
    if t < 0.0:
        raise DomainError(f"time must be >= 0, got {t}")
    gamma = _gamma(spec, temperature, t, pulse_interval)
    q = cmath.exp(complex(-gamma, omega * t))
    if pulse_interval is None:
        rate = bath.decoherence_rate(spec, temperature, t)
        return q, complex(0.0, omega) * q - rate * q
    period = 2.0 * pulse_interval
    g_next = _gamma(spec, temperature, t + period, pulse_interval)
    q_next = cmath.exp(complex(-g_next, omega * (t + period)))
    return q, (q_next - q) / period


def reduced_state(init: BlochState, q: complex) -> np.ndarray:
    """Qubit state with coherence factor q applied to the initial Bloch vector."""
    if abs(q) > 1.0 + 1e-10:
        raise InvariantViolationError(f"|q| = {abs(q)} exceeds 1")
    off = 0.5 * complex(init.v_x, -init.v_y) * q
    rho = np.array(
        [[0.5 * (1.0 + init.v_z), off],
         [np.conj(off), 0.5 * (1.0 - init.v_z)]],
        dtype=complex,
    )
    return check_density_matrix(rho)


def state_derivative(init: BlochState, q_dot: complex) -> np.ndarray:
    """d rho / dt for the dephasing state (populations frozen)."""
    off = 0.5 * complex(init.v_x, -init.v_y) * q_dot
    return np.array([[0.0, off], [np.conj(off), 0.0]], dtype=complex)


@dataclass(frozen=True)
class DephasingTrajectory:
    """Sampled coherence-factor dynamics on a time grid."""

    grid: np.ndarray
    q: np.ndarray
    q_dot: np.ndarray
    gamma: np.ndarray
    init: BlochState
    omega: float
    spec: object
    temperature: float
    pulse_interval: float | None = None
    _states: np.ndarray = field(default=None, repr=False, compare=False)

    @property
    def pulsed(self) -> bool:
        return self.pulse_interval is not None

    def states(self) -> np.ndarray:
        out = np.empty((len(self.grid), 2, 2), dtype=complex)
        for i, qi in enumerate(self.q):
            out[i] = reduced_state(self.init, qi)
        return out

    def derivatives(self) -> np.ndarray:
        out = np.empty((len(self.grid), 2, 2), dtype=complex)
        for i, qd in enumerate(self.q_dot):
            out[i] = state_derivative(self.init, qd)
        return out


def build_trajectory(spec, temperature: float, omega: float, init: BlochState,
                     grid, pulse_interval: float | None = None) -> DephasingTrajectory:
    """Sample q, dq/dt and Gamma on a strictly increasing time grid.

    Each Gamma sample carries the bath-module accuracy guarantee; a failed
    quadrature is re-raised with the offending grid time attached.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or len(grid) == 0:
        raise DomainError("grid must be a non-empty 1-d array of times")
    if grid[0] < 0.0:
        raise DomainError(f"grid must start at t >= 0, got {grid[0]}")
    if len(grid) > 1 and np.min(np.diff(grid)) <= 0.0:
        raise DomainError("grid must be strictly increasing")
    q = np.empty(len(grid), dtype=complex)
    q_dot = np.empty(len(grid), dtype=complex)
    gamma = np.empty(len(grid), dtype=float)
    for i, t in enumerate(grid):
        try:
            gamma[i] = _gamma(spec, temperature, float(t), pulse_interval)
            q[i], q_dot[i] = coherence_factor(spec, temperature, omega, float(t), pulse_interval)
        except AccuracyError as exc:
            raise AccuracyError(f"quadrature failure at grid time t={t}: {exc}",
                                achieved=exc.achieved) from exc
    if np.any(gamma < 0.0):
        raise InvariantViolationError("negative decoherence exponent in trajectory")
    return DephasingTrajectory(grid=grid, q=q, q_dot=q_dot, gamma=gamma, init=init,
                               omega=omega, spec=spec, temperature=temperature,
                               pulse_interval=pulse_interval)


def uniform_grid(t_max: float, n_points: int = 601, t_min: float = 0.0) -> np.ndarray:
    return np.linspace(t_min, t_max, n_points)
