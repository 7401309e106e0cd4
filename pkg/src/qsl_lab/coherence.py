"""Basis-dependent quantum-coherence measures.

The reference basis is the computational (sigma_z product) basis; for a
two-qubit state the single-qubit measures are taken after tracing out the
partner. Both measures vanish exactly on diagonal states.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import InvariantViolationError
from .linalg import check_density_matrix, von_neumann_entropy


def l1_coherence(rho) -> float:
    """Sum of absolute off-diagonal elements."""
    rho = check_density_matrix(rho)
    return float(np.sum(np.abs(rho)) - np.sum(np.abs(np.diag(rho))))


def jsd_coherence(rho) -> float:
    """Jensen-Shannon coherence: sqrt of the entropic divergence between
    rho and its diagonal part (entropies in bits).

    radicand = S((rho + diag(rho))/2) - (S(rho) + S(diag(rho))) / 2,
    clamped to zero within -1e-12; a radicand below -1e-9 indicates a
    numerically inconsistent state and raises.
    """
    rho = check_density_matrix(rho)
    dia = np.diag(np.diag(rho))
    mix = 0.5 * (rho + dia)
    radicand = von_neumann_entropy(mix) - 0.5 * (von_neumann_entropy(rho) + von_neumann_entropy(dia))
    if radicand < -1e-9:
        raise InvariantViolationError(
            f"Jensen-Shannon radicand {radicand:.3e} is negative beyond numerical slack"
        )
    return math.sqrt(max(radicand, 0.0))
