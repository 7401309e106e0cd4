"""Dense complex-matrix kernel for the 2x2 and 4x4 operators used here.

States are plain ``numpy`` arrays; the functions in this module validate
the density-matrix contract (Hermitian, unit trace, positive up to slack)
and provide the handful of spectral operations everything else is built
on: singular values, von Neumann entropy (base 2), partial trace over the
second qubit, and the Hilbert-Schmidt inner product.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionError, PositivityError

HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-10
POSITIVITY_SLACK = 1e-9

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
IDENTITY_2 = np.eye(2, dtype=complex)


def _as_square(m) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {m.shape}")
    return m


def check_density_matrix(rho, *, positivity_slack: float = POSITIVITY_SLACK) -> np.ndarray:
    """Validate the density-matrix invariants and return the array.

    Hermiticity within 1e-12, unit trace within 1e-10 and eigenvalues
    above ``-positivity_slack``. Raises on violation so integrator drift
    aborts loudly instead of propagating silently.
    """
    rho = _as_square(rho)
    dim = rho.shape[0]
    if dim not in (2, 4):
        raise DimensionError(f"density matrices here are 2x2 or 4x4, got {dim}x{dim}")
    herm = np.max(np.abs(rho - rho.conj().T))
    if herm > HERMITICITY_TOL:
        raise PositivityError(f"Hermiticity violated by {herm:.3e} (tol {HERMITICITY_TOL:.0e})")
    tr = np.trace(rho)
    if abs(tr - 1.0) > TRACE_TOL:
        raise PositivityError(f"trace {tr} deviates from 1 by {abs(tr - 1.0):.3e}")
    lo = float(np.min(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))))
    if lo < -positivity_slack:
        raise PositivityError(f"negative eigenvalue {lo:.3e} beyond slack {positivity_slack:.0e}")
    return rho


def is_density_matrix(rho, *, positivity_slack: float = POSITIVITY_SLACK) -> bool:
    try:
        check_density_matrix(rho, positivity_slack=positivity_slack)
    except (DimensionError, PositivityError):
        return False
    return True


def check_state_derivative(drho) -> np.ndarray:
    """Validate the derivative of a unit-trace state: Hermitian, traceless."""
    drho = _as_square(drho)
    if np.max(np.abs(drho - drho.conj().T)) > HERMITICITY_TOL:
        raise PositivityError("state derivative is not Hermitian within 1e-12")
    if abs(np.trace(drho)) > TRACE_TOL:
        raise PositivityError("state derivative is not traceless within 1e-10")
    return drho


def singular_values(m) -> np.ndarray:
    """Singular values of a square matrix, descending.

    Satisfies sum(sigma^2) = ||M||_F^2 to machine precision; for
    Hermitian input they equal the absolute eigenvalues.
    """
    m = _as_square(m)
    if m.shape[0] > 4:
        raise DimensionError(f"kernel is specialised to dim <= 4, got {m.shape[0]}")
    return np.linalg.svd(m, compute_uv=False)


def eigenvalues_hermitian(m) -> np.ndarray:
    """Ascending real eigenvalues of a Hermitian matrix."""
    return np.linalg.eigvalsh(_as_square(m))


def von_neumann_entropy(rho) -> float:
    """S(rho) = -Tr[rho log2 rho] in bits, with 0*log(0) := 0."""
    rho = _as_square(rho)
    evals = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))
    if np.min(evals) < -1e-6:
        raise PositivityError(f"entropy of a non-positive state (min eigenvalue {np.min(evals):.3e})")
    evals = np.clip(evals.real, 0.0, None)
    nz = evals[evals > 0.0]
    return float(-np.sum(nz * np.log2(nz)))


def partial_trace_b(rho_ab) -> np.ndarray:
    """Trace out the second qubit of a two-qubit state (A is the slow index)."""
    rho_ab = _as_square(rho_ab)
    if rho_ab.shape[0] != 4:
        raise DimensionError(f"partial trace over B expects a 4x4 matrix, got {rho_ab.shape[0]}x{rho_ab.shape[0]}")
    r = rho_ab.reshape(2, 2, 2, 2)
    return np.einsum("ikjk->ij", r)


def hilbert_schmidt_product(a, b) -> complex:
    """Tr[A^dagger B] for equally sized square matrices."""
    a = _as_square(a)
    b = _as_square(b)
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch {a.shape} vs {b.shape}")
    return complex(np.vdot(a, b))


def kron2(a, b) -> np.ndarray:
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))
