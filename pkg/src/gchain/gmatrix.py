"""Symplectic linear algebra on covariance matrices.

Covariance matrices are real symmetric 2m x 2m arrays in the ordering
(q_1, p_1, ..., q_m, p_m). A matrix S is a G-matrix, i.e. the covariance
matrix of a Gaussian state, when the Hermitian matrix S + (i/2) J is
positive semidefinite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import xlogy

from .errors import InvalidArgumentError, NumericFailureError

SYM_TOL = 1e-10
PSD_TOL = 1e-9
PAIR_TOL = 1e-9


@dataclass(frozen=True)
class Tolerances:
    sym: float = SYM_TOL
    psd: float = PSD_TOL
    mono: float = 1e-7
    verdict: float = PSD_TOL

    def __post_init__(self):
        for name in ("sym", "psd", "mono", "verdict"):
            if not getattr(self, name) > 0:
                raise InvalidArgumentError(f"tolerance {name} must be positive")


def symplectic_form(m: int) -> np.ndarray:
    """Block diagonal J_{2m} with m copies of [[0, 1], [-1, 0]]."""
    if int(m) != m or m < 1:
        raise InvalidArgumentError(f"mode count must be a positive integer, got {m!r}")
    return np.kron(np.eye(int(m)), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def as_square(S, name: str = "matrix") -> np.ndarray:
    S = np.asarray(S, dtype=float)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise InvalidArgumentError(f"{name} must be square, got shape {S.shape}")
    if S.shape[0] == 0 or S.shape[0] % 2:
        raise InvalidArgumentError(f"{name} must have even positive dimension, got {S.shape[0]}")
    if not np.all(np.isfinite(S)):
        raise InvalidArgumentError(f"{name} has non-finite entries")
    return S


def is_symmetric(S, sym_tol: float = SYM_TOL) -> bool:
    S = np.asarray(S, dtype=float)
    scale = 1.0 + (np.max(np.abs(S)) if S.size else 0.0)
    return bool(np.max(np.abs(S - S.T), initial=0.0) <= sym_tol * scale)


def as_symmetric(S, name: str = "matrix", sym_tol: float = SYM_TOL) -> np.ndarray:
    """Validate shape and symmetry; return the symmetrized float array."""
    S = as_square(S, name)
    if not is_symmetric(S, sym_tol):
        raise InvalidArgumentError(f"{name} is not symmetric within tolerance {sym_tol:g}")
    return 0.5 * (S + S.T)


def mode_count(S) -> int:
    return np.asarray(S).shape[0] // 2


@dataclass(frozen=True)
class GTest:
    """Outcome of the uncertainty-inequality test.

    ``min_eig`` is the smallest eigenvalue of S + (i/2)J; ``vector`` is the
    corresponding eigenvector when the test fails.
    """

    ok: bool
    min_eig: float
    threshold: float
    vector: np.ndarray | None = None

    def __bool__(self):
        return self.ok


def _eigvalsh(H, vectors=False):
    try:
        return np.linalg.eigh(H) if vectors else np.linalg.eigvalsh(H)
    except np.linalg.LinAlgError as exc:
        raise NumericFailureError(f"Hermitian eigensolver did not converge: {exc}") from exc


def is_g_matrix(S, tol: float = PSD_TOL, sym_tol: float = SYM_TOL) -> GTest:
    S = as_symmetric(S, "covariance matrix", sym_tol)
    H = S + 0.5j * symplectic_form(mode_count(S))
    threshold = -tol * (1.0 + np.linalg.norm(S, 2))
    w = _eigvalsh(H)
    if w[0] >= threshold:
        return GTest(True, float(w[0]), float(threshold))
    w, v = _eigvalsh(H, vectors=True)
    return GTest(False, float(w[0]), float(threshold), v[:, 0])


def symplectic_spectrum(C, sym_tol: float = SYM_TOL, pair_tol: float = PAIR_TOL) -> np.ndarray:
    """Williamson eigenvalues of a positive definite C, sorted descending.

    Uses the Hermitian matrix i C^{1/2} J C^{1/2}, which is similar to i J C
    and has eigenvalues +-nu_j.
    """
    C = as_symmetric(C, "covariance matrix", sym_tol)
    m = mode_count(C)
    w, U = _eigvalsh(C, vectors=True)
    if w[0] <= 0:
        raise InvalidArgumentError(
            f"covariance matrix is not positive definite (min eigenvalue {w[0]:.3e})")
    root = np.sqrt(w)
    M = root[:, None] * (U.T @ symplectic_form(m) @ U) * root[None, :]
    e = _eigvalsh(1j * M)
    hi, lo = e[m:][::-1], e[:m]
    mismatch = np.max(np.abs(hi + lo))
    if mismatch > pair_tol * (1.0 + w[-1]):
        raise NumericFailureError(f"symplectic eigenvalues do not pair (mismatch {mismatch:.3e})")
    return 0.5 * (hi - lo)


def entropy_function(nu):
    """g(nu) = (nu + 1/2) ln(nu + 1/2) - (nu - 1/2) ln(nu - 1/2), with g(1/2) = 0."""
    nu = np.asarray(nu, dtype=float)
    return xlogy(nu + 0.5, nu + 0.5) - xlogy(nu - 0.5, nu - 0.5)


def entropy_from_spectrum(nu, tol: float = PSD_TOL, scale: float = 1.0) -> float:
    nu = np.asarray(nu, dtype=float)
    floor = 0.5 - tol * scale
    if np.any(nu < floor):
        raise InvalidArgumentError(
            f"symplectic eigenvalue {nu.min():.12g} < 1/2: not a quantum state")
    nu = np.maximum(nu, 0.5)
    return math.fsum(entropy_function(nu))


def von_neumann_entropy(C, tol: float = PSD_TOL, sym_tol: float = SYM_TOL) -> float:
    """Entropy in nats of the mean-zero Gaussian state with covariance C."""
    C = as_symmetric(C, "covariance matrix", sym_tol)
    nu = symplectic_spectrum(C, sym_tol=sym_tol)
    return entropy_from_spectrum(nu, tol, 1.0 + float(nu[0]))
