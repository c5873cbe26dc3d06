"""Entropy sequences S_n of finite sections and asymptotic entropy rates.

Exchangeable chains have a closed-form entropy for every n and rate
S(A - B). Toeplitz chains A (x) I + B (x) T_n(p) have rate equal to the
average of S(A + h(s) B) over s in [0, 1], with h(s) = 2 sum_j p_j cos(2 pi j s);
the average is computed with a composite midpoint rule.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from .chains import (ChainSpec, exchangeable_is_g_chain, leading_section, size_cap,
                     weight_toeplitz)
from .errors import (InvalidArgumentError, NumericFailureError, ResourceLimitError,
                     SectionInvalidError)
from .gmatrix import PSD_TOL, as_symmetric, von_neumann_entropy

MONO_TOL = 1e-7
TAIL_TOL = 1e-12
DEFAULT_QUAD_POINTS = 1024
CDF_GRID = 100_000


def _fmt(x: float) -> str:
    return f"{x:.17g}"


@dataclass(frozen=True)
class EntropyRow:
    n: int
    entropy: float
    rate: float
    delta: float


@dataclass
class EntropyTrace:
    rows: list[EntropyRow]
    mono_tol: float = MONO_TOL
    violations: list[str] = field(default_factory=list)

    def __post_init__(self):
        if not self.violations:
            self.violations = self.check(self.mono_tol)

    @property
    def entropies(self) -> np.ndarray:
        return np.array([r.entropy for r in self.rows])

    @property
    def rates(self) -> np.ndarray:
        return np.array([r.rate for r in self.rows])

    @property
    def deltas(self) -> np.ndarray:
        return np.array([r.delta for r in self.rows])

    def check(self, mono_tol: float = MONO_TOL) -> list[str]:
        """Monotonicity diagnostics: S_n up, S_n - S_{n-1} down, S_n / n down."""
        out = []
        for prev, row in zip(self.rows, self.rows[1:]):
            if row.delta < -mono_tol:
                out.append(f"n={row.n}: S_n decreased by {-row.delta:.3e}")
            if row.delta > prev.delta + mono_tol:
                out.append(f"n={row.n}: increment grew by {row.delta - prev.delta:.3e}")
            if row.rate > prev.rate + mono_tol:
                out.append(f"n={row.n}: S_n/n grew by {row.rate - prev.rate:.3e}")
        return out

    @property
    def monotone(self) -> bool:
        return not self.violations

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("n,S_n,rate,delta\n")
        for r in self.rows:
            buf.write(f"{r.n},{_fmt(r.entropy)},{_fmt(r.rate)},{_fmt(r.delta)}\n")
        return buf.getvalue()


def entropy_sequence(spec: ChainSpec, n_max: int, tol: float = PSD_TOL,
                     mono_tol: float = MONO_TOL) -> EntropyTrace:
    """S_n = S(Σ_n) for n = 1..n_max, with S_0 = 0."""
    if n_max < 1:
        raise InvalidArgumentError(f"n_max must be positive, got {n_max}")
    if 2 * spec.k * n_max > size_cap():
        raise ResourceLimitError(f"n_max={n_max} exceeds the size cap {size_cap()}")
    rows, prev = [], 0.0
    for n in range(1, n_max + 1):
        try:
            S = von_neumann_entropy(leading_section(spec, n).matrix, tol)
        except InvalidArgumentError as exc:
            raise SectionInvalidError(n, f"section n={n} is not a valid state: {exc}") from exc
        rows.append(EntropyRow(n, S, S / n, S - prev))
        prev = S
    return EntropyTrace(rows, mono_tol)


def _exchangeable_pair(A, B, tol):
    A = as_symmetric(A, "A")
    B = np.asarray(B, dtype=float)
    crit = exchangeable_is_g_chain(A, B, tol)
    if not crit:
        raise InvalidArgumentError(f"not an exchangeable G-chain: {', '.join(crit.reasons)}")
    return A, 0.5 * (B + B.T)


def exchangeable_entropy_exact(A, B, n: int, tol: float = PSD_TOL) -> float:
    """(n - 1) S(A - B) + S(A + (n - 1) B)."""
    if n < 1:
        raise InvalidArgumentError(f"n must be positive, got {n}")
    A, B = _exchangeable_pair(A, B, tol)
    return (n - 1) * von_neumann_entropy(A - B, tol) + von_neumann_entropy(A + (n - 1) * B, tol)


def exchangeable_rate(A, B, tol: float = PSD_TOL) -> float:
    A, B = _exchangeable_pair(A, B, tol)
    return von_neumann_entropy(A - B, tol)


def rate_gap_bound(A, B, n: int, tol: float = PSD_TOL) -> float:
    """Upper bound on |S_n/n - (n-1)/n S(A - B)| for B positive definite.

        (S(A) + k ln(2 pi e) + ln(det B) / 2) / n + k ln(n - 1) / n

    At n = 1 the left side is exactly S(A), which is returned.
    """
    A, B = _exchangeable_pair(A, B, tol)
    if n < 1:
        raise InvalidArgumentError(f"n must be positive, got {n}")
    w = np.linalg.eigvalsh(B)
    if w[0] <= 0:
        raise InvalidArgumentError("rate_gap_bound needs B positive definite")
    k = A.shape[0] // 2
    S_A = von_neumann_entropy(A, tol)
    if n == 1:
        return S_A
    logdet = float(np.sum(np.log(w)))
    return (S_A + k * math.log(2 * math.pi * math.e) + 0.5 * logdet) / n + k * math.log(n - 1) / n


# -- Toeplitz symbols and spectra ----------------------------------------------

def _weights(weights) -> dict:
    w = dict(weights.items() if isinstance(weights, Mapping) else weights)
    for j, p in w.items():
        if int(j) != j or j < 1:
            raise InvalidArgumentError(f"weight index must be a positive integer, got {j!r}")
        if p < 0:
            raise InvalidArgumentError(f"weight p_{j} is negative")
    if sum(w.values()) > 1.0 + 1e-12:
        raise InvalidArgumentError("weights sum to more than one")
    return {int(j): float(p) for j, p in sorted(w.items())}


def symbol(weights, s) -> np.ndarray:
    """h(s) = 2 sum_j p_j cos(2 pi j s)."""
    w = _weights(weights)
    s = np.asarray(s, dtype=float)
    h = np.zeros_like(s)
    for j, p in w.items():
        h = h + 2.0 * p * np.cos(2.0 * np.pi * j * s)
    return h


def truncate_weights(pmf: Callable[[int], float], tail_tol: float = TAIL_TOL,
                     total: float = 1.0, max_terms: int = 1_000_000) -> tuple[dict, float]:
    """Cut an infinite weight sequence once the remaining mass is <= tail_tol.

    ``total`` is the full mass of the sequence. Returns the kept weights and
    the discarded tail mass.
    """
    kept, acc = {}, 0.0
    for j in range(1, max_terms + 1):
        p = float(pmf(j))
        if p < 0:
            raise InvalidArgumentError(f"weight p_{j} is negative")
        if p > 0:
            kept[j] = p
            acc += p
        if total - acc <= tail_tol:
            return kept, max(total - acc, 0.0)
    raise NumericFailureError(f"tail mass still {total - acc:.3e} after {max_terms} terms")


def toeplitz_spectrum(weights, n: int) -> np.ndarray:
    """Ascending eigenvalues of T_n(p)."""
    if n < 1:
        raise InvalidArgumentError(f"n must be positive, got {n}")
    T = weight_toeplitz(_weights(weights), n)
    try:
        return np.linalg.eigvalsh(T)
    except np.linalg.LinAlgError as exc:
        raise NumericFailureError(str(exc)) from exc


def limit_cdf_samples(weights, grid: int = CDF_GRID) -> np.ndarray:
    """Sorted samples of h on the midpoints of a uniform grid of [0, 1]."""
    s = (np.arange(grid) + 0.5) / grid
    return np.sort(symbol(weights, s))


def spectral_measure_distance(weights, n: int, grid: int = CDF_GRID) -> float:
    """Kolmogorov distance between the eigenvalue distribution of T_n(p) and
    the push-forward of Lebesgue measure under h."""
    if grid < 1000:
        raise InvalidArgumentError(f"grid must be at least 1000, got {grid}")
    lam = toeplitz_spectrum(weights, n)
    h = limit_cdf_samples(weights, grid)
    xs = np.concatenate([lam, h])
    emp = np.searchsorted(lam, xs, side="right") / n
    lim = np.searchsorted(h, xs, side="right") / grid
    emp_left = np.searchsorted(lam, xs, side="left") / n
    lim_left = np.searchsorted(h, xs, side="left") / grid
    return float(max(np.max(np.abs(emp - lim)), np.max(np.abs(emp_left - lim_left))))


# -- entropy rate by quadrature --------------------------------------------------

@dataclass(frozen=True)
class QuadratureReport:
    estimate: float
    error_indicator: float
    quad_points: int
    truncated_tail_mass: float = 0.0

    def to_dict(self) -> dict:
        return {"estimate": self.estimate, "error_indicator": self.error_indicator,
                "quad_points": self.quad_points, "truncated_tail_mass": self.truncated_tail_mass}


def _midpoint(f, N):
    # h(s) = h(1 - s): node i mirrors node N-1-i, so only the first half is evaluated
    half = (N + 1) // 2
    s = (np.arange(half) + 0.5) / N
    vals = [f(si) for si in s]
    weights = [2.0] * half
    if N % 2:
        weights[-1] = 1.0
    return math.fsum(w * v for w, v in zip(weights, vals)) / N, s, vals


def kms_rate(A, B, weights, quad_points: int = DEFAULT_QUAD_POINTS, tail_mass: float = 0.0,
             tol: float = PSD_TOL) -> QuadratureReport:
    """Entropy rate of the chain A (x) I + B (x) T(p) as the average of S(A + h(s) B)."""
    A = as_symmetric(A, "A")
    B = as_symmetric(B, "B")
    if A.shape != B.shape:
        raise InvalidArgumentError(f"A is {A.shape} but B is {B.shape}")
    if quad_points < 64:
        raise InvalidArgumentError(f"quad_points must be at least 64, got {quad_points}")
    if tail_mass < 0:
        raise InvalidArgumentError("tail_mass must be nonnegative")
    w = _weights(weights)

    def integrand(s):
        t = float(symbol(w, s))
        try:
            return von_neumann_entropy(A + t * B, tol)
        except InvalidArgumentError as exc:
            raise NumericFailureError(f"integrand invalid at s={s:.17g} (h={t:.6g}): {exc}") from exc

    Q, nodes, vals = _midpoint(integrand, quad_points)
    Q_half, _, _ = _midpoint(integrand, quad_points // 2)
    indicator = abs(Q - Q_half) + 64 * np.finfo(float).eps * (1.0 + abs(Q))
    if tail_mass > 0:
        h = symbol(w, nodes)
        order = np.argsort(h)
        hs, fs = h[order], np.asarray(vals)[order]
        dh = np.diff(hs)
        ok = dh > 1e-12
        lip = float(np.max(np.abs(np.diff(fs)[ok] / dh[ok]))) if np.any(ok) else 0.0
        indicator += 2.0 * tail_mass * lip
    return QuadratureReport(float(Q), float(indicator), int(quad_points), float(tail_mass))
