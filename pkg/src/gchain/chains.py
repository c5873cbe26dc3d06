"""Chain specifications, finite sections and closed-form validity criteria.

All finite sections are laid out site-major: row ``2k*(r) + a`` holds
intra-site coordinate ``a`` of the r-th selected site, so restricting to a
subset of sites is a contiguous block selection.
"""

from __future__ import annotations

import enum
import os
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidArgumentError, ResourceLimitError
from .gmatrix import PSD_TOL, SYM_TOL, GTest, as_square, as_symmetric, is_g_matrix

DEFAULT_SIZE_CAP = 4096
WEIGHT_SUM_SLACK = 1e-12


def size_cap() -> int:
    raw = os.environ.get("GCHAIN_SIZE_CAP")
    if raw is None:
        return DEFAULT_SIZE_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise InvalidArgumentError(f"GCHAIN_SIZE_CAP must be an integer, got {raw!r}") from None
    if cap < 2:
        raise InvalidArgumentError("GCHAIN_SIZE_CAP must be at least 2")
    return cap


def _block(M, name, k=None, symmetric=True, sym_tol=SYM_TOL):
    M = as_symmetric(M, name, sym_tol) if symmetric else as_square(M, name)
    if k is not None and M.shape[0] != 2 * k:
        raise InvalidArgumentError(f"{name} is {M.shape[0]}x{M.shape[0]}, expected {2 * k}x{2 * k}")
    M = M.copy()
    M.flags.writeable = False
    return M


def _mode_of(A) -> int:
    return np.asarray(A).shape[0] // 2


class _Spec:
    """Shared behaviour of the chain variants."""

    kind: str
    A: np.ndarray

    @property
    def k(self) -> int:
        return _mode_of(self.A)

    def offset_block(self, d: int) -> np.ndarray:
        """Upper block A_{i, i+d} for d >= 1."""
        raise NotImplementedError

    def _fields(self):
        raise NotImplementedError

    def __eq__(self, other):
        if type(self) is not type(other):
            return NotImplemented
        return _fields_equal(self._fields(), other._fields())

    __hash__ = None


def _fields_equal(a, b):
    if isinstance(a, np.ndarray) or isinstance(b, np.ndarray):
        return np.array_equal(a, b)
    if isinstance(a, (tuple, list)) and isinstance(b, (tuple, list)):
        return len(a) == len(b) and all(_fields_equal(x, y) for x, y in zip(a, b))
    return a == b


@dataclass(frozen=True, eq=False)
class ExchangeableSpec(_Spec):
    """A on the diagonal, B above it, B^T below it.

    B is not required to be symmetric here; asymmetry is reported by
    :func:`exchangeable_is_g_chain` instead.
    """

    A: np.ndarray
    B: np.ndarray
    kind: str = field(default="exchangeable", init=False)

    def __post_init__(self):
        A = _block(self.A, "A")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", _block(self.B, "B", _mode_of(A), symmetric=False))

    def offset_block(self, d):
        return self.B

    def _fields(self):
        return (self.A, self.B)


@dataclass(frozen=True, eq=False)
class BandedSpec(_Spec):
    """A on the diagonal, B on the j-th block off-diagonals, zero elsewhere."""

    A: np.ndarray
    B: np.ndarray
    j: int = 1
    kind: str = field(default="banded", init=False)

    def __post_init__(self):
        A = _block(self.A, "A")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", _block(self.B, "B", _mode_of(A)))
        if int(self.j) != self.j or self.j < 1:
            raise InvalidArgumentError(f"band offset j must be a positive integer, got {self.j!r}")
        object.__setattr__(self, "j", int(self.j))

    def offset_block(self, d):
        return self.B if d == self.j else np.zeros_like(self.A)

    def as_mixture(self) -> "ToeplitzMixtureSpec":
        return ToeplitzMixtureSpec(self.A, [Band(self.j, 1.0, self.B)])

    def _fields(self):
        return (self.A, self.B, self.j)


@dataclass(frozen=True, eq=False)
class Band:
    j: int
    p: float
    B: np.ndarray

    def __eq__(self, other):
        if not isinstance(other, Band):
            return NotImplemented
        return self.j == other.j and self.p == other.p and np.array_equal(self.B, other.B)

    __hash__ = None


@dataclass(frozen=True, eq=False)
class ToeplitzMixtureSpec(_Spec):
    """Block Toeplitz chain with p_j B_j on the j-th block off-diagonals.

    The weights may sum to less than one; the missing mass sits on no band.
    """

    A: np.ndarray
    bands: Sequence[Band]
    kind: str = field(default="toeplitz_mixture", init=False)

    def __post_init__(self):
        A = _block(self.A, "A")
        object.__setattr__(self, "A", A)
        k = _mode_of(A)
        bands = []
        for idx, band in enumerate(self.bands):
            if not isinstance(band, Band):
                band = Band(*band)
            j, p = band.j, float(band.p)
            if int(j) != j or j < 1:
                raise InvalidArgumentError(f"bands[{idx}].j must be a positive integer, got {j!r}")
            if not 0.0 < p <= 1.0:
                raise InvalidArgumentError(f"bands[{idx}].p must lie in (0, 1], got {p!r}")
            bands.append(Band(int(j), p, _block(band.B, f"bands[{idx}].B", k)))
        js = [b.j for b in bands]
        if any(b <= a for a, b in zip(js, js[1:])):
            raise InvalidArgumentError(f"band offsets must be strictly increasing, got {js}")
        if sum(b.p for b in bands) > 1.0 + WEIGHT_SUM_SLACK:
            raise InvalidArgumentError("band weights sum to more than one")
        object.__setattr__(self, "bands", tuple(bands))

    @property
    def weights(self) -> dict:
        return {b.j: b.p for b in self.bands}

    def common_block(self):
        """The shared B when every band carries the same block, else None."""
        if not self.bands:
            return np.zeros_like(self.A)
        B0 = self.bands[0].B
        return B0 if all(np.array_equal(b.B, B0) for b in self.bands) else None

    def offset_block(self, d):
        for b in self.bands:
            if b.j == d:
                return b.p * b.B
        return np.zeros_like(self.A)

    def _fields(self):
        return (self.A, tuple((b.j, b.p, b.B) for b in self.bands))


ChainSpec = ExchangeableSpec | BandedSpec | ToeplitzMixtureSpec


@dataclass(frozen=True, eq=False)
class FiniteSection:
    spec: ChainSpec
    sites: tuple
    matrix: np.ndarray

    @property
    def n(self) -> int:
        return len(self.sites)

    @property
    def modes(self) -> int:
        return self.matrix.shape[0] // 2


def _check_sites(sites) -> tuple:
    sites = tuple(int(i) for i in sites)
    if not sites:
        raise InvalidArgumentError("site set must be nonempty")
    if min(sites) < 1:
        raise InvalidArgumentError(f"site indices start at 1, got {min(sites)}")
    if any(b <= a for a, b in zip(sites, sites[1:])):
        raise InvalidArgumentError(f"site indices must be strictly increasing and distinct: {sites}")
    return sites


def materialize(spec: ChainSpec, sites: Iterable[int]) -> FiniteSection:
    """Assemble Σ(I) for the ordered site set I."""
    sites = _check_sites(sites)
    k, n = spec.k, len(sites)
    dim = 2 * k * n
    if dim > size_cap():
        raise ResourceLimitError(f"section would have {dim} rows, cap is {size_cap()}")
    M = np.zeros((dim, dim))
    w = 2 * k
    blocks = {}
    for r in range(n):
        M[r * w:(r + 1) * w, r * w:(r + 1) * w] = spec.A
        for s in range(r + 1, n):
            d = sites[s] - sites[r]
            if d not in blocks:
                blocks[d] = spec.offset_block(d)
            M[r * w:(r + 1) * w, s * w:(s + 1) * w] = blocks[d]
            M[s * w:(s + 1) * w, r * w:(r + 1) * w] = blocks[d].T
    M.flags.writeable = False
    return FiniteSection(spec, sites, M)


def leading_section(spec: ChainSpec, n: int) -> FiniteSection:
    """Σ_n = Σ({1, ..., n})."""
    if n < 1:
        raise InvalidArgumentError(f"section size must be positive, got {n}")
    return materialize(spec, range(1, n + 1))


def restrict(section: FiniteSection, sites: Iterable[int]) -> FiniteSection:
    sites = _check_sites(sites)
    pos = {s: r for r, s in enumerate(section.sites)}
    missing = [s for s in sites if s not in pos]
    if missing:
        raise InvalidArgumentError(f"sites {missing} are not in the section {section.sites}")
    w = 2 * section.spec.k
    idx = np.concatenate([np.arange(pos[s] * w, (pos[s] + 1) * w) for s in sites])
    M = section.matrix[np.ix_(idx, idx)].copy()
    M.flags.writeable = False
    return FiniteSection(section.spec, sites, M)


# -- structural n x n matrices ------------------------------------------------

def strict_upper_ones(n: int) -> np.ndarray:
    """N_n: ones strictly above the diagonal."""
    return np.triu(np.ones((n, n)), 1)


def superdiagonal(n: int, j: int) -> np.ndarray:
    """L_n^j: ones on the j-th superdiagonal (defined for 1 <= j <= n-1)."""
    if not 1 <= j <= n - 1:
        raise InvalidArgumentError(f"superdiagonal offset must satisfy 1 <= j <= n-1, got j={j}, n={n}")
    return np.eye(n, k=j)


def all_ones(n: int) -> np.ndarray:
    return np.ones((n, n))


def uniform_vector(n: int) -> np.ndarray:
    """psi_n = (1, ..., 1) / sqrt(n)."""
    return np.full(n, 1.0 / np.sqrt(n))


def weight_toeplitz(weights, n: int) -> np.ndarray:
    """T_n(p): symmetric Toeplitz, zero diagonal, entry p_{|r-s|}."""
    col = np.zeros(n)
    for j, p in dict(weights).items():
        if j < n:
            col[j] = p
    idx = np.abs(np.subtract.outer(np.arange(n), np.arange(n)))
    return col[idx]


def kron_to_site_major(n: int, k: int) -> np.ndarray:
    """Permutation taking the X (x) I_n layout to the site-major layout.

    ``M_site = M_kron[np.ix_(perm, perm)]`` where in the Kronecker layout
    row ``a*n + r`` is intra-site coordinate a of site r.
    """
    w = 2 * k
    return np.array([a * n + r for r in range(n) for a in range(w)])


# -- closed-form criteria -------------------------------------------------------

@dataclass(frozen=True)
class Criterion:
    ok: bool
    reasons: tuple = ()
    margins: dict = field(default_factory=dict)

    def __bool__(self):
        return self.ok


def _psd_test(B, tol):
    B = 0.5 * (B + B.T)
    w = np.linalg.eigvalsh(B)
    return w[0] >= -tol * (1.0 + np.max(np.abs(w))), float(w[0])


def exchangeable_is_g_chain(A, B, tol: float = PSD_TOL, sym_tol: float = SYM_TOL) -> Criterion:
    """Necessary and sufficient test for the exchangeable chain Σ(A, B).

    Valid iff B is symmetric, B >= 0 and A - B is a G-matrix.
    """
    A = as_symmetric(A, "A", sym_tol)
    B = as_square(B, "B")
    if A.shape != B.shape:
        raise InvalidArgumentError(f"A is {A.shape} but B is {B.shape}")
    reasons = []
    asym = float(np.max(np.abs(B - B.T)))
    if asym > tol:
        reasons.append("B not symmetric")
    psd, b_min = _psd_test(B, tol)
    if not psd:
        reasons.append("B not nonnegative definite")
    diff = is_g_matrix(A - 0.5 * (B + B.T), tol, sym_tol)
    if not diff:
        reasons.append("A - B not a G-matrix")
    margins = {"B_asymmetry": asym, "B_min_eig": b_min, "A_minus_B_min_eig": diff.min_eig}
    return Criterion(not reasons, tuple(reasons), margins)


def banded_is_g_chain(A, B, tol: float = PSD_TOL, sym_tol: float = SYM_TOL) -> Criterion:
    """Test that A + tB is a G-matrix for all t in [-2, 2].

    The feasible set of t is convex, so the two endpoints decide it.
    """
    A = as_symmetric(A, "A", sym_tol)
    B = as_symmetric(B, "B", sym_tol)
    if A.shape != B.shape:
        raise InvalidArgumentError(f"A is {A.shape} but B is {B.shape}")
    plus = is_g_matrix(A + 2 * B, tol, sym_tol)
    minus = is_g_matrix(A - 2 * B, tol, sym_tol)
    reasons = []
    if not plus:
        reasons.append("A + 2B not a G-matrix")
    if not minus:
        reasons.append("A - 2B not a G-matrix")
    return Criterion(not reasons, tuple(reasons),
                     {"A_plus_2B_min_eig": plus.min_eig, "A_minus_2B_min_eig": minus.min_eig})


class MixtureStatus(str, enum.Enum):
    SUFFICIENT_PASS = "sufficient-pass"
    UNKNOWN = "unknown"


def mixture_is_g_chain(spec: ToeplitzMixtureSpec, tol: float = PSD_TOL) -> MixtureStatus:
    """Sufficient test: every band passes the banded criterion.

    A failure is reported as UNKNOWN, never as invalid.
    """
    ok = all(banded_is_g_chain(spec.A, b.B, tol) for b in spec.bands) \
        if spec.bands else bool(is_g_matrix(spec.A, tol))
    return MixtureStatus.SUFFICIENT_PASS if ok else MixtureStatus.UNKNOWN


def direct_section_check(spec: ChainSpec, n_max: int, tol: float = PSD_TOL) -> list[GTest]:
    """Apply the G-matrix test to Σ_1, ..., Σ_{n_max}."""
    if n_max < 1:
        raise InvalidArgumentError(f"n_max must be positive, got {n_max}")
    if 2 * spec.k * n_max > size_cap():
        raise ResourceLimitError(f"n_max={n_max} exceeds the size cap {size_cap()}")
    return [is_g_matrix(leading_section(spec, n).matrix, tol) for n in range(1, n_max + 1)]


@dataclass(frozen=True, eq=False)
class SeparabilityCertificate:
    """Σ(I) = product_part + correlated_part, both in site-major layout.

    ``product_part`` is I_n (x) (A - B), the covariance of an n-fold product
    state; ``correlated_part`` is ones (x) B, nonnegative when B >= 0.
    """

    sites: tuple
    product_part: np.ndarray
    correlated_part: np.ndarray
    residual: float
    a_minus_b: GTest
    b_min_eig: float
    separable: bool


def separability_certificate(spec: ExchangeableSpec, sites, tol: float = PSD_TOL) -> SeparabilityCertificate:
    if not isinstance(spec, ExchangeableSpec):
        raise InvalidArgumentError("separability certificates exist only for exchangeable chains")
    crit = exchangeable_is_g_chain(spec.A, spec.B, tol)
    if not crit:
        raise InvalidArgumentError(f"invalid exchangeable chain: {', '.join(crit.reasons)}")
    section = materialize(spec, sites)
    n = section.n
    A, B = spec.A, 0.5 * (spec.B + spec.B.T)
    product = np.kron(np.eye(n), A - B)
    correlated = np.kron(all_ones(n), B)
    residual = float(np.max(np.abs(section.matrix - product - correlated)))
    diff = is_g_matrix(A - B, tol)
    b_ok, b_min = _psd_test(B, tol)
    return SeparabilityCertificate(section.sites, product, correlated, residual, diff, b_min,
                                   bool(diff) and b_ok)


__all__ = [
    "Band", "BandedSpec", "ChainSpec", "Criterion", "ExchangeableSpec", "FiniteSection",
    "MixtureStatus", "SeparabilityCertificate", "ToeplitzMixtureSpec", "all_ones",
    "banded_is_g_chain", "direct_section_check", "exchangeable_is_g_chain",
    "kron_to_site_major", "leading_section", "materialize", "mixture_is_g_chain", "restrict",
    "separability_certificate", "size_cap", "strict_upper_ones", "superdiagonal",
    "uniform_vector", "weight_toeplitz",
]
