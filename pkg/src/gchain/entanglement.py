"""Two-mode entanglement detection by partial transposition.

For 1 + 1 modes a Gaussian state is separable iff its partial transpose
(momentum of the second mode reversed) is again a valid covariance matrix,
so :func:`simon_test` is conclusive. For larger bipartitions only a failed
PPT test is conclusive (:func:`ppt_test`).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .chains import Band, ToeplitzMixtureSpec, materialize
from .errors import InvalidArgumentError
from .gmatrix import PSD_TOL, SYM_TOL, as_symmetric, is_g_matrix

FLIP = np.diag([1.0, 1.0, 1.0, -1.0])
SQUEEZE = np.diag([1.0, -1.0])


class Verdict(str, enum.Enum):
    SEPARABLE = "separable"
    ENTANGLED = "entangled"
    BOUNDARY = "boundary"
    INCONCLUSIVE = "inconclusive"
    NOT_A_STATE = "not-a-state"


def _two_mode(G, sym_tol=SYM_TOL):
    G = as_symmetric(G, "two-mode covariance", sym_tol)
    if G.shape != (4, 4):
        raise InvalidArgumentError(f"expected a 4x4 two-mode covariance matrix, got {G.shape}")
    return G


def partial_transpose(G) -> np.ndarray:
    """Conjugate by diag(1, 1, 1, -1)."""
    G = _two_mode(G)
    return FLIP @ G @ FLIP


@dataclass(frozen=True)
class SimonResult:
    verdict: Verdict
    margin: float

    @property
    def entangled(self) -> bool:
        return self.verdict is Verdict.ENTANGLED


def _decide(G, flip, tol):
    if not is_g_matrix(G, tol):
        raise InvalidArgumentError("input is not a G-matrix; no entanglement verdict")
    pt = is_g_matrix(flip @ G @ flip, tol)
    scale = tol * (1.0 + np.linalg.norm(G, 2))
    if abs(pt.min_eig) <= scale:
        return Verdict.BOUNDARY, pt.min_eig
    return (Verdict.SEPARABLE if pt.min_eig > 0 else Verdict.ENTANGLED), pt.min_eig


def simon_test(G, tol: float = PSD_TOL) -> SimonResult:
    """Exact separability verdict for a two-mode Gaussian state.

    ``margin`` is the smallest eigenvalue of the partial transpose plus
    (i/2)J; a margin within tol of zero gives BOUNDARY.
    """
    G = _two_mode(G)
    verdict, margin = _decide(G, FLIP, tol)
    return SimonResult(verdict, float(margin))


def ppt_test(C, modes_a: Iterable[int], tol: float = PSD_TOL) -> SimonResult:
    """Partial transposition test for an arbitrary mode bipartition.

    Modes are 0-based; the momenta of the modes *not* in ``modes_a`` are
    reversed. A negative margin certifies entanglement; otherwise the result
    is SEPARABLE only for a 1 + 1 split and INCONCLUSIVE beyond that.
    """
    C = as_symmetric(C, "covariance matrix")
    m = C.shape[0] // 2
    modes_a = set(modes_a)
    if not modes_a or not modes_a < set(range(m)):
        raise InvalidArgumentError("modes_a must be a nonempty proper subset of the modes")
    signs = np.ones(2 * m)
    for mode in set(range(m)) - modes_a:
        signs[2 * mode + 1] = -1.0
    verdict, margin = _decide(C, np.diag(signs), tol)
    if verdict is Verdict.SEPARABLE and m > 2:
        verdict = Verdict.INCONCLUSIVE
    return SimonResult(verdict, float(margin))


def lemma_gamma(lam: float, c: float) -> np.ndarray:
    """[[lam I, c Z], [c Z, lam I]] with Z = diag(1, -1)."""
    return np.block([[lam * np.eye(2), c * SQUEEZE], [c * SQUEEZE, lam * np.eye(2)]])


@dataclass(frozen=True)
class WindowResult:
    lower: float
    upper: float
    verdict: Verdict
    is_state: bool


def lemma52_window(lam: float, c: float) -> WindowResult:
    """Closed-form verdict for lemma_gamma(lam, c).

    The state is valid iff c^2 <= lam^2 - 1/4 and entangled iff
    lam - 1/2 < c < sqrt(lam^2 - 1/4). Below the window the partial
    transpose has symplectic eigenvalue lam - c >= 1/2, so it is separable.
    """
    if not lam > 0.5:
        raise InvalidArgumentError(f"lambda must exceed 1/2, got {lam}")
    if not c > 0:
        raise InvalidArgumentError(f"c must be positive, got {c}")
    lo, hi = lam - 0.5, math.sqrt(lam * lam - 0.25)
    is_state = c * c <= lam * lam - 0.25
    if not is_state:
        verdict = Verdict.NOT_A_STATE
    elif lo < c < hi:
        verdict = Verdict.ENTANGLED
    elif c == hi:
        verdict = Verdict.BOUNDARY
    else:
        verdict = Verdict.SEPARABLE
    return WindowResult(lo, hi, verdict, is_state)


@dataclass(frozen=True)
class FamilyParams:
    """A = lam I_2, every band carries B = b diag(1, -1) with weight p_j."""

    lam: float
    b: float
    weights: Mapping[int, float]

    def __post_init__(self):
        if not self.lam > 0.5:
            raise InvalidArgumentError(f"lambda must exceed 1/2, got {self.lam}")
        if not self.b > 0:
            raise InvalidArgumentError(f"b must be positive, got {self.b}")
        w = {int(j): float(p) for j, p in dict(self.weights).items() if p != 0}
        object.__setattr__(self, "weights", dict(sorted(w.items())))

    @property
    def validity_bound(self) -> float:
        return 0.5 * math.sqrt(self.lam ** 2 - 0.25)

    @property
    def is_valid_chain(self) -> bool:
        return self.b < self.validity_bound

    @property
    def in_entangling_regime(self) -> bool:
        return 0.5 < self.lam < 5 / 6 and self.lam - 0.5 < self.b < self.validity_bound

    def spec(self) -> ToeplitzMixtureSpec:
        B = self.b * SQUEEZE
        return ToeplitzMixtureSpec(self.lam * np.eye(2), [Band(j, p, B) for j, p in self.weights.items()])


@dataclass(frozen=True)
class PairVerdict:
    pair: tuple
    c: float
    window: tuple
    verdict: Verdict
    margin: float
    sufficient_condition: bool
    covariance: np.ndarray

    def to_dict(self) -> dict:
        return {"pair": list(self.pair), "c": self.c, "window": list(self.window),
                "verdict": self.verdict.value, "margin": self.margin,
                "sufficient_condition": self.sufficient_condition}


def chain_pair_verdicts(params: FamilyParams, pairs, tol: float = PSD_TOL) -> list[PairVerdict]:
    """Simon verdicts for the two-site marginals rho({i, i'}) of the chain.

    The cross block of the pair is p_d B with d = i' - i; the reported
    sufficient condition is p_d b > lam - 1/2.
    """
    if not params.is_valid_chain:
        raise InvalidArgumentError(
            f"b={params.b} violates the chain validity bound b < {params.validity_bound:.12g}")
    spec = params.spec()
    lo, hi = params.lam - 0.5, math.sqrt(params.lam ** 2 - 0.25)
    out = []
    for pair in pairs:
        i, i2 = (int(x) for x in pair)
        if not 1 <= i < i2:
            raise InvalidArgumentError(f"pair must satisfy 1 <= i < j, got {pair}")
        G = materialize(spec, (i, i2)).matrix
        c = params.weights.get(i2 - i, 0.0) * params.b
        res = simon_test(G, tol)
        out.append(PairVerdict((i, i2), c, (lo, hi), res.verdict, res.margin, c > lo, G))
    return out
