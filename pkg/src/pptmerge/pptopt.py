"""Convex optimisation over states that stay positive under partial transpose.

The feasible set is

    F(cut) = { sigma : sigma >= 0, sigma^{T_cut} >= 0, Tr sigma = 1 }

an intersection of two cones and a hyperplane.  Projections onto F use
Dykstra's alternating method; on top of that sit a projected-ascent solver
for the linear overlap objective (with a level-set bisection fallback) and
a projected-subgradient solver for trace-distance minimisation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .core import (
    Bipartition,
    DensityMatrix,
    PureState,
    SizeLimitError,
    _pt_array,
)

__all__ = [
    "OPT_DIMENSION_CAP",
    "PptOptConfig",
    "PptOptResult",
    "GeoDistResult",
    "project_ppt_state",
    "max_overlap_ppt",
    "min_trace_distance_ppt",
    "geometric_distillability_ppt",
]

OPT_DIMENSION_CAP = 64

# Consecutive accepted steps with gain below tol before ascent stops.
_STALL_LIMIT = 5
_MIN_STEP = 1e-8


@dataclass
class PptOptConfig:
    """Knobs shared by the optimisers.

    ``max_iters`` caps the total number of Dykstra sweeps a call may spend,
    summed over every inner projection.  ``step_rule`` selects the nominal
    step schedule: ``"fixed"`` keeps it constant (with backtracking),
    ``"diminishing"`` decays it as 1/sqrt(k).  ``cut`` is a fallback used
    when the caller does not pass one explicitly.
    """

    max_iters: int = 5000
    tol: float = 1e-7
    step_rule: str = "fixed"
    bisection_depth: int = 40
    cut: Bipartition | None = None

    def __post_init__(self):
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")
        if not self.tol > 0.0:
            raise ValueError("tol must be positive")
        if self.step_rule not in ("fixed", "diminishing"):
            raise ValueError(f"unknown step_rule {self.step_rule!r}")
        if self.bisection_depth < 0:
            raise ValueError("bisection_depth must be non-negative")


@dataclass
class PptOptResult:
    """Outcome of one optimiser call.

    ``value`` is always recomputed from ``certificate``, so it is a valid
    one-sided bound even when ``converged`` is false.  ``residuals`` holds
    the certificate's final constraint violations and
    ``objective_history`` the accepted objective values in order.
    """

    value: float
    certificate: DensityMatrix
    iterations: int
    converged: bool
    residuals: dict[str, float]
    objective_history: list[float] = field(default_factory=list)


@dataclass(frozen=True)
class GeoDistResult:
    """Bracket [low, high] for the geometric distillability 1 - sup F.

    The two ends coincide for pure inputs, where the overlap optimiser is
    exact; for mixed inputs they come from the trace-distance optimum via
    1 - F <= T <= sqrt(1 - F^2).
    """

    low: float
    high: float
    detail: PptOptResult


def _herm(M: np.ndarray) -> np.ndarray:
    return 0.5 * (M + M.conj().T)


def _proj_psd(M: np.ndarray) -> np.ndarray:
    w, V = np.linalg.eigh(_herm(M))
    if w[0] >= 0.0:
        return M
    return (V * np.clip(w, 0.0, None)) @ V.conj().T


def _min_eig(M: np.ndarray) -> float:
    return float(np.linalg.eigvalsh(_herm(M))[0])


def _dykstra(
    matrix: np.ndarray,
    dims: Sequence[int],
    transpose: Sequence[int],
    tol: float,
    max_sweeps: int,
) -> tuple[np.ndarray, int]:
    """Project onto F(cut) from ``matrix``; returns (point, sweeps used).

    Cycle order ends on the plain PSD cone so the final iterate is exactly
    positive; the trace and partial-transpose residuals are both held to
    ``tol`` by the stopping rule.
    """
    D = matrix.shape[0]
    eye = np.eye(D)
    x = _herm(matrix)
    p = np.zeros_like(x)
    q = np.zeros_like(x)
    prev = None
    sweeps = 0
    for sweeps in range(1, max_sweeps + 1):
        x = x - (np.trace(x).real - 1.0) / D * eye
        shifted = x + q
        y = _pt_array(_proj_psd(_pt_array(shifted, dims, transpose)), dims, transpose)
        q = shifted - y
        shifted = y + p
        x = _proj_psd(shifted)
        p = shifted - x
        if prev is not None and float(np.max(np.abs(x - prev))) < tol:
            if abs(np.trace(x).real - 1.0) < tol and _min_eig(
                _pt_array(x, dims, transpose)
            ) > -10.0 * tol:
                break
        prev = x
    return x, sweeps


def _finish_certificate(
    x: np.ndarray, dims: tuple[int, ...], transpose: Sequence[int], tol: float
) -> tuple[DensityMatrix, dict[str, float]]:
    """Polish the final iterate into a certificate that is feasible to ``tol``.

    Plain alternating projections between the two cones, ending on the PSD
    cone and a trace renormalisation, so the output is an exact state and
    only the partial-transpose residual can remain, bounded by ``tol``.
    Feasibility-only polishing keeps the certified-bound semantics honest
    even when the optimisation itself ran out of budget.
    """
    x = _herm(x)
    for _ in range(200):
        x = _pt_array(_proj_psd(_pt_array(x, dims, transpose)), dims, transpose)
        x = _proj_psd(x)
        x = x / np.trace(x).real
        if _min_eig(_pt_array(x, dims, transpose)) >= -tol:
            break
    cert = DensityMatrix(dims, x)
    residuals = {
        "trace": abs(float(np.trace(cert.data).real) - 1.0),
        "psd": max(0.0, -_min_eig(cert.data)),
        "ppt": max(0.0, -_min_eig(_pt_array(cert.data, dims, transpose))),
    }
    return cert, residuals


def _resolve_cut(cut: Bipartition | None, config: PptOptConfig, n: int) -> Bipartition:
    cut = cut if cut is not None else config.cut
    if cut is None:
        raise ValueError("a cut must be given either directly or via the config")
    if cut.n_subsystems != n:
        raise ValueError(
            f"cut covers {cut.n_subsystems} subsystems but the state has {n}"
        )
    return cut


def project_ppt_state(
    matrix,
    dims: Sequence[int],
    cut: Bipartition | None = None,
    config: PptOptConfig | None = None,
) -> DensityMatrix:
    """Nearest state of F(cut) to a Hermitian matrix, in Frobenius norm."""
    config = config or PptOptConfig()
    dims = tuple(int(d) for d in dims)
    cut = _resolve_cut(cut, config, len(dims))
    M = np.asarray(matrix, dtype=complex)
    D = int(np.prod(dims))
    if M.shape != (D, D):
        raise ValueError(f"matrix shape {M.shape} does not match dims {dims}")
    if float(np.max(np.abs(M - M.conj().T))) > 1e-8:
        raise ValueError("projection input must be Hermitian")
    x, _ = _dykstra(M, dims, cut.left, config.tol, config.max_iters)
    cert, _ = _finish_certificate(x, dims, cut.left, config.tol)
    return cert


def _overlap(P: np.ndarray, x: np.ndarray) -> float:
    return float(np.real(np.sum(P.conj() * x)))


def _feasible_at_level(
    P: np.ndarray,
    dims: tuple[int, ...],
    transpose: Sequence[int],
    level: float,
    start: np.ndarray,
    tol: float,
    budget: int,
) -> tuple[bool, np.ndarray, int]:
    """Alternating projections onto {overlap >= level} and F(cut).

    Returns (feasible, point, sweeps used).  Infeasibility is declared once
    the overlap stops improving while still short of the level; the
    feasible side is sound, the infeasible side is a numerical judgement.
    """
    x = start
    used = 0
    slack = max(10.0 * tol, 1e-9)
    stagnant = 0
    last = -np.inf
    while used < budget:
        gap = level - _overlap(P, x)
        if gap > 0.0:
            x = x + gap * P  # ||P||_F = 1 for a pure projector
        x, sweeps = _dykstra(x, dims, transpose, tol, min(200, budget - used))
        used += sweeps
        val = _overlap(P, x)
        if val >= level - slack:
            return True, x, used
        if val <= last + tol:
            stagnant += 1
            if stagnant >= 5:
                return False, x, used
        else:
            stagnant = 0
        last = val
    return False, x, used


def max_overlap_ppt(
    psi: PureState,
    cut: Bipartition | None = None,
    config: PptOptConfig | None = None,
) -> PptOptResult:
    """Maximise <psi|sigma|psi> over sigma in F(cut).

    Projected ascent from the maximally mixed state, accepting only steps
    that do not lose more than ``tol``; once it stalls, a bisection over
    the level sets {overlap >= t} either certifies the stall as optimal or
    pushes past it.  The returned value is the overlap of the returned
    certificate, hence a lower bound on the true maximum regardless of the
    converged flag.
    """
    config = config or PptOptConfig()
    if psi.dim > OPT_DIMENSION_CAP:
        raise SizeLimitError(
            f"dimension {psi.dim} exceeds the optimiser cap {OPT_DIMENSION_CAP}"
        )
    dims = psi.dims
    cut = _resolve_cut(cut, config, len(dims))
    D = psi.dim
    P = np.outer(psi.amplitudes, psi.amplitudes.conj())
    budget = config.max_iters
    used = 0

    x = np.eye(D, dtype=complex) / D
    f = _overlap(P, x)
    history = [f]
    nominal = 1.0
    alpha = nominal
    stall = 0
    exhausted = False
    k = 0
    while True:
        if used >= budget:
            exhausted = True
            break
        if stall >= _STALL_LIMIT or alpha < _MIN_STEP:
            break
        k += 1
        if config.step_rule == "diminishing":
            alpha = min(alpha, nominal / np.sqrt(k))
        cand, sweeps = _dykstra(
            x + alpha * P, dims, cut.left, config.tol, min(500, budget - used)
        )
        used += sweeps
        fc = _overlap(P, cand)
        if fc >= f - config.tol:
            stall = stall + 1 if fc <= f + config.tol else 0
            x = cand
            f = max(f, fc)
            history.append(fc)
            if config.step_rule == "fixed":
                alpha = nominal
        else:
            alpha *= 0.5

    # Level-set bisection: first probe slightly above the stall value to
    # certify optimality cheaply; only bisect further if the probe passes.
    converged = False
    if not exhausted and config.bisection_depth > 0:
        lo, hi = f, 1.0
        probe = min(lo + max(100.0 * config.tol, 1e-4), hi)
        feasible, point, spent = _feasible_at_level(
            P, dims, cut.left, probe, x, config.tol, budget - used
        )
        used += spent
        if not feasible:
            converged = used < budget
        else:
            x, f = point, _overlap(P, point)
            history.append(f)
            lo = f
            for _ in range(config.bisection_depth):
                if hi - lo <= max(config.tol, 1e-5) or used >= budget:
                    break
                mid = 0.5 * (lo + hi)
                feasible, point, spent = _feasible_at_level(
                    P, dims, cut.left, mid, x, config.tol, budget - used
                )
                used += spent
                if feasible:
                    x = point
                    f = max(f, _overlap(P, point))
                    history.append(_overlap(P, point))
                    lo = mid
                else:
                    hi = mid
            converged = hi - lo <= max(config.tol, 1e-5) and used < budget

    cert, residuals = _finish_certificate(x, dims, cut.left, config.tol)
    value = float(np.real(psi.amplitudes.conj() @ cert.data @ psi.amplitudes))
    history.append(value)
    return PptOptResult(
        value=value,
        certificate=cert,
        iterations=used,
        converged=converged,
        residuals=residuals,
        objective_history=history,
    )


def min_trace_distance_ppt(
    rho: DensityMatrix,
    cut: Bipartition | None = None,
    config: PptOptConfig | None = None,
) -> PptOptResult:
    """Minimise the trace distance from ``rho`` to F(cut).

    Projected subgradient descent seeded with the Frobenius projection of
    ``rho``; the best feasible iterate is kept, so the returned value is an
    upper bound on the true minimum.  Accuracy is coarser than the overlap
    solver's; expect about 1e-3 at the default budget.
    """
    config = config or PptOptConfig()
    if rho.dim > OPT_DIMENSION_CAP:
        raise SizeLimitError(
            f"dimension {rho.dim} exceeds the optimiser cap {OPT_DIMENSION_CAP}"
        )
    dims = rho.dims
    cut = _resolve_cut(cut, config, len(dims))
    budget = config.max_iters

    def tdist(x: np.ndarray) -> float:
        return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(_herm(rho.data - x)))))

    x, used = _dykstra(rho.data, dims, cut.left, config.tol, min(500, budget))
    best = tdist(x)
    best_x = x
    history = [best]
    nominal = max(0.05, 0.5 * best)
    k = 0
    stale = 0
    converged = False
    while used < budget:
        k += 1
        w, V = np.linalg.eigh(_herm(rho.data - x))
        subgrad = (V * np.sign(w)) @ V.conj().T
        alpha = nominal if config.step_rule == "fixed" else nominal / np.sqrt(k)
        x, sweeps = _dykstra(
            x + 0.5 * alpha * subgrad, dims, cut.left, config.tol, min(200, budget - used)
        )
        used += sweeps
        val = tdist(x)
        improved = val < best - config.tol
        if val < best:
            best, best_x = val, x
        if improved:
            history.append(val)
            stale = 0
        else:
            stale += 1
            if stale >= 100:
                converged = True
                break

    cert, residuals = _finish_certificate(best_x, dims, cut.left, config.tol)
    value = tdist(cert.data)
    history.append(value)
    return PptOptResult(
        value=value,
        certificate=cert,
        iterations=used,
        converged=converged,
        residuals=residuals,
        objective_history=history,
    )


def _as_pure(state: PureState | DensityMatrix) -> PureState | None:
    if isinstance(state, PureState):
        return state
    if state.purity() >= 1.0 - 1e-9:
        w, V = np.linalg.eigh(state.data)
        vec = V[:, -1]
        return PureState(state.dims, vec / np.linalg.norm(vec))
    return None


def geometric_distillability_ppt(
    state: PureState | DensityMatrix,
    cut: Bipartition | None = None,
    config: PptOptConfig | None = None,
) -> GeoDistResult:
    """Distance 1 - sup_{sigma in F(cut)} F(state, sigma), as a bracket.

    Pure inputs take the exact route through the overlap optimiser, where
    the fidelity is the square root of the overlap and the bracket
    collapses to a point.  Mixed inputs yield the interval
    ``[1 - sqrt(1 - T^2), T]`` with T the minimal trace distance to the
    feasible set.
    """
    if state.dim > OPT_DIMENSION_CAP:
        raise SizeLimitError(
            f"dimension {state.dim} exceeds the optimiser cap {OPT_DIMENSION_CAP}"
        )
    pure = _as_pure(state)
    if pure is not None:
        res = max_overlap_ppt(pure, cut, config)
        value = 1.0 - float(np.sqrt(max(0.0, res.value)))
        return GeoDistResult(low=value, high=value, detail=res)
    res = min_trace_distance_ppt(state, cut, config)
    t = min(1.0, res.value)
    low = max(0.0, 1.0 - float(np.sqrt(max(0.0, 1.0 - t * t))))
    return GeoDistResult(low=low, high=t, detail=res)
