"""Decide what merging B into C does to a tripartite state.

Each criterion is three-valued: ``holds`` is True, False or None (unknown),
because most of them lean on one-sided witnesses.  The final verdict takes
the first certified answer in the precedence order

    PERFECT > VANISHING > NO_PERFECT_MERGE > INCONCLUSIVE

and a state certifying both PERFECT and VANISHING is a hard error, since
no state can do that; seeing it means a bug or a broken tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bloch import rank_of_family
from .core import Bipartition, DensityMatrix, TripartiteState, partial_trace
from .families import SEP_FAMILY_BLOCKS
from .measures import (
    conditional_entropy,
    hashing_witness,
    is_ppt,
    mutual_information,
    negativity_witness,
)

__all__ = [
    "PERFECT",
    "VANISHING",
    "NO_PERFECT_MERGE",
    "INCONCLUSIVE",
    "VERDICTS",
    "InconsistentCriteriaError",
    "CriterionResult",
    "ClassificationReport",
    "check_perfect_sufficient",
    "check_vanishing_ppt_merge",
    "check_vanishing_locc_merge",
    "check_necessary_ppt",
    "check_sep_family_obstruction",
    "fidelity_lower_bound",
    "merging_cost_pure",
    "classify",
]

PERFECT = "PERFECT"
VANISHING = "VANISHING"
NO_PERFECT_MERGE = "NO_PERFECT_MERGE"
INCONCLUSIVE = "INCONCLUSIVE"
VERDICTS = (PERFECT, VANISHING, NO_PERFECT_MERGE, INCONCLUSIVE)

DEFAULT_TOL = 1e-9

_OBSTRUCTION_WEIGHT_FLOOR = 1e-6


class InconsistentCriteriaError(RuntimeError):
    """Two mutually exclusive criteria both certified; never a valid output."""


@dataclass(frozen=True)
class CriterionResult:
    """One criterion's outcome: certified true, certified false, or unknown.

    ``witness`` is the scalar the decision was made on and ``condition``
    states the decision rule in plain terms.
    """

    name: str
    holds: bool | None
    witness: float | None
    condition: str


@dataclass(frozen=True)
class ClassificationReport:
    verdict: str
    criteria: tuple[CriterionResult, ...]
    witnesses: dict[str, float]
    fidelity_lower_bound: float
    consistent: bool = True


def check_perfect_sufficient(state: TripartiteState, tol: float = DEFAULT_TOL) -> CriterionResult:
    """Merging succeeds perfectly when S(BC) - S(C) is non-positive."""
    ce = conditional_entropy(state)
    return CriterionResult(
        name="perfect_merge_sufficient",
        holds=bool(ce <= tol),
        witness=ce,
        condition="S(BC) - S(C) <= tol",
    )


def check_vanishing_ppt_merge(state: TripartiteState, tol: float = DEFAULT_TOL) -> CriterionResult:
    """Merging fidelity collapses to zero even with PPT assistance.

    Certified when the state is PPT across AB:C while provably distillable
    across A:BC.  If the AB:C side is PPT but the distillability witness
    does not fire, the answer is unknown, not false.
    """
    ppt = is_ppt(state.state, state.cut_ab_c(), tol)
    h = hashing_witness(state.state, state.cut_a_bc()).value
    if not ppt:
        holds = False
    elif h > tol:
        holds = True
    else:
        holds = None
    return CriterionResult(
        name="vanishing_ppt_merge",
        holds=holds,
        witness=h,
        condition="PPT across AB:C and hashing witness across A:BC > tol",
    )


def check_vanishing_locc_merge(state: TripartiteState, tol: float = DEFAULT_TOL) -> CriterionResult:
    """Merging fidelity collapses to zero for unassisted LOCC.

    Certified when the state is distillable across A:BC while the
    log-negativity across AB:C vanishes.  Anything else is unknown: a
    positive log-negativity does not certify that merging succeeds.
    """
    h = hashing_witness(state.state, state.cut_a_bc()).value
    neg = negativity_witness(state.state, state.cut_ab_c()).value
    holds = True if (h > tol and neg <= tol) else None
    return CriterionResult(
        name="vanishing_locc_merge",
        holds=holds,
        witness=h,
        condition="hashing witness across A:BC > tol and log-negativity across AB:C <= tol",
    )


def check_necessary_ppt(state: TripartiteState, tol: float = DEFAULT_TOL) -> CriterionResult:
    """Necessary condition: merging cannot beat the AB:C entanglement budget.

    Perfect merging needs distillable entanglement across A:BC not to
    exceed what the AB:C cut can supply.  When the certified lower bound
    across A:BC beats the certified upper bound across AB:C, the condition
    is violated and ``holds`` is False (perfect merging impossible).  The
    witnesses cannot certify the condition itself, so it is never True.
    """
    h = hashing_witness(state.state, state.cut_a_bc()).value
    neg = negativity_witness(state.state, state.cut_ab_c()).value
    margin = h - neg
    return CriterionResult(
        name="necessary_entanglement_budget",
        holds=False if margin > tol else None,
        witness=margin,
        condition="violated when hashing(A:BC) exceeds log-negativity(AB:C) + tol",
    )


def check_sep_family_obstruction(state: TripartiteState, tol: float = DEFAULT_TOL) -> CriterionResult:
    """Detect the classically flagged separable structure that blocks merging.

    Looks for rho = sum_i p_i |i><i|_A (x) sigma_i_BC with B and C single
    qubits, all p_i above 1e-6, every sigma_i PPT across B:C, and the
    sigma_i spanning the full 15-dimensional Bloch space.  States with that
    structure admit no perfect merge even though they are unentangled.
    """
    condition = (
        "A-diagonal mixture of B:C-separable qubit pairs with full Bloch rank"
    )

    def fail() -> CriterionResult:
        return CriterionResult(
            name="separable_family_obstruction",
            holds=False,
            witness=None,
            condition=condition,
        )

    dims = state.dims
    b, c = state.b_indices, state.c_indices
    if len(b) != 1 or len(c) != 1 or dims[b[0]] != 2 or dims[c[0]] != 2:
        return fail()
    da = 1
    for i in state.a_indices:
        da *= dims[i]
    if not SEP_FAMILY_BLOCKS <= da <= 16:
        return fail()

    n = len(dims)
    order = list(state.a_indices) + list(b) + list(c)
    perm = order + [n + i for i in order]
    arr = state.state.data.reshape(dims + dims).transpose(perm).reshape(da, 4, da, 4)
    off_diag = 0.0
    for i in range(da):
        for j in range(da):
            if i != j:
                off_diag = max(off_diag, float(abs(arr[i, :, j, :]).max()))
    if off_diag > tol:
        return fail()

    weights = [float(arr[i, :, i, :].trace().real) for i in range(da)]
    if min(weights) < _OBSTRUCTION_WEIGHT_FLOOR:
        return fail()
    blocks = [DensityMatrix((2, 2), arr[i, :, i, :] / weights[i]) for i in range(da)]
    bc_cut = Bipartition((0,), (1,))
    if not all(is_ppt(blk, bc_cut, tol) for blk in blocks):
        return fail()
    rank = rank_of_family(blocks)
    return CriterionResult(
        name="separable_family_obstruction",
        holds=bool(rank == SEP_FAMILY_BLOCKS),
        witness=float(rank),
        condition=condition,
    )


def _mutual_information_between(
    state: TripartiteState, group1: tuple[int, ...], group2: tuple[int, ...]
) -> float:
    keep = sorted(group1 + group2)
    reduced = partial_trace(state.state, keep)
    left = tuple(keep.index(i) for i in group1)
    return mutual_information(reduced, Bipartition.of(left, len(keep)))


def fidelity_lower_bound(state: TripartiteState) -> float:
    """Fidelity achievable by handing C the correlations it already holds.

    Equals 2 ** ((I(A:C) - I(A:BC)) / 2).  Discarding B can only shrink
    mutual information with A, so the value lies in (0, 1], reaching 1
    exactly when B carries nothing about A that C lacks.
    """
    i_ac = _mutual_information_between(state, state.a_indices, state.c_indices)
    i_abc = _mutual_information_between(
        state, state.a_indices, state.b_indices + state.c_indices
    )
    return float(2.0 ** (0.5 * (i_ac - i_abc)))


def merging_cost_pure(state: TripartiteState, atol: float = DEFAULT_TOL) -> float:
    """Entanglement rate consumed (positive) or released (negative) by merging.

    Only meaningful for pure global states, where the rate is exactly
    S(BC) - S(C); mixed inputs are rejected.
    """
    if state.state.purity() < 1.0 - atol:
        raise ValueError(
            f"merging cost is defined for pure states; purity = {state.state.purity():.6f}"
        )
    return conditional_entropy(state)


def classify(state: TripartiteState, tol: float = DEFAULT_TOL) -> ClassificationReport:
    """Run every criterion and combine them into a single verdict.

    Raises :class:`InconsistentCriteriaError` when the perfect and
    vanishing criteria both certify, which no state can do.
    """
    perfect = check_perfect_sufficient(state, tol)
    vanishing_ppt = check_vanishing_ppt_merge(state, tol)
    vanishing_locc = check_vanishing_locc_merge(state, tol)
    necessary = check_necessary_ppt(state, tol)
    obstruction = check_sep_family_obstruction(state, tol)

    if perfect.holds and vanishing_ppt.holds:
        raise InconsistentCriteriaError(
            "state certifies both a perfect merge and a vanishing merge; "
            f"conditional entropy = {perfect.witness!r}, "
            f"hashing witness = {vanishing_ppt.witness!r}"
        )

    if perfect.holds:
        verdict = PERFECT
    elif vanishing_ppt.holds:
        verdict = VANISHING
    elif obstruction.holds or necessary.holds is False:
        verdict = NO_PERFECT_MERGE
    else:
        verdict = INCONCLUSIVE

    witnesses = {
        "conditional_entropy": float(perfect.witness),
        "hashing_a_bc": float(vanishing_ppt.witness),
        "log_negativity_ab_c": float(
            negativity_witness(state.state, state.cut_ab_c()).value
        ),
    }
    return ClassificationReport(
        verdict=verdict,
        criteria=(perfect, vanishing_ppt, vanishing_locc, necessary, obstruction),
        witnesses=witnesses,
        fidelity_lower_bound=fidelity_lower_bound(state),
        consistent=True,
    )
