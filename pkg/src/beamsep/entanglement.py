"""Entanglement and separability diagnostics for two-mode states."""
from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .fock import (
    DEFAULT_TOL,
    DomainError,
    JointState,
    NumericTolerances,
    SingleModeState,
    hermitian_eigvals,
    partial_trace,
    purity,
    reshape4,
)
from .states import moments

RANK_THRESHOLD = 1e-8


@dataclass(frozen=True)
class SchmidtResult:
    values: np.ndarray
    rank: int


def schmidt(state: JointState, rel_threshold: float = RANK_THRESHOLD) -> SchmidtResult:
    """Singular values of the amplitude grid, descending.

    The rank counts values above ``rel_threshold`` times the largest one.
    """
    if not state.is_pure:
        raise DomainError("Schmidt decomposition needs a pure state")
    v = np.linalg.svd(state.grid, compute_uv=False)
    rank = int(np.sum(v > rel_threshold * v[0])) if v[0] > 0 else 0
    return SchmidtResult(v, rank)


def _pure_e_p(state: JointState) -> float:
    s = schmidt(state).values ** 2
    norm = float(np.vdot(state.grid, state.grid).real)
    # 1 - sum s^2 = (1 - norm^2) + sum_{i != j} s_i s_j, summed without cancellation
    after = np.cumsum(s[::-1])[::-1]
    cross = 2 * float(np.sum(s[:-1] * after[1:]))
    return float((1 - norm) * (1 + norm) + cross)


def e_p(state: JointState) -> float:
    """1 - Tr[rho_b^2] of the reduced state of mode b."""
    if state.is_pure:
        return _pure_e_p(state)
    return 1.0 - purity(partial_trace(state, keep="mode_b"))


def partial_transpose(rho: JointState, mode: str = "mode_b") -> np.ndarray:
    """Transpose the chosen mode's indices of the density matrix."""
    d = rho.cutoff.dim
    r4 = reshape4(rho.dm(), d)
    if mode == "mode_b":
        pt = r4.transpose(0, 3, 2, 1)
    elif mode == "mode_a":
        pt = r4.transpose(2, 1, 0, 3)
    else:
        raise ValueError(f"mode must be 'mode_a' or 'mode_b', got {mode!r}")
    return pt.reshape(d * d, d * d)


@dataclass(frozen=True)
class NegativityResult:
    negativity: float
    min_pt_eigenvalue: float
    ppt: bool


def _pure_pt_spectrum(values: np.ndarray) -> tuple[float, float]:
    # PT spectrum of a pure state: v_i^2 and +-v_i v_j (i < j)
    v = np.sort(values)[::-1]
    after = np.cumsum(v[::-1])[::-1]
    neg = float(np.sum(v[:-1] * after[1:])) if v.size > 1 else 0.0
    min_eig = float(v[-1] ** 2)
    if v.size > 1:
        min_eig = min(min_eig, -float(v[0] * v[1]))
    return neg, min_eig


def negativity(rho: JointState, tol: NumericTolerances = DEFAULT_TOL) -> NegativityResult:
    """Sum of |negative eigenvalues| of the partial transpose, its minimum, and the PPT verdict."""
    if rho.is_pure:
        neg, min_eig = _pure_pt_spectrum(schmidt(rho).values)
    else:
        pt = partial_transpose(rho)
        ev = hermitian_eigvals((pt + pt.conj().T) / 2)
        min_eig = float(ev[0])
        neg = float(-ev[ev < 0].sum())
    return NegativityResult(neg, min_eig, min_eig >= -tol.psd)


@dataclass(frozen=True)
class SmallThetaPrediction:
    """E_p ~ coefficient * theta^2 for a weakly reflecting beam splitter."""

    coefficient: float
    a_var: float
    b_var: float
    cross_term: complex


def small_theta_predict(a: SingleModeState, b: SingleModeState, phi: float) -> SmallThetaPrediction:
    """theta^2 coefficient of E_p for the pure product input a (x) b.

    coefficient = A B + (A + B)/2 - Re[exp(2i phi) Var(b^dag) Var(a)], with
    A, B the normal-ordered variances <c^dag c> - <c^dag><c> and
    Var(O) = <O^2> - <O>^2.  With b in vacuum this is A/2.
    """
    if not (a.is_pure and b.is_pure):
        raise DomainError("the small-angle prediction is only defined for pure product inputs")
    ma, mb = moments(a), moments(b)
    big_a, big_b = ma.variance, mb.variance
    cross = mb.delta2_ad * ma.delta2_a
    coef = big_a * big_b + (big_a + big_b) / 2 - (np.exp(2j * phi) * cross).real
    return SmallThetaPrediction(float(coef), big_a, big_b, complex(cross))


@dataclass(frozen=True)
class EntanglementReport:
    e_p: float
    schmidt_values: Optional[tuple[float, ...]]
    schmidt_rank: Optional[int]
    negativity: float
    ppt: bool
    min_pt_eigenvalue: float

    def to_dict(self) -> dict:
        return asdict(self)


def report(state: JointState, tol: NumericTolerances = DEFAULT_TOL, max_values: int | None = None) -> EntanglementReport:
    values = rank = None
    if state.is_pure:
        s = schmidt(state)
        keep = s.values[: s.rank] if max_values is None else s.values[:max_values]
        values, rank = tuple(float(x) for x in keep), s.rank
    neg = negativity(state, tol)
    return EntanglementReport(
        e_p=e_p(state),
        schmidt_values=values,
        schmidt_rank=rank,
        negativity=neg.negativity,
        ppt=neg.ppt,
        min_pt_eigenvalue=neg.min_pt_eigenvalue,
    )
