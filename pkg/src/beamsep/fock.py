"""Truncated single- and two-mode Fock spaces.

Joint states live on the box ``0 <= m, n <= n_max`` with flattened index
``m * (n_max + 1) + n`` (mode a major).  Pure joint states are stored as the
``(d, d)`` amplitude grid ``psi[m, n]``; mixed ones as a ``(d*d, d*d)``
density matrix.  Probability cut off by truncation is carried in ``leakage``
and never renormalised away.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal, Union

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

Kind = Literal["pure", "mixed"]


class CutoffError(ValueError):
    """Truncated weight exceeds the leakage tolerance (or index above cutoff)."""

    def __init__(self, message: str, recommended_n_max: int | None = None):
        super().__init__(message)
        self.recommended_n_max = recommended_n_max


class ConfigurationError(ValueError):
    pass


class DomainError(ValueError):
    pass


class SpecError(ValueError):
    pass


@dataclass(frozen=True)
class NumericTolerances:
    herm: float = 1e-10
    psd: float = 1e-9
    unitary: float = 1e-10
    eq: float = 1e-10

    def __post_init__(self):
        for name in ("herm", "psd", "unitary", "eq"):
            value = getattr(self, name)
            if not 0 < value <= 1e-6:
                raise ConfigurationError(f"tolerance {name}={value} outside (0, 1e-6]")


DEFAULT_TOL = NumericTolerances()


@dataclass(frozen=True)
class CutoffConfig:
    n_max: int
    leakage_tol: float = 1e-12

    def __post_init__(self):
        if int(self.n_max) != self.n_max or self.n_max < 1:
            raise ConfigurationError(f"n_max must be an integer >= 1, got {self.n_max}")
        if not 0 < self.leakage_tol < 1:
            raise ConfigurationError(f"leakage_tol must lie in (0, 1), got {self.leakage_tol}")

    @property
    def dim(self) -> int:
        return self.n_max + 1


def _as_cutoff(cutoff: CutoffConfig | int) -> CutoffConfig:
    return cutoff if isinstance(cutoff, CutoffConfig) else CutoffConfig(int(cutoff))


@dataclass(frozen=True, eq=False)
class SingleModeState:
    kind: Kind
    data: np.ndarray
    cutoff: CutoffConfig
    leakage: float = 0.0

    def __post_init__(self):
        data = np.asarray(self.data, dtype=complex)
        d = self.cutoff.dim
        expected = (d,) if self.kind == "pure" else (d, d)
        if data.shape != expected:
            raise ConfigurationError(f"{self.kind} single-mode data must have shape {expected}, got {data.shape}")
        data.setflags(write=False)
        object.__setattr__(self, "data", data)

    @property
    def is_pure(self) -> bool:
        return self.kind == "pure"

    def dm(self) -> np.ndarray:
        if self.is_pure:
            return np.outer(self.data, self.data.conj())
        return self.data

    def trace(self) -> float:
        if self.is_pure:
            return float(np.vdot(self.data, self.data).real)
        return float(np.trace(self.data).real)


@dataclass(frozen=True, eq=False)
class JointState:
    kind: Kind
    data: np.ndarray
    cutoff: CutoffConfig
    leakage: float = 0.0

    def __post_init__(self):
        data = np.asarray(self.data, dtype=complex)
        d = self.cutoff.dim
        if self.kind == "pure" and data.shape == (d * d,):
            data = data.reshape(d, d)
        expected = (d, d) if self.kind == "pure" else (d * d, d * d)
        if data.shape != expected:
            raise ConfigurationError(f"{self.kind} joint data must have shape {expected}, got {data.shape}")
        data.setflags(write=False)
        object.__setattr__(self, "data", data)

    @property
    def is_pure(self) -> bool:
        return self.kind == "pure"

    @property
    def grid(self) -> np.ndarray:
        if not self.is_pure:
            raise DomainError("amplitude grid requested for a mixed state")
        return self.data

    def vector(self) -> np.ndarray:
        """Flattened amplitudes, index ``m * (n_max + 1) + n``."""
        return self.grid.reshape(-1)

    def dm(self) -> np.ndarray:
        if self.is_pure:
            v = self.vector()
            return np.outer(v, v.conj())
        return self.data

    def trace(self) -> float:
        if self.is_pure:
            return float(np.vdot(self.data, self.data).real)
        return float(np.trace(self.data).real)

    def to_mixed(self) -> "JointState":
        if not self.is_pure:
            return self
        return JointState("mixed", self.dm(), self.cutoff, self.leakage)


AnyState = Union[SingleModeState, JointState]


def annihilation(cutoff: CutoffConfig | int) -> np.ndarray:
    d = _as_cutoff(cutoff).dim
    return np.diag(np.sqrt(np.arange(1, d, dtype=float)), 1).astype(complex)


def tensor(a: SingleModeState, b: SingleModeState) -> JointState:
    if a.cutoff != b.cutoff:
        raise ConfigurationError(f"cutoff mismatch: {a.cutoff} vs {b.cutoff}")
    leakage = a.leakage + b.leakage - a.leakage * b.leakage
    if a.is_pure and b.is_pure:
        return JointState("pure", np.outer(a.data, b.data), a.cutoff, leakage)
    return JointState("mixed", np.kron(a.dm(), b.dm()), a.cutoff, leakage)


def reshape4(rho: np.ndarray, d: int) -> np.ndarray:
    """View a joint density matrix as ``rho[m, n, m', n']``."""
    return rho.reshape(d, d, d, d)


def partial_trace(rho: JointState, keep: str = "mode_b") -> SingleModeState:
    """Reduced state of the kept mode (``"mode_a"`` or ``"mode_b"``)."""
    if keep not in ("mode_a", "mode_b"):
        raise ConfigurationError(f"keep must be 'mode_a' or 'mode_b', got {keep!r}")
    d = rho.cutoff.dim
    if rho.is_pure:
        g = rho.grid
        red = g @ g.conj().T if keep == "mode_a" else g.T @ g.conj()
    else:
        r4 = reshape4(rho.data, d)
        red = np.einsum("ijkj->ik", r4) if keep == "mode_a" else np.einsum("ijik->jk", r4)
    red = (red + red.conj().T) / 2
    return SingleModeState("mixed", red, rho.cutoff, rho.leakage)


def purity(rho: AnyState) -> float:
    """Tr[rho^2]."""
    if rho.is_pure:
        return rho.trace() ** 2
    m = rho.data
    return float(np.vdot(m, m).real)


def _blocks(h: np.ndarray) -> list[np.ndarray]:
    """Index sets of the connected components of a Hermitian matrix's sparsity graph."""
    pattern = csr_matrix(h != 0)
    n, labels = connected_components(pattern, directed=False)
    if n == 1:
        return [np.arange(h.shape[0])]
    order = np.argsort(labels, kind="stable")
    splits = np.flatnonzero(np.diff(labels[order])) + 1
    return np.split(order, splits)


def hermitian_eigvals(h: np.ndarray) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix, exploiting exact block structure."""
    h = np.asarray(h)
    if h.shape[0] <= 64 or np.count_nonzero(h) > h.size // 4:
        return np.linalg.eigvalsh(h)
    out = []
    for idx in _blocks(h):
        if len(idx) == 1:
            out.append(h[idx, idx].real)
        else:
            out.append(np.linalg.eigvalsh(h[np.ix_(idx, idx)]))
    return np.sort(np.concatenate(out))


def _pure_pair_eigs(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    # nonzero spectrum of |u><u| - |v><v|
    uu = np.vdot(u, u).real
    vv = np.vdot(v, v).real
    uv = np.vdot(u, v)
    t = uu - vv
    det = -(uu * vv - abs(uv) ** 2)
    disc = np.sqrt(max(t * t - 4 * det, 0.0))
    return np.array([(t + disc) / 2, (t - disc) / 2])


def trace_distance(rho: AnyState, sigma: AnyState) -> float:
    """Half the trace norm of ``rho - sigma``."""
    if type(rho) is not type(sigma):
        raise ConfigurationError("trace_distance needs two states of the same type")
    if rho.cutoff.dim != sigma.cutoff.dim:
        raise ConfigurationError("cutoff mismatch")
    if rho.is_pure and sigma.is_pure:
        ev = _pure_pair_eigs(np.ravel(rho.data), np.ravel(sigma.data))
    else:
        diff = rho.dm() - sigma.dm()
        off = diff - np.diag(np.diag(diff))
        if not off.any():
            ev = np.diag(diff).real
        else:
            ev = hermitian_eigvals((diff + diff.conj().T) / 2)
    return 0.5 * float(np.sum(np.abs(ev)))


@dataclass(frozen=True)
class ValidationReport:
    hermiticity_defect: float
    trace_defect: float
    min_eigenvalue: float
    leakage: float
    hermitian_ok: bool
    trace_ok: bool
    psd_ok: bool
    leakage_ok: bool
    failures: tuple[str, ...] = field(default=())

    @property
    def ok(self) -> bool:
        return self.hermitian_ok and self.trace_ok and self.psd_ok and self.leakage_ok


def validate(rho: AnyState, tol: NumericTolerances = DEFAULT_TOL) -> ValidationReport:
    leak_tol = rho.cutoff.leakage_tol
    # round-off slack on sums of O(d^2) squared amplitudes
    slack = 64 * np.finfo(float).eps
    trace = rho.trace()
    if rho.is_pure:
        herm = 0.0
        min_eig = 0.0
    else:
        m = rho.data
        herm = float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0
        min_eig = float(hermitian_eigvals((m + m.conj().T) / 2)[0])
    trace_defect = abs(1.0 - trace)
    checks = {
        "hermiticity": herm <= tol.herm,
        "trace": trace_defect <= leak_tol + slack and trace <= 1 + tol.eq,
        "psd": min_eig >= -tol.psd,
        "leakage": rho.leakage <= leak_tol,
    }
    return ValidationReport(
        hermiticity_defect=herm,
        trace_defect=trace_defect,
        min_eigenvalue=min_eig,
        leakage=rho.leakage,
        hermitian_ok=checks["hermiticity"],
        trace_ok=checks["trace"],
        psd_ok=checks["psd"],
        leakage_ok=checks["leakage"],
        failures=tuple(k for k, v in checks.items() if not v),
    )
