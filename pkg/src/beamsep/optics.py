"""Beam-splitter rotations on the truncated two-mode space.

The beam splitter is ``R(theta, phi) = exp(-xi a^dag b + xi* b^dag a)`` with
``xi = theta/2 exp(-i phi)``; it maps ``|1,0>`` to
``cos(theta/2)|1,0> + e^{i phi} sin(theta/2)|0,1>``.

R conserves total photon number N, so it is block diagonal with one
(N+1)x(N+1) block per sector, basis ``|m, N-m>`` ordered by m.  Every block
is computed exactly.  Sectors with N > n_max are only partly inside the box;
there the exact block is compressed onto the box and the weight rotated out
of it is added to the state's leakage.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.linalg
from scipy.linalg import eigh_tridiagonal
from scipy.special import gammaln

from .fock import CutoffConfig, JointState, _as_cutoff
from .states import sector_indices


@dataclass(frozen=True)
class BeamSplitterParams:
    """Rotation angle ``theta`` (reflectivity sin^2(theta/2)) and phase ``phi``, radians.

    Any finite real angle is accepted; negative ``theta`` is the inverse rotation.
    """

    theta: float
    phi: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "theta", float(self.theta))
        object.__setattr__(self, "phi", float(self.phi))
        if not (np.isfinite(self.theta) and np.isfinite(self.phi)):
            raise ValueError("beam-splitter angles must be finite")

    @property
    def xi(self) -> complex:
        return self.theta / 2 * np.exp(-1j * self.phi)


@dataclass(frozen=True, eq=False)
class SectorBlock:
    n: int
    matrix: np.ndarray


def _hopping(n: int) -> np.ndarray:
    m = np.arange(n)
    return np.sqrt((m + 1.0) * (n - m))


def sector_generator(n: int, params: BeamSplitterParams) -> np.ndarray:
    """Matrix of ``-xi a^dag b + xi* b^dag a`` on the sector of total number n."""
    s = _hopping(n)
    g = np.zeros((n + 1, n + 1), dtype=complex)
    idx = np.arange(n)
    g[idx + 1, idx] = -params.xi * s
    g[idx, idx + 1] = np.conj(params.xi) * s
    return g


def dense_sector_block(n: int, params: BeamSplitterParams) -> np.ndarray:
    """Reference block: dense matrix exponential of the sector generator."""
    return scipy.linalg.expm(sector_generator(n, params))


@lru_cache(maxsize=None)
def _sector_basis(n: int) -> np.ndarray:
    # After the gauge diag(i^m) the generator at phi = 0 becomes theta/2 times
    # the real tridiagonal T with off-diagonal -s_m and spectrum -n, -n+2, ..., n.
    if n == 0:
        q = np.ones((1, 1))
    else:
        _, q = eigh_tridiagonal(np.zeros(n + 1), -_hopping(n))
    q.setflags(write=False)
    return q


def _gauge(n: int, phi: float) -> np.ndarray:
    return (1j * np.exp(-1j * phi)) ** np.arange(n + 1)


def _spectrum(n: int) -> np.ndarray:
    return np.arange(-n, n + 1, 2, dtype=float)


def sector_block(n: int, params: BeamSplitterParams) -> np.ndarray:
    """Exact (n+1)x(n+1) block of R(theta, phi) on the sector of total number n."""
    q = _sector_basis(n)
    w = _gauge(n, params.phi)
    phase = np.exp(-0.5j * params.theta * _spectrum(n))
    return (w[:, None] * (q * phase)) @ (q.T * w.conj()[None, :])


def rotate_sector_vector(n: int, x: np.ndarray, params: BeamSplitterParams) -> np.ndarray:
    """R restricted to sector n applied to amplitudes ``x[m]`` of ``|m, n-m>``."""
    q = _sector_basis(n)
    w = _gauge(n, params.phi)
    phase = np.exp(-0.5j * params.theta * _spectrum(n))
    return w * (q @ (phase * (q.T @ (w.conj() * x))))


@dataclass(frozen=True, eq=False)
class BeamSplitter:
    params: BeamSplitterParams
    cutoff: CutoffConfig
    blocks: tuple[SectorBlock, ...]

    def block(self, n: int) -> np.ndarray:
        return self.blocks[n].matrix

    def dense(self) -> np.ndarray:
        """Box-compressed operator on the flattened joint space."""
        d2 = self.cutoff.dim**2
        out = np.zeros((d2, d2), dtype=complex)
        for blk in self.blocks:
            idx, rows = _box_rows(blk.n, self.cutoff)
            out[np.ix_(idx, idx)] = blk.matrix[np.ix_(rows, rows)]
        return out


def _box_rows(n: int, cutoff: CutoffConfig) -> tuple[np.ndarray, np.ndarray]:
    idx = sector_indices(n, cutoff)
    lo = max(0, n - cutoff.n_max)
    return idx, np.arange(lo, lo + len(idx))


@lru_cache(maxsize=32)
def _bs_cached(params: BeamSplitterParams, cutoff: CutoffConfig) -> BeamSplitter:
    blocks = tuple(SectorBlock(n, sector_block(n, params)) for n in range(2 * cutoff.n_max + 1))
    for b in blocks:
        b.matrix.setflags(write=False)
    return BeamSplitter(params, cutoff, blocks)


def bs_unitary(params: BeamSplitterParams, cutoff: CutoffConfig | int) -> BeamSplitter:
    """Sector blocks of R for every sector that meets the box (N <= 2 n_max)."""
    return _bs_cached(params, _as_cutoff(cutoff))


def _apply_pure(state: JointState, params: BeamSplitterParams) -> JointState:
    cut = state.cutoff
    g = state.grid
    out = np.zeros_like(g)
    dropped = 0.0
    for n in range(2 * cut.n_max + 1):
        lo, hi = max(0, n - cut.n_max), min(n, cut.n_max)
        m = np.arange(lo, hi + 1)
        x = np.zeros(n + 1, dtype=complex)
        x[m] = g[m, n - m]
        if not x.any():
            continue
        y = rotate_sector_vector(n, x, params)
        out[m, n - m] = y[m]
        if lo > 0 or hi < n:
            dropped += float(np.sum(np.abs(y[:lo]) ** 2) + np.sum(np.abs(y[hi + 1:]) ** 2))
    return JointState("pure", out, cut, state.leakage + dropped)


def _apply_mixed(state: JointState, params: BeamSplitterParams) -> JointState:
    cut = state.cutoff
    bs = bs_unitary(params, cut)
    rho = state.data
    sectors = [_box_rows(n, cut) for n in range(2 * cut.n_max + 1)]
    perm = np.concatenate([idx for idx, _ in sectors])
    rp = rho[np.ix_(perm, perm)]
    left = np.empty_like(rp)
    offsets = np.cumsum([0] + [len(idx) for idx, _ in sectors])
    dropped = 0.0
    for n, (idx, rows) in enumerate(sectors):
        sl = slice(offsets[n], offsets[n + 1])
        full = bs.block(n)[:, rows]
        left[sl, :] = full[rows, :] @ rp[sl, :]
        if len(rows) < n + 1:
            outside = np.setdiff1d(np.arange(n + 1), rows)
            gb = full[outside, :]
            dropped += float(np.einsum("ij,jk,ik->", gb, rp[sl, sl], gb.conj()).real)
    outp = np.empty_like(rp)
    for n, (idx, rows) in enumerate(sectors):
        sl = slice(offsets[n], offsets[n + 1])
        outp[:, sl] = left[:, sl] @ bs.block(n)[np.ix_(rows, rows)].conj().T
    out = np.empty_like(rho)
    out[np.ix_(perm, perm)] = outp
    out = (out + out.conj().T) / 2
    return JointState("mixed", out, cut, state.leakage + max(dropped, 0.0))


def apply_bs(state: JointState, params: BeamSplitterParams) -> JointState:
    """R|psi> for pure states, R rho R^dag for mixed ones."""
    if params.theta == 0:
        return state
    if state.is_pure:
        return _apply_pure(state, params)
    return _apply_mixed(state, params)


def rotated_fock_coefficients(n: int, theta: float, phi: float = 0.0) -> np.ndarray:
    """Amplitudes c_m of R|n, 0> on |m, n-m>, m = 0..n."""
    m = np.arange(n + 1)
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    log_binom = 0.5 * (gammaln(n + 1) - gammaln(m + 1) - gammaln(n - m + 1))
    with np.errstate(divide="ignore"):
        mag = np.exp(log_binom) * np.power(c, m) * np.power(s, n - m)
    return mag * np.exp(1j * phi * (n - m))


def transform_displacement(alpha: complex, beta: complex, params: BeamSplitterParams) -> tuple[complex, complex]:
    """Output amplitudes of R |alpha> (x) |beta>."""
    c, s = np.cos(params.theta / 2), np.sin(params.theta / 2)
    e = np.exp(1j * params.phi)
    return complex(alpha * c - beta * s / e), complex(alpha * e * s + beta * c)


@dataclass(frozen=True)
class SqueezeTransformResult:
    """Coefficients of R (S_a(g_a) (x) S_b(g_b)) R^dag.

    The conjugated operator is
    ``exp[gamma_a/2 a^2 + gamma_b/2 b^2 + two_mode a b - h.c.]``.
    """

    gamma_a: complex
    gamma_b: complex
    two_mode: complex


def transform_squeeze(gamma_a: complex, gamma_b: complex, params: BeamSplitterParams) -> SqueezeTransformResult:
    c2 = np.cos(params.theta / 2) ** 2
    s2 = np.sin(params.theta / 2) ** 2
    e = np.exp(1j * params.phi)
    ga = gamma_a * c2 + gamma_b * e**2 * s2
    gb = gamma_b * c2 + gamma_a / e**2 * s2
    mismatch = gamma_a - e**2 * gamma_b
    # matched axes give an exact zero; rounding in e^{2i phi} is not squeezing
    if abs(mismatch) <= 8 * np.finfo(float).eps * max(abs(gamma_a), abs(gamma_b)):
        mismatch = 0j
    two = np.sin(params.theta) * mismatch / e / 2
    return SqueezeTransformResult(complex(ga), complex(gb), complex(two))


def squeeze_exponent(result: SqueezeTransformResult, cutoff: CutoffConfig | int):
    """Sparse anti-Hermitian exponent built from a SqueezeTransformResult."""
    from scipy import sparse

    cut = _as_cutoff(cutoff)
    d = cut.dim
    a = sparse.diags(np.sqrt(np.arange(1, d, dtype=float)), 1, format="csr").astype(complex)
    eye = sparse.identity(d, format="csr", dtype=complex)
    A = sparse.kron(a, eye, format="csr")
    B = sparse.kron(eye, a, format="csr")
    k = result.gamma_a / 2 * (A @ A) + result.gamma_b / 2 * (B @ B) + result.two_mode * (A @ B)
    return (k - k.conj().T).tocsr()
