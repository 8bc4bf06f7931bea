"""State constructors.

Single-mode Gaussian states are computed on a working space larger than the
cutoff and then cut down; the weight that falls outside the box is measured
directly and recorded as leakage.  Squeezing is applied before displacement,
``D(alpha) S(gamma) |0>``, with ``S(gamma) = exp[(gamma a^2 - gamma* a^dag^2) / 2]``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import lgamma
from typing import Any, Callable, Sequence

import numpy as np
from scipy.stats import poisson

from .fock import (
    CutoffConfig,
    CutoffError,
    JointState,
    SingleModeState,
    SpecError,
    _as_cutoff,
    annihilation,
    tensor,
)

MAX_ALPHA = 6.0
MAX_GAMMA = 2.0
SPEC_TOL = 1e-10
DEGENERATE_WEIGHT = 1e-14


@dataclass(frozen=True)
class GaussianOpParams:
    alpha: complex = 0j
    gamma: complex = 0j

    def __post_init__(self):
        object.__setattr__(self, "alpha", complex(self.alpha))
        object.__setattr__(self, "gamma", complex(self.gamma))
        if not (np.isfinite(self.alpha) and np.isfinite(self.gamma)):
            raise SpecError("displacement and squeeze must be finite")
        if abs(self.alpha) > MAX_ALPHA:
            raise CutoffError(f"|alpha|={abs(self.alpha):.3g} exceeds the guard {MAX_ALPHA}")
        if abs(self.gamma) > MAX_GAMMA:
            raise CutoffError(f"|gamma|={abs(self.gamma):.3g} exceeds the guard {MAX_GAMMA}")


@dataclass(frozen=True)
class UnpolarizedSpec:
    """Weights ``lam[N]`` of the sector projectors, with sum_N lam[N] (N+1) = 1."""

    weights: tuple[float, ...]
    # probability mass deliberately left off (e.g. a truncated Poisson tail)
    tail: float = 0.0

    def __post_init__(self):
        w = tuple(float(x) for x in self.weights)
        object.__setattr__(self, "weights", w)
        if not w:
            raise SpecError("unpolarized spec needs at least one weight")
        if any(x < 0 for x in w):
            raise SpecError("unpolarized weights must be nonnegative")
        if abs(self.total() + self.tail - 1.0) > SPEC_TOL:
            raise SpecError(f"sum_N lam_N (N+1) = {self.total():.15g}, expected 1")

    def total(self) -> float:
        return float(sum(x * (n + 1) for n, x in enumerate(self.weights)))

    @property
    def max_sector(self) -> int:
        return len(self.weights) - 1

    @classmethod
    def single_sector(cls, n: int) -> "UnpolarizedSpec":
        return cls(tuple([0.0] * n + [1.0 / (n + 1)]))

    @classmethod
    def thermal(cls, nbar: float, n_max: int) -> "UnpolarizedSpec":
        """Equal-temperature thermal product, lam_N = (1 - x)^2 x^N with x = nbar / (nbar + 1)."""
        x = nbar / (nbar + 1.0)
        n = np.arange(n_max + 1)
        lam = (1 - x) ** 2 * x**n
        # sum_{N > n_max} (N + 1) (1 - x)^2 x^N
        k = n_max + 1
        tail = x**k * (k * (1 - x) + 1)
        return cls(tuple(lam), tail=float(tail))


@dataclass(frozen=True)
class MixtureSpec:
    """Convex combination ``sum_k p_k * component_k``."""

    components: tuple[tuple[float, Any], ...]

    def __post_init__(self):
        comps = tuple((float(p), c) for p, c in self.components)
        object.__setattr__(self, "components", comps)
        if not comps:
            raise SpecError("mixture needs at least one component")
        if any(p <= 0 for p, _ in comps):
            raise SpecError("mixture weights must be strictly positive")
        if abs(sum(p for p, _ in comps) - 1.0) > SPEC_TOL:
            raise SpecError("mixture weights must sum to 1")

    @property
    def weights(self) -> np.ndarray:
        return np.array([p for p, _ in self.components])


# -- single-mode operators ----------------------------------------------------

def _working_dim(n_max: int) -> int:
    return n_max + max(32, n_max // 2)


def _expm_antihermitian(gen: np.ndarray) -> np.ndarray:
    h = 1j * gen
    w, v = np.linalg.eigh((h + h.conj().T) / 2)
    return (v * np.exp(-1j * w)) @ v.conj().T


def displacement_generator(alpha: complex, dim: int) -> np.ndarray:
    a = annihilation(dim - 1)
    return alpha * a.conj().T - np.conj(alpha) * a


def squeeze_generator(gamma: complex, dim: int) -> np.ndarray:
    a = annihilation(dim - 1)
    return (gamma * a @ a - np.conj(gamma) * a.conj().T @ a.conj().T) / 2


@lru_cache(maxsize=128)
def _operator(which: str, param: complex, dim: int) -> np.ndarray:
    if param == 0:
        out = np.eye(dim, dtype=complex)
    elif which == "D":
        out = _expm_antihermitian(displacement_generator(param, dim))
    else:
        out = _expm_antihermitian(squeeze_generator(param, dim))
    out.setflags(write=False)
    return out


def _gaussian_columns(alpha: complex, gamma: complex, cols: Sequence[int], work: int) -> np.ndarray:
    """Columns of D(alpha) S(gamma) on a truncated space of dimension ``work``."""
    s = _operator("S", complex(gamma), work)[:, list(cols)]
    return _operator("D", complex(alpha), work) @ s


def smallest_cutoff(vec: np.ndarray, leakage_tol: float) -> int:
    """Smallest n_max whose tail weight is at most ``leakage_tol``."""
    p = np.abs(np.asarray(vec)) ** 2
    tails = np.cumsum(p[::-1])[::-1]  # tails[n] = weight at indices >= n
    ok = np.flatnonzero(tails <= leakage_tol)
    return max(int(ok[0]) - 1, 1) if ok.size else len(p)


def _cut(vec: np.ndarray, cutoff: CutoffConfig, what: str) -> tuple[np.ndarray, float]:
    d = cutoff.dim
    leak = float(np.sum(np.abs(vec[d:]) ** 2))
    if leak > cutoff.leakage_tol:
        raise CutoffError(
            f"{what}: truncated weight {leak:.3g} exceeds leakage_tol {cutoff.leakage_tol:.3g}",
            recommended_n_max=smallest_cutoff(vec, cutoff.leakage_tol),
        )
    return vec[:d].copy(), leak


def _guarded_columns(params: GaussianOpParams, cols: Sequence[int], cutoff: CutoffConfig, what: str):
    work = _working_dim(cutoff.n_max)
    block = _gaussian_columns(params.alpha, params.gamma, cols, work)
    out, leaks = [], []
    for j in range(block.shape[1]):
        v, leak = _cut(block[:, j], cutoff, what)
        out.append(v)
        leaks.append(leak)
    return out, leaks


def _leakage_guard(params: GaussianOpParams, cutoff: CutoffConfig, what: str) -> float:
    return _guarded_columns(params, [0], cutoff, what)[1][0]


def displacement_matrix(alpha: complex, cutoff: CutoffConfig | int) -> np.ndarray:
    """exp(alpha a^dag - alpha* a) with the generator truncated at the cutoff.

    Raises CutoffError when ``D(alpha)|0>`` leaks more than the cutoff allows.
    """
    cutoff = _as_cutoff(cutoff)
    params = GaussianOpParams(alpha=alpha)
    _leakage_guard(params, cutoff, "displacement")
    return np.array(_operator("D", params.alpha, cutoff.dim))


def squeeze_matrix(gamma: complex, cutoff: CutoffConfig | int) -> np.ndarray:
    cutoff = _as_cutoff(cutoff)
    params = GaussianOpParams(gamma=gamma)
    _leakage_guard(params, cutoff, "squeeze")
    return np.array(_operator("S", params.gamma, cutoff.dim))


# -- single-mode states ---------------------------------------------------------

def fock(n: int, cutoff: CutoffConfig | int) -> SingleModeState:
    cutoff = _as_cutoff(cutoff)
    if not 0 <= n <= cutoff.n_max:
        raise CutoffError(f"Fock index {n} outside 0..{cutoff.n_max}", recommended_n_max=max(n, 1))
    v = np.zeros(cutoff.dim, dtype=complex)
    v[n] = 1.0
    return SingleModeState("pure", v, cutoff)


def displaced_squeezed(alpha: complex, gamma: complex, cutoff: CutoffConfig | int) -> SingleModeState:
    cutoff = _as_cutoff(cutoff)
    (v,), (leak,) = _guarded_columns(GaussianOpParams(alpha, gamma), [0], cutoff, "displaced squeezed state")
    return SingleModeState("pure", v, cutoff, leak)


def coherent(alpha: complex, cutoff: CutoffConfig | int) -> SingleModeState:
    return displaced_squeezed(alpha, 0, cutoff)


def squeezed_vacuum(gamma: complex, cutoff: CutoffConfig | int) -> SingleModeState:
    return displaced_squeezed(0, gamma, cutoff)


def displaced_fock(n: int, alpha: complex, cutoff: CutoffConfig | int) -> SingleModeState:
    """The displaced number state D(alpha)|n>."""
    cutoff = _as_cutoff(cutoff)
    fock(n, cutoff)
    (v,), (leak,) = _guarded_columns(GaussianOpParams(alpha), [n], cutoff, "displaced number state")
    return SingleModeState("pure", v, cutoff, leak)


def thermal_probabilities(nbar: float, n_max: int) -> tuple[np.ndarray, float]:
    """Occupation probabilities up to ``n_max`` and the exact tail weight beyond."""
    if nbar < 0:
        raise SpecError("mean occupation must be nonnegative")
    n = np.arange(n_max + 1)
    if nbar == 0:
        p = (n == 0).astype(float)
        return p, 0.0
    x = nbar / (nbar + 1.0)
    return (1 - x) * x**n, float(x ** (n_max + 1))


def thermal(nbar: float, cutoff: CutoffConfig | int) -> SingleModeState:
    cutoff = _as_cutoff(cutoff)
    p, tail = thermal_probabilities(nbar, cutoff.n_max)
    if tail > cutoff.leakage_tol:
        x = nbar / (nbar + 1.0)
        need = int(np.ceil(np.log(cutoff.leakage_tol) / np.log(x))) - 1
        raise CutoffError(f"thermal tail {tail:.3g} exceeds leakage_tol", recommended_n_max=need)
    return SingleModeState("mixed", np.diag(p).astype(complex), cutoff, tail)


@dataclass(frozen=True)
class MomentSet:
    a: complex
    a2: complex
    n: float
    ad: complex
    ad2: complex

    @property
    def variance(self) -> float:
        """<a^dag a> - <a^dag><a>, nonnegative by Cauchy-Schwarz."""
        return float((self.n - self.ad * self.a).real)

    @property
    def delta2_a(self) -> complex:
        return self.a2 - self.a**2

    @property
    def delta2_ad(self) -> complex:
        return self.ad2 - self.ad**2


def moments(s: SingleModeState) -> MomentSet:
    a = annihilation(s.cutoff)
    ops = {"a": a, "a2": a @ a, "n": a.conj().T @ a}
    if s.is_pure:
        ev = {k: np.vdot(s.data, op @ s.data) for k, op in ops.items()}
    else:
        ev = {k: np.trace(s.data @ op) for k, op in ops.items()}
    return MomentSet(
        a=complex(ev["a"]),
        a2=complex(ev["a2"]),
        n=float(ev["n"].real),
        ad=complex(np.conj(ev["a"])),
        ad2=complex(np.conj(ev["a2"])),
    )


# -- two-mode states --------------------------------------------------------

def sector_indices(n: int, cutoff: CutoffConfig | int) -> np.ndarray:
    """Flat joint indices of |m, n - m> inside the box, in increasing m."""
    cutoff = _as_cutoff(cutoff)
    d = cutoff.dim
    m = np.arange(max(0, n - cutoff.n_max), min(n, cutoff.n_max) + 1)
    return m * d + (n - m)


def sector_projector(n: int, cutoff: CutoffConfig | int) -> np.ndarray:
    """Projector onto total photon number ``n``."""
    cutoff = _as_cutoff(cutoff)
    if not 0 <= n <= cutoff.n_max:
        raise CutoffError(f"sector {n} is not complete below n_max={cutoff.n_max}", recommended_n_max=max(n, 1))
    diag = np.zeros(cutoff.dim**2)
    diag[sector_indices(n, cutoff)] = 1.0
    return np.diag(diag)


def _unpolarized_diag(spec: UnpolarizedSpec, cutoff: CutoffConfig) -> np.ndarray:
    if spec.max_sector > cutoff.n_max:
        nz = np.flatnonzero(spec.weights)
        if nz.size and nz[-1] > cutoff.n_max:
            raise CutoffError(
                f"unpolarized support reaches N={nz[-1]} above n_max={cutoff.n_max}",
                recommended_n_max=int(nz[-1]),
            )
    diag = np.zeros(cutoff.dim**2)
    for n, lam in enumerate(spec.weights[: cutoff.n_max + 1]):
        if lam:
            diag[sector_indices(n, cutoff)] = lam
    return diag


def unpolarized(spec: UnpolarizedSpec, cutoff: CutoffConfig | int) -> JointState:
    """sum_N lam_N I_N on the complete sectors N <= n_max."""
    cutoff = _as_cutoff(cutoff)
    diag = _unpolarized_diag(spec, cutoff)
    if spec.tail > cutoff.leakage_tol:
        raise CutoffError(f"unpolarized spec drops weight {spec.tail:.3g}", recommended_n_max=None)
    return JointState("mixed", np.diag(diag).astype(complex), cutoff, spec.tail)


def unpolarized_separable_decomposition(spec: UnpolarizedSpec, cutoff: CutoffConfig | int) -> MixtureSpec:
    """Product decomposition sum_m q_m |m><m| (x) rho_m.

    ``q_m = sum_{N >= m} lam_N`` is the probability of m photons in mode a and
    ``rho_m = sum_{N >= m} lam_N |N - m><N - m| / q_m``.  Terms with
    ``q_m < 1e-14`` are dropped.
    """
    cutoff = _as_cutoff(cutoff)
    _unpolarized_diag(spec, cutoff)
    lam = np.zeros(cutoff.dim)
    k = min(len(spec.weights), cutoff.dim)
    lam[:k] = spec.weights[:k]
    comps = []
    for m in range(cutoff.dim):
        q = float(lam[m:].sum())
        if q <= DEGENERATE_WEIGHT:
            continue
        rho_b = np.zeros((cutoff.dim, cutoff.dim), dtype=complex)
        rho_b[np.arange(cutoff.dim - m), np.arange(cutoff.dim - m)] = lam[m:] / q
        comps.append((q, (fock(m, cutoff), SingleModeState("mixed", rho_b, cutoff))))
    total = sum(q for q, _ in comps)
    if abs(total - 1) > SPEC_TOL:
        raise SpecError(f"decomposition weights sum to {total}")
    return MixtureSpec(tuple(comps))


def assemble(mixture: MixtureSpec, cutoff: CutoffConfig | int) -> JointState:
    """Density matrix of a mixture of (state_a, state_b) product components."""
    cutoff = _as_cutoff(cutoff)
    d2 = cutoff.dim**2
    rho = np.zeros((d2, d2), dtype=complex)
    leak = 0.0
    for p, (sa, sb) in mixture.components:
        prod = tensor(sa, sb)
        rho += p * prod.dm()
        leak += p * prod.leakage
    return JointState("mixed", rho, cutoff, leak)


def _mixture_of_products(terms: list[tuple[float, np.ndarray, np.ndarray, float]], cutoff: CutoffConfig) -> JointState:
    cols = np.stack([np.sqrt(w) * np.kron(va, vb) for w, va, vb, _ in terms], axis=1)
    rho = cols @ cols.conj().T
    rho = (rho + rho.conj().T) / 2
    leak = float(sum(w * lk for w, _, _, lk in terms))
    return JointState("mixed", rho, cutoff, leak)


def _pair_leak(la: float, lb: float) -> float:
    return la + lb - la * lb


def displaced_number_mixture(n: int, alpha: complex, beta: complex, cutoff: CutoffConfig | int) -> JointState:
    """(1/(N+1)) sum_m |m, alpha><m, alpha| (x) |N-m, beta><N-m, beta|."""
    cutoff = _as_cutoff(cutoff)
    if not 0 <= n <= cutoff.n_max:
        raise CutoffError(f"N={n} outside 0..{cutoff.n_max}", recommended_n_max=max(n, 1))
    cols = list(range(n + 1))
    va, la = _guarded_columns(GaussianOpParams(alpha), cols, cutoff, "displaced number state (mode a)")
    vb, lb = _guarded_columns(GaussianOpParams(beta), cols, cutoff, "displaced number state (mode b)")
    w = 1.0 / (n + 1)
    terms = [(w, va[m], vb[n - m], _pair_leak(la[m], lb[n - m])) for m in range(n + 1)]
    return _mixture_of_products(terms, cutoff)


def matched_squeezed_pair(alpha: complex, beta: complex, gamma: complex, phi: float,
                          cutoff: CutoffConfig | int) -> JointState:
    """D(alpha)S(gamma)|0> (x) D(beta)S(exp(-2i phi) gamma)|0>."""
    cutoff = _as_cutoff(cutoff)
    a = displaced_squeezed(alpha, gamma, cutoff)
    b = displaced_squeezed(beta, np.exp(-2j * phi) * complex(gamma), cutoff)
    return tensor(a, b)


@dataclass(frozen=True)
class FamilySample:
    weight: float
    alpha: complex
    beta: complex
    gamma: complex
    spec: UnpolarizedSpec


def zero_entanglement_family(samples: Sequence[FamilySample | tuple], phi: float,
                             cutoff: CutoffConfig | int) -> JointState:
    """sum_k g_k T_k rho_un,k T_k^dag with T_k = D(alpha_k)S(gamma_k) (x) D(beta_k)S(e^{-2i phi} gamma_k)."""
    cutoff = _as_cutoff(cutoff)
    samples = [s if isinstance(s, FamilySample) else FamilySample(*s) for s in samples]
    MixtureSpec(tuple((s.weight, s) for s in samples))
    terms = []
    for s in samples:
        _unpolarized_diag(s.spec, cutoff)
        if s.spec.tail > cutoff.leakage_tol:
            raise CutoffError(f"unpolarized spec drops weight {s.spec.tail:.3g}")
        top = s.spec.max_sector
        cols = list(range(top + 1))
        ga = GaussianOpParams(s.alpha, s.gamma)
        gb = GaussianOpParams(s.beta, np.exp(-2j * phi) * complex(s.gamma))
        va, la = _guarded_columns(ga, cols, cutoff, "family component (mode a)")
        vb, lb = _guarded_columns(gb, cols, cutoff, "family component (mode b)")
        for n, lam in enumerate(s.spec.weights):
            if lam == 0:
                continue
            for m in range(n + 1):
                terms.append((s.weight * lam, va[m], vb[n - m], _pair_leak(la[m], lb[n - m])))
    out = _mixture_of_products(terms, cutoff)
    extra = sum(s.weight * s.spec.tail for s in samples)
    return JointState("mixed", out.data, cutoff, out.leakage + extra)


def laser_average_spec(intensity: float, cutoff: CutoffConfig | int) -> UnpolarizedSpec:
    """lam_N = exp(-I) I^N / (N + 1)! for N <= n_max; the Poisson tail is recorded."""
    cutoff = _as_cutoff(cutoff)
    if intensity < 0:
        raise SpecError("intensity must be nonnegative")
    n = np.arange(cutoff.dim)
    if intensity == 0:
        lam = (n == 0).astype(float)
        return UnpolarizedSpec(tuple(lam))
    logp = -intensity + n * np.log(intensity) - np.array([lgamma(k + 2) for k in n])
    tail = float(poisson.sf(cutoff.n_max, intensity))
    return UnpolarizedSpec(tuple(np.exp(logp)), tail=tail)


def laser_average(intensity: float, cutoff: CutoffConfig | int) -> JointState:
    cutoff = _as_cutoff(cutoff)
    spec = laser_average_spec(intensity, cutoff)
    if spec.tail > cutoff.leakage_tol:
        need = int(poisson.isf(cutoff.leakage_tol, intensity)) + 1
        raise CutoffError(f"Poisson tail {spec.tail:.3g} exceeds leakage_tol", recommended_n_max=need)
    return unpolarized(spec, cutoff)


def classical_coherent_mixture(components: Sequence[tuple[float, complex, complex]],
                               cutoff: CutoffConfig | int) -> JointState:
    """sum_k p_k |alpha_k><alpha_k| (x) |beta_k><beta_k|."""
    cutoff = _as_cutoff(cutoff)
    MixtureSpec(tuple((p, (a, b)) for p, a, b in components))
    terms = []
    for p, alpha, beta in components:
        a = coherent(alpha, cutoff)
        b = coherent(beta, cutoff)
        terms.append((p, a.data, b.data, _pair_leak(a.leakage, b.leakage)))
    return _mixture_of_products(terms, cutoff)


def suggest_n_max(build: Callable[[CutoffConfig], Any], leakage_tol: float = 1e-12,
                  start: int = 4, cap: int = 60) -> int:
    """Smallest cutoff (up to ``cap``) at which ``build`` stays within ``leakage_tol``."""
    n = max(start, 1)
    while True:
        try:
            build(CutoffConfig(n, leakage_tol))
            return n
        except CutoffError as err:
            rec = err.recommended_n_max
            nxt = rec if rec is not None and rec > n else n + max(2, n // 4)
            if n >= cap:
                raise CutoffError(f"no cutoff <= {cap} meets leakage_tol={leakage_tol:.3g}",
                                  recommended_n_max=rec) from err
            n = min(nxt, cap)
