"""Named numerical checks of the separability results, one function per claim.

Each ``claim_*`` function is independent, seeds its own generator, and returns
a :class:`ClaimResult`.  Where a claim has a negative control, the control is
part of the verdict: a tolerance loose enough to pass the control fails the claim.
"""
from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np
from scipy.sparse.linalg import expm_multiply

from .entanglement import e_p, negativity, schmidt, small_theta_predict
from .fock import CutoffConfig, JointState, SingleModeState, tensor, trace_distance
from .optics import (
    BeamSplitterParams,
    apply_bs,
    dense_sector_block,
    rotate_sector_vector,
    rotated_fock_coefficients,
    sector_block,
    squeeze_exponent,
    transform_displacement,
    transform_squeeze,
)
from .states import (
    FamilySample,
    UnpolarizedSpec,
    _gaussian_columns,
    assemble,
    classical_coherent_mixture,
    coherent,
    displaced_number_mixture,
    displaced_squeezed,
    fock,
    laser_average,
    laser_average_spec,
    matched_squeezed_pair,
    squeezed_vacuum,
    suggest_n_max,
    thermal,
    unpolarized,
    unpolarized_separable_decomposition,
    zero_entanglement_family,
)


@dataclass
class ClaimResult:
    claim_id: str
    anchor: str
    metric: float
    threshold: float
    passed: bool
    runtime_ms: int = 0
    seed: int = 0
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return _jsonable(asdict(self))


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


@dataclass(frozen=True)
class VerifyConfig:
    seed: int = 20180101
    # pure-state PT quantities scale like sqrt(leakage); 1e-24 keeps them near 1e-12
    pure_leakage: float = 1e-24
    mixed_leakage: float = 1e-22
    default_leakage: float = 1e-12
    pure_cap: int = 200
    mixed_cap: int = 60
    fd_step: float = 1e-3
    grid_theta: int = 5
    grid_phi: int = 5
    random_draws: int = 6
    uniqueness_samples: int = 120


def _timed(fn: Callable[[VerifyConfig], ClaimResult]) -> Callable[[VerifyConfig], ClaimResult]:
    def wrapper(config: VerifyConfig | None = None) -> ClaimResult:
        config = config or VerifyConfig()
        t0 = time.perf_counter()
        res = fn(config)
        res.runtime_ms = int(1000 * (time.perf_counter() - t0))
        res.seed = config.seed
        return res

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


def _pure_cutoff(build: Callable[[CutoffConfig], JointState], config: VerifyConfig, start: int = 8) -> CutoffConfig:
    n = suggest_n_max(build, config.pure_leakage, start=start, cap=config.pure_cap)
    return CutoffConfig(n, config.pure_leakage)


def _mixed_cutoff(build, config: VerifyConfig, leakage: float | None = None, start: int = 8) -> CutoffConfig:
    leakage = config.mixed_leakage if leakage is None else leakage
    n = suggest_n_max(build, leakage, start=start, cap=config.mixed_cap)
    return CutoffConfig(n, leakage)


def fd_coefficient(state: JointState, phi: float, h: float) -> float:
    """theta^2 coefficient of E_p from a five-point second difference at theta = 0."""
    f = {k: e_p(apply_bs(state, BeamSplitterParams(k * h, phi))) for k in (-2, -1, 0, 1, 2)}
    second = (-f[2] + 16 * f[1] - 30 * f[0] + 16 * f[-1] - f[-2]) / (12 * h * h)
    return second / 2


def _grid(config: VerifyConfig) -> list[BeamSplitterParams]:
    thetas = np.linspace(0.3, 3.0, config.grid_theta)
    phis = np.linspace(0, 2 * np.pi, config.grid_phi, endpoint=False)
    return [BeamSplitterParams(t, p) for t in thetas for p in phis]


@_timed
def claim_schmidt_rank(config: VerifyConfig) -> ClaimResult:
    """R|N,0> has Schmidt rank N+1 with Schmidt values |c_m|."""
    theta, phi = np.pi / 3, 0.7
    params = BeamSplitterParams(theta, phi)
    rank_dev = 0
    value_err = 0.0
    ranks = {}
    for n in range(0, 6):
        cut = CutoffConfig(max(n, 1))
        out = apply_bs(tensor(fock(n, cut), fock(0, cut)), params)
        s = schmidt(out)
        ranks[n] = s.rank
        rank_dev = max(rank_dev, abs(s.rank - (n + 1)))
        expected = np.sort(np.abs(rotated_fock_coefficients(n, theta, phi)))[::-1]
        value_err = max(value_err, float(np.max(np.abs(s.values[: n + 1] - expected))))
    ok = rank_dev == 0 and value_err < 1e-10
    return ClaimResult("schmidt_rank", "rotated Fock state has Schmidt number N+1",
                       float(rank_dev), 0.0, ok,
                       details={"ranks": ranks, "max_value_error": value_err, "value_threshold": 1e-10})


def small_theta_family(cut_for: Callable) -> list[tuple[str, SingleModeState, SingleModeState]]:
    pairs = [
        ("fock2_vacuum", lambda c: fock(2, c), lambda c: fock(0, c)),
        ("coherent1_fock1", lambda c: coherent(1.0, c), lambda c: fock(1, c)),
        ("squeezed_pair", lambda c: squeezed_vacuum(0.4, c), lambda c: squeezed_vacuum(0.2 * np.exp(0.3j), c)),
        ("dispsq_coherent", lambda c: displaced_squeezed(1.0, 0.3, c), lambda c: coherent(0.5j, c)),
    ]
    out = []
    for name, fa, fb in pairs:
        cut = cut_for(lambda c: tensor(fa(c), fb(c)))
        out.append((name, fa(cut), fb(cut)))
    return out


def _rel_err(fd: float, pred: float) -> float:
    if abs(pred) <= 1e-6:
        return abs(fd - pred) / 1e-5  # scaled so that 1e-8 absolute maps onto 1e-3
    return abs(fd - pred) / abs(pred)


@_timed
def claim_small_theta_law(config: VerifyConfig) -> ClaimResult:
    """Finite-difference theta^2 coefficient of E_p against the closed form."""
    cut_for = lambda b: _pure_cutoff(b, config)
    h = config.fd_step
    rows = {}
    worst = 0.0
    for name, a, b in small_theta_family(cut_for):
        state = tensor(a, b)
        for phi in (0.0, 0.9):
            pred = small_theta_predict(a, b, phi).coefficient
            fd = fd_coefficient(state, phi, h)
            err = _rel_err(fd, pred)
            worst = max(worst, err)
            rows[f"{name}@phi={phi}"] = {"fd": fd, "predicted": pred, "rel_err": err}
    # vacuum port: A/2, 1/2 for a single photon
    cut = CutoffConfig(4)
    vac_pred = small_theta_predict(fock(1, cut), fock(0, cut), 0.0).coefficient
    vac_fd = fd_coefficient(tensor(fock(1, cut), fock(0, cut)), 0.0, h)
    # coherent pair: both vanish
    cc = _pure_cutoff(lambda c: tensor(coherent(0.7, c), coherent(-0.4j, c)), config)
    coh_pred = small_theta_predict(coherent(0.7, cc), coherent(-0.4j, cc), 0.9).coefficient
    coh_fd = fd_coefficient(tensor(coherent(0.7, cc), coherent(-0.4j, cc)), 0.9, h)
    ok = (worst < 1e-3 and abs(vac_pred - 0.5) < 1e-12 and abs(vac_fd - 0.5) < 5e-4
          and abs(coh_pred) < 1e-8 and abs(coh_fd) < 1e-8)
    return ClaimResult("small_theta_law", "E_p ~ theta^2 (AB + (A+B)/2 - Re[e^{2i phi} Var(b^dag) Var(a)])",
                       worst, 1e-3, ok,
                       details={"cases": rows, "fock1_vacuum": {"predicted": vac_pred, "fd": vac_fd},
                                "coherent_pair": {"predicted": coh_pred, "fd": coh_fd}, "h": h})


@_timed
def claim_coherent_product_separable(config: VerifyConfig) -> ClaimResult:
    """Coherent products stay product states with the transformed amplitudes."""
    rng = np.random.default_rng(config.seed)
    worst_ep = worst_neg = worst_infid = 0.0
    for _ in range(config.random_draws):
        alpha, beta = (rng.normal(size=2) + 1j * rng.normal(size=2)) * 0.6
        params = BeamSplitterParams(rng.uniform(0, 2 * np.pi), rng.uniform(0, 2 * np.pi))
        a2, b2 = transform_displacement(alpha, beta, params)
        cut = _pure_cutoff(lambda c: tensor(coherent(alpha, c), coherent(beta, c)), config)
        cut = CutoffConfig(max(cut.n_max, _pure_cutoff(lambda c: tensor(coherent(a2, c), coherent(b2, c)), config).n_max),
                           cut.leakage_tol)
        out = apply_bs(tensor(coherent(alpha, cut), coherent(beta, cut)), params)
        pred = tensor(coherent(a2, cut), coherent(b2, cut))
        worst_ep = max(worst_ep, e_p(out))
        worst_neg = max(worst_neg, negativity(out).negativity)
        overlap = np.vdot(pred.vector(), out.vector())
        worst_infid = max(worst_infid, 1 - abs(overlap) ** 2)
    ok = worst_ep < 1e-10 and worst_neg < 1e-10 and worst_infid < 1e-10
    return ClaimResult("coherent_product_separable", "R|alpha>|beta> is the product of transformed coherent states",
                       worst_ep, 1e-10, ok,
                       details={"worst_negativity": worst_neg, "worst_infidelity": worst_infid})


@_timed
def claim_matched_squeeze_separable(config: VerifyConfig) -> ClaimResult:
    """Displaced squeezed pairs with squeeze phases matched to phi stay separable."""
    alpha, beta = 1 + 0.5j, -0.3
    thetas = (np.pi / 7, np.pi / 3, np.pi / 2, 2.0)
    worst_ep = worst_neg = 0.0
    for r in (0.0, 0.2, 0.5, 0.8):
        for phi in (0.0, np.pi / 5):
            cut = _pure_cutoff(lambda c: matched_squeezed_pair(alpha, beta, r, phi, c), config, start=20)
            state = matched_squeezed_pair(alpha, beta, r, phi, cut)
            for theta in thetas:
                out = apply_bs(state, BeamSplitterParams(theta, phi))
                worst_ep = max(worst_ep, e_p(out))
                worst_neg = max(worst_neg, negativity(out).negativity)
    # control: both modes squeezed along the same axis at phi = pi/5
    phi = np.pi / 5
    build = lambda c: tensor(squeezed_vacuum(0.5, c), squeezed_vacuum(0.5, c))
    cut = _pure_cutoff(build, config)
    control = e_p(apply_bs(build(cut), BeamSplitterParams(np.pi / 3, phi)))
    ok = worst_ep < 1e-9 and worst_neg < 1e-9 and control > 1e-4
    return ClaimResult("matched_squeeze_separable", "D S(gamma) (x) D S(e^{-2i phi} gamma)|vac> stays separable",
                       worst_ep, 1e-9, ok,
                       details={"worst_negativity": worst_neg, "mismatched_control_e_p": control,
                                "control_threshold": 1e-4})


def _unpolarized_cases(config: VerifyConfig) -> dict[str, tuple[UnpolarizedSpec, CutoffConfig]]:
    tol = config.default_leakage
    cases = {}
    cases["sector_2"] = (UnpolarizedSpec.single_sector(2), CutoffConfig(4, tol))
    n = suggest_n_max(lambda c: laser_average(1.0, c), tol)
    cases["laser_average_1"] = (laser_average_spec(1.0, n), CutoffConfig(n, tol))
    n = suggest_n_max(lambda c: unpolarized(UnpolarizedSpec.thermal(0.7, c.n_max), c), tol)
    cases["thermal_0.7"] = (UnpolarizedSpec.thermal(0.7, n), CutoffConfig(n, tol))
    return cases


@_timed
def claim_unpolarized_invariance(config: VerifyConfig) -> ClaimResult:
    """sum_N lam_N I_N is unchanged by every beam splitter."""
    rng = np.random.default_rng(config.seed)
    draws = [BeamSplitterParams(rng.uniform(0, 2 * np.pi), rng.uniform(0, 2 * np.pi)) for _ in range(config.random_draws)]
    worst = 0.0
    per_case = {}
    for name, (spec, cut) in _unpolarized_cases(config).items():
        rho = unpolarized(spec, cut)
        dist = max(trace_distance(apply_bs(rho, p), rho) for p in draws)
        per_case[name] = dist
        worst = max(worst, dist)
    cut = CutoffConfig(3)
    vac = tensor(fock(0, cut), fock(0, cut)).to_mixed()
    vac_dist = max(trace_distance(apply_bs(vac, p), vac) for p in draws)
    # control: unequal weights inside the N = 1 sector
    skew = np.zeros(cut.dim**2)
    skew[1 * cut.dim + 0] = 0.8
    skew[0 * cut.dim + 1] = 0.2
    ctrl = JointState("mixed", np.diag(skew).astype(complex), cut)
    ctrl_dist = max(trace_distance(apply_bs(ctrl, p), ctrl) for p in draws)
    ok = worst < 1e-10 and vac_dist == 0.0 and ctrl_dist > 1e-3
    return ClaimResult("unpolarized_invariance", "unpolarized states are invariant under SU(2) rotations",
                       worst, 1e-10, ok,
                       details={"cases": per_case, "vacuum": vac_dist, "skewed_control": ctrl_dist,
                                "control_threshold": 1e-3})


def _decomposition_metrics(spec: UnpolarizedSpec, cut: CutoffConfig) -> tuple[float, float, float]:
    dec = unpolarized_separable_decomposition(spec, cut)
    w = dec.weights
    weight_violation = float(max(0.0, -w.min(), w.max() - 1.0))
    factor_violation = 0.0
    for _, (sa, sb) in dec.components:
        for s in (sa, sb):
            factor_violation = max(factor_violation, abs(s.trace() - 1.0),
                                   max(0.0, -float(np.linalg.eigvalsh(s.dm())[0])))
    dist = trace_distance(assemble(dec, cut), unpolarized(spec, cut))
    return weight_violation, factor_violation, dist


@_timed
def claim_unpolarized_separable(config: VerifyConfig) -> ClaimResult:
    """Explicit product decomposition of unpolarized states reassembles exactly."""
    per_case = {}
    worst = 0.0
    ok = True
    cases = dict(_unpolarized_cases(config))
    cases["vacuum"] = (UnpolarizedSpec((1.0,)), CutoffConfig(2))
    for name, (spec, cut) in cases.items():
        wv, fv, dist = _decomposition_metrics(spec, cut)
        per_case[name] = {"weight_violation": wv, "factor_violation": fv, "reassembly": dist}
        worst = max(worst, dist)
        ok = ok and wv == 0.0 and fv < 1e-12
    ok = ok and worst < 1e-12
    return ClaimResult("unpolarized_separable", "unpolarized states are mixtures of product states",
                       worst, 1e-12, ok, details={"cases": per_case})


@_timed
def claim_thermal_is_unpolarized(config: VerifyConfig) -> ClaimResult:
    """Equal-temperature thermal products are unpolarized."""
    tol = config.default_leakage
    worst = 0.0
    per_case = {}
    for nbar in (0.3, 1.0):
        build = lambda c: (thermal(nbar, c), unpolarized(UnpolarizedSpec.thermal(nbar, c.n_max), c))
        cut = CutoffConfig(suggest_n_max(build, tol), tol)
        th, un = build(cut)
        dist = trace_distance(tensor(th, th), un)
        per_case[nbar] = dist
        worst = max(worst, dist)
    cut = CutoffConfig(suggest_n_max(lambda c: thermal(1.0, c), tol), tol)
    unequal = tensor(thermal(0.3, cut), thermal(1.0, cut))
    ctrl = trace_distance(apply_bs(unequal, BeamSplitterParams(np.pi / 2, 0.0)), unequal)
    ok = worst < 1e-10 and ctrl > 1e-3
    return ClaimResult("thermal_is_unpolarized", "equal-temperature thermal product has the unpolarized form",
                       worst, 1e-10, ok, details={"cases": per_case, "unequal_temperature_control": ctrl})


def family_samples() -> list[FamilySample]:
    """A fixed three-component member of the zero-entanglement family."""
    return [
        FamilySample(0.5, 0.3, -0.2j, 0.2, UnpolarizedSpec.single_sector(1)),
        FamilySample(0.3, -0.4 + 0.1j, 0.25, 0.15 * np.exp(0.4j), UnpolarizedSpec((0.5, 0.25))),
        FamilySample(0.2, 0.1j, 0.5, 0.0, UnpolarizedSpec.single_sector(2)),
    ]


@_timed
def claim_zero_entanglement_family(config: VerifyConfig) -> ClaimResult:
    """Displaced-number mixtures and the squeezed-unpolarized family stay PPT after any beam splitter."""
    grid = _grid(config)
    worst = np.inf
    per_case = {}
    for n in range(4):
        build = lambda c: displaced_number_mixture(n, 0.8, -0.4j, c)
        cut = _mixed_cutoff(build, config)
        state = build(cut)
        m = min(negativity(apply_bs(state, p)).min_pt_eigenvalue for p in grid)
        per_case[f"displaced_number_N{n}"] = m
        worst = min(worst, m)
    fam_min = np.inf
    for phi in sorted({p.phi for p in grid}):
        build = lambda c: zero_entanglement_family(family_samples(), phi, c)
        state = build(_mixed_cutoff(build, config))
        for p in grid:
            if p.phi == phi:
                fam_min = min(fam_min, negativity(apply_bs(state, p)).min_pt_eigenvalue)
    per_case["family_3_components"] = fam_min
    worst = min(worst, fam_min)
    cut = CutoffConfig(2)
    ctrl = negativity(apply_bs(tensor(fock(1, cut), fock(0, cut)).to_mixed(),
                               BeamSplitterParams(np.pi / 2, 0.0))).min_pt_eigenvalue
    ok = worst >= -1e-10 and abs(ctrl + 0.5) < 1e-9 and len(grid) >= 25
    return ClaimResult("zero_entanglement_family", "squeezed-displaced unpolarized mixtures stay separable",
                       float(-worst), 1e-10, ok,
                       details={"min_pt_eigenvalue": per_case, "grid_points": len(grid),
                                "entangled_control_min_pt": ctrl})


@_timed
def claim_classical_mixture_separable(config: VerifyConfig) -> ClaimResult:
    """Mixtures of coherent products map to mixtures of transformed coherent products."""
    rng = np.random.default_rng(config.seed + 1)
    worst_dist = 0.0
    worst_min = np.inf
    for _ in range(3):
        p = rng.dirichlet(np.ones(4))
        amps = (rng.normal(size=(4, 2)) + 1j * rng.normal(size=(4, 2))) * 0.4
        comps = [(p[k], amps[k, 0], amps[k, 1]) for k in range(4)]
        params = BeamSplitterParams(rng.uniform(0, 2 * np.pi), rng.uniform(0, 2 * np.pi))
        moved = [(w, *transform_displacement(a, b, params)) for w, a, b in comps]
        n = max(suggest_n_max(lambda c: classical_coherent_mixture(comps, c), config.mixed_leakage, cap=config.mixed_cap),
                suggest_n_max(lambda c: classical_coherent_mixture(moved, c), config.mixed_leakage, cap=config.mixed_cap))
        cut = CutoffConfig(n, config.mixed_leakage)
        out = apply_bs(classical_coherent_mixture(comps, cut), params)
        worst_dist = max(worst_dist, trace_distance(out, classical_coherent_mixture(moved, cut)))
        worst_min = min(worst_min, negativity(out).min_pt_eigenvalue)
    ok = worst_dist < 1e-9 and worst_min >= -1e-9
    return ClaimResult("classical_mixture_separable", "classical coherent mixtures remain separable after rotation",
                       worst_dist, 1e-9, ok, details={"min_pt_eigenvalue": worst_min})


def conjugated_squeeze_error(gamma_a: complex, gamma_b: complex, params: BeamSplitterParams,
                             n_max: int = 40, work: int = 64) -> float:
    """Max amplitude error between R (S_a (x) S_b) R^dag |v> and the transformed exponent on |v>."""
    res = transform_squeeze(gamma_a, gamma_b, params)
    gen = squeeze_exponent(res, work)
    d = work + 1
    inverse = BeamSplitterParams(-params.theta, params.phi)
    worst = 0.0
    for (m0, k0) in ((0, 0), (1, 0), (0, 2), (1, 2), (3, 1)):
        n = m0 + k0
        x = np.zeros(n + 1, dtype=complex)
        x[m0] = 1.0
        y = rotate_sector_vector(n, x, inverse)  # R^dag |m0, k0>
        ca = _gaussian_columns(0, gamma_a, range(n + 1), work + 40)[:d]
        cb = _gaussian_columns(0, gamma_b, range(n + 1), work + 40)[:d]
        grid = sum(y[m] * np.outer(ca[:, m], cb[:, n - m]) for m in range(n + 1))
        lhs = apply_bs(JointState("pure", grid, CutoffConfig(work)), params).grid
        v = np.zeros(d * d, dtype=complex)
        v[m0 * d + k0] = 1.0
        rhs = expm_multiply(gen, v).reshape(d, d)
        worst = max(worst, float(np.max(np.abs(lhs[: n_max + 1, : n_max + 1] - rhs[: n_max + 1, : n_max + 1]))))
    return worst


@_timed
def claim_squeeze_conjugation(config: VerifyConfig) -> ClaimResult:
    """Beam-splitter conjugation of S_a (x) S_b against the returned exponent."""
    rng = np.random.default_rng(config.seed + 2)
    worst = 0.0
    for _ in range(3):
        ga, gb = 0.5 * np.sqrt(rng.uniform(size=2)) * np.exp(2j * np.pi * rng.uniform(size=2))
        params = BeamSplitterParams(rng.uniform(0, 2 * np.pi), rng.uniform(0, 2 * np.pi))
        worst = max(worst, conjugated_squeeze_error(ga, gb, params))
    zero_ok = True
    unchanged = 0.0
    for phi in np.linspace(0, 2 * np.pi, 7):
        gb = 0.3 * np.exp(0.7j)
        ga = np.exp(1j * phi) ** 2 * gb
        res = transform_squeeze(ga, gb, BeamSplitterParams(1.1, phi))
        zero_ok = zero_ok and res.two_mode == 0
        unchanged = max(unchanged, abs(res.gamma_a - ga), abs(res.gamma_b - gb))
    ok = worst < 1e-9 and zero_ok and unchanged < 1e-15
    return ClaimResult("squeeze_conjugation", "R (S_a (x) S_b) R^dag with transformed squeeze coefficients",
                       worst, 1e-9, ok, details={"matched_two_mode_zero": zero_ok, "matched_change": unchanged})


@_timed
def claim_sector_oracle(config: VerifyConfig) -> ClaimResult:
    """Eigenbasis sector blocks against dense exponentials of the sector generator."""
    rng = np.random.default_rng(config.seed + 3)
    worst = unit = 0.0
    for _ in range(20):
        params = BeamSplitterParams(rng.uniform(-2 * np.pi, 2 * np.pi), rng.uniform(0, 2 * np.pi))
        for n in range(11):
            fast = sector_block(n, params)
            worst = max(worst, float(np.max(np.abs(fast - dense_sector_block(n, params)))))
            unit = max(unit, float(np.max(np.abs(fast.conj().T @ fast - np.eye(n + 1)))))
    ok = worst < 1e-11 and unit < 1e-11
    return ClaimResult("sector_oracle", "sector blocks equal dense exponentials of the generator",
                       worst, 1e-11, ok, details={"unitarity_defect": unit})


def random_noncoherent_states(rng: np.random.Generator, count: int, cut: CutoffConfig) -> list[SingleModeState]:
    out = []
    for k in range(count):
        kind = k % 4
        if kind == 0:
            top = int(rng.integers(1, 7))
            v = np.zeros(cut.dim, dtype=complex)
            v[: top + 1] = rng.normal(size=top + 1) + 1j * rng.normal(size=top + 1)
            v /= np.linalg.norm(v)
            out.append(SingleModeState("pure", v, cut))
        elif kind == 1:
            r = rng.uniform(0.05, 0.6)
            a = rng.uniform(0, 1.5) * np.exp(2j * np.pi * rng.uniform())
            out.append(displaced_squeezed(a, r * np.exp(2j * np.pi * rng.uniform()), cut))
        elif kind == 2:
            a = rng.uniform(0.3, 1.5) * np.exp(2j * np.pi * rng.uniform())
            v = coherent(a, cut).data + coherent(-a, cut).data
            out.append(SingleModeState("pure", v / np.linalg.norm(v), cut))
        else:
            n = int(rng.integers(1, 5))
            v = np.zeros(cut.dim, dtype=complex)
            v[n] = 1.0
            out.append(SingleModeState("pure", v, cut))
    return out


@_timed
def claim_coherent_uniqueness(config: VerifyConfig) -> ClaimResult:
    """With vacuum in the other port only coherent inputs have a vanishing theta^2 coefficient."""
    rng = np.random.default_rng(config.seed + 4)
    wide = CutoffConfig(80, config.default_leakage)
    others = random_noncoherent_states(rng, config.uniqueness_samples, wide)
    vac = fock(0, wide)
    min_other = min_fd = np.inf
    for s in others:
        phi = rng.uniform(0, 2 * np.pi)
        min_other = min(min_other, small_theta_predict(s, vac, phi).coefficient)
        min_fd = min(min_fd, fd_coefficient(tensor(s, vac), phi, config.fd_step))
    # truncation shifts the coefficient by ~ n * leakage, so coherent inputs get the tight cutoff
    tight = CutoffConfig(60, config.pure_leakage)
    coh = [coherent(rng.uniform(0, 2.0) * np.exp(2j * np.pi * rng.uniform()), tight) for _ in range(30)]
    max_coh = max(abs(small_theta_predict(s, fock(0, tight), 0.0).coefficient) for s in coh)
    ok = len(others) >= 100 and min(min_other, min_fd) > 1e-6 and max_coh < 1e-10
    return ClaimResult("coherent_uniqueness", "only coherent states give no theta^2 entanglement with a vacuum port",
                       max_coh, 1e-10, ok, details={"min_noncoherent_coefficient": min_other,
                                                    "min_noncoherent_fd_coefficient": min_fd,
                                                    "noncoherent_samples": len(others)})


CLAIMS: dict[str, Callable[[VerifyConfig], ClaimResult]] = {
    "schmidt_rank": claim_schmidt_rank,
    "small_theta_law": claim_small_theta_law,
    "coherent_product_separable": claim_coherent_product_separable,
    "matched_squeeze_separable": claim_matched_squeeze_separable,
    "unpolarized_invariance": claim_unpolarized_invariance,
    "unpolarized_separable": claim_unpolarized_separable,
    "thermal_is_unpolarized": claim_thermal_is_unpolarized,
    "zero_entanglement_family": claim_zero_entanglement_family,
    "classical_mixture_separable": claim_classical_mixture_separable,
    "squeeze_conjugation": claim_squeeze_conjugation,
    "sector_oracle": claim_sector_oracle,
    "coherent_uniqueness": claim_coherent_uniqueness,
}


def run_all(config: VerifyConfig | None = None, only: list[str] | None = None,
            manifest: str | Path | None = None) -> list[ClaimResult]:
    config = config or VerifyConfig()
    names = sorted(only or CLAIMS)
    unknown = set(names) - set(CLAIMS)
    if unknown:
        raise KeyError(f"unknown claims: {sorted(unknown)}")
    results = [CLAIMS[name](config) for name in names]
    if manifest is not None:
        Path(manifest).write_text(json.dumps([r.to_dict() for r in results], indent=2))
    return results


def summary_line(results: list[ClaimResult]) -> str:
    failed = [r.claim_id for r in results if not r.passed]
    head = f"{len(results) - len(failed)}/{len(results)} claims passed"
    return head if not failed else f"{head}; failed: {', '.join(failed)}"


