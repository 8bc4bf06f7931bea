import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from beamsep.entanglement import e_p, negativity, partial_transpose, report, schmidt, small_theta_predict
from beamsep.fock import CutoffConfig, DomainError, JointState, partial_trace, purity, tensor
from beamsep.optics import BeamSplitterParams, apply_bs
from beamsep.states import (
    UnpolarizedSpec,
    coherent,
    displaced_squeezed,
    displacement_matrix,
    fock,
    matched_squeezed_pair,
    squeezed_vacuum,
    suggest_n_max,
    unpolarized,
    zero_entanglement_family,
)
from beamsep.verify import fd_coefficient

from conftest import random_joint_mixed, random_joint_pure, random_mixed, random_pure

seeds = st.integers(0, 2**32 - 1)
BELL_CUT = CutoffConfig(1)


def bell():
    g = np.zeros((2, 2), dtype=complex)
    g[1, 0] = g[0, 1] = 1 / np.sqrt(2)
    return JointState("pure", g, BELL_CUT)


def test_bell_schmidt_by_hand():
    s = schmidt(bell())
    assert np.allclose(s.values, [1 / np.sqrt(2)] * 2) and s.rank == 2


def test_schmidt_rejects_mixed(rng):
    with pytest.raises(DomainError):
        schmidt(random_joint_mixed(rng, CutoffConfig(2)))


def test_product_rank_one(rng):
    cut = CutoffConfig(4)
    assert schmidt(tensor(random_pure(rng, cut), random_pure(rng, cut))).rank == 1


@pytest.mark.parametrize("n", range(1, 6))
def test_rotated_fock_schmidt_values(n):
    theta, phi = np.pi / 3, 0.7
    out = apply_bs(tensor(fock(n, CutoffConfig(n)), fock(0, CutoffConfig(n))), BeamSplitterParams(theta, phi))
    m = np.arange(n + 1)
    c = np.sqrt([float(math.comb(n, k)) for k in m]) * np.cos(theta / 2) ** m * np.sin(theta / 2) ** (n - m)
    s = schmidt(out)
    assert s.rank == n + 1
    assert np.allclose(s.values, np.sort(c)[::-1], atol=1e-10)


def test_bell_quantities():
    b = bell()
    assert e_p(b) == pytest.approx(0.5)
    neg = negativity(b)
    assert neg.negativity == pytest.approx(0.5) and neg.min_pt_eigenvalue == pytest.approx(-0.5) and not neg.ppt
    mixed = negativity(b.to_mixed())
    assert mixed.negativity == pytest.approx(0.5) and mixed.min_pt_eigenvalue == pytest.approx(-0.5)


def test_single_photon_half_silvered_e_p():
    out = apply_bs(tensor(fock(1, CutoffConfig(1)), fock(0, CutoffConfig(1))), BeamSplitterParams(np.pi / 2))
    assert e_p(out) == pytest.approx(0.5, abs=1e-15)


@given(seeds)
def test_e_p_two_ways(seed):
    rng = np.random.default_rng(seed)
    psi = random_joint_pure(rng, CutoffConfig(3))
    via_trace = 1 - purity(partial_trace(psi.to_mixed(), "mode_b"))
    assert e_p(psi) == pytest.approx(via_trace, abs=1e-12)
    assert e_p(psi) == pytest.approx(1 - np.sum(schmidt(psi).values ** 4), abs=1e-12)
    assert e_p(psi.to_mixed()) == pytest.approx(e_p(psi), abs=1e-12)


@given(seeds)
def test_e_p_local_unitary_invariance(seed):
    rng = np.random.default_rng(seed)
    cut, big = CutoffConfig(3), 40
    g = np.zeros((big + 1, big + 1), dtype=complex)
    g[:4, :4] = random_joint_pure(rng, cut).grid
    alpha, beta = complex(*rng.uniform(-0.5, 0.5, 2)), complex(*rng.uniform(-0.5, 0.5, 2))
    moved = displacement_matrix(alpha, big) @ g @ displacement_matrix(beta, big).T
    before = e_p(JointState("pure", g, CutoffConfig(big)))
    assert e_p(JointState("pure", moved, CutoffConfig(big))) == pytest.approx(before, abs=1e-10)


@given(seeds, st.booleans())
def test_partial_transpose_is_involution(seed, mode_a):
    rng = np.random.default_rng(seed)
    rho = random_joint_mixed(rng, CutoffConfig(2))
    mode = "mode_a" if mode_a else "mode_b"
    pt = partial_transpose(rho, mode)
    assert np.allclose(pt, pt.conj().T)
    assert np.trace(pt) == pytest.approx(1)
    assert np.allclose(partial_transpose(JointState("mixed", pt, rho.cutoff), mode), rho.data)


@given(seeds)
def test_product_pt_is_transposed_factor(seed):
    rng = np.random.default_rng(seed)
    cut = CutoffConfig(2)
    a, b = random_mixed(rng, cut), random_mixed(rng, cut)
    prod = tensor(a, b)
    assert np.allclose(partial_transpose(prod, "mode_a"), np.kron(a.dm().T, b.dm()))
    neg = negativity(prod)
    assert neg.ppt and neg.negativity < 1e-12


@given(seeds)
def test_pure_pt_spectrum_closed_form(seed):
    rng = np.random.default_rng(seed)
    psi = random_joint_pure(rng, CutoffConfig(3))
    fast, dense = negativity(psi), negativity(psi.to_mixed())
    assert fast.negativity == pytest.approx(dense.negativity, abs=1e-12)
    assert fast.min_pt_eigenvalue == pytest.approx(dense.min_pt_eigenvalue, abs=1e-12)
    ev = np.linalg.eigvalsh(partial_transpose(psi))
    assert (np.abs(ev).sum() - 1) / 2 == pytest.approx(fast.negativity, abs=1e-12)


@pytest.mark.parametrize("n", range(1, 5))
def test_ppt_detects_rotated_fock(n):
    cut = CutoffConfig(n)
    out = apply_bs(tensor(fock(n, cut), fock(0, cut)), BeamSplitterParams(np.pi / 4)).to_mixed()
    assert negativity(out).negativity > 1e-6


def test_small_theta_examples():
    cut = CutoffConfig(40)
    assert small_theta_predict(coherent(0.7, cut), coherent(-0.2j, cut), 0.4).coefficient == pytest.approx(0, abs=1e-12)
    assert small_theta_predict(fock(1, cut), fock(0, cut), 1.0).coefficient == pytest.approx(0.5)
    phi, gamma = 0.6, 0.4 - 0.1j
    pair = (squeezed_vacuum(gamma, cut), squeezed_vacuum(np.exp(-2j * phi) * gamma, cut))
    assert small_theta_predict(*pair, phi).coefficient == pytest.approx(0, abs=1e-12)
    with pytest.raises(DomainError):
        small_theta_predict(fock(1, cut), fock(0, cut).__class__("mixed", np.eye(41) / 41, cut), 0)


@pytest.mark.parametrize("make_a", [lambda c: fock(2, c), lambda c: displaced_squeezed(0.5, 0.2j, c), lambda c: squeezed_vacuum(0.3, c)])
def test_vacuum_port_reduces_to_variance(make_a):
    cut = CutoffConfig(40)
    a = make_a(cut)
    pred = small_theta_predict(a, fock(0, cut), 0.3)
    assert pred.coefficient == pytest.approx(pred.a_var / 2, abs=1e-14)


@given(seeds)
def test_fd_matches_prediction_for_random_products(seed):
    rng = np.random.default_rng(seed)
    cut = CutoffConfig(5, 1e-24)
    v = [rng.normal(size=3) + 1j * rng.normal(size=3) for _ in range(2)]
    a, b = (fock(0, cut).__class__("pure", np.r_[x / np.linalg.norm(x), np.zeros(3)], cut) for x in v)
    phi = float(rng.uniform(0, 2 * np.pi))
    pred = small_theta_predict(a, b, phi).coefficient
    fd = fd_coefficient(tensor(a, b), phi, 1e-3)
    assert fd == pytest.approx(pred, rel=1e-3, abs=1e-8)


def test_report_examples():
    cut = CutoffConfig(2)
    vac = report(tensor(fock(0, cut), fock(0, cut)))
    assert vac.e_p == 0 and vac.schmidt_rank == 1 and vac.negativity == 0 and vac.ppt
    rot = report(apply_bs(tensor(fock(2, cut), fock(0, cut)), BeamSplitterParams(np.pi / 3)))
    assert rot.schmidt_rank == 3
    un = unpolarized(UnpolarizedSpec.single_sector(2), cut)
    r1, r2 = report(un).to_dict(), report(apply_bs(un, BeamSplitterParams(1.0, 0.4))).to_dict()
    for k in r1:
        assert r1[k] == pytest.approx(r2[k], abs=1e-12) if isinstance(r1[k], float) else r1[k] == r2[k]
    assert r1["schmidt_values"] is None


def test_matched_pair_stays_unentangled():
    cut = CutoffConfig(60, 1e-24)
    phi = 0.5
    out = apply_bs(matched_squeezed_pair(0.5, -0.2, 0.4, phi, cut), BeamSplitterParams(1.0, phi))
    assert e_p(out) < 1e-12


def test_family_stays_ppt():
    # PT eigenvalues of a truncated state sit near sqrt(leakage), so the cutoff must be generous
    phi = 0.3
    samples = [(0.6, 0.4, 0.1j, 0.1, UnpolarizedSpec.single_sector(1)), (0.4, -0.3, 0.2, 0.05, UnpolarizedSpec((1.0,)))]
    n = suggest_n_max(lambda c: zero_entanglement_family(samples, phi, c), 1e-22)
    fam = zero_entanglement_family(samples, phi, CutoffConfig(n, 1e-22))
    out = apply_bs(fam, BeamSplitterParams(1.2, phi))
    assert negativity(out).ppt
