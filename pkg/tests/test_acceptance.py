"""Acceptance criteria, one test per criterion, each at its stated tolerance.

Every test records a single ``ACCEPTANCE <n> PASS|FAIL`` line; the lines are
repeated in the terminal summary of any pytest run that includes this file.  Claims are computed
once per session and shared between criteria.
"""
import pytest

from beamsep.entanglement import small_theta_predict
from beamsep.fock import CutoffConfig
from beamsep.states import fock
from beamsep.verify import CLAIMS, VerifyConfig

CONFIG = VerifyConfig()
LINES = []


@pytest.fixture(scope="session")
def claims():
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = CLAIMS[name](CONFIG)
        return cache[name]

    return get


def verdict(number, title, ok, detail):
    line = f"ACCEPTANCE {number:>2} {'PASS' if ok else 'FAIL'}  {title}: {detail}"
    LINES.append(line)
    print(line)
    assert ok, f"criterion {number} ({title}) failed: {detail}"


def test_criterion_01_schmidt_rank(claims):
    r = claims("schmidt_rank")
    ranks = r.details["ranks"]
    ok = all(ranks[n] == n + 1 for n in range(1, 6)) and r.details["max_value_error"] < 1e-10
    verdict(1, "rotated Fock Schmidt rank N+1", ok and r.passed,
            f"ranks={ranks}, value error={r.details['max_value_error']:.2e}")


def test_criterion_02_small_theta_law(claims):
    r = claims("small_theta_law")
    vac = r.details["fock1_vacuum"]
    cut = CutoffConfig(4)
    direct = small_theta_predict(fock(1, cut), fock(0, cut), 0.0).coefficient
    ok = r.metric < 1e-3 and abs(vac["fd"] - 0.5) < 5e-4 and direct == pytest.approx(0.5, abs=1e-15)
    verdict(2, "small-theta law", ok and r.passed,
            f"worst rel err={r.metric:.2e} (<1e-3), fock(1) fd={vac['fd']:.9f} predicted={vac['predicted']}")


def test_criterion_03_coherent_products(claims):
    r = claims("coherent_product_separable")
    d = r.details
    ok = r.metric < 1e-10 and d["worst_negativity"] < 1e-10 and d["worst_infidelity"] < 1e-10
    verdict(3, "coherent products stay separable", ok and r.passed,
            f"E_p={r.metric:.2e}, negativity={d['worst_negativity']:.2e}, infidelity={d['worst_infidelity']:.2e}")


def test_criterion_04_matched_squeeze(claims):
    r = claims("matched_squeeze_separable")
    d = r.details
    ok = r.metric < 1e-9 and d["worst_negativity"] < 1e-9 and d["mismatched_control_e_p"] > 1e-4
    verdict(4, "matched squeezing stays separable", ok and r.passed,
            f"E_p={r.metric:.2e}, negativity={d['worst_negativity']:.2e}, control E_p={d['mismatched_control_e_p']:.3f}")


def test_criterion_05_unpolarized_invariance(claims):
    r = claims("unpolarized_invariance")
    d = r.details
    ok = r.metric < 1e-10 and d["skewed_control"] > 1e-3
    verdict(5, "unpolarized invariance", ok and r.passed,
            f"worst distance={r.metric:.2e}, control={d['skewed_control']:.3f}")


def test_criterion_06_separable_decomposition(claims):
    dec, th = claims("unpolarized_separable"), claims("thermal_is_unpolarized")
    ok = dec.passed and dec.metric < 1e-12 and th.passed and th.metric < 1e-10
    verdict(6, "unpolarized decomposition", ok,
            f"reassembly={dec.metric:.2e} (<1e-12), thermal distance={th.metric:.2e} (<1e-10)")


def test_criterion_07_zero_entanglement_family(claims):
    r = claims("zero_entanglement_family")
    d = r.details
    ok = r.metric <= 1e-10 and d["grid_points"] >= 25 and abs(d["entangled_control_min_pt"] + 0.5) < 1e-9
    verdict(7, "zero-entanglement family stays PPT", ok and r.passed,
            f"min PT eig={-r.metric:.2e} over {d['grid_points']} points, control={d['entangled_control_min_pt']:.12f}")


def test_criterion_08_squeeze_conjugation(claims):
    r = claims("squeeze_conjugation")
    ok = r.metric < 1e-9 and r.details["matched_two_mode_zero"]
    verdict(8, "squeeze conjugation", ok and r.passed,
            f"oracle error={r.metric:.2e}, matched two-mode exactly 0: {r.details['matched_two_mode_zero']}")


def test_criterion_09_sector_oracle(claims):
    r = claims("sector_oracle")
    ok = r.metric < 1e-11 and r.details["unitarity_defect"] < 1e-11
    verdict(9, "fast sector blocks equal dense exponentials", ok and r.passed,
            f"max abs={r.metric:.2e}, unitarity defect={r.details['unitarity_defect']:.2e}")


def test_criterion_10_coherent_uniqueness(claims):
    r = claims("coherent_uniqueness")
    d = r.details
    ok = (d["noncoherent_samples"] >= 100 and d["min_noncoherent_coefficient"] > 1e-6
          and d["min_noncoherent_fd_coefficient"] > 1e-6 and r.metric < 1e-10)
    verdict(10, "coherent uniqueness", ok and r.passed,
            f"{d['noncoherent_samples']} samples, min coefficient={d['min_noncoherent_coefficient']:.2e}, "
            f"coherent max={r.metric:.2e}")


def test_extra_classical_mixture(claims):
    r = claims("classical_mixture_separable")
    verdict(11, "classical coherent mixtures stay separable", r.passed,
            f"distance to predicted mixture={r.metric:.2e}, min PT eig={r.details['min_pt_eigenvalue']:.2e}")
