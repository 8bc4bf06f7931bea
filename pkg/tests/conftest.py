import numpy as np
import pytest
from hypothesis import settings

from beamsep.fock import CutoffConfig, JointState, SingleModeState

settings.register_profile("default", max_examples=25, deadline=None)
settings.load_profile("default")


def random_vector(rng, d):
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    return v / np.linalg.norm(v)


def random_pure(rng, cut):
    return SingleModeState("pure", random_vector(rng, cut.dim), cut)


def random_mixed(rng, cut, rank=3):
    vs = [random_vector(rng, cut.dim) for _ in range(rank)]
    p = rng.dirichlet(np.ones(rank))
    rho = sum(pk * np.outer(v, v.conj()) for pk, v in zip(p, vs))
    return SingleModeState("mixed", rho, cut)


def random_joint_pure(rng, cut):
    return JointState("pure", random_vector(rng, cut.dim**2).reshape(cut.dim, cut.dim), cut)


def random_joint_mixed(rng, cut, rank=3):
    vs = [random_vector(rng, cut.dim**2) for _ in range(rank)]
    p = rng.dirichlet(np.ones(rank))
    return JointState("mixed", sum(pk * np.outer(v, v.conj()) for pk, v in zip(p, vs)), cut)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def cut4():
    return CutoffConfig(4)


def complete_sector_state(rng, cut, pure=True):
    """Random joint state supported on total photon numbers N <= n_max."""
    d = cut.dim
    m, n = np.indices((d, d))
    keep = (m + n <= cut.n_max).reshape(-1)

    def vec():
        v = random_vector(rng, d * d) * keep
        return v / np.linalg.norm(v)

    if pure:
        return JointState("pure", vec().reshape(d, d), cut)
    vs, p = [vec() for _ in range(3)], rng.dirichlet(np.ones(3))
    return JointState("mixed", sum(pk * np.outer(v, v.conj()) for pk, v in zip(p, vs)), cut)


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "LINES", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
