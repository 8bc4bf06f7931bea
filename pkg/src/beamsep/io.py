"""State descriptors and the JSON state file format.

A descriptor is a dict with a ``kind`` tag plus parameters, e.g.
``{"kind": "coherent", "alpha": [1.0, 0.0]}``.  Complex parameters may be
given as a number, an ``[re, im]`` pair, or a string such as ``"1.0+0.5i"``.

State files::

    {"format": "beamsep-state/1", "modes": 1 | 2, "kind": "pure" | "mixed",
     "n_max": int, "leakage_tol": float, "leakage": float,
     "shape": [...], "descriptor": {...},
     "data": [[re, im], ...]}

``data`` is the row-major flattening of the amplitudes (joint index
``m * (n_max + 1) + n``) or of the density matrix.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import numpy as np

from . import states as st
from .fock import CutoffConfig, CutoffError, JointState, SingleModeState, tensor

FORMAT = "beamsep-state/1"

SINGLE_KINDS = {"fock", "coherent", "squeezed", "displaced_squeezed", "displaced_fock", "thermal"}
JOINT_KINDS = {
    "product", "unpolarized", "thermal_pair", "laser_average", "displaced_number_mixture",
    "matched_squeezed_pair", "classical_coherent_mixture", "zero_entanglement_family",
}


class DescriptorError(ValueError):
    pass


def parse_complex(value: Any) -> complex:
    if isinstance(value, (int, float, complex)):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, str):
        text = value.strip().replace(" ", "").replace("i", "j")
        try:
            return complex(text)
        except ValueError:
            pass
    raise DescriptorError(f"cannot read a complex number from {value!r}")


def _get(desc: dict, key: str, default: Any = None, required: bool = True) -> Any:
    if key in desc:
        return desc[key]
    if required and default is None:
        raise DescriptorError(f"descriptor of kind {desc.get('kind')!r} needs {key!r}")
    return default


def _unpolarized_spec(desc: dict) -> st.UnpolarizedSpec:
    if "sector" in desc:
        return st.UnpolarizedSpec.single_sector(int(desc["sector"]))
    if "weights" in desc:
        return st.UnpolarizedSpec(tuple(float(x) for x in desc["weights"]))
    raise DescriptorError("unpolarized descriptor needs 'sector' or 'weights'")


def build_single(desc: dict, cutoff: CutoffConfig) -> SingleModeState:
    kind = desc.get("kind")
    if kind == "fock":
        return st.fock(int(_get(desc, "n")), cutoff)
    if kind == "coherent":
        return st.coherent(parse_complex(_get(desc, "alpha")), cutoff)
    if kind == "squeezed":
        return st.squeezed_vacuum(parse_complex(_get(desc, "gamma")), cutoff)
    if kind == "displaced_squeezed":
        return st.displaced_squeezed(parse_complex(_get(desc, "alpha")), parse_complex(_get(desc, "gamma")), cutoff)
    if kind == "displaced_fock":
        return st.displaced_fock(int(_get(desc, "n")), parse_complex(_get(desc, "alpha")), cutoff)
    if kind == "thermal":
        return st.thermal(float(_get(desc, "nbar")), cutoff)
    raise DescriptorError(f"unknown single-mode kind {kind!r}")


def build_joint(desc: dict, cutoff: CutoffConfig) -> JointState:
    kind = desc.get("kind")
    if kind in SINGLE_KINDS:
        raise DescriptorError(f"{kind!r} is a single-mode kind; wrap it as {{'kind': 'product', 'a': ..., 'b': ...}}")
    if kind == "product":
        return tensor(build_single(_get(desc, "a"), cutoff), build_single(_get(desc, "b"), cutoff))
    if kind == "unpolarized":
        return st.unpolarized(_unpolarized_spec(desc), cutoff)
    if kind == "thermal_pair":
        return st.unpolarized(st.UnpolarizedSpec.thermal(float(_get(desc, "nbar")), cutoff.n_max), cutoff)
    if kind == "laser_average":
        return st.laser_average(float(_get(desc, "intensity")), cutoff)
    if kind == "displaced_number_mixture":
        return st.displaced_number_mixture(int(_get(desc, "n")), parse_complex(desc.get("alpha", 0)),
                                           parse_complex(desc.get("beta", 0)), cutoff)
    if kind == "matched_squeezed_pair":
        return st.matched_squeezed_pair(parse_complex(desc.get("alpha", 0)), parse_complex(desc.get("beta", 0)),
                                        parse_complex(_get(desc, "gamma")), float(desc.get("phi", 0.0)), cutoff)
    if kind == "classical_coherent_mixture":
        comps = [(float(p), parse_complex(a), parse_complex(b)) for p, a, b in _get(desc, "components")]
        return st.classical_coherent_mixture(comps, cutoff)
    if kind == "zero_entanglement_family":
        samples = [
            st.FamilySample(float(s["weight"]), parse_complex(s.get("alpha", 0)), parse_complex(s.get("beta", 0)),
                            parse_complex(s.get("gamma", 0)), _unpolarized_spec(s))
            for s in _get(desc, "samples")
        ]
        return st.zero_entanglement_family(samples, float(desc.get("phi", 0.0)), cutoff)
    raise DescriptorError(f"unknown joint kind {kind!r}")


def build_state(desc: dict, cutoff: CutoffConfig) -> SingleModeState | JointState:
    if not isinstance(desc, dict) or "kind" not in desc:
        raise DescriptorError("descriptor must be an object with a 'kind' field")
    if desc["kind"] in SINGLE_KINDS:
        return build_single(desc, cutoff)
    return build_joint(desc, cutoff)


def auto_cutoff(desc: dict, leakage_tol: float = 1e-12, cap: int = 60) -> CutoffConfig:
    """Smallest cutoff up to ``cap`` at which the described state meets ``leakage_tol``."""
    n = st.suggest_n_max(lambda c: build_state(desc, c), leakage_tol, start=4, cap=cap)
    return CutoffConfig(n, leakage_tol)


def _pairs(arr: np.ndarray) -> list[list[float]]:
    flat = np.asarray(arr).reshape(-1)
    return [[float(z.real), float(z.imag)] for z in flat]


def state_to_dict(state: SingleModeState | JointState, descriptor: dict | None = None) -> dict:
    modes = 2 if isinstance(state, JointState) else 1
    return {
        "format": FORMAT,
        "modes": modes,
        "kind": state.kind,
        "n_max": state.cutoff.n_max,
        "leakage_tol": state.cutoff.leakage_tol,
        "leakage": float(state.leakage),
        "shape": list(state.data.shape),
        "descriptor": descriptor or {},
        "data": _pairs(state.data),
    }


def state_from_dict(obj: dict) -> SingleModeState | JointState:
    if obj.get("format") != FORMAT:
        raise DescriptorError(f"not a {FORMAT} file")
    cutoff = CutoffConfig(int(obj["n_max"]), float(obj["leakage_tol"]))
    raw = np.array(obj["data"], dtype=float).reshape(-1, 2)
    data = (raw[:, 0] + 1j * raw[:, 1]).reshape(obj["shape"])
    cls = JointState if obj["modes"] == 2 else SingleModeState
    return cls(obj["kind"], data, cutoff, float(obj["leakage"]))


def save_state(state, path: str | Path, descriptor: dict | None = None) -> None:
    Path(path).write_text(json.dumps(state_to_dict(state, descriptor)))


def load_state(path: str | Path):
    return state_from_dict(json.loads(Path(path).read_text()))


__all__ = [
    "CutoffError", "DescriptorError", "auto_cutoff", "build_state", "load_state", "parse_complex",
    "save_state", "state_from_dict", "state_to_dict",
]
