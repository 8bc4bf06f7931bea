import json
import math

import numpy as np
import pytest

from beamsep import io
from beamsep.cli import CSV_COLUMNS, CSV_HEADER, main
from beamsep.fock import CutoffConfig
from beamsep.states import coherent, thermal


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("text, value", [("1.0+0.0i", 1), ("-0.5-2i", -0.5 - 2j), ("3i", 3j), ([1, -2], 1 - 2j), (0.25, 0.25)])
def test_parse_complex(text, value):
    assert io.parse_complex(text) == value


def test_parse_complex_rejects_garbage():
    with pytest.raises(io.DescriptorError):
        io.parse_complex("one")


@pytest.mark.parametrize("state", [coherent(0.3 - 0.7j, CutoffConfig(20)), thermal(0.4, CutoffConfig(30))])
def test_round_trip_is_bit_exact(state, tmp_path):
    path = tmp_path / "s.json"
    io.save_state(state, path)
    back = io.load_state(path)
    assert np.array_equal(back.data, state.data) and back.leakage == state.leakage
    assert back.cutoff == state.cutoff and back.kind == state.kind


def test_state_coherent(capsys):
    code, out, _ = run(capsys, "state", "--kind", "coherent", "--alpha", "1.0+0.0i")
    obj = json.loads(out)
    assert code == 0 and obj["modes"] == 1 and obj["leakage"] <= 1e-12
    assert obj["data"][0][0] == pytest.approx(math.exp(-0.5), abs=1e-14)


def test_state_vacuum(capsys, tmp_path):
    out = tmp_path / "vac.json"
    assert run(capsys, "state", "--kind", "fock", "--n", "0", "--nmax", "3", "--out", str(out))[0] == 0
    assert io.load_state(out).data.tolist() == [1, 0, 0, 0]


def test_state_unpolarized_sector(capsys):
    _, out, _ = run(capsys, "state", "--kind", "unpolarized", "--sector", "1", "--nmax", "1")
    rho = io.state_from_dict(json.loads(out)).data
    assert np.diag(rho).real.tolist() == [0, 0.5, 0.5, 0]


@pytest.mark.parametrize("argv, code", [
    (["state", "--kind", "nonsense"], 2),
    (["state"], 2),
    (["bogus"], 2),
    (["state", "--kind", "fock", "--n", "9", "--nmax", "3"], 3),
    (["state", "--kind", "coherent", "--alpha", "4", "--nmax", "10"], 3),
    (["sweep", "--a", '{"kind": "fock", "n": 1}', "--b", '{"kind": "fock", "n": 0}', "--steps", "1"], 2),
    (["apply", "--theta", "1"], 2),
])
def test_exit_codes(capsys, argv, code):
    assert run(capsys, *argv)[0] == code


def read_csv(text):
    lines = text.strip().splitlines()
    assert lines[0] == CSV_HEADER and tuple(lines[1].split(",")) == CSV_COLUMNS
    return np.array([[float(x) for x in line.split(",")] for line in lines[2:]])


def test_sweep_single_photon(capsys):
    _, out, _ = run(capsys, "sweep", "--a", '{"kind": "fock", "n": 1}', "--b", '{"kind": "fock", "n": 0}',
                    "--theta-min", "0", "--theta-max", "0.2", "--steps", "11")
    rows = read_csv(out)
    theta, ep = rows[:, 0], rows[:, 1]
    assert len(rows) == 11 and ep[0] == 0 and rows[0, 2] == 0
    # exact E_p = 2 cos^2 sin^2 = sin^2(theta)/2 ~ theta^2/2
    assert np.allclose(ep, np.sin(theta) ** 2 / 2, atol=1e-15)
    assert np.allclose(ep[1:], theta[1:] ** 2 / 2, rtol=0.02)
    assert np.all(np.diff(ep) > 0)


def test_sweep_coherent_pair(capsys):
    _, out, _ = run(capsys, "sweep", "--a", '{"kind": "coherent", "alpha": 1}', "--b", '{"kind": "coherent", "alpha": "0.5i"}',
                    "--theta-max", "3.0", "--steps", "4", "--phi", "0.3")
    assert np.all(read_csv(out)[:, 1] < 1e-10)


def test_config_file_and_flag_override(capsys, tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"a": {"kind": "fock", "n": 1}, "b": {"kind": "fock", "n": 0}, "steps": 3, "theta_max": 0.1}))
    _, out, _ = run(capsys, "sweep", "--config", str(cfg), "--steps", "5")
    assert len(read_csv(out)) == 5
    cfg.write_text(json.dumps({"unknown_key": 1}))
    assert run(capsys, "sweep", "--config", str(cfg))[0] == 2


def test_apply_and_report(capsys, tmp_path):
    src, dst = tmp_path / "in.json", tmp_path / "out.json"
    desc = '{"kind": "product", "a": {"kind": "fock", "n": 1}, "b": {"kind": "fock", "n": 0}}'
    run(capsys, "state", "--descriptor", desc, "--nmax", "2", "--out", str(src))
    assert run(capsys, "apply", "--in", str(src), "--theta", str(math.pi / 2), "--out", str(dst))[0] == 0
    code, out, _ = run(capsys, "report", "--in", str(dst))
    rep = json.loads(out)
    assert code == 0 and rep["e_p"] == pytest.approx(0.5) and rep["schmidt_rank"] == 2
    assert rep["min_pt_eigenvalue"] == pytest.approx(-0.5) and rep["ppt"] is False


def test_outputs_are_deterministic(capsys):
    argv = ["state", "--kind", "displaced_squeezed", "--alpha", "0.3", "--gamma", "0.2i"]
    assert run(capsys, *argv)[1] == run(capsys, *argv)[1]


def test_verify_subset_writes_manifest(capsys, tmp_path):
    manifest = tmp_path / "m.json"
    code, out, _ = run(capsys, "verify", "--claims", "sector_oracle", "--out", str(manifest))
    results = json.loads(manifest.read_text())
    assert code == 0 and results[0]["claim_id"] == "sector_oracle" and results[0]["passed"]
    assert out.strip().endswith("1/1 claims passed")
    assert run(capsys, "verify", "--claims", "no_such_claim")[0] == 2
