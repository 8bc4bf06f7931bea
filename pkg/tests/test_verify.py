import json

import pytest

from beamsep.verify import CLAIMS, ClaimResult, VerifyConfig, claim_sector_oracle, run_all, summary_line


def test_claim_registry_is_complete():
    assert len(CLAIMS) == 12 and all(callable(f) for f in CLAIMS.values())


def test_claim_records_seed_and_runtime():
    r = claim_sector_oracle(VerifyConfig(seed=7))
    assert r.seed == 7 and r.runtime_ms >= 0 and r.passed


def test_claims_are_deterministic():
    a, b = claim_sector_oracle(VerifyConfig()), claim_sector_oracle(VerifyConfig())
    assert a.metric == b.metric


def test_manifest_is_json(tmp_path):
    path = tmp_path / "manifest.json"
    run_all(only=["sector_oracle", "schmidt_rank"], manifest=path)
    data = json.loads(path.read_text())
    assert [d["claim_id"] for d in data] == ["schmidt_rank", "sector_oracle"]
    assert {"claim_id", "anchor", "metric", "threshold", "passed", "runtime_ms", "seed", "details"} <= set(data[0])


def test_unknown_claim_rejected():
    with pytest.raises(KeyError):
        run_all(only=["missing"])


def test_summary_line():
    ok = ClaimResult("a", "", 0.0, 1.0, True)
    bad = ClaimResult("b", "", 2.0, 1.0, False)
    assert summary_line([ok]) == "1/1 claims passed"
    assert summary_line([ok, bad]) == "1/2 claims passed; failed: b"


def test_complex_details_serialise():
    r = ClaimResult("c", "", 0.0, 1.0, True, details={"z": 1 + 2j, 3: (0.5,)})
    assert json.loads(json.dumps(r.to_dict()))["details"] == {"z": [1.0, 2.0], "3": [0.5]}
