"""Run every verification claim and write a JSON manifest.

    python3 scripts/run_verify.py --out manifest.json
"""
import argparse
import sys

from beamsep.verify import CLAIMS, VerifyConfig, run_all, summary_line


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default="manifest.json")
    parser.add_argument("--seed", type=int, default=VerifyConfig.seed)
    parser.add_argument("--claims", nargs="*", choices=sorted(CLAIMS))
    args = parser.parse_args()
    results = run_all(VerifyConfig(seed=args.seed), only=args.claims, manifest=args.out)
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'}  {r.claim_id:<28} metric={r.metric:9.2e}  "
              f"threshold={r.threshold:7.1e}  {r.runtime_ms:6d} ms")
    print(summary_line(results))
    return 0 if all(r.passed for r in results) else 1


if __name__ == "__main__":
    sys.exit(main())
