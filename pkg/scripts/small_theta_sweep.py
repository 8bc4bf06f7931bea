"""E_p(theta) / theta^2 against the closed-form small-angle coefficient.

For each product input the script sweeps theta on a log grid and prints the
ratio E_p / theta^2 next to the predicted coefficient; the ratio should
approach the prediction as theta -> 0 with an O(theta^2) correction.

    python3 scripts/small_theta_sweep.py --phi 0.9 --csv sweep.csv
"""
import argparse
import csv
from dataclasses import dataclass

import numpy as np

from beamsep.entanglement import e_p, small_theta_predict
from beamsep.fock import CutoffConfig, tensor
from beamsep.optics import BeamSplitterParams, apply_bs
from beamsep.states import coherent, displaced_squeezed, fock, squeezed_vacuum, suggest_n_max


@dataclass
class SweepConfig:
    phi: float = 0.9
    theta_min: float = 1e-3
    theta_max: float = 0.5
    steps: int = 12
    leakage_tol: float = 1e-24


INPUTS = {
    "fock(2) x vacuum": (lambda c: fock(2, c), lambda c: fock(0, c)),
    "coherent(1) x fock(1)": (lambda c: coherent(1.0, c), lambda c: fock(1, c)),
    "squeezed(0.4) x squeezed(0.2 e^0.3i)": (lambda c: squeezed_vacuum(0.4, c), lambda c: squeezed_vacuum(0.2 * np.exp(0.3j), c)),
    "displaced_squeezed(1, 0.3) x coherent(0.5i)": (lambda c: displaced_squeezed(1.0, 0.3, c), lambda c: coherent(0.5j, c)),
}


def sweep(cfg: SweepConfig):
    thetas = np.geomspace(cfg.theta_min, cfg.theta_max, cfg.steps)
    rows = []
    for name, (fa, fb) in INPUTS.items():
        n = suggest_n_max(lambda c: tensor(fa(c), fb(c)), cfg.leakage_tol, cap=200)
        cut = CutoffConfig(n, cfg.leakage_tol)
        a, b = fa(cut), fb(cut)
        pred = small_theta_predict(a, b, cfg.phi).coefficient
        state = tensor(a, b)
        for t in thetas:
            ratio = e_p(apply_bs(state, BeamSplitterParams(t, cfg.phi))) / t**2
            rows.append({"input": name, "theta": t, "ratio": ratio, "predicted": pred})
    return rows


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--phi", type=float, default=SweepConfig.phi)
    parser.add_argument("--steps", type=int, default=SweepConfig.steps)
    parser.add_argument("--csv", help="also write the rows to this CSV file")
    args = parser.parse_args()
    rows = sweep(SweepConfig(phi=args.phi, steps=args.steps))
    current = None
    for r in rows:
        if r["input"] != current:
            current = r["input"]
            print(f"\n{current}: predicted coefficient {r['predicted']:.10f}")
            print(f"{'theta':>10} {'E_p/theta^2':>16} {'rel. diff':>10}")
        print(f"{r['theta']:10.4g} {r['ratio']:16.10f} {(r['ratio'] - r['predicted']) / r['predicted']:10.2e}")
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=list(rows[0]))
            writer.writeheader()
            writer.writerows(rows)


if __name__ == "__main__":
    main()
