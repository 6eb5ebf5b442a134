"""Scan sigma - 6 mu_1 over M_theta and its mixtures with independence.

Diluting with Pi scales both sides of the inequality, so the ratio of the
slack to mu_1 depends on theta alone; its minimum shows how close the bound
comes to equality inside this family.

    python scripts/slack_scan.py --steps 34
"""

import argparse
from dataclasses import dataclass

import numpy as np

from copsym import measures as ms
from copsym.copulas import make_mtheta, make_pi, mixture
from copsym.quadrature import QuadratureConfig


@dataclass(frozen=True)
class ScanConfig:
    steps: int = 34
    grid_n: int = 512
    weight: float = 0.3


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--steps", type=int, default=ScanConfig.steps)
    parser.add_argument("--grid-n", type=int, default=ScanConfig.grid_n)
    parser.add_argument("--weight", type=float, default=ScanConfig.weight, help="weight of M_theta in the Pi mixture")
    args = parser.parse_args(argv)
    cfg = ScanConfig(args.steps, args.grid_n, args.weight)
    quad_cfg = QuadratureConfig(n=cfg.grid_n, refine_levels=1)

    print(f"{'theta':>8} {'mu_1':>9} {'slack':>9} {'ratio':>7} {'mixed mu_1':>11} {'mixed slack':>12}")
    best = (np.inf, None)
    for th in np.linspace(0.0, 1.0 / 3.0, cfg.steps)[1:]:
        values = []
        for c in (make_mtheta(th), mixture(cfg.weight, make_mtheta(th), make_pi())):
            mu1 = ms.mu(c, 1, quad_cfg, closed_forms=False).raw
            sigma = ms.schweizer_wolff_sigma(c, quad_cfg, closed_forms=False).value
            values.append((mu1, sigma - 6 * mu1))
        (mu1, slack), (mmu1, mslack) = values
        best = min(best, (slack / mu1, th))
        print(f"{th:>8.4f} {mu1:>9.5f} {slack:>9.5f} {slack / mu1:>7.3f} {mmu1:>11.5f} {mslack:>12.5f}")
    print(f"smallest slack / mu_1 = {best[0]:.3f} at theta = {best[1]:.4f}")


if __name__ == "__main__":
    main()
