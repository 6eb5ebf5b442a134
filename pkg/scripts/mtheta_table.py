"""Tabulate the M_theta closed forms next to their numerical oracles as CSV.

Columns are plot-ready: theta, then each functional as closed form and
numerical value.

    python scripts/mtheta_table.py --steps 41 --out mtheta.csv
"""

import argparse
import csv
import sys
from dataclasses import dataclass

import numpy as np

from copsym.cli import table_rows
from copsym.quadrature import QuadratureConfig


@dataclass(frozen=True)
class TableConfig:
    steps: int = 21
    grid_n: int = 512
    mc_pairs: int = 200_000
    seed: int = 0


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--steps", type=int, default=TableConfig.steps, help="number of theta values in [0, 1/3]")
    parser.add_argument("--grid-n", type=int, default=TableConfig.grid_n)
    parser.add_argument("--mc-pairs", type=int, default=TableConfig.mc_pairs)
    parser.add_argument("--seed", type=int, default=TableConfig.seed)
    parser.add_argument("--out", default="-")
    args = parser.parse_args(argv)
    cfg = TableConfig(args.steps, args.grid_n, args.mc_pairs, args.seed)

    thetas = np.linspace(0.0, 1.0 / 3.0, cfg.steps)
    rows = table_rows(thetas, QuadratureConfig(n=cfg.grid_n, refine_levels=1), cfg.seed, cfg.mc_pairs)
    out = sys.stdout if args.out == "-" else open(args.out, "w", newline="")
    writer = csv.DictWriter(out, fieldnames=list(rows[0]))
    writer.writeheader()
    for row in rows:
        writer.writerow({k: f"{float(v):.17g}" for k, v in row.items()})
    if out is not sys.stdout:
        out.close()
    worst = max(r["max_abs_diff"] for r in rows)
    print(f"largest closed-form vs numerical difference: {worst:.3g}", file=sys.stderr)


if __name__ == "__main__":
    main()
