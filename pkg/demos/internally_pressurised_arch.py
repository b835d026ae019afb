"""Design an arch that carries a pressure load applied from below.

The bottom edge sits at unit pressure, the other edges are vented, and the
two bottom corners are pinned. The load follows the evolving boundary
because the pressure field is recomputed from the current densities every
iteration. The script prints the iteration log, writes the result files, and
draws a coarse text rendering of the final layout.

    python3 demos/internally_pressurised_arch.py            # 60 x 30, a few seconds
    python3 demos/internally_pressurised_arch.py --full     # 200 x 100, about a minute
"""
import argparse
import logging

import numpy as np

from presstop import RunConfig, run
from presstop.export import export_results


def ascii_layout(xphys, width=60):
    step = max(1, xphys.shape[1] // width)
    shades = " .:-=+*#%@"
    for row in xphys[::2 * step, ::step]:
        print("".join(shades[min(9, int(v * 10))] for v in row))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--full", action="store_true", help="use the 200 x 100 benchmark mesh")
    ap.add_argument("--out", default="arch_out", help="directory for the result files")
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")

    if args.full:
        cfg = RunConfig.for_problem("arch")
    else:
        cfg = RunConfig.for_problem("arch", nelx=60, nely=30, rmin=1.5, maxit=60)
    result = run(cfg)

    print(f"\n{result.iterations} iterations, converged: {result.converged}")
    print(f"compliance {result.final_compliance:.6g} (normalised objective {result.final_objective:.2f})")
    print(f"grayness {result.grayness:.2f}%\n")
    ascii_layout(result.xphys)
    for path in export_results(result, args.out):
        print("wrote", path)


if __name__ == "__main__":
    main()
