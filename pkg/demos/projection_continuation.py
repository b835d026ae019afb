"""Crisp 0/1 designs with Heaviside projection.

The density filter leaves a band of intermediate densities along every
boundary. Projecting the filtered field through a smooth step whose
steepness doubles every 25 iterations pushes those values to 0 or 1. The
grayness measure drops from a few percent to essentially zero.

The small default mesh settles quickly, and the usual stopping test would
end the run before the steepness has grown. The demo therefore disables that
test so the full schedule is visible.

    python3 demos/projection_continuation.py [--full]
"""
import argparse

from presstop import RunConfig, run


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--full", action="store_true", help="use the 200 x 100 benchmark mesh")
    args = ap.parse_args()
    size = {} if args.full else dict(nelx=60, nely=30, rmin=1.5)

    plain = run(RunConfig.for_problem("arch", **size))
    sharp = run(RunConfig.for_problem("arch", betamax=256, maxit=250, change_tol=0.0, **size))
    print(f"filter only:      grayness {plain.grayness:8.4f}%   objective {plain.final_objective:.2f}")
    print(f"with projection:  grayness {sharp.grayness:8.4f}%   objective {sharp.final_objective:.2f}")
    changes = [i for i in range(1, len(sharp.beta)) if sharp.beta[i] != sharp.beta[i - 1]]
    print(f"beta doubled at the end of iterations {changes}, final beta {sharp.beta[-1]:g}")


if __name__ == "__main__":
    main()
