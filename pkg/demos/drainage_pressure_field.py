"""How the drainage term shapes the pressure field.

A square domain is loaded by a unit pressure on its bottom edge and vented
on its top edge. Two full-width solid strips sit inside it. Darcy flow alone
lets the pressure leak through the strips, so it falls off linearly inside
them. Adding the drainage sink kills the pressure within a couple of elements
of the lower strip's face, which is what a real impermeable wall would do.

Either way the consistent nodal forces must add up to the pressure integrated
over the boundary, which gives an exact check on the load transfer.

    python3 demos/drainage_pressure_field.py [--n 200]
"""
import argparse

import numpy as np

from presstop.element import MaterialParams
from presstop.problems import make_problem
from presstop.validation import force_balance


def vertical_profile(spec, pressure):
    m = spec.mesh
    grid = pressure.reshape(m.nelx + 1, m.nely + 1).T
    return grid[:, m.nelx // 2]          # top edge first


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=200, help="elements per side (multiple of 20)")
    args = ap.parse_args()

    spec = make_problem("sp2", args.n, args.n)
    strips = np.flatnonzero(spec.mesh.to_grid(spec.frozen_density)[:, 0])
    bands = np.split(strips, np.flatnonzero(np.diff(strips) > 1) + 1)
    spans = ", ".join(f"{b[0]}..{b[-1]}" for b in bands)
    print(f"SP2 on {args.n}x{args.n}: solid strips in element rows {spans} (counted from the top)")

    profiles = {}
    for drainage in (True, False):
        fb = force_balance(spec, MaterialParams(drainage=drainage))
        label = "with drainage" if drainage else "Darcy only"
        print(f"\n{label}:")
        print(f"  net nodal force  MFx = {fb.mfx: .3e}   MFy = {fb.mfy:.6f}")
        print(f"  boundary integral Fx = {fb.expected_fx: .3e}    Fy = {fb.expected_fy:.6f}")
        profiles[label] = vertical_profile(spec, fb.pressure)

    # centre-line profile sampled every tenth of the height
    rows = np.linspace(0, args.n, 11).astype(int)
    print("\n  y/L   " + "".join(f"{k:>16s}" for k in profiles))
    for r in rows:
        y = 1 - r / args.n
        print(f"  {y:4.1f}  " + "".join(f"{profiles[k][r]:16.4f}" for k in profiles))


if __name__ == "__main__":
    main()
