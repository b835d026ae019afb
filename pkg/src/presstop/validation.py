"""Force-balance check for fixed density fields.

For a bilinear pressure field the consistent nodal forces ``-T p`` sum to
``-integral(grad p) dV``, which by the divergence theorem equals the boundary
integral ``-closed_integral(p n) ds``. The boundary integral is evaluated
independently with the trapezoid rule on the edge nodal pressures.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .element import MaterialParams, reference_element_matrices
from .flow import assemble_flow, solve_pressure
from .mesh import Mesh
from .problems import ProblemSpec
from .structure import assemble_transformation, net_force, pressure_forces


@dataclass(frozen=True)
class ForceBalance:
    mfx: float
    mfy: float
    expected_fx: float
    expected_fy: float
    pressure: np.ndarray


def boundary_force(mesh: Mesh, p: np.ndarray) -> tuple[float, float]:
    """``-closed_integral(p n) ds`` by the trapezoid rule (element size 1)."""
    def trap(nodes):
        v = p[nodes]
        return float(np.sum(0.5 * (v[1:] + v[:-1])))

    fx = trap(mesh.lnode) - trap(mesh.rnode)   # n = -x on the left, +x on the right
    fy = trap(mesh.bnode) - trap(mesh.tnode)   # n = -y on the bottom, +y on the top
    return fx, fy


def force_balance(spec: ProblemSpec, params: MaterialParams | None = None, density=None) -> ForceBalance:
    """Net force from the pressure solve on a fixed density field."""
    params = MaterialParams() if params is None else params
    mesh = spec.mesh
    if density is None:
        density = spec.frozen_density if spec.frozen_density is not None else np.zeros(mesh.nel)
    mats = reference_element_matrices(params.nu)
    a = assemble_flow(mesh, density, params, mats)
    p = solve_pressure(a, spec.pressure_bc)
    f = pressure_forces(assemble_transformation(mesh, mats), p)
    mfx, mfy = net_force(f)
    efx, efy = boundary_force(mesh, p)
    return ForceBalance(mfx=mfx, mfy=mfy, expected_fx=efx, expected_fy=efy, pressure=p)
