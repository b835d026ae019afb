"""Adjoint sensitivities of compliance and of the volume constraint.

With ``C = u^T K u``, ``K u = -T p`` and ``A p = 0`` the displacement
multiplier is ``-2u`` and the flow multiplier solves
``A_ff^T lam_f = 2 T[:, free]^T u``. The gradient with respect to the
physical densities is

    dC/dx_e = -u_e^T (dK/dx_e) u_e + lam_e^T (dA/dx_e) p_e

where the second (load) term is dropped when ``lst`` is false.
"""
from __future__ import annotations

import numpy as np
import scipy.sparse as sp

from .element import (
    MaterialParams,
    drainage_coefficient_derivative,
    flow_coefficient_derivative,
    reference_element_matrices,
    simp_modulus_derivative,
)
from .flow import PressureBC
from .linalg import SymmetricFactor
from .mesh import Mesh


def solve_adjoint(a_ff: SymmetricFactor, t_global: sp.spmatrix, u: np.ndarray,
                  free_udofs: np.ndarray, pbc: PressureBC, t_sub: sp.spmatrix | None = None) -> np.ndarray:
    """Flow adjoint ``lam1``; zero on prescribed pressure DOFs.

    ``t_sub`` may carry the precomputed block ``T[free_udofs][:, free_p]``.
    """
    lam1 = np.zeros(pbc.nno)
    free_p = pbc.free_dofs
    if free_p.size == 0:
        return lam1
    if t_sub is None:
        t_sub = sp.csr_matrix(t_global)[free_udofs][:, free_p]
    rhs = 2.0 * (t_sub.T @ u[free_udofs])
    # A_ff is symmetric, so the transposed solve is the plain one
    lam1[free_p] = a_ff.solve(rhs)
    return lam1


def elastic_term(mesh: Mesh, u: np.ndarray, xphys, params: MaterialParams, mats=None) -> np.ndarray:
    """``-dE/dx_e * u_e^T ke u_e`` per element."""
    ke = reference_element_matrices(params.nu).ke if mats is None else mats.ke
    ue = u[mesh.udofs]
    energy = np.einsum("ei,ij,ej->e", ue, ke, ue)
    return -simp_modulus_derivative(np.asarray(xphys).reshape(-1), params) * energy


def load_term(mesh: Mesh, p: np.ndarray, lam1: np.ndarray, xphys, params: MaterialParams, mats=None) -> np.ndarray:
    """``lam_e^T (dA/dx_e) p_e`` per element."""
    mats = reference_element_matrices(params.nu) if mats is None else mats
    x = np.asarray(xphys).reshape(-1)
    pe = p[mesh.pdofs]
    le = lam1[mesh.pdofs]
    flow = np.einsum("ei,ij,ej->e", le, mats.kp, pe)
    drain = np.einsum("ei,ij,ej->e", le, mats.kdp, pe)
    return flow_coefficient_derivative(x, params) * flow + drainage_coefficient_derivative(x, params) * drain


def compliance_sensitivities(mesh: Mesh, p: np.ndarray, u: np.ndarray, lam1: np.ndarray, xphys,
                             params: MaterialParams, lst: bool = True, mats=None) -> np.ndarray:
    """Gradient of compliance with respect to the physical densities."""
    sens = elastic_term(mesh, u, xphys, params, mats)
    if lst:
        sens = sens + load_term(mesh, p, lam1, xphys, params, mats)
    return sens


def volume_constraint(xphys, volfrac: float, nel: int | None = None):
    """Return ``(sum(x) / (nel volfrac) - 1, d/dx)``; the gradient is constant."""
    if not 0 < volfrac <= 1:
        raise ValueError("volfrac must lie in (0, 1]")
    x = np.asarray(xphys, dtype=float).reshape(-1)
    nel = x.size if nel is None else nel
    value = float(np.sum(x) / (nel * volfrac) - 1.0)
    return value, np.full(x.size, 1.0 / (nel * volfrac))
