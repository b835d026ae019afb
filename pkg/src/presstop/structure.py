"""Pressure-to-force transformation and SIMP linear elasticity."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .element import reference_element_matrices
from .linalg import SymmetricFactor
from .mesh import Mesh


@dataclass(frozen=True)
class StructuralBC:
    ndof: int
    fixed_udofs: np.ndarray
    free_udofs: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        fixed = np.unique(np.asarray(self.fixed_udofs, dtype=np.int64))
        if fixed.size and (fixed.min() < 0 or fixed.max() >= self.ndof):
            raise ValueError("fixed displacement DOF out of range")
        object.__setattr__(self, "fixed_udofs", fixed)
        object.__setattr__(self, "free_udofs", np.setdiff1d(np.arange(self.ndof), fixed))


def assemble_transformation(mesh: Mesh, mats=None) -> sp.csr_matrix:
    """Global ``T`` (``2 nno x nno``) so that nodal forces are ``F = -T p``."""
    te = reference_element_matrices().te if mats is None else mats.te
    rows = np.repeat(mesh.udofs, 4, axis=1).reshape(-1)
    cols = np.tile(mesh.pdofs, (1, 8)).reshape(-1)
    vals = np.tile(te.reshape(-1), mesh.nel)
    return sp.csr_matrix((vals, (rows, cols)), shape=(mesh.ndof, mesh.nno))


def pressure_forces(t_global: sp.spmatrix, p: np.ndarray) -> np.ndarray:
    return -(t_global @ p)


def net_force(f: np.ndarray) -> tuple[float, float]:
    """Sum of the x and y nodal force components."""
    return float(np.sum(f[0::2])), float(np.sum(f[1::2]))


def assemble_stiffness(mesh: Mesh, moduli, mats=None) -> sp.csc_matrix:
    """Global stiffness ``sum_e E_e ke``, symmetrised."""
    ke = reference_element_matrices().ke if mats is None else mats.ke
    e = np.asarray(moduli, dtype=float).reshape(-1)
    if e.size != mesh.nel:
        raise ValueError(f"expected {mesh.nel} element moduli, got {e.size}")
    rows = np.repeat(mesh.udofs, 8, axis=1).reshape(-1)
    cols = np.tile(mesh.udofs, (1, 8)).reshape(-1)
    vals = np.outer(e, ke.reshape(-1)).reshape(-1)
    k = sp.csc_matrix((vals, (rows, cols)), shape=(mesh.ndof, mesh.ndof))
    return ((k + k.T) / 2).tocsc()


def factor_stiffness(k: sp.spmatrix, bc: StructuralBC) -> SymmetricFactor:
    k = sp.csc_matrix(k)
    free = bc.free_udofs
    return SymmetricFactor(k[free][:, free], name="stiffness K_ff", require_spd=True)


def solve_displacement(k: sp.spmatrix, f: np.ndarray, bc: StructuralBC,
                       factor: SymmetricFactor | None = None) -> np.ndarray:
    """Solve ``K_ff u_f = f_f`` with zero displacement on the fixed DOFs."""
    u = np.zeros(bc.ndof)
    free = bc.free_udofs
    if factor is None:
        factor = factor_stiffness(k, bc)
    u[free] = factor.solve(np.asarray(f, dtype=float)[free])
    return u


def compliance(u: np.ndarray, k: sp.spmatrix) -> float:
    return float(u @ (k @ u))
