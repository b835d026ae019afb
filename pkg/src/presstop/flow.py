"""Darcy flow with drainage: global flow matrix assembly and pressure solve."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .element import MaterialParams, drainage_coefficient, flow_coefficient, reference_element_matrices
from .linalg import SymmetricFactor
from .mesh import Mesh


@dataclass(frozen=True)
class PressureBC:
    """Prescribed nodal pressures.

    ``fixed_dofs`` are pressure DOF (node) indices and ``fixed_values`` the
    matching pressures. Every other node is free.
    """

    nno: int
    fixed_dofs: np.ndarray
    fixed_values: np.ndarray
    pin: float = 1.0
    free_dofs: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        fixed = np.asarray(self.fixed_dofs, dtype=np.int64)
        values = np.asarray(self.fixed_values, dtype=float)
        if fixed.shape != values.shape or fixed.ndim != 1:
            raise ValueError("fixed_dofs and fixed_values must be 1-D and of equal length")
        if fixed.size == 0:
            raise ValueError("at least one pressure DOF must be prescribed")
        if np.unique(fixed).size != fixed.size:
            raise ValueError("fixed pressure DOFs must be distinct")
        if fixed.min() < 0 or fixed.max() >= self.nno:
            raise ValueError("fixed pressure DOF out of range")
        order = np.argsort(fixed)
        object.__setattr__(self, "fixed_dofs", fixed[order])
        object.__setattr__(self, "fixed_values", values[order])
        object.__setattr__(self, "free_dofs", np.setdiff1d(np.arange(self.nno), fixed))

    @classmethod
    def from_assignments(cls, nno: int, assignments, pin: float = 1.0) -> "PressureBC":
        """Build from ``(nodes, value)`` pairs applied in order; later pairs win."""
        values = np.full(nno, np.nan)
        for nodes, value in assignments:
            values[np.asarray(nodes, dtype=np.int64)] = value
        fixed = np.flatnonzero(~np.isnan(values))
        return cls(nno=nno, fixed_dofs=fixed, fixed_values=values[fixed], pin=pin)

    @property
    def fixed_mask(self) -> np.ndarray:
        mask = np.zeros(self.nno, dtype=bool)
        mask[self.fixed_dofs] = True
        return mask


def flow_index_vectors(mesh: Mesh):
    """Row/column indices of the 16 entries per element, element-major."""
    rows = np.repeat(mesh.pdofs, 4, axis=1).reshape(-1)
    cols = np.tile(mesh.pdofs, (1, 4)).reshape(-1)
    return rows, cols


def assemble_flow(mesh: Mesh, xphys, params: MaterialParams, mats=None) -> sp.csc_matrix:
    """Global flow matrix ``sum_e K(x_e) kp + D(x_e) kdp``."""
    mats = reference_element_matrices(params.nu) if mats is None else mats
    x = np.asarray(xphys, dtype=float).reshape(-1)
    if x.size != mesh.nel:
        raise ValueError(f"expected {mesh.nel} element densities, got {x.size}")
    kc = flow_coefficient(x, params)
    dc = drainage_coefficient(x, params)
    vals = (np.outer(kc, mats.kp.reshape(-1)) + np.outer(dc, mats.kdp.reshape(-1))).reshape(-1)
    rows, cols = flow_index_vectors(mesh)
    a = sp.csc_matrix((vals, (rows, cols)), shape=(mesh.nno, mesh.nno))
    return ((a + a.T) / 2).tocsc()


def factor_free_block(a: sp.spmatrix, bc: PressureBC) -> SymmetricFactor:
    a = sp.csc_matrix(a)
    free = bc.free_dofs
    return SymmetricFactor(a[free][:, free], name="flow matrix A_ff")


def solve_pressure(a: sp.spmatrix, bc: PressureBC, factor: SymmetricFactor | None = None) -> np.ndarray:
    """Solve ``A p = 0`` with prescribed pressures; returns the full nodal vector."""
    a = sp.csc_matrix(a)
    free, fixed = bc.free_dofs, bc.fixed_dofs
    p = np.zeros(bc.nno)
    p[fixed] = bc.fixed_values
    if free.size == 0:
        return p
    if factor is None:
        factor = factor_free_block(a, bc)
    rhs = -(a[free][:, fixed] @ bc.fixed_values)
    p[free] = factor.solve(rhs)
    return p


def free_residual(a: sp.spmatrix, p: np.ndarray, bc: PressureBC) -> float:
    """``||A_ff p_f + A_fc p_c|| / ||A_fc p_c||`` (absolute if the load is zero)."""
    a = sp.csc_matrix(a)
    free, fixed = bc.free_dofs, bc.fixed_dofs
    load = a[free][:, fixed] @ p[fixed]
    res = a[free][:, free] @ p[free] + load
    scale = np.linalg.norm(load)
    return float(np.linalg.norm(res) / scale) if scale > 0 else float(np.linalg.norm(res))
