"""Sparse direct factorisations shared by the flow, elasticity and adjoint solves."""
from __future__ import annotations

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from .errors import SolverError

#: pivot-ratio threshold above which a block is treated as singular
COND_LIMIT = 1e15


class SymmetricFactor:
    """LU of a symmetric matrix with diagonal pivoting only (an LDL^T in disguise).

    With ``SymmetricMode`` and no off-diagonal pivoting the diagonal of ``U``
    holds the pivots ``D`` of ``A = L D L^T``. Their sign tells whether the
    block is positive definite and their spread gives a cheap lower bound on
    the condition number.
    """

    def __init__(self, a: sp.spmatrix, name: str = "matrix", require_spd: bool = False):
        self.name = name
        a = sp.csc_matrix(a)
        if a.shape[0] == 0:
            raise SolverError(f"{name}: empty free block, nothing to solve")
        try:
            self._lu = splu(
                a,
                permc_spec="MMD_AT_PLUS_A",
                diag_pivot_thresh=0.0,
                options={"SymmetricMode": True},
            )
        except RuntimeError as exc:  # exactly singular
            raise SolverError(f"{name}: factorisation failed ({exc})") from exc
        pivots = self._lu.U.diagonal()
        absp = np.abs(pivots)
        if not np.all(np.isfinite(pivots)) or absp.min() == 0.0:
            raise SolverError(f"{name}: singular block")
        self.cond_estimate = float(absp.max() / absp.min())
        if self.cond_estimate > COND_LIMIT:
            raise SolverError(
                f"{name}: near-singular block (pivot ratio {self.cond_estimate:.3e} > {COND_LIMIT:.0e})"
            )
        if require_spd and np.any(pivots <= 0):
            raise SolverError(f"{name}: free block is not positive definite")

    def solve(self, rhs: np.ndarray, trans: str = "N") -> np.ndarray:
        x = self._lu.solve(np.asarray(rhs, dtype=float), trans=trans)
        if not np.all(np.isfinite(x)):
            raise SolverError(f"{self.name}: non-finite solution")
        return x
