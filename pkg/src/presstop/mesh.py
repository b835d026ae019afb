"""Structured Q4 grid: node/element numbering, DOF maps and edge node sets.

Nodes are numbered column-major, top-to-bottom within a column and columns
left-to-right. Elements follow the same ordering. All indices are 0-based;
node ``k`` carries displacement DOFs ``2k`` (x) and ``2k + 1`` (y) and the
pressure DOF ``k``. Within an element the local node order is
counter-clockwise starting at the bottom-left corner.

Physical coordinates use unit square elements with the y axis pointing up, so
node ``(row, col)`` sits at ``x = col``, ``y = nely - row``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class Mesh:
    nelx: int
    nely: int
    udofs: np.ndarray = field(repr=False)
    pdofs: np.ndarray = field(repr=False)
    lnode: np.ndarray = field(repr=False)
    rnode: np.ndarray = field(repr=False)
    tnode: np.ndarray = field(repr=False)
    bnode: np.ndarray = field(repr=False)
    elem_grid: np.ndarray = field(repr=False)
    node_grid: np.ndarray = field(repr=False)

    @property
    def nel(self) -> int:
        return self.nelx * self.nely

    @property
    def nno(self) -> int:
        return (self.nelx + 1) * (self.nely + 1)

    @property
    def ndof(self) -> int:
        return 2 * self.nno

    def node_coordinates(self) -> np.ndarray:
        """Return an ``(nno, 2)`` array of physical node coordinates."""
        k = np.arange(self.nno)
        col, row = np.divmod(k, self.nely + 1)
        return np.column_stack([col, self.nely - row]).astype(float)

    def boundary_nodes(self) -> np.ndarray:
        return np.unique(np.concatenate([self.lnode, self.rnode, self.tnode, self.bnode]))

    def to_grid(self, values: np.ndarray) -> np.ndarray:
        """Reshape a per-element vector to the ``(nely, nelx)`` image layout."""
        return np.asarray(values).reshape(self.nelx, self.nely).T

    def from_grid(self, grid: np.ndarray) -> np.ndarray:
        """Inverse of :meth:`to_grid`."""
        return np.asarray(grid).T.reshape(-1)


def build_mesh(nelx: int, nely: int) -> Mesh:
    """Build the structured mesh for an ``nelx`` by ``nely`` element grid."""
    for name, n in (("nelx", nelx), ("nely", nely)):
        if int(n) != n or n < 1:
            raise ValueError(f"{name} must be a positive integer, got {n!r}")
    nelx, nely = int(nelx), int(nely)
    nno = (nelx + 1) * (nely + 1)

    node_grid = np.arange(nno).reshape(nelx + 1, nely + 1).T
    elem_grid = np.arange(nelx * nely).reshape(nelx, nely).T

    # top-left node of every element, element order (column-major)
    tl = node_grid[:-1, :-1].T.reshape(-1)
    bl = tl + 1
    br = bl + nely + 1
    tr = tl + nely + 1
    pdofs = np.column_stack([bl, br, tr, tl])
    udofs = np.empty((nelx * nely, 8), dtype=np.int64)
    udofs[:, 0::2] = 2 * pdofs
    udofs[:, 1::2] = 2 * pdofs + 1

    return Mesh(
        nelx=nelx,
        nely=nely,
        udofs=udofs,
        pdofs=pdofs.astype(np.int64),
        lnode=node_grid[:, 0].copy(),
        rnode=node_grid[:, -1].copy(),
        tnode=node_grid[0, :].copy(),
        bnode=node_grid[-1, :].copy(),
        elem_grid=elem_grid,
        node_grid=node_grid,
    )
