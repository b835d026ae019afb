"""Benchmark problem definitions.

Every problem is plain data: pressure and displacement boundary conditions,
non-design regions and the default run parameters used for it. ``sp1``-``sp3``
are fixed-density fields for checking the pressure model; the rest are
optimisation benchmarks.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

import numpy as np

from .flow import PressureBC
from .mesh import Mesh, build_mesh
from .structure import StructuralBC


@dataclass(frozen=True)
class ProblemSpec:
    name: str
    mesh: Mesh
    pressure_bc: PressureBC
    structural_bc: StructuralBC
    nds: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))
    ndv: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))
    pin: float = 1.0
    defaults: dict = field(default_factory=dict)
    # fixed density field for the validation problems (None for benchmarks)
    frozen_density: np.ndarray | None = None
    description: str = ""

    def __post_init__(self):
        nds = np.unique(np.asarray(self.nds, dtype=np.int64))
        ndv = np.unique(np.asarray(self.ndv, dtype=np.int64))
        if np.intersect1d(nds, ndv).size:
            raise ValueError("non-design solid and void sets overlap")
        object.__setattr__(self, "nds", nds)
        object.__setattr__(self, "ndv", ndv)

    @property
    def nelx(self) -> int:
        return self.mesh.nelx

    @property
    def nely(self) -> int:
        return self.mesh.nely

    @property
    def active(self) -> np.ndarray:
        return np.setdiff1d(np.arange(self.mesh.nel), np.union1d(self.nds, self.ndv))


def _defaults(volfrac, penal, rmin, etaf, betaf, lst, maxit):
    return dict(volfrac=volfrac, penal=penal, rmin=rmin, etaf=etaf, betaf=betaf, lst=lst, maxit=maxit)


DEFAULT_DIMS = {
    "sp1": (200, 200),
    "sp2": (200, 200),
    "sp3": (200, 200),
    "arch": (200, 100),
    "bridge": (200, 100),
    "ext_arch": (200, 100),
    "piston": (300, 100),
    "chamber": (300, 200),
}

PROBLEM_DEFAULTS = {
    "sp1": _defaults(0.3, 3, 2.4, 0.2, 8, True, 100),
    "sp2": _defaults(0.3, 3, 2.4, 0.2, 8, True, 100),
    "sp3": _defaults(0.3, 3, 2.4, 0.2, 8, True, 100),
    "arch": _defaults(0.3, 3, 2.4, 0.2, 8, True, 100),
    "bridge": _defaults(0.2, 3, 2.5, 0.2, 10, True, 150),
    "ext_arch": _defaults(0.2, 3, 4.0, 0.15, 8, True, 100),
    "piston": _defaults(0.2, 3, 2.4, 0.1, 8, True, 150),
    "chamber": _defaults(0.2, 3, 6.0, 0.1, 10, True, 200),
}

DESCRIPTIONS = {
    "sp1": "void square, pressure on the bottom edge",
    "sp2": "square with two full-width solid strips",
    "sp3": "square with three full-width solid strips",
    "arch": "internally pressurised arch, bottom edge loaded",
    "bridge": "bridge-like structure, top edge loaded, roller sides",
    "ext_arch": "externally pressurised arch",
    "piston": "piston head, top edge loaded, bottom midpoint fixed",
    "chamber": "pressurised chamber with non-design solid and void regions",
}

PROBLEM_NAMES = tuple(DEFAULT_DIMS)


def _both(nodes) -> np.ndarray:
    nodes = np.atleast_1d(np.asarray(nodes, dtype=np.int64))
    return np.concatenate([2 * nodes, 2 * nodes + 1])


def _require_divisible(name: str, nelx: int, nely: int, dx: int = 1, dy: int = 1):
    if nelx % dx:
        raise ValueError(f"{name}: nelx must be divisible by {dx}, got {nelx}")
    if nely % dy:
        raise ValueError(f"{name}: nely must be divisible by {dy}, got {nely}")


def strip_density(mesh: Mesh, fractions) -> np.ndarray:
    """Element densities with full-width solid strips of height ``nely / 20``.

    Each strip is centred at the given height fraction (measured from the
    bottom edge).
    """
    width = mesh.nely // 20
    rho = np.zeros((mesh.nely, mesh.nelx))
    for f in fractions:
        centre = mesh.nely * (1.0 - f)
        top = int(round(centre - width / 2))
        rho[top:top + width, :] = 1.0
    return mesh.from_grid(rho)


def _sp(name, mesh: Mesh, pin: float, strips) -> ProblemSpec:
    _require_divisible(name, mesh.nelx, mesh.nely, dy=20)
    pbc = PressureBC.from_assignments(mesh.nno, [(mesh.tnode, 0.0), (mesh.bnode, pin)], pin=pin)
    # lower tenth of the side edges is clamped
    nfix = max(1, mesh.nely // 10)
    fixed = _both(np.concatenate([mesh.lnode[-nfix - 1:], mesh.rnode[-nfix - 1:]]))
    return ProblemSpec(
        name=name, mesh=mesh, pressure_bc=pbc, structural_bc=StructuralBC(mesh.ndof, fixed),
        pin=pin, defaults=dict(PROBLEM_DEFAULTS[name]),
        frozen_density=strip_density(mesh, strips), description=DESCRIPTIONS[name],
    )


def make_problem(name: str, nelx: int | None = None, nely: int | None = None, pin: float = 1.0) -> ProblemSpec:
    """Build a named benchmark; dimensions default to the published ones."""
    name = name.lower().replace("-", "_")
    if name not in DEFAULT_DIMS:
        raise ValueError(f"unknown problem {name!r}; choose from {', '.join(PROBLEM_NAMES)}")
    dx, dy = DEFAULT_DIMS[name]
    nelx = dx if nelx is None else nelx
    nely = dy if nely is None else nely
    mesh = build_mesh(nelx, nely)
    L, R, T, B = mesh.lnode, mesh.rnode, mesh.tnode, mesh.bnode
    nno, ndof = mesh.nno, mesh.ndof
    defaults = dict(PROBLEM_DEFAULTS[name])
    nds = ndv = np.zeros(0, dtype=np.int64)

    if name == "sp1":
        return _sp(name, mesh, pin, [])
    if name == "sp2":
        return _sp(name, mesh, pin, [1 / 3, 2 / 3])
    if name == "sp3":
        return _sp(name, mesh, pin, [1 / 4, 1 / 2, 3 / 4])

    if name == "arch":
        pbc = PressureBC.from_assignments(nno, [(np.concatenate([T, L, R]), 0.0), (B, pin)], pin)
        fixed = _both([B[0], B[-1]])
    elif name == "bridge":
        pbc = PressureBC.from_assignments(nno, [(B, 0.0), (T, pin)], pin)
        fixed = np.concatenate([_both([B[0], B[-1]]), 2 * L, 2 * R])
    elif name == "ext_arch":
        _require_divisible(name, nelx, nely, dx=10)
        k = nelx // 10
        loaded = np.concatenate([T, L, R, B[:k], B[nelx - k:]])
        pbc = PressureBC.from_assignments(nno, [(loaded, pin), (B[k:nelx - k], 0.0)], pin)
        fixed = _both([B[k], B[nelx - k - 1]])
    elif name == "piston":
        mid = B[math.ceil((nelx + 1) / 2) - 1]
        pbc = PressureBC.from_assignments(nno, [(B, 0.0), (T, pin)], pin)
        fixed = np.concatenate([_both(mid), 2 * L, 2 * R])
    else:  # chamber
        _require_divisible(name, nelx, nely, dx=15, dy=40)
        g = mesh.elem_grid

        def rows(a, b):  # 1-based inclusive row range -> slice
            return slice(a - 1, b)

        def cols(a, b):
            return slice(a - 1, b)

        sr1 = g[rows(3 * nely // 8, 17 * nely // 40), cols(2 * nelx // 3, nelx)]
        sr2 = g[rows(23 * nely // 40, 5 * nely // 8), cols(2 * nelx // 3, nelx)]
        vr1 = g[rows(17 * nely // 40, nely), cols(7 * nelx // 15, 8 * nelx // 15)]
        vr2 = g[rows(17 * nely // 40, 23 * nely // 40), cols(8 * nelx // 15, nelx)]
        ndv = np.union1d(vr1.ravel(), vr2.ravel())
        # void assignment is applied last, so it wins where the regions touch
        nds = np.setdiff1d(np.union1d(sr1.ravel(), sr2.ravel()), ndv)
        s1fix = g[rows(3 * nely // 8, 17 * nely // 40), nelx - 1]
        s2fix = g[rows(23 * nely // 40, 25 * nely // 40), nelx - 1]
        fixx = np.unique(mesh.pdofs[np.concatenate([s1fix, s2fix])])
        void_nodes = np.unique(mesh.pdofs[ndv])
        pbc = PressureBC.from_assignments(
            nno, [(np.concatenate([T, L, R]), 0.0), (np.concatenate([void_nodes, B]), pin)], pin)
        fixed = np.concatenate([_both([B[0], B[-1]]), _both(fixx)])

    return ProblemSpec(
        name=name, mesh=mesh, pressure_bc=pbc, structural_bc=StructuralBC(ndof, fixed),
        nds=nds, ndv=ndv, pin=pin, defaults=defaults, description=DESCRIPTIONS[name],
    )


# --- custom problems -------------------------------------------------------

_EDGES = ("left", "right", "top", "bottom")
_SELECTOR = re.compile(
    r"^\s*(?P<edge>left|right|top|bottom)\s*"
    r"(?:\[(?P<a>[-+0-9.eE]*)\s*:\s*(?P<b>[-+0-9.eE]*)\]|@(?P<at>[-+0-9.eE]+))?\s*$"
)


def edge_nodes(mesh: Mesh, edge: str):
    """Nodes of an edge and their position along it as a fraction in [0, 1].

    Horizontal edges run left to right, vertical edges bottom to top.
    """
    if edge == "bottom":
        return mesh.bnode, np.linspace(0.0, 1.0, mesh.nelx + 1)
    if edge == "top":
        return mesh.tnode, np.linspace(0.0, 1.0, mesh.nelx + 1)
    if edge == "left":
        return mesh.lnode[::-1], np.linspace(0.0, 1.0, mesh.nely + 1)
    if edge == "right":
        return mesh.rnode[::-1], np.linspace(0.0, 1.0, mesh.nely + 1)
    raise ValueError(f"unknown edge {edge!r}; choose from {', '.join(_EDGES)}")


def select_nodes(mesh: Mesh, selector: str) -> np.ndarray:
    """Resolve ``edge``, ``edge[a:b]`` (fraction range) or ``edge@f`` (nearest node)."""
    m = _SELECTOR.match(selector.lower())
    if not m:
        raise ValueError(f"bad edge selector {selector!r}; use e.g. 'bottom', 'left[0:0.5]', 'bottom@1'")
    nodes, s = edge_nodes(mesh, m["edge"])
    if m["at"] is not None:
        return nodes[[int(np.argmin(np.abs(s - float(m["at"]))))]]
    if m["a"] is None and m["b"] is None:
        return nodes
    a = float(m["a"]) if m["a"] else 0.0
    b = float(m["b"]) if m["b"] else 1.0
    tol = 1e-9
    sel = nodes[(s >= a - tol) & (s <= b + tol)]
    if sel.size == 0:
        raise ValueError(f"selector {selector!r} picks no nodes")
    return sel


def _split_items(text: str):
    return [item.strip() for item in re.split(r"[;,]", text) if item.strip()]


def make_custom_problem(nelx: int, nely: int, pressure: str, supports: str, pin: float = 1.0,
                        name: str = "custom", **defaults) -> ProblemSpec:
    """Problem from edge-selector strings.

    ``pressure`` is a list like ``"bottom:pin; top:0; left:0; right:0"``
    (assignments applied in order, later ones win) and ``supports`` a list
    like ``"bottom@0:xy; bottom@1:xy; left:x"``.
    """
    mesh = build_mesh(nelx, nely)
    assignments = []
    for item in _split_items(pressure):
        sel, _, value = item.rpartition(":")
        if not sel:
            raise ValueError(f"pressure item {item!r} must look like 'edge:value'")
        v = pin if value.strip().lower() == "pin" else float(value)
        assignments.append((select_nodes(mesh, sel), v))
    if not assignments:
        raise ValueError("custom problem needs at least one pressure assignment")
    fixed = []
    for item in _split_items(supports):
        sel, _, dirs = item.rpartition(":")
        dirs = dirs.strip().lower()
        if not sel or not dirs or set(dirs) - {"x", "y"}:
            raise ValueError(f"support item {item!r} must look like 'edge:x', 'edge:y' or 'edge:xy'")
        nodes = select_nodes(mesh, sel)
        if "x" in dirs:
            fixed.append(2 * nodes)
        if "y" in dirs:
            fixed.append(2 * nodes + 1)
    if not fixed:
        raise ValueError("custom problem needs at least one support")
    base = dict(PROBLEM_DEFAULTS["arch"])
    base.update(defaults)
    return ProblemSpec(
        name=name, mesh=mesh,
        pressure_bc=PressureBC.from_assignments(mesh.nno, assignments, pin),
        structural_bc=StructuralBC(mesh.ndof, np.concatenate(fixed)),
        pin=pin, defaults=base, description="user-defined",
    )
