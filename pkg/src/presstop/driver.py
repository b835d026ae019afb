"""Optimisation loop for compliance minimisation under pressure loads."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .element import MaterialParams, reference_element_matrices, simp_modulus
from .errors import OptimizerError, SolverError
from .filters import (
    ProjectionParams,
    apply_density_filter,
    backproject_sensitivities,
    continuation_step,
    grayness_measure,
    make_kernel,
    project,
    project_derivative,
)
from .flow import assemble_flow, factor_free_block, solve_pressure
from .mma import MmaState, mma_update
from .problems import PROBLEM_DEFAULTS, ProblemSpec, make_problem
from .sensitivity import compliance_sensitivities, solve_adjoint, volume_constraint
from .structure import assemble_stiffness, assemble_transformation, compliance, factor_stiffness, pressure_forces, solve_displacement

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class RunConfig:
    problem: str = "arch"
    nelx: int | None = None
    nely: int | None = None
    volfrac: float = 0.3
    penal: float = 3.0
    rmin: float = 2.4
    etaf: float = 0.2
    betaf: float = 8.0
    lst: bool = True
    maxit: int = 100
    # projection is enabled when betamax is set
    betamax: float | None = None
    period: int = 25
    eta_proj: float = 0.5
    out: str | None = None
    change_tol: float = 0.01
    move_limit: float = 0.1
    drainage: bool = True
    pin: float = 1.0

    def __post_init__(self):
        if not 0 < self.volfrac < 1:
            raise ValueError("volfrac must lie in (0, 1)")
        if self.penal < 1:
            raise ValueError("penal must be >= 1")
        if self.rmin <= 0:
            raise ValueError("rmin must be positive")
        if self.maxit < 1:
            raise ValueError("maxit must be >= 1")
        if self.betamax is not None and self.betamax <= 0:
            raise ValueError("betamax must be positive")
        if self.period < 1:
            raise ValueError("period must be >= 1")
        if not 0 < self.move_limit <= 1:
            raise ValueError("move_limit must lie in (0, 1]")
        for name in ("nelx", "nely"):
            v = getattr(self, name)
            if v is not None and v < 1:
                raise ValueError(f"{name} must be >= 1")

    @classmethod
    def for_problem(cls, name: str, **overrides) -> "RunConfig":
        """Config pre-filled with a benchmark's default parameters."""
        key = name.lower().replace("-", "_")
        if key not in PROBLEM_DEFAULTS:
            raise ValueError(f"unknown problem {name!r}")
        values = dict(PROBLEM_DEFAULTS[key])
        values.update(overrides)
        return cls(problem=key, **values)

    @property
    def projection(self) -> ProjectionParams | None:
        if self.betamax is None:
            return None
        return ProjectionParams(beta=1.0, betamax=float(self.betamax), eta_proj=self.eta_proj, period=self.period)

    def material(self) -> MaterialParams:
        return MaterialParams(penal=self.penal, etaf=self.etaf, betaf=self.betaf, drainage=self.drainage)


@dataclass
class DesignField:
    x: np.ndarray
    active: np.ndarray
    nds: np.ndarray
    ndv: np.ndarray


@dataclass
class Analysis:
    """Physical state and gradients for one design vector."""

    xtilde: np.ndarray
    xphys: np.ndarray
    pressure: np.ndarray
    displacement: np.ndarray
    compliance: float
    dc: np.ndarray          # d compliance / d design variables (all elements)
    volume: float
    dv: np.ndarray          # d volume constraint / d design variables


@dataclass
class OptResult:
    xphys: np.ndarray       # (nely, nelx)
    x: np.ndarray
    pressure: np.ndarray
    displacement: np.ndarray
    compliance: list = field(default_factory=list)
    # compliance scaled by normf = 1000 / C at iteration 1, as passed to MMA
    objective: list = field(default_factory=list)
    volfrac: list = field(default_factory=list)
    volume_constraint: list = field(default_factory=list)
    change: list = field(default_factory=list)
    beta: list = field(default_factory=list)
    iterations: int = 0
    grayness: float = float("nan")
    converged: bool = False
    normf: float = float("nan")
    problem: str = ""
    config: RunConfig | None = None
    nelx: int = 0
    nely: int = 0

    @property
    def final_compliance(self) -> float:
        return self.compliance[-1] if self.compliance else float("nan")

    @property
    def final_objective(self) -> float:
        return self.objective[-1] if self.objective else float("nan")


def initialize(spec: ProblemSpec, cfg: RunConfig) -> DesignField:
    """Uniform start on the active elements, non-design regions fixed."""
    nel = spec.mesh.nel
    nds, ndv, active = spec.nds, spec.ndv, spec.active
    if active.size == 0:
        raise ValueError("problem has no design elements")
    value = (cfg.volfrac * (nel - ndv.size) - nds.size) / active.size
    if not -1e-12 <= value <= 1 + 1e-12:
        raise ValueError(
            f"volume budget incompatible with the non-design regions (initial density {value:.4g})")
    x = np.zeros(nel)
    x[active] = min(1.0, max(0.0, value))
    x[nds] = 1.0
    x[ndv] = 0.0
    return DesignField(x=x, active=active, nds=nds, ndv=ndv)


class Model:
    """Precomputed operators of one problem; ``analyze`` maps designs to state."""

    def __init__(self, spec: ProblemSpec, cfg: RunConfig):
        self.spec = spec
        self.cfg = cfg
        self.mesh = spec.mesh
        self.params = cfg.material()
        self.mats = reference_element_matrices(self.params.nu)
        self.kernel = make_kernel(cfg.rmin, self.mesh.nelx, self.mesh.nely)
        self.t_global = assemble_transformation(self.mesh, self.mats)
        self.t_sub = sp.csr_matrix(self.t_global)[spec.structural_bc.free_udofs][:, spec.pressure_bc.free_dofs]
        self.fixed = np.union1d(spec.nds, spec.ndv)

    def physical(self, x, projection: ProjectionParams | None):
        """``(xtilde, xphys)`` flat vectors for design ``x``."""
        m = self.mesh
        xtilde = m.from_grid(apply_density_filter(m.to_grid(x), self.kernel))
        xphys = project(xtilde, projection) if projection is not None else xtilde.copy()
        xphys[self.spec.nds] = 1.0
        xphys[self.spec.ndv] = 0.0
        return xtilde, xphys

    def _chain(self, sens, xtilde, projection):
        m = self.mesh
        sens = sens.copy()
        # non-design elements are overwritten after filtering
        sens[self.fixed] = 0.0
        if projection is not None:
            # multiplying here rather than dividing hs by the derivative keeps
            # elements whose projection slope underflows to zero finite
            sens *= project_derivative(xtilde, projection)
        return m.from_grid(backproject_sensitivities(m.to_grid(sens), self.kernel.hs, self.kernel))

    def analyze(self, x, projection: ProjectionParams | None = None, lst: bool | None = None,
                pressure: np.ndarray | None = None) -> Analysis:
        """State and gradients at design ``x``.

        Passing ``pressure`` freezes the load: the flow solve is skipped and
        the load term is dropped, which makes ``dc`` the exact gradient of the
        compliance under that fixed load.
        """
        lst = self.cfg.lst if lst is None else lst
        spec, m, prm = self.spec, self.mesh, self.params
        xtilde, xphys = self.physical(np.asarray(x, dtype=float), projection)

        if pressure is None:
            a = assemble_flow(m, xphys, prm, self.mats)
            a_ff = factor_free_block(a, spec.pressure_bc)
            p = solve_pressure(a, spec.pressure_bc, a_ff)
        else:
            p, lst = np.asarray(pressure, dtype=float), False
        f = pressure_forces(self.t_global, p)
        k = assemble_stiffness(m, simp_modulus(xphys, prm), self.mats)
        k_ff = factor_stiffness(k, spec.structural_bc)
        u = solve_displacement(k, f, spec.structural_bc, k_ff)
        c = compliance(u, k)
        if lst:
            lam1 = solve_adjoint(a_ff, self.t_global, u, spec.structural_bc.free_udofs, spec.pressure_bc, self.t_sub)
        else:
            lam1 = np.zeros(m.nno)
        dc_phys = compliance_sensitivities(m, p, u, lam1, xphys, prm, lst=lst, mats=self.mats)
        vol, dv_phys = volume_constraint(xphys, self.cfg.volfrac)
        return Analysis(
            xtilde=xtilde, xphys=xphys, pressure=p, displacement=u, compliance=c,
            dc=self._chain(dc_phys, xtilde, projection), volume=vol,
            dv=self._chain(dv_phys, xtilde, projection),
        )


def _attach(exc: Exception, result: OptResult) -> Exception:
    exc.partial_result = result
    return exc


def optimize(spec: ProblemSpec, cfg: RunConfig, callback=None) -> OptResult:
    """Run the optimisation; returns histories and the final fields.

    Each iteration analyses the current design, logs its compliance, takes one
    MMA step and logs the volume fraction and change of the updated design.
    Solver or optimiser failures propagate with ``partial_result`` attached.
    """
    model = Model(spec, cfg)
    mesh = spec.mesh
    design = initialize(spec, cfg)
    x, act = design.x, design.active
    proj = cfg.projection
    state = MmaState.initial(x[act], m=1, move_limit=cfg.move_limit)
    result = OptResult(xphys=mesh.to_grid(model.physical(x, proj)[1]), x=x.copy(),
                       pressure=np.zeros(mesh.nno), displacement=np.zeros(mesh.ndof),
                       problem=spec.name, config=cfg, nelx=mesh.nelx, nely=mesh.nely)
    normf = float("nan")
    loop, change = 0, 1.0
    while loop < cfg.maxit and change > cfg.change_tol:
        loop += 1
        try:
            an = model.analyze(x, proj)
        except (SolverError, ValueError) as exc:
            raise _attach(exc, result)
        if loop == 1:
            normf = 1000.0 / an.compliance if an.compliance > 0 else 1.0
            result.normf = normf
        xval = x[act]
        xmin = np.maximum(0.0, xval - cfg.move_limit)
        xmax = np.minimum(1.0, xval + cfg.move_limit)
        try:
            xnew, state = mma_update(state, xval, an.compliance * normf, an.dc[act] * normf,
                                     np.array([an.volume]), an.dv[act][None, :], xmin, xmax)
        except (OptimizerError, ValueError) as exc:
            raise _attach(exc, result)
        change = float(np.max(np.abs(xnew - xval))) if xnew.size else 0.0
        x = x.copy()
        x[act] = xnew
        if proj is not None:
            result.beta.append(proj.beta)
            proj = continuation_step(loop, proj)
        _, xphys = model.physical(x, proj)
        vol, _ = volume_constraint(xphys, cfg.volfrac)
        result.compliance.append(an.compliance)
        result.objective.append(an.compliance * normf)
        result.volfrac.append(float(np.mean(xphys)))
        result.volume_constraint.append(vol)
        result.change.append(change)
        result.iterations = loop
        result.x, result.xphys = x, mesh.to_grid(xphys)
        result.pressure, result.displacement = an.pressure, an.displacement
        log.info("It.:%5d Obj.:%11.4f Vol.:%7.3f ch.:%7.3f", loop, result.objective[-1], result.volfrac[-1], change)
        if callback is not None:
            callback(loop, result)
    result.converged = change <= cfg.change_tol
    result.grayness = grayness_measure(result.xphys)
    return result


def run(cfg: RunConfig, spec: ProblemSpec | None = None) -> OptResult:
    """Build the named problem (unless given) and optimise it."""
    if spec is None:
        spec = make_problem(cfg.problem, cfg.nelx, cfg.nely, pin=cfg.pin)
    return optimize(spec, cfg)


__all__ = [
    "Analysis", "DesignField", "Model", "OptResult", "RunConfig",
    "initialize", "optimize", "run",
]
