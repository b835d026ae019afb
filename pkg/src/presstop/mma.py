"""Method of Moving Asymptotes (Svanberg), 2002-style update rules.

Solves problems of the form

    min  f0(x) + a0 z + sum_i (c_i y_i + d_i y_i^2 / 2)
    s.t. f_i(x) - a_i z - y_i <= 0,  xmin <= x <= xmax,  y >= 0, z >= 0

one convex separable approximation at a time. The subproblem is solved through
its dual: for fixed multipliers the primal minimiser is closed-form per
variable, and the concave dual function is maximised with a projected Newton
method and Armijo backtracking.

Only ``a = 0`` is supported, in which case ``z = 0`` at every solution.

Asymptotes follow the oscillation heuristic without a floor on their distance
to ``x`` unless ``asymptote_bounds`` is set. With the usual floor of
``0.01 (xmax - xmin)`` the approximation cannot resolve a minimum more finely
than roughly half that distance, and iterates settle into a two-cycle around
it; without the floor the gap keeps shrinking while the iterates oscillate.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .errors import OptimizerError

MAX_NEWTON_STEPS = 200
KKT_TOL = 1e-9
GAP_FLOOR = 1e-10


@dataclass(frozen=True)
class MmaState:
    low: np.ndarray
    upp: np.ndarray
    xold1: np.ndarray
    xold2: np.ndarray
    iteration: int = 0
    a0: float = 1.0
    a: np.ndarray = field(default_factory=lambda: np.zeros(1))
    c: np.ndarray = field(default_factory=lambda: np.full(1, 1000.0))
    d: np.ndarray = field(default_factory=lambda: np.zeros(1))
    asyinit: float = 0.5
    asyincr: float = 1.2
    asydecr: float = 0.7
    albefa: float = 0.1
    raa0: float = 1e-5
    move_limit: float = 0.1
    # (min, max) asymptote distance as multiples of xmax - xmin; None disables the clamp
    asymptote_bounds: tuple[float, float] | None = None
    # diagnostics of the most recent subproblem
    lam: np.ndarray | None = None
    y: np.ndarray | None = None
    z: float = 0.0
    kkt_residual: float = float("nan")
    newton_steps: int = 0

    @classmethod
    def initial(cls, x, m: int = 1, xmin=0.0, xmax=1.0, **kwargs) -> "MmaState":
        x = np.asarray(x, dtype=float).copy()
        kwargs.setdefault("a", np.zeros(m))
        kwargs.setdefault("c", np.full(m, 1000.0))
        kwargs.setdefault("d", np.zeros(m))
        return cls(
            low=np.broadcast_to(np.asarray(xmin, float), x.shape).copy(),
            upp=np.broadcast_to(np.asarray(xmax, float), x.shape).copy(),
            xold1=x.copy(),
            xold2=x.copy(),
            **kwargs,
        )


def update_asymptotes(state: MmaState, x, xmin, xmax, iteration: int):
    span = xmax - xmin
    if iteration <= 2:
        init = state.asyinit * np.maximum(span, 1e-5)
        return x - init, x + init
    osc = (x - state.xold1) * (state.xold1 - state.xold2)
    factor = np.ones_like(x)
    factor[osc > 0] = state.asyincr
    factor[osc < 0] = state.asydecr
    low = x - factor * (state.xold1 - state.low)
    upp = x + factor * (state.upp - state.xold1)
    if state.asymptote_bounds is not None:
        lo, hi = state.asymptote_bounds
        low = np.minimum(np.maximum(low, x - hi * span), x - lo * span)
        upp = np.maximum(np.minimum(upp, x + hi * span), x + lo * span)
    # keep the asymptotes strictly apart from x after long oscillation runs
    floor = GAP_FLOOR * np.maximum(span, 1e-5)
    low = np.minimum(low, x - floor)
    upp = np.maximum(upp, x + floor)
    return low, upp


@dataclass
class Subproblem:
    """Convex separable MMA approximation around ``xval``."""

    xval: np.ndarray
    low: np.ndarray
    upp: np.ndarray
    alfa: np.ndarray
    beta: np.ndarray
    p0: np.ndarray
    q0: np.ndarray
    r0: float
    P: np.ndarray
    Q: np.ndarray
    b: np.ndarray
    a0: float
    c: np.ndarray
    d: np.ndarray

    @property
    def m(self) -> int:
        return self.b.size

    def lam_upper(self) -> np.ndarray:
        return np.where(self.d > 0, np.inf, self.c)

    def primal(self, lam):
        """Closed-form minimiser of the Lagrangian in ``x`` for fixed ``lam``."""
        pj = self.p0 + lam @ self.P
        qj = self.q0 + lam @ self.Q
        sp, sq = np.sqrt(pj), np.sqrt(qj)
        x = (sp * self.low + sq * self.upp) / (sp + sq)
        return np.clip(x, self.alfa, self.beta), pj, qj

    def y_of(self, lam, g):
        pos = self.d > 0
        y = np.zeros(self.m)
        y[pos] = np.maximum(0.0, (lam[pos] - self.c[pos]) / self.d[pos])
        # d = 0: y is only nonzero when lam sits at c; take the violation
        at_cap = ~pos & (lam >= self.c)
        y[at_cap] = np.maximum(0.0, g[at_cap] - self.b[at_cap])
        return y

    def constraints(self, x) -> np.ndarray:
        return self.P @ (1.0 / (self.upp - x)) + self.Q @ (1.0 / (x - self.low))

    def objective(self, x) -> float:
        return float(np.sum(self.p0 / (self.upp - x) + self.q0 / (x - self.low)) + self.r0)

    def total_objective(self, x, y, z=0.0) -> float:
        return self.objective(x) + self.a0 * z + float(np.sum(self.c * y + 0.5 * self.d * y ** 2))

    def dual(self, lam):
        """Dual value, gradient and Hessian at ``lam`` (plus the primal point)."""
        x, pj, qj = self.primal(lam)
        ux, xl = self.upp - x, x - self.low
        g = self.constraints(x)
        pos = self.d > 0
        y = np.zeros(self.m)
        y[pos] = np.maximum(0.0, (lam[pos] - self.c[pos]) / self.d[pos])
        w = float(np.sum(pj / ux + qj / xl) + np.sum(self.c * y + 0.5 * self.d * y ** 2 - lam * y) - lam @ self.b)
        grad = g - y - self.b
        free = (x > self.alfa) & (x < self.beta)
        G = self.P[:, free] / ux[free] ** 2 - self.Q[:, free] / xl[free] ** 2
        h = 2.0 * pj[free] / ux[free] ** 3 + 2.0 * qj[free] / xl[free] ** 3
        hess = -(G / h) @ G.T
        hess[np.diag_indices(self.m)] -= np.where(pos & (y > 0), 1.0 / np.where(pos, self.d, 1.0), 0.0)
        return w, grad, hess, x, g


def build_subproblem(state: MmaState, x, f0, df0, fi, dfi, xmin, xmax, low, upp) -> Subproblem:
    xmami = np.maximum(xmax - xmin, 1e-5)
    ux1, xl1 = upp - x, x - low
    alfa = np.maximum(low + state.albefa * (x - low), xmin)
    beta = np.minimum(upp - state.albefa * (upp - x), xmax)

    p0 = np.maximum(df0, 0.0)
    q0 = np.maximum(-df0, 0.0)
    pq0 = 0.001 * (p0 + q0) + state.raa0 / xmami
    p0 = (p0 + pq0) * ux1 ** 2
    q0 = (q0 + pq0) * xl1 ** 2
    r0 = float(f0 - np.sum(p0 / ux1 + q0 / xl1))

    P = np.maximum(dfi, 0.0)
    Q = np.maximum(-dfi, 0.0)
    pq = 0.001 * (P + Q) + state.raa0 / xmami
    P = (P + pq) * ux1 ** 2
    Q = (Q + pq) * xl1 ** 2
    b = P @ (1.0 / ux1) + Q @ (1.0 / xl1) - fi
    return Subproblem(xval=x, low=low, upp=upp, alfa=alfa, beta=beta, p0=p0, q0=q0, r0=r0,
                      P=P, Q=Q, b=b, a0=state.a0, c=np.asarray(state.c, float), d=np.asarray(state.d, float))


def _projected_residual(lam, grad, ub):
    return float(np.max(np.abs(lam - np.clip(lam + grad, 0.0, ub))))


def solve_dual(sub: Subproblem, tol: float | None = None):
    """Maximise the dual; returns ``(x, y, lam, residual, steps)``.

    Newton directions are capped to a trust radius that grows on full steps
    and shrinks on backtracking. The cap matters where every variable sits on
    a move limit, where the dual is locally linear and its Hessian vanishes.
    """
    ub = sub.lam_upper()
    if tol is None:
        tol = KKT_TOL * max(1.0, float(np.max(np.abs(sub.b))))
    lam = np.zeros(sub.m)
    w, grad, hess, x, g = sub.dual(lam)
    res = _projected_residual(lam, grad, ub)
    radius = 1.0
    steps = 0
    while res > tol:
        if steps >= MAX_NEWTON_STEPS:
            raise OptimizerError(
                f"MMA dual solve did not converge in {MAX_NEWTON_STEPS} Newton steps "
                f"(KKT residual {res:.3e})", kkt_residual=res)
        steps += 1
        at_lower = (lam <= 0.0) & (grad < 0.0)
        at_upper = (lam >= ub) & (grad > 0.0)
        free = ~(at_lower | at_upper)
        direction = np.zeros(sub.m)
        # without usable curvature the step length comes from the trust radius alone
        newton = False
        if np.any(free):
            hf = -hess[np.ix_(free, free)]
            scale = float(np.max(np.abs(np.diag(hf))))
            if scale > 0:
                try:
                    dfree = np.linalg.solve(hf + 1e-12 * scale * np.eye(hf.shape[0]), grad[free])
                    newton = bool(np.all(np.isfinite(dfree)) and grad[free] @ dfree > 0)
                except np.linalg.LinAlgError:
                    pass
            direction[free] = dfree if newton else grad[free]
        direction[~free] = grad[~free]
        size = float(np.max(np.abs(direction)))
        capped = size > radius or not newton
        if capped:
            direction *= radius / size

        t = 1.0
        for _ in range(80):
            trial = np.clip(lam + t * direction, 0.0, ub)
            w_t, grad_t, hess_t, x_t, g_t = sub.dual(trial)
            res_t = _projected_residual(trial, grad_t, ub)
            gain = grad @ (trial - lam)
            if w_t >= w + 1e-4 * gain:
                break
            # round-off regime: dual values no longer resolve the ascent
            if abs(w_t - w) <= 1e-13 * (1.0 + abs(w)) and res_t < res:
                break
            t *= 0.5
        else:
            raise OptimizerError(f"MMA dual line search stalled (KKT residual {res:.3e})", kkt_residual=res)
        step = float(np.max(np.abs(trial - lam)))
        if t == 1.0:
            radius = 4.0 * radius if capped else max(radius, 2.0 * step)
        else:
            radius = max(step, 1e-300)
        lam, w, grad, hess, x, g, res = trial, w_t, grad_t, hess_t, x_t, g_t, res_t
    y = sub.y_of(lam, g)
    return x, y, lam, res, steps


def mma_update(state: MmaState, x, f0, df0, fi, dfi, xmin, xmax):
    """One MMA iteration; returns ``(xnew, new_state)``."""
    x = np.asarray(x, dtype=float)
    df0 = np.asarray(df0, dtype=float).reshape(-1)
    fi = np.atleast_1d(np.asarray(fi, dtype=float))
    dfi = np.atleast_2d(np.asarray(dfi, dtype=float))
    n, m = x.size, fi.size
    xmin = np.broadcast_to(np.asarray(xmin, float), x.shape)
    xmax = np.broadcast_to(np.asarray(xmax, float), x.shape)
    for name, arr in (("x", x), ("f0", f0), ("df0", df0), ("fi", fi), ("dfi", dfi), ("xmin", xmin), ("xmax", xmax)):
        if not np.all(np.isfinite(arr)):
            raise ValueError(f"MMA input {name} contains NaN or Inf")
    if df0.size != n or dfi.shape != (m, n):
        raise ValueError("gradient shapes do not match the design vector")
    if np.any(xmin > x) or np.any(x > xmax):
        raise ValueError("x must satisfy xmin <= x <= xmax")
    if np.any(np.asarray(state.a) != 0):
        raise ValueError("only a = 0 is supported")

    iteration = state.iteration + 1
    low, upp = update_asymptotes(state, x, xmin, xmax, iteration)
    sub = build_subproblem(state, x, float(f0), df0, fi, dfi, xmin, xmax, low, upp)
    xnew, y, lam, res, steps = solve_dual(sub)
    new_state = replace(
        state, low=low, upp=upp, xold1=x.copy(), xold2=state.xold1.copy(), iteration=iteration,
        lam=lam, y=y, z=0.0, kkt_residual=res, newton_steps=steps,
    )
    return xnew, new_state
