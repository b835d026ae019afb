"""Cone density filter, sensitivity back-projection and Heaviside projection.

Fields are element grids shaped ``(nely, nelx)``. The filter pads with zeros
outside the domain (zero-Dirichlet), which biases boundary elements towards
void; normalisation by ``hs`` keeps uniform fields unchanged.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy import ndimage


@dataclass(frozen=True)
class FilterKernel:
    rmin: float
    h: np.ndarray
    hs: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return self.hs.shape


def cone_stencil(rmin: float) -> np.ndarray:
    """Weights ``max(0, rmin - dist)`` on a ``(2 ceil(rmin) - 1)``-square stencil."""
    if rmin <= 0:
        raise ValueError("filter radius must be positive")
    n = math.ceil(rmin) - 1
    d = np.arange(-n, n + 1)
    dy, dx = np.meshgrid(d, d, indexing="ij")
    return np.maximum(0.0, rmin - np.sqrt(dx ** 2 + dy ** 2))


def _conv(field: np.ndarray, h: np.ndarray) -> np.ndarray:
    # the stencil is symmetric, so correlation and convolution coincide
    return ndimage.correlate(field, h, mode="constant", cval=0.0)


def make_kernel(rmin: float, nelx: int, nely: int) -> FilterKernel:
    h = cone_stencil(rmin)
    hs = _conv(np.ones((nely, nelx)), h)
    return FilterKernel(rmin=float(rmin), h=h, hs=hs)


def _check_shape(field: np.ndarray, kernel: FilterKernel) -> np.ndarray:
    field = np.asarray(field, dtype=float)
    if field.shape != kernel.shape:
        raise ValueError(f"field shape {field.shape} does not match filter grid {kernel.shape}")
    return field


def apply_density_filter(field: np.ndarray, kernel: FilterKernel) -> np.ndarray:
    """Filtered densities ``conv(rho, h) / hs``."""
    field = _check_shape(field, kernel)
    return _conv(field, kernel.h) / kernel.hs


def backproject_sensitivities(sens: np.ndarray, divisor: np.ndarray, kernel: FilterKernel) -> np.ndarray:
    """Chain rule through the filter: ``conv(sens / divisor, h)``.

    Use ``divisor = kernel.hs``. With projection active, multiply ``sens``
    by ``project_derivative(xtilde)`` first; folding the slope into the
    divisor instead breaks down where it underflows to zero at large beta.
    """
    sens = _check_shape(sens, kernel)
    divisor = _check_shape(divisor, kernel)
    if not np.all(divisor > 0):
        raise ValueError("divisor must be strictly positive")
    return _conv(sens / divisor, kernel.h)


@dataclass(frozen=True)
class ProjectionParams:
    beta: float = 1.0
    betamax: float = 256.0
    eta_proj: float = 0.5
    period: int = 25


def project(xtilde, params: ProjectionParams):
    beta, eta = params.beta, params.eta_proj
    xtilde = np.asarray(xtilde, dtype=float)
    den = math.tanh(beta * eta) + math.tanh(beta * (1.0 - eta))
    return (math.tanh(beta * eta) + np.tanh(beta * (xtilde - eta))) / den


def project_derivative(xtilde, params: ProjectionParams):
    beta, eta = params.beta, params.eta_proj
    xtilde = np.asarray(xtilde, dtype=float)
    den = math.tanh(beta * eta) + math.tanh(beta * (1.0 - eta))
    return beta * (1.0 - np.tanh(beta * (xtilde - eta)) ** 2) / den


def continuation_step(loop: int, params: ProjectionParams) -> ProjectionParams:
    """Double ``beta`` every ``period`` iterations while ``beta <= betamax``.

    The guard is inclusive, so the last doubling can reach ``2 * betamax``.
    """
    if loop < 1:
        raise ValueError("loop counter starts at 1")
    if loop % params.period == 0 and params.beta <= params.betamax:
        return replace(params, beta=2.0 * params.beta)
    return params


def grayness_measure(xphys) -> float:
    """Percentage of intermediate density, ``100 * mean(4 x (1 - x))``."""
    x = np.asarray(xphys, dtype=float)
    return float(100.0 * np.mean(4.0 * x * (1.0 - x)))
