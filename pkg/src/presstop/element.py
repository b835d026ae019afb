"""Element matrices and pointwise material interpolations.

The flow matrices are for bilinear quadrilaterals with unit flow coefficient
(``kp``) and unit drainage parameter (``kdp``). ``te`` maps nodal pressures to
consistent nodal forces of the equivalent body force ``b = -grad p`` through
``F = -T p``. ``ke`` is the plane-stress stiffness of a unit square with unit
Young's modulus.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np


class ElementMatrices(NamedTuple):
    kp: np.ndarray
    kdp: np.ndarray
    te: np.ndarray
    ke: np.ndarray


@dataclass(frozen=True)
class MaterialParams:
    """Material, flow and drainage parameters.

    ``etaf``/``betaf`` set the smooth Heaviside step used by both the flow
    coefficient and the drainage term. Separate drainage values may be given
    through ``etad``/``betad``; when left as ``None`` they follow the flow
    values.
    """

    e1: float = 1.0
    emin: float = 1e-6
    nu: float = 0.30
    penal: float = 3.0
    kv: float = 1.0
    epsf: float = 1e-7
    r: float = 0.1
    dels: float = 2.0
    etaf: float = 0.2
    betaf: float = 8.0
    etad: float | None = None
    betad: float | None = None
    drainage: bool = True

    def __post_init__(self):
        if not self.e1 > self.emin > 0:
            raise ValueError("require e1 > emin > 0")
        if not 0 < self.epsf < 1:
            raise ValueError("flow contrast epsf must lie in (0, 1)")
        if self.kv <= 0:
            raise ValueError("kv must be positive")
        if not 0 < self.r < 1 or self.dels <= 0:
            raise ValueError("need 0 < r < 1 and dels > 0")
        if self.penal < 1:
            raise ValueError("penal must be >= 1")
        for eta, beta in ((self.etaf, self.betaf), (self.eta_drain, self.beta_drain)):
            if not 0 < eta < 1 or beta <= 0:
                raise ValueError("Heaviside parameters need 0 < eta < 1 and beta > 0")

    @property
    def ks(self) -> float:
        return self.kv * self.epsf

    @property
    def ds(self) -> float:
        """Drainage parameter; zero when drainage is switched off."""
        if not self.drainage:
            return 0.0
        return (math.log(self.r) / self.dels) ** 2 * self.ks

    @property
    def kvs(self) -> float:
        return self.kv * (1.0 - self.epsf)

    @property
    def eta_drain(self) -> float:
        return self.etaf if self.etad is None else self.etad

    @property
    def beta_drain(self) -> float:
        return self.betaf if self.betad is None else self.betad

    def flow_coefficient(self, rho):
        return flow_coefficient(rho, self)

    def drainage_coefficient(self, rho):
        return drainage_coefficient(rho, self)

    def simp_modulus(self, rho):
        return simp_modulus(rho, self)


def heaviside(x, eta, beta):
    """Smooth Heaviside step, exactly 0 at ``x = 0`` and 1 at ``x = 1``."""
    x = np.asarray(x, dtype=float)
    den = math.tanh(beta * eta) + math.tanh(beta * (1.0 - eta))
    return (math.tanh(beta * eta) + np.tanh(beta * (x - eta))) / den


def heaviside_derivative(x, eta, beta):
    x = np.asarray(x, dtype=float)
    den = math.tanh(beta * eta) + math.tanh(beta * (1.0 - eta))
    return beta * (1.0 - np.tanh(beta * (x - eta)) ** 2) / den


def flow_coefficient(rho, params: MaterialParams):
    """K(rho) = Kv (1 - (1 - eps) H(rho))."""
    return params.kv * (1.0 - (1.0 - params.epsf) * heaviside(rho, params.etaf, params.betaf))


def flow_coefficient_derivative(rho, params: MaterialParams):
    return -params.kvs * heaviside_derivative(rho, params.etaf, params.betaf)


def drainage_coefficient(rho, params: MaterialParams):
    """D(rho) = Ds H(rho)."""
    return params.ds * heaviside(rho, params.eta_drain, params.beta_drain)


def drainage_coefficient_derivative(rho, params: MaterialParams):
    return params.ds * heaviside_derivative(rho, params.eta_drain, params.beta_drain)


def simp_modulus(rho, params: MaterialParams):
    rho = np.asarray(rho, dtype=float)
    return params.emin + rho ** params.penal * (params.e1 - params.emin)


def simp_modulus_derivative(rho, params: MaterialParams):
    rho = np.asarray(rho, dtype=float)
    return params.penal * rho ** (params.penal - 1.0) * (params.e1 - params.emin)


def rectangular_flow_matrices(dx: float = 1.0, dy: float = 1.0, t: float = 1.0):
    """Closed-form ``(kp, kdp, te)`` for a ``dx`` by ``dy`` rectangle of thickness ``t``."""
    kp1 = 2.0 * (dx ** 2 + dy ** 2)
    kp2 = dx ** 2 - 2.0 * dy ** 2
    kp3 = dy ** 2 - 2.0 * dx ** 2
    kp = t / (6.0 * dx * dy) * np.array([
        [kp1, kp2, -0.5 * kp1, kp3],
        [kp2, kp1, kp3, -0.5 * kp1],
        [-0.5 * kp1, kp3, kp1, kp2],
        [kp3, -0.5 * kp1, kp2, kp1],
    ])
    kdp = t * dx * dy / 36.0 * np.array([
        [4.0, 2.0, 1.0, 2.0],
        [2.0, 4.0, 2.0, 1.0],
        [1.0, 2.0, 4.0, 2.0],
        [2.0, 1.0, 2.0, 4.0],
    ])
    te = t / 12.0 * np.array([
        [-2 * dy, 2 * dy, dy, -dy],
        [-2 * dx, -dx, dx, 2 * dx],
        [-2 * dy, 2 * dy, dy, -dy],
        [-dx, -2 * dx, 2 * dx, dx],
        [-dy, dy, 2 * dy, -2 * dy],
        [-dx, -2 * dx, 2 * dx, dx],
        [-dy, dy, 2 * dy, -2 * dy],
        [-2 * dx, -dx, dx, 2 * dx],
    ])
    return kp, kdp, te


def plane_stress_stiffness(nu: float = 0.3) -> np.ndarray:
    """8x8 stiffness of a unit square, unit modulus, plane stress."""
    a11 = np.array([[12, 3, -6, -3], [3, 12, 3, 0], [-6, 3, 12, -3], [-3, 0, -3, 12]], float)
    a12 = np.array([[-6, -3, 0, 3], [-3, -6, -3, -6], [0, -3, -6, 3], [3, -6, 3, -6]], float)
    b11 = np.array([[-4, 3, -2, 9], [3, -4, -9, 4], [-2, -9, -4, -3], [9, 4, -3, -4]], float)
    b12 = np.array([[2, -3, 4, -9], [-3, 2, 9, -2], [4, 9, 2, 3], [-9, -2, 3, 2]], float)
    a = np.block([[a11, a12], [a12.T, a11]])
    b = np.block([[b11, b12], [b12.T, b11]])
    return (a + nu * b) / (1.0 - nu ** 2) / 24.0


def reference_element_matrices(nu: float = 0.3) -> ElementMatrices:
    """Element matrices of the unit square element used on the structured grid."""
    kp = np.array([[4, -1, -2, -1], [-1, 4, -1, -2], [-2, -1, 4, -1], [-1, -2, -1, 4]]) / 6.0
    kdp = np.array([[4, 2, 1, 2], [2, 4, 2, 1], [1, 2, 4, 2], [2, 1, 2, 4]]) / 36.0
    te = np.array([
        [-2, 2, 1, -1],
        [-2, -1, 1, 2],
        [-2, 2, 1, -1],
        [-1, -2, 2, 1],
        [-1, 1, 2, -2],
        [-1, -2, 2, 1],
        [-1, 1, 2, -2],
        [-2, -1, 1, 2],
    ]) / 12.0
    return ElementMatrices(kp=kp, kdp=kdp, te=te, ke=plane_stress_stiffness(nu))
