import numpy as np
import pytest

from presstop.element import MaterialParams, reference_element_matrices, simp_modulus
from presstop.errors import SolverError
from presstop.mesh import build_mesh
from presstop.structure import (
    StructuralBC,
    assemble_stiffness,
    assemble_transformation,
    compliance,
    net_force,
    pressure_forces,
    solve_displacement,
)

from conftest import dense_scatter


def test_stiffness_matches_dense_oracle(rng):
    ke = reference_element_matrices().ke
    for nelx, nely in [(1, 1), (3, 2), (4, 4)]:
        mesh = build_mesh(nelx, nely)
        e = simp_modulus(rng.random(mesh.nel), MaterialParams())
        dense = dense_scatter(mesh.udofs, [v * ke for v in e], mesh.ndof)
        np.testing.assert_allclose(assemble_stiffness(mesh, e).toarray(), dense, atol=1e-14, rtol=0)


def test_transformation_matches_dense_oracle():
    te = reference_element_matrices().te
    mesh = build_mesh(3, 2)
    dense = np.zeros((mesh.ndof, mesh.nno))
    for e in range(mesh.nel):
        for a, i in enumerate(mesh.udofs[e]):
            for b, j in enumerate(mesh.pdofs[e]):
                dense[i, j] += te[a, b]
    np.testing.assert_allclose(assemble_transformation(mesh).toarray(), dense, atol=1e-15)


def test_uniform_pressure_gives_no_net_force():
    mesh = build_mesh(4, 3)
    f = pressure_forces(assemble_transformation(mesh), np.full(mesh.nno, 2.5))
    np.testing.assert_allclose(f, 0, atol=1e-14)


def test_pressure_gradient_force_direction():
    # pressure decreasing upwards pushes the body up with force Pin * width
    mesh = build_mesh(5, 4)
    y = mesh.node_coordinates()[:, 1]
    p = 1.0 - y / 4.0
    fx, fy = net_force(pressure_forces(assemble_transformation(mesh), p))
    assert fx == pytest.approx(0.0, abs=1e-13)
    assert fy == pytest.approx(5.0, rel=1e-14)


def test_cantilever_solution_and_compliance():
    mesh = build_mesh(8, 4)
    k = assemble_stiffness(mesh, np.ones(mesh.nel))
    bc = StructuralBC(mesh.ndof, np.concatenate([2 * mesh.lnode, 2 * mesh.lnode + 1]))
    f = np.zeros(mesh.ndof)
    f[2 * mesh.rnode[-1] + 1] = -1.0
    u = solve_displacement(k, f, bc)
    np.testing.assert_allclose(u[bc.fixed_udofs], 0)
    np.testing.assert_allclose((k @ u)[bc.free_udofs], f[bc.free_udofs], atol=1e-10)
    assert compliance(u, k) == pytest.approx(float(f @ u), rel=1e-12)
    assert u[2 * mesh.rnode[-1] + 1] < 0


def test_rigid_modes_detected():
    mesh = build_mesh(2, 2)
    k = assemble_stiffness(mesh, np.ones(mesh.nel))
    bc = StructuralBC(mesh.ndof, np.array([0, 1]))     # rotation left free
    with pytest.raises(SolverError):
        solve_displacement(k, np.zeros(mesh.ndof), bc)


def test_bc_range():
    with pytest.raises(ValueError):
        StructuralBC(10, np.array([10]))
