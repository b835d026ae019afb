import numpy as np
import pytest

from presstop.mesh import build_mesh


def test_counts():
    m = build_mesh(3, 2)
    assert (m.nel, m.nno, m.ndof) == (6, 12, 24)
    assert m.udofs.shape == (6, 8) and m.pdofs.shape == (6, 4)


def test_first_element_numbering():
    # column-major, top-to-bottom: element 0 is the top-left one
    m = build_mesh(3, 2)
    bl, br, tr, tl = m.pdofs[0]
    assert (tl, bl, tr, br) == (0, 1, 3, 4)
    np.testing.assert_array_equal(m.udofs[0], [2, 3, 8, 9, 6, 7, 0, 1])


def test_edges():
    m = build_mesh(3, 2)
    np.testing.assert_array_equal(m.lnode, [0, 1, 2])
    np.testing.assert_array_equal(m.rnode, [9, 10, 11])
    np.testing.assert_array_equal(m.tnode, [0, 3, 6, 9])
    np.testing.assert_array_equal(m.bnode, [2, 5, 8, 11])
    assert m.boundary_nodes().size == 2 * (3 + 2)


def test_local_order_is_counter_clockwise():
    m = build_mesh(4, 3)
    xy = m.node_coordinates()
    for e in range(m.nel):
        c = xy[m.pdofs[e]] - xy[m.pdofs[e, 0]]
        np.testing.assert_array_equal(c, [[0, 0], [1, 0], [1, 1], [0, 1]])


def test_grid_roundtrip():
    m = build_mesh(5, 3)
    v = np.arange(m.nel, dtype=float)
    g = m.to_grid(v)
    assert g.shape == (3, 5)
    assert g[1, 2] == m.elem_grid[1, 2]
    np.testing.assert_array_equal(m.from_grid(g), v)


def test_shared_nodes_between_neighbours():
    m = build_mesh(2, 2)
    right = m.elem_grid[0, 1]
    left = m.elem_grid[0, 0]
    # right edge of the left element is the left edge of the right element
    assert m.pdofs[left, 1] == m.pdofs[right, 0]
    assert m.pdofs[left, 2] == m.pdofs[right, 3]


@pytest.mark.parametrize("nelx,nely", [(0, 3), (2, -1), (2.5, 2)])
def test_invalid_dims(nelx, nely):
    with pytest.raises(ValueError):
        build_mesh(nelx, nely)
