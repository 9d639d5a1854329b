import numpy as np
import pytest
from hypothesis import given, strategies as st

from p1bounds.mesh import Mesh1D, perturbed_mesh, splitmix64, subdivision_points, uniform_mesh


def test_uniform_single_cell():
    m = uniform_mesh(1)
    assert list(m.nodes) == [0.0, 1.0]
    assert m.h == 1.0


def test_uniform_four():
    m = uniform_mesh(4)
    assert list(m.nodes) == [0.0, 0.25, 0.5, 0.75, 1.0]
    assert m.h == 0.25


def test_uniform_ten_partition_of_unity():
    m = uniform_mesh(10)
    assert m.h == pytest.approx(0.1, rel=1e-15)
    assert abs(m.widths.sum() - 1.0) < 1e-12


@pytest.mark.parametrize("bad", [0, -3])
def test_uniform_rejects_nonpositive(bad):
    with pytest.raises(ValueError):
        uniform_mesh(bad)


def test_perturbed_zero_amplitude_is_uniform():
    assert perturbed_mesh(4, 0.0, 7) == uniform_mesh(4)


def test_perturbed_deterministic():
    a = perturbed_mesh(8, 0.3, 1)
    b = perturbed_mesh(8, 0.3, 1)
    assert a.nodes.tobytes() == b.nodes.tobytes()
    assert perturbed_mesh(8, 0.3, 2) != a


def test_perturbed_max_width():
    m = perturbed_mesh(8, 0.3, 1)
    assert m.h <= (1 + 2 * 0.3) / 8
    assert m.h > 1 / 8  # actually perturbed


def test_perturbed_rejects_large_amplitude():
    with pytest.raises(ValueError):
        perturbed_mesh(8, 0.5, 1)


def test_splitmix_reference_value():
    # first output of the reference splitmix64 generator seeded with 0
    assert splitmix64(0) == 0xE220A8397B1DCDAF


@given(st.integers(1, 300), st.floats(0.0, 0.49), st.integers(0, 2 ** 32))
def test_perturbed_invariants(cells, amp, seed):
    m = perturbed_mesh(cells, amp, seed)
    assert m.nodes[0] == 0.0 and m.nodes[-1] == 1.0
    assert np.all(m.widths > 0)
    assert abs(m.widths.sum() - 1.0) < 1e-12
    assert m.h == m.widths.max()
    assert m.h <= (1 + 2 * amp) / cells * (1 + 1e-12)


def test_mesh_validation():
    with pytest.raises(ValueError):
        Mesh1D(np.array([0.0, 0.6, 0.5, 1.0]))
    with pytest.raises(ValueError):
        Mesh1D(np.array([0.1, 1.0]))
    with pytest.raises(ValueError):
        Mesh1D(np.array([0.0, 0.5, 0.5, 1.0]))


def test_nodes_immutable():
    m = uniform_mesh(3)
    with pytest.raises(ValueError):
        m.nodes[1] = 0.2


def test_subdivision_midpoint():
    assert list(subdivision_points(uniform_mesh(1), 0, 2)) == [0.0, 0.5, 1.0]


def test_subdivision_cell_one():
    pts = subdivision_points(uniform_mesh(4), 1, 4)
    assert list(pts) == [0.25, 0.3125, 0.375, 0.4375, 0.5]


def test_subdivision_n1_endpoints():
    m = perturbed_mesh(5, 0.2, 3)
    for i in range(m.num_cells):
        assert tuple(subdivision_points(m, i, 1)) == m.cell(i)


def test_subdivision_out_of_range():
    with pytest.raises(IndexError):
        subdivision_points(uniform_mesh(4), 4, 2)


@given(st.integers(1, 64), st.integers(1, 50), st.data())
def test_subdivision_spacing_constant(cells, n, data):
    m = perturbed_mesh(cells, 0.3, 11)
    i = data.draw(st.integers(0, cells - 1))
    pts = subdivision_points(m, i, n)
    h = m.widths[i]
    assert pts[0] == m.nodes[i] and pts[-1] == m.nodes[i + 1]
    # spacing is h/n up to rounding of the absolute positions
    assert np.allclose(np.diff(pts), h / n, rtol=0, atol=4 * np.finfo(float).eps)


def test_csv_roundtrip():
    m = perturbed_mesh(7, 0.4, 5)
    text = m.to_csv()
    assert text.splitlines()[0] == "node"
    assert len(text.splitlines()) == 9
    assert Mesh1D.from_csv(text) == m
