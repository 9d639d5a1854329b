"""One-dimensional partitions of [0, 1]."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Sequence

import numpy as np

__all__ = [
    "Mesh1D",
    "uniform_mesh",
    "perturbed_mesh",
    "subdivision_points",
    "splitmix64",
]

_MASK64 = (1 << 64) - 1


def splitmix64(state: int) -> int:
    """One splitmix64 output for the given 64-bit state.

    Used as a stateless hash so that node offsets depend only on
    ``(seed, index)`` and are identical on every platform.
    """
    z = (state + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def _unit_offset(seed: int, index: int) -> float:
    # 53 high bits -> [0, 1), then mapped to [-1, 1)
    h = splitmix64((seed * 0x100000001B3 + index) & _MASK64)
    return 2.0 * ((h >> 11) / float(1 << 53)) - 1.0


@dataclass(frozen=True, eq=False)
class Mesh1D:
    """Strictly increasing nodes ``0 = x_0 < ... < x_{N+1} = 1``.

    Widths are derived from the nodes on demand, so the cells always
    tile [0, 1] exactly.
    """

    nodes: np.ndarray

    def __post_init__(self) -> None:
        nodes = np.array(self.nodes, dtype=float)
        if nodes.ndim != 1 or nodes.size < 2:
            raise ValueError("a mesh needs at least two nodes")
        if nodes[0] != 0.0 or nodes[-1] != 1.0:
            raise ValueError("mesh nodes must start at 0 and end at 1")
        if not np.all(np.diff(nodes) > 0.0):
            raise ValueError("mesh nodes must be strictly increasing")
        nodes.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Mesh1D):
            return NotImplemented
        return np.array_equal(self.nodes, other.nodes)

    def __hash__(self) -> int:
        return hash(self.nodes.tobytes())

    @property
    def num_cells(self) -> int:
        return self.nodes.size - 1

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.nodes)

    @property
    def h(self) -> float:
        """Mesh size, the largest cell width."""
        return float(self.widths.max())

    def cell(self, i: int) -> tuple[float, float]:
        if not 0 <= i < self.num_cells:
            raise IndexError(f"cell {i} out of range for {self.num_cells} cells")
        return float(self.nodes[i]), float(self.nodes[i + 1])

    def locate(self, x: float) -> int:
        """Index of the cell containing ``x``; nodes belong to the left cell."""
        i = int(np.searchsorted(self.nodes, x, side="left")) - 1
        return min(max(i, 0), self.num_cells - 1)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["node"])
        for x in self.nodes:
            writer.writerow([repr(float(x))])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "Mesh1D":
        rows = list(csv.reader(io.StringIO(text)))
        if not rows or rows[0] != ["node"]:
            raise ValueError("mesh CSV must start with a 'node' header")
        return cls(np.array([float(r[0]) for r in rows[1:] if r]))


def _check_count(num_cells: int) -> None:
    if int(num_cells) != num_cells or num_cells < 1:
        raise ValueError(f"num_cells must be a positive integer, got {num_cells!r}")


def uniform_mesh(num_cells: int) -> Mesh1D:
    _check_count(num_cells)
    nodes = np.arange(num_cells + 1, dtype=float) / num_cells
    nodes[-1] = 1.0
    return Mesh1D(nodes)


def perturbed_mesh(num_cells: int, amplitude: float, seed: int) -> Mesh1D:
    """Uniform mesh with interior nodes shifted by up to ``amplitude / num_cells``.

    The shift of node ``i`` is ``amplitude * r_i / num_cells`` with ``r_i`` in
    [-1, 1) taken from :func:`splitmix64` of ``seed * 0x100000001B3 + i``.
    Amplitudes below one half keep the nodes ordered.
    """
    _check_count(num_cells)
    if not 0.0 <= amplitude < 0.5:
        raise ValueError(f"amplitude must lie in [0, 0.5), got {amplitude!r}")
    base = uniform_mesh(num_cells).nodes.copy()
    if amplitude == 0.0:
        return Mesh1D(base)
    step = 1.0 / num_cells
    for i in range(1, num_cells):
        base[i] += amplitude * step * _unit_offset(seed, i)
    return Mesh1D(base)


def subdivision_points(mesh: Mesh1D, cell: int, n: int) -> np.ndarray:
    """The ``n + 1`` equally spaced points ``x_i + k h_i / n`` of one cell."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n!r}")
    a, b = mesh.cell(cell)
    h = b - a
    pts = a + np.arange(n + 1, dtype=float) * (h / n)
    pts[-1] = b
    return pts


def mesh_from_nodes(nodes: Sequence[float]) -> Mesh1D:
    return Mesh1D(np.asarray(nodes, dtype=float))
