from __future__ import annotations

import io

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import A, B, V1, V2, V3, V4, V5
from helpers import random_grid, random_sphere
from reebspace.errors import InvalidMesh, ParseError, UnknownSimplex
from reebspace.generate import grid_mesh
from reebspace.mesh import TetMesh, dump_mesh, edge_degree, edge_link, load_mesh, load_vtk_legacy, read_mesh

SINGLE = """tbf 1
vertices 4
# x y z f1 f2
0 0 0 0 0
1 0 0 1 0
0 1 0 0 1
0 0 1 0.25 0.3
tets 1
0 1 2 3
"""


def test_single_tet_counts():
    mesh = load_mesh(SINGLE)
    assert (mesh.num_vertices, mesh.num_edges, mesh.num_triangles, mesh.num_tets) == (4, 6, 4, 1)
    assert all(edge_degree(mesh, e) == 2 for e in range(6))
    assert edge_link(mesh, mesh.edge_id(0, 1)).vertices == (2, 3)
    assert edge_link(mesh, mesh.edge_id(0, 1)).edges == ((2, 3),)


def test_load_from_stream():
    assert load_mesh(io.StringIO(SINGLE)).num_tets == 1


def test_two_tets_sharing_a_triangle():
    mesh = TetMesh([(0, 0, 0)] * 5, [(0, 0), (1, 0), (0, 1), (3, 3), (-2, 5)], [(0, 1, 2, 3), (0, 1, 2, 4)])
    assert edge_degree(mesh, mesh.edge_id(0, 1)) == 3
    # boundary edge: link is an arc, not a cycle
    link = edge_link(mesh, mesh.edge_id(0, 1))
    assert link.vertices == (2, 3, 4)
    assert set(link.edges) == {(2, 3), (2, 4)}
    assert not mesh.is_closed


def test_toy_fan_link(t7):
    link = edge_link(t7, t7.edge_id(A, B))
    assert link.vertices == (V1, V2, V3, V4, V5)
    assert link.edges == ((V1, V2), (V2, V3), (V3, V4), (V4, V5))
    assert (t7.num_triangles, t7.num_edges) == (13, 15)


@pytest.mark.parametrize(
    "text",
    [
        SINGLE.replace("vertices 4", "vertices 5"),
        SINGLE.replace("tbf 1", "tbf 2"),
        SINGLE.replace("0 1 2 3\n", "0 1 2\n"),
        SINGLE.replace("0.25 0.3", "0.25 x"),
        SINGLE + "0 1 2 3\n",
        "tbf 1\nvertices 4\n0 0 0 0 0\n1 0 0 1 0\n0 1 0 0 1\ntets 1\n0 1 2 3\n",
    ],
)
def test_parse_errors(text):
    with pytest.raises(ParseError):
        load_mesh(text)


@pytest.mark.parametrize(
    "tets",
    [[(0, 1, 2, 7)], [(0, 1, 2, 2)], [(0, 1, 2, 3), (3, 2, 1, 0)], []],
)
def test_invalid_meshes(tets):
    with pytest.raises(InvalidMesh):
        TetMesh([(0, 0, 0)] * 4, [(0, 0), (1, 0), (0, 1), (1, 1)], tets)


def test_triangle_in_three_tets_rejected():
    values = [(i, i * i) for i in range(6)]
    with pytest.raises(InvalidMesh):
        TetMesh([(0, 0, 0)] * 6, values, [(0, 1, 2, 3), (0, 1, 2, 4), (0, 1, 2, 5)])


def test_unknown_edge(t7):
    with pytest.raises(UnknownSimplex):
        t7.edge_id(V1, V3)
    with pytest.raises(UnknownSimplex):
        edge_link(t7, 99)


@given(st.integers(0, 10_000))
def test_degree_sum_and_link_symmetry(seed):
    mesh = random_grid(seed) if seed % 2 else random_sphere(seed)
    assert sum(edge_degree(mesh, e) for e in range(mesh.num_edges)) == 3 * mesh.num_triangles
    for e, (a, b) in enumerate(mesh.edges):
        for v in edge_link(mesh, e).vertices:
            assert tuple(sorted((a, b, v))) in mesh.tri_index
        assert a < b


def test_sphere_is_closed():
    assert random_sphere(1).is_closed


def test_tbf_round_trip_is_exact(tmp_path):
    mesh = random_grid(11)
    text = dump_mesh(mesh)
    again = load_mesh(text)
    assert again.values == mesh.values
    assert again.tets == mesh.tets and again.edges == mesh.edges and again.triangles == mesh.triangles
    assert dump_mesh(again) == text
    path = tmp_path / "m.tbf"
    path.write_text(text)
    assert read_mesh(path).values == mesh.values


def test_index_does_not_depend_on_tet_order():
    mesh = grid_mesh(3)
    shuffled = TetMesh(mesh.coords, mesh.values, list(reversed(mesh.tets)))
    assert shuffled.triangles == mesh.triangles and shuffled.edges == mesh.edges


def test_legacy_vtk_import(tmp_path):
    text = """# vtk DataFile Version 3.0
two tets
ASCII
DATASET UNSTRUCTURED_GRID
POINTS 5 float
0 0 0 1 0 0 0 1 0 0 0 1 1 1 1
CELLS 2 10
4 0 1 2 3
4 1 2 3 4
CELL_TYPES 2
10 10
POINT_DATA 5
SCALARS u float 1
LOOKUP_TABLE default
0 1 0 0.5 2
SCALARS v float
LOOKUP_TABLE default
0 0 1 0.25 3
"""
    path = tmp_path / "m.vtk"
    path.write_text(text)
    mesh = read_mesh(path)
    assert mesh.num_tets == 2 and mesh.num_vertices == 5
    assert [float(v) for v, _ in mesh.values] == [0, 1, 0, 0.5, 2]
    with pytest.raises(ParseError):
        load_vtk_legacy("# vtk DataFile Version 3.0\nx\nBINARY\n")
