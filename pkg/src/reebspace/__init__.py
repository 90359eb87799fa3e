"""Reeb spaces of bivariate piecewise-linear maps on tetrahedral meshes."""

from .errors import ReebSpaceError
from .mesh import TetMesh, load_mesh, read_mesh, write_mesh
from .oracle import compare, full_arrange_and_traverse
from .pipeline import RunConfig, compute, prepare, run, singular_reeb_space
from .reeb import ReebSpaceResult, Sheet, serialize

__all__ = [
    "ReebSpaceError",
    "ReebSpaceResult",
    "RunConfig",
    "Sheet",
    "TetMesh",
    "compare",
    "compute",
    "full_arrange_and_traverse",
    "load_mesh",
    "prepare",
    "read_mesh",
    "run",
    "serialize",
    "singular_reeb_space",
    "write_mesh",
]
