"""Exact computations with quiver representations, n-representations,
their limits and colimits, and coalgebra objects."""

from .errors import QuivrepError
from .exactlin import QQ, Field, Matrix
from .quiver import Arrow, Quiver, build_quiver, enumerate_paths, path_algebra, path_count_matrix
from .rep import (
    RepMorphism,
    Representation,
    check_morphism,
    direct_sum,
    fitting_split,
    hom_space,
    tensor,
    unit_rep,
    validate_rep,
)
from .nrep import (
    NRepMorphism,
    NRepresentation,
    check_nrep_morphism,
    nrep_direct_sum,
    nrep_hom_space,
    nrep_tensor,
    nrep_unit,
    validate_nrep,
)
from .nquiver import NQuiver, block_structure, build_nquiver, decompose, glue
from .limits import Diagram, colimit, limit, make_diagram
from .coalg import CoalgebraObject, check_coalgebra, unit_coalgebra
from .dsl import Workspace, parse, parse_string

__version__ = "0.1.0"
