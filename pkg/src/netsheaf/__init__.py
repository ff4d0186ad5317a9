"""Sheaf cohomology, torsors and paradox classification on oriented multigraphs."""

from .cohomology import (
    NetworkSheaf,
    abelian_cohomology,
    boundary_obstruction,
    boundary_trivialized_sheaf,
    coboundary,
    cohomologous,
    constant_sheaf,
    enumerate_h1_classes,
    general_sheaf,
    holonomy,
    is_coboundary,
    tree_relative_invariant,
    twist,
)
from .errors import BoundExceeded, TrivialClassError, Undecided
from .graph import Multigraph, Walk, build_graph, cycle_graph, path_graph, rose_graph, spanning_tree, star_graph
from .groups import (
    Cyclic,
    DirectProduct,
    FiniteTable,
    FreeAbelian,
    Homomorphism,
    InfiniteDihedral,
    ScaleLattice,
    cube_rotation_group,
    group_from_descriptor,
    symmetric_group,
)
from .intlinalg import smith_normal_form, solve_integer_linear
from .kernels import BACKEND
from .paradox import (
    GraphMap,
    Paradox,
    ParadoxMorphism,
    are_isomorphic,
    check_morphism,
    classify_tree_boundary,
    fiber_equivalent,
    pullback_cocycle,
    search_fiber_equivalence,
    validate_presentation_rep,
)
from .torsor import Torsor, global_sections, torsor_from_cocycle, torsors_isomorphic, transport

__all__ = [name for name in dir() if not name.startswith("_")]
