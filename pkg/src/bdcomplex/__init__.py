"""Bounded degree complexes of graphs: construction, homotopy types, and an
exact homology oracle."""

from .caterpillar import (
    SpineSubset,
    caterpillar_closed_form,
    cycle_reduce,
    cycle_reduction_edge_map,
    spine_subsets,
    star_profile,
)
from .complexes import (
    DEFAULT_FACE_CAP,
    GrapeWitness,
    SimplicialComplex,
    build_complex,
    deletion,
    grape_witness,
    link,
    reduced_euler,
)
from .graph import (
    CaterpillarSpec,
    Graph,
    GraphComponent,
    canonical_code,
    components,
    disjoint_union,
    gen_caterpillar,
    gen_cycle,
    gen_path,
    is_forest,
    make_graph,
    nonisomorphic_forests,
    nonisomorphic_trees,
    random_forest,
    random_tree,
    validate_bounds,
)
from .homology import (
    HomologyProfile,
    IntegerMatrix,
    boundary_matrix,
    reduced_homology,
    smith_normal_form,
    wedge_profile,
)
from .recursion import (
    counts_add,
    counts_normalize,
    counts_shift,
    decrement_bounds,
    join_convolve,
    pick_recursion_edge,
    simplify,
    sphere_counts,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
