"""Separation certificates for finitely generated subgroups of a free
product of a free group and a finite group.

The library builds the subgroup's folded based graph, decides membership,
extracts the free-product decomposition of the subgroup, and constructs a
prime-degree cover whose vertex action is a surjection onto an alternating
or symmetric group moving every requested outside element off the base
point.  The ``altsep`` command line drives the full pipeline and emits a
JSON certificate plus optional DOT renderings of each stage.
"""

from .words import Letter, Word, x_letter, y_letter, word_str
from .graphs import (
    LabeledGraph,
    TraceResult,
    SaturationDefect,
    build_graph,
    fold,
    trace,
    amalgamate,
    components,
    saturation_defects,
)
from .factors import (
    FiniteGroupTable,
    NotGBasedError,
    enumerate_group,
    subgroup_closure,
    coset_graph,
    embed_Y_component,
    complete_X_cover,
)
from .subgroups import (
    FreeFactor,
    ProblemSpec,
    SubgroupGraph,
    HypothesisVerdict,
    build_subgroup_graph,
    membership,
    hypothesis_check,
)
from .kurosh import KuroshDecomposition, kurosh_decompose, project_loop, verify_intersection
from .covers import (
    Cover,
    CoverPlan,
    GadgetParams,
    SeparatingCover,
    chain_gadget,
    mover_gadget,
    choose_prime,
    build_separating_cover,
    permutation_rep,
)
from .cli import parse_problem, run_separate, export_dot

__all__ = [name for name in dir() if not name.startswith("_")]
