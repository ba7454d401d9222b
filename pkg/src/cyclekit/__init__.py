"""cyclekit: exact even-cycle homomorphism counting and structured cycle search.

The library counts homomorphic even cycles exactly, enumerates and bounds the
"conflicting" ones under vertex and edge-pair relations, extracts near-regular
and degree-floored bipartite subgraphs, and searches for rainbow cycles,
rainbow theta graphs, blown-up cycles, and colour-isomorphic disjoint cycle
families.  A FastAPI service (``cyclekit.service.app``) and a thin CLI client
(``cyclekit.cli``) wrap the same operation layer.
"""

__version__ = "0.1.0"

from .graphs import (  # noqa: F401
    BipartitePartition,
    EdgeColouring,
    Graph,
    bipartite_subgraph,
    greedy_proper_colouring,
    load_coloured_graph,
    load_document,
    load_graph,
    random_graph,
    serialize_coloured_graph,
    serialize_graph,
    validate_proper,
)
from .homcount import (  # noqa: F401
    check_bipartite_mindeg,
    check_interpolation,
    check_ratio_monotonicity,
    check_sidorenko,
    hom_cycle,
    hom_cycle_spectral,
    walk_table,
)
from .conflict import (  # noqa: F401
    bound_bipartite,
    bound_simple,
    check_key_lemma,
    dyadic_profile,
    enumerate_bad_cycles,
    equality_relation,
    intersection_relation,
    same_colour_relation,
    verify_sparsity,
)
from .extract import (  # noqa: F401
    almost_regular_subgraph,
    bipartite_step1,
    bipartite_step2,
    blowup_biregular,
)
from .search import (  # noqa: F401
    find_good_2k_cycle,
    find_rainbow_2k_cycle,
    find_rainbow_even_cycle,
    find_rainbow_theta,
    sample_homomorphic_cycle,
)
from .auxgraph import (  # noqa: F401
    build_subset_graph,
    build_tuple_graph,
    count_krr,
    count_mono_matchings,
    find_blowup_cycle,
    find_colour_isomorphic_cycles,
    hypercube_coloured,
)
