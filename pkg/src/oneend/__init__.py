"""Whitehead graphs, Stallings covers and one-ended subgroups of graphs of free groups.

The package is organized around the pipeline that produces finitely
generated one-ended subgroups of infinite index in graphs of free groups
with cyclic edge groups:

- ``words``: free-group word arithmetic and peripheral structures;
- ``stallings``: core graphs, finite covers, Hall completion, normal
  cores, clean subgroups, elevations and pullbacks;
- ``whitehead``: Whitehead graphs, moves, minimization, cut analysis,
  splicing, surface recognition and the rigid-vertex local check;
- ``gog``: graphs of free groups with cyclic edge groups, doubles,
  presentations and the one-endedness test;
- ``covers``: pre-covers, gluing, cover extension, certificates and the
  one-ended subgroup construction;
- ``order``: the commensurability preorder on marked subgroups and the
  descent step towards surface pieces.
"""

from .errors import CapExceeded, SearchExhausted
from .words import (
    Basis,
    ConjClassRep,
    PeripheralStructure,
    WordError,
    canonical_class,
    cyclic_reduce,
    make_peripheral_structure,
    reduce_word,
    root,
)
from .stallings import (
    INFINITE,
    CoreGraph,
    CoverGraph,
    Elevation,
    clean_subgroup,
    elevations,
    from_generators,
    hall_complete,
    intersect,
    is_clean,
    normal_core,
    pullback_structure,
    rose,
)
from .whitehead import (
    ConnectivityReport,
    Multigraph,
    PairClassification,
    SurfaceData,
    WhiteheadGraph,
    WhiteheadMove,
    apply_move,
    classify_pair,
    connectivity_report,
    is_freely_indecomposable,
    local_theorem_check,
    minimize,
    splice,
    spliced_pullback_graph,
    surface_recognize,
    whitehead_graph,
)
from .gog import GraphOfGroups, Presentation, collapse_reduce, double, is_one_ended, is_reduced, presentation, validate, vertex_peripheral_structure
from .covers import (
    BuildResult,
    Certificate,
    GogCover,
    PreCover,
    build_one_ended_subgroup,
    elevation_table,
    extend_to_cover,
    glue,
    infinite_index_certificate,
    one_ended_certificate,
    pi1_precover,
    verify_certificate,
)
from .order import MarkedSubgroup, DescendResult, compare, descend, in_poset, is_compatible

__version__ = "0.1.0"
