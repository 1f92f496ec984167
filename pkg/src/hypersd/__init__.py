"""Subdivision of hypergraphs and homology invariance, with exact arithmetic."""

from .chains import (
    ChainComplex,
    EmbeddedComplex,
    GradedMap,
    HomologyGroup,
    check_homotopy,
    embedded_complex,
    embedded_homology,
    homology,
    induced_map_on_homology,
    infimum_complex,
    simplicial_chain_complex,
)
from .hypergraph import (
    Hypergraph,
    SimplicialComplex,
    VertexMap,
    VertexTable,
    apply_morphism,
    is_simplicial_complex,
    random_hypergraph,
    simplicial_closure,
)
from .invariance import homotopy_h, pi, rho, verify_invariance
from .linalg import GF, QQ, ZZ, CoefficientRing
from .poset import GradedPoset, MarkedGradedPoset, face_poset, marked_face_poset, order_complex
from .subdivision import (
    SubdivisionResult,
    flag_oracle,
    initial_elements,
    iterate_subdivision,
    membership,
    subdivide,
    subdivide_morphism,
)

__version__ = "0.1.0"
