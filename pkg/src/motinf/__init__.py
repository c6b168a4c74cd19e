"""Exact calculator for motivic homotopy at infinity.

Grothendieck-Witt arithmetic, quadratic Mumford matrices of plumbing graphs,
their homology motives at infinity, hyperplane arrangement decompositions and
ordered Cech complexes, all in exact integer and rational arithmetic.
"""

__version__ = "0.1.0"

from .arrangement import (
    Arrangement,
    Hyperplane,
    StratumTable,
    compact_support_type,
    coordinate_arrangement,
    homotopy_type,
    homotopy_type_at_infinity,
    normal_crossing_homotopy_type,
    normal_crossing_type_at_infinity,
    stratum_table,
)
from .complexes import (
    Generator,
    Stratum,
    TateComplex,
    complex_homology,
    euler_characteristics,
    homology_euler_characteristics,
    ordered_cech_complex,
    total_motive,
)
from .errors import (
    MissingFaceData,
    MotinfError,
    NonPermutationArtinDifferential,
    NonRationalPoint,
    OddDegree,
    OddSelfIntersection,
    ParseError,
    TooManyHyperplanes,
    ValidationError,
    WrongField,
)
from .expr import matrix_from_record, parse_gw
from .gw import (
    EtaleAlgebra,
    Field,
    GwElement,
    SquareClass,
    euler_class_P1_bundle,
    hyperbolic,
    n_epsilon,
    quadratic_intersection_degree,
    square_class,
    trace_form_class,
)
from .gw_matrix import DiagonalizationResult, ElementaryOp, GwMatrix, gw_diagonalize
from .motives import ArtinTateMotive, TateSummand, motive_parse, motive_pretty_print, motive_serialize
from .plumbing import (
    Edge,
    InfinityHomology,
    IntersectionPoint,
    PlumbingGraph,
    Vertex,
    danielewski_graph,
    homology_at_infinity,
    incidence_matrix,
    mumford_matrix,
    three_lines_graph,
)
from .snf import SnfResult, cokernel, smith_normal_form

__all__ = [name for name in dir() if not name.startswith("_")]
