"""Cyclic codes from finite projective and Euclidean geometries over GF(2^h),
their certified parameters, and the quantum synchronizable codes they yield."""

from .algebra import BitPoly, GF2m, InvariantViolation, field, poly_order
from .codes import CyclicCode, DistanceReport, bch_bound, contains_word, is_dual_containing, is_subcode, min_distance
from .geomcodes import CodeParams, IndexSet, code_params, eg_params, generator_poly, hamada_dimension, pg_params
from .geometry import Family, build_model, enumerate_flats
from .qsync import QsyncParams, QsyncSpec, build_qsync, qsync_row

__version__ = "0.1.0"

__all__ = [
    "BitPoly",
    "CodeParams",
    "CyclicCode",
    "DistanceReport",
    "Family",
    "GF2m",
    "IndexSet",
    "InvariantViolation",
    "QsyncParams",
    "QsyncSpec",
    "bch_bound",
    "build_model",
    "build_qsync",
    "code_params",
    "contains_word",
    "eg_params",
    "enumerate_flats",
    "field",
    "generator_poly",
    "hamada_dimension",
    "is_dual_containing",
    "is_subcode",
    "min_distance",
    "pg_params",
    "poly_order",
    "qsync_row",
]
