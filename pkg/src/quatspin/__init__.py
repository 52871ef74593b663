"""Spinor images of skew-hermitian lattices over the 2-adic quaternion division algebra."""

from .images import SpinorImage, image_contains
from .quatalg import DEFAULT_PARAMS, AlgebraParams, Quat, parse_quat
from .search import KStarInstance, decide_H_binary, kstar_check, search_witness
from .spinor_table import LatticeDescriptor, classify, spinor_image
from .witnesses import verify_witness_tables

__all__ = [
    "AlgebraParams", "DEFAULT_PARAMS", "KStarInstance", "LatticeDescriptor", "Quat",
    "SpinorImage", "classify", "decide_H_binary", "image_contains", "kstar_check",
    "parse_quat", "search_witness", "spinor_image", "verify_witness_tables",
]

__version__ = "0.1.0"
