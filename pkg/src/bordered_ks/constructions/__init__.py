"""Builders for the named algebras, bimodules and morphisms."""

from .algebras import (
    OSzAlgebras,
    build_b_algebra,
    build_cl_algebra,
    build_ks_algebra,
    build_osz_algebras,
    build_phi,
    u_element,
    u_sum,
)
from .crossing import build_crossing, build_induced_crossing, collapse_crossing
from .ks import build_R, build_rest_R

__all__ = [
    "OSzAlgebras",
    "build_R",
    "build_b_algebra",
    "build_cl_algebra",
    "build_crossing",
    "build_induced_crossing",
    "build_ks_algebra",
    "build_osz_algebras",
    "build_phi",
    "build_rest_R",
    "collapse_crossing",
    "u_element",
    "u_sum",
]
