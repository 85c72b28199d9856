"""Coded caching and coded MapReduce schemes built from combinatorial and subspace designs.

The pipeline is design -> binary matrix -> non-overlapping identity cover ->
scheme.  ``designs`` and ``subspace`` construct and verify designs,
``binmat`` turns them into matrices with covers, and ``caching`` and
``mapreduce`` execute the resulting delivery and shuffle schemes.
"""

from __future__ import annotations

__version__ = "0.1.0"

from ._accel import BACKEND
from .binmat import (BinaryMatrix, Cover, IdentitySubmatrix, cover_bibd, cover_subspace,
                     cover_tdesign, cover_transversal, man_matrix, verify_cover)
from .caching import FileLibrary, deliver, man_baseline, place, scheme_params, sec_baseline
from .designs import (Design, DesignParams, construct_affine_bibd, construct_projective_bibd,
                      construct_steiner3, construct_transversal, verify_design)
from .gf import FieldTable, field_of_order
from .mapreduce import (ComputingConfig, balance_load, computing_params, qys_load,
                        run_full_straggler, run_mapreduce, run_partial_straggler)
from .subspace import (SubspaceDesign, enumerate_subspaces, gauss_binom, trivial_subspace_design,
                       verify_subspace_design)

__all__ = [
    "BACKEND", "BinaryMatrix", "ComputingConfig", "Cover", "Design", "DesignParams",
    "FieldTable", "FileLibrary", "IdentitySubmatrix", "SubspaceDesign", "balance_load",
    "computing_params", "construct_affine_bibd", "construct_projective_bibd",
    "construct_steiner3", "construct_transversal", "cover_bibd", "cover_subspace",
    "cover_tdesign", "cover_transversal", "deliver", "enumerate_subspaces", "field_of_order",
    "gauss_binom", "man_baseline", "man_matrix", "place", "qys_load", "run_full_straggler",
    "run_mapreduce", "run_partial_straggler", "scheme_params", "sec_baseline",
    "trivial_subspace_design", "verify_cover", "verify_design", "verify_subspace_design",
]
