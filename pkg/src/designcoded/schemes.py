"""Named scheme families: design construction, cover and closed-form parameters."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple, Union

from .binmat import (BinaryMatrix, Cover, cover_bibd, cover_subspace, cover_tdesign,
                     cover_transversal, man_matrix)
from .caching import SchemeParams, scheme_params
from .designs import (Design, DesignError, construct_affine_bibd, construct_projective_bibd,
                      construct_steiner3, construct_transversal)
from .gf import field_of_order
from .subspace import SubspaceDesign, trivial_subspace_design

FAMILY_CHOICES = ("bibd-pg", "bibd-ag", "td", "steiner3", "subspace", "man")

AnyDesign = Union[Design, SubspaceDesign]


@dataclass
class Scheme:
    family: str
    design: Optional[AnyDesign]
    matrix: BinaryMatrix
    cover: Cover


def _need(family: str, **vals) -> None:
    missing = [f"--{name}" for name, val in vals.items() if val is None]
    if missing:
        raise DesignError(f"family {family} needs {' '.join(missing)}")


def build_design(family: str, *, n=None, q=None, v=None, k=None, t=None) -> AnyDesign:
    if family == "bibd-pg":
        _need(family, n=n)
        return construct_projective_bibd(n)
    if family == "bibd-ag":
        _need(family, n=n)
        return construct_affine_bibd(n)
    if family == "td":
        _need(family, n=n)
        return construct_transversal(n if k is None else k, n)
    if family == "steiner3":
        _need(family, q=q)
        return construct_steiner3(q)
    if family == "subspace":
        _need(family, q=q, v=v, k=k)
        if t is not None and t != k:
            raise DesignError("only complete subspace designs (t = k) are constructed; "
                              "pass other designs with --design")
        return trivial_subspace_design(field_of_order(q), v, k)
    raise DesignError(f"unknown family {family!r}")


def cover_design(design: AnyDesign) -> Tuple[BinaryMatrix, Cover]:
    """Pick the cover construction matching the design's kind."""
    if isinstance(design, SubspaceDesign):
        return cover_subspace(design)
    if design.groups is not None:
        return cover_transversal(design)
    if design.t == 2:
        return cover_bibd(design)
    return cover_tdesign(design)


def build_scheme(family: str, *, n=None, q=None, v=None, k=None, t=None, K=None,
                 r=None) -> Scheme:
    if family == "man":
        _need(family, K=K, r=r)
        m, c = man_matrix(K, r)
        return Scheme(family, None, m, c)
    d = build_design(family, n=n, q=q, v=v, k=k, t=t)
    m, c = cover_design(d)
    return Scheme(family, d, m, c)


def design_scheme_params(design: AnyDesign) -> SchemeParams:
    """Closed-form parameters matching what cover_design builds for ``design``."""
    if isinstance(design, SubspaceDesign):
        return scheme_params("subspace", q=design.q, t=design.t, v=design.v, k=design.k)
    if design.groups is not None:
        return scheme_params("transversal", k=design.k, n=design.v // design.k)
    if design.t == 2:
        return scheme_params("bibd", v=design.v, k=design.k)
    return scheme_params("tdesign", t=design.t, v=design.v, k=design.k)
