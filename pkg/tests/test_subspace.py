from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from designcoded.gf import field_of_order
from designcoded.subspace import (SubspaceDesign, canonical, enumerate_subspaces, gauss_binom,
                                  subspace_design_from_text, subspace_design_to_text,
                                  subspace_sum, subspaces_within, trivial_subspace_design,
                                  verify_subspace_design)


def test_gauss_binom_values():
    assert gauss_binom(3, 1, 2) == 7
    assert gauss_binom(4, 2, 2) == 35
    assert gauss_binom(3, 2, 5) == 31
    assert gauss_binom(5, 0, 3) == 1
    with pytest.raises(ValueError):
        gauss_binom(2, 3, 2)


@pytest.mark.parametrize("q", [2, 3])
@pytest.mark.parametrize("v", [1, 2, 3, 4])
def test_enumeration_counts(q, v):
    f = field_of_order(q)
    for k in range(v + 1):
        subs = enumerate_subspaces(f, v, k)
        assert len(subs) == gauss_binom(v, k, q)
        assert len(set(subs)) == len(subs)
        assert all(s.dim == k for s in subs)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([2, 3, 4, 5]), st.integers(2, 4), st.data())
def test_canonical_form_is_basis_independent(q, v, data):
    f = field_of_order(q)
    rows = [[data.draw(st.integers(0, q - 1)) for _ in range(v)] for _ in range(3)]
    a = canonical(f, rows, v)
    # adding one row into another does not change the span
    mixed = [list(r) for r in rows]
    c = data.draw(st.integers(1, q - 1))
    mixed[0] = [f.add(x, f.mul(c, y)) for x, y in zip(mixed[0], mixed[1])]
    assert canonical(f, mixed, v) == a
    assert canonical(f, list(reversed(rows)), v) == a
    assert a.dim <= 3 and len(a.vectors()) == q ** a.dim


def test_containment_and_sum():
    f = field_of_order(2)
    lines = enumerate_subspaces(f, 3, 1)
    s = subspace_sum(lines[0], lines[1])
    assert s.dim == 2
    assert s.contains(lines[0]) and s.contains(lines[1])
    assert len(subspaces_within(s, 1)) == 3


@pytest.mark.parametrize("q,v,k", [(2, 3, 2), (2, 4, 2), (3, 3, 2), (2, 4, 3)])
def test_trivial_designs_verify(q, v, k):
    sd = trivial_subspace_design(field_of_order(q), v, k)
    assert sd.b == gauss_binom(v, k, q)
    assert verify_subspace_design(sd).ok


def test_deleted_block_detected():
    sd = trivial_subspace_design(field_of_order(2), 3, 2)
    broken = SubspaceDesign(sd.field, sd.v, sd.t, sd.k, sd.lam, sd.blocks[1:])
    rep = verify_subspace_design(broken)
    assert not rep.ok and rep.counts.get(0) == 1


def test_text_round_trip():
    sd = trivial_subspace_design(field_of_order(3), 3, 2)
    text = subspace_design_to_text(sd)
    back = subspace_design_from_text(text)
    assert back.blocks == sd.blocks and (back.v, back.t, back.k, back.lam) == (3, 2, 2, 1)
    assert subspace_design_to_text(back) == text
