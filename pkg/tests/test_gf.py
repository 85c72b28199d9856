from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from designcoded.gf import FieldError, field_of_order, is_prime_power, prime_power

ORDERS = [2, 3, 4, 5, 7, 8, 9, 11, 16, 25, 27]


@pytest.mark.parametrize("q", [1, 6, 10, 12, 15, 0, -4])
def test_non_prime_powers_rejected(q):
    assert not is_prime_power(q)
    with pytest.raises(FieldError):
        field_of_order(q)


@pytest.mark.parametrize("q,pm", [(2, (2, 1)), (8, (2, 3)), (9, (3, 2)), (49, (7, 2))])
def test_prime_power_split(q, pm):
    assert prime_power(q) == pm


@pytest.mark.parametrize("q", ORDERS)
def test_field_axioms(q):
    f = field_of_order(q)
    els = list(f.elements())
    assert els == list(range(q))
    for a in els:
        assert f.add(a, 0) == a and f.mul(a, 1) == a
        assert f.add(a, f.neg(a)) == 0
        if a:
            assert f.mul(a, f.inv(a)) == 1
    # the multiplicative group is cyclic of order q-1
    assert sorted(f.pow(f.exp_table[1], e) for e in range(q - 1)) == els[1:]


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(ORDERS), st.data())
def test_distributive_and_associative(q, data):
    f = field_of_order(q)
    a, b, c = (data.draw(st.integers(0, q - 1)) for _ in range(3))
    assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))
    assert f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
    assert f.add(f.add(a, b), c) == f.add(a, f.add(b, c))
    assert f.sub(f.add(a, b), b) == a
    if b:
        assert f.mul(f.div(a, b), b) == a


def test_division_by_zero():
    with pytest.raises((FieldError, ZeroDivisionError)):
        field_of_order(4).inv(0)


@pytest.mark.parametrize("q,sub", [(4, 2), (16, 4), (9, 3), (27, 3)])
def test_subfield_is_closed(q, sub):
    f = field_of_order(q)
    s = f.subfield(sub)
    assert len(s) == sub and 0 in s and 1 in s
    for a in s:
        for b in s:
            assert f.add(a, b) in s and f.mul(a, b) in s
