from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from designcoded.binmat import Cover, cover_bibd, cover_transversal, man_matrix
from designcoded.caching import (CachingError, FileLibrary, deliver, man_baseline, place,
                                 scheme_params, sec_baseline, transmission_log)
from designcoded.designs import construct_projective_bibd, construct_transversal


def test_fano_placement(fano):
    m, c = cover_bibd(fano)
    lib = FileLibrary.random(7, 7, subfile_size=4, seed=1)
    caches = place(m, lib)
    # each user stores 4 of 7 subfiles of every file
    assert all(len(cache) == 4 * 7 for cache in caches)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(0, 6), min_size=7, max_size=7), st.integers(0, 2**16))
def test_fano_delivery_decodes(demands, seed):
    m, c = cover_bibd(construct_projective_bibd(2))
    lib = FileLibrary.random(7, 7, subfile_size=8, seed=seed)
    tx, rep = deliver(m, c, lib, demands)
    assert rep.ok and len(tx) == 7
    assert (rep.uncached, rep.R) == (Fraction(3, 7), Fraction(1))
    assert rep.bits == 7 * 8 * 8


def test_transversal_delivery():
    m, c = cover_transversal(construct_transversal(4, 3))
    lib = FileLibrary.random(9, m.F, subfile_size=4, seed=2)
    rng = random.Random(0)
    for _ in range(10):
        _, rep = deliver(m, c, lib, [rng.randrange(9) for _ in range(m.K)])
        assert rep.ok and rep.R == 1


def test_man_delivery():
    m, c = man_matrix(5, 2)
    lib = FileLibrary.random(3, m.F, subfile_size=4)
    _, rep = deliver(m, c, lib, [0, 1, 2, 0, 1])
    assert rep.ok and rep.R == Fraction(c.S, m.F)


def test_broken_cover_leaves_user_undecoded(fano):
    m, c = cover_bibd(fano)
    lib = FileLibrary.random(7, 7, subfile_size=4)
    short = Cover.of([idm.pairs for idm in c.identities[1:]])
    _, rep = deliver(m, short, lib, list(range(7)), check_cover=False)
    assert not rep.ok
    with pytest.raises(CachingError):
        deliver(m, short, lib, list(range(7)))


def test_input_validation(fano):
    m, c = cover_bibd(fano)
    lib = FileLibrary.random(2, 7, subfile_size=4)
    with pytest.raises(CachingError):
        deliver(m, c, lib, [0] * 6)
    with pytest.raises(CachingError):
        deliver(m, c, lib, [0] * 6 + [5])
    with pytest.raises(CachingError):
        FileLibrary([b"abc", b"abcd"], 1)
    with pytest.raises(CachingError):
        FileLibrary([b"abcde"], 2)


def test_transmission_log_format():
    assert transmission_log([b"\x01\xff", b"\x00\x10"]) == "TX 0 01ff\nTX 1 0010\n"


@pytest.mark.parametrize("family,kw,expect", [
    ("bibd", dict(v=7, k=3), (7, 7, 3, 7)),
    ("bibd", dict(v=25, k=5), (25, 30, 6, 25)),
    ("tdesign", dict(t=3, v=10, k=4), (45, 120, 8, 30)),
    ("transversal", dict(k=5, n=5), (25, 25, 5, 25)),
    ("subspace", dict(q=2, t=2, v=3, k=2), (7, 21, 6, 14)),
])
def test_scheme_params(family, kw, expect):
    sp = scheme_params(family, **kw)
    assert (sp.K, sp.F, sp.Z, sp.S) == expect


def test_scheme_params_rejects_impossible():
    with pytest.raises(CachingError):
        scheme_params("bibd", v=8, k=3)
    with pytest.raises(CachingError):
        scheme_params("tdesign", t=3, v=8)
    with pytest.raises(CachingError):
        scheme_params("nope")


def test_transversal_rate_one():
    for q in (2, 3, 4, 5, 7, 8, 9):
        assert scheme_params("transversal", k=q, n=q).R == 1


def test_baselines():
    b = man_baseline(7, Fraction(3, 7))
    assert (b.R, b.F, b.integral) == (Fraction(3, 5), 35, True)
    assert not man_baseline(7, Fraction(2, 7) + Fraction(1, 100)).integral
    s = sec_baseline(8, 4, 3, 3)
    assert (s.K, s.F, s.R) == (70, 56, Fraction(1, 7))
    with pytest.raises(CachingError):
        man_baseline(5, Fraction(3, 2))
    with pytest.raises(CachingError):
        sec_baseline(3, 4, 1, 0)
