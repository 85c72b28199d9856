from __future__ import annotations

from fractions import Fraction
from math import lcm

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from designcoded.binmat import cover_bibd, man_matrix
from designcoded.designs import construct_projective_bibd
from designcoded.mapreduce import (ComputingConfig, ComputingError, IvaStore, balance_load,
                                   coded_round, computing_params, make_files, man_params, oracle,
                                   qys_load, run_full_straggler, run_mapreduce,
                                   run_partial_straggler, straggler_map_count, worst_case)


def _fano_cfg(beta=2, T=64, Q=None):
    m, c = cover_bibd(construct_projective_bibd(2))
    return ComputingConfig(m, c, beta=beta, T=T, Q=Q)


def _man_cfg(K, r, beta=1, Q=None):
    m, c = man_matrix(K, r)
    return ComputingConfig(m, c, beta=beta, Q=Q)


def test_fano_run_matches_oracle():
    cfg = _fano_cfg()
    files = make_files(cfg.F, 16, seed=3)
    res = run_mapreduce(cfg, files)
    truth = oracle(IvaStore(cfg, files))
    assert res.report.correct
    assert [res.outputs[q] for q in range(cfg.Q)] == truth
    assert res.report.load == Fraction(2, 7)
    # node k reduces functions k and k+7
    assert all(res.reducer[q] == q % 7 for q in range(14))


def test_worked_round_identity(fano):
    m, c = cover_bibd(fano)
    # the identity of point 2 touches rows 7, 3, 5 as in the worked shuffle round
    pairs = sorted((m.row_labels[u], m.col_labels[f]) for u, f in c.identities[1].pairs)
    assert pairs == [("3", "2.3.4"), ("5", "2.5.6"), ("7", "1.2.7")]
    cfg = ComputingConfig(m, c, beta=2)
    res = run_mapreduce(cfg, make_files(7, 8))
    first = [t for t in res.log if t.identity == 1]
    assert [(m.row_labels[t.node], t.kind, t.bits) for t in first] == [
        ("3", "coded", 128), ("5", "uncoded", 128)]


@pytest.mark.parametrize("K,r,load", [(5, 2, Fraction(2, 5)), (7, 4, Fraction(6, 35)),
                                      (10, 3, Fraction(7, 20)), (4, 1, Fraction(3, 4))])
def test_man_loads(K, r, load):
    cfg = _man_cfg(K, r)
    res = run_mapreduce(cfg, make_files(cfg.F, 8))
    assert res.report.correct and res.report.load == load == man_params(K, r).load


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 2**20), st.sampled_from([8, 24, 64, 200]))
def test_fano_random_files_and_widths(seed, T):
    cfg = _fano_cfg(beta=1, T=T)
    res = run_mapreduce(cfg, make_files(cfg.F, 5, seed=seed))
    assert res.report.correct and res.report.load == Fraction(2, 7)


def test_iva_store_deterministic():
    cfg = _fano_cfg(T=200)
    files = make_files(cfg.F, 4)
    a, b = IvaStore(cfg, files), IvaStore(cfg, files)
    assert a.value(3, 2) == b.value(3, 2) and len(a.value(3, 2)) == 25
    assert a.value(3, 2) != a.value(4, 2)
    with pytest.raises(ComputingError):
        IvaStore(cfg, files[:-1])


def test_config_validation():
    m, c = cover_bibd(construct_projective_bibd(2))
    with pytest.raises(ComputingError):
        ComputingConfig(m, c, beta=0)
    with pytest.raises(ComputingError):
        ComputingConfig(m, c, T=12)


def test_coded_round_rejects_bad_transmitters():
    cfg = _fano_cfg()
    rows = cfg.cover.identities[0].rows
    with pytest.raises(ComputingError):
        coded_round(cfg, 0, rows[0], rows[0], {}, None)
    outsider = next(k for k in range(7) if k not in rows)
    with pytest.raises(ComputingError):
        coded_round(cfg, 0, outsider, rows[0], {}, None)


def test_full_straggler_man52():
    cfg = _man_cfg(5, 2, Q=20)
    res = run_full_straggler(cfg, make_files(cfg.F, 8), [2])
    assert res.report.correct and res.report.load == Fraction(1, 2)
    assert res.report.kappa == 4 and 2 not in res.reducer.values()


@pytest.mark.parametrize("K,r,kappa,load", [(7, 4, 6, Fraction(1, 5)), (7, 4, 5, Fraction(6, 25)),
                                            (10, 3, 9, Fraction(7, 18)),
                                            (10, 3, 8, Fraction(7, 16))])
def test_full_straggler_loads(K, r, kappa, load):
    cfg = _man_cfg(K, r, Q=lcm(K, kappa))
    res = run_full_straggler(cfg, make_files(cfg.F, 4), range(K - kappa))
    assert res.report.correct and res.report.load == load == man_params(K, r).straggler_load(kappa)


def test_too_many_stragglers():
    cfg = _man_cfg(5, 2, Q=60)
    with pytest.raises(ComputingError):
        run_full_straggler(cfg, make_files(cfg.F, 4), [0, 1])
    with pytest.raises(ComputingError):
        run_full_straggler(cfg, make_files(cfg.F, 4), [9])


def test_full_straggler_needs_divisible_q():
    cfg = _man_cfg(5, 2)
    with pytest.raises(ComputingError):
        run_full_straggler(cfg, make_files(cfg.F, 4), [0])


def test_worst_case_exhaustive():
    cfg = _fano_cfg(beta=6)  # Q = 42 divisible by 7 and 6
    wc = worst_case(cfg, make_files(cfg.F, 4), 1)
    assert wc.exhaustive and wc.subsets == 7 and wc.ok
    assert wc.max_load == Fraction(1, 3)


def test_partial_straggler_fano():
    cfg = _fano_cfg()
    files = make_files(cfg.F, 8)
    res = run_partial_straggler(cfg, files, [0])
    assert res.report.correct and res.report.load == Fraction(2, 7)
    assert len(set(res.reducer.values())) == 7
    assert res.report.map_counts[0] == straggler_map_count(cfg, 0) == 20
    assert all(res.report.map_counts[k] == 14 * 4 for k in range(1, 7))
    assert all(t.node != 0 for t in res.log)


def test_partial_worst_case_man():
    cfg = _man_cfg(7, 4)
    wc = worst_case(cfg, make_files(cfg.F, 4), 2, mode="partial")
    assert wc.ok and wc.exhaustive and wc.max_load == Fraction(6, 35)


@pytest.mark.parametrize("which,gamma", [("fano", 1), ("man52", 2)])
def test_balance_load(which, gamma):
    cfg = _fano_cfg() if which == "fano" else _man_cfg(5, 2, beta=2)
    pairs = balance_load(cfg)
    assert len(pairs) == cfg.cover.S
    coded = [p for p, _ in pairs]
    uncoded = [u for _, u in pairs]
    assert all(coded.count(k) == gamma and uncoded.count(k) == gamma for k in range(cfg.K))
    res = run_mapreduce(cfg, make_files(cfg.F, 8), assignment=pairs)
    beta = cfg.Q // cfg.K
    assert res.report.correct
    assert set(res.report.per_node_bits.values()) == {2 * gamma * beta * cfg.T}


def test_balance_needs_integral_gamma():
    cfg = _man_cfg(4, 1)  # S = 6 identities for K = 4 nodes
    with pytest.raises(ComputingError):
        balance_load(cfg)


def test_qys_values():
    assert qys_load(5, 2, 5) == Fraction(3, 10)
    assert qys_load(5, 2, 4) == Fraction(9, 20)
    assert round(float(qys_load(7, 4, 7)), 3) == 0.107
    with pytest.raises(ComputingError):
        qys_load(5, 2, 3)


def test_computing_params_match_built_scheme():
    cp = computing_params("bibd", v=7, k=3)
    cfg = _fano_cfg()
    assert (cp.K, cp.F, cp.r, cp.S) == (cfg.K, cfg.F, cfg.r, cfg.cover.S)
    assert cp.load == Fraction(2, 7) and cp.straggler_load(6) == Fraction(1, 3)


def test_csv_and_shuffle_log():
    cfg = _fano_cfg()
    res = run_mapreduce(cfg, make_files(cfg.F, 4))
    assert res.report.csv_header() == "K,F,r,g,Q,beta,T,mode,kappa,bits,load"
    assert res.report.csv_row().endswith(",2/7")
    lines = res.shuffle_log(cfg.matrix.row_labels).splitlines()
    assert len(lines) == 14 and lines[0].startswith("ROUND 0 ")
