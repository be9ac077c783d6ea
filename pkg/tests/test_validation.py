import numpy as np

from bdris_sim import estimation, impairments, validation


def _by_name(results):
    return {r.name: r for r in results}


def test_pristine_checks_pass_fast():
    results = validation.run_all(fast=True)
    failed = [r for r in results if not r.passed]
    assert not failed, [f"{r.name}: {r.detail}" for r in failed]
    assert len(results) == 7


def test_mutated_filter_scale_fails_exactness(monkeypatch):
    # replace the nbar/t filter scale by 1/t: recovery stops being exact
    real = estimation.matched_filter

    def bad_filter(y, d, cfg):
        est = real(y, d, cfg)
        return type(est)(c_hat=est.c_hat / cfg.nbar, m_t=est.m_t, m_r=est.m_r,
                         nbar=est.nbar, n_groups=est.n_groups)

    monkeypatch.setattr(estimation, "matched_filter", bad_filter)
    res = validation.check_exactness(nbars=(4,))
    assert not res.passed


def test_mutated_type1_touching_diagonal_fails_structure(monkeypatch):
    real = impairments.candidate_positions

    def bad_candidates(kind, cfg):
        cands = real(kind, cfg)
        if kind == "type1":
            cands = cands + [(0, 0, 0)]
        return cands

    monkeypatch.setattr(impairments, "candidate_positions", bad_candidates)
    res = validation.check_structure()
    assert not res.passed
    assert "diagonal" in res.detail


def test_check_result_details_are_informative():
    res = validation.check_counting()
    assert res.passed
    assert res.detail
