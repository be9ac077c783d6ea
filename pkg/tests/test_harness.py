import numpy as np
import pytest

from bdris_sim import estimation
from bdris_sim.harness import (
    CSV_FIELDS,
    PRESETS,
    SweepPlan,
    TrialError,
    preset_plan,
    run_sweep,
    run_trial,
    trial_diagnostics,
    write_csv,
)
from bdris_sim.impairments import ImpairmentSpec
from bdris_sim.system import SystemConfig


def small_plan(**overrides):
    base = SystemConfig.create(2, 4, 8, 2, master_seed=5)
    params = dict(base=base, nbars=(2,), kinds=("type1",), snrs_db=(10.0,),
                  fractions=(0.2,), trials=3)
    params.update(overrides)
    return SweepPlan(**params)


# --------------------------------------------------------------- run_trial

def test_trial_deterministic(design_for):
    cfg, design = design_for(2, master_seed=5)
    spec = ImpairmentSpec("type3", 0.3)
    a = run_trial(cfg, design, spec, 10.0, 7)
    b = run_trial(cfg, design, spec, 10.0, 7)
    assert a == b


def test_trial_ideal_noiseless(design_for):
    cfg, design = design_for(4)
    res = run_trial(cfg, design, ImpairmentSpec("ideal"), estimation.NOISELESS, 0)
    assert res.nmse < 1e-20
    assert res.sigma2 == 0.0
    assert res.affected_count == 0


def test_trial_type1_nbar1_equals_ideal(design_for):
    cfg, design = design_for(1, master_seed=3)
    for k in range(4):
        impaired = run_trial(cfg, design, ImpairmentSpec("type1", 0.2), 10.0, k)
        ideal = run_trial(cfg, design, ImpairmentSpec("ideal"), 10.0, k)
        assert impaired.nmse == ideal.nmse  # bitwise, shared streams


def test_trial_decouple_scores(design_for):
    cfg, design = design_for(2)
    res = run_trial(cfg, design, ImpairmentSpec("ideal"), estimation.NOISELESS,
                    0, decouple=True)
    assert len(res.decoupled_h_nmse) == cfg.q
    assert max(res.decoupled_h_nmse) < 1e-8
    assert max(res.decoupled_g_nmse) < 1e-8


def test_trial_error_carries_context(design_for):
    cfg, design = design_for(2)
    with pytest.raises(TrialError, match="trial 3 .*kind=type2"):
        run_trial(cfg, design, ImpairmentSpec("type2", 0.2), float("nan"), 3)


def test_trial_diagnostics_payload(design_for):
    cfg, design = design_for(2, master_seed=5)
    diag = trial_diagnostics(cfg, design, ImpairmentSpec("type2", 0.5), 10.0,
                             0, include_affected=True)
    assert diag["shapes"]["h"] == [2, 32]
    assert diag["shapes"]["omega"] == [cfg.t, cfg.t]
    assert diag["sigma2"] > 0.0
    assert len(diag["affected"]) == diag["affected_count"] == 16
    assert diag["nmse"] == run_trial(cfg, design, ImpairmentSpec("type2", 0.5),
                                     10.0, 0).nmse


# ---------------------------------------------------------------- run_sweep

def test_single_point_single_trial():
    records = run_sweep(small_plan(trials=1))
    assert len(records) == 1
    assert records[0].nmse_std == 0.0
    assert records[0].trials == 1


def test_sweep_record_fields():
    rec = run_sweep(small_plan(trials=2))[0]
    assert rec.impairment_type == "type1"
    assert (rec.nbar, rec.q, rec.n, rec.m_t, rec.m_r) == (2, 4, 8, 2, 4)
    assert rec.t_pilots == 2 * 4 * 4
    assert rec.max_affected == 4
    assert rec.affected_count == 1  # round(0.2 * 4)
    assert rec.noise_mode == "snr-normalized"
    assert rec.master_seed == 5


def test_sweep_point_count_and_order():
    plan = small_plan(kinds=("type2", "ideal"), snrs_db=(10.0, 0.0),
                      fractions=(0.2, 0.0), trials=1)
    records = run_sweep(plan)
    assert len(records) == 8
    keys = [(r.impairment_type, r.nbar, r.snr_db, r.fraction) for r in records]
    assert keys == sorted(keys)


def test_fraction_zero_matches_ideal():
    plan = small_plan(kinds=("ideal", "type3"), fractions=(0.0,), trials=5)
    ideal, type3 = run_sweep(plan)
    assert ideal.impairment_type == "ideal"
    assert abs(ideal.nmse_mean - type3.nmse_mean) < 1e-15


def test_total_trials_accounting():
    plan = small_plan(kinds=("type1", "type2"), snrs_db=(0.0, 10.0, 20.0),
                      fractions=(0.1, 0.2), trials=4)
    assert plan.total_trials() == 2 * 1 * 3 * 2 * 4
    records = run_sweep(plan)
    assert sum(r.trials for r in records) == plan.total_trials()


def test_parallel_matches_sequential():
    plan = small_plan(trials=6, kinds=("type1", "ideal"))
    assert run_sweep(plan, workers=1) == run_sweep(plan, workers=2)


def test_plan_validation_messages():
    base = SystemConfig.create(2, 4, 8, 2)
    with pytest.raises(ValueError, match="divide"):
        SweepPlan(base=base, nbars=(3,), kinds=("ideal",), snrs_db=(0.0,),
                  fractions=(0.0,), trials=1)
    with pytest.raises(ValueError, match="kind"):
        SweepPlan(base=base, nbars=(2,), kinds=("typeX",), snrs_db=(0.0,),
                  fractions=(0.0,), trials=1)
    with pytest.raises(ValueError):
        SweepPlan(base=base, nbars=(2,), kinds=("ideal",), snrs_db=(0.0,),
                  fractions=(1.5,), trials=1)


# -------------------------------------------------------------------- CSV

def test_csv_single_record(tmp_path):
    records = run_sweep(small_plan(trials=1))
    path = tmp_path / "one.csv"
    write_csv(records, path)
    lines = path.read_text(encoding="utf-8").splitlines()
    assert len(lines) == 2
    assert lines[0] == ",".join(CSV_FIELDS)


def test_csv_round_trip_exact(tmp_path):
    records = run_sweep(small_plan(trials=3, snrs_db=(10.0, 20.0)))
    path = tmp_path / "sweep.csv"
    write_csv(records, path)
    header, *rows = path.read_text().splitlines()
    cols = header.split(",")
    for rec, row in zip(records, rows):
        cells = dict(zip(cols, row.split(",")))
        assert float(cells["nmse_mean"]) == rec.nmse_mean
        assert float(cells["nmse_std"]) == rec.nmse_std
        assert int(cells["t_pilots"]) == rec.t_pilots


def test_csv_rewrite_bytewise_identical(tmp_path):
    plan = small_plan(trials=2)
    p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
    write_csv(run_sweep(plan), p1)
    write_csv(run_sweep(plan), p2)
    assert p1.read_bytes() == p2.read_bytes()


def test_csv_empty_records_error(tmp_path):
    with pytest.raises(ValueError):
        write_csv([], tmp_path / "empty.csv")


def test_csv_io_error_names_path():
    records = run_sweep(small_plan(trials=1))
    with pytest.raises(OSError, match="no/such/dir"):
        write_csv(records, "/no/such/dir/out.csv")


# ----------------------------------------------------------------- presets

def test_preset_names():
    assert sorted(PRESETS) == ["fig3", "fig4", "fig5", "fig6", "fig7"]


def test_preset_fig7_plan_shape():
    plan = preset_plan("fig7", trials=1)
    assert plan.kinds == ("type1", "type2", "type3")
    assert plan.nbars == (4,)
    assert plan.snrs_db == (10.0,)
    assert len(plan.fractions) == 11
    assert plan.fractions[0] == 0.0 and plan.fractions[-1] == 0.5
    records = run_sweep(plan)
    assert len(records) == 33


def test_preset_fig3_axes():
    plan = preset_plan("fig3")
    assert plan.kinds == ("type1",)
    assert plan.nbars == (1, 2, 4, 8, 32)
    assert plan.snrs_db[0] == -10.0 and plan.snrs_db[-1] == 30.0
    assert len(plan.snrs_db) == 21
    assert plan.trials == 100


def test_preset_unknown_name():
    with pytest.raises(ValueError, match="preset"):
        preset_plan("fig9")
