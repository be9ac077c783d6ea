"""Seeded Monte Carlo sweeps over SNR, impairment kind, fraction, and group
size, with deterministic parallelism and CSV output.

Every trial draws its channel, impairment, and noise from streams keyed by
(master_seed, trial_index, purpose), so a sweep's output is bytewise
reproducible for any worker count; points at the same trial index share
channel and noise draws, which makes curves directly comparable across
kinds, fractions, and SNR.
"""

from concurrent import futures
from dataclasses import dataclass
from itertools import product

import numpy as np

from . import estimation, impairments, system, training
from .impairments import ImpairmentSpec
from .system import SystemConfig


class TrialError(RuntimeError):
    """Pipeline failure with the trial context attached."""


@dataclass(frozen=True)
class TrialResult:
    nmse: float
    error_energy: float
    sigma2: float
    affected_count: int
    decoupled_h_nmse: tuple[float, ...] | None = None
    decoupled_g_nmse: tuple[float, ...] | None = None


def _pipeline(cfg, design, spec, snr_db, trial_index):
    rng_channel = system.trial_stream(cfg.master_seed, trial_index, "channel")
    rng_impair = system.trial_stream(cfg.master_seed, trial_index, "impairment")
    rng_noise = system.trial_stream(cfg.master_seed, trial_index, "noise")

    ch = system.generate_channels(cfg, rng_channel)
    err = impairments.sample_impairment(spec, cfg, rng_impair)
    s_bar = impairments.apply_impairment(design, err)
    y = estimation.synthesize_rx(
        ch, s_bar, design.x_pilots, snr_db, cfg.noise_mode, rng_noise
    )
    c = system.combined_channel(ch, cfg)
    est = estimation.matched_filter(y, design, cfg)
    return ch, err, y, c, est


def run_trial(cfg: SystemConfig, design: training.TrainingDesign,
              spec: ImpairmentSpec, snr_db: float, trial_index: int,
              decouple: bool = False) -> TrialResult:
    """One seeded realization: draw channel/impairment/noise, synthesize,
    filter, score."""
    try:
        ch, err, y, c, est = _pipeline(cfg, design, spec, snr_db, trial_index)
        value = estimation.nmse(c, est)
        energy = float(np.sum(np.abs(est.c_hat - c.c) ** 2))

        dec_h = dec_g = None
        if decouple:
            h_scores, g_scores = [], []
            for q in range(cfg.q):
                dec = estimation.decouple_channels(est.segment(q), cfg)
                h_scores.append(
                    estimation.scale_aligned_nmse(ch.h_block(q), dec.h_hat)
                )
                g_scores.append(
                    estimation.scale_aligned_nmse(ch.g_block(q), dec.g_hat)
                )
            dec_h, dec_g = tuple(h_scores), tuple(g_scores)
        return TrialResult(
            nmse=value,
            error_energy=energy,
            sigma2=y.sigma2,
            affected_count=err.affected_count,
            decoupled_h_nmse=dec_h,
            decoupled_g_nmse=dec_g,
        )
    except Exception as exc:
        raise TrialError(
            f"trial {trial_index} (kind={spec.kind}, nbar={cfg.nbar}, "
            f"snr_db={snr_db}, fraction={spec.fraction}): {exc}"
        ) from exc


def trial_diagnostics(cfg: SystemConfig, design: training.TrainingDesign,
                      spec: ImpairmentSpec, snr_db: float, trial_index: int,
                      include_affected: bool = False) -> dict:
    """JSON-friendly snapshot of one trial (shapes, sigma2, NMSE, and
    optionally the affected impedance positions)."""
    ch, err, y, c, est = _pipeline(cfg, design, spec, snr_db, trial_index)
    out = {
        "trial_index": trial_index,
        "kind": spec.kind,
        "fraction": spec.fraction,
        "snr_db": snr_db,
        "noise_mode": cfg.noise_mode,
        "shapes": {
            "h": list(ch.h.shape),
            "g": list(ch.g.shape),
            "x_pilots": list(design.x_pilots.shape),
            "s_prime": list(design.s_prime.shape),
            "omega": list(design.omega.shape),
            "y": [y.y.size],
            "c": [c.c.size],
        },
        "sigma2": y.sigma2,
        "affected_count": err.affected_count,
        "nmse": estimation.nmse(c, est),
    }
    if include_affected:
        out["affected"] = [
            {"q": q, "i": i, "j": j, "alpha": alpha, "phi": phi}
            for (_, _, q, i, j, alpha, phi)
            in impairments.affected_rows(err, trial_index)
        ]
    return out


def run_point(cfg: SystemConfig, design: training.TrainingDesign,
              spec: ImpairmentSpec, snr_db: float, trials: int) -> np.ndarray:
    """NMSE of trials 0..trials-1 at one sweep point, in trial order."""
    return np.array([
        run_trial(cfg, design, spec, snr_db, k).nmse for k in range(trials)
    ])


@dataclass(frozen=True)
class SweepPlan:
    """Cartesian sweep: kinds x nbars x snrs x fractions, trials each.

    base supplies the antenna/element counts, noise mode, and master seed;
    its own nbar is replaced point by point.
    """

    base: SystemConfig
    nbars: tuple[int, ...]
    kinds: tuple[str, ...]
    snrs_db: tuple[float, ...]
    fractions: tuple[float, ...]
    trials: int
    amp_min: float = 0.0

    def __post_init__(self):
        for nbar in self.nbars:
            if nbar < 1 or self.base.n % nbar != 0:
                raise ValueError(
                    f"nbar={nbar} does not divide n={self.base.n}; pick group "
                    f"sizes from the divisors of n"
                )
        for kind in self.kinds:
            if kind not in impairments.KINDS:
                raise ValueError(f"unknown impairment kind {kind!r}")
        for f in self.fractions:
            if not 0.0 <= f <= 1.0:
                raise ValueError(f"fraction {f} outside [0, 1]")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")

    def points(self) -> list[tuple[str, int, float, float]]:
        """(kind, nbar, snr_db, fraction) tuples in record order."""
        pts = product(self.kinds, self.nbars, self.snrs_db, self.fractions)
        return sorted(pts)

    def total_trials(self) -> int:
        return (len(self.kinds) * len(self.nbars) * len(self.snrs_db)
                * len(self.fractions) * self.trials)


@dataclass(frozen=True)
class SweepRecord:
    impairment_type: str
    nbar: int
    q: int
    n: int
    m_t: int
    m_r: int
    t_pilots: int
    snr_db: float
    fraction: float
    max_affected: int
    affected_count: int
    trials: int
    nmse_mean: float
    nmse_median: float
    nmse_std: float
    noise_mode: str
    master_seed: int


CSV_FIELDS = [
    "impairment_type", "nbar", "q", "n", "m_t", "m_r", "t_pilots", "snr_db",
    "fraction", "max_affected", "affected_count", "trials", "nmse_mean",
    "nmse_median", "nmse_std", "noise_mode", "master_seed",
]


def _make_record(cfg: SystemConfig, kind: str, snr_db: float,
                 fraction: float, values: np.ndarray) -> SweepRecord:
    cap = impairments.max_affected(kind, cfg)
    return SweepRecord(
        impairment_type=kind,
        nbar=cfg.nbar,
        q=cfg.q,
        n=cfg.n,
        m_t=cfg.m_t,
        m_r=cfg.m_r,
        t_pilots=cfg.t,
        snr_db=float(snr_db),
        fraction=float(fraction),
        max_affected=cap,
        affected_count=impairments.round_half_away(fraction * cap),
        trials=len(values),
        nmse_mean=float(np.mean(values)),
        nmse_median=float(np.median(values)),
        nmse_std=float(np.std(values)),
        noise_mode=cfg.noise_mode,
        master_seed=cfg.master_seed,
    )


# Per-process cache: workers rebuild each training design at most once.
_DESIGN_CACHE: dict[SystemConfig, training.TrainingDesign] = {}


def _design_for(cfg: SystemConfig) -> training.TrainingDesign:
    design = _DESIGN_CACHE.get(cfg)
    if design is None:
        design = training.build_training(cfg)
        _DESIGN_CACHE[cfg] = design
    return design


def _run_task(task) -> float:
    cfg, kind, fraction, amp_min, snr_db, trial_index = task
    spec = ImpairmentSpec(kind=kind, fraction=fraction, amp_min=amp_min)
    design = _design_for(cfg)
    return run_trial(cfg, design, spec, snr_db, trial_index).nmse


def run_sweep(plan: SweepPlan, workers: int = 1) -> list[SweepRecord]:
    """Run every point of the plan and aggregate trial NMSEs in ascending
    trial order; the output is identical for any worker count."""
    points = plan.points()
    cfgs = {nbar: plan.base.with_nbar(nbar) for nbar in plan.nbars}
    tasks = [
        (cfgs[nbar], kind, fraction, plan.amp_min, snr_db, k)
        for (kind, nbar, snr_db, fraction) in points
        for k in range(plan.trials)
    ]

    if workers <= 1:
        values = [_run_task(t) for t in tasks]
    else:
        chunk = max(1, len(tasks) // (workers * 8))
        with futures.ProcessPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(_run_task, tasks, chunksize=chunk))

    records = []
    for i, (kind, nbar, snr_db, fraction) in enumerate(points):
        chunk_vals = np.array(values[i * plan.trials : (i + 1) * plan.trials])
        records.append(
            _make_record(cfgs[nbar], kind, snr_db, fraction, chunk_vals)
        )
    return records


def _format_cell(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(records: list[SweepRecord], path) -> None:
    """UTF-8 CSV, one record per line, floats in shortest round-trip form."""
    if not records:
        raise ValueError("no records to write")
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(",".join(CSV_FIELDS) + "\n")
            for rec in records:
                cells = [_format_cell(getattr(rec, f)) for f in CSV_FIELDS]
                fh.write(",".join(cells) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write sweep CSV to {path}: {exc}") from exc


def _snr_axis(start: float, step: float, stop: float) -> tuple[float, ...]:
    count = int(round((stop - start) / step)) + 1
    return tuple(round(start + i * step, 10) for i in range(count))


DEFAULT_SNR_AXIS = _snr_axis(-10.0, 2.0, 30.0)
DEFAULT_NBARS = (1, 2, 4, 8, 32)

PRESETS = {
    # SNR sweeps at 20% affected; fig7 fixes SNR at 10 dB and sweeps fraction.
    "fig3": dict(kinds=("type1",), nbars=DEFAULT_NBARS,
                 snrs_db=DEFAULT_SNR_AXIS, fractions=(0.2,)),
    "fig4": dict(kinds=("ideal", "type2"), nbars=DEFAULT_NBARS,
                 snrs_db=DEFAULT_SNR_AXIS, fractions=(0.2,)),
    "fig5": dict(kinds=("ideal", "type3"), nbars=DEFAULT_NBARS,
                 snrs_db=DEFAULT_SNR_AXIS, fractions=(0.2,)),
    "fig6": dict(kinds=("type1", "type2", "type3"), nbars=(4, 8),
                 snrs_db=DEFAULT_SNR_AXIS, fractions=(0.2,)),
    "fig7": dict(kinds=("type1", "type2", "type3"), nbars=(4,),
                 snrs_db=(10.0,), fractions=_snr_axis(0.0, 0.05, 0.5)),
}


def preset_plan(name: str, trials: int = 100, master_seed: int = 42,
                noise_mode: str = "snr-normalized") -> SweepPlan:
    """Named experiment presets on the default 32-element, 2x4 system."""
    if name not in PRESETS:
        raise ValueError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
    axes = PRESETS[name]
    base = SystemConfig.create(m_t=2, m_r=4, n=32, nbar=axes["nbars"][0],
                               noise_mode=noise_mode, master_seed=master_seed)
    return SweepPlan(base=base, trials=trials, **axes)
