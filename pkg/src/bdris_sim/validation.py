"""Self-check suite behind the `validate` CLI subcommand.

Each check re-derives its expectation independently (brute-force counting,
analytic noise energy, cross-path synthesis) so a regression in any module
shows up as a named FAIL line rather than a silently wrong curve.
"""

from dataclasses import dataclass

import numpy as np

from . import estimation, harness, impairments, system, training, vecops
from .impairments import ImpairmentSpec
from .system import SystemConfig


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _random_matrix(rng, m, n):
    return system.crandn(rng, m, n)


def check_algebra(instances: int = 50, seed: int = 7) -> CheckResult:
    """vec/Kronecker/Khatri-Rao identities on random small instances."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(instances):
        m, k, n = rng.integers(1, 6, size=3)
        a = _random_matrix(rng, m, k)
        b = _random_matrix(rng, k, n)
        c = _random_matrix(rng, n, m)
        lhs = vecops.vec(a @ b @ c)
        rhs = vecops.kron(c.T, a) @ vecops.vec(b)
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))

        p, q = rng.integers(1, 6, size=2)
        d = _random_matrix(rng, p, q)
        pmap = vecops.vec_kron_map(m, k, p, q)
        lhs = pmap.apply(vecops.kron(vecops.vec(a), vecops.vec(d)))
        rhs = vecops.vec(vecops.kron(a, d))
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))

        u = _random_matrix(rng, m, 1)[:, 0]
        v = _random_matrix(rng, n, 1)[:, 0]
        lhs = vecops.vec(np.outer(u, v))
        rhs = vecops.kron(v, u)
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))

        r = int(rng.integers(1, 6))
        x = _random_matrix(rng, m, r)
        y = _random_matrix(rng, p, r)
        z = vecops.khatri_rao(x, y)
        for col in range(r):
            worst = max(worst, float(np.max(np.abs(
                z[:, col] - vecops.kron(x[:, col], y[:, col])
            ))))
    ok = worst < 1e-12
    return CheckResult("algebra-identities", ok, f"max abs deviation {worst:.3e}")


def check_orthogonality(nbars=(1, 2, 4, 8, 32)) -> CheckResult:
    worst = 0.0
    for nbar in nbars:
        cfg = SystemConfig.create(m_t=2, m_r=4, n=32, nbar=nbar)
        design = training.build_training(cfg)
        worst = max(worst, training.verify_orthogonality(design))
    ok = worst < 1e-10
    return CheckResult("training-orthogonality", ok, f"max residual {worst:.3e}")


def check_counting(nbars=(1, 2, 4, 8, 16, 32)) -> CheckResult:
    """Counting formulas against literal position enumeration."""
    for nbar in nbars:
        cfg = SystemConfig.create(m_t=2, m_r=4, n=32, nbar=nbar)
        for kind in impairments.KINDS:
            brute = 0
            for _q in range(cfg.q):
                for i in range(cfg.nbar):
                    for j in range(cfg.nbar):
                        if kind == "type1" and i < j:
                            brute += 1
                        elif kind == "type2" and i == j:
                            brute += 1
                        elif kind == "type3" and i <= j:
                            brute += 1
            formula = impairments.max_affected(kind, cfg)
            listed = len(impairments.candidate_positions(kind, cfg))
            if not (brute == formula == listed):
                return CheckResult(
                    "impairment-counting", False,
                    f"{kind} nbar={nbar}: brute {brute}, formula {formula}, "
                    f"candidates {listed}",
                )
    return CheckResult("impairment-counting", True,
                       "formulas match enumeration for all kinds and group sizes")


def check_structure(seed: int = 11) -> CheckResult:
    """Sampled impairment matrices obey the per-kind structural rules."""
    cfg = SystemConfig.create(m_t=2, m_r=4, n=32, nbar=4)
    rng = np.random.default_rng(seed)
    for kind in ("type1", "type2", "type3"):
        spec = ImpairmentSpec(kind=kind, fraction=1.0)
        err = impairments.sample_impairment(spec, cfg, rng)
        for q in range(cfg.q):
            block = err.block(q)
            diag = np.diag(block)
            off = block[~np.eye(cfg.nbar, dtype=bool)]
            if np.any(np.abs(block) > 1.0 + 1e-12):
                return CheckResult("impairment-structure", False,
                                   f"{kind}: modulus above 1")
            if kind == "type1" and not np.allclose(diag, 1.0):
                return CheckResult("impairment-structure", False,
                                   f"{kind}: diagonal touched")
            if kind == "type2" and not np.allclose(off, 1.0):
                return CheckResult("impairment-structure", False,
                                   f"{kind}: off-diagonal touched")
            if kind in ("type1", "type3"):
                # the diagonal may carry phase, so pairing is checked
                # off-diagonal only
                mask = ~np.eye(cfg.nbar, dtype=bool)
                mismatch = (block - block.conj().T)[mask]
                if np.max(np.abs(mismatch)) > 1e-12:
                    return CheckResult(
                        "impairment-structure", False,
                        f"{kind}: off-diagonal pair not conjugate-mirrored",
                    )
    return CheckResult("impairment-structure", True,
                       "diagonal/off-diagonal/pairing rules hold")


def check_exactness(nbars=(1, 2, 4, 8, 32)) -> CheckResult:
    worst = 0.0
    for nbar in nbars:
        cfg = SystemConfig.create(m_t=2, m_r=4, n=32, nbar=nbar)
        design = training.build_training(cfg)
        res = harness.run_trial(cfg, design, ImpairmentSpec("ideal"),
                                estimation.NOISELESS, trial_index=0)
        worst = max(worst, res.nmse)
    ok = worst < 1e-20
    return CheckResult("exact-recovery", ok, f"max noiseless NMSE {worst:.3e}")


def check_noop_type1(trials: int = 3, snr_db: float = 10.0) -> CheckResult:
    """Type 1 on a conventional surface (nbar = 1) must be a bitwise no-op."""
    cfg = SystemConfig.create(m_t=2, m_r=4, n=32, nbar=1)
    design = training.build_training(cfg)
    for k in range(trials):
        a = harness.run_trial(cfg, design, ImpairmentSpec("type1", 0.2), snr_db, k)
        b = harness.run_trial(cfg, design, ImpairmentSpec("ideal"), snr_db, k)
        if a.nmse != b.nmse:
            return CheckResult("noop-type1-nbar1", False,
                               f"trial {k}: {a.nmse!r} != {b.nmse!r}")
    return CheckResult("noop-type1-nbar1", True,
                       f"{trials} trials bitwise identical to ideal")


def check_noise_energy(trials: int = 2000, tol: float = 0.05) -> CheckResult:
    """Fixed-sigma ideal-case error energy against nbar * m_r * sigma^2."""
    cfg = SystemConfig.create(m_t=2, m_r=4, n=32, nbar=4,
                              noise_mode="fixed-sigma")
    design = training.build_training(cfg)
    snr_db = 20.0  # sigma^2 = 0.01 in fixed-sigma mode
    sigma2 = 10.0 ** (-snr_db / 10.0)
    expected = cfg.nbar * cfg.m_r * sigma2
    spec = ImpairmentSpec("ideal")
    total = 0.0
    for k in range(trials):
        total += harness.run_trial(cfg, design, spec, snr_db, k).error_energy
    mean = total / trials
    rel = abs(mean - expected) / expected
    ok = rel < tol
    return CheckResult(
        "analytic-noise-energy", ok,
        f"mean error energy {mean:.5f} vs {expected:.5f} (rel dev {rel:.2%})",
    )


def run_all(fast: bool = False) -> list[CheckResult]:
    """Execute the full invariant suite; fast mode trims the Monte Carlo
    sample counts for quick smoke runs."""
    noise_trials = 400 if fast else 2000
    return [
        check_algebra(),
        check_orthogonality(),
        check_counting(),
        check_structure(),
        check_exactness(),
        check_noop_type1(),
        check_noise_energy(trials=noise_trials, tol=0.08 if fast else 0.05),
    ]
