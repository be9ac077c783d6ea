"""Block-diagonal multiplicative impairments of the scattering matrix.

Three circuit-level fault classes, applied as an elementwise error matrix on
the scattering blocks:

* type1 distorts only mutual impedances (in-block off-diagonal entries),
* type2 distorts only self-impedances (diagonal entries),
* type3 distorts both.

Off-diagonal distortions are conjugate-mirrored so each block keeps its
Hermitian pairing; the error matrix is drawn once per trial and reused over
all pilot slots.
"""

import math
from dataclasses import dataclass

import numpy as np

from .system import SystemConfig
from .training import TrainingDesign

KINDS = ("ideal", "type1", "type2", "type3")


@dataclass(frozen=True)
class ImpairmentSpec:
    """Which impedances can fail and how hard.

    fraction is the share of the kind's maximum affected count; amplitude
    draws are Uniform(amp_min, 1] and phases Uniform[0, 2*pi).
    """

    kind: str
    fraction: float = 0.0
    amp_min: float = 0.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if not 0.0 <= self.fraction <= 1.0:
            raise ValueError(f"fraction must be in [0, 1], got {self.fraction}")
        if not 0.0 <= self.amp_min < 1.0:
            raise ValueError(f"amp_min must be in [0, 1), got {self.amp_min}")


@dataclass(frozen=True)
class ImpairmentMatrix:
    """Per-group error blocks (q, nbar, nbar); unaffected entries are exactly 1.

    affected lists the distorted positions as (group, i, j) with i <= j; the
    conjugate mirror (j, i) of each off-diagonal hit is implied.
    """

    blocks: np.ndarray
    affected: tuple[tuple[int, int, int], ...]
    kind: str

    @property
    def affected_count(self) -> int:
        return len(self.affected)

    @property
    def n_groups(self) -> int:
        return self.blocks.shape[0]

    @property
    def nbar(self) -> int:
        return self.blocks.shape[1]

    def block(self, q: int) -> np.ndarray:
        return self.blocks[q]

    def vec_per_group(self) -> np.ndarray:
        """Stacked vec(E^(q)) over groups, aligned with s_prime's rows."""
        # blocks[q] is row-major; swapping the last two axes makes the final
        # ravel column-major per block.
        return self.blocks.transpose(0, 2, 1).reshape(-1)


def ideal_impairment(cfg: SystemConfig) -> ImpairmentMatrix:
    """All-ones error blocks (nothing distorted)."""
    blocks = np.ones((cfg.q, cfg.nbar, cfg.nbar), dtype=complex)
    return ImpairmentMatrix(blocks=blocks, affected=(), kind="ideal")


def candidate_positions(kind: str, cfg: SystemConfig) -> list[tuple[int, int, int]]:
    """Enumerate the distortable positions (group, i, j) with i <= j.

    A mutual impedance is one (i, j)-with-(j, i) pair and counts once.
    """
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}, got {kind!r}")
    out = []
    for q in range(cfg.q):
        for i in range(cfg.nbar):
            for j in range(i, cfg.nbar):
                if i == j and kind in ("type2", "type3"):
                    out.append((q, i, j))
                elif i != j and kind in ("type1", "type3"):
                    out.append((q, i, j))
    return out


def max_affected(kind: str, cfg: SystemConfig) -> int:
    """Maximum number of distinct impedances the kind can distort."""
    if kind == "ideal":
        return 0
    mutual = cfg.q * cfg.nbar * (cfg.nbar - 1) // 2
    if kind == "type1":
        return mutual
    if kind == "type2":
        return cfg.n
    if kind == "type3":
        return cfg.n + mutual
    raise ValueError(f"kind must be one of {KINDS}, got {kind!r}")


def round_half_away(x: float) -> int:
    # round-half-away-from-zero, pinned so NMSE curves reproduce exactly
    return int(math.floor(x + 0.5))


def sample_impairment(spec: ImpairmentSpec, cfg: SystemConfig,
                      rng: np.random.Generator) -> ImpairmentMatrix:
    """Draw one error matrix: round(fraction * max) positions uniformly
    without replacement, each with amplitude/phase distortion.

    The whole candidate set is permuted and valued before the prefix of the
    requested length is kept, so sweeps over fraction share draws: a larger
    fraction extends the affected set of a smaller one instead of resampling.
    """
    blocks = np.ones((cfg.q, cfg.nbar, cfg.nbar), dtype=complex)
    if spec.kind == "ideal":
        return ImpairmentMatrix(blocks=blocks, affected=(), kind=spec.kind)

    cands = candidate_positions(spec.kind, cfg)
    count = round_half_away(spec.fraction * len(cands))
    if len(cands) == 0:
        return ImpairmentMatrix(blocks=blocks, affected=(), kind=spec.kind)

    order = rng.permutation(len(cands))
    # 1 - random() lands in (0, 1], matching the open-at-zero amplitude range
    amps = spec.amp_min + (1.0 - spec.amp_min) * (1.0 - rng.random(len(cands)))
    phases = rng.uniform(0.0, 2.0 * np.pi, len(cands))

    chosen = sorted(order[:count])
    affected = []
    for idx in chosen:
        q, i, j = cands[idx]
        value = amps[idx] * np.exp(1j * phases[idx])
        blocks[q, i, j] = value
        if i != j:
            blocks[q, j, i] = np.conj(value)
        affected.append((q, i, j))
    return ImpairmentMatrix(blocks=blocks, affected=tuple(affected), kind=spec.kind)


def affected_rows(e: ImpairmentMatrix, trial_index: int) -> list[tuple]:
    """Audit rows (trial, kind, q, i, j, alpha, phi) for the affected
    positions, phases reported in [0, 2*pi)."""
    rows = []
    for (q, i, j) in e.affected:
        value = e.blocks[q, i, j]
        alpha = float(np.abs(value))
        phi = float(np.angle(value) % (2.0 * np.pi))
        rows.append((trial_index, e.kind, q, i, j, alpha, phi))
    return rows


def write_affected_csv(rows: list[tuple], path) -> None:
    """Append-style audit dump of affected_rows output."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("trial,kind,q,i,j,alpha,phi\n")
        for trial, kind, q, i, j, alpha, phi in rows:
            fh.write(f"{trial},{kind},{q},{i},{j},{alpha!r},{phi!r}\n")


def apply_impairment(d: TrainingDesign, e: ImpairmentMatrix) -> np.ndarray:
    """Impaired vectorized scattering training: every slot of s_prime gets the
    same elementwise error (the impairment is constant over the t slots)."""
    if e.n_groups != d.cfg.q or e.nbar != d.cfg.nbar:
        raise ValueError(
            f"impairment blocks {e.blocks.shape} do not match design "
            f"({d.cfg.q} groups of {d.cfg.nbar})"
        )
    if not e.affected:
        # all-ones error: hand back the shared (read-only) training
        return d.s_prime
    e_vec = e.vec_per_group()
    rows = np.flatnonzero(e_vec != 1.0)
    out = d.s_prime.copy()
    out[rows] *= e_vec[rows, None]
    return out
