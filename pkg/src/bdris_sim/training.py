"""Pilot and scattering training design.

The default design factors the slot index as t = t1 * m_t + t2 and takes the
scattering column from a DFT matrix of size nbar**2 * q (scaled by
1/sqrt(nbar)) and the pilot column from a DFT matrix of size m_t. The two
sums then factor, which makes Omega^H Omega = (t / nbar) * I exactly; at
nbar = 1 this degenerates to classical diagonal DFT training.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .system import SystemConfig
from .vecops import dft_matrix, khatri_rao, unvec


@dataclass(frozen=True)
class TrainingDesign:
    """Pilots x (m_t x t), vectorized scattering training s_prime
    (nbar**2*q x t), and their combination omega = khatri_rao(s_prime, x).T.
    """

    cfg: SystemConfig
    x_pilots: np.ndarray
    s_prime: np.ndarray
    omega: np.ndarray
    # Residual of the orthogonality contract, measured once at build time so
    # per-trial consumers can check it without an O(t * m**2) product.
    orthogonality_residual: float

    def slot(self, t: int, q: int) -> np.ndarray:
        """Scattering matrix of group q at slot t (nbar x nbar)."""
        nb2 = self.cfg.nbar**2
        seg = self.s_prime[q * nb2 : (q + 1) * nb2, t]
        return unvec(seg, self.cfg.nbar, self.cfg.nbar)

    @cached_property
    def omega_conj(self) -> np.ndarray:
        """conj(omega), precomputed once; the matched filter's hot operand."""
        return self.omega.conj()


def build_training(cfg: SystemConfig) -> TrainingDesign:
    """Build the factored Khatri-Rao DFT design for minimal pilot length."""
    if cfg.t != cfg.min_pilots:
        raise ValueError(
            f"only minimal t = {cfg.min_pilots} is supported, got t = {cfg.t}"
        )
    m = cfg.nbar**2 * cfg.q
    f_s = dft_matrix(m)
    f_x = dft_matrix(cfg.m_t)
    slots = np.arange(cfg.t)
    t1 = slots // cfg.m_t
    t2 = slots % cfg.m_t
    s_prime = f_s[:, t1] / np.sqrt(cfg.nbar)
    x = f_x[:, t2]
    omega = khatri_rao(s_prime, x).T
    return TrainingDesign(
        cfg=cfg,
        x_pilots=x,
        s_prime=s_prime,
        omega=omega,
        orthogonality_residual=_orthogonality_residual(omega, cfg.nbar),
    )


def _orthogonality_residual(omega: np.ndarray, nbar: int) -> float:
    t, m = omega.shape
    gram = omega.conj().T @ omega
    scale = t / nbar
    gram[np.diag_indices(m)] -= scale
    return float(np.linalg.norm(gram) / (scale * np.sqrt(m)))


def verify_orthogonality(d: TrainingDesign) -> float:
    """Relative residual ||Omega^H Omega - (t/nbar) I||_F / ||(t/nbar) I||_F,
    recomputed from the current matrices."""
    return _orthogonality_residual(d.omega, d.cfg.nbar)


@dataclass(frozen=True)
class RealizabilityReport:
    """Advisory per-slot diagnostics; never blocks a run.

    unitarity[t, q] = ||S_t^(q)^H S_t^(q) - I||_F and
    symmetry[t, q] = ||S_t^(q) - S_t^(q)^T||_F.
    """

    unitarity: np.ndarray
    symmetry: np.ndarray

    @property
    def max_unitarity(self) -> float:
        return float(self.unitarity.max())

    @property
    def max_symmetry(self) -> float:
        return float(self.symmetry.max())


def realizability_report(d: TrainingDesign) -> RealizabilityReport:
    """Measure how far each per-slot scattering matrix is from a unitary,
    symmetric (reciprocal lossless) one."""
    cfg = d.cfg
    eye = np.eye(cfg.nbar)
    unitarity = np.empty((cfg.t, cfg.q))
    symmetry = np.empty((cfg.t, cfg.q))
    for t in range(cfg.t):
        for q in range(cfg.q):
            s = d.slot(t, q)
            unitarity[t, q] = np.linalg.norm(s.conj().T @ s - eye)
            symmetry[t, q] = np.linalg.norm(s - s.T)
    return RealizabilityReport(unitarity=unitarity, symmetry=symmetry)


def dump_matrix(a: np.ndarray, path, fmt: str = "bin") -> None:
    """Dump a complex matrix for external verification.

    Both formats start with a one-line header "rows cols" and then list the
    entries column-major as interleaved real/imag doubles ("bin" packs them
    as raw float64, "csv" as one "re,im" line per entry).
    """
    a = np.asarray(a, dtype=complex)
    rows, cols = a.shape
    flat = a.reshape(-1, order="F")
    interleaved = np.empty(2 * flat.size)
    interleaved[0::2] = flat.real
    interleaved[1::2] = flat.imag
    if fmt == "bin":
        with open(path, "wb") as fh:
            fh.write(f"{rows} {cols}\n".encode("ascii"))
            fh.write(interleaved.astype("<f8").tobytes())
    elif fmt == "csv":
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(f"{rows} {cols}\n")
            for re, im in zip(interleaved[0::2], interleaved[1::2]):
                fh.write(f"{float(re)!r},{float(im)!r}\n")
    else:
        raise ValueError(f"unknown dump format {fmt!r}")


def load_matrix(path, fmt: str = "bin") -> np.ndarray:
    """Read back a matrix written by dump_matrix."""
    if fmt == "bin":
        with open(path, "rb") as fh:
            rows, cols = (int(v) for v in fh.readline().split())
            data = np.frombuffer(fh.read(), dtype="<f8")
    elif fmt == "csv":
        with open(path, "r", encoding="utf-8") as fh:
            rows, cols = (int(v) for v in fh.readline().split())
            pairs = [line.split(",") for line in fh if line.strip()]
            data = np.array([float(v) for pair in pairs for v in pair])
    else:
        raise ValueError(f"unknown dump format {fmt!r}")
    flat = data[0::2] + 1j * data[1::2]
    return flat.reshape((rows, cols), order="F")
