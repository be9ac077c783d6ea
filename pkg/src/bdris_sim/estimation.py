"""Received-signal synthesis, matched-filter estimation, NMSE scoring, and
per-group channel decoupling.

Two independent synthesis routes exist on purpose: the direct per-slot matrix
chain and the vectorized route through the combined scattering matrix. They
must agree to numerical precision, which the tests use as a cross-check.
Kronecker products with identity are never materialized; the filter is
computed as (nbar/t) * vec(Y @ conj(Omega)).
"""

import math
from dataclasses import dataclass

import numpy as np

from .system import ChannelPair, CombinedChannel, SystemConfig, crandn
from .training import TrainingDesign
from .vecops import khatri_rao, nearest_kron_rank1, unvec, vec, vec_kron_map

NOISELESS = math.inf


class OrthogonalityError(RuntimeError):
    """Training design violates the orthogonality contract of the filter."""


# Residual above which the matched filter refuses to run.
FILTER_RESIDUAL_MAX = 1e-8


@dataclass(frozen=True)
class ReceivedSignal:
    """Stacked received vector y (length m_r * t) plus the noise variance
    actually used; optionally keeps the noiseless copy."""

    y: np.ndarray
    m_r: int
    t: int
    sigma2: float
    noiseless: np.ndarray | None = None

    def as_matrix(self) -> np.ndarray:
        """m_r x t view with column t equal to y_t."""
        return unvec(self.y, self.m_r, self.t)


@dataclass(frozen=True)
class EstimateResult:
    """Matched-filter output c_hat (length m_r * m_t * nbar**2 * q)."""

    c_hat: np.ndarray
    m_t: int
    m_r: int
    nbar: int
    n_groups: int

    @property
    def seg_len(self) -> int:
        return self.m_r * self.m_t * self.nbar**2

    def segment(self, q: int) -> np.ndarray:
        return self.c_hat[q * self.seg_len : (q + 1) * self.seg_len]


def synthesize_rx(ch: ChannelPair, s_bar_prime: np.ndarray, x: np.ndarray,
                  snr_db: float, noise_mode: str, rng: np.random.Generator,
                  keep_noiseless: bool = False) -> ReceivedSignal:
    """Received signal over t slots via the direct matrix chain
    y_t = sum_q G^(q) Sbar_t^(q) H^(q)^T x_t + b_t.

    snr_db = inf means noiseless. In "snr-normalized" mode the noise variance
    per complex entry is the empirical mean noiseless sample power divided by
    10^(snr_db/10); in "fixed-sigma" mode it is 10^(-snr_db/10) outright.
    """
    m_t, t = x.shape
    m_r = ch.g.shape[0]
    nbar = ch.nbar
    n_groups = ch.n_groups
    if ch.h.shape[0] != m_t:
        raise ValueError(f"pilots have {m_t} rows but H has {ch.h.shape[0]}")
    if s_bar_prime.shape != (nbar**2 * n_groups, t):
        raise ValueError(
            f"scattering training shape {s_bar_prime.shape} does not match "
            f"({nbar**2 * n_groups}, {t})"
        )
    if not math.isfinite(snr_db) and snr_db != NOISELESS:
        raise ValueError("snr_db must be finite or the noiseless sentinel inf")

    y0 = np.zeros((m_r, t), dtype=complex)
    for q in range(n_groups):
        seg = s_bar_prime[q * nbar**2 : (q + 1) * nbar**2, :]
        # seg.reshape(nbar, nbar, t)[b, a, t] holds Sbar_t[a, b] (column-major
        # slots), so the per-slot matrix-vector products batch as one einsum.
        sbar = seg.reshape(nbar, nbar, t)
        w = ch.h_block(q).T @ x
        z = np.einsum("bat,bt->at", sbar, w)
        y0 += ch.g_block(q) @ z

    y0_flat = vec(y0)
    if snr_db == NOISELESS:
        sigma2 = 0.0
        y_flat = y0_flat.copy()
    else:
        if noise_mode == "snr-normalized":
            sigma2 = float(np.mean(np.abs(y0_flat) ** 2) / 10.0 ** (snr_db / 10.0))
        elif noise_mode == "fixed-sigma":
            sigma2 = 10.0 ** (-snr_db / 10.0)
        else:
            raise ValueError(f"unknown noise_mode {noise_mode!r}")
        noise = math.sqrt(sigma2) * crandn(rng, m_r * t)
        y_flat = y0_flat + noise
    return ReceivedSignal(
        y=y_flat,
        m_r=m_r,
        t=t,
        sigma2=sigma2,
        noiseless=y0_flat if keep_noiseless else None,
    )


def synthesize_rx_vectorized(c: CombinedChannel, s_bar_prime: np.ndarray,
                             x: np.ndarray) -> np.ndarray:
    """Noiseless y via the combined route y = (Omega_bar kron I) c, computed
    without materializing the Kronecker product. Serves as the independent
    oracle for synthesize_rx."""
    m = s_bar_prime.shape[0] * x.shape[0]
    if s_bar_prime.shape[1] != x.shape[1]:
        raise ValueError("scattering training and pilots disagree on slot count")
    if c.c.size % m != 0:
        raise ValueError(
            f"combined channel length {c.c.size} incompatible with {m} columns"
        )
    m_r = c.c.size // m
    omega_bar = khatri_rao(s_bar_prime, x).T
    return vec(unvec(c.c, m_r, m) @ omega_bar.T)


def matched_filter(y: ReceivedSignal, d: TrainingDesign,
                   cfg: SystemConfig) -> EstimateResult:
    """Estimate c as (nbar/t) * (Omega kron I)^H y, computed in the
    equivalent form (nbar/t) * vec(Y @ conj(Omega)).

    Always uses the ideal Omega: the receiver does not know the impairment.
    """
    if d.orthogonality_residual > FILTER_RESIDUAL_MAX:
        raise OrthogonalityError(
            f"design residual {d.orthogonality_residual:.3e} exceeds "
            f"{FILTER_RESIDUAL_MAX:.1e}"
        )
    if y.t != cfg.t or y.m_r != cfg.m_r:
        raise ValueError("received signal does not match config dimensions")
    y_mat = y.as_matrix()
    c_hat = (cfg.nbar / cfg.t) * vec(y_mat @ d.omega_conj)
    return EstimateResult(
        c_hat=c_hat,
        m_t=cfg.m_t,
        m_r=cfg.m_r,
        nbar=cfg.nbar,
        n_groups=cfg.q,
    )


def _as_vector(v) -> np.ndarray:
    if isinstance(v, CombinedChannel):
        return v.c
    if isinstance(v, EstimateResult):
        return v.c_hat
    return np.asarray(v)


def nmse(reference, estimate) -> float:
    """||c - c_hat||^2 / ||c||^2 for one trial."""
    c = _as_vector(reference)
    c_hat = _as_vector(estimate)
    if c.shape != c_hat.shape:
        raise ValueError(f"length mismatch: {c.shape} vs {c_hat.shape}")
    denom = float(np.sum(np.abs(c) ** 2))
    if denom == 0.0:
        raise ValueError("reference channel has zero norm")
    return float(np.sum(np.abs(c - c_hat) ** 2) / denom)


@dataclass(frozen=True)
class DecoupledChannels:
    """Per-group factors recovered up to one complex scalar: h_hat * lam and
    g_hat / lam fit the segment equally well for any lam != 0."""

    h_hat: np.ndarray
    g_hat: np.ndarray
    sigma: float
    rank1_residual: float
    degenerate: bool


# Dominant singular values below this are reported as degenerate segments.
DEGENERATE_SIGMA = 1e-12


def decouple_channels(segment: np.ndarray, cfg: SystemConfig) -> DecoupledChannels:
    """Split a combined-channel segment back into per-group channel factors.

    Un-permutes the segment into kron(vec(H), vec(G)), reshapes that to the
    rank-1 matrix vec(G) vec(H)^T, and takes its dominant singular triplet.
    """
    seg = np.asarray(segment)
    expected = cfg.m_r * cfg.m_t * cfg.nbar**2
    if seg.size != expected:
        raise ValueError(f"segment length {seg.size}, expected {expected}")
    pmap = vec_kron_map(cfg.m_t, cfg.nbar, cfg.m_r, cfg.nbar)
    stacked = pmap.inverse().apply(seg)
    w = unvec(stacked, cfg.m_r * cfg.nbar, cfg.m_t * cfg.nbar)
    u, v, sigma = nearest_kron_rank1(w)
    resid = float(np.linalg.norm(w - sigma * np.outer(u, v.conj())))
    root = math.sqrt(sigma)
    g_hat = unvec(root * u, cfg.m_r, cfg.nbar)
    h_hat = unvec(root * v.conj(), cfg.m_t, cfg.nbar)
    return DecoupledChannels(
        h_hat=h_hat,
        g_hat=g_hat,
        sigma=sigma,
        rank1_residual=resid,
        degenerate=sigma < DEGENERATE_SIGMA,
    )


def scale_aligned_nmse(a: np.ndarray, a_hat: np.ndarray) -> float:
    """min over complex lam of ||a - lam * a_hat||_F^2 / ||a||_F^2.

    The minimizer is lam* = <a_hat, a> / ||a_hat||_F^2, which absorbs the
    scalar ambiguity left by the decoupling.
    """
    a = np.asarray(a)
    a_hat = np.asarray(a_hat)
    if a.shape != a_hat.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {a_hat.shape}")
    denom = float(np.sum(np.abs(a_hat) ** 2))
    if denom == 0.0:
        raise ValueError("estimate has zero norm")
    lam = np.vdot(a_hat, a) / denom
    ref = float(np.sum(np.abs(a) ** 2))
    return float(np.sum(np.abs(a - lam * a_hat) ** 2) / ref)
