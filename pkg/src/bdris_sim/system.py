"""Experiment configuration, seeded streams, and random channel generation.

The surface has n elements split into q groups of nbar columns; channels are
i.i.d. unit-variance complex Gaussian (Rayleigh), with the q-th column block
of H and G attached to the q-th group.
"""

import json
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .vecops import kron, vec

NOISE_MODES = ("snr-normalized", "fixed-sigma")

# Stream purposes, in the order they key the per-trial substreams.
STREAM_PURPOSES = ("channel", "impairment", "noise")


@dataclass(frozen=True)
class SystemConfig:
    """Dimensions and run contract of one experiment point.

    t defaults to the minimum pilot length m_t * nbar**2 * q and may only be
    overridden upward.
    """

    m_t: int
    m_r: int
    n: int
    nbar: int
    q: int
    t: int
    noise_mode: str = "snr-normalized"
    master_seed: int = 0

    def __post_init__(self):
        for name in ("m_t", "m_r", "n", "nbar", "q", "t"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if self.n != self.nbar * self.q:
            raise ValueError(f"n={self.n} must equal nbar*q={self.nbar * self.q}")
        if self.t < self.min_pilots:
            raise ValueError(
                f"t={self.t} below identifiability bound {self.min_pilots}"
            )
        if self.noise_mode not in NOISE_MODES:
            raise ValueError(f"noise_mode must be one of {NOISE_MODES}")

    @property
    def min_pilots(self) -> int:
        return self.m_t * self.nbar**2 * self.q

    @property
    def combined_len(self) -> int:
        return self.m_r * self.m_t * self.nbar**2 * self.q

    @classmethod
    def create(cls, m_t, m_r, n, nbar, t=None, noise_mode="snr-normalized",
               master_seed=0) -> "SystemConfig":
        """Build a config deriving q = n // nbar and, unless given, minimal t."""
        if nbar < 1 or n % nbar != 0:
            raise ValueError(f"nbar={nbar} must divide n={n}")
        q = n // nbar
        if t is None:
            t = m_t * nbar**2 * q
        return cls(m_t=m_t, m_r=m_r, n=n, nbar=nbar, q=q, t=t,
                   noise_mode=noise_mode, master_seed=master_seed)

    @classmethod
    def from_mapping(cls, doc: Mapping) -> "SystemConfig":
        """Config from a JSON-style mapping (keys m_t, m_r, n, nbar, ...)."""
        return cls.create(
            m_t=int(doc["m_t"]),
            m_r=int(doc["m_r"]),
            n=int(doc["n"]),
            nbar=int(doc["nbar"]),
            t=int(doc["t"]) if "t" in doc else None,
            noise_mode=doc.get("noise_mode", "snr-normalized"),
            master_seed=int(doc.get("master_seed", 0)),
        )

    def with_nbar(self, nbar: int) -> "SystemConfig":
        """Same system, different group size (t reset to its minimum)."""
        return SystemConfig.create(self.m_t, self.m_r, self.n, nbar,
                                   noise_mode=self.noise_mode,
                                   master_seed=self.master_seed)


def load_config(path) -> dict:
    """Read a JSON config document; returns the raw dict for the caller to
    merge with CLI flags (see SystemConfig.from_mapping for the typed part).
    """
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict):
        raise ValueError(f"{path}: expected a JSON object")
    return doc


def trial_stream(master_seed: int, trial_index: int, purpose: str) -> np.random.Generator:
    """Counter-based stream keyed by (master_seed, trial_index, purpose).

    Streams are independent of scheduling and of which features are enabled,
    so a trial reproduces bitwise no matter how many workers run the sweep.
    """
    key = (trial_index, STREAM_PURPOSES.index(purpose))
    ss = np.random.SeedSequence(entropy=master_seed, spawn_key=key)
    return np.random.Generator(np.random.Philox(ss))


def crandn(rng: np.random.Generator, *shape) -> np.ndarray:
    """Circularly-symmetric complex Gaussian, zero mean, unit variance."""
    re = rng.standard_normal(shape)
    im = rng.standard_normal(shape)
    return (re + 1j * im) / np.sqrt(2.0)


@dataclass(frozen=True)
class ChannelPair:
    """TX-RIS channel h (m_t x n) and RIS-RX channel g (m_r x n) with their
    per-group column-block views."""

    h: np.ndarray
    g: np.ndarray
    nbar: int

    def __post_init__(self):
        if self.h.shape[1] != self.g.shape[1]:
            raise ValueError("h and g must share the element dimension")
        if self.h.shape[1] % self.nbar != 0:
            raise ValueError("nbar must divide the element count")

    @property
    def n_groups(self) -> int:
        return self.h.shape[1] // self.nbar

    def h_block(self, q: int) -> np.ndarray:
        return self.h[:, q * self.nbar : (q + 1) * self.nbar]

    def g_block(self, q: int) -> np.ndarray:
        return self.g[:, q * self.nbar : (q + 1) * self.nbar]


@dataclass(frozen=True)
class CombinedChannel:
    """Stacked per-group vec(H^(q) kron G^(q)) vector of length
    m_r * m_t * nbar**2 * q."""

    c: np.ndarray
    m_t: int
    m_r: int
    nbar: int
    n_groups: int

    @property
    def seg_len(self) -> int:
        return self.m_r * self.m_t * self.nbar**2

    def segment(self, q: int) -> np.ndarray:
        return self.c[q * self.seg_len : (q + 1) * self.seg_len]


def generate_channels(cfg: SystemConfig, rng: np.random.Generator) -> ChannelPair:
    """Draw H (m_t x n) then G (m_r x n), i.i.d. CN(0, 1) entries."""
    h = crandn(rng, cfg.m_t, cfg.n)
    g = crandn(rng, cfg.m_r, cfg.n)
    return ChannelPair(h=h, g=g, nbar=cfg.nbar)


def combined_channel(ch: ChannelPair, cfg: SystemConfig) -> CombinedChannel:
    """Concatenate vec(H^(q) kron G^(q)) over the q groups."""
    if ch.h.shape != (cfg.m_t, cfg.n) or ch.g.shape != (cfg.m_r, cfg.n):
        raise ValueError(
            f"channel shapes {ch.h.shape}/{ch.g.shape} do not match config "
            f"({cfg.m_t}x{cfg.n}, {cfg.m_r}x{cfg.n})"
        )
    if ch.nbar != cfg.nbar:
        raise ValueError("channel block size does not match config")
    segs = [vec(kron(ch.h_block(q), ch.g_block(q))) for q in range(cfg.q)]
    return CombinedChannel(
        c=np.concatenate(segs),
        m_t=cfg.m_t,
        m_r=cfg.m_r,
        nbar=cfg.nbar,
        n_groups=cfg.q,
    )
