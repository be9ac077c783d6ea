import pytest

from bdris_sim.system import SystemConfig
from bdris_sim.training import build_training

_CACHE = {}


@pytest.fixture(scope="session")
def design_for():
    """Session-wide (cfg, design) cache so the big DFT designs (nbar up to 32,
    Omega up to 2048x2048) are built once."""

    def get(nbar, m_t=2, m_r=4, n=32, noise_mode="snr-normalized", master_seed=0):
        key = (m_t, m_r, n, nbar, noise_mode, master_seed)
        if key not in _CACHE:
            cfg = SystemConfig.create(m_t, m_r, n, nbar, noise_mode=noise_mode,
                                      master_seed=master_seed)
            _CACHE[key] = (cfg, build_training(cfg))
        return _CACHE[key]

    return get
