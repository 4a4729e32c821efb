import logging
import os
from dataclasses import dataclass

log = logging.getLogger(__name__)

ENV_MAX_NODES = "MULTIZERO_MAX_NODES"
ENV_MAX_DEGREE = "MULTIZERO_MAX_DEGREE"
ENV_WORKERS = "MULTIZERO_WORKERS"
ENV_START_BITS = "MULTIZERO_START_BITS"
ENV_MAX_BITS = "MULTIZERO_MAX_BITS"


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return default
    try:
        value = int(raw.strip().replace("_", ""))
    except ValueError:
        log.warning("ignoring %s=%r: not an integer", name, raw)
        return default
    if value <= 0:
        log.warning("ignoring %s=%r: must be positive", name, raw)
        return default
    return value


@dataclass
class AppConfig:
    max_nodes: int = 20_000_000
    max_degree: int = 24
    workers: int = 1
    start_bits: int = 128
    max_bits: int = 512

    @staticmethod
    def load(env: bool = True) -> "AppConfig":
        cfg = AppConfig()
        # Environment only; there is no config file.
        if env:
            cfg.max_nodes = _env_int(ENV_MAX_NODES, cfg.max_nodes)
            cfg.max_degree = _env_int(ENV_MAX_DEGREE, cfg.max_degree)
            cfg.workers = _env_int(ENV_WORKERS, cfg.workers)
            cfg.start_bits = _env_int(ENV_START_BITS, cfg.start_bits)
            cfg.max_bits = _env_int(ENV_MAX_BITS, cfg.max_bits)
        if cfg.max_bits < cfg.start_bits:
            log.warning("max_bits %d below start_bits %d; raising it", cfg.max_bits, cfg.start_bits)
            cfg.max_bits = cfg.start_bits
        return cfg
