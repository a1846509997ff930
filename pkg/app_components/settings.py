import logging
import os
from dataclasses import dataclass
from typing import Optional

from utils.algebra_core import DEFAULT_TOLERANCE
from utils.errors import ConfigError
from utils.jordan_ops import DEFAULT_EPSILON

logger = logging.getLogger(__name__)

DEFAULT_SEED = 0xC0FFEE
DEFAULT_COUNT = 20
DEFAULT_MAX_DIM = 4
MATRIX_DIM_CAP = 8
FORMATS = ("json", "csv")

# count, largest matrix dimension and largest poset for the exhaustive extension sweep
PROFILES = {
    "quick": {"count": DEFAULT_COUNT, "max_dim": DEFAULT_MAX_DIM, "extension_size": 4},
    "acceptance": {"count": 500, "max_dim": MATRIX_DIM_CAP, "extension_size": 6},
}
DEFAULT_PROFILE = "quick"
SEED_VARIABLE = "OPLAT_SEED"


@dataclass(frozen=True)
class SuiteConfig:
    seed: int = DEFAULT_SEED
    tolerance: float = DEFAULT_TOLERANCE
    epsilon: float = DEFAULT_EPSILON
    count: int = DEFAULT_COUNT
    max_dim: int = DEFAULT_MAX_DIM
    out: Optional[str] = None
    fmt: str = "json"
    profile: str = DEFAULT_PROFILE

    def __post_init__(self):
        if self.profile not in PROFILES:
            raise ConfigError(f"Unknown profile: {self.profile}")
        if self.count < 1:
            raise ConfigError(f"count must be at least 1, got {self.count}")
        if not 2 <= self.max_dim <= MATRIX_DIM_CAP:
            raise ConfigError(f"dims must lie between 2 and {MATRIX_DIM_CAP}, got {self.max_dim}")
        if self.tolerance <= 0 or self.epsilon <= 0:
            raise ConfigError("tolerance and epsilon must be positive")
        if self.fmt not in FORMATS:
            raise ConfigError(f"Unknown report format: {self.fmt}")
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigError("seed must be a 64-bit unsigned integer")

    @property
    def extension_size(self) -> int:
        return PROFILES[self.profile]["extension_size"]


def parse_seed(text: str) -> int:
    """Decimal or 0x-prefixed hexadecimal"""
    try:
        return int(text, 16) if text.strip().lower().startswith("0x") else int(text)
    except ValueError as e:
        raise ConfigError(f"Invalid seed: {text!r}") from e


def resolve_seed(cli_seed: Optional[str]) -> int:
    """--seed, then OPLAT_SEED, then the default"""
    if cli_seed is not None:
        return parse_seed(cli_seed)
    env_seed = os.environ.get(SEED_VARIABLE)
    if env_seed:
        logger.debug("seed taken from %s", SEED_VARIABLE)
        return parse_seed(env_seed)
    return DEFAULT_SEED


def _arg(args, name: str, default):
    value = getattr(args, name, None)
    return default if value is None else value


def build_config(args) -> SuiteConfig:
    """Build the suite settings from the parsed command line; the profile supplies count and dims defaults"""
    profile = _arg(args, "profile", DEFAULT_PROFILE)
    if profile not in PROFILES:
        raise ConfigError(f"Unknown profile: {profile}")
    defaults = PROFILES[profile]
    return SuiteConfig(
        seed=resolve_seed(getattr(args, "seed", None)),
        tolerance=_arg(args, "tol", DEFAULT_TOLERANCE),
        epsilon=_arg(args, "epsilon", DEFAULT_EPSILON),
        count=_arg(args, "count", defaults["count"]),
        max_dim=_arg(args, "dims", defaults["max_dim"]),
        out=getattr(args, "out", None),
        fmt=_arg(args, "format", "json"),
        profile=profile,
    )
