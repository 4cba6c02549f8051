from dataclasses import dataclass, field
from typing import Optional

from ortho_qkd import defaults
from ortho_qkd.codebook.codebook import NoiseMode
from ortho_qkd.errors import ConfigError


@dataclass(frozen=True)
class ProtocolConfig:
    """Parameters of a single protocol run.

    ``n`` is the number of key positions: Alice prepares 2N coding states. With
    ``adapted`` unset the plain codebook is sent through the noisy channel.
    """

    protocol: int = 1
    n: int = defaults.N
    mode: NoiseMode = field(default_factory=NoiseMode)
    checking_fraction: float = defaults.CHECKING_FRACTION
    decoy_ratio: float = defaults.DECOY_RATIO
    error_threshold: float = defaults.ERROR_THRESHOLD
    seed: Optional[int] = None
    correlated: bool = True
    adapted: bool = True

    def __post_init__(self):
        if self.protocol not in (1, 2):
            raise ConfigError(f'protocol must be 1 or 2, got {self.protocol}')
        if not isinstance(self.n, int) or isinstance(self.n, bool) or self.n < 2:
            raise ConfigError(f'N must be an integer of at least 2, got {self.n}')
        if not isinstance(self.mode, NoiseMode):
            raise ConfigError(f'mode must be a NoiseMode, got {type(self.mode)}')
        if not 0.0 < self.checking_fraction < 1.0:
            raise ConfigError(f'checking fraction must lie in (0, 1), got {self.checking_fraction}')
        if self.decoy_ratio < 0.0:
            raise ConfigError(f'decoy ratio cannot be negative, got {self.decoy_ratio}')
        if not 0.0 <= self.error_threshold <= 1.0:
            raise ConfigError(f'error threshold must lie in [0, 1], got {self.error_threshold}')

    @property
    def num_coding_states(self) -> int:
        return 2 * self.n

    @property
    def num_decoys(self) -> int:
        if self.protocol == 2:
            return 0
        return int(self.decoy_ratio * self.num_coding_states)

    @property
    def effective_mode(self) -> NoiseMode:
        """The noise mode the protocol is prepared for."""
        return self.mode if self.adapted else NoiseMode()
