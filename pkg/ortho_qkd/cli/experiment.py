"""Experiment specifications, configuration files and the trial runner."""
import logging
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import asdict, dataclass, replace
from typing import Dict, List, Optional, Union

from tqdm import tqdm

from ortho_qkd import defaults
from ortho_qkd.adversary.attacks import AttackStrategy, parse_attack
from ortho_qkd.codebook.codebook import NoiseMode
from ortho_qkd.engine.config import ProtocolConfig
from ortho_qkd.engine.protocol_one import run_protocol_one
from ortho_qkd.engine.protocol_two import run_protocol_two
from ortho_qkd.engine.transcript import RunReport
from ortho_qkd.errors import ConfigError, ProtocolFault
from ortho_qkd.qstate.rng import trial_rng

logger = logging.getLogger(__name__)

TRUE_VALUES = ('true', 'yes', '1', 'on')
FALSE_VALUES = ('false', 'no', '0', 'off')


def parse_bool(value: Union[str, bool]) -> bool:
    if isinstance(value, bool):
        return value
    if str(value).strip().lower() in TRUE_VALUES:
        return True
    if str(value).strip().lower() in FALSE_VALUES:
        return False
    raise ConfigError(f'expected a boolean, got "{value}"')


def parse_optional_int(value) -> Optional[int]:
    if value is None or str(value).strip().lower() in ('', 'none'):
        return None
    return int(value)


def parse_optional_str(value) -> Optional[str]:
    if value is None or str(value).strip().lower() in ('', 'none', '-'):
        return None
    return str(value).strip()


FIELD_PARSERS = {
    'protocol': int,
    'n': int,
    'trials': int,
    'seed': parse_optional_int,
    'attack': str,
    'noise': str,
    'grouping': str,
    'adapt': parse_bool,
    'decoy_ratio': float,
    'checking_fraction': float,
    'error_threshold': float,
    'workers': int,
    'out': parse_optional_str,
    'format': str,
}


@dataclass(frozen=True)
class ExperimentSpec:
    """A batch of seeded runs of one protocol configuration."""

    protocol: int = 1
    n: int = defaults.N
    trials: int = defaults.TRIALS
    seed: Optional[int] = None
    attack: str = 'none'
    noise: str = 'none'
    grouping: str = 'correlated'
    adapt: bool = True
    decoy_ratio: float = defaults.DECOY_RATIO
    checking_fraction: float = defaults.CHECKING_FRACTION
    error_threshold: float = defaults.ERROR_THRESHOLD
    workers: int = defaults.WORKERS
    out: Optional[str] = None
    format: str = defaults.REPORT_FORMAT

    def __post_init__(self):
        if self.trials < 1:
            raise ConfigError(f'trials must be at least 1, got {self.trials}')
        if self.workers < 1:
            raise ConfigError(f'workers must be at least 1, got {self.workers}')
        if self.grouping not in defaults.GROUPINGS:
            raise ConfigError(f'grouping must be one of {defaults.GROUPINGS}, got "{self.grouping}"')
        if self.format not in defaults.REPORT_FORMATS:
            raise ConfigError(f'format must be one of {defaults.REPORT_FORMATS}, got "{self.format}"')
        if self.seed is not None and self.seed < 0:
            raise ConfigError(f'seed must be non-negative, got {self.seed}')
        object.__setattr__(self, 'noise', NoiseMode.parse(self.noise).describe())
        self.protocol_config()
        self.attack_strategy().check_protocol(self.protocol)

    @classmethod
    def from_dict(cls, values: Dict[str, any]) -> 'ExperimentSpec':
        unknown = sorted(set(values) - set(FIELD_PARSERS))
        if unknown:
            raise ConfigError(f'unknown experiment settings {unknown}')
        parsed = {}
        for key, value in values.items():
            try:
                parsed[key] = FIELD_PARSERS[key](value)
            except (TypeError, ValueError) as err:
                if isinstance(err, ConfigError):
                    raise
                raise ConfigError(f'invalid value "{value}" for {key}')
        return cls(**parsed)

    def to_dict(self) -> Dict[str, any]:
        return asdict(self)

    def with_seed(self, seed: int) -> 'ExperimentSpec':
        return replace(self, seed=seed)

    def noise_mode(self) -> NoiseMode:
        return NoiseMode.parse(self.noise)

    def attack_strategy(self) -> AttackStrategy:
        """A fresh strategy; every run needs its own memory."""
        return parse_attack(self.attack)

    def protocol_config(self, seed: Optional[int] = None) -> ProtocolConfig:
        return ProtocolConfig(
            protocol=self.protocol,
            n=self.n,
            mode=self.noise_mode(),
            checking_fraction=self.checking_fraction,
            decoy_ratio=self.decoy_ratio,
            error_threshold=self.error_threshold,
            seed=seed,
            correlated=self.grouping == 'correlated',
            adapted=self.adapt,
        )


def read_config_file(path: str) -> Dict[str, str]:
    """Read a flat ``key = value`` file; blank lines and ``#`` comments are ignored."""
    settings = {}
    with open(path, 'rt') as fh:
        for line_number, line in enumerate(fh, start=1):
            line = line.split('#', 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition('=')
            if not sep:
                raise ConfigError(f'{path}:{line_number}: expected "key = value", got "{line}"')
            settings[key.strip().replace('-', '_')] = value.strip()
    return settings


def load_spec(path: Optional[str] = None, overrides: Dict[str, any] = None) -> ExperimentSpec:
    """Build a spec from an optional configuration file; overrides win over file values."""
    values = read_config_file(path) if path else {}
    values.update({key: value for key, value in (overrides or {}).items() if value is not None})
    return ExperimentSpec.from_dict(values)


@dataclass
class TrialResult:

    index: int
    report: Optional[RunReport] = None
    fault: Optional[str] = None


def run_trial(spec: ExperimentSpec, master_seed: int, index: int) -> TrialResult:
    rng = trial_rng(master_seed, index)
    cfg = spec.protocol_config(seed=master_seed)
    runner = run_protocol_one if spec.protocol == 1 else run_protocol_two
    try:
        report, _ = runner(cfg, spec.attack_strategy(), rng)
    except ProtocolFault as err:
        logger.info('trial %s faulted: %s', index, err)
        return TrialResult(index, fault=str(err))
    return TrialResult(index, report=report)


def run_trials(spec: ExperimentSpec, master_seed: int, quiet: bool = False) -> List[TrialResult]:
    """Run every trial of a spec, in worker processes when asked; results come back in trial order."""
    results = {}
    progress = tqdm(total=spec.trials, desc=f'protocol {spec.protocol} trials', disable=quiet)
    if spec.workers == 1:
        for index in range(spec.trials):
            results[index] = run_trial(spec, master_seed, index)
            progress.update(1)
    else:
        with ProcessPoolExecutor(max_workers=spec.workers) as executor:
            futures = {executor.submit(run_trial, spec, master_seed, index): index for index in range(spec.trials)}
            for future in as_completed(futures):
                results[futures[future]] = future.result()
                progress.update(1)
    progress.close()
    return [results[index] for index in sorted(results)]
