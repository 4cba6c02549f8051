import math
from dataclasses import asdict, dataclass
from typing import Dict, Iterable, List, Sequence

import pandas as pd

from ortho_qkd import defaults
from ortho_qkd.engine.transcript import RunReport

RATE_COLUMNS = ('checking_error_rate', 'decoy_error_rate', 'coding_error_rate', 'efficiency', 'eve_information')
CONFIGURATION_COLUMNS = ('protocol', 'n', 'mode', 'attack')


@dataclass
class RateSummary:

    mean: float
    sem: float
    half_width: float
    count: int

    @property
    def low(self) -> float:
        return self.mean - self.half_width

    @property
    def high(self) -> float:
        return self.mean + self.half_width


@dataclass
class AggregateSummary:

    trials: int
    aborted: int
    discarded: int
    rates: Dict[str, RateSummary]

    def to_dict(self) -> Dict[str, any]:
        document = asdict(self)
        for name, summary in self.rates.items():
            document['rates'][name].update(low=summary.low, high=summary.high)
        return document


def summarize_rates(values: Iterable[float], z: float = defaults.CONFIDENCE_Z) -> RateSummary:
    """Mean, standard error and normal-approximation half-width of a series."""
    series = pd.Series(list(values), dtype=float)
    if series.empty:
        raise ValueError('cannot summarize an empty series')
    sem = float(series.sem()) if len(series) > 1 else 0.0
    if math.isnan(sem):
        sem = 0.0
    return RateSummary(float(series.mean()), sem, z * sem, len(series))


def report_frame(reports: Sequence[RunReport]) -> pd.DataFrame:
    rows = []
    for trial, report in enumerate(reports):
        row = {'trial': trial}
        row.update({column: getattr(report, column) for column in CONFIGURATION_COLUMNS + RATE_COLUMNS})
        row.update({'aborted': report.aborted, 'discarded_count': report.discarded_count,
                    'key_length': len(report.key_bits), 'qubits': report.ledger.qubits,
                    'classical_bits': report.ledger.classical_bits})
        rows.append(row)
    return pd.DataFrame(rows)


def aggregate(reports: List[RunReport], z: float = defaults.CONFIDENCE_Z) -> AggregateSummary:
    """Summarize the rates of reports that share one configuration."""
    if not reports:
        raise ValueError('no reports to aggregate')
    frame = report_frame(reports)
    for column in CONFIGURATION_COLUMNS:
        if frame[column].nunique() > 1:
            raise ValueError(f'reports differ in {column}: {sorted(frame[column].unique())}')
    rates = {column: summarize_rates(frame[column], z) for column in RATE_COLUMNS}
    return AggregateSummary(
        trials=len(frame),
        aborted=int(frame['aborted'].sum()),
        discarded=int(frame['discarded_count'].sum()),
        rates=rates,
    )
