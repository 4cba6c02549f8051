"""Exact wrong-guess error rates of the block purification attack.

For every block |x>|y> of two S states, Eve purifies the pairs she would see if the
inner qubits had been exchanged, (1,3) and (2,4), while Alice actually kept the
order. Bob then measures (1,2) and (3,4) in S. The probabilities are read off the
exact outcome distribution, not sampled.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Tuple

import pandas as pd

from ortho_qkd import defaults
from ortho_qkd.codebook import states
from ortho_qkd.qstate.state import outcome_distribution, purify_isometry, relabel, tensor

S_STATES = dict(zip(states.S_NAMES, (states.ZZ, states.OO, states.PHI, states.PHI_PRIME)))

INLINE_AVERAGE = Fraction(88, 160)
REPORTED_AVERAGE = Fraction(93, 160)


def reported_error(first: str, second: str) -> Fraction:
    """The published per-case constant for a wrong guess, scored on the first state."""
    first_entangled = first.startswith('phi')
    second_entangled = second.startswith('phi')
    if first_entangled and second_entangled:
        return Fraction(7, 10)
    if first_entangled:
        return Fraction(3, 4)
    if second_entangled:
        return Fraction(1, 2)
    return Fraction(0) if first == second else Fraction(3, 4)


def block(first: str, second: str):
    one = relabel(S_STATES[first], {'A': '1', 'B': '2'})
    two = relabel(S_STATES[second], {'A': '3', 'B': '4'})
    return tensor(one, two)


def wrong_guess_errors(first: str, second: str) -> Tuple[float, float]:
    """Error probabilities of the first and second state after a wrong order guess."""
    state = block(first, second)
    state = purify_isometry(state, states.BASIS_S, ['1', '3'], ['E1', 'E2'])
    state = purify_isometry(state, states.BASIS_S, ['2', '4'], ['E3', 'E4'])
    first_probabilities = outcome_distribution(state, states.BASIS_S, ['1', '2'])
    second_probabilities = outcome_distribution(state, states.BASIS_S, ['3', '4'])
    first_error = 1.0 - first_probabilities[states.BASIS_S.index(first)]
    second_error = 1.0 - second_probabilities[states.BASIS_S.index(second)]
    return float(first_error), float(second_error)


def as_fraction(value: float) -> Fraction:
    return Fraction(value).limit_denominator(1000)


@dataclass
class AttackRow:

    case: str
    oracle: float
    second_state: float
    reported: Fraction

    @property
    def oracle_exact(self) -> Fraction:
        return as_fraction(self.oracle)

    @property
    def match(self) -> bool:
        return abs(self.oracle - float(self.reported)) <= defaults.MATCH_TOLERANCE


@dataclass
class AttackTable:

    rows: List[AttackRow]
    aggregates: List[AttackRow] = field(default_factory=list)
    inline_average: Fraction = INLINE_AVERAGE

    def __len__(self):
        return len(self.rows) + len(self.aggregates)

    def row(self, case: str) -> AttackRow:
        for row in self.rows + self.aggregates:
            if row.case == case:
                return row
        raise KeyError(f'no row for case "{case}"')

    @property
    def note(self) -> str:
        average = self.row('average')
        return (f'oracle average {average.oracle_exact}, reported per-case average {average.reported}, '
                f'inline sum as printed {self.inline_average}')

    def frame(self) -> pd.DataFrame:
        return pd.DataFrame([{
            'case': row.case,
            'oracle': row.oracle,
            'oracle_exact': str(row.oracle_exact),
            'second_state': row.second_state,
            'reported': float(row.reported),
            'reported_exact': str(row.reported),
            'match': row.match,
        } for row in self.rows + self.aggregates])


def case_name(first: str, second: str) -> str:
    return f'b({first},{second})'


def attack_constant_table() -> AttackTable:
    rows = []
    for first in states.S_NAMES:
        for second in states.S_NAMES:
            first_error, second_error = wrong_guess_errors(first, second)
            rows.append(AttackRow(case_name(first, second), first_error, second_error,
                                  reported_error(first, second)))
    average = sum(row.oracle for row in rows) / len(rows)
    second_average = sum(row.second_state for row in rows) / len(rows)
    aggregates = [
        AttackRow('average', average, second_average, REPORTED_AVERAGE),
        AttackRow('whole', average / 2, second_average / 2, REPORTED_AVERAGE / 2),
    ]
    return AttackTable(rows, aggregates)
