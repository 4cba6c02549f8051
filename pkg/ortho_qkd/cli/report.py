"""Report documents and their json, csv and text renderings."""
import json
import logging
import sys
from typing import Dict, List, Optional

import pandas as pd

from ortho_qkd.analysis.attack_table import AttackTable
from ortho_qkd.analysis.stats import aggregate
from ortho_qkd.cli.experiment import ExperimentSpec, TrialResult

logger = logging.getLogger(__name__)

TRIAL_COLUMNS = ['trial', 'checking_error_rate', 'decoy_error_rate', 'coding_error_rate', 'aborted',
                 'discarded_count', 'key_length', 'qubits', 'classical_bits', 'efficiency', 'eve_information',
                 'fault']


def trial_row(result: TrialResult) -> Dict[str, any]:
    report = result.report
    if report is None:
        row = {column: None for column in TRIAL_COLUMNS}
        row.update({'trial': result.index, 'fault': result.fault})
        return row
    return {
        'trial': result.index,
        'checking_error_rate': report.checking_error_rate,
        'decoy_error_rate': report.decoy_error_rate,
        'coding_error_rate': report.coding_error_rate,
        'aborted': report.aborted,
        'discarded_count': report.discarded_count,
        'key_length': len(report.key_bits),
        'qubits': report.ledger.qubits,
        'classical_bits': report.ledger.classical_bits,
        'efficiency': report.efficiency,
        'eve_information': report.eve_information,
        'fault': None,
    }


def trial_frame(results: List[TrialResult]) -> pd.DataFrame:
    return pd.DataFrame([trial_row(result) for result in results], columns=TRIAL_COLUMNS)


def run_document(spec: ExperimentSpec, results: List[TrialResult]) -> Dict[str, any]:
    """The structured report of a batch; ``spec`` must carry the master seed."""
    reports = [result.report for result in results if result.report is not None]
    document = {
        'spec': spec.to_dict(),
        'seed': spec.seed,
        'trials': [trial_row(result) for result in results],
        'faults': sum(1 for result in results if result.fault is not None),
    }
    if reports:
        summary = aggregate(reports)
        first = reports[0]
        document.update({
            'aggregate': summary.to_dict(),
            'aborted': summary.aborted,
            'ledger': {'qubits': first.ledger.qubits, 'classical_bits': first.ledger.classical_bits,
                       'key_bits': first.ledger.key_bits},
            'efficiency': summary.rates['efficiency'].mean,
        })
    return document


def attack_document(table: AttackTable) -> Dict[str, any]:
    return {
        'rows': table.frame().to_dict(orient='records'),
        'inline_average': str(table.inline_average),
        'note': table.note,
    }


def efficiency_document(frame: pd.DataFrame, n: int) -> Dict[str, any]:
    return {'n': n, 'rows': frame.to_dict(orient='records')}


def render(document: Dict[str, any], frame: pd.DataFrame, fmt: str) -> str:
    if fmt == 'json':
        return json.dumps(document, indent=2, sort_keys=True, default=str) + '\n'
    if fmt == 'csv':
        return frame.to_csv(index=False)
    return frame.to_string(index=False) + '\n'


def write_output(text: str, out: Optional[str] = None):
    if out is None:
        sys.stdout.write(text)
        return
    with open(out, 'wt') as fh:
        fh.write(text)
    logger.info('report written to %s', out)
