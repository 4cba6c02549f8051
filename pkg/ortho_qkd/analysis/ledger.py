"""Resource accounting: qubits and classical bits spent per key bit."""
import logging
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Dict, List, Union

import pandas as pd

from ortho_qkd import defaults
from ortho_qkd.codebook.codebook import NOISE_TAGS, NoiseMode
from ortho_qkd.noise.correction import LedgerProfile, adapt_protocol

logger = logging.getLogger(__name__)

Count = Union[int, Fraction, float]

# one representative parameter set per mode, the ledger does not depend on it
LEDGER_MODES = {
    'none': (), 'cd': (), 'cr': (), 'pauli-z': (0.5,), 'pauli-x': (0.5,), 'pauli-zx': (0.5,),
    'pauli-full': (0.25, 0.25, 0.25, 0.25), 'pd': (0.5,), 'ad': (0.5,),
}


@dataclass(frozen=True)
class ResourceLedger:
    """Qubits and classical bits consumed for a number of key bits."""

    qubits: Count
    classical_bits: Count
    key_bits: Count

    def __post_init__(self):
        if min(self.qubits, self.classical_bits, self.key_bits) < 0:
            raise ValueError(f'ledger counts cannot be negative: {self}')

    def scale(self, factor: Count) -> 'ResourceLedger':
        return ResourceLedger(self.qubits * factor, self.classical_bits * factor, self.key_bits * factor)

    def per_key_bit(self) -> 'ResourceLedger':
        if self.key_bits == 0:
            raise ValueError('a ledger without key bits has no per-bit cost')
        factor = Fraction(1) / self.key_bits if isinstance(self.key_bits, Rational) else 1.0 / self.key_bits
        return self.scale(factor)


def efficiency(ledger: ResourceLedger) -> Union[Fraction, float]:
    """Key bits over qubits plus classical bits, exact when the counts are rational."""
    denominator = ledger.qubits + ledger.classical_bits
    if denominator == 0:
        raise ValueError('efficiency is undefined for a ledger without qubits and classical bits')
    if all(isinstance(count, Rational) for count in (ledger.qubits, ledger.classical_bits, ledger.key_bits)):
        return Fraction(ledger.key_bits) / Fraction(denominator)
    return ledger.key_bits / denominator


def reference_table() -> Dict[str, ResourceLedger]:
    """Per-key-bit consumption of the two BB84 variants and of both protocols."""
    return {
        'BB84': ResourceLedger(4, 11, 1),
        'modified BB84': ResourceLedger(2, 5, 1),
        'protocol I': ResourceLedger(Fraction(9, 4), Fraction(13, 4), 1),
        'protocol II': ResourceLedger(2, Fraction(5, 2), 1),
    }


def closed_form_ledger(protocol: int, n: int, profile: LedgerProfile, decoy_ratio: float = defaults.DECOY_RATIO,
                       checking_fraction: float = defaults.CHECKING_FRACTION) -> ResourceLedger:
    """Exact consumption of a run of N key positions in which nothing is discarded.

    Protocol I publishes r, the checking bitmap, the checked outcomes and three
    one-bit messages; Protocol II publishes s, the bitmap, the outcomes and two
    one-bit messages. Damping modes add Bob's discard bitmap.
    """
    coding = 2 * n
    checked = int(coding * checking_fraction)
    outcome_bits = profile.bits_per_symbol * checked
    key_bits = profile.bits_per_symbol * (coding - checked)
    if protocol == 1:
        decoys = int(decoy_ratio * coding)
        positions = coding + decoys
        qubits = coding * profile.qubits_per_state + decoys * profile.qubits_per_decoy
        classical = positions + coding + outcome_bits + 3
    elif protocol == 2:
        positions = coding
        qubits = coding * profile.qubits_per_state + n * profile.qubits_per_block_aux
        classical = 1 + n + coding + outcome_bits + 1
    else:
        raise ValueError(f'unknown protocol {protocol}')
    if profile.discard_bitmap:
        classical += positions
    return ResourceLedger(qubits, classical, key_bits)


def decoy_free_ledger(n: int) -> ResourceLedger:
    """Protocol I without decoys: 4N qubits and 6N + 3 classical bits."""
    return closed_form_ledger(1, n, adapt_protocol(NoiseMode(), 1).ledger, decoy_ratio=0.0)


def noise_ledger_table(n: int = 1000) -> List[Dict[str, any]]:
    """One row per noise mode and protocol with the adapted protocol's per-key-bit costs."""
    rows = []
    for tag in NOISE_TAGS:
        mode = NoiseMode(tag, LEDGER_MODES[tag])
        for protocol in (1, 2):
            ledger = closed_form_ledger(protocol, n, adapt_protocol(mode, protocol).ledger)
            rows.append(_row(f'protocol {"I" * protocol} / {tag}', protocol, tag, ledger.per_key_bit()))
    return rows


def _row(name: str, protocol, mode: str, ledger: ResourceLedger) -> Dict[str, any]:
    value = efficiency(ledger)
    return {
        'name': name,
        'protocol': protocol,
        'mode': mode,
        'qubits_per_key_bit': float(ledger.qubits),
        'classical_bits_per_key_bit': float(ledger.classical_bits),
        'efficiency': float(value),
        'efficiency_exact': str(value),
    }


def efficiency_frame(n: int = 1000) -> pd.DataFrame:
    """Reference rows, the decoy-free Protocol I row and every noise-mode row."""
    rows = [_row(name, '-', '-', ledger) for name, ledger in reference_table().items()]
    rows.append(_row('protocol I without decoys', 1, 'none', decoy_free_ledger(n).per_key_bit()))
    rows.extend(noise_ledger_table(n))
    logger.debug('efficiency table with %s rows for N=%s', len(rows), n)
    return pd.DataFrame(rows)
