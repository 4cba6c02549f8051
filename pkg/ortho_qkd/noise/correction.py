"""Per-mode protocol adaptations and Bob's correction procedures."""
import logging
from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from ortho_qkd.codebook import states
from ortho_qkd.codebook.codebook import BLOCK_AUX_LABEL, Codebook, NoiseMode, block_label, build_codebook
from ortho_qkd.errors import LabelError
from ortho_qkd.qstate.state import StateVector, Unitary, apply_to_each, apply_unitary, as_labels, measure

logger = logging.getLogger(__name__)

ONE_PAULI_TABLE = {(0,): 'I', (1,): 'Z'}
TWO_PAULI_TABLE = {(0, 0): 'I', (1, 0): 'Z', (0, 1): 'X', (1, 1): 'XZ'}
BLOCK_AUX_TABLE = {(0,): 'I', (1,): 'X'}


@dataclass(frozen=True)
class SyndromeCheck:
    """Measure auxiliaries one by one ('x' = {+,-}, 'z' = {0,1}) and correct the targets."""

    aux_labels: Tuple[str, ...]
    aux_bases: Tuple[str, ...]
    corrections: Dict[Tuple[int, ...], str]
    targets: Tuple[str, ...]

    def __post_init__(self):
        if len(self.aux_labels) != len(self.aux_bases):
            raise ValueError('every auxiliary needs a measurement basis')
        if any(name not in ('I', 'Z', 'X', 'XZ') for name in self.corrections.values()):
            raise ValueError(f'corrections must be drawn from I, Z, X, XZ, got {self.corrections}')

    def relabelled(self, position: int) -> 'SyndromeCheck':
        return SyndromeCheck(tuple(block_label(label, position) for label in self.aux_labels), self.aux_bases,
                             self.corrections, tuple(block_label(label, position) for label in self.targets))


@dataclass(frozen=True)
class DualRailPair:

    data: str
    partner: str


@dataclass(frozen=True, eq=False)
class CorrectionRule:
    """Bob's procedure for one kind of received unit.

    The inverse of the preparation conjugation is applied to every received qubit
    first, then each syndrome check runs, then dual-rail pairs are decoded. A pair
    whose partner reads |0> after decoding is an empty pattern and the unit is
    discarded.
    """

    unconjugation: Optional[Unitary] = None
    checks: Tuple[SyndromeCheck, ...] = ()
    dual_rail: Tuple[DualRailPair, ...] = ()

    @property
    def auxiliary_labels(self) -> Tuple[str, ...]:
        labels = [label for check in self.checks for label in check.aux_labels]
        return tuple(labels + [pair.partner for pair in self.dual_rail])

    def required_labels(self) -> Tuple[str, ...]:
        targets = [label for check in self.checks for label in check.targets]
        return tuple(dict.fromkeys(list(self.auxiliary_labels) + targets + [pair.data for pair in self.dual_rail]))

    def relabelled(self, position: int) -> 'CorrectionRule':
        return CorrectionRule(
            unconjugation=self.unconjugation,
            checks=tuple(check.relabelled(position) for check in self.checks),
            dual_rail=tuple(DualRailPair(block_label(pair.data, position), block_label(pair.partner, position))
                            for pair in self.dual_rail),
        )


@dataclass
class CorrectionResult:

    state: Optional[StateVector]
    discarded: bool
    syndromes: Tuple[Tuple[int, ...], ...]


@dataclass(frozen=True)
class LedgerProfile:
    """Per-unit resource figures of an adapted protocol."""

    qubits_per_state: int
    qubits_per_decoy: int
    qubits_per_block_aux: int
    bits_per_symbol: int
    discard_bitmap: bool


@dataclass(frozen=True, eq=False)
class Adaptation:

    codebook: Codebook
    coding_rule: CorrectionRule
    decoy_rule: CorrectionRule
    block_rule: CorrectionRule
    ledger: LedgerProfile


def _pauli_checks(tag: str, partite: Dict[str, Tuple[str, ...]]) -> Tuple[SyndromeCheck, ...]:
    checks = []
    for labels in partite.values():
        data, aux = labels[0], labels[1:]
        if tag == 'pauli-full':
            checks.append(SyndromeCheck(aux, ('x', 'z'), TWO_PAULI_TABLE, (data,)))
        else:
            checks.append(SyndromeCheck(aux, ('x',), ONE_PAULI_TABLE, (data,)))
    return tuple(checks)


def _dual_rail_pairs(partite: Dict[str, Tuple[str, ...]]) -> Tuple[DualRailPair, ...]:
    return tuple(DualRailPair(labels[0], labels[1]) for labels in partite.values())


def adapt_protocol(mode: NoiseMode, protocol: int = 1) -> Adaptation:
    """Codebook, correction rules and ledger profile for a noise mode.

    Protocol I one-Pauli modes carry one |+> auxiliary per partita, the two-Pauli
    mode an extra |0>. Protocol II needs no auxiliaries except one |0> per block
    for the two-Pauli mode. Damping modes use dual-rail pairs in both protocols.
    """
    codebook = build_codebook(mode, protocol)
    unconjugation = codebook.conjugation.adjoint() if codebook.conjugation is not None else None
    coding_checks, decoy_checks, coding_pairs, decoy_pairs = (), (), (), ()
    if mode.is_pauli and protocol == 1:
        coding_checks = _pauli_checks(mode.tag, codebook.partite)
        decoy_checks = _pauli_checks(mode.tag, codebook.decoy_partite)
    elif mode.is_damping:
        coding_pairs = _dual_rail_pairs(codebook.partite)
        decoy_pairs = _dual_rail_pairs(codebook.decoy_partite)
    coding_rule = CorrectionRule(unconjugation, coding_checks, coding_pairs)
    decoy_rule = CorrectionRule(unconjugation, decoy_checks, decoy_pairs)

    first, second = coding_rule.relabelled(1), coding_rule.relabelled(2)
    block_checks = first.checks + second.checks
    if codebook.block_aux is not None:
        data = tuple(block_label(label, position) for position in (1, 2) for label in codebook.data_labels)
        block_checks += (SyndromeCheck((BLOCK_AUX_LABEL,), ('z',), BLOCK_AUX_TABLE, data),)
    block_rule = CorrectionRule(unconjugation, block_checks, first.dual_rail + second.dual_rail)

    ledger = LedgerProfile(
        qubits_per_state=codebook.qubits_per_state,
        qubits_per_decoy=codebook.qubits_per_decoy,
        qubits_per_block_aux=codebook.block_aux.num_qubits if codebook.block_aux is not None else 0,
        bits_per_symbol=codebook.bits_per_symbol,
        discard_bitmap=mode.is_damping,
    )
    logger.debug('adapted protocol %s to noise mode %s', protocol, mode.describe())
    return Adaptation(codebook, coding_rule, decoy_rule, block_rule, ledger)


def bob_correct(rule: CorrectionRule, state: StateVector, labels: Sequence[str],
                rng: np.random.Generator) -> CorrectionResult:
    """Run Bob's correction procedure on the qubits he received.

    ``labels`` are the qubits Bob holds for this unit; anything else in the joint
    state (e.g. Eve's registers) is left alone.
    """
    labels = as_labels(labels)
    missing = [label for label in rule.required_labels() if label not in labels or not state.has_label(label)]
    if missing:
        raise LabelError(f'received qubits {labels} lack {missing}')
    if rule.unconjugation is not None:
        state = apply_to_each(state, rule.unconjugation, labels)
    syndromes = []
    for check in rule.checks:
        outcome = []
        for label, basis in zip(check.aux_labels, check.aux_bases):
            index, state = measure(state, states.SINGLE_QUBIT_BASES[basis], [label], rng)
            outcome.append(index)
        outcome = tuple(outcome)
        syndromes.append(outcome)
        correction = check.corrections[outcome]
        if correction != 'I':
            state = apply_to_each(state, states.PAULIS[correction], check.targets)
    for pair in rule.dual_rail:
        state = apply_unitary(state, states.CNOT, [pair.data, pair.partner])
        index, state = measure(state, states.COMPUTATIONAL, [pair.partner], rng)
        syndromes.append((index,))
        if index == 0:
            return CorrectionResult(None, True, tuple(syndromes))
    return CorrectionResult(state, False, tuple(syndromes))

