"""Eavesdropping strategies hooked into every transmission stage.

A strategy sees the packets in transit together with the joint state of their
units and may attach her own registers (labels prefixed with ``E:``), measure, or
swap physical qubits by relabelling. Bob is always handed packets with the labels
he expects.
"""
import logging
from typing import Dict, List, Sequence, Tuple

import numpy as np

from ortho_qkd.adversary.knowledge import EveKnowledge
from ortho_qkd.codebook import states
from ortho_qkd.codebook.codebook import S_SYMBOLS, CodingSymbol
from ortho_qkd.engine.transit import Packet, PublicRecord, Register
from ortho_qkd.errors import ConfigError, ProtocolFault
from ortho_qkd.qstate.state import (OrthonormalBasis, StateVector, apply_to_each, measure, purify_isometry,
                                    relabel, tensor)

logger = logging.getLogger(__name__)

EVE_PREFIX = 'E:'
PROTOCOL_STAGES = {1: (1, 2), 2: (1,)}

ANCILLA_BASIS = OrthonormalBasis.computational(2)

# Eve's correction on her forwarded partner once she has read Alice's symbol.
SUBSTITUTE_CORRECTIONS = {
    'product': {'00': 'I', '11': 'X', '01': 'X', '10': 'X'},
    'entangled': {'00': 'X', '11': 'X', '01': 'I', '10': 'Z'},
}


def eve_label(*parts) -> str:
    return EVE_PREFIX + ':'.join(str(part) for part in parts)


def is_eve_label(label: str) -> bool:
    return label.startswith(EVE_PREFIX)


class AttackStrategy:
    """An eavesdropper that lets everything pass untouched.

    Subclasses override ``intercept`` (called once per stage with every packet of
    that stage) and ``finalize`` (called after the last public message). Memory is
    keyed by unit.
    """

    name = 'none'
    protocols: Tuple[int, ...] = (1, 2)

    def __init__(self):
        self.memory: Dict[int, dict] = {}
        self.knowledge = EveKnowledge()

    def describe(self) -> str:
        return self.name

    def __repr__(self):
        return f"{self.__class__.__name__}({self.describe()})"

    def check_protocol(self, protocol: int):
        if protocol not in self.protocols:
            raise ConfigError(f'attack {self.describe()} is not suitable for protocol {protocol}')

    def intercept(self, stage: int, packets: List[Packet], public: PublicRecord, register: Register,
                  rng: np.random.Generator) -> List[Packet]:
        return packets

    def learn(self, public: PublicRecord, register: Register, rng: np.random.Generator):
        """Turn the memory into knowledge once every message is public."""
        pass

    def finalize(self, public: PublicRecord, register: Register, rng: np.random.Generator) -> EveKnowledge:
        self.learn(public, register, rng)
        self.knowledge.complete = True
        return self.knowledge


class NoAttack(AttackStrategy):

    name = 'none'


def hook_stage(strategy: AttackStrategy, stage: int, packets: Sequence[Packet], public: PublicRecord,
               register: Register, rng: np.random.Generator) -> List[Packet]:
    """Hand the packets of one stage to the eavesdropper and check what comes back."""
    if stage not in PROTOCOL_STAGES.get(public.protocol, ()):
        raise ValueError(f'protocol {public.protocol} has no transmission stage {stage}')
    strategy.check_protocol(public.protocol)
    packets = list(packets)
    delivered = list(strategy.intercept(stage, packets, public, register, rng))
    if len(delivered) != len(packets) or delivered != packets:
        raise ProtocolFault(f'attack {strategy.describe()} delivered {len(delivered)} packets '
                            f'at stage {stage}, {len(packets)} were sent')
    for packet in delivered:
        state = register[packet.unit]
        missing = [label for label in packet.labels if not state.has_label(label)]
        if missing or any(is_eve_label(label) for label in packet.labels):
            raise ProtocolFault(f'unit {packet.unit} reaches Bob without qubits {missing or packet.labels}')
    return delivered


class PurifySingleQubit(AttackStrategy):
    """Entangle an ancilla with every data qubit in transit, in the z or x basis."""

    name = 'purify-single'

    def __init__(self, basis: str = 'z'):
        super().__init__()
        if basis not in states.SINGLE_QUBIT_BASES:
            raise ConfigError(f'single-qubit basis must be one of {tuple(states.SINGLE_QUBIT_BASES)}, got "{basis}"')
        self.basis = basis

    def describe(self) -> str:
        return f'{self.name}:{self.basis}'

    def intercept(self, stage, packets, public, register, rng):
        basis = states.SINGLE_QUBIT_BASES[self.basis]
        for packet in packets:
            state = register[packet.unit]
            for label in packet.data_labels:
                state = purify_isometry(state, basis, [label], [eve_label(label)])
            register[packet.unit] = state
            self.memory.setdefault(packet.unit, {}).setdefault('ancillas', []).extend(
                eve_label(label) for label in packet.data_labels)
        return packets


def guessed_pairs(data_labels: Sequence[str], swapped: bool) -> Tuple[Tuple[str, str], Tuple[str, str]]:
    """The two coding-state pairs of a block if its inner qubits were (not) exchanged."""
    if len(data_labels) != 4:
        raise ValueError(f'a block carries 4 data qubits, got {tuple(data_labels)}')
    first, second, third, fourth = data_labels
    if swapped:
        return (first, third), (second, fourth)
    return (first, second), (third, fourth)


def _pairs_from_memory(public: PublicRecord, unit: int, labels: Sequence[str]):
    return guessed_pairs(labels, bool(public.s_string[unit]))


class PurifyBlockS(AttackStrategy):
    """Guess each block's order and purify both guessed pairs in the basis S."""

    name = 'purify-block'
    protocols = (2,)

    def intercept(self, stage, packets, public, register, rng):
        return [purify_block_s(self, packet, register, rng) for packet in packets]

    def learn(self, public, register, rng):
        for unit, notes in self.memory.items():
            confident = notes['guess'] == public.s_string[unit]
            state = register[unit]
            for offset, ancillas in enumerate(notes['ancillas']):
                index, state = measure(state, ANCILLA_BASIS, ancillas, rng)
                self.knowledge.record(2 * unit + offset, S_SYMBOLS[index], confident)
            register[unit] = state


def purify_block_s(strategy: AttackStrategy, packet: Packet, register: Register,
                   rng: np.random.Generator) -> Packet:
    swapped = int(rng.integers(2))
    pairs = guessed_pairs(packet.data_labels, bool(swapped))
    state = register[packet.unit]
    ancillas = []
    for pair in pairs:
        ancilla = (eve_label(*pair, 0), eve_label(*pair, 1))
        state = purify_isometry(state, states.BASIS_S, pair, ancilla)
        ancillas.append(ancilla)
    register[packet.unit] = state
    strategy.memory[packet.unit] = {'guess': swapped, 'ancillas': ancillas}
    return packet


class Substitute(AttackStrategy):
    """Keep Alice's qubits and forward qubits of a pair Eve prepared herself.

    ``variant`` selects Eve's pair (|00> or a singlet), ``correction`` whether she
    adapts her forwarded qubit to the symbol she read (Protocol I only).
    """

    name = 'substitute'

    def __init__(self, variant: str = 'product', correction: str = 'identity'):
        super().__init__()
        if variant not in SUBSTITUTE_CORRECTIONS:
            raise ConfigError(f'substitute variant must be product or entangled, got "{variant}"')
        if correction not in ('identity', 'matching'):
            raise ConfigError(f'substitute correction must be identity or matching, got "{correction}"')
        self.variant = variant
        self.correction = correction

    def describe(self) -> str:
        return f'{self.name}:{self.variant},{self.correction}'

    def fresh_pair(self, first: str, second: str) -> StateVector:
        pair = states.ZZ if self.variant == 'product' else states.PHI
        return relabel(pair, {'A': first, 'B': second})

    def intercept(self, stage, packets, public, register, rng):
        return substitute_attack(self, stage, packets, public, register, rng)

    def learn(self, public, register, rng):
        if public.protocol == 1:
            for unit, notes in self.memory.items():
                position = public.coding_position(unit)
                if position is not None and 'symbol' in notes:
                    self.knowledge.record(position, notes['symbol'])
            return
        for unit, notes in self.memory.items():
            state = register[unit]
            for offset, pair in enumerate(_pairs_from_memory(public, unit, notes['kept'])):
                index, state = measure(state, states.BASIS_S, pair, rng)
                self.knowledge.record(2 * unit + offset, S_SYMBOLS[index])
            register[unit] = state


def substitute_attack(strategy: Substitute, stage: int, packets: Sequence[Packet], public: PublicRecord,
                      register: Register, rng: np.random.Generator) -> List[Packet]:
    for packet in packets:
        state = register[packet.unit]
        if public.protocol == 2:
            fresh = [eve_label('F', index) for index in range(len(packet.data_labels))]
            kept = tuple(eve_label(label) for label in packet.data_labels)
            state = tensor(tensor(state, strategy.fresh_pair(fresh[0], fresh[1])),
                           strategy.fresh_pair(fresh[2], fresh[3]))
            mapping = dict(zip(packet.data_labels, kept))
            mapping.update(zip(fresh, packet.data_labels))
            strategy.memory[packet.unit] = {'kept': kept}
        elif stage == 1:
            label = packet.data_labels[0]
            first, second = eve_label('F1'), eve_label('F2')
            state = tensor(state, strategy.fresh_pair(first, second))
            mapping = {label: eve_label(label), first: label}
            strategy.memory[packet.unit] = {'kept': eve_label(label), 'partner': second}
        else:
            notes = strategy.memory.get(packet.unit)
            if notes is None:
                continue
            label = packet.data_labels[0]
            index, state = measure(state, states.BASIS_S, [label, notes['kept']], rng)
            symbol = S_SYMBOLS[index]
            notes['symbol'] = symbol
            if strategy.correction == 'matching':
                gate = SUBSTITUTE_CORRECTIONS[strategy.variant][symbol.bits]
                state = apply_to_each(state, states.PAULIS[gate], [notes['partner']])
            mapping = {label: eve_label(label), notes['partner']: label}
        register[packet.unit] = relabel(state, mapping)
    return list(packets)


class MeasureResend(AttackStrategy):
    """Measure in transit and forward the collapsed qubits.

    ``granularity`` 'qubit' measures every data qubit in the z or x basis; 'block'
    guesses the order of a Protocol II block and measures both guessed pairs in S.
    """

    name = 'measure-resend'

    def __init__(self, granularity: str = 'qubit', basis: str = 'z'):
        super().__init__()
        if granularity not in ('qubit', 'block'):
            raise ConfigError(f'measure-resend granularity must be qubit or block, got "{granularity}"')
        if granularity == 'qubit' and basis not in states.SINGLE_QUBIT_BASES:
            raise ConfigError(f'single-qubit basis must be one of {tuple(states.SINGLE_QUBIT_BASES)}, got "{basis}"')
        self.granularity = granularity
        self.basis = basis if granularity == 'qubit' else 's'
        self.protocols = (1, 2) if granularity == 'qubit' else (2,)

    def describe(self) -> str:
        return f'{self.name}:{self.granularity},{self.basis}'

    def intercept(self, stage, packets, public, register, rng):
        return [measure_resend(self, stage, packet, register, rng) for packet in packets]

    def learn(self, public, register, rng):
        for unit, notes in self.memory.items():
            outcomes = notes.get('outcomes', {})
            if self.granularity == 'block':
                confident = notes['guess'] == public.s_string[unit]
                for offset, index in enumerate(notes['pairs']):
                    self.knowledge.record(2 * unit + offset, S_SYMBOLS[index], confident)
            elif self.basis == 'z' and public.protocol == 1:
                position = public.coding_position(unit)
                if position is not None and {'A', 'B'} <= set(outcomes):
                    guess = CodingSymbol(f"{outcomes['A']}{outcomes['B']}")
                    self.knowledge.record(position, guess, confident=False)
            elif self.basis == 'z':
                for offset, pair in enumerate(_pairs_from_memory(public, unit, notes['labels'])):
                    guess = CodingSymbol(''.join(str(outcomes[label]) for label in pair))
                    self.knowledge.record(2 * unit + offset, guess, confident=False)


def measure_resend(strategy: MeasureResend, stage: int, packet: Packet, register: Register,
                   rng: np.random.Generator) -> Packet:
    state = register[packet.unit]
    notes = strategy.memory.setdefault(packet.unit, {'outcomes': {}, 'labels': packet.data_labels})
    if strategy.granularity == 'block':
        swapped = int(rng.integers(2))
        notes['guess'] = swapped
        notes['pairs'] = []
        for pair in guessed_pairs(packet.data_labels, bool(swapped)):
            index, state = measure(state, states.BASIS_S, pair, rng)
            notes['pairs'].append(index)
    else:
        basis = states.SINGLE_QUBIT_BASES[strategy.basis]
        for label in packet.data_labels:
            index, state = measure(state, basis, [label], rng)
            notes['outcomes'][label] = index
    register[packet.unit] = state
    return packet


class TwoStage(AttackStrategy):
    """Copy B twice at the first stage, read (A, copy) in S at the second.

    Bob receives Eve's flipped second copy in place of B and Alice's B in place of
    A, corrected according to Eve's outcome. Decoys are copied but never
    corrected.
    """

    name = 'two-stage'
    protocols = (1,)

    def intercept(self, stage, packets, public, register, rng):
        return two_stage_attack(self, stage, packets, public, register, rng)

    def learn(self, public, register, rng):
        for unit, notes in self.memory.items():
            position = public.coding_position(unit)
            if position is not None and 'symbol' in notes:
                self.knowledge.record(position, notes['symbol'])


def two_stage_attack(strategy: TwoStage, stage: int, packets: Sequence[Packet], public: PublicRecord,
                     register: Register, rng: np.random.Generator) -> List[Packet]:
    if public.protocol != 1:
        raise ConfigError('the two-stage attack needs two transmission stages')
    for packet in packets:
        state = register[packet.unit]
        label = packet.data_labels[0]
        if stage == 1:
            copy, flipped = eve_label('E'), eve_label("E'")
            state = purify_isometry(state, states.COMPUTATIONAL, [label], [copy])
            state = purify_isometry(state, states.COMPUTATIONAL, [label], [flipped])
            state = apply_to_each(state, states.X, [flipped])
            state = relabel(state, {label: eve_label(label), flipped: label})
            strategy.memory[packet.unit] = {'copy': copy, 'kept': eve_label(label), 'forwarded': label}
        else:
            notes = strategy.memory.get(packet.unit)
            if notes is None:
                continue
            index, state = measure(state, states.BASIS_S, [label, notes['copy']], rng)
            name = states.S_NAMES[index]
            if name in ('00', '11'):
                notes['symbol'] = S_SYMBOLS[index]
                state = apply_to_each(state, states.X, [notes['forwarded']])
            elif name == 'phi':
                state = apply_to_each(state, states.Z, [notes['forwarded']])
            state = relabel(state, {label: eve_label(label), notes['kept']: label})
        register[packet.unit] = state
    return list(packets)


ATTACKS = {
    'none': NoAttack,
    'purify-single': PurifySingleQubit,
    'purify-block': PurifyBlockS,
    'substitute': Substitute,
    'measure-resend': MeasureResend,
    'two-stage': TwoStage,
}


def parse_attack(descriptor: str) -> AttackStrategy:
    """Build a fresh strategy from ``name[:param[,param]]``, e.g. ``substitute:entangled,matching``."""
    name, _, rest = descriptor.strip().partition(':')
    name = name.lower()
    if name not in ATTACKS:
        raise ConfigError(f'unknown attack "{name}", expected one of {tuple(ATTACKS)}')
    params = [param.strip().lower() for param in rest.split(',')] if rest else []
    if name == 'purify-single' and params:
        # 'computational' and 'hadamard' are accepted as aliases
        params = [{'computational': 'z', 'hadamard': 'x'}.get(params[0], params[0])] + params[1:]
    try:
        return ATTACKS[name](*params)
    except TypeError:
        raise ConfigError(f'attack {name} does not take parameters {params}')
