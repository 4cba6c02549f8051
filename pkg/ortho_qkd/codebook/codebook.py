import math
from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence, Tuple, Union

from ortho_qkd.codebook import states
from ortho_qkd.errors import ConfigError
from ortho_qkd.qstate.state import (OrthonormalBasis, StateVector, Unitary, apply_to_each, apply_unitary,
                                    permute_qubits, relabel, tensor_all)

NOISE_TAGS = ('none', 'cd', 'cr', 'pauli-z', 'pauli-x', 'pauli-zx', 'pauli-full', 'pd', 'ad')
ONE_PAULI_ERRORS = {'pauli-z': 'Z', 'pauli-x': 'X', 'pauli-zx': 'ZX'}
FULL_PAULI_ERRORS = ('I', 'Z', 'X', 'ZX')
BLOCK_AUX_LABEL = 'aux'


@dataclass(frozen=True)
class NoiseMode:
    """A channel family with its parameters.

    cd and cr take an optional angle (drawn per run when absent), the one-Pauli
    modes take the probability of no error, pauli-full takes (p_I, p_Z, p_X, p_ZX)
    and pd/ad take the damping probability p.
    """

    tag: str = 'none'
    params: Tuple[float, ...] = ()

    def __post_init__(self):
        tag = str(self.tag).lower()
        params = tuple(float(param) for param in self.params)
        object.__setattr__(self, 'tag', tag)
        object.__setattr__(self, 'params', params)
        if tag not in NOISE_TAGS:
            raise ConfigError(f'unknown noise mode "{tag}", expected one of {NOISE_TAGS}')
        if tag == 'none':
            expected = (0,)
        elif tag in ('cd', 'cr'):
            expected = (0, 1)
        elif tag == 'pauli-full':
            expected = (4,)
        else:
            expected = (1,)
        if len(params) not in expected:
            raise ConfigError(f'noise mode {tag} takes {" or ".join(map(str, expected))} parameters, got {params}')
        if tag in ('cd', 'cr'):
            return
        if any(not 0.0 <= p <= 1.0 for p in params):
            raise ConfigError(f'probabilities of {tag} must lie in [0, 1], got {params}')
        if tag == 'pauli-full' and abs(sum(params) - 1.0) > 1e-9:
            raise ConfigError(f'pauli-full probabilities must sum to 1, got {params}')

    @classmethod
    def parse(cls, text: str) -> 'NoiseMode':
        """Parse ``mode[:p1[,p2...]]``, e.g. ``pauli-full:0.4,0.2,0.2,0.2``."""
        tag, _, rest = text.strip().partition(':')
        try:
            params = tuple(float(value) for value in rest.split(',')) if rest else ()
        except ValueError:
            raise ConfigError(f'invalid noise parameters in "{text}"')
        return cls(tag, params)

    def describe(self) -> str:
        if not self.params:
            return self.tag
        return f'{self.tag}:' + ','.join(repr(param) for param in self.params)

    @property
    def angle(self) -> Optional[float]:
        if self.tag in ('cd', 'cr') and self.params:
            return self.params[0]
        return None

    @property
    def probability(self) -> float:
        if self.tag in ONE_PAULI_ERRORS or self.is_damping:
            return self.params[0]
        raise AttributeError(f'noise mode {self.tag} has no single probability')

    @property
    def is_damping(self) -> bool:
        return self.tag in ('pd', 'ad')

    @property
    def is_pauli(self) -> bool:
        return self.tag.startswith('pauli')

    def pauli_weights(self) -> Dict[str, float]:
        if self.tag in ONE_PAULI_ERRORS:
            p = self.params[0]
            return {'I': p, ONE_PAULI_ERRORS[self.tag]: 1.0 - p}
        if self.tag == 'pauli-full':
            return dict(zip(FULL_PAULI_ERRORS, self.params))
        raise AttributeError(f'noise mode {self.tag} is not a Pauli channel')


@dataclass(frozen=True, order=True)
class CodingSymbol:

    bits: str

    def __post_init__(self):
        if self.bits not in ('00', '11', '01', '10', '0', '1'):
            raise ValueError(f'invalid coding symbol "{self.bits}"')

    def __str__(self):
        return self.bits


S_SYMBOLS = tuple(CodingSymbol(bits) for bits in ('00', '11', '01', '10'))
S_PRIME_SYMBOLS = (CodingSymbol('0'), CodingSymbol('1'))


@dataclass(frozen=True, eq=False)
class Codebook:
    """Everything Alice and Bob need to prepare and read one noise mode.

    ``partite`` maps each party role to the labels that travel together (data qubit
    first, then its auxiliaries or dual-rail partner). Coding states carry the data
    labels ('A', 'B'); Bob reads them in ``measurement_basis``, which equals the
    coding basis unless that basis is partial.
    """

    mode: NoiseMode
    protocol: int
    coding_basis: OrthonormalBasis
    measurement_basis: OrthonormalBasis
    symbols: Tuple[CodingSymbol, ...]
    coding_states: Tuple[StateVector, ...]
    partite: Dict[str, Tuple[str, ...]]
    data_labels: Tuple[str, ...] = states.AB
    decoy_state: Optional[StateVector] = None
    decoy_partite: Dict[str, Tuple[str, ...]] = field(default_factory=dict)
    decoy_basis: Optional[OrthonormalBasis] = None
    decoy_targets: Tuple[str, ...] = ()
    decoy_outcome: int = 0
    block_aux: Optional[StateVector] = None
    conjugation: Optional[Unitary] = None

    @property
    def bits_per_symbol(self) -> int:
        return int(math.log2(len(self.symbols)))

    @property
    def qubits_per_state(self) -> int:
        return self.coding_states[0].num_qubits

    @property
    def qubits_per_decoy(self) -> int:
        return self.decoy_state.num_qubits if self.decoy_state is not None else 0


def block_label(label: str, position: int) -> str:
    """Label of a qubit of the first (1) or second (2) state of a Protocol II block."""
    return f'{label}{position}'


def _single(state: StateVector, label: str) -> StateVector:
    return relabel(state, {state.labels[0]: label})


def _dual_rail(state: StateVector, data_labels: Sequence[str]) -> StateVector:
    """Encode each data qubit X as the pair (X, X') in {|01>, |10>}."""
    partners = [f"{label}'" for label in data_labels]
    encoded = tensor_all([state] + [_single(states.ONE, partner) for partner in partners])
    for label, partner in zip(data_labels, partners):
        encoded = apply_unitary(encoded, states.CNOT, [label, partner])
    order = [label for pair in zip(data_labels, partners) for label in pair]
    extra = [label for label in encoded.labels if label not in order]
    return permute_qubits(encoded, order + extra)


def _conjugate(state: Optional[StateVector], conjugation: Optional[Unitary]) -> Optional[StateVector]:
    if state is None or conjugation is None:
        return state
    return apply_to_each(state, conjugation, state.labels)


def build_codebook(mode: NoiseMode, protocol: int = 1) -> Codebook:
    """Build the coding set, decoys and auxiliaries of a noise mode for one protocol."""
    if protocol not in (1, 2):
        raise ConfigError(f'unknown protocol {protocol}')
    tag = mode.tag
    if tag == 'cr':
        coding_basis = states.BASIS_S_PRIME
        measurement_basis = states.BASIS_S_PRIME_COMPLETE
        symbols = S_PRIME_SYMBOLS
        data_states = [states.PHI, states.PHI_DOUBLE_PRIME]
    else:
        coding_basis = measurement_basis = states.BASIS_S
        symbols = S_SYMBOLS
        data_states = [states.ZZ, states.OO, states.PHI, states.PHI_PRIME]

    partite = {'A': ('A',), 'B': ('B',)}
    decoy_state = None
    decoy_partite = {}
    decoy_basis = None
    decoy_targets = ()
    decoy_outcome = 0
    block_aux = None
    conjugation = {'pauli-x': states.H, 'pauli-zx': states.H_PRIME}.get(tag)
    plus_b = _single(states.PLUS, 'B')

    if tag in ('none', 'cd', 'cr'):
        coding_states = data_states
        if tag == 'none':
            decoy_state, decoy_partite = plus_b, {'B': ('B',)}
            decoy_basis, decoy_targets = states.HADAMARD, ('B',)
        else:
            decoy_state, decoy_partite = states.PHI, {'A': ('A',), 'B': ('B',)}
            decoy_basis, decoy_targets = measurement_basis, states.AB
            decoy_outcome = measurement_basis.index('phi')
    elif mode.is_pauli and protocol == 2:
        coding_states = data_states
        if tag == 'pauli-full':
            block_aux = _single(states.ZERO, BLOCK_AUX_LABEL)
    elif mode.is_pauli:
        aux = [_single(states.PLUS, "A'"), _single(states.PLUS, "B'")]
        decoy_aux = [_single(states.PLUS, "B'")]
        if tag == 'pauli-full':
            aux += [_single(states.ZERO, "A''"), _single(states.ZERO, "B''")]
            decoy_aux += [_single(states.ZERO, "B''")]
            partite = {'A': ('A', "A'", "A''"), 'B': ('B', "B'", "B''")}
        else:
            partite = {'A': ('A', "A'"), 'B': ('B', "B'")}
        coding_states = [tensor_all([state] + aux) for state in data_states]
        decoy_state = tensor_all([plus_b] + decoy_aux)
        decoy_partite = {'B': partite['B']}
        decoy_basis, decoy_targets = states.HADAMARD, ('B',)
    elif mode.is_damping:
        coding_states = [_dual_rail(state, states.AB) for state in data_states]
        partite = {'A': ('A', "A'"), 'B': ('B', "B'")}
        decoy_state = _dual_rail(plus_b, ['B'])
        decoy_partite = {'B': ('B', "B'")}
        decoy_basis, decoy_targets = states.HADAMARD, ('B',)
    else:
        raise ConfigError(f'noise mode {tag} has no codebook')

    if protocol == 2:
        decoy_state, decoy_partite, decoy_basis, decoy_targets = None, {}, None, ()
    return Codebook(
        mode=mode,
        protocol=protocol,
        coding_basis=coding_basis,
        measurement_basis=measurement_basis,
        symbols=symbols,
        coding_states=tuple(_conjugate(state, conjugation) for state in coding_states),
        partite=partite,
        decoy_state=_conjugate(decoy_state, conjugation),
        decoy_partite=decoy_partite,
        decoy_basis=decoy_basis,
        decoy_targets=decoy_targets,
        decoy_outcome=decoy_outcome,
        block_aux=_conjugate(block_aux, conjugation),
        conjugation=conjugation,
    )


def encode_symbol(cb: Codebook, sym: Union[CodingSymbol, str]) -> StateVector:
    if isinstance(sym, str):
        sym = CodingSymbol(sym)
    if sym not in cb.symbols:
        raise ValueError(f'symbol {sym} is not used by noise mode {cb.mode.tag}')
    return cb.coding_states[cb.symbols.index(sym)]


def decode_outcome(cb: Codebook, outcome: int) -> CodingSymbol:
    if not 0 <= outcome < len(cb.symbols):
        raise ValueError(f'outcome {outcome} does not index a coding state of noise mode {cb.mode.tag}')
    return cb.symbols[outcome]
