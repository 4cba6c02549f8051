"""Dense state vectors over small, labelled qubit registers.

Amplitude indices are big-endian in label order: ``labels[0]`` is the most
significant bit. For labels ``('A', 'B')`` the amplitude of ``|ab>`` is stored at
index ``2 * a + b``. Every operation returns a new value; nothing is mutated.
"""
import math
from typing import Dict, Iterable, List, Sequence, Tuple, Union

import numpy as np

from ortho_qkd import defaults
from ortho_qkd.errors import BasisError, LabelError

Labels = Union[str, Iterable[str]]

_ZERO_WEIGHT = 1e-14


def as_labels(labels: Labels) -> Tuple[str, ...]:
    if isinstance(labels, str):
        return (labels,)
    return tuple(str(label) for label in labels)


def _is_power_of_two(size: int) -> bool:
    return size > 0 and size & (size - 1) == 0


class StateVector:
    """A normalized complex amplitude vector over labelled qubits."""

    __slots__ = ('_amplitudes', '_labels')

    def __init__(self, amplitudes, labels: Labels):
        labels = as_labels(labels)
        if len(labels) == 0:
            raise LabelError('a state needs at least one qubit')
        if len(set(labels)) != len(labels):
            raise LabelError(f'duplicate qubit labels in {labels}')
        if len(labels) > defaults.MAX_QUBITS:
            raise ValueError(f'{len(labels)} qubits exceed the register limit of {defaults.MAX_QUBITS}')
        amplitudes = np.array(amplitudes, dtype=np.complex128).reshape(-1)
        if amplitudes.size != 2 ** len(labels):
            raise ValueError(f'{amplitudes.size} amplitudes do not fit {len(labels)} qubits')
        squared_norm = np.vdot(amplitudes, amplitudes).real
        if abs(squared_norm - 1.0) > defaults.NORM_TOLERANCE:
            raise ValueError(f'state is not normalized (squared norm {squared_norm})')
        amplitudes.setflags(write=False)
        self._amplitudes = amplitudes
        self._labels = labels

    @classmethod
    def normalized(cls, amplitudes, labels: Labels) -> 'StateVector':
        amplitudes = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
        norm = np.linalg.norm(amplitudes)
        if norm == 0.0:
            raise ValueError('cannot normalize the zero vector')
        return cls(amplitudes / norm, labels)

    @property
    def amplitudes(self) -> np.ndarray:
        return self._amplitudes

    @property
    def labels(self) -> Tuple[str, ...]:
        return self._labels

    @property
    def num_qubits(self) -> int:
        return len(self._labels)

    def __len__(self):
        return len(self._labels)

    def __repr__(self):
        return f"{self.__class__.__name__}(labels={self._labels}, amplitudes={np.round(self._amplitudes, 6)})"

    def has_label(self, label: str) -> bool:
        return label in self._labels

    def positions(self, labels: Labels) -> List[int]:
        labels = as_labels(labels)
        if len(set(labels)) != len(labels):
            raise LabelError(f'duplicate target labels {labels}')
        missing = [label for label in labels if label not in self._labels]
        if missing:
            raise LabelError(f'unknown qubit labels {missing}, state has {self._labels}')
        return [self._labels.index(label) for label in labels]

    def inner(self, other: 'StateVector') -> complex:
        """Return <self|other>, after bringing other into this state's label order."""
        if set(other.labels) != set(self._labels):
            raise LabelError(f'cannot compare states over {self._labels} and {other.labels}')
        if other.labels != self._labels:
            other = permute_qubits(other, self._labels)
        return complex(np.vdot(self._amplitudes, other.amplitudes))

    def fidelity(self, other: 'StateVector') -> float:
        return abs(self.inner(other)) ** 2

    def equals_up_to_phase(self, other: 'StateVector', tolerance: float = defaults.ALGEBRA_TOLERANCE) -> bool:
        return abs(abs(self.inner(other)) - 1.0) <= tolerance


def ket(bits: str, labels: Labels = None) -> StateVector:
    """Computational basis state, e.g. ``ket('01', ['A', 'B'])``."""
    if not bits or any(bit not in '01' for bit in bits):
        raise ValueError(f'invalid bit string "{bits}"')
    if labels is None:
        labels = [f'q{i}' for i in range(len(bits))]
    amplitudes = np.zeros(2 ** len(bits), dtype=np.complex128)
    amplitudes[int(bits, 2)] = 1.0
    return StateVector(amplitudes, labels)


class Unitary:
    """A unitary gate on k qubits, acting on targets in the order they are given."""

    __slots__ = ('_matrix', 'name')

    def __init__(self, matrix, name: str = 'U'):
        matrix = np.array(matrix, dtype=np.complex128)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1] or not _is_power_of_two(matrix.shape[0]):
            raise ValueError(f'gate {name} needs a square 2^k matrix, got shape {matrix.shape}')
        if matrix.shape[0] == 1:
            raise ValueError(f'gate {name} acts on no qubits')
        identity = np.eye(matrix.shape[0])
        if not np.allclose(matrix @ matrix.conj().T, identity, rtol=0.0, atol=defaults.ALGEBRA_TOLERANCE):
            raise ValueError(f'gate {name} is not unitary')
        matrix.setflags(write=False)
        self._matrix = matrix
        self.name = name

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    @property
    def arity(self) -> int:
        return int(math.log2(self._matrix.shape[0]))

    def adjoint(self) -> 'Unitary':
        return Unitary(self._matrix.conj().T, f'{self.name}^dagger')

    def __repr__(self):
        return f"{self.__class__.__name__}(name={self.name}, arity={self.arity})"


class OrthonormalBasis:
    """Named orthonormal vectors over m qubits.

    A basis that does not span the whole 2^m space must be marked partial; measuring
    in it is only allowed for states that lie inside its span.
    """

    def __init__(self, vectors: Sequence, names: Sequence[str] = None, partial: bool = False):
        rows = [vector.amplitudes if isinstance(vector, StateVector) else np.asarray(vector, dtype=np.complex128)
                for vector in vectors]
        if not rows:
            raise BasisError('a basis needs at least one vector')
        matrix = np.array(rows, dtype=np.complex128)
        size, dimension = matrix.shape
        if not _is_power_of_two(dimension) or dimension == 1:
            raise BasisError(f'basis vectors of length {dimension} do not describe qubits')
        if size > dimension:
            raise BasisError(f'{size} vectors cannot be orthonormal in dimension {dimension}')
        gram = matrix.conj() @ matrix.T
        if not np.allclose(gram, np.eye(size), rtol=0.0, atol=defaults.ALGEBRA_TOLERANCE):
            raise BasisError('basis vectors are not orthonormal')
        if size < dimension and not partial:
            raise BasisError(f'{size} vectors do not span dimension {dimension}; mark the basis as partial')
        if names is None:
            names = [str(i) for i in range(size)]
        if len(names) != size:
            raise BasisError(f'{len(names)} names for {size} basis vectors')
        matrix.setflags(write=False)
        self._matrix = matrix
        self.names = tuple(names)
        self.partial = size < dimension

    @classmethod
    def computational(cls, num_qubits: int = 1) -> 'OrthonormalBasis':
        dimension = 2 ** num_qubits
        names = [format(i, f'0{num_qubits}b') for i in range(dimension)]
        return cls(np.eye(dimension), names)

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    @property
    def dimension(self) -> int:
        return self._matrix.shape[1]

    @property
    def num_qubits(self) -> int:
        return int(math.log2(self.dimension))

    def __len__(self):
        return self._matrix.shape[0]

    def index(self, name: str) -> int:
        if name not in self.names:
            raise KeyError(f'unknown basis vector "{name}"')
        return self.names.index(name)

    def vector(self, index: int, labels: Labels) -> StateVector:
        return StateVector(self._matrix[index], labels)

    def __repr__(self):
        return f"{self.__class__.__name__}(names={self.names}, partial={self.partial})"


def _split(amplitudes: np.ndarray, labels: Tuple[str, ...], targets: Tuple[str, ...]):
    """Reshape amplitudes into a (2^m, rest) matrix with the targets as rows."""
    positions = [labels.index(target) for target in targets]
    rest = [position for position in range(len(labels)) if position not in positions]
    order = positions + rest
    tensor = amplitudes.reshape([2] * len(labels)).transpose(order)
    return tensor.reshape(2 ** len(positions), -1), order


def _merge(matrix: np.ndarray, order: List[int]) -> np.ndarray:
    tensor = matrix.reshape([2] * len(order)).transpose(np.argsort(order))
    return tensor.reshape(-1)


def _apply_matrix(amplitudes: np.ndarray, labels: Tuple[str, ...], matrix: np.ndarray,
                  targets: Tuple[str, ...]) -> np.ndarray:
    block, order = _split(amplitudes, labels, targets)
    return _merge(matrix @ block, order)


def _draw(weights: np.ndarray, rng: np.random.Generator) -> int:
    weights = np.where(weights < _ZERO_WEIGHT, 0.0, weights)
    total = weights.sum()
    if total <= 0.0:
        raise ValueError('no outcome has non-zero probability')
    if np.count_nonzero(weights) == 1:
        return int(np.flatnonzero(weights)[0])
    return int(rng.choice(len(weights), p=weights / total))


def tensor(u: StateVector, v: StateVector) -> StateVector:
    """Kronecker product with the labels of u followed by those of v."""
    clash = set(u.labels) & set(v.labels)
    if clash:
        raise LabelError(f'label collision {sorted(clash)}')
    return StateVector(np.kron(u.amplitudes, v.amplitudes), u.labels + v.labels)


def tensor_all(states: Sequence[StateVector]) -> StateVector:
    if not states:
        raise ValueError('nothing to tensor')
    joint = states[0]
    for state in states[1:]:
        joint = tensor(joint, state)
    return joint


def relabel(state: StateVector, mapping: Dict[str, str]) -> StateVector:
    """Rename qubits without touching amplitudes or order."""
    state.positions(list(mapping))
    labels = tuple(mapping.get(label, label) for label in state.labels)
    if len(set(labels)) != len(labels):
        raise LabelError(f'relabelling {mapping} produces duplicate labels {labels}')
    return StateVector(state.amplitudes, labels)


def permute_qubits(state: StateVector, order: Labels) -> StateVector:
    """Re-index amplitudes so that the label order becomes ``order``.

    The physical content is unchanged: the qubit labelled X keeps its state, only
    its position in the amplitude index moves.
    """
    order = as_labels(order)
    if len(order) != state.num_qubits or set(order) != set(state.labels):
        raise LabelError(f'{order} is not a permutation of {state.labels}')
    if order == state.labels:
        return state
    axes = state.positions(order)
    amplitudes = state.amplitudes.reshape([2] * state.num_qubits).transpose(axes).reshape(-1)
    return StateVector(amplitudes, order)


def apply_unitary(state: StateVector, unitary: Unitary, targets: Labels) -> StateVector:
    targets = as_labels(targets)
    if len(targets) != unitary.arity:
        raise ValueError(f'gate {unitary.name} acts on {unitary.arity} qubits, got targets {targets}')
    state.positions(targets)
    return StateVector(_apply_matrix(state.amplitudes, state.labels, unitary.matrix, targets), state.labels)


def apply_to_each(state: StateVector, unitary: Unitary, targets: Labels) -> StateVector:
    """Apply a single-qubit gate to every target qubit."""
    for target in as_labels(targets):
        state = apply_unitary(state, unitary, [target])
    return state


def _resolve(state: StateVector, basis: OrthonormalBasis, targets: Tuple[str, ...]):
    state.positions(targets)
    if 2 ** len(targets) != basis.dimension:
        raise BasisError(f'basis over {basis.num_qubits} qubits cannot measure targets {targets}')
    block, order = _split(state.amplitudes, state.labels, targets)
    coefficients = basis.matrix.conj() @ block
    probabilities = np.sum(np.abs(coefficients) ** 2, axis=1)
    residual = 1.0 - probabilities.sum()
    if residual > defaults.NORM_TOLERANCE:
        raise BasisError(f'partial basis leaves probability {residual:.3g} unresolved')
    return coefficients, order, np.clip(probabilities, 0.0, 1.0)


def outcome_distribution(state: StateVector, basis: OrthonormalBasis, targets: Labels) -> np.ndarray:
    """Exact outcome probabilities of measuring the targets in the basis.

    Entry i is the squared norm of the projection onto basis vector i, tensored with
    the identity on every other qubit.
    """
    _, _, probabilities = _resolve(state, basis, as_labels(targets))
    return probabilities


def measure(state: StateVector, basis: OrthonormalBasis, targets: Labels,
            rng: np.random.Generator) -> Tuple[int, StateVector]:
    coefficients, order, probabilities = _resolve(state, basis, as_labels(targets))
    outcome = _draw(probabilities, rng)
    projected = np.outer(basis.matrix[outcome], coefficients[outcome])
    return outcome, StateVector.normalized(_merge(projected, order), state.labels)


def purify_isometry(state: StateVector, basis: OrthonormalBasis, targets: Labels,
                    ancilla_labels: Labels) -> StateVector:
    """Coherently copy the basis index of the targets into a fresh ancilla register.

    Each component along basis vector |b_i> becomes |b_i>|i>. The ancillas are
    appended after the existing labels and must be exactly wide enough to hold the
    index.
    """
    targets = as_labels(targets)
    ancillas = as_labels(ancilla_labels)
    width = max(1, math.ceil(math.log2(len(basis))))
    if len(ancillas) != width:
        raise LabelError(f'a basis of {len(basis)} vectors needs {width} ancilla qubits, got {ancillas}')
    clash = set(ancillas) & set(state.labels)
    if clash or len(set(ancillas)) != len(ancillas):
        raise LabelError(f'ancilla labels {ancillas} collide with {state.labels}')
    coefficients, order, _ = _resolve(state, basis, targets)
    copied = np.zeros((basis.dimension, 2 ** width, coefficients.shape[1]), dtype=np.complex128)
    for index in range(len(basis)):
        copied[:, index, :] = np.outer(basis.matrix[index], coefficients[index])
    rest = tuple(state.labels[position] for position in order[len(targets):])
    joint = StateVector(copied.reshape(-1), targets + ancillas + rest)
    return permute_qubits(joint, state.labels + ancillas)


def check_kraus(kraus: Sequence) -> List[np.ndarray]:
    operators = [np.array(operator, dtype=np.complex128) for operator in kraus]
    if not operators:
        raise ValueError('empty Kraus set')
    if any(operator.shape != (2, 2) for operator in operators):
        raise ValueError('Kraus operators must act on a single qubit')
    completeness = sum(operator.conj().T @ operator for operator in operators)
    if not np.allclose(completeness, np.eye(2), rtol=0.0, atol=defaults.ALGEBRA_TOLERANCE):
        raise ValueError('Kraus set is not trace preserving')
    return operators


def _draw_per_qubit(amplitudes: np.ndarray, labels: Tuple[str, ...], operators: List[np.ndarray],
                    group: Tuple[str, ...], rng: np.random.Generator) -> Tuple[Tuple[int, ...], np.ndarray]:
    picks = []
    for label in group:
        branches = [_apply_matrix(amplitudes, labels, operator, (label,)) for operator in operators]
        weights = np.array([np.vdot(branch, branch).real for branch in branches])
        index = _draw(weights, rng)
        amplitudes = branches[index] / np.linalg.norm(branches[index])
        picks.append(index)
    return tuple(picks), amplitudes


def apply_kraus(state: StateVector, kraus: Sequence, target_groups: Sequence[Labels], correlated: bool,
                rng: np.random.Generator) -> Tuple[List[Tuple[int, ...]], StateVector]:
    """Sample one quantum trajectory of a single-qubit channel.

    With ``correlated`` set, one Kraus index is drawn per group and that operator is
    applied to every qubit of the group. Branch weights are the per-qubit geometric
    mean ||E_i^(x)g psi||^(2/g), renormalized over the branches; for single-qubit
    groups this is the Born rule. When every shared branch vanishes (full damping of
    a dual-rail pair) the group falls back to per-qubit draws. Otherwise each qubit
    draws its own index.

    Returns the chosen indices per group (one entry per qubit) and the renormalized
    state.
    """
    operators = check_kraus(kraus)
    groups = [as_labels(group) for group in target_groups]
    if any(len(group) == 0 for group in groups):
        raise ValueError('empty Kraus target group')
    amplitudes = state.amplitudes
    labels = state.labels
    chosen = []
    for group in groups:
        state.positions(group)
        if correlated:
            branches = []
            for operator in operators:
                branch = amplitudes
                for label in group:
                    branch = _apply_matrix(branch, labels, operator, (label,))
                branches.append(branch)
            weights = np.array([np.vdot(branch, branch).real ** (1.0 / len(group)) for branch in branches])
            if weights.max() >= _ZERO_WEIGHT:
                index = _draw(weights, rng)
                amplitudes = branches[index] / np.linalg.norm(branches[index])
                chosen.append((index,) * len(group))
                continue
        picks, amplitudes = _draw_per_qubit(amplitudes, labels, operators, group, rng)
        chosen.append(picks)
    return chosen, StateVector(amplitudes, labels)
