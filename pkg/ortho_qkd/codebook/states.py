"""Named states, gates, bases and Kraus sets.

Two-qubit states are labelled ('A', 'B'); single-qubit states are labelled 'q'.
Relabel them with ``qstate.state.relabel`` before combining.
"""
from typing import Dict, List

import numpy as np

from ortho_qkd.qstate.state import OrthonormalBasis, StateVector, Unitary, apply_unitary, ket

SQRT_HALF = 1 / np.sqrt(2)
AB = ('A', 'B')

ZERO = ket('0', ['q'])
ONE = ket('1', ['q'])
PLUS = StateVector([SQRT_HALF, SQRT_HALF], ['q'])
MINUS = StateVector([SQRT_HALF, -SQRT_HALF], ['q'])

# coding set S
ZZ = ket('00', AB)
OO = ket('11', AB)
PHI = StateVector([0, SQRT_HALF, -SQRT_HALF, 0], AB)
PHI_PRIME = StateVector([0, SQRT_HALF, SQRT_HALF, 0], AB)
# second member of S'
PHI_DOUBLE_PRIME = StateVector([SQRT_HALF, 0, 0, SQRT_HALF], AB)

BELL_STATES = {
    'phi+': StateVector([SQRT_HALF, 0, 0, SQRT_HALF], AB),
    'phi-': StateVector([SQRT_HALF, 0, 0, -SQRT_HALF], AB),
    'psi+': StateVector([0, SQRT_HALF, SQRT_HALF, 0], AB),
    'psi-': StateVector([0, SQRT_HALF, -SQRT_HALF, 0], AB),
}

I = Unitary(np.eye(2), 'I')
Z = Unitary([[1, 0], [0, -1]], 'Z')
X = Unitary([[0, 1], [1, 0]], 'X')
# ZX = Z.X, the third Pauli error of the two-Pauli channel
ZX = Unitary([[0, 1], [-1, 0]], 'ZX')
# XZ = X.Z, Bob's correction for a ZX error
XZ = Unitary([[0, -1], [1, 0]], 'XZ')
H = Unitary(SQRT_HALF * np.array([[1, 1], [1, -1]]), 'H')
H_PRIME = Unitary(SQRT_HALF * np.array([[1, 1], [1j, -1j]]), "H'")
CNOT = Unitary([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], 'CNOT')

PAULIS = {'I': I, 'Z': Z, 'X': X, 'ZX': ZX, 'XZ': XZ}

COMPUTATIONAL = OrthonormalBasis([ZERO, ONE], ['0', '1'])
HADAMARD = OrthonormalBasis([PLUS, MINUS], ['+', '-'])
SINGLE_QUBIT_BASES = {'z': COMPUTATIONAL, 'x': HADAMARD}

S_NAMES = ('00', '11', 'phi', "phi'")
BASIS_S = OrthonormalBasis([ZZ, OO, PHI, PHI_PRIME], S_NAMES)
BASIS_S_PRIME = OrthonormalBasis([PHI, PHI_DOUBLE_PRIME], ['phi', "phi''"], partial=True)
# S' completed with the two states no S' codebook ever sends
BASIS_S_PRIME_COMPLETE = OrthonormalBasis([PHI, PHI_DOUBLE_PRIME, PHI_PRIME, BELL_STATES['phi-']],
                                          ['phi', "phi''", "phi'", 'phi-'])
BELL_BASIS = OrthonormalBasis(list(BELL_STATES.values()), list(BELL_STATES))


def cd(phi: float) -> Unitary:
    """Collective dephasing, diag(1, e^{i phi})."""
    return Unitary(np.diag([1.0, np.exp(1j * phi)]), f'CD({phi:.4g})')


def cr(theta: float) -> Unitary:
    """Collective rotation, a real reflection with determinant -1."""
    cos, sin = np.cos(theta), np.sin(theta)
    return Unitary([[cos, sin], [sin, -cos]], f'CR({theta:.4g})')


def phase_damping_kraus(p: float) -> List[np.ndarray]:
    _check_probability(p)
    return [np.sqrt(1 - p) * np.eye(2),
            np.diag([np.sqrt(p), 0.0]),
            np.diag([0.0, np.sqrt(p)])]


def amplitude_damping_kraus(p: float) -> List[np.ndarray]:
    _check_probability(p)
    return [np.diag([1.0, np.sqrt(1 - p)]),
            np.array([[0.0, np.sqrt(p)], [0.0, 0.0]])]


def pauli_kraus(weights: Dict[str, float]) -> List[np.ndarray]:
    """Kraus set sqrt(p_P) * P for a Pauli channel given as {name: probability}."""
    for p in weights.values():
        _check_probability(p)
    return [np.sqrt(p) * PAULIS[name].matrix for name, p in weights.items()]


def _check_probability(p: float):
    if not 0.0 <= p <= 1.0:
        raise ValueError(f'probability {p} outside [0, 1]')


def standard_states() -> Dict[str, object]:
    return {
        '00': ZZ, '11': OO, 'phi': PHI, "phi'": PHI_PRIME, "phi''": PHI_DOUBLE_PRIME,
        '0': ZERO, '1': ONE, '+': PLUS, '-': MINUS,
        **BELL_STATES,
        'I': I, 'Z': Z, 'X': X, 'ZX': ZX, 'XZ': XZ, 'H': H, "H'": H_PRIME, 'CNOT': CNOT,
        'CD': cd, 'CR': cr,
        'PD': phase_damping_kraus, 'AD': amplitude_damping_kraus,
    }


def bell_local_map(source: str, target: str) -> str:
    """Name of the Pauli on qubit A that turns Bell state source into target.

    Any Bell state reaches any other by a local Pauli, which is why Bell states
    cannot serve as a private coding set.
    """
    for name in ('I', 'Z', 'X', 'XZ'):
        mapped = apply_unitary(BELL_STATES[source], PAULIS[name], ['A'])
        if mapped.equals_up_to_phase(BELL_STATES[target]):
            return name
    raise ValueError(f'no local Pauli maps {source} to {target}')
