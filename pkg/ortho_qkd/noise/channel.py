"""Channel models for collective, Pauli and damping noise."""
from dataclasses import dataclass, field
from functools import lru_cache
from typing import List, Optional, Sequence

import numpy as np

from ortho_qkd.codebook import states
from ortho_qkd.codebook.codebook import NoiseMode
from ortho_qkd.qstate.state import StateVector, Unitary, apply_kraus, apply_to_each, as_labels


@lru_cache(maxsize=256)
def _collective_gate(tag: str, angle: float) -> Unitary:
    return states.cd(angle) if tag == 'cd' else states.cr(angle)


@lru_cache(maxsize=64)
def _kraus(mode: NoiseMode) -> List[np.ndarray]:
    if mode.is_pauli:
        return states.pauli_kraus(mode.pauli_weights())
    if mode.tag == 'pd':
        return states.phase_damping_kraus(mode.probability)
    return states.amplitude_damping_kraus(mode.probability)


@dataclass(frozen=True)
class ChannelModel:
    """A noisy channel between Alice and Bob.

    Qubits sent together form a group. With ``correlated`` set every qubit of a
    group suffers the same Kraus branch; otherwise each qubit draws its own.
    Collective modes (cd, cr) apply one unitary to every qubit regardless of
    grouping.
    """

    mode: NoiseMode = field(default_factory=NoiseMode)
    correlated: bool = True

    @property
    def is_noiseless(self) -> bool:
        return self.mode.tag == 'none'

    def kraus(self) -> Optional[List[np.ndarray]]:
        if self.mode.is_pauli or self.mode.is_damping:
            return _kraus(self.mode)
        return None

    def unitary(self) -> Optional[Unitary]:
        if self.mode.tag not in ('cd', 'cr'):
            return None
        if self.mode.angle is None:
            raise ValueError(f'{self.mode.tag} channel has no angle yet, resolve it for the run first')
        return _collective_gate(self.mode.tag, self.mode.angle)


def resolve_channel(ch: ChannelModel, rng: np.random.Generator) -> ChannelModel:
    """Fix the run-level parameters of a channel.

    A cd or cr channel without an angle draws one uniformly from [0, 2pi); the
    angle is shared by every stage of the run.
    """
    if ch.mode.tag in ('cd', 'cr') and ch.mode.angle is None:
        angle = float(rng.uniform(0.0, 2 * np.pi))
        return ChannelModel(NoiseMode(ch.mode.tag, (angle,)), ch.correlated)
    return ch


def apply_channel(ch: ChannelModel, state: StateVector, groups: Sequence[Sequence[str]],
                  rng: np.random.Generator) -> StateVector:
    """Send the grouped qubits of a state through the channel."""
    groups = [as_labels(group) for group in groups]
    flat = [label for group in groups for label in group]
    if not flat or any(len(group) == 0 for group in groups) or len(set(flat)) != len(flat):
        raise ValueError(f'groups {groups} do not partition the transmitted qubits')
    state.positions(flat)
    if ch.is_noiseless:
        return state
    gate = ch.unitary()
    if gate is not None:
        return apply_to_each(state, gate, flat)
    _, state = apply_kraus(state, ch.kraus(), groups, ch.correlated, rng)
    return state
