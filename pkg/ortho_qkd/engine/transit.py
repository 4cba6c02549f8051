"""What travels between Alice and Bob, and what has been said in public."""
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Tuple

from ortho_qkd.qstate.state import StateVector


@dataclass(frozen=True)
class Packet:
    """Qubits of one unit sent together.

    ``unit`` names the joint state the qubits belong to. ``data_labels`` are the
    qubits that carry the coding state (auxiliaries and dual-rail partners excluded)
    and ``groups`` lists the qubits that share one noise draw.
    """

    unit: int
    labels: Tuple[str, ...]
    data_labels: Tuple[str, ...]
    groups: Tuple[Tuple[str, ...], ...]

    def __len__(self):
        return len(self.labels)


class Register:
    """Current joint state of every unit, Eve's attached registers included."""

    def __init__(self):
        self.states: Dict[int, StateVector] = {}

    def __getitem__(self, unit: int) -> StateVector:
        if unit not in self.states:
            raise KeyError(f'unknown unit {unit}')
        return self.states[unit]

    def __setitem__(self, unit: int, state: StateVector):
        self.states[unit] = state

    def __contains__(self, unit: int) -> bool:
        return unit in self.states

    def __len__(self):
        return len(self.states)

    def __iter__(self) -> Iterator[int]:
        return iter(self.states)


@dataclass
class PublicRecord:
    """Classical messages published so far in a run."""

    protocol: int
    n: int
    receipt: bool = False
    r_string: Optional[List[int]] = None
    s_string: Optional[List[int]] = None
    messages: List[str] = field(default_factory=list)
    _coding_index: Dict[int, int] = field(default_factory=dict, repr=False)

    def publish(self, name: str, value=None):
        if name == 'r':
            self.r_string = list(value)
            positions = [unit for unit, bit in enumerate(self.r_string) if not bit]
            self._coding_index = {unit: index for index, unit in enumerate(positions)}
        elif name == 's':
            self.s_string = list(value)
        elif name == 'receipt':
            self.receipt = True
        self.messages.append(name)

    def coding_position(self, unit: int) -> Optional[int]:
        """Index among coding states of a Protocol I unit, None for decoys.

        Only defined once r is public.
        """
        if self.r_string is None:
            raise ValueError('r has not been published yet')
        return self._coding_index.get(unit)
