from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional, Tuple

from ortho_qkd.adversary.knowledge import EveKnowledge
from ortho_qkd.analysis.ledger import ResourceLedger
from ortho_qkd.codebook.codebook import CodingSymbol


@dataclass
class Transcript:
    """Ordered record of what happened during one run."""

    protocol: int
    prepared_symbols: List[CodingSymbol]
    r_string: Optional[List[int]] = None
    s_string: Optional[List[int]] = None
    stages: Dict[int, List[Tuple[str, ...]]] = field(default_factory=dict)
    messages: List[str] = field(default_factory=list)
    bob_outcomes: List[Optional[int]] = field(default_factory=list)
    bob_symbols: List[Optional[CodingSymbol]] = field(default_factory=list)
    decoy_outcomes: Dict[int, int] = field(default_factory=dict)
    discarded: List[int] = field(default_factory=list)
    checking_set: List[int] = field(default_factory=list)
    published_outcomes: Dict[int, Optional[CodingSymbol]] = field(default_factory=dict)
    qubit_count: int = 0
    classical_bit_count: int = 0
    alice_key: str = ''
    bob_key: str = ''
    eve_knowledge: Optional[EveKnowledge] = None

    def __repr__(self):
        return (f"{self.__class__.__name__}(protocol={self.protocol}, states={len(self.prepared_symbols)}, "
                f"checking={len(self.checking_set)}, qubits={self.qubit_count}, "
                f"classical_bits={self.classical_bit_count})")

    def record_stage(self, stage: int, labels: Tuple[str, ...]):
        self.stages.setdefault(stage, []).append(labels)


@dataclass
class RunReport:
    """Outcome of a run as Alice and Bob see it, plus a few diagnostics.

    ``coding_error_rate`` scores every decoded coding state, published or not, and
    ``eve_information`` is the share of coding states whose symbol Eve knows with
    certainty.
    """

    protocol: int
    n: int
    mode: str
    attack: str
    decoy_error_rate: float
    decoy_errors: int
    decoy_count: int
    checking_error_rate: float
    checking_errors: int
    checking_count: int
    coding_error_rate: float
    discarded_count: int
    aborted: bool
    key_bits: str
    keys_agree: bool
    ledger: ResourceLedger
    efficiency: float
    eve_information: float = 0.0

    def to_dict(self) -> Dict[str, any]:
        return asdict(self)
