from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence

from ortho_qkd.codebook.codebook import CodingSymbol


@dataclass
class EveKnowledge:
    """Eve's per-position guesses of Alice's symbols.

    Positions index the coding states in preparation order. A guess is confident
    when Eve's measurement identifies the symbol with certainty.
    """

    guesses: Dict[int, CodingSymbol] = field(default_factory=dict)
    confident: Dict[int, bool] = field(default_factory=dict)
    complete: bool = False

    def record(self, position: int, symbol: CodingSymbol, confident: bool = True):
        self.guesses[position] = symbol
        self.confident[position] = confident

    def guessed(self, position: int) -> Optional[CodingSymbol]:
        return self.guesses.get(position)

    def confident_positions(self):
        return sorted(position for position, flag in self.confident.items() if flag)

    def information(self, prepared: Sequence[CodingSymbol]) -> float:
        """Fraction of all coding positions that Eve knows with certainty and correctly."""
        if not self.complete:
            raise ValueError('Eve knowledge is only defined after the run is complete')
        if not prepared:
            return 0.0
        known = sum(1 for position in self.confident_positions()
                    if position < len(prepared) and self.guesses[position] == prepared[position])
        return known / len(prepared)
