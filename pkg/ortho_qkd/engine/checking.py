"""Public checking of a random share of the coding states and key sifting."""
from typing import Collection, List, Optional, Sequence, Tuple

import numpy as np

from ortho_qkd.codebook.codebook import CodingSymbol


def choose_checking_set(candidates: Sequence[int], fraction: float, rng: np.random.Generator) -> List[int]:
    """Bob's uniform choice, without replacement, of ``int(len * fraction)`` positions.

    At least one position is checked whenever there is a candidate.
    """
    if not candidates:
        return []
    size = max(1, int(len(candidates) * fraction))
    chosen = rng.choice(np.asarray(candidates), size=size, replace=False)
    return sorted(int(position) for position in chosen)


def checking_procedure(prepared: Sequence[CodingSymbol], outcomes: Sequence[Optional[CodingSymbol]],
                       checking_set: Collection[int]) -> Tuple[float, List[int]]:
    """Error rate over the checking positions and the positions that disagree.

    An outcome of None (no coding state decoded) counts as a mismatch.
    """
    if not checking_set:
        raise ValueError('the checking set is empty')
    mismatches = sorted(position for position in checking_set if outcomes[position] != prepared[position])
    return len(mismatches) / len(checking_set), mismatches


def sift_key(symbols: Sequence[Optional[CodingSymbol]], checking_set: Collection[int],
             bits_per_symbol: int) -> str:
    """Concatenate the bits of every unchecked position; positions holding None are skipped."""
    checked = set(checking_set)
    bits = []
    for position, symbol in enumerate(symbols):
        if position in checked or symbol is None:
            continue
        if len(symbol.bits) != bits_per_symbol:
            raise ValueError(f'symbol {symbol} does not carry {bits_per_symbol} bits')
        bits.append(symbol.bits)
    return ''.join(bits)
