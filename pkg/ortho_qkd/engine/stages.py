"""Steps shared by both protocols: preparation, transmission, decoding and the final checks."""
import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ortho_qkd.adversary.attacks import AttackStrategy, hook_stage
from ortho_qkd.analysis.ledger import ResourceLedger, efficiency
from ortho_qkd.codebook.codebook import Codebook, CodingSymbol
from ortho_qkd.engine.checking import checking_procedure, choose_checking_set, sift_key
from ortho_qkd.engine.config import ProtocolConfig
from ortho_qkd.engine.transcript import RunReport, Transcript
from ortho_qkd.engine.transit import Packet, PublicRecord, Register
from ortho_qkd.errors import ProtocolFault
from ortho_qkd.noise.channel import ChannelModel, apply_channel
from ortho_qkd.noise.correction import Adaptation
from ortho_qkd.qstate.state import StateVector, measure

logger = logging.getLogger(__name__)


def prepare_symbols(codebook: Codebook, count: int, rng: np.random.Generator) -> List[CodingSymbol]:
    indices = rng.integers(len(codebook.symbols), size=count)
    return [codebook.symbols[index] for index in indices]


def make_packet(unit: int, labels: Sequence[str], data_labels: Sequence[str] = None,
                groups: Sequence[Sequence[str]] = None) -> Packet:
    labels = tuple(labels)
    data_labels = tuple(data_labels) if data_labels is not None else labels[:1]
    groups = tuple(tuple(group) for group in groups) if groups is not None else (labels,)
    return Packet(unit, labels, data_labels, groups)


def transmit(strategy: AttackStrategy, stage: int, packets: Sequence[Packet], public: PublicRecord,
             register: Register, channel: ChannelModel, transcript: Transcript,
             rng: np.random.Generator) -> List[Packet]:
    """Send one stage of packets past Eve and through the channel."""
    delivered = hook_stage(strategy, stage, packets, public, register, rng)
    for packet in delivered:
        transcript.record_stage(stage, packet.labels)
        register[packet.unit] = apply_channel(channel, register[packet.unit], packet.groups, rng)
    logger.debug('stage %s delivered %s packets', stage, len(delivered))
    return delivered


def decode_coding_state(codebook: Codebook, state: StateVector, labels: Sequence[str],
                        rng: np.random.Generator) -> Tuple[int, Optional[CodingSymbol], StateVector]:
    """Measure a coding state; outcomes outside the coding set decode to None."""
    index, state = measure(state, codebook.measurement_basis, labels, rng)
    symbol = codebook.symbols[index] if index < len(codebook.symbols) else None
    return index, symbol, state


def conclude(cfg: ProtocolConfig, adaptation: Adaptation, strategy: AttackStrategy, transcript: Transcript,
             public: PublicRecord, register: Register, order_bits: int, admin_bits: int, positions: int,
             rng: np.random.Generator) -> Tuple[RunReport, Transcript]:
    """Checking, decision, sifting and accounting once Bob has measured everything.

    ``order_bits`` is the length of r or s, ``admin_bits`` the number of one-bit
    messages of the protocol and ``positions`` the size of Bob's discard bitmap.
    """
    codebook = adaptation.codebook
    prepared = transcript.prepared_symbols
    received = transcript.bob_symbols
    discarded = set(transcript.discarded)
    survivors = [position for position in range(len(prepared)) if position not in discarded]
    if not survivors:
        raise ProtocolFault('every coding state was discarded')
    if adaptation.ledger.discard_bitmap:
        public.publish('discards', transcript.discarded)

    checking_set = choose_checking_set(survivors, cfg.checking_fraction, rng)
    transcript.checking_set = checking_set
    transcript.published_outcomes = {position: received[position] for position in checking_set}
    public.publish('checking', checking_set)
    checking_rate, mismatches = checking_procedure(prepared, received, checking_set)

    decoy_count = len(transcript.decoy_outcomes)
    decoy_errors = sum(1 for index in transcript.decoy_outcomes.values() if index != codebook.decoy_outcome)
    decoy_rate = decoy_errors / decoy_count if decoy_count else 0.0
    coding_errors = sum(1 for position in survivors if received[position] != prepared[position])

    aborted = checking_rate > cfg.error_threshold or decoy_rate > cfg.error_threshold
    public.publish('verdict', not aborted)
    if aborted:
        logger.info('run aborted: checking error %.4f, decoy error %.4f, threshold %s',
                    checking_rate, decoy_rate, cfg.error_threshold)
    else:
        masked = [symbol if received[position] is not None else None for position, symbol in enumerate(prepared)]
        transcript.alice_key = sift_key(masked, checking_set, codebook.bits_per_symbol)
        transcript.bob_key = sift_key(received, checking_set, codebook.bits_per_symbol)

    classical = order_bits + len(prepared) + codebook.bits_per_symbol * len(checking_set) + admin_bits
    if adaptation.ledger.discard_bitmap:
        classical += positions
    transcript.classical_bit_count = classical
    transcript.messages = list(public.messages)
    ledger = ResourceLedger(transcript.qubit_count, classical, len(transcript.alice_key))

    knowledge = strategy.finalize(public, register, rng)
    transcript.eve_knowledge = knowledge
    report = RunReport(
        protocol=cfg.protocol,
        n=cfg.n,
        mode=cfg.mode.describe(),
        attack=strategy.describe(),
        decoy_error_rate=decoy_rate,
        decoy_errors=decoy_errors,
        decoy_count=decoy_count,
        checking_error_rate=checking_rate,
        checking_errors=len(mismatches),
        checking_count=len(checking_set),
        coding_error_rate=coding_errors / len(survivors),
        discarded_count=len(discarded),
        aborted=aborted,
        key_bits=transcript.alice_key,
        keys_agree=transcript.alice_key == transcript.bob_key,
        ledger=ledger,
        efficiency=float(efficiency(ledger)),
        eve_information=knowledge.information(prepared),
    )
    return report, transcript
