"""Protocol II: blocks of two coding states with a secret inner order, one stage."""
import logging
from typing import List, Sequence, Tuple

import numpy as np

from ortho_qkd.adversary.attacks import AttackStrategy
from ortho_qkd.codebook.codebook import BLOCK_AUX_LABEL, Codebook, CodingSymbol, block_label, encode_symbol
from ortho_qkd.engine.config import ProtocolConfig
from ortho_qkd.engine.stages import conclude, decode_coding_state, make_packet, prepare_symbols, transmit
from ortho_qkd.engine.transcript import RunReport, Transcript
from ortho_qkd.engine.transit import PublicRecord, Register
from ortho_qkd.errors import ConfigError
from ortho_qkd.noise.channel import ChannelModel, resolve_channel
from ortho_qkd.noise.correction import adapt_protocol, bob_correct
from ortho_qkd.qstate.state import StateVector, permute_qubits, relabel, tensor_all

logger = logging.getLogger(__name__)

ADMIN_BITS = 2


def slot_labels(size: int) -> Tuple[str, ...]:
    return tuple(f'q{index}' for index in range(size))


def block_state(codebook: Codebook, symbol: CodingSymbol, position: int) -> StateVector:
    state = encode_symbol(codebook, symbol)
    return relabel(state, {label: block_label(label, position) for label in state.labels})


def physical_order(codebook: Codebook, swapped: bool) -> List[str]:
    """Labels of a block in sending order.

    Without exchange the block is sent as A1 B1 A2 B2; with exchange B1 and A2 trade
    places. The block auxiliary, if any, travels last.
    """
    parts = {(role, position): [block_label(label, position) for label in codebook.partite[role]]
             for role in ('A', 'B') for position in (1, 2)}
    sequence = [('A', 1), ('A', 2), ('B', 1), ('B', 2)] if swapped else [('A', 1), ('B', 1), ('A', 2), ('B', 2)]
    order = [label for key in sequence for label in parts[key]]
    if codebook.block_aux is not None:
        order.append(BLOCK_AUX_LABEL)
    return order


def canonical_order(codebook: Codebook) -> List[str]:
    return physical_order(codebook, swapped=False)


def transmission_groups(codebook: Codebook, order: Sequence[str], slots: Sequence[str],
                        damping: bool) -> List[List[str]]:
    """Slots of a block that share one noise draw.

    Damping acts on every partita separately, a dual-rail pair when adapted. Other
    modes treat the whole block as one group.
    """
    if not damping:
        return [list(slots)]
    slot_of = dict(zip(order, slots))
    groups = [[slot_of[block_label(label, position)] for label in codebook.partite[role]]
              for position in (1, 2) for role in ('A', 'B')]
    if codebook.block_aux is not None:
        groups.append([slot_of[BLOCK_AUX_LABEL]])
    return groups


def run_protocol_two(cfg: ProtocolConfig, adv: AttackStrategy, rng: np.random.Generator) -> Tuple[RunReport, Transcript]:
    if cfg.protocol != 2:
        raise ConfigError(f'run_protocol_two needs a protocol II configuration, got protocol {cfg.protocol}')
    adv.check_protocol(2)
    adaptation = adapt_protocol(cfg.effective_mode, 2)
    codebook = adaptation.codebook
    channel = resolve_channel(ChannelModel(cfg.mode, cfg.correlated), rng)
    logger.debug('protocol II run: N=%s, mode=%s, attack=%s', cfg.n, channel.mode.describe(), adv.describe())

    symbols = prepare_symbols(codebook, cfg.num_coding_states, rng)
    s_string = [int(bit) for bit in rng.integers(2, size=cfg.n)]
    register = Register()
    public = PublicRecord(2, cfg.n)
    transcript = Transcript(2, symbols)
    data = {block_label(label, position) for label in codebook.data_labels for position in (1, 2)}

    packets, orders = [], []
    for unit, swapped in enumerate(s_string):
        parts = [block_state(codebook, symbols[2 * unit], 1), block_state(codebook, symbols[2 * unit + 1], 2)]
        if codebook.block_aux is not None:
            parts.append(codebook.block_aux)
        order = physical_order(codebook, bool(swapped))
        slots = slot_labels(len(order))
        joint = permute_qubits(tensor_all(parts), order)
        register[unit] = relabel(joint, dict(zip(order, slots)))
        transcript.qubit_count += joint.num_qubits
        data_slots = [slot for slot, label in zip(slots, order) if label in data]
        groups = transmission_groups(codebook, order, slots, channel.mode.is_damping)
        packets.append(make_packet(unit, slots, data_slots, groups))
        orders.append(order)

    transmit(adv, 1, packets, public, register, channel, transcript, rng)
    public.publish('receipt')
    public.publish('s', s_string)
    transcript.s_string = s_string

    canonical = canonical_order(codebook)
    transcript.bob_outcomes = [None] * len(symbols)
    transcript.bob_symbols = [None] * len(symbols)
    for unit, packet in enumerate(packets):
        state = relabel(register[unit], dict(zip(packet.labels, orders[unit])))
        others = [label for label in state.labels if label not in canonical]
        state = permute_qubits(state, canonical + others)
        result = bob_correct(adaptation.block_rule, state, canonical, rng)
        if result.discarded:
            transcript.discarded.extend((2 * unit, 2 * unit + 1))
            continue
        state = result.state
        for offset, position in enumerate((1, 2)):
            labels = [block_label(label, position) for label in codebook.data_labels]
            index, symbol, state = decode_coding_state(codebook, state, labels, rng)
            transcript.bob_outcomes[2 * unit + offset] = index
            transcript.bob_symbols[2 * unit + offset] = symbol
        register[unit] = state

    return conclude(cfg, adaptation, adv, transcript, public, register, order_bits=len(s_string),
                    admin_bits=ADMIN_BITS, positions=len(symbols), rng=rng)
