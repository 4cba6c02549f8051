"""Protocol I: decoys at secret positions and two transmission stages."""
import logging
from typing import Dict, List, Tuple

import numpy as np

from ortho_qkd.adversary.attacks import AttackStrategy
from ortho_qkd.codebook.codebook import encode_symbol
from ortho_qkd.engine.config import ProtocolConfig
from ortho_qkd.engine.stages import conclude, decode_coding_state, make_packet, prepare_symbols, transmit
from ortho_qkd.engine.transcript import RunReport, Transcript
from ortho_qkd.engine.transit import PublicRecord, Register
from ortho_qkd.errors import ConfigError
from ortho_qkd.noise.channel import ChannelModel, resolve_channel
from ortho_qkd.noise.correction import adapt_protocol, bob_correct
from ortho_qkd.qstate.state import measure

logger = logging.getLogger(__name__)

ADMIN_BITS = 3


def decoy_positions(units: int, decoys: int, rng: np.random.Generator) -> List[int]:
    """The r string: ones mark decoys, every arrangement equally likely."""
    r_string = np.zeros(units, dtype=int)
    if decoys:
        r_string[rng.choice(units, size=decoys, replace=False)] = 1
    return [int(bit) for bit in r_string]


def run_protocol_one(cfg: ProtocolConfig, adv: AttackStrategy, rng: np.random.Generator) -> Tuple[RunReport, Transcript]:
    if cfg.protocol != 1:
        raise ConfigError(f'run_protocol_one needs a protocol I configuration, got protocol {cfg.protocol}')
    adv.check_protocol(1)
    adaptation = adapt_protocol(cfg.effective_mode, 1)
    codebook = adaptation.codebook
    channel = resolve_channel(ChannelModel(cfg.mode, cfg.correlated), rng)
    logger.debug('protocol I run: N=%s, mode=%s, attack=%s', cfg.n, channel.mode.describe(), adv.describe())

    symbols = prepare_symbols(codebook, cfg.num_coding_states, rng)
    r_string = decoy_positions(len(symbols) + cfg.num_decoys, cfg.num_decoys, rng)
    register = Register()
    public = PublicRecord(1, cfg.n)
    transcript = Transcript(1, symbols)

    stage_one, stage_two = [], []
    held: Dict[int, Tuple[str, ...]] = {}
    coding = iter(symbols)
    for unit, bit in enumerate(r_string):
        if bit:
            state, partite = codebook.decoy_state, codebook.decoy_partite
        else:
            state, partite = encode_symbol(codebook, next(coding)), codebook.partite
        register[unit] = state
        transcript.qubit_count += state.num_qubits
        stage_one.append(make_packet(unit, partite['B']))
        if 'A' in partite:
            stage_two.append(make_packet(unit, partite['A']))
        held[unit] = tuple(label for labels in partite.values() for label in labels)

    transmit(adv, 1, stage_one, public, register, channel, transcript, rng)
    public.publish('receipt')
    transmit(adv, 2, stage_two, public, register, channel, transcript, rng)
    public.publish('r', r_string)
    transcript.r_string = r_string

    transcript.bob_outcomes = [None] * len(symbols)
    transcript.bob_symbols = [None] * len(symbols)
    for unit, bit in enumerate(r_string):
        rule = adaptation.decoy_rule if bit else adaptation.coding_rule
        position = public.coding_position(unit)
        result = bob_correct(rule, register[unit], held[unit], rng)
        if result.discarded:
            if position is not None:
                transcript.discarded.append(position)
            continue
        if bit:
            index, state = measure(result.state, codebook.decoy_basis, codebook.decoy_targets, rng)
            transcript.decoy_outcomes[unit] = index
        else:
            index, symbol, state = decode_coding_state(codebook, result.state, codebook.data_labels, rng)
            transcript.bob_outcomes[position] = index
            transcript.bob_symbols[position] = symbol
        register[unit] = state
    public.publish('decoy-verdict')

    return conclude(cfg, adaptation, adv, transcript, public, register, order_bits=len(r_string),
                    admin_bits=ADMIN_BITS, positions=len(r_string), rng=rng)
