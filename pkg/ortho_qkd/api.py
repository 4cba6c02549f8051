from ortho_qkd.adversary.attacks import (AttackStrategy, MeasureResend, NoAttack, PurifyBlockS, PurifySingleQubit,
                                        Substitute, TwoStage, parse_attack)
from ortho_qkd.adversary.knowledge import EveKnowledge
from ortho_qkd.analysis.attack_table import AttackTable, attack_constant_table
from ortho_qkd.analysis.ledger import ResourceLedger, efficiency, reference_table
from ortho_qkd.analysis.stats import aggregate
from ortho_qkd.codebook.codebook import Codebook, CodingSymbol, NoiseMode, build_codebook, decode_outcome, encode_symbol
from ortho_qkd.engine.config import ProtocolConfig
from ortho_qkd.engine.protocol_one import run_protocol_one
from ortho_qkd.engine.protocol_two import run_protocol_two
from ortho_qkd.engine.transcript import RunReport, Transcript
from ortho_qkd.noise.channel import ChannelModel
from ortho_qkd.noise.correction import adapt_protocol
from ortho_qkd.qstate.rng import make_rng
from ortho_qkd.qstate.state import OrthonormalBasis, StateVector, Unitary


def get_attack(name: str, *params: str) -> AttackStrategy:
    """Create a fresh attack strategy.

    Arguments:
        name (str): one of 'none', 'purify-single', 'purify-block', 'substitute',
            'measure-resend' or 'two-stage'
        params (str): the strategy's parameters, e.g. 'entangled', 'matching'

    Returns:
        strategy (AttackStrategy): a strategy with empty memory
    """
    descriptor = f'{name}:{",".join(params)}' if params else name
    return parse_attack(descriptor)


def get_noise_mode(tag: str, *params: float) -> NoiseMode:
    return NoiseMode(tag, tuple(params))


def run_protocol(cfg: ProtocolConfig, adv: AttackStrategy = None, seed: int = None):
    """Run either protocol with a fresh generator seeded from ``seed`` (or ``cfg.seed``)."""
    rng = make_rng(seed if seed is not None else cfg.seed)
    adv = adv if adv is not None else NoAttack()
    if cfg.protocol == 1:
        return run_protocol_one(cfg, adv, rng)
    return run_protocol_two(cfg, adv, rng)


__all__ = [
    'AttackStrategy', 'NoAttack', 'PurifySingleQubit', 'PurifyBlockS', 'Substitute', 'MeasureResend', 'TwoStage',
    'EveKnowledge', 'AttackTable', 'attack_constant_table', 'ResourceLedger', 'efficiency', 'reference_table',
    'aggregate', 'Codebook', 'CodingSymbol', 'NoiseMode', 'build_codebook', 'encode_symbol', 'decode_outcome',
    'ProtocolConfig', 'run_protocol_one', 'run_protocol_two', 'RunReport', 'Transcript', 'ChannelModel',
    'adapt_protocol', 'OrthonormalBasis', 'StateVector', 'Unitary', 'get_attack', 'get_noise_mode', 'run_protocol',
]
