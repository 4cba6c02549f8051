"""Full-scale statistical checks; set ORTHO_QKD_ACCEPTANCE=1 to run them."""
import math
import os
import unittest
from typing import Callable, Dict, List

import numpy as np

from ortho_qkd.adversary.attacks import (AttackStrategy, MeasureResend, NoAttack, PurifyBlockS, PurifySingleQubit,
                                         Substitute, TwoStage)
from ortho_qkd.codebook.codebook import NoiseMode
from ortho_qkd.engine.config import ProtocolConfig
from ortho_qkd.engine.protocol_one import run_protocol_one
from ortho_qkd.engine.protocol_two import run_protocol_two
from ortho_qkd.engine.transcript import RunReport
from ortho_qkd.qstate.rng import make_rng, trial_rng

FULL_SCALE = os.environ.get('ORTHO_QKD_ACCEPTANCE', '') not in ('', '0')
RUNNERS = {1: run_protocol_one, 2: run_protocol_two}

ANGLES = np.linspace(0, 2 * np.pi, 16, endpoint=False)
PROBABILITIES = [round(0.1 * step, 1) for step in range(1, 10)]


def three_se(p: float, count: int) -> float:
    return 3 * math.sqrt(p * (1 - p) / count)


def run_many(protocol: int, runs: int, n: int, attack: Callable[[], AttackStrategy] = NoAttack,
             seed: int = 2024, **kwargs) -> List[RunReport]:
    cfg = ProtocolConfig(protocol=protocol, n=n, **kwargs)
    return [RUNNERS[protocol](cfg, attack(), trial_rng(seed, index))[0] for index in range(runs)]


def pooled(reports: List[RunReport]) -> Dict[str, float]:
    checking = sum(report.checking_count for report in reports)
    decoys = sum(report.decoy_count for report in reports)
    return {
        'checking_count': checking,
        'checking_rate': sum(report.checking_errors for report in reports) / checking,
        'decoy_count': decoys,
        'decoy_rate': sum(report.decoy_errors for report in reports) / decoys if decoys else 0.0,
    }


def noise_families() -> Dict[str, List[NoiseMode]]:
    families = {tag: [NoiseMode(tag, (angle,)) for angle in ANGLES] for tag in ('cd', 'cr')}
    for tag in ('pauli-z', 'pauli-x', 'pauli-zx', 'pd', 'ad'):
        families[tag] = [NoiseMode(tag, (p,)) for p in PROBABILITIES]
    simplex = make_rng(5).dirichlet(np.ones(4), size=100)
    families['pauli-full'] = [NoiseMode('pauli-full', tuple(weights)) for weights in simplex]
    return families


@unittest.skipUnless(FULL_SCALE, 'set ORTHO_QKD_ACCEPTANCE=1 to run the full-scale checks')
class TestCompleteness(unittest.TestCase):

    def test_noiseless_runs(self):
        for protocol in (1, 2):
            for report in run_many(protocol, 1000, 100):
                self.assertEqual(0.0, report.checking_error_rate)
                self.assertEqual(0.0, report.decoy_error_rate)
                self.assertTrue(report.keys_agree)
                self.assertFalse(report.aborted)

    def test_noise_hardening(self):
        for tag, grid in noise_families().items():
            for protocol in (1, 2):
                with self.subTest(mode=tag, protocol=protocol):
                    cfg_runs = [(grid[index % len(grid)], index) for index in range(100)]
                    for mode, index in cfg_runs:
                        cfg = ProtocolConfig(protocol=protocol, n=100, mode=mode)
                        report, _ = RUNNERS[protocol](cfg, NoAttack(), trial_rng(7, index))
                        self.assertEqual((0.0, 0.0, 0.0), (report.checking_error_rate, report.decoy_error_rate,
                                                           report.coding_error_rate), mode.describe())
                        self.assertEqual(0, report.discarded_count)
                        self.assertFalse(report.aborted)


@unittest.skipUnless(FULL_SCALE, 'set ORTHO_QKD_ACCEPTANCE=1 to run the full-scale checks')
class TestAttackRates(unittest.TestCase):
    """Pooled checking error rates over 10^5 checked coding states."""

    def test_single_qubit_purification(self):
        for protocol in (1, 2):
            for basis, expected in (('z', 0.25), ('x', 0.625)):
                with self.subTest(protocol=protocol, basis=basis):
                    reports = run_many(protocol, 20, 5000, lambda: PurifySingleQubit(basis), decoy_ratio=0.0)
                    totals = pooled(reports)
                    self.assertGreaterEqual(totals['checking_count'], 10 ** 5)
                    self.assertAlmostEqual(expected, totals['checking_rate'],
                                           delta=three_se(expected, totals['checking_count']))

    def test_block_purification(self):
        totals = pooled(run_many(2, 20, 5000, PurifyBlockS))
        self.assertGreaterEqual(totals['checking_count'], 10 ** 5)
        # two checked states of one block are correlated
        self.assertAlmostEqual(9 / 32, totals['checking_rate'], delta=three_se(9 / 32, totals['checking_count'] // 2))

    def test_substitution_and_measurement_bounds(self):
        attacks = {
            (1, 'substitute product,identity'): lambda: Substitute('product', 'identity'),
            (1, 'substitute product,matching'): lambda: Substitute('product', 'matching'),
            (1, 'substitute entangled,identity'): lambda: Substitute('entangled', 'identity'),
            (1, 'substitute entangled,matching'): lambda: Substitute('entangled', 'matching'),
            (1, 'measure-resend qubit,z'): lambda: MeasureResend('qubit', 'z'),
            (1, 'measure-resend qubit,x'): lambda: MeasureResend('qubit', 'x'),
            (2, 'substitute product'): lambda: Substitute('product'),
            (2, 'substitute entangled'): lambda: Substitute('entangled'),
            (2, 'measure-resend block'): lambda: MeasureResend('block'),
        }
        for (protocol, name), attack in attacks.items():
            with self.subTest(protocol=protocol, attack=name):
                totals = pooled(run_many(protocol, 20, 5000, attack, decoy_ratio=0.0))
                self.assertGreaterEqual(totals['checking_count'], 10 ** 5)
                self.assertGreaterEqual(totals['checking_rate'], 0.25 - 0.01)

    def test_two_stage_decoys(self):
        totals = pooled(run_many(1, 10, 5000, TwoStage))
        self.assertEqual(0.0, totals['checking_rate'])
        self.assertAlmostEqual(0.5, totals['decoy_rate'], delta=three_se(0.5, totals['decoy_count']))
        self.assertLessEqual(three_se(0.5, totals['decoy_count']), 0.01)

    def test_two_stage_without_decoys(self):
        cfg = ProtocolConfig(protocol=1, n=1000, decoy_ratio=0.0)
        for index in range(10):
            report, transcript = run_protocol_one(cfg, TwoStage(), trial_rng(3, index))
            self.assertEqual(0.0, report.checking_error_rate)
            knowledge = transcript.eve_knowledge
            for position, symbol in enumerate(transcript.prepared_symbols):
                if symbol.bits in ('00', '11'):
                    self.assertEqual(symbol, knowledge.guessed(position))
