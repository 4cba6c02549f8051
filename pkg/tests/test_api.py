import unittest
from fractions import Fraction

from ortho_qkd import api


class TestApi(unittest.TestCase):

    def test_get_attack(self):
        self.assertIsInstance(api.get_attack('none'), api.NoAttack)
        self.assertIsInstance(api.get_attack('substitute', 'entangled', 'matching'), api.Substitute)
        self.assertIsInstance(api.get_attack('purify-single', 'hadamard'), api.PurifySingleQubit)

    def test_get_noise_mode(self):
        mode = api.get_noise_mode('CR', 0.3)
        self.assertEqual(('cr', (0.3,)), (mode.tag, mode.params))

    def test_run_protocol_defaults_to_no_attack(self):
        cfg = api.ProtocolConfig(protocol=2, n=20, seed=4)
        report, transcript = api.run_protocol(cfg)
        self.assertFalse(report.aborted)
        self.assertTrue(report.keys_agree)
        self.assertEqual(api.ResourceLedger(80, 102, 40), report.ledger)
        self.assertEqual(Fraction(20, 91), api.efficiency(report.ledger))

    def test_run_protocol_is_seeded(self):
        cfg = api.ProtocolConfig(protocol=1, n=20)
        first, _ = api.run_protocol(cfg, api.get_attack('two-stage'), seed=7)
        second, _ = api.run_protocol(cfg, api.get_attack('two-stage'), seed=7)
        self.assertEqual(first, second)

    def test_attack_table(self):
        self.assertEqual(18, len(api.attack_constant_table()))
