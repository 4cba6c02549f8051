import unittest
from fractions import Fraction

import numpy as np

from ortho_qkd.analysis.attack_table import attack_constant_table, reported_error, wrong_guess_errors
from ortho_qkd.analysis.ledger import (ResourceLedger, closed_form_ledger, decoy_free_ledger, efficiency,
                                       efficiency_frame, reference_table)
from ortho_qkd.analysis.stats import aggregate, report_frame, summarize_rates
from ortho_qkd.codebook.codebook import NoiseMode
from ortho_qkd.engine.transcript import RunReport
from ortho_qkd.noise.correction import adapt_protocol
from ortho_qkd.qstate.rng import make_rng


def make_report(rate: float = 0.0, protocol: int = 1, attack: str = 'none', aborted: bool = False) -> RunReport:
    ledger = ResourceLedger(45, 68, 20)
    return RunReport(
        protocol=protocol, n=10, mode='none', attack=attack,
        decoy_error_rate=rate, decoy_errors=0, decoy_count=5,
        checking_error_rate=rate, checking_errors=0, checking_count=10,
        coding_error_rate=rate, discarded_count=0, aborted=aborted,
        key_bits='' if aborted else '01' * 10, keys_agree=True,
        ledger=ledger, efficiency=float(efficiency(ledger)),
    )


class TestEfficiency(unittest.TestCase):

    def test_examples(self):
        n = 100
        self.assertEqual(Fraction(2, 11), efficiency(ResourceLedger(Fraction(9, 4) * n, Fraction(13, 4) * n, n)))
        self.assertEqual(Fraction(2, 9), efficiency(ResourceLedger(2 * n, Fraction(5, 2) * n, n)))
        self.assertEqual(Fraction(1, 15), efficiency(ResourceLedger(4 * n, 11 * n, n)))

    def test_undefined(self):
        with self.assertRaises(ValueError):
            efficiency(ResourceLedger(0, 0, 0))

    def test_negative_counts(self):
        with self.assertRaises(ValueError):
            ResourceLedger(-1, 2, 1)

    def test_scale_invariance(self):
        ledger = ResourceLedger(9, 13, 4)
        for factor in (Fraction(1, 3), 2, 7):
            with self.subTest(factor=factor):
                self.assertEqual(efficiency(ledger), efficiency(ledger.scale(factor)))

    def test_float_counts(self):
        self.assertAlmostEqual(0.5, efficiency(ResourceLedger(1.0, 1.0, 1.0)))

    def test_reference_table(self):
        expected = {'BB84': Fraction(1, 15), 'modified BB84': Fraction(1, 7), 'protocol I': Fraction(2, 11),
                    'protocol II': Fraction(2, 9)}
        table = reference_table()
        self.assertEqual(list(expected), list(table))
        for name, value in expected.items():
            with self.subTest(name):
                self.assertEqual(value, efficiency(table[name]))


class TestClosedFormLedger(unittest.TestCase):

    def test_noiseless_protocols(self):
        one = adapt_protocol(NoiseMode(), 1).ledger
        two = adapt_protocol(NoiseMode(), 2).ledger
        for n in (10, 100, 1000):
            with self.subTest(n=n):
                self.assertEqual(ResourceLedger(Fraction(9, 2) * n, Fraction(13, 2) * n + 3, 2 * n),
                                 closed_form_ledger(1, n, one))
                self.assertEqual(ResourceLedger(4 * n, 5 * n + 2, 2 * n), closed_form_ledger(2, n, two))

    def test_decoy_free(self):
        self.assertEqual(ResourceLedger(400, 603, 200), decoy_free_ledger(100))

    def test_unknown_protocol(self):
        with self.assertRaises(ValueError):
            closed_form_ledger(3, 10, adapt_protocol(NoiseMode(), 1).ledger)

    def test_per_key_bit(self):
        ledger = ResourceLedger(400, 500, 200).per_key_bit()
        self.assertEqual(ResourceLedger(2, Fraction(5, 2), 1), ledger)
        with self.assertRaises(ValueError):
            ResourceLedger(1, 1, 0).per_key_bit()

    def test_noise_rows(self):
        frame = efficiency_frame(1000).set_index('name')
        self.assertEqual(4 + 1 + 18, len(frame))
        self.assertAlmostEqual(2.5, frame.loc['protocol I / cd', 'qubits_per_key_bit'])
        self.assertAlmostEqual(5.0, frame.loc['protocol I / cr', 'qubits_per_key_bit'])
        self.assertAlmostEqual(4.0, frame.loc['protocol II / cr', 'qubits_per_key_bit'])
        self.assertAlmostEqual(2.0, frame.loc['protocol II / none', 'qubits_per_key_bit'])
        self.assertEqual('2/11', frame.loc['protocol I', 'efficiency_exact'])
        self.assertAlmostEqual(1 / 4.5, frame.loc['protocol II', 'efficiency'])


class TestAttackTable(unittest.TestCase):

    @classmethod
    def setUpClass(cls) -> None:
        cls.table = attack_constant_table()

    def test_size(self):
        self.assertEqual(18, len(self.table))
        self.assertEqual((18, 7), self.table.frame().shape)

    def test_wrong_guess_errors(self):
        expected = {
            'b(00,00)': 0.0, 'b(11,11)': 0.0, 'b(00,11)': 0.75, 'b(11,00)': 0.75,
            'b(00,phi)': 0.5, "b(11,phi')": 0.5, 'b(phi,00)': 0.75, "b(phi',11)": 0.75,
            "b(phi',phi')": 0.625, 'b(phi,phi)': 0.625, "b(phi,phi')": 0.625,
        }
        for case, value in expected.items():
            with self.subTest(case):
                self.assertAlmostEqual(value, self.table.row(case).oracle, places=10)

    def test_reported_constants(self):
        row = self.table.row("b(phi',phi')")
        self.assertEqual(Fraction(7, 10), row.reported)
        self.assertFalse(row.match)
        self.assertTrue(self.table.row('b(phi,00)').match)
        self.assertEqual(Fraction(1, 2), reported_error('00', 'phi'))

    def test_aggregates(self):
        average = self.table.row('average')
        whole = self.table.row('whole')
        self.assertAlmostEqual(9 / 16, average.oracle, places=10)
        self.assertEqual(Fraction(9, 16), average.oracle_exact)
        self.assertAlmostEqual(9 / 32, whole.oracle, places=10)
        self.assertEqual(Fraction(93, 320), whole.reported)
        self.assertFalse(whole.match)
        self.assertEqual(Fraction(88, 160), self.table.inline_average)
        self.assertIn('93/160', self.table.note)

    def test_second_state_average(self):
        self.assertAlmostEqual(9 / 16, self.table.row('average').second_state, places=10)

    def test_symmetry(self):
        first, second = wrong_guess_errors('phi', '00')
        swapped_first, swapped_second = wrong_guess_errors('00', 'phi')
        self.assertAlmostEqual(first, swapped_second, places=10)
        self.assertAlmostEqual(second, swapped_first, places=10)

    def test_unknown_case(self):
        with self.assertRaises(KeyError):
            self.table.row('b(00,01)')


class TestStats(unittest.TestCase):

    def test_constant_series(self):
        summary = summarize_rates([0.0] * 10)
        self.assertEqual((0.0, 0.0, 10), (summary.mean, summary.half_width, summary.count))

    def test_two_values(self):
        summary = summarize_rates([0.0, 1.0])
        self.assertEqual(0.5, summary.mean)
        self.assertAlmostEqual(0.5, summary.sem)
        self.assertAlmostEqual(summary.mean - summary.half_width, summary.low)

    def test_single_value(self):
        self.assertEqual(0.0, summarize_rates([0.3]).sem)

    def test_empty(self):
        with self.assertRaises(ValueError):
            summarize_rates([])

    def test_bernoulli_mean(self):
        values = make_rng(21).binomial(1, 0.25, 10 ** 5)
        self.assertAlmostEqual(0.25, summarize_rates(values).mean, delta=0.005)

    def test_aggregate(self):
        reports = [make_report(0.0), make_report(0.5, aborted=True), make_report(1.0, aborted=True)]
        summary = aggregate(reports)
        self.assertEqual(3, summary.trials)
        self.assertEqual(2, summary.aborted)
        self.assertAlmostEqual(0.5, summary.rates['checking_error_rate'].mean)
        rates = summary.to_dict()['rates']['checking_error_rate']
        self.assertAlmostEqual(rates['mean'] + rates['half_width'], rates['high'])
        self.assertAlmostEqual(summary.rates['checking_error_rate'].low, rates['low'])

    def test_aggregate_of_concatenation(self):
        first = [make_report(0.1)] * 3
        second = [make_report(0.4)] * 1
        combined = aggregate(first + second).rates['coding_error_rate'].mean
        weighted = (3 * aggregate(first).rates['coding_error_rate'].mean
                    + aggregate(second).rates['coding_error_rate'].mean) / 4
        self.assertAlmostEqual(weighted, combined)

    def test_mixed_configurations(self):
        with self.assertRaises(ValueError):
            aggregate([make_report(attack='none'), make_report(attack='two-stage')])
        with self.assertRaises(ValueError):
            aggregate([])

    def test_report_frame(self):
        frame = report_frame([make_report(), make_report(0.2)])
        self.assertEqual([0, 1], list(frame['trial']))
        self.assertTrue(np.allclose([20, 20], frame['key_length']))
