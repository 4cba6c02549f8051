import unittest

import numpy as np

from ortho_qkd.codebook import states
from ortho_qkd.codebook.codebook import (NOISE_TAGS, CodingSymbol, NoiseMode, build_codebook, decode_outcome,
                                         encode_symbol)
from ortho_qkd.errors import ConfigError
from ortho_qkd.qstate.state import StateVector, apply_to_each, check_kraus, relabel, tensor_all

S = 1 / np.sqrt(2)

MODES = [
    NoiseMode(), NoiseMode('cd'), NoiseMode('cr'), NoiseMode('pauli-z', (0.5,)), NoiseMode('pauli-x', (0.5,)),
    NoiseMode('pauli-zx', (0.5,)), NoiseMode('pauli-full', (0.4, 0.2, 0.2, 0.2)), NoiseMode('pd', (0.5,)),
    NoiseMode('ad', (0.5,)),
]


class TestStandardStates(unittest.TestCase):

    def test_singlet_amplitudes(self):
        np.testing.assert_allclose(states.PHI.amplitudes, [0, S, -S, 0])
        np.testing.assert_allclose(states.PHI_PRIME.amplitudes, [0, S, S, 0])

    def test_rotation_matrix(self):
        theta = 0.4
        np.testing.assert_allclose(states.cr(theta).matrix,
                                   [[np.cos(theta), np.sin(theta)], [np.sin(theta), -np.cos(theta)]])

    def test_damping_kraus_sets(self):
        p = 0.3
        amplitude = states.amplitude_damping_kraus(p)
        self.assertAlmostEqual(np.sqrt(p), amplitude[1][0, 1])
        self.assertAlmostEqual(np.sqrt(1 - p), amplitude[0][1, 1])
        for kraus in (amplitude, states.phase_damping_kraus(p)):
            check_kraus(kraus)

    def test_damping_probability_range(self):
        with self.assertRaises(ValueError):
            states.phase_damping_kraus(1.5)

    def test_pauli_kraus_is_trace_preserving(self):
        check_kraus(states.pauli_kraus({'I': 0.4, 'Z': 0.2, 'X': 0.2, 'ZX': 0.2}))

    def test_standard_states_lookup(self):
        table = states.standard_states()
        self.assertIs(states.PHI, table['phi'])
        self.assertTrue(table['CD'](0.2).matrix[1, 1] != 1)

    def test_bell_states_are_locally_interchangeable(self):
        self.assertEqual('X', states.bell_local_map('phi+', 'psi+'))
        self.assertEqual('Z', states.bell_local_map('phi+', 'phi-'))
        for source in states.BELL_STATES:
            for target in states.BELL_STATES:
                with self.subTest(source=source, target=target):
                    self.assertIn(states.bell_local_map(source, target), states.PAULIS)


class TestNoiseMode(unittest.TestCase):

    def test_parse(self):
        mode = NoiseMode.parse('pauli-full:0.4,0.2,0.2,0.2')
        self.assertEqual('pauli-full', mode.tag)
        self.assertEqual((0.4, 0.2, 0.2, 0.2), mode.params)

    def test_describe_parses_back(self):
        for mode in MODES + [NoiseMode('cr', (0.7,))]:
            with self.subTest(mode.tag):
                self.assertEqual(mode, NoiseMode.parse(mode.describe()))

    def test_unknown_tag(self):
        with self.assertRaises(ConfigError):
            NoiseMode('depolarizing')

    def test_probabilities_must_sum_to_one(self):
        with self.assertRaises(ConfigError):
            NoiseMode('pauli-full', (0.5, 0.2, 0.2, 0.2))

    def test_probability_range(self):
        with self.assertRaises(ConfigError):
            NoiseMode('pd', (1.2,))

    def test_parameter_count(self):
        with self.assertRaises(ConfigError):
            NoiseMode('pauli-z')
        with self.assertRaises(ConfigError):
            NoiseMode.parse('ad:x')

    def test_pauli_weights(self):
        weights = NoiseMode('pauli-zx', (0.9,)).pauli_weights()
        self.assertEqual(['I', 'ZX'], sorted(weights))
        self.assertAlmostEqual(0.1, weights['ZX'])
        with self.assertRaises(AttributeError):
            NoiseMode('pd', (0.1,)).pauli_weights()


class TestCodingSymbol(unittest.TestCase):

    def test_invalid_bits(self):
        with self.assertRaises(ValueError):
            CodingSymbol('2')

    def test_ordering(self):
        self.assertLess(CodingSymbol('00'), CodingSymbol('11'))


class TestEncodeDecode(unittest.TestCase):

    def setUp(self) -> None:
        self.plain = build_codebook(NoiseMode())

    def test_encode_entangled_symbol(self):
        self.assertTrue(encode_symbol(self.plain, '01').equals_up_to_phase(states.PHI))
        self.assertTrue(encode_symbol(self.plain, CodingSymbol('10')).equals_up_to_phase(states.PHI_PRIME))

    def test_encode_with_auxiliaries(self):
        cb = build_codebook(NoiseMode('pauli-z', (0.3,)))
        expected = tensor_all([states.ZZ, relabel(states.PLUS, {'q': "A'"}), relabel(states.PLUS, {'q': "B'"})])
        self.assertTrue(encode_symbol(cb, '00').equals_up_to_phase(expected))

    def test_encode_dual_rail(self):
        cb = build_codebook(NoiseMode('ad', (0.3,)))
        amplitudes = np.zeros(16)
        amplitudes[int('0110', 2)] = S
        amplitudes[int('1001', 2)] = -S
        expected = StateVector(amplitudes, ['A', "A'", 'B', "B'"])
        self.assertTrue(encode_symbol(cb, '01').equals_up_to_phase(expected))

    def test_decode(self):
        self.assertEqual(CodingSymbol('11'), decode_outcome(self.plain, 1))
        self.assertEqual(CodingSymbol('10'), decode_outcome(self.plain, 3))
        self.assertEqual(CodingSymbol('1'), decode_outcome(build_codebook(NoiseMode('cr')), 1))

    def test_decode_out_of_range(self):
        with self.assertRaises(ValueError):
            decode_outcome(build_codebook(NoiseMode('cr')), 2)

    def test_symbol_outside_codebook(self):
        with self.assertRaises(ValueError):
            encode_symbol(build_codebook(NoiseMode('cr')), '00')

    def test_unknown_protocol(self):
        with self.assertRaises(ConfigError):
            build_codebook(NoiseMode(), protocol=3)


class TestCodebooks(unittest.TestCase):

    def test_coding_states_are_orthonormal(self):
        for mode in MODES:
            for protocol in (1, 2):
                with self.subTest(mode=mode.tag, protocol=protocol):
                    cb = build_codebook(mode, protocol)
                    for i, first in enumerate(cb.coding_states):
                        for j, second in enumerate(cb.coding_states):
                            expected = 1.0 if i == j else 0.0
                            self.assertAlmostEqual(expected, abs(first.inner(second)), places=10)

    def test_coding_states_read_back(self):
        for mode in MODES:
            with self.subTest(mode.tag):
                cb = build_codebook(mode)
                for index, symbol in enumerate(cb.symbols):
                    self.assertEqual(symbol, decode_outcome(cb, index))

    def test_dephasing_invariance(self):
        for phi in np.linspace(0, 2 * np.pi, 16, endpoint=False):
            for state in build_codebook(NoiseMode('cd')).coding_states:
                with self.subTest(phi=phi):
                    self.assertTrue(apply_to_each(state, states.cd(phi), states.AB).equals_up_to_phase(state))

    def test_rotation_invariance(self):
        for theta in np.linspace(0, 2 * np.pi, 16, endpoint=False):
            for state in build_codebook(NoiseMode('cr')).coding_states:
                with self.subTest(theta=theta):
                    self.assertTrue(apply_to_each(state, states.cr(theta), states.AB).equals_up_to_phase(state))

    def test_decoys(self):
        plain = build_codebook(NoiseMode())
        self.assertTrue(plain.decoy_state.equals_up_to_phase(relabel(states.PLUS, {'q': 'B'})))
        dephasing = build_codebook(NoiseMode('cd'))
        self.assertTrue(dephasing.decoy_state.equals_up_to_phase(states.PHI))
        self.assertEqual(2, dephasing.decoy_outcome)
        rotation = build_codebook(NoiseMode('cr'))
        self.assertEqual('phi', rotation.measurement_basis.names[rotation.decoy_outcome])

    def test_second_protocol_has_no_decoys(self):
        for mode in MODES:
            with self.subTest(mode.tag):
                self.assertIsNone(build_codebook(mode, 2).decoy_state)

    def test_block_auxiliary(self):
        cb = build_codebook(NoiseMode('pauli-full', (0.25, 0.25, 0.25, 0.25)), 2)
        self.assertEqual(('aux',), cb.block_aux.labels)
        self.assertIsNone(build_codebook(NoiseMode('pauli-z', (0.5,)), 2).block_aux)

    def test_sizes(self):
        expected = {'none': (2, 1, 2), 'cd': (2, 2, 2), 'cr': (2, 2, 1), 'pauli-z': (4, 2, 2),
                    'pauli-x': (4, 2, 2), 'pauli-zx': (4, 2, 2), 'pauli-full': (6, 3, 2), 'pd': (4, 2, 2),
                    'ad': (4, 2, 2)}
        for mode in MODES:
            with self.subTest(mode.tag):
                cb = build_codebook(mode)
                self.assertEqual(expected[mode.tag], (cb.qubits_per_state, cb.qubits_per_decoy, cb.bits_per_symbol))
        self.assertEqual(len(NOISE_TAGS), len(expected))
