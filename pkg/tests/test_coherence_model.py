# RIPE-InSAR: progressive InSAR phase estimation
# Copyright 2024 RIPE-InSAR contributors
# BSD-3 License
# See LICENSE.md for redistribution and use terms.

import unittest
from math import inf

import numpy as np
from pydantic import ValidationError


class TestTemporalCoherenceModel(unittest.TestCase):
    def test_component_validation(self):
        from ripe_insar.schema.coherence import CoherenceComponent
        stable = CoherenceComponent(amplitude=0.13, decay_time="inf")
        self.assertEqual(stable.decay_time, inf)
        self.assertTrue(stable.stable)
        self.assertFalse(CoherenceComponent(amplitude=0.1,
                                            decay_time=11).stable)
        with self.assertRaises(ValidationError):
            CoherenceComponent(amplitude=0.1, decay_time=0)
        with self.assertRaises(ValidationError):
            CoherenceComponent(amplitude=1.5, decay_time=10)

    def test_amplitude_sum(self):
        from ripe_insar.schema.coherence import CoherenceComponent, \
            TemporalCoherenceModel
        components = [CoherenceComponent(amplitude=0.5, decay_time=10),
                      CoherenceComponent(amplitude=0.2, decay_time=inf)]
        model = TemporalCoherenceModel(components=components, nugget=0.3)
        self.assertAlmostEqual(model.stable_amplitude, 0.2)
        with self.assertRaises(ValidationError) as e:
            TemporalCoherenceModel(components=components, nugget=0.2)
        self.assertIn("sum to 1", str(e.exception))

    def test_with_deformation(self):
        from ripe_insar.coherence_model import SICILY_C_BAND, get_preset
        model = get_preset(SICILY_C_BAND)
        deformed = model.with_deformation(0.01)
        self.assertEqual(deformed.components[2].phase_rate, 0.01)
        self.assertEqual(deformed.components[0], model.components[0])
        self.assertEqual(deformed.nugget, model.nugget)

    def test_timeline(self):
        from ripe_insar.schema.coherence import AcquisitionTimeline
        timeline = AcquisitionTimeline.regular(4, 6.0, start=12)
        self.assertEqual(timeline.times, [12, 18, 24, 30])
        self.assertEqual(len(timeline), 4)
        self.assertEqual(timeline.spacing, 6.0)
        self.assertEqual(AcquisitionTimeline(times=[0]).spacing, 0.0)
        with self.assertRaises(ValidationError):
            AcquisitionTimeline(times=[0, 6, 6])
        with self.assertRaises(ValidationError):
            AcquisitionTimeline(times=[])
        with self.assertRaises(ValidationError):
            AcquisitionTimeline(times=[0, inf])


class TestCoherence(unittest.TestCase):
    from ripe_insar.coherence_model import SICILY_C_BAND, get_preset
    preset = get_preset(SICILY_C_BAND)

    def test_get_preset(self):
        from ripe_insar.coherence_model import get_preset
        self.assertEqual(len(self.preset.components), 3)
        self.assertEqual(self.preset.nugget, 0.44)
        with self.assertRaises(KeyError):
            get_preset("x-band")

    def test_coherence_examples(self):
        from ripe_insar.coherence_model import coherence
        self.assertEqual(coherence(self.preset, 0), 1.0 + 0j)
        self.assertIsInstance(coherence(self.preset, 6), complex)

        far = coherence(self.preset, 1e6)
        self.assertAlmostEqual(far.real, 0.13, places=12)
        self.assertAlmostEqual(far.imag, 0.0, places=12)

        value = coherence(self.preset, 50)
        expected = 0.18 * np.exp(-50 / 11) * np.exp(1j * 0.03 * 50) + \
            0.25 * np.exp(-50 / 50) * np.exp(1j * 0.002 * 50) + 0.13
        self.assertAlmostEqual(value, expected, delta=1e-14)
        self.assertAlmostEqual(value.real, 0.2217, delta=1e-3)
        self.assertAlmostEqual(value.imag, 0.0111, delta=1e-3)

    def test_coherence_symmetry(self):
        from ripe_insar.coherence_model import coherence
        dt = np.linspace(-400, 400, 81)
        gamma = coherence(self.preset, dt)
        self.assertEqual(gamma.shape, dt.shape)
        np.testing.assert_allclose(gamma, np.conj(gamma[::-1]), atol=1e-15)
        self.assertTrue(np.all(np.abs(gamma) <= 1.0))

    def test_covariance_examples(self):
        from ripe_insar.coherence_model import coherence, covariance_matrix
        from ripe_insar.schema.coherence import AcquisitionTimeline
        single = covariance_matrix(self.preset, AcquisitionTimeline(times=[0]))
        np.testing.assert_array_equal(single, [[1.0]])

        pair = covariance_matrix(self.preset,
                                 AcquisitionTimeline(times=[0, 11]))
        np.testing.assert_array_equal(np.diag(pair), [1.0, 1.0])
        self.assertAlmostEqual(pair[0, 1], np.conj(coherence(self.preset, 11)),
                               delta=1e-15)
        self.assertEqual(pair[1, 0], np.conj(pair[0, 1]))

    def test_covariance_hermitian_psd(self):
        from ripe_insar.coherence_model import covariance_matrix
        from ripe_insar.schema.coherence import AcquisitionTimeline, \
            CoherenceComponent, TemporalCoherenceModel
        rng = np.random.default_rng(1234)
        for _ in range(100):
            count = int(rng.integers(1, 5))
            amplitudes = rng.dirichlet(np.ones(count + 1))
            components = list()
            for amplitude in amplitudes[:-1]:
                decay = inf if rng.random() < 0.3 else rng.uniform(1, 200)
                components.append(CoherenceComponent(
                    amplitude=amplitude, decay_time=decay,
                    phase_rate=rng.uniform(-0.1, 0.1)))
            nugget = 1.0 - sum(c.amplitude for c in components)
            model = TemporalCoherenceModel(components=components,
                                           nugget=max(nugget, 0.0))
            times = np.cumsum(rng.uniform(1, 20, int(rng.integers(2, 31))))
            cov = covariance_matrix(model,
                                    AcquisitionTimeline(times=times.tolist()))
            np.testing.assert_allclose(cov, cov.conj().T, rtol=0, atol=1e-14)
            np.testing.assert_array_equal(np.diag(cov), 1.0)
            self.assertGreaterEqual(np.linalg.eigvalsh(cov).min(), -1e-10)


if __name__ == '__main__':
    unittest.main()
