# RIPE-InSAR: progressive InSAR phase estimation
# Copyright 2024 RIPE-InSAR contributors
# BSD-3 License
# See LICENSE.md for redistribution and use terms.

import unittest

import numpy as np

from ripe_insar.coherence_model import PRESETS, SICILY_C_BAND, \
    covariance_matrix
from ripe_insar.schema.coherence import AcquisitionTimeline
from ripe_insar.schema.estimation import EmiConfig
from ripe_insar.simulator import SLCStack, sample_coherence, simulate_stack


def _phase_distance(a, b) -> float:
    from ripe_insar.ripe import wrap_phase
    return float(np.max(np.abs(wrap_phase(np.asarray(a) - np.asarray(b)))))


class TestEmi(unittest.TestCase):
    preset = PRESETS[SICILY_C_BAND]

    def _sample_coherence(self, epochs: int, looks: int, seed: int):
        stack = simulate_stack(self.preset,
                               AcquisitionTimeline.regular(epochs), looks,
                               seed)
        return sample_coherence(stack)

    def test_real_positive_matrix(self):
        from ripe_insar.baselines import emi_phases
        flat = self.preset.model_copy(update={"components": [
            c.model_copy(update={"phase_rate": 0.0})
            for c in self.preset.components]})
        coh = covariance_matrix(flat, AcquisitionTimeline.regular(8))
        series = emi_phases(coh)
        self.assertEqual(series.phases[0], 0.0)
        np.testing.assert_allclose(series.phases, 0.0, atol=1e-10)
        self.assertTrue(np.all(np.isnan(series.short_coherence)))

    def test_two_acquisitions(self):
        from ripe_insar.baselines import direct_interferogram_phase, \
            emi_phases
        rng = np.random.default_rng(3)
        base = rng.standard_normal(40) + 1j * rng.standard_normal(40)
        noise = rng.standard_normal(40) + 1j * rng.standard_normal(40)
        samples = np.stack([base, np.exp(0.7j) * base + 0.3 * noise])
        stack = SLCStack(samples=samples,
                         timeline=AcquisitionTimeline.regular(2))
        coh = sample_coherence(stack)
        series = emi_phases(coh)
        self.assertAlmostEqual(series.phases[1], -np.angle(coh[0, 1]),
                               delta=1e-10)
        self.assertAlmostEqual(series.phases[1],
                               direct_interferogram_phase(stack, 1, 2),
                               delta=1e-10)

    def test_conjugation(self):
        from ripe_insar.baselines import emi_phases
        coh = self._sample_coherence(12, 30, seed=4)
        self.assertLess(_phase_distance(emi_phases(coh.conj()).phases,
                                        -emi_phases(coh).phases), 1e-10)

    def test_equivariance(self):
        from ripe_insar.baselines import emi_phases
        from ripe_insar.ripe import wrap_phase
        rng = np.random.default_rng(5)
        for epochs in (2, 5, 10):
            coh = self._sample_coherence(epochs, 40,
                                         seed=int(rng.integers(1000)))
            psi = rng.uniform(-np.pi, np.pi, epochs)
            D = np.diag(np.exp(1j * psi))
            shifted = emi_phases(D @ coh @ D.conj().T).phases
            expected = wrap_phase(emi_phases(coh).phases + psi - psi[0])
            self.assertLess(_phase_distance(shifted, expected), 1e-10)

    def test_exact_covariance_bias(self):
        from ripe_insar.baselines import emi_phases
        from ripe_insar.evaluation import phase_to_displacement
        unregularized = EmiConfig(shrinkage=0.0)
        # Components with different phase ramps leave EMI a residual of
        # about a millimeter on the exact covariance
        for epochs, bound in ((5, 0.6), (50, 1.5)):
            coh = covariance_matrix(self.preset,
                                    AcquisitionTimeline.regular(epochs))
            displacement = phase_to_displacement(
                emi_phases(coh, unregularized).phases)
            self.assertLess(np.max(np.abs(displacement)), bound)

        flat = self.preset.model_copy(update={"components": [
            c.model_copy(update={"phase_rate": 0.0})
            for c in self.preset.components]})
        coh = covariance_matrix(flat, AcquisitionTimeline.regular(50))
        for config in (unregularized, EmiConfig()):
            np.testing.assert_allclose(emi_phases(coh, config).phases, 0.0,
                                       atol=1e-10)

    def test_default_regularization_with_few_looks(self):
        from ripe_insar.evaluation import run_monte_carlo
        from ripe_insar.schema.evaluation import EstimatorSettings, Method
        from ripe_insar.schema.simulation import SimulationConfig
        self.assertEqual(EmiConfig().shrinkage, 0.05)
        # More epochs than looks: the sample coherence is rank deficient
        config = SimulationConfig(model=self.preset, epochs=60, looks=50,
                                  trials=20, base_seed=3)
        regularized, = run_monte_carlo(config, [Method.EMI])
        unregularized, = run_monte_carlo(
            config, [Method.EMI],
            EstimatorSettings(emi=EmiConfig(shrinkage=0.0)))
        self.assertLess(np.mean(regularized.std_mm),
                        np.mean(unregularized.std_mm))

    def test_regularization(self):
        from ripe_insar.baselines import regularized_magnitude
        coh = np.array([[1, 0.01j], [-0.01j, 1]])
        magnitude = regularized_magnitude(coh, EmiConfig(shrinkage=0.0))
        np.testing.assert_allclose(magnitude, [[1, 0.05], [0.05, 1]])
        np.testing.assert_allclose(regularized_magnitude(coh, EmiConfig()),
                                   [[1, 0.0475], [0.0475, 1]])
        shrunk = regularized_magnitude(coh, EmiConfig(shrinkage=0.5))
        np.testing.assert_allclose(shrunk, [[1, 0.025], [0.025, 1]])

    def test_errors(self):
        from ripe_insar.baselines import emi_phases
        from ripe_insar.errors import SingularCoherenceError
        ones = np.ones((3, 3), dtype=complex)
        with self.assertRaises(SingularCoherenceError):
            emi_phases(ones, EmiConfig(shrinkage=0.0))
        np.testing.assert_allclose(emi_phases(ones).phases, 0.0, atol=1e-10)
        with self.assertRaises(ValueError):
            emi_phases(np.ones((1, 1)))
        with self.assertRaises(ValueError):
            emi_phases(np.ones((2, 3)))


class TestDirectInterferograms(unittest.TestCase):
    def _stack(self, psi, seed=0):
        rng = np.random.default_rng(seed)
        base = rng.standard_normal(10) + 1j * rng.standard_normal(10)
        return SLCStack(samples=base[None, :] * np.exp(1j * psi)[:, None],
                        timeline=AcquisitionTimeline.regular(len(psi)))

    def test_direct_phase(self):
        from ripe_insar.baselines import direct_interferogram_phase
        psi = np.array([0.2, -1.0, 2.9, 3.0])
        stack = self._stack(psi)
        self.assertAlmostEqual(direct_interferogram_phase(stack, 2, 2), 0.0,
                               delta=1e-15)
        self.assertAlmostEqual(direct_interferogram_phase(stack, 1, 3), 2.7,
                               delta=1e-12)
        self.assertAlmostEqual(direct_interferogram_phase(stack, 2, 3),
                               3.9 - 2 * np.pi, delta=1e-12)
        self.assertAlmostEqual(direct_interferogram_phase(stack, 3, 2),
                               -(3.9 - 2 * np.pi), delta=1e-12)
        with self.assertRaises(IndexError):
            direct_interferogram_phase(stack, 0, 2)
        with self.assertRaises(IndexError):
            direct_interferogram_phase(stack, 1, 5)

    def test_direct_phases(self):
        from ripe_insar.baselines import direct_phases
        psi = np.array([0.5, 0.1, -0.3])
        series = direct_phases(self._stack(psi))
        np.testing.assert_allclose(series.phases, [0.0, -0.4, -0.8],
                                   atol=1e-12)
        np.testing.assert_allclose(series.short_coherence, 1.0, atol=1e-12)
        np.testing.assert_array_equal(series.times, [0, 6, 12])


if __name__ == '__main__':
    unittest.main()
