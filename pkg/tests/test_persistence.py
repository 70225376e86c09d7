# RIPE-InSAR: progressive InSAR phase estimation
# Copyright 2024 RIPE-InSAR contributors
# BSD-3 License
# See LICENSE.md for redistribution and use terms.

import struct
import unittest

from os.path import join
from tempfile import TemporaryDirectory

import numpy as np

from ripe_insar.schema.coherence import AcquisitionTimeline
from ripe_insar.schema.estimation import RipeConfig
from ripe_insar.simulator import SLCStack


def _stack(epochs: int = 4, looks: int = 3) -> SLCStack:
    rng = np.random.default_rng(0)
    samples = rng.standard_normal((epochs, looks)) + \
        1j * rng.standard_normal((epochs, looks))
    return SLCStack(samples=samples,
                    timeline=AcquisitionTimeline.regular(epochs, 12.0, 3.0))


class TestStackFormat(unittest.TestCase):
    def test_encode_decode(self):
        from ripe_insar.persistence import STACK_HEADER, decode_stack, \
            encode_stack
        stack = _stack()
        data = encode_stack(stack)
        self.assertEqual(len(data), STACK_HEADER.size + 4 * 8 + 12 * 16)
        self.assertEqual(data[:8], b"RIPESTK1")
        self.assertEqual(struct.unpack_from("<II", data, 8), (4, 3))
        decoded = decode_stack(data)
        np.testing.assert_array_equal(decoded.samples, stack.samples)
        self.assertEqual(decoded.timeline, stack.timeline)

    def test_format_errors(self):
        from ripe_insar.errors import StackFormatError
        from ripe_insar.persistence import STACK_HEADER, decode_stack, \
            encode_stack
        data = encode_stack(_stack())

        with self.assertRaises(StackFormatError) as e:
            decode_stack(b"NOTASTAK" + data[8:])
        self.assertEqual(e.exception.offset, 0)
        self.assertIn("byte offset 0", str(e.exception))

        with self.assertRaises(StackFormatError) as e:
            decode_stack(data[:-5])
        self.assertEqual(e.exception.offset, len(data) - 5)

        with self.assertRaises(StackFormatError) as e:
            decode_stack(data + b"\x00")
        self.assertEqual(e.exception.offset, len(data))

        with self.assertRaises(StackFormatError) as e:
            decode_stack(data[:6])
        self.assertEqual(e.exception.offset, 6)

        sample_start = STACK_HEADER.size + 4 * 8
        corrupt = bytearray(data)
        corrupt[sample_start + 5 * 16:sample_start + 5 * 16 + 8] = \
            struct.pack("<d", float("nan"))
        with self.assertRaises(StackFormatError) as e:
            decode_stack(bytes(corrupt))
        self.assertEqual(e.exception.offset, sample_start + 5 * 16)

        unordered = bytearray(data)
        unordered[STACK_HEADER.size:STACK_HEADER.size + 8] = \
            struct.pack("<d", 100.0)
        with self.assertRaises(StackFormatError) as e:
            decode_stack(bytes(unordered))
        self.assertEqual(e.exception.offset, STACK_HEADER.size)

    def test_files(self):
        from ripe_insar.persistence import read_stack, write_stack
        stack = _stack()
        with TemporaryDirectory() as tmp:
            path = join(tmp, "nested", "stack.bin")
            write_stack(path, stack)
            np.testing.assert_array_equal(read_stack(path).samples,
                                          stack.samples)


class TestStateFormat(unittest.TestCase):
    config = RipeConfig(beta=0.6)

    def _state(self):
        from ripe_insar.ripe import ripe_init, ripe_step
        stack = _stack(5, 6)
        state = ripe_init(stack.samples[0], self.config)
        for y in stack.samples[1:]:
            state, *_ = ripe_step(state, y, self.config)
        return state

    def test_resume_exact(self):
        from ripe_insar.persistence import decode_state, encode_state
        state = self._state()
        restored, last_time = decode_state(
            encode_state(state, self.config, 51.0), self.config)
        self.assertEqual(last_time, 51.0)
        self.assertEqual(restored.epoch, 5)
        np.testing.assert_array_equal(restored.z, state.z)
        np.testing.assert_array_equal(restored.s, state.s)
        self.assertEqual(restored.z_gain, state.z_gain)

    def test_config_mismatch(self):
        from ripe_insar.errors import StateFormatError
        from ripe_insar.persistence import decode_state, encode_state
        data = encode_state(self._state(), self.config)
        with self.assertRaises(StateFormatError):
            decode_state(data, RipeConfig(beta=0.5))
        with self.assertRaises(StateFormatError):
            decode_state(data, self.config.model_copy(
                update={"calibrate": False}))

    def test_malformed(self):
        from ripe_insar.errors import StateFormatError
        from ripe_insar.persistence import decode_state, encode_state
        data = encode_state(self._state(), self.config)
        with self.assertRaises(StateFormatError):
            decode_state(data[:10], self.config)
        with self.assertRaises(StateFormatError):
            decode_state(b"X" + data[1:], self.config)
        with self.assertRaises(StateFormatError):
            decode_state(data[:-16], self.config)
        bad_version = data[:8] + struct.pack("<H", 9) + data[10:]
        with self.assertRaises(StateFormatError):
            decode_state(bad_version, self.config)

    def test_missing_file(self):
        from ripe_insar.errors import StateFormatError
        from ripe_insar.persistence import read_state
        with TemporaryDirectory() as tmp:
            with self.assertRaises(StateFormatError):
                read_state(join(tmp, "state.bin"), self.config)


class TestTables(unittest.TestCase):
    def test_phase_series_append(self):
        from ripe_insar.persistence import read_phase_series, \
            write_phase_series
        from ripe_insar.ripe import PhaseSeries
        first = PhaseSeries(phases=[0.0, 0.1], short_coherence=[1, 0.9],
                            long_coherence=[1, 0.8], times=[0, 6])
        second = PhaseSeries(phases=[0.2], short_coherence=[0.7],
                             long_coherence=[0.6], times=[12])
        with TemporaryDirectory() as tmp:
            path = join(tmp, "phases.csv")
            write_phase_series(path, first)
            with open(path) as f:
                before = f.read()
            write_phase_series(path, second, append=True, first_epoch=3)
            with open(path) as f:
                after = f.read()
            self.assertTrue(after.startswith(before))
            series = read_phase_series(path)
        np.testing.assert_array_equal(series.phases, [0.0, 0.1, 0.2])
        np.testing.assert_array_equal(series.times, [0, 6, 12])
        self.assertEqual(after.splitlines()[0],
                         "epoch,time_days,phase_rad,short_coherence,"
                         "long_coherence")
        self.assertTrue(after.splitlines()[-1].startswith("3,"))

    def test_curves(self):
        from ripe_insar.evaluation import BiasStdCurves
        from ripe_insar.persistence import CURVE_COLUMNS, read_curves, \
            write_curves
        from ripe_insar.schema.evaluation import Method
        values = np.array([0.0, 0.5, 1.0])
        curves = BiasStdCurves(method=Method.EMI, time_days=values * 12,
                               bias_rad=values, bias_mm=values,
                               std_rad=values, std_mm=values,
                               mean_short_coherence=values,
                               mean_long_coherence=np.full(3, np.nan),
                               trials=5)
        with TemporaryDirectory() as tmp:
            path = join(tmp, "curves_emi.csv")
            write_curves(path, curves)
            frame = read_curves([path, path])
            self.assertEqual(list(frame.columns), CURVE_COLUMNS)
            self.assertEqual(len(frame), 6)
            self.assertEqual(set(frame.method), {"emi"})
            self.assertEqual(list(frame.epoch[:3]), [1, 2, 3])

            broken = join(tmp, "broken.csv")
            with open(broken, "w") as f:
                f.write("method,epoch\nemi,1\n")
            with self.assertRaises(ValueError):
                read_curves([broken])


if __name__ == '__main__':
    unittest.main()
