# RIPE-InSAR: progressive InSAR phase estimation
# Copyright 2024 RIPE-InSAR contributors
# BSD-3 License
# See LICENSE.md for redistribution and use terms.

"""
Binary stack dumps, persisted estimator state and CSV tables.

Stack dump (little-endian):
    8 bytes   magic `RIPESTK1`
    uint32    N acquisitions
    uint32    L looks
    N float64 acquisition times in days
    N*L complex128 samples (interleaved float64 real/imag), row-major by
              acquisition

Estimator state (little-endian):
    8 bytes   magic `RIPESTA1`
    uint16    format version
    uint32    L looks
    uint64    epoch
    float64   running reference gain
    float64   stable reference gain
    float64   time of the last ingested acquisition (days)
    32 bytes  SHA-256 of the estimator configuration
    L complex128 running reference, then L complex128 stable reference
"""

import struct

from hashlib import sha256
from os import makedirs
from os.path import dirname, exists
from typing import Iterable, Tuple

import numpy as np
import pandas as pd
from ovos_utils import LOG

from ripe_insar.errors import StackFormatError, StateFormatError
from ripe_insar.evaluation import BiasStdCurves
from ripe_insar.ripe import PhaseSeries, RipeState
from ripe_insar.schema.coherence import AcquisitionTimeline
from ripe_insar.schema.estimation import RipeConfig
from ripe_insar.simulator import SLCStack

STACK_MAGIC = b"RIPESTK1"
STACK_HEADER = struct.Struct("<8sII")
STATE_MAGIC = b"RIPESTA1"
STATE_VERSION = 1
STATE_HEADER = struct.Struct("<8sHIQddd32s")
COMPLEX_LE = np.dtype("<c16")
FLOAT_LE = np.dtype("<f8")

PHASE_COLUMNS = ["epoch", "time_days", "phase_rad", "short_coherence",
                 "long_coherence"]
CURVE_COLUMNS = ["method", "epoch", "time_days", "bias_rad", "bias_mm",
                 "std_rad", "std_mm", "mean_coh_short", "mean_coh_long"]


def _ensure_parent(path: str):
    parent = dirname(path)
    if parent:
        makedirs(parent, exist_ok=True)


def encode_stack(stack: SLCStack) -> bytes:
    header = STACK_HEADER.pack(STACK_MAGIC, stack.epochs, stack.looks)
    return header + stack.times.astype(FLOAT_LE).tobytes() + \
        stack.samples.astype(COMPLEX_LE).tobytes()


def decode_stack(data: bytes) -> SLCStack:
    """
    Parse a stack dump.
    @param data: raw bytes
    @return: SLCStack
    """
    if len(data) < STACK_HEADER.size:
        raise StackFormatError("truncated header", len(data))
    magic, epochs, looks = STACK_HEADER.unpack_from(data, 0)
    if magic != STACK_MAGIC:
        raise StackFormatError(f"bad magic {magic!r}", 0)
    if epochs < 1:
        raise StackFormatError("stack has no acquisitions", 8)
    if looks < 1:
        raise StackFormatError("stack has no looks", 12)
    offset = STACK_HEADER.size
    times_end = offset + epochs * FLOAT_LE.itemsize
    samples_end = times_end + epochs * looks * COMPLEX_LE.itemsize
    if len(data) < samples_end:
        raise StackFormatError(f"truncated data: expected {samples_end} "
                               f"bytes, got {len(data)}", len(data))
    if len(data) > samples_end:
        raise StackFormatError(f"{len(data) - samples_end} trailing bytes",
                               samples_end)
    times = np.frombuffer(data, FLOAT_LE, epochs, offset)
    samples = np.frombuffer(data, COMPLEX_LE, epochs * looks, times_end)
    try:
        timeline = AcquisitionTimeline(times=times.tolist())
    except ValueError as e:
        raise StackFormatError(f"invalid acquisition times: {e}", offset)
    bad = np.flatnonzero(~np.isfinite(samples))
    if bad.size:
        raise StackFormatError("non-finite sample",
                               times_end + int(bad[0]) * COMPLEX_LE.itemsize)
    return SLCStack(samples=samples.reshape(epochs, looks).astype(np.complex128),
                    timeline=timeline)


def write_stack(path: str, stack: SLCStack):
    _ensure_parent(path)
    with open(path, "wb") as f:
        f.write(encode_stack(stack))
    LOG.debug(f"Wrote {stack.epochs}x{stack.looks} stack to {path}")


def read_stack(path: str) -> SLCStack:
    with open(path, "rb") as f:
        return decode_stack(f.read())


def config_hash(config: RipeConfig) -> bytes:
    """
    Digest of the estimator configuration a state was produced with.
    """
    return sha256(config.model_dump_json().encode("utf-8")).digest()


def encode_state(state: RipeState, config: RipeConfig,
                 last_time: float = np.nan) -> bytes:
    header = STATE_HEADER.pack(STATE_MAGIC, STATE_VERSION, state.looks,
                               state.epoch, state.z_gain, state.s_gain,
                               last_time, config_hash(config))
    return header + state.z.astype(COMPLEX_LE).tobytes() + \
        state.s.astype(COMPLEX_LE).tobytes()


def decode_state(data: bytes, config: RipeConfig) -> Tuple[RipeState, float]:
    """
    Parse a persisted state, refusing one produced under another
    configuration.
    @param data: raw bytes
    @param config: configuration the caller intends to resume with
    @return: RipeState and time of the last ingested acquisition
    """
    if len(data) < STATE_HEADER.size:
        raise StateFormatError("truncated state header")
    magic, version, looks, epoch, z_gain, s_gain, last_time, digest = \
        STATE_HEADER.unpack_from(data, 0)
    if magic != STATE_MAGIC:
        raise StateFormatError(f"bad magic {magic!r}")
    if version != STATE_VERSION:
        raise StateFormatError(f"unsupported state version {version}")
    if digest != config_hash(config):
        raise StateFormatError("state was produced with a different "
                               "estimator configuration")
    expected = STATE_HEADER.size + 2 * looks * COMPLEX_LE.itemsize
    if len(data) != expected:
        raise StateFormatError(f"expected {expected} bytes, got {len(data)}")
    z = np.frombuffer(data, COMPLEX_LE, looks, STATE_HEADER.size)
    s = np.frombuffer(data, COMPLEX_LE, looks,
                      STATE_HEADER.size + looks * COMPLEX_LE.itemsize)
    try:
        state = RipeState(z=z.astype(np.complex128),
                          s=s.astype(np.complex128), epoch=epoch,
                          z_gain=z_gain, s_gain=s_gain)
    except ValueError as e:
        raise StateFormatError(str(e))
    return state, last_time


def write_state(path: str, state: RipeState, config: RipeConfig,
                last_time: float = np.nan):
    _ensure_parent(path)
    with open(path, "wb") as f:
        f.write(encode_state(state, config, last_time))


def read_state(path: str, config: RipeConfig) -> Tuple[RipeState, float]:
    if not exists(path):
        raise StateFormatError(f"no estimator state at {path}; run "
                               f"`estimate` on a stack first")
    with open(path, "rb") as f:
        return decode_state(f.read(), config)


def phase_series_frame(series: PhaseSeries, first_epoch: int = 1) -> \
        pd.DataFrame:
    times = series.times if series.times is not None else \
        np.full(len(series), np.nan)
    return pd.DataFrame({
        "epoch": np.arange(first_epoch, first_epoch + len(series)),
        "time_days": times,
        "phase_rad": series.phases,
        "short_coherence": series.short_coherence,
        "long_coherence": series.long_coherence}, columns=PHASE_COLUMNS)


def write_phase_series(path: str, series: PhaseSeries, append: bool = False,
                       first_epoch: int = 1):
    """
    Write (or append rows to) a PhaseSeries CSV. Appending never rewrites
    existing rows.
    """
    _ensure_parent(path)
    frame = phase_series_frame(series, first_epoch)
    if append:
        frame.to_csv(path, mode="a", header=False, index=False)
    else:
        frame.to_csv(path, index=False)


def read_phase_series(path: str) -> PhaseSeries:
    frame = pd.read_csv(path)
    missing = set(PHASE_COLUMNS) - set(frame.columns)
    if missing:
        raise ValueError(f"{path} is missing columns {sorted(missing)}")
    return PhaseSeries(phases=frame["phase_rad"].to_numpy(),
                       short_coherence=frame["short_coherence"].to_numpy(),
                       long_coherence=frame["long_coherence"].to_numpy(),
                       times=frame["time_days"].to_numpy())


def curves_frame(curves: BiasStdCurves) -> pd.DataFrame:
    return pd.DataFrame({
        "method": curves.method.value,
        "epoch": np.arange(1, len(curves) + 1),
        "time_days": curves.time_days,
        "bias_rad": curves.bias_rad,
        "bias_mm": curves.bias_mm,
        "std_rad": curves.std_rad,
        "std_mm": curves.std_mm,
        "mean_coh_short": curves.mean_short_coherence,
        "mean_coh_long": curves.mean_long_coherence}, columns=CURVE_COLUMNS)


def write_curves(path: str, curves: BiasStdCurves):
    _ensure_parent(path)
    curves_frame(curves).to_csv(path, index=False)


def read_curves(paths: Iterable[str]) -> pd.DataFrame:
    """
    Load one or more BiasStdCurves CSVs into a single frame.
    """
    frames = [pd.read_csv(p) for p in paths]
    if not frames:
        return pd.DataFrame(columns=CURVE_COLUMNS)
    frame = pd.concat(frames, ignore_index=True)
    missing = set(CURVE_COLUMNS) - set(frame.columns)
    if missing:
        raise ValueError(f"curve CSVs are missing columns {sorted(missing)}")
    return frame
