"""Synthetic per-unit voltage windows with labeled power-quality disturbances.

Five window classes are produced: clean fundamental, spikes, notching,
harmonics, and oscillatory transient. Every window is a fixed number of
60 Hz cycles sampled at 15360 Hz (256 samples per cycle), corrupted by
calibrated Gaussian noise, and rescaled so the fundamental's sampled peak
and valley land on 1 and 0.

Generation is fully deterministic: each window is produced from a single
integer seed, and a stream spawns per-window seeds from its own seed, so
any window can be regenerated in isolation.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Iterator, Optional

import numpy as np

FUNDAMENTAL_FREQ = 60.0
SAMPLING_FREQ = 15360.0
SAMPLES_PER_CYCLE = 256

# Disturbance recipe constants, in raw per-unit amplitude (fundamental = 1 pu).
SPIKE_RISE = 10          # samples from onset to peak
SPIKE_LENGTH = 20        # samples from onset to extinction
SPIKE_AMP_RANGE = (1.0, 1.5)
NOTCH_START_RANGE = (10, 40)   # inclusive start-sample range, first cycle
NOTCH_WIDTH = 9
NOTCH_GAP = 23
NOTCH_AMP_RANGE = (0.05, 0.5)
HARMONIC_AMP_RANGES = (
    (0.008, 0.016),   # 2nd
    (0.02, 0.04),     # 3rd
    (0.005, 0.01),    # 4th
    (0.023, 0.046),   # 5th
    (0.003, 0.006),   # 6th
    (0.02, 0.04),     # 7th
)
TRANSIENT_AMP_RANGE = (0.45, 1.0)
TRANSIENT_FREQ_RANGE = (1000.0, 2500.0)
TRANSIENT_DAMP_RANGE = (400.0, 1000.0)


class DisturbanceClass(IntEnum):
    """Stable integer codes for the five window classes."""

    NONE = 1
    SPIKE = 2
    NOTCHING = 3
    HARMONICS = 4
    TRANSIENT = 5


@dataclass(frozen=True)
class SignalConfig:
    """Sampling grid and noise level for window synthesis.

    Parameters
    ----------
    cycles_per_window : int
        Window length in fundamental cycles (1, 4, and 10 are the usual
        choices).
    snr_db : float
        Requested signal-to-noise ratio in dB; ``math.inf`` disables noise.
    rng_seed : int
        Default seed used when a window is generated without an explicit
        seed.
    """

    cycles_per_window: int = 4
    snr_db: float = 20.0
    rng_seed: int = 0
    fundamental_freq: float = FUNDAMENTAL_FREQ
    sampling_freq: float = SAMPLING_FREQ
    samples_per_cycle: int = SAMPLES_PER_CYCLE

    def __post_init__(self):
        if self.cycles_per_window < 1:
            raise ValueError("cycles_per_window must be >= 1")
        if self.sampling_freq != self.fundamental_freq * self.samples_per_cycle:
            raise ValueError(
                "sampling_freq must equal fundamental_freq * samples_per_cycle"
            )

    @property
    def window_samples(self) -> int:
        return self.cycles_per_window * self.samples_per_cycle


@dataclass
class Waveform:
    """One normalized voltage window plus its ground truth and provenance."""

    samples: np.ndarray
    label: DisturbanceClass
    phase: float
    seed_used: int
    meta: dict = field(default_factory=dict)


@dataclass
class StreamSpec:
    """Layout of a class-balanced, partially labeled window stream."""

    per_class: int = 2000
    labeled_fraction: float = 1.0
    rng_seed: int = 0
    total_windows: Optional[int] = None

    def __post_init__(self):
        if self.total_windows is None:
            self.total_windows = 5 * self.per_class
        elif self.total_windows != 5 * self.per_class:
            raise ValueError("total_windows must equal 5 * per_class")
        if not 0.0 <= self.labeled_fraction <= 1.0:
            raise ValueError("labeled_fraction must lie in [0, 1]")


def noise_sigma(beta: float, snr_db: float) -> float:
    """Standard deviation of Gaussian noise giving the requested SNR.

    Inverts ``SNR = 20 log10(beta / (sqrt(2) * sigma))`` for ``sigma``,
    where ``beta`` is the amplitude of the underlying sinusoid. An SNR of
    ``math.inf`` returns 0 (noiseless limit).
    """
    if beta <= 0:
        raise ValueError("beta must be positive")
    if math.isinf(snr_db):
        return 0.0
    return beta / (math.sqrt(2.0) * 10.0 ** (snr_db / 20.0))


def _sign(rng) -> float:
    return 1.0 if rng.random() < 0.5 else -1.0


def _add_spike(v, config, rng, meta):
    # Triangular pulse: linear rise over 10 samples, linear decay over the
    # next 10; same onset offset and amplitude repeated once per cycle.
    spc = config.samples_per_cycle
    n = v.size
    start = int(rng.integers(0, spc))
    amp = rng.uniform(*SPIKE_AMP_RANGE) * _sign(rng)
    offsets = np.arange(SPIKE_LENGTH + 1)
    pulse = amp * (1.0 - np.abs(offsets - SPIKE_RISE) / SPIKE_RISE)
    for c in range(config.cycles_per_window):
        lo = start + c * spc
        hi = min(lo + SPIKE_LENGTH + 1, n)
        v[lo:hi] += pulse[: hi - lo]
    meta["spike_start"] = start
    meta["spike_amplitude"] = amp


def _add_notching(v, config, rng, meta):
    # Rectangular notches, 9 samples on / 23 off, phase-anchored by the
    # start draw; the 32-sample period tiles the whole window so every
    # cycle sees exactly 8 notches.
    period = NOTCH_WIDTH + NOTCH_GAP
    start = int(rng.integers(NOTCH_START_RANGE[0], NOTCH_START_RANGE[1] + 1))
    amp = rng.uniform(*NOTCH_AMP_RANGE) * _sign(rng)
    mask = ((np.arange(v.size) - start) % period) < NOTCH_WIDTH
    v[mask] += amp
    meta["notch_start"] = start
    meta["notch_amplitude"] = amp


def _add_harmonics(v, t, config, rng, meta):
    amps, phases = [], []
    for order, (lo, hi) in enumerate(HARMONIC_AMP_RANGES, start=2):
        a = rng.uniform(lo, hi)
        ph = rng.uniform(-np.pi, np.pi)
        v += a * np.sin(2.0 * np.pi * order * config.fundamental_freq * t + ph)
        amps.append(a)
        phases.append(ph)
    meta["harmonic_amplitudes"] = amps
    meta["harmonic_phases"] = phases


def _add_transient(v, config, rng, meta):
    # One-shot exponentially damped sinusoid from a random onset to the
    # window end (no wraparound).
    n = v.size
    start = int(rng.integers(0, n))
    amp = rng.uniform(*TRANSIENT_AMP_RANGE)
    freq = rng.uniform(*TRANSIENT_FREQ_RANGE)
    damping = rng.uniform(*TRANSIENT_DAMP_RANGE)
    tt = np.arange(n - start) / config.sampling_freq
    v[start:] += amp * np.exp(-damping * tt) * np.sin(2.0 * np.pi * freq * tt)
    meta["transient_start"] = start
    meta["transient_amplitude"] = amp
    meta["transient_freq"] = freq
    meta["transient_damping"] = damping


def generate_window(
    config: SignalConfig,
    klass: DisturbanceClass,
    seed: Optional[int] = None,
) -> Waveform:
    """Synthesize one normalized window of the requested class.

    The window is built as fundamental sine (amplitude 1 pu, random phase
    in [-pi, pi]) + class-specific disturbance + Gaussian noise at the
    configured SNR, then affinely rescaled so the sampled peak/valley of
    the noiseless fundamental map to 1/0. Disturbances may exceed [0, 1].

    Parameters
    ----------
    config : SignalConfig
        Sampling grid and noise level.
    klass : DisturbanceClass
        Which disturbance to inject (``DisturbanceClass.NONE`` for a clean
        window).
    seed : int, optional
        Seed for this window's private random source. Defaults to
        ``config.rng_seed``. All parameter draws precede the noise draw, so
        regenerating the same seed at ``snr_db=inf`` yields the noiseless
        twin of a noisy window.

    Returns
    -------
    Waveform
        Normalized samples, ground-truth class, phase, the seed used, and
        the disturbance parameters actually drawn (in ``meta``).
    """
    if seed is None:
        seed = config.rng_seed
    rng = np.random.default_rng(seed)
    klass = DisturbanceClass(klass)
    n = config.window_samples
    t = np.arange(n) / config.sampling_freq

    phase = rng.uniform(-np.pi, np.pi)
    fundamental = np.sin(
        2.0 * np.pi * config.fundamental_freq * t + phase
    )
    v = fundamental.copy()
    meta: dict = {}

    if klass is DisturbanceClass.SPIKE:
        _add_spike(v, config, rng, meta)
    elif klass is DisturbanceClass.NOTCHING:
        _add_notching(v, config, rng, meta)
    elif klass is DisturbanceClass.HARMONICS:
        _add_harmonics(v, t, config, rng, meta)
    elif klass is DisturbanceClass.TRANSIENT:
        _add_transient(v, config, rng, meta)

    sigma = noise_sigma(1.0, config.snr_db)
    if sigma > 0.0:
        v += rng.normal(0.0, sigma, n)

    fmin = fundamental.min()
    fmax = fundamental.max()
    scale = fmax - fmin
    samples = (v - fmin) / scale
    meta["norm_scale"] = scale

    return Waveform(
        samples=samples, label=klass, phase=phase, seed_used=int(seed), meta=meta
    )


def generate_stream(
    spec: StreamSpec, config: SignalConfig
) -> Iterator[tuple[Waveform, Optional[int]]]:
    """Yield a seeded, class-balanced stream of partially labeled windows.

    Emits ``spec.total_windows`` windows, exactly ``spec.per_class`` of
    each class, in a uniformly random interleaving drawn from
    ``spec.rng_seed``. Each window's label is exposed independently with
    probability ``spec.labeled_fraction``; the ground truth always rides
    along in ``Waveform.label`` for scoring.

    Yields
    ------
    (Waveform, int or None)
        The window and its exposed label (None when masked).
    """
    master = np.random.default_rng(spec.rng_seed)
    classes = np.repeat(np.arange(1, 6), spec.per_class)
    master.shuffle(classes)
    seeds = master.integers(0, 2**63, size=spec.total_windows)
    visible = master.random(spec.total_windows) < spec.labeled_fraction

    for klass, seed, vis in zip(classes, seeds, visible):
        wf = generate_window(config, DisturbanceClass(int(klass)), int(seed))
        yield wf, (int(klass) if vis else None)


def waveforms_to_csv(
    stream: Iterator[tuple[Waveform, Optional[int]]], path
) -> int:
    """Dump a window stream to CSV: seed, class, label-visible flag, samples.

    Returns the number of rows written.
    """
    count = 0
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        for wf, label in stream:
            row = [wf.seed_used, int(wf.label), int(label is not None)]
            row.extend(map(float, wf.samples))
            writer.writerow(row)
            count += 1
    return count
