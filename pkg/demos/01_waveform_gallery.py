"""Gallery of the five disturbance classes on a common voltage window.

Generates one 4-cycle window per class at 20 dB SNR, all from the same
seed so the underlying fundamental (phase, noise draw) is identical and
only the disturbance differs. Saves a five-panel figure plus the raw
samples as CSV under demos/output/.

Run:  python3 demos/01_waveform_gallery.py
"""

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from pqevolve import DisturbanceClass, SignalConfig, generate_window
from pqevolve.waveforms import waveforms_to_csv

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

config = SignalConfig(cycles_per_window=4, snr_db=20.0, rng_seed=7)
quiet = SignalConfig(cycles_per_window=4, snr_db=math.inf, rng_seed=7)

fig, axes = plt.subplots(5, 1, figsize=(10, 11), sharex=True)
rows = []
for ax, klass in zip(axes, DisturbanceClass):
    noisy = generate_window(config, klass, seed=42)
    clean = generate_window(quiet, klass, seed=42)
    t = np.arange(noisy.samples.size) / config.sampling_freq * 1000.0
    ax.plot(t, noisy.samples, lw=0.7, label="20 dB SNR")
    ax.plot(t, clean.samples, lw=0.9, alpha=0.7, label="noise-free twin")
    ax.set_ylabel(klass.name.lower(), fontsize=9)
    ax.set_ylim(-0.1, 1.1)
    rows.append((noisy, klass.value))
    print(f"class {klass.value} ({klass.name.lower():9s}): "
          f"min {noisy.samples.min():.3f}  max {noisy.samples.max():.3f}")

axes[0].legend(loc="upper right", fontsize=8)
axes[-1].set_xlabel("time [ms]")
fig.suptitle("Normalized voltage windows, one per disturbance class (same seed)")
fig.tight_layout()
fig.savefig(OUT / "waveform_gallery.png", dpi=120)

waveforms_to_csv([(wf, klass) for wf, klass in rows], OUT / "waveform_gallery.csv")
print(f"\nwrote {OUT / 'waveform_gallery.png'}")
print(f"wrote {OUT / 'waveform_gallery.csv'}")
