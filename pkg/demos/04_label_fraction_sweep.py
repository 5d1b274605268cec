"""How much does accuracy degrade as labels get scarce?

Runs the 20 dB / 4-cycle cell at labeled fractions from 0 to 1 with
three seeds each (800 windows per class to keep this quick) and plots
mean accuracy with 99% confidence bars. At fraction 0 accuracy is
undefined by construction (no rule ever receives a class), so the
majority-vote purity of the final rule partition is shown instead.

Run:  python3 demos/04_label_fraction_sweep.py   (about a minute)
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from pqevolve import mean_ci99, run_cell

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

FRACTIONS = [round(0.1 * k, 1) for k in range(11)]
SEEDS = (1, 2, 3)

means, halves, purities = [], [], []
for fraction in FRACTIONS:
    records = [
        run_cell(20.0, 4, fraction, seed, per_class=800) for seed in SEEDS
    ]
    acc_mean, acc_half = mean_ci99([100 * r.accuracy for r in records])
    purity_mean, _ = mean_ci99([100 * r.purity for r in records])
    means.append(acc_mean)
    halves.append(acc_half)
    purities.append(purity_mean)
    print(f"fraction {fraction:.1f}: accuracy {acc_mean:6.2f} "
          f"+- {acc_half:5.2f}   purity {purity_mean:6.2f}")

fig, ax = plt.subplots(figsize=(8, 5))
ax.errorbar(FRACTIONS, means, yerr=halves, marker="o", capsize=3,
            label="accuracy (99% CI)")
ax.plot(FRACTIONS, purities, marker="s", ls="--", alpha=0.7,
        label="rule purity")
ax.set_xlabel("labeled fraction")
ax.set_ylabel("[%]")
ax.set_ylim(0, 100)
ax.legend()
fig.suptitle("Accuracy vs. label scarcity at 20 dB / 4 cycles (3 seeds)")
fig.tight_layout()
fig.savefig(OUT / "label_fraction_sweep.png", dpi=120)
print(f"\nwrote {OUT / 'label_fraction_sweep.png'}")
