"""Regenerate the synthetic fixtures shipped in src/linfbound/data."""

from pathlib import Path

import numpy as np

TOTAL = 10_000_000
TOP = [("SMITH", 0.0213), ("JOHNSON", 0.0165), ("WILLIAMS", 0.0137),
       ("BROWN", 0.0134), ("JONES", 0.0130)]
NAMES = 1000
TAIL_EXPONENT = 0.7

out = Path(__file__).resolve().parents[1] / "src" / "linfbound" / "data" / "census_synthetic.csv"
top_mass = sum(p for _, p in TOP)
tail = np.arange(len(TOP) + 1, NAMES + 1, dtype=float) ** -TAIL_EXPONENT
tail *= (1.0 - top_mass) / tail.sum()
masses = [p for _, p in TOP] + list(tail)
labels = [name for name, _ in TOP] + [f"SURNAME_{i:04d}" for i in range(len(TOP) + 1, NAMES + 1)]
counts = np.rint(np.array(masses) * TOTAL).astype(int)
with open(out, "w", encoding="utf-8") as fh:
    fh.write("name,count\n")
    for lab, c in zip(labels, counts):
        fh.write(f"{lab},{c}\n")
print(out, counts.sum())
