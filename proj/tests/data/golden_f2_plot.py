#!/usr/bin/env python3
import csv
import math
import os
import sys

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

HERE = os.path.dirname(os.path.abspath(__file__))
CSV = sys.argv[1] if len(sys.argv) > 1 else os.path.join(HERE, "quad-lower.csv")
HAS_DATA = True
KAPPA_RANGE = [6.115909044841464, 524288]
D_MAX = 20

rows = []
if HAS_DATA and os.path.exists(CSV):
    with open(CSV, newline="") as fh:
        rows = list(csv.DictReader(fh))

def num(v):
    return float(v) if v not in ("", "nan") else float("nan")

fig, ax = plt.subplots(figsize=(6, 4))
lk = np.linspace(math.log(max(KAPPA_RANGE[0], 1.0 + 1e-12)), math.log(KAPPA_RANGE[1]), 200)
ax.plot(lk, 1 + 2.5 * np.sqrt(lk), "k--", label="upper")
ax.plot(lk, np.minimum(0.7 * math.sqrt(D_MAX), 0.45 * np.sqrt(lk)), "k:", label="lower (GF)")
ax.plot(lk, np.minimum(0.5 * math.sqrt(D_MAX), 0.3 * np.sqrt(lk)), "k-.", label="lower (GD)")
for name, marker in (("quad-lower-gf", "o"), ("quad-lower-gd", "s"),
                     ("quad-random-gf", "^"), ("quad-random-gd", "v")):
    pts = [(math.log(num(r["kappa_nominal"])), num(r["ratio"])) for r in rows
           if r["experiment"] == name and num(r["kappa_nominal"]) > 0]
    if pts:
        ax.plot([p[0] for p in pts], [p[1] for p in pts], marker, label=name)
ax.set_xlabel(r"$\log\kappa$")
ax.set_ylabel(r"$\zeta / \mathrm{dist}(x_0, X^*)$")
out = "f2-ratio-vs-logkappa.png"
ax.legend()
fig.tight_layout()
fig.savefig(os.path.join(HERE, out), dpi=150)
print(os.path.join(HERE, out))
