"""How emergent norms reshape team performance after the memory span.

Averages a few dozen replications for three norm weights and prints the
trajectory around t = T_L, where compliance starts entering decisions.

Run: python demos/03_norm_dynamics.py
"""

import numpy as np

import teamnorms as tn

R = 40
checkpoints = [1, 25, 50, 60, 100, 250, 500]

print("high-complexity team, alpha=1, averaged over", R, "runs\n")
print("  w2   " + "".join(f"  t={t:<4d}" for t in checkpoints))
curves = {}
for w2 in (0.0, 0.3, 0.5):
    params = tn.ScenarioParams(k=2, c=2, s=2,
                               weights=tn.DecisionWeights(1 - w2, w2), seed=42)
    curve = tn.replicate(params, R).mean(axis=0)
    curves[w2] = curve
    print(f"  {w2:.1f}  " + "".join(f"  {curve[t - 1]:.4f}" for t in checkpoints))

print("\nnorms are inert until t = T_L = 50 (identical decisions while the")
print("compliance term is zero), then conformity pressure drags performance")
print("down, and more so the larger w2 is.")

drop = curves[0.0][-100:].mean() - curves[0.5][-100:].mean()
print(f"\nfinal-100-period cost of w2=0.5 vs w2=0: {drop:.4f}")

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7, 3.2))
    for w2, curve in curves.items():
        ax.plot(np.arange(1, curve.size + 1), curve, lw=1.2, label=f"$w_2$={w2}")
    ax.axvline(50, color="gray", ls="--", lw=0.8)
    ax.set_xlabel("Time steps")
    ax.set_ylabel("Overall performance")
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig("/tmp/demo_norm_dynamics.png", dpi=150)
    print("comparison plot saved to /tmp/demo_norm_dynamics.png")
except ImportError:
    pass
