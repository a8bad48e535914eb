"""Walk one simulation run period by period and inspect what agents do.

Run: python demos/02_single_run.py
"""

import numpy as np

import teamnorms as tn

params = tn.ScenarioParams(k=2, c=2, s=2, t_max=200,
                           weights=tn.DecisionWeights(0.5, 0.5), seed=7)

# The object-level path exposes the full state after every period.
state = tn.init_run(params)
print(f"start: {state.config}  performance "
      f"{tn.team_performance(state.landscape, state.config):.4f} "
      f"(optimum {state.landscape.global_max:.4f})")

for _ in range(params.t_max):
    tn.step(state)
    t = state.t - 1
    if t in (1, 5, 10, 25, 50, 51, 75, 100, 200):
        mem = state.memories[0]
        print(f"t={t:3d}  normalized={state.trace[-1]:.4f}  "
              f"agent-0 memory={len(mem):3d} records  "
              f"compliance={tn.compliance(state.config.social(0), mem, t, params.t_l):.3f}")

# The compiled path reproduces the same trace bit for bit.
fast = tn.run(params)
print(f"\ncompiled run identical: {np.array_equal(fast.series, np.array(state.trace))}")
print(f"final configuration: {fast.final_config}")

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7, 3.2))
    ax.plot(np.arange(1, params.t_max + 1), fast.series, lw=1.2)
    ax.axvline(params.t_l, color="gray", ls="--", lw=0.8, label="memory span")
    ax.set_xlabel("Time steps")
    ax.set_ylabel("Overall performance")
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig("/tmp/demo_single_run.png", dpi=150)
    print("trajectory plot saved to /tmp/demo_single_run.png")
except ImportError:
    print("matplotlib not installed; skipping the trajectory plot")
