"""Sweep a small scenario grid and emit the aggregated CSV.

A shrunken version of what `simulate sweep --figure main` does: the full
2-complexity x 3-scheme x 3-weight grid, but with few replications so it
finishes in seconds.

Run: python demos/04_grid_sweep.py
"""

import teamnorms as tn

base = tn.ScenarioParams(seed=2026)
grid = tn.ScenarioGrid(base,
                       complexity=((2, 0, 0), (2, 2, 2)),
                       schemes=((1.0, 0.0), (0.75, 0.25), (0.25, 0.75)),
                       weights=((1.0, 0.0), (0.7, 0.3), (0.5, 0.5)),
                       runs=10)

print(f"{len(grid.cells())} cells x {grid.runs} runs each\n")
results = tn.run_grid(grid, progress=print)

print("\nfinal-100-period means:")
for sid, cell in results.items():
    print(f"  {sid:38s} {cell.aggregate.mean[-100:].mean():.4f}")

out = "/tmp/demo_grid.csv"
tn.write_csv(results, out)
print(f"\nwrote {out}; render it with the plotting package:")
print(f"  plot --csv {out} --figure main --out /tmp/demo_grid.pdf")
