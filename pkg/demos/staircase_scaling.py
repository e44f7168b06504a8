"""Runtime scaling on the staircase benchmark family.

Sweeps the number of safe sets and the curve degree, prints the
records, writes them to CSV, and plots solve time against each swept
parameter. Subproblem counts stay flat while runtimes grow roughly
linearly, so total work tracks the per-subproblem cost.
"""

import pathlib

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

from mintime.bench import run_suite, write_records_csv

OUT = pathlib.Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

sets_values = [3, 10, 30, 100, 300]
set_records, set_summary = run_suite(
    "sets", sets_values, {"dim": 3, "facets": 6, "degree": 3})
print("sweep over the number of safe sets (n=3, m=6, K=3):")
for record in set_records:
    print(f"  I={record.num_sets:4d}: duration {record.objective:8.2f} s, "
          f"{record.subproblems} subproblems, {record.wall_ms:8.1f} ms")
print(f"  consecutive runtime ratios: "
      f"{[round(r, 2) for r in set_summary['runtime_ratios']]}")
write_records_csv(set_records, OUT / "sweep_sets.csv")

degree_values = [3, 5, 10, 20, 30]
degree_records, _ = run_suite(
    "degree", degree_values, {"sets": 20, "dim": 3, "facets": 6})
print("sweep over the curve degree (I=20, n=3, m=6):")
for record in degree_records:
    print(f"  K={record.degree:3d}: duration {record.objective:7.3f} s, "
          f"{record.subproblems} subproblems, {record.wall_ms:8.1f} ms")
write_records_csv(degree_records, OUT / "sweep_degree.csv")

fig, (ax_sets, ax_degree) = plt.subplots(1, 2, figsize=(10, 4))
ax_sets.loglog(sets_values, [r.wall_ms for r in set_records], "o-")
ax_sets.set_xlabel("number of safe sets I")
ax_sets.set_ylabel("solve time [ms]")
ax_sets.grid(True, which="both", alpha=0.3)
ax_degree.plot(degree_values, [r.wall_ms for r in degree_records], "o-")
ax_degree.set_xlabel("curve degree K")
ax_degree.set_ylabel("solve time [ms]")
ax_degree.grid(True, alpha=0.3)
fig.tight_layout()
fig.savefig(OUT / "scaling.png", dpi=130)
print(f"wrote {OUT / 'scaling.png'} and the two CSV files")
