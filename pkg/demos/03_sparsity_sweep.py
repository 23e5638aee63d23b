# Homogeneity as the cube gets sparser
# =====================================
#
# Subsample the facts of a planted cube at decreasing rates.  Both the
# initial and the arranged homogeneity fall as sparsity rises, and the
# arrangement keeps a positive gain at every rate.
from mcacube.cli import sweep_rows
from mcacube.synthetic import planted_blocks

cube = planted_blocks((8, 12), n_blocks=2, seed=1, facts_per_cell=3)
rows = sweep_rows(cube, [1.0, 0.8, 0.6, 0.4, 0.2], seed=7)

print(f"{'rate':>5} {'sparsity':>9} {'ih_initial':>11} {'ih_arranged':>12} {'gain':>7}")
for r in rows:
    g = "n/a" if r["gain"] is None else f"{r['gain']:.3f}"
    print(f"{r['rate']:5.1f} {r['sparsity']:9.3f} {r['ih_initial']:11.4f} {r['ih_arranged']:12.4f} {g:>7}")
