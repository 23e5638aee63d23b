# Neighbourhood homogeneity on a small grid
# ==========================================
#
# Two cells are neighbours when they differ by at most one step along every
# dimension.  The homogeneity of a layout counts ordered pairs of full
# neighbouring cells and divides by the count of a completely full cube.
import numpy as np

from mcacube import delta, ih, ihb, ihb_max
from mcacube.cube import cube_from_cells
from mcacube.render import project

cells = {"A": (1, 1), "F": (0, 0), "K": (1, 0), "E": (0, 2), "B": (2, 2), "S": (3, 3)}
cube = cube_from_cells((4, 4), cells.values())
print(project(cube, ("D1", "D2")).astype(int))

# full neighbours of each full cell
for name, cell in cells.items():
    print(name, cell, delta(cube, cell))

# every pair is seen from both ends, so the deltas add up to ihb
print("ihb     =", ihb(cube))
print("ihb_max =", ihb_max(cube.shape), "  (3p-2)^2 - p^2 for p = 4")
print("ih      = %.4f" % ih(cube))

# a full cube scores exactly 1
full = cube_from_cells((4, 4), np.ndindex(4, 4))
print("full cube ih =", ih(full))
