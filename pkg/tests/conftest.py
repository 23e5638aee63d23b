import itertools

import pytest

from mcacube.cube import cube_from_cells


def chebyshev_pairs(cells):
    """Ordered pairs of distinct cells at Chebyshev distance 1 (pure python)."""
    cells = sorted(set(map(tuple, cells)))
    return sum(
        1
        for a in cells
        for b in cells
        if a != b and max(abs(x - y) for x, y in zip(a, b)) <= 1
    )


def enumerate_best(shape, cells):
    """Best ordered-pair count over every combination of per-dimension orders."""
    best = -1
    for perms in itertools.product(*[itertools.permutations(range(p)) for p in shape]):
        inv = [{o: k for k, o in enumerate(perm)} for perm in perms]
        moved = [tuple(inv[t][c[t]] for t in range(len(shape))) for c in cells]
        best = max(best, chebyshev_pairs(moved))
    return best


# 4x4 layout reproducing the worked neighbourhood example: A is interior,
# its full neighbours are F, K, B, E and S touches only B.
WORKED_CELLS = {
    "A": (1, 1),
    "F": (0, 0),
    "K": (1, 0),
    "E": (0, 2),
    "B": (2, 2),
    "S": (3, 3),
}


@pytest.fixture
def worked_cube():
    return cube_from_cells((4, 4), WORKED_CELLS.values())
