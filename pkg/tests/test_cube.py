import io
import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mcacube.cube import (
    Cube,
    CubeError,
    CubeSchema,
    FactTableError,
    apply_arrangement,
    cube_from_cells,
    load_fact_table,
    sample_facts,
    sparsity,
    write_fact_table,
    write_schema,
)
from mcacube.synthetic import bank_schema, cube_with_fill


def _csv(text):
    return io.StringIO(text)


def test_load_two_rows():
    schema = {"dimensions": [{"name": "P", "modalities": ["X", "Y"]}, "Q"]}
    cube = load_fact_table(_csv("P,Q\nX,U\nX,V\n"), schema)
    assert cube.n == 2
    assert cube.shape == (2, 2)
    assert cube.occupied() == {(0, 0), (0, 1)}


def test_catalog_first_appearance_order():
    cube = load_fact_table(_csv("P,Q\nb,U\na,V\nb,V\n"), {"dimensions": ["P", "Q"]})
    assert cube.labels(0) == ("b", "a")
    assert cube.labels(1) == ("U", "V")
    assert cube.coords.tolist() == [[0, 0], [1, 1], [0, 1]]


def test_explicit_catalog_and_measures():
    schema = {
        "dimensions": [{"name": "P", "modalities": ["Y", "X"]}, "Q"],
        "measures": ["M1"],
    }
    cube = load_fact_table(_csv("Q,P,M1,extra\nU,X,1.5,z\nU,X,2,z\nV,Y,-1,z\n"), schema)
    assert cube.shape == (2, 2)
    assert cube.coords.tolist() == [[1, 0], [1, 0], [0, 1]]
    assert cube.cell_aggregates() == {(0, 1): (-1.0,), (1, 0): (3.5,)}
    assert len(cube.occupancy) == 2


def test_modality_missing_from_catalog():
    schema = {"dimensions": [{"name": "P", "modalities": ["X"]}]}
    with pytest.raises(FactTableError, match="not in the schema catalog"):
        load_fact_table(_csv("P\nX\nW\n"), schema)


def test_unknown_column():
    with pytest.raises(FactTableError, match="unknown column 'R'"):
        load_fact_table(_csv("P,Q\nX,U\n"), {"dimensions": ["P", "R"]})


def test_non_numeric_measure_names_row_and_column():
    schema = {"dimensions": ["P"], "measures": ["M"]}
    with pytest.raises(FactTableError, match=r"row 3, column 'M'"):
        load_fact_table(_csv("P,M\nX,1\nY,abc\n"), schema)


def test_empty_fact_file_is_degenerate():
    schema = {"dimensions": [{"name": "P", "modalities": ["X", "Y"]}]}
    cube = load_fact_table(_csv("P\n"), schema)
    assert cube.n == 0 and cube.degenerate
    assert sparsity(cube) == 1.0


def test_bank_scale_ingestion(tmp_path):
    # full-size template: n = 311959 facts over eight dimensions, p = 189
    schema = bank_schema()
    assert schema.shape == (58, 25, 65, 15, 12, 6, 4, 4)
    rng = np.random.default_rng(0)
    n = 311959
    coords = rng.integers(0, schema.shape, size=(n, 8))
    coords[: max(schema.shape)] = np.arange(max(schema.shape))[:, None] % schema.shape
    cube = Cube(schema, coords, rng.random((n, 2)))
    facts, sch = tmp_path / "facts.csv", tmp_path / "schema.json"
    write_fact_table(cube, facts)
    write_schema(cube.schema, sch)
    loaded = load_fact_table(facts, sch)
    assert loaded.n == 311959
    assert sum(loaded.shape) == 189


def test_sparsity_examples():
    assert sparsity(cube_from_cells((2, 2), [(0, 0)])) == 0.75
    assert sparsity(cube_from_cells((2, 2), [(0, 0), (0, 1), (1, 0), (1, 1)])) == 0.0
    schema = bank_schema(["socio_professional_category", "product"])
    cube = cube_with_fill(schema, 0.36, seed=3)
    assert schema.shape == (58, 25)
    assert sparsity(cube) == pytest.approx(0.64, abs=1e-12)


def test_sample_rate_one_is_identity():
    cube = cube_with_fill(CubeSchema.from_sizes((5, 6)), 0.5, seed=1)
    assert sample_facts(cube, 1.0, seed=5) == cube


def test_sample_half_is_repeatable():
    rng = np.random.default_rng(2)
    cube = Cube(CubeSchema.from_sizes((6, 6)), rng.integers(0, 6, size=(100, 2)))
    a = sample_facts(cube, 0.5, seed=11)
    b = sample_facts(cube, 0.5, seed=11)
    c = sample_facts(cube, 0.5, seed=12)
    assert a.n == b.n == c.n == 50
    assert a == b
    assert a.schema == cube.schema
    assert sample_facts(cube, 0.3, seed=0).n == 30


def test_sample_rejects_bad_rate():
    cube = cube_from_cells((2, 2), [(0, 0)])
    with pytest.raises(CubeError):
        sample_facts(cube, 0.0, seed=1)


def test_apply_identity_and_reverse():
    cube = cube_from_cells((2, 2), [(0, 0)])
    assert apply_arrangement(cube, [[0, 1], [0, 1]]) == cube
    flipped = apply_arrangement(cube, [[1, 0], [0, 1]])
    assert flipped.occupied() == {(1, 0)}
    assert flipped.labels(0) == ("D1_2", "D1_1")


def test_apply_rejects_bad_permutation():
    cube = cube_from_cells((2, 3), [(0, 0)])
    with pytest.raises(CubeError):
        apply_arrangement(cube, [[0, 1], [0, 1]])
    with pytest.raises(CubeError):
        apply_arrangement(cube, [[0, 1]])


def test_cube_is_immutable():
    cube = cube_from_cells((2, 2), [(0, 0)])
    with pytest.raises(ValueError):
        cube.coords[0, 0] = 1


def test_out_of_range_fact():
    with pytest.raises(CubeError):
        Cube(CubeSchema.from_sizes((2, 2)), [[0, 2]])


def test_round_trip(tmp_path):
    schema = CubeSchema.from_sizes((3, 4, 2))
    schema = CubeSchema(schema.dimensions, ("m1", "m2"))
    rng = np.random.default_rng(7)
    cube = Cube(schema, rng.integers(0, [3, 4, 2], size=(40, 3)), rng.normal(size=(40, 2)))
    facts, sch = tmp_path / "f.csv", tmp_path / "s.json"
    write_fact_table(cube, facts)
    write_schema(cube.schema, sch)
    assert json.loads(sch.read_text())["measures"] == ["m1", "m2"]
    assert load_fact_table(facts, sch) == cube


shapes = st.lists(st.integers(1, 5), min_size=1, max_size=3)


@st.composite
def cubes(draw):
    shape = draw(shapes)
    n = draw(st.integers(0, 30))
    coords = [[draw(st.integers(0, p - 1)) for p in shape] for _ in range(n)]
    return Cube(CubeSchema.from_sizes(shape), np.array(coords, dtype=np.int64).reshape(n, len(shape)))


@settings(max_examples=60, deadline=None)
@given(cubes(), st.randoms(use_true_random=False))
def test_arrangement_preserves_cardinalities(cube, rnd):
    orders = []
    for p in cube.shape:
        order = list(range(p))
        rnd.shuffle(order)
        orders.append(order)
    out = apply_arrangement(cube, orders)
    assert out.n == cube.n
    assert len(out.occupancy) == len(cube.occupancy)
    assert sparsity(out) == sparsity(cube)


@settings(max_examples=60, deadline=None)
@given(cubes())
def test_sparsity_bounds(cube):
    s = sparsity(cube)
    assert 0.0 <= s <= 1.0
    assert (s == 0.0) == (len(cube.occupancy) == math.prod(cube.shape))
    assert (s == 1.0) == (cube.n == 0)
    assert len(cube.occupancy) <= min(cube.n, math.prod(cube.shape))
