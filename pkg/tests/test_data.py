"""CSV ingestion, schema enforcement and deterministic shuffling."""

import pytest

from fabboo import (AttributeSpec, DataError, Dataset, DatasetSchema,
                    load_csv, permutation, replay, save_csv, shuffled)
from fabboo.data import Instance, POSITIVE, NEGATIVE


@pytest.fixture
def schema():
    return DatasetSchema(
        attributes=(AttributeSpec("age", "num"),
                    AttributeSpec("sex", "cat", ("F", "M"))),
        protected_attribute="sex",
        protected_value="F",
        label_name="y",
        label_values=("good", "bad"),
        positive_value="good",
    )


def write(tmp_path, text):
    p = tmp_path / "data.csv"
    p.write_text(text, encoding="utf-8")
    return p


def test_three_row_parse(tmp_path, schema):
    p = write(tmp_path, "age,sex,y\n31,F,good\n45,M,bad\n29,F,bad\n")
    ds = load_csv(p, schema)
    assert len(ds) == 3
    first = ds.instances[0]
    assert first.features == (31.0, "F")
    assert first.group is True and first.label == POSITIVE and first.seq == 1
    assert ds.instances[1].group is False
    assert ds.instances[2].label == NEGATIVE


def test_header_only_gives_empty_dataset(tmp_path, schema):
    ds = load_csv(write(tmp_path, "age,sex,y\n"), schema)
    assert len(ds) == 0


def test_unmapped_protected_value(tmp_path, schema):
    p = write(tmp_path, "age,sex,y\n31,F,good\n45,X,bad\n")
    with pytest.raises(DataError, match="unmapped protected value at row 2"):
        load_csv(p, schema)


def test_missing_column(tmp_path, schema):
    with pytest.raises(DataError, match="missing column 'sex'"):
        load_csv(write(tmp_path, "age,y\n31,good\n"), schema)


def test_non_numeric_token(tmp_path, schema):
    p = write(tmp_path, "age,sex,y\nthirty,F,good\n")
    with pytest.raises(DataError, match="non-numeric value 'thirty' at row 1"):
        load_csv(p, schema)


def test_unmapped_label(tmp_path, schema):
    p = write(tmp_path, "age,sex,y\n31,F,excellent\n")
    with pytest.raises(DataError, match="unmapped label value at row 1"):
        load_csv(p, schema)


def test_missing_value_rejected(tmp_path, schema):
    p = write(tmp_path, "age,sex,y\n,F,good\n")
    with pytest.raises(DataError, match="missing value at row 1"):
        load_csv(p, schema)


def test_unknown_column_rejected(tmp_path, schema):
    p = write(tmp_path, "age,sex,zip,y\n31,F,10001,good\n")
    with pytest.raises(DataError, match="unknown column 'zip'"):
        load_csv(p, schema)


def test_save_load_round_trip(tmp_path, schema):
    p = write(tmp_path, "age,sex,y\n31.5,F,good\n45,M,bad\n")
    ds = load_csv(p, schema)
    out = tmp_path / "copy.csv"
    save_csv(out, schema, ds)
    again = load_csv(out, schema)
    assert again.instances == ds.instances


# --------------------------------------------------------------- shuffling

def _toy_dataset(schema, n):
    rows = [Instance((float(i), "F" if i % 2 else "M"),
                     bool(i % 2), POSITIVE if i % 3 else NEGATIVE, i + 1)
            for i in range(n)]
    return Dataset(schema, rows)


def test_single_instance_identity(schema):
    ds = _toy_dataset(schema, 1)
    assert shuffled(ds, seed=42) == ds.instances


def test_same_seed_reproduces_order(schema):
    ds = _toy_dataset(schema, 40)
    assert shuffled(ds, 7) == shuffled(ds, 7)


def test_golden_permutation_n5():
    # golden values pinned from the shuffler itself (fixed generator +
    # Fisher-Yates are the cross-implementation contract)
    assert permutation(5, seed=1) == [3, 1, 2, 4, 0]
    assert permutation(5, seed=2) == [2, 0, 3, 4, 1]
    assert permutation(5, seed=1) != permutation(5, seed=2)


def test_shuffle_is_permutation_with_fresh_seq(schema):
    ds = _toy_dataset(schema, 25)
    out = shuffled(ds, 3)
    assert [i.seq for i in out] == list(range(1, 26))
    assert sorted(i.features for i in out) == sorted(i.features for i in ds)


def test_replay_preserves_order(schema):
    ds = _toy_dataset(schema, 10)
    assert replay(ds) == ds.instances


def test_empty_shuffle_rejected(schema):
    with pytest.raises(DataError):
        shuffled(Dataset(schema, []), 1)
