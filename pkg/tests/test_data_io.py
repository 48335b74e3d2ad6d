import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from treesvm.data_io import (
    Dataset,
    DegenerateSplitWarning,
    ParseError,
    Scaler,
    SplitConfig,
    apply_scaler,
    fit_scaler,
    format_libsvm,
    load_libsvm,
    parse_libsvm,
    shuffle_split,
    synth_blobs,
)


def test_parse_basic():
    ds = parse_libsvm("1 1:0.5 3:2.0\n2 2:1.0")
    assert ds.d == 3
    np.testing.assert_array_equal(ds.X, [[0.5, 0, 2.0], [0, 1.0, 0]])
    assert ds.y.tolist() == [1, 2]
    assert ds.label_alphabet == (1, 2)


def test_parse_alphabet_first_appearance():
    ds = parse_libsvm("3 1:1\n1 1:2\n3 1:3\n2 1:4\n")
    assert ds.label_alphabet == (3, 1, 2)


@pytest.mark.parametrize("text", ["", "\n\n", "# only a comment\n"])
def test_parse_empty(text):
    with pytest.raises(ParseError, match="empty"):
        parse_libsvm(text)


@pytest.mark.parametrize(
    "text, lineno",
    [
        ("1 1:0.5\n2 x:1\n", 2),
        ("1 1:abc\n", 1),
        ("1 1:1 1:2\n", 1),
        ("1 2:1 1:2\n", 1),
        ("1 1:1\n1 1:1\nfoo 1:1\n", 3),
        ("1 1:1\n2.5 1:1\n", 2),
        ("1 0.5\n", 1),
    ],
)
def test_parse_errors_name_line(text, lineno):
    with pytest.raises(ParseError) as exc:
        parse_libsvm(text)
    assert exc.value.lineno == lineno
    assert f"line {lineno}" in str(exc.value)


def test_parse_n_features_pads():
    ds = parse_libsvm("1 1:1\n2 2:1\n", n_features=5)
    assert ds.X.shape == (2, 5)


def test_iris_file(data_dir):
    ds = load_libsvm(data_dir / "iris.libsvm")
    assert (ds.n, ds.d, ds.n_classes) == (150, 4, 3)


def test_glass_file(data_dir):
    ds = load_libsvm(data_dir / "glass.libsvm")
    assert (ds.n, ds.d, ds.n_classes) == (214, 9, 6)


def test_missing_file():
    with pytest.raises(OSError, match="cannot open"):
        load_libsvm("/nonexistent/file.libsvm")


@settings(max_examples=50, deadline=None)
@given(
    st.integers(1, 8),
    st.integers(1, 5),
    st.integers(0, 2**32 - 1),
)
def test_format_parse_roundtrip(n, d, seed):
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n, d)) * (rng.random((n, d)) < 0.7)
    X[0, -1] = 1.5  # pin d
    y = rng.integers(-3, 4, size=n)
    ds = Dataset(X, y)
    back = parse_libsvm(format_libsvm(ds))
    np.testing.assert_array_equal(back.X, ds.X)
    np.testing.assert_array_equal(back.y, ds.y)


def test_fit_scaler_examples():
    s = fit_scaler(Dataset(np.array([[0.0, 10.0], [4.0, 10.0]]), [1, 2]))
    np.testing.assert_array_equal(s.min, [0, 10])
    np.testing.assert_array_equal(s.max, [4, 10])
    s1 = fit_scaler(Dataset(np.array([[3.0]]), [1]))
    assert s1.min.tolist() == [3.0] and s1.max.tolist() == [3.0]


def test_apply_scaler_examples():
    s = Scaler(np.array([0.0, 10.0]), np.array([4.0, 10.0]))
    out = apply_scaler(s, Dataset(np.array([[2.0, 10.0]]), [1]))
    np.testing.assert_array_equal(out.X, [[0.5, 0.0]])
    s = Scaler(np.array([0.0]), np.array([4.0]))
    assert apply_scaler(s, Dataset(np.array([[5.0]]), [1])).X[0, 0] == 1.0
    assert apply_scaler(s, Dataset(np.array([[-1.0]]), [1])).X[0, 0] == 0.0


def test_apply_scaler_dimension_mismatch():
    s = Scaler(np.zeros(2), np.ones(2))
    with pytest.raises(ValueError, match="dimension mismatch"):
        apply_scaler(s, Dataset(np.zeros((1, 3)), [1]))


def test_glass_scaled_training_in_unit_box(data_dir):
    ds = load_libsvm(data_dir / "glass.libsvm")
    train, _ = shuffle_split(ds, SplitConfig(seed=1))
    scaled = apply_scaler(fit_scaler(train), train)
    assert scaled.X.min() >= 0.0 and scaled.X.max() <= 1.0
    # each non-constant feature attains both ends
    assert np.all(scaled.X.max(axis=0)[np.ptp(train.X, axis=0) > 0] == 1.0)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 30), st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_scaled_fitting_set_in_unit_box(n, d, seed):
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n, d)) * 100
    X[:, 0] = 7.0  # a constant column
    ds = Dataset(X, np.arange(n) % 2)
    out = apply_scaler(fit_scaler(ds), ds)
    assert out.X.min() >= 0.0 and out.X.max() <= 1.0
    assert np.all(out.X[:, 0] == 0.0)


def test_scaler_csv_roundtrip():
    s = Scaler(np.array([0.1, -3.0]), np.array([0.7, 2.0 / 3.0]))
    back = Scaler.from_csv(s.to_csv())
    np.testing.assert_array_equal(back.min, s.min)
    np.testing.assert_array_equal(back.max, s.max)
    assert len(s.to_csv().strip().splitlines()) == 2


def test_split_sizes_iris(data_dir):
    ds = load_libsvm(data_dir / "iris.libsvm")
    train, test = shuffle_split(ds, SplitConfig(2 / 3, seed=3))
    assert (train.n, test.n) == (100, 50)


def test_split_deterministic_and_seed_sensitive(data_dir):
    ds = load_libsvm(data_dir / "iris.libsvm")
    a = shuffle_split(ds, SplitConfig(seed=11))
    b = shuffle_split(ds, SplitConfig(seed=11))
    c = shuffle_split(ds, SplitConfig(seed=12))
    np.testing.assert_array_equal(a[0].X, b[0].X)
    np.testing.assert_array_equal(a[1].y, b[1].y)
    assert not np.array_equal(a[0].X, c[0].X)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 40), st.floats(0.05, 0.95), st.integers(0, 1000))
def test_split_preserves_multiset(n, frac, seed):
    rng = np.random.default_rng(seed)
    ds = Dataset(rng.integers(0, 5, size=(n, 2)).astype(float), rng.integers(0, 3, size=n))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegenerateSplitWarning)
        train, test = shuffle_split(ds, SplitConfig(frac, seed))
    assert train.n == min(max(math.ceil(frac * n - 1e-9), 1), n - 1)
    assert train.n >= 1 and test.n >= 1

    def rows(part):
        return sorted(map(tuple, np.column_stack([part.X, part.y]).tolist()))

    assert sorted(rows(train) + rows(test)) == rows(ds)


def test_split_warns_on_label_loss():
    ds = Dataset(np.arange(4.0)[:, None], [1, 1, 1, 2])
    with pytest.warns(DegenerateSplitWarning):
        shuffle_split(ds, SplitConfig(0.5, seed=0))


def test_split_config_validates():
    with pytest.raises(ValueError):
        SplitConfig(1.0)
    with pytest.raises(ValueError):
        SplitConfig(0.0)


def test_synth_small_separable():
    ds = synth_blobs(2, 5, 2, 0.01, seed=4)
    assert ds.n == 10 and ds.n_classes == 2
    a, b = ds.X[ds.y == 1], ds.X[ds.y == 2]
    # gap between blobs dwarfs their radius
    gap = np.linalg.norm(a[:, None] - b[None], axis=2).min()
    assert gap > 0.8


def test_synth_sdss_shape_and_determinism():
    a = synth_blobs(6, 5000, 5, 0.5, seed=9)
    b = synth_blobs(6, 5000, 5, 0.5, seed=9)
    assert (a.n, a.d, a.n_classes) == (30000, 5, 6)
    np.testing.assert_array_equal(a.X, b.X)
    np.testing.assert_array_equal(a.y, b.y)


@pytest.mark.parametrize("args", [(1, 5, 2, 0.1), (2, 0, 2, 0.1), (2, 5, 0, 0.1), (2, 5, 2, 0.0)])
def test_synth_preconditions(args):
    with pytest.raises(ValueError):
        synth_blobs(*args, seed=0)
