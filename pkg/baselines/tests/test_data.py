import numpy as np
import pytest

from goose_baselines.data import (
    CLASS_NAMES,
    FEATURE_DIM,
    STEP_DIM,
    FeatureEncoder,
    SplitSpec,
    TRANSITION_DIM,
    Window,
    corpus_content_hash,
    load_corpus,
    stratified_split,
)


def test_load_corpus_groups_windows(small_corpus):
    windows = load_corpus(small_corpus)
    assert len(windows) == 78
    labels = {w.label for w in windows}
    assert labels == set(CLASS_NAMES)
    assert all(len(w) >= 10 for w in windows)
    assert all(w.numeric.shape[1] == 9 for w in windows)


def test_load_corpus_rejects_foreign_header(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("a,b,c\n1,2,3\n", encoding="utf-8")
    with pytest.raises(ValueError):
        load_corpus(path)


def test_load_corpus_rejects_unknown_label(tmp_path, small_corpus):
    text = small_corpus.read_text(encoding="utf-8").replace("ZeroDay", "zeroday")
    path = tmp_path / "bad.csv"
    path.write_text(text, encoding="utf-8")
    with pytest.raises(ValueError):
        load_corpus(path)


def test_content_hash_matches_generator_manifest(shared_corpus, shared_manifest):
    # the documented label-independent hash recipe must reproduce the
    # generator's own corpus hash
    assert corpus_content_hash(shared_corpus) == shared_manifest["corpus_hash"]


def test_split_is_stratified_and_deterministic(small_corpus):
    windows = load_corpus(small_corpus)
    spec = SplitSpec(train_fraction=0.7, test_fraction=0.3, seed=3)
    train_a, test_a = stratified_split(windows, spec)
    train_b, test_b = stratified_split(windows, spec)
    assert [w.window_id for w in train_a] == [w.window_id for w in train_b]
    assert len(train_a) + len(test_a) == len(windows)
    for split in (train_a, test_a):
        assert {w.label for w in split} == set(CLASS_NAMES)
    assert not {w.window_id for w in train_a} & {w.window_id for w in test_a}


def test_split_rejects_bad_fractions():
    with pytest.raises(ValueError):
        SplitSpec(train_fraction=0.7, test_fraction=0.2)
    with pytest.raises(ValueError):
        SplitSpec(train_fraction=0.0, test_fraction=1.0)


def test_split_needs_every_class_on_both_sides(small_corpus):
    windows = [w for w in load_corpus(small_corpus) if w.label != "DI"]
    windows.append(next(w for w in load_corpus(small_corpus) if w.label == "DI"))
    with pytest.raises(ValueError):
        stratified_split(windows, SplitSpec(seed=0))


def _toy_window(window_id, values, cats, label=None):
    numeric = np.array(values, dtype=np.float64)
    return Window(window_id=window_id, label=label, numeric=numeric,
                  categorical=cats)


def test_encoder_is_fitted_on_training_data_only(small_corpus):
    windows = load_corpus(small_corpus)
    train, test = stratified_split(windows, SplitSpec(seed=1))
    enc = FeatureEncoder().fit(train)
    train_vocab = {v for w in train for row in w.categorical for v in row}
    for column, mapping in enc.vocab.items():
        assert set(mapping) <= train_vocab
    # scaled per-message features: numerics from the train range
    sample = enc.encode(train[0])
    assert sample.shape == (len(train[0]), FEATURE_DIM)
    numeric_part = np.vstack([enc.encode(w)[:, :9] for w in train])
    assert numeric_part.min() >= -1e-9 and numeric_part.max() <= 1 + 1e-9


def test_encoder_assigns_oov_codes():
    train = [_toy_window("a", [[10, 0, 0, 0, 3, 1, 1, 0, 0]],
                         [("x", "y", "t", "d", "g")])]
    enc = FeatureEncoder().fit(train)
    probe = _toy_window("b", [[10, 0, 0, 0, 3, 1, 1, 0, 0]],
                        [("UNSEEN", "y", "t", "d", "g")])
    codes = enc.encode(probe)[0, 9:]
    assert codes[0] == len(enc.vocab["DM"])  # out-of-vocabulary bucket


def test_encoder_requires_fit():
    with pytest.raises(RuntimeError):
        FeatureEncoder().encode(
            _toy_window("a", [[0] * 9], [("a", "b", "c", "d", "e")])
        )


def test_flatten_and_sequence_shapes(small_corpus):
    windows = load_corpus(small_corpus)
    enc = FeatureEncoder().fit(windows)
    for w in windows[:5]:
        assert enc.flatten(w, length=10).shape == (9 * TRANSITION_DIM,)
        assert enc.sequence(w).shape == (len(w), STEP_DIM)


def test_single_message_window_is_encodable(small_corpus):
    windows = load_corpus(small_corpus)
    enc = FeatureEncoder().fit(windows)
    lone = Window(window_id="solo", label="Normal",
                  numeric=windows[0].numeric[:1],
                  categorical=windows[0].categorical[:1])
    assert enc.sequence(lone).shape == (1, STEP_DIM)
    assert enc.flatten(lone, length=10).shape == (9 * TRANSITION_DIM,)
    assert not np.isnan(enc.sequence(lone)).any()
