import json
import zipfile

import numpy as np
import pytest

from ironymlp.corpus import RawTweet, load_dataset
from ironymlp.ensemble import train_ensemble, vote
from ironymlp.errors import IntegrityError
from ironymlp.mlp import MlpConfig
from ironymlp.model_store import load_model, save_model
from ironymlp.pipeline import FeatureConfig

from conftest import DATA_DIR

HELD_OUT = [
    "Lovely, another monday of pure joy #not",
    "The pizza here is fantastic and the staff are kind",
    "I adooore waiting in line for three hours",
    "Sunny afternoon, coffee, and a good book",
    "Wonderful, my umbrella broke in the storm",
    "The team won and everyone is thrilled",
    "Great, I left my keys inside the car again",
    "Fresh bread from the corner bakery is the best",
    "So fun to lose my wallet on vacation",
    "My garden finally bloomed this week",
    "Awesome, the printer ate my report",
    "Quiet evening with the dog by the fire",
    "Thrilled to be stuck at the airport overnight",
    "The new museum exhibit was inspiring",
    "Charming, the neighbors party until 4am",
    "Homemade soup on a cold day is perfect",
    "Just love it when my code deletes itself",
    "The choir concert moved everyone to tears",
    "Splendid, a flat tire in the rain",
    "Morning yoga made the whole day better",
]


@pytest.fixture(scope="module")
def small_ensemble(resources, tagger):
    corpus = load_dataset(DATA_DIR / "toy_train.txt", "A")
    return train_ensemble(
        corpus,
        resources,
        tagger,
        mlp_config=MlpConfig(hidden_sizes=(6, 3), learning_rate=0.01, max_epochs=6,
                             early_stop_patience=6, batch_size=8),
        feature_config=FeatureConfig(lsi_k=4, brown_counts=(3, 4), word_top_k=25, char_top_k=30),
        k=10,
        seed=13,
    )


class TestRoundTrip:
    def test_predictions_bit_identical_on_held_out(self, small_ensemble, tmp_path):
        path = tmp_path / "model.zip"
        save_model(small_ensemble, path)
        loaded = load_model(path)
        assert loaded.task == small_ensemble.task
        for i, text in enumerate(HELD_OUT):
            tweet = RawTweet(id=1000 + i, text=text)
            label_a, counts_a, probs_a = vote(small_ensemble, tweet)
            label_b, counts_b, probs_b = vote(loaded, tweet)
            assert label_a == label_b
            assert counts_a == counts_b
            assert np.array_equal(probs_a, probs_b)

    def test_every_weight_preserved_exactly(self, small_ensemble, tmp_path):
        path = tmp_path / "model.zip"
        save_model(small_ensemble, path)
        loaded = load_model(path)
        for a, b in zip(small_ensemble.members, loaded.members):
            for pa, pb in zip(a.weights + a.biases, b.weights + b.biases):
                assert np.array_equal(pa, pb)
        assert np.array_equal(small_ensemble.pipeline.lsi_model.U, loaded.pipeline.lsi_model.U)
        assert np.array_equal(small_ensemble.pipeline.scale_std, loaded.pipeline.scale_std)
        assert small_ensemble.pipeline.word_vocab.grams == loaded.pipeline.word_vocab.grams
        assert loaded.fold_assignment == small_ensemble.fold_assignment

    def test_save_twice_byte_identical(self, small_ensemble, tmp_path):
        one = tmp_path / "one.zip"
        two = tmp_path / "two.zip"
        save_model(small_ensemble, one)
        save_model(small_ensemble, two)
        assert one.read_bytes() == two.read_bytes()


class TestIntegrity:
    def test_empty_file(self, tmp_path):
        path = tmp_path / "empty.zip"
        path.write_bytes(b"")
        with pytest.raises(IntegrityError):
            load_model(path)

    def test_truncated_file(self, small_ensemble, tmp_path):
        path = tmp_path / "model.zip"
        save_model(small_ensemble, path)
        payload = path.read_bytes()
        path.write_bytes(payload[: len(payload) // 2])
        with pytest.raises(IntegrityError):
            load_model(path)

    def test_version_mismatch_refused(self, small_ensemble, tmp_path):
        path = tmp_path / "model.zip"
        save_model(small_ensemble, path)
        bumped = tmp_path / "bumped.zip"
        with zipfile.ZipFile(path) as src, zipfile.ZipFile(bumped, "w") as dst:
            for item in src.infolist():
                payload = src.read(item.filename)
                if item.filename == "format.json":
                    tag = json.loads(payload)
                    tag["format_version"] = 999
                    payload = json.dumps(tag).encode()
                dst.writestr(item, payload)
        with pytest.raises(IntegrityError, match="version"):
            load_model(bumped)

    def test_missing_file(self, tmp_path):
        with pytest.raises(IntegrityError):
            load_model(tmp_path / "nope.zip")

    def test_unwritable_path(self, small_ensemble):
        with pytest.raises(OSError):
            save_model(small_ensemble, "/nonexistent_dir/model.zip")
