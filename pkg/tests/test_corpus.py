import numpy as np
import pytest

from ironymlp.corpus import (
    load_dataset,
    load_embedding_table,
    load_emoji_map,
    load_emoji_polarity,
    load_lexicon,
    load_normalization_dict,
    load_resources,
)
from ironymlp.errors import ParseError, ResourceError, ValidationError

from conftest import DATA_DIR, official_path


class TestLoadDataset:
    def test_toy_file(self):
        corpus = load_dataset(DATA_DIR / "toy_train.txt", "A")
        assert len(corpus) == 30
        assert corpus.class_counts() == {0: 15, 1: 15}
        assert corpus.tweets[0].id == 1
        assert corpus.tweets[0].text.startswith("I just loooove")

    def test_official_train_counts(self):
        path = official_path(
            "SemEval2018-T3-train-taskA.txt", "SemEval2018-T3-train-taskA_emoji.txt",
            "train_taskA.txt",
        )
        if path is None:
            pytest.skip("official training set not present")
        corpus = load_dataset(path, "A")
        assert len(corpus) == 3834
        assert corpus.class_counts()[1] == 1911

    def test_empty_file(self, tmp_path):
        empty = tmp_path / "empty.txt"
        empty.write_text("")
        with pytest.raises(ParseError, match="no data rows"):
            load_dataset(empty, "A")

    def test_hand_written_rows(self, tmp_path):
        path = tmp_path / "mini.txt"
        path.write_text("1\t0\thello there\n2\t1\tso ironic\n3\t0\tplain text\n")
        corpus = load_dataset(path, "A")
        assert len(corpus) == 3
        assert corpus.class_counts() == {0: 2, 1: 1}

    def test_order_preserved(self, tmp_path):
        path = tmp_path / "ordered.txt"
        path.write_text("".join(f"{i}\t0\ttweet {i}\n" for i in (5, 3, 9, 1)))
        corpus = load_dataset(path, "A")
        assert [t.id for t in corpus.tweets] == [5, 3, 9, 1]

    def test_wrong_column_count_names_line(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("1\t0\tok tweet\n2\t1\n")
        with pytest.raises(ParseError, match="line 2"):
            load_dataset(path, "A")

    def test_label_out_of_range(self, tmp_path):
        path = tmp_path / "bad_label.txt"
        path.write_text("1\t3\tthis is task B only\n")
        with pytest.raises(ValidationError, match="out of range"):
            load_dataset(path, "A")
        assert load_dataset(path, "B").tweets[0].label == 3
        assert load_dataset(path, None).tweets[0].label == 3

    def test_unlabeled_two_column(self, tmp_path):
        path = tmp_path / "unlabeled.txt"
        path.write_text("1\tjust text\n2\tmore text\n")
        corpus = load_dataset(path, "A")
        assert all(t.label is None for t in corpus.tweets)

    def test_duplicate_id(self, tmp_path):
        path = tmp_path / "dup.txt"
        path.write_text("1\t0\ta\n1\t1\tb\n")
        with pytest.raises(ValidationError, match="duplicate"):
            load_dataset(path, "A")

    def test_same_bytes_same_value(self, tmp_path):
        path = tmp_path / "stable.txt"
        path.write_text("1\t0\thello\n")
        assert load_dataset(path, "A") == load_dataset(path, "A")


class TestLoadEmbeddings:
    def test_minimal_file(self, tmp_path):
        path = tmp_path / "emb.txt"
        path.write_text("a 1.0 2.0\nb 3.0 4.0\n")
        table = load_embedding_table(path, 2)
        assert len(table) == 2
        assert np.array_equal(table["a"], [1.0, 2.0])

    def test_dimension_mismatch(self, tmp_path):
        path = tmp_path / "emb.txt"
        path.write_text("a " + " ".join(["0.1"] * 299) + "\n")
        with pytest.raises(ParseError, match="line 1"):
            load_embedding_table(path, 300)

    def test_duplicate_keeps_first(self, tmp_path):
        path = tmp_path / "emb.txt"
        path.write_text("a 1.0 2.0\nb 9.0 9.0\na 5.0 6.0\n")
        table = load_embedding_table(path, 2)
        assert len(table) == 2
        assert np.array_equal(table["a"], [1.0, 2.0])

    def test_unparsable_real(self, tmp_path):
        path = tmp_path / "emb.txt"
        path.write_text("a 1.0 oops\n")
        with pytest.raises(ParseError):
            load_embedding_table(path, 2)


class TestResourceLoaders:
    def test_lexicon(self, tmp_path):
        path = tmp_path / "lex.txt"
        path.write_text("; comment\nlove\nGreat\n\n")
        assert load_lexicon(path) == {"love", "great"}

    def test_normalization_dict(self, tmp_path):
        path = tmp_path / "dict.tsv"
        path.write_text("reeeaaalll\treal\n")
        assert load_normalization_dict(path)["reeeaaalll"] == "real"

    def test_emoji_map_single_row(self, tmp_path):
        path = tmp_path / "emoji.tsv"
        path.write_text("U+1F602\tface_with_tears_of_joy\n")
        table = load_emoji_map(path)
        assert table["\U0001F602"] == "face_with_tears_of_joy"

    def test_missing_file_names_resource(self):
        with pytest.raises(ResourceError, match="lexicon"):
            load_lexicon("/nonexistent/lex.txt")
        with pytest.raises(ResourceError, match="emoji map"):
            load_emoji_map("/nonexistent/emoji.tsv")

    def test_emoji_polarity_validates(self, tmp_path):
        path = tmp_path / "pol.tsv"
        path.write_text("fire\tgreat\n")
        with pytest.raises(ValidationError):
            load_emoji_polarity(path)

    def test_shipped_resources_load(self, resources):
        assert "love" in resources.positive_lexicon
        assert "awful" in resources.negative_lexicon
        assert resources.normalization_dict["u"] == "you"
        assert "n't" in resources.negation_words
        assert resources.embeddings.dim == 300
        # canonical forms never map onward (keeps normalization idempotent)
        for value in resources.normalization_dict.values():
            for token in value.split():
                if token in resources.normalization_dict:
                    assert resources.normalization_dict[token] == token

    def test_lexicon_overlap_counts_both(self, tmp_path):
        pos = tmp_path / "pos.txt"
        neg = tmp_path / "neg.txt"
        pos.write_text("fine\n")
        neg.write_text("fine\n")
        bundle = load_resources(positive_lexicon_path=pos, negative_lexicon_path=neg)
        assert "fine" in bundle.positive_lexicon and "fine" in bundle.negative_lexicon
