import numpy as np
import pytest

from ironymlp import ngrams, polarity, semantic
from ironymlp.corpus import RawTweet, load_dataset
from ironymlp.pipeline import FeatureConfig, fit_pipeline, preprocess_corpus, write_feature_matrix

from conftest import DATA_DIR

TOY_CONFIG = FeatureConfig(lsi_k=5, brown_counts=(3, 4), word_top_k=40, char_top_k=60)


@pytest.fixture(scope="module")
def corpus():
    return load_dataset(DATA_DIR / "toy_train.txt", "A")


@pytest.fixture(scope="module")
def pipeline(corpus, resources, tagger):
    return fit_pipeline(corpus, resources, tagger, config=TOY_CONFIG, seed=3)


class TestFit:
    def test_width_follows_layout(self, pipeline):
        widths = pipeline.family_widths()
        assert widths["lexical"] == 40 + 60 + 2
        assert widths["syntactic"] == 45
        assert widths["semantic"] == 300 + 5 + 3 + 4
        assert widths["polarity"] == 12
        assert pipeline.width == sum(widths.values())
        offsets = [b.offset for b in pipeline.layout]
        assert offsets == sorted(offsets)
        assert offsets[0] == 0
        for a, b in zip(pipeline.layout, pipeline.layout[1:]):
            assert a.offset + a.width == b.offset

    def test_refit_bit_identical(self, corpus, resources, tagger):
        one = fit_pipeline(corpus, resources, tagger, config=TOY_CONFIG, seed=3)
        two = fit_pipeline(corpus, resources, tagger, config=TOY_CONFIG, seed=3)
        assert one.word_vocab.grams == two.word_vocab.grams
        assert np.array_equal(one.word_vocab.idf, two.word_vocab.idf)
        assert np.array_equal(one.lsi_model.U, two.lsi_model.U)
        assert np.array_equal(one.scale_mean, two.scale_mean)
        for c1, c2 in zip(one.clusterings, two.clusterings):
            assert c1.assignment == c2.assignment

    def test_vocab_capped_at_top_k(self, pipeline):
        assert len(pipeline.word_vocab) <= 40
        assert len(pipeline.char_vocab) <= 60


class TestTransform:
    def test_no_nan_inf_on_training_corpus(self, pipeline, corpus):
        matrix = pipeline.transform_corpus(corpus.tweets)
        assert matrix.shape == (len(corpus), pipeline.width)
        assert np.all(np.isfinite(matrix))

    def test_empty_tweet_finite(self, pipeline):
        vec = pipeline.transform(RawTweet(id=999, text="")).values
        assert vec.shape == (pipeline.width,)
        assert np.all(np.isfinite(vec))
        word_block = next(b for b in pipeline.layout if b.name == "word_ngrams")
        assert not vec[word_block.offset : word_block.offset + word_block.width].any()
        # dense columns sit at their standardized-zero value (0 - mean) / std
        live = pipeline.scale_mask & (pipeline.scale_std >= 1e-12)
        np.testing.assert_allclose(
            vec[live], -pipeline.scale_mean[live] / pipeline.scale_std[live], atol=1e-12
        )
        assert not vec[pipeline.scale_mask & (pipeline.scale_std < 1e-12)].any()

    def test_deterministic(self, pipeline):
        tweet = RawTweet(id=1, text="I loooove mondays @boss #not")
        assert np.array_equal(pipeline.transform(tweet).values, pipeline.transform(tweet).values)

    def test_compositionality_of_blocks(self, pipeline, corpus, resources, tagger):
        tweet = corpus.tweets[4]
        processed = preprocess_corpus([tweet], resources, tagger)[0]
        vec = pipeline.transform(tweet).values
        blocks = {b.name: b for b in pipeline.layout}

        word = ngrams.vectorize_ngrams(processed, pipeline.word_vocab)
        spec = blocks["word_ngrams"]
        np.testing.assert_array_equal(vec[spec.offset : spec.offset + spec.width], word)

        pos = ngrams.vectorize_pos(processed, pipeline.pos_vocab)
        spec = blocks["pos"]
        np.testing.assert_array_equal(vec[spec.offset : spec.offset + spec.width], pos)

        raw_pol = polarity.polarity_block(processed, resources)
        spec = blocks["polarity"]
        mean = pipeline.scale_mean[spec.offset : spec.offset + spec.width]
        std = pipeline.scale_std[spec.offset : spec.offset + spec.width]
        expected = np.where(std < 1e-12, 0.0, (raw_pol - mean) / np.where(std < 1e-12, 1.0, std))
        np.testing.assert_allclose(
            vec[spec.offset : spec.offset + spec.width], expected, atol=1e-12
        )

    def test_no_leakage_transform_does_not_mutate(self, pipeline):
        before = (
            pipeline.word_vocab.grams,
            pipeline.scale_mean.copy(),
            pipeline.scale_std.copy(),
            tuple(c.assignment.items() for c in pipeline.clusterings),
        )
        pipeline.transform(RawTweet(id=5000, text="totally unseen wording zzzz"))
        assert pipeline.word_vocab.grams == before[0]
        assert np.array_equal(pipeline.scale_mean, before[1])
        assert np.array_equal(pipeline.scale_std, before[2])
        assert tuple(c.assignment.items() for c in pipeline.clusterings) == before[3]


class TestErrorAttribution:
    def test_semantic_failure_names_block(self, corpus, resources, tagger):
        from ironymlp.errors import ConfigError

        with pytest.raises(ConfigError, match="semantic block"):
            fit_pipeline(
                corpus, resources, tagger,
                config=FeatureConfig(lsi_k=10_000, brown_counts=(3,)), seed=0,
            )

    def test_lexical_failure_names_block(self, corpus, resources, tagger):
        from ironymlp.errors import ConfigError

        with pytest.raises(ConfigError, match="lexical block"):
            fit_pipeline(
                corpus, resources, tagger,
                config=FeatureConfig(word_top_k=0, lsi_k=4, brown_counts=(3,)), seed=0,
            )


class TestToggles:
    @pytest.mark.parametrize(
        "flag,family",
        [("lexical", "lexical"), ("syntactic", "syntactic"),
         ("semantic", "semantic"), ("polarity", "polarity")],
    )
    def test_disabling_block_shrinks_layout(self, corpus, resources, tagger, flag, family):
        full = fit_pipeline(corpus, resources, tagger, config=TOY_CONFIG, seed=3)
        toggled = fit_pipeline(
            corpus, resources, tagger,
            config=FeatureConfig(**{**TOY_CONFIG.__dict__, flag: False}), seed=3,
        )
        assert toggled.width == full.width - full.family_widths()[family]
        assert family not in toggled.family_widths()


class TestExport:
    def test_feature_matrix_round_trip(self, pipeline, corpus, tmp_path):
        path = tmp_path / "features.tsv"
        write_feature_matrix(path, pipeline, corpus.tweets[:5])
        lines = path.read_text(encoding="utf-8").splitlines()
        header = [ln for ln in lines if ln.startswith("# block")]
        rows = [ln for ln in lines if not ln.startswith("#")]
        assert len(header) == len(pipeline.layout)
        assert len(rows) == 5
        first = rows[0].split("\t")
        assert int(first[0]) == corpus.tweets[0].id
        values = np.array([float(v) for v in first[1:]])
        np.testing.assert_array_equal(values, pipeline.transform(corpus.tweets[0]).values)
