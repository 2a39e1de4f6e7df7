import numpy as np
import pytest

from ironymlp.errors import ConfigError
from ironymlp.lsi import fit_lsi, project, term_vector
from ironymlp.lsi import _dense_svd, _fix_column_signs, _randomized_svd

from conftest import make_corpus, make_tweet
from oracles import jacobi_svd

TEXTS = [
    "the cat sat on the mat",
    "a dog ran in the park",
    "the dog and the cat play",
    "birds fly over the park",
    "cats chase birds all day",
    "the mat is old",
    "dogs and cats and birds",
    "a long day in the sun",
]


def fitted(k=3, method="dense"):
    return fit_lsi(make_corpus(TEXTS), k=k, min_df=2, method=method, seed=9)


class TestFit:
    def test_rank_deficient_sigma(self):
        corpus = make_corpus(["a b c", "a b c", "a b c", "a b c"])
        model = fit_lsi(corpus, k=3, min_df=1, method="dense")
        assert model.sigma[0] > 0.1
        assert model.sigma[1] == pytest.approx(0.0, abs=1e-8)
        assert model.sigma[2] == pytest.approx(0.0, abs=1e-8)

    def test_k_zero_rejected(self):
        with pytest.raises(ConfigError):
            fit_lsi(make_corpus(TEXTS), k=0)

    def test_k_too_large_names_maximum(self):
        with pytest.raises(ConfigError, match="1.."):
            fit_lsi(make_corpus(TEXTS), k=10_000, min_df=2)

    def test_empty_corpus(self):
        with pytest.raises(ConfigError):
            fit_lsi([], k=2)

    def test_sigma_descending_nonnegative(self):
        model = fitted(k=4)
        assert np.all(np.diff(model.sigma) <= 1e-12)
        assert np.all(model.sigma >= 0)

    def test_u_orthonormal(self):
        model = fitted(k=4)
        gram = model.U.T @ model.U
        np.testing.assert_allclose(gram, np.eye(4), atol=1e-8)

    def test_randomized_close_to_dense(self):
        dense = fitted(k=3, method="dense")
        randomized = fitted(k=3, method="randomized")
        np.testing.assert_allclose(randomized.sigma, dense.sigma, atol=1e-8)
        np.testing.assert_allclose(np.abs(randomized.U), np.abs(dense.U), atol=1e-6)

    def test_randomized_deterministic_given_seed(self):
        one = fit_lsi(make_corpus(TEXTS), k=3, method="randomized", seed=5)
        two = fit_lsi(make_corpus(TEXTS), k=3, method="randomized", seed=5)
        assert np.array_equal(one.U, two.U) and np.array_equal(one.sigma, two.sigma)


class TestSvdOracle:
    """Solver output vs the independent Jacobi SVD at desk scale."""

    def random_matrix(self, seed, shape):
        rng = np.random.default_rng(seed)
        return rng.standard_normal(shape)

    @pytest.mark.parametrize("seed", range(10))
    def test_full_rank_matches_jacobi(self, seed):
        shape = (4 + seed % 5, 3 + seed % 4)
        A = self.random_matrix(seed, shape)
        k = min(shape)
        U, sigma = _randomized_svd(A, k, seed=seed + 100)
        _, sigma_oracle, _ = jacobi_svd(A)
        np.testing.assert_allclose(sigma, sigma_oracle[:k], atol=1e-8)
        np.testing.assert_allclose(U.T @ U, np.eye(k), atol=1e-8)

    def test_hand_matrix_k2_matches_oracle_up_to_sign(self):
        A = np.array(
            [
                [2.0, 0.0, 1.0],
                [0.0, 3.0, 1.0],
                [1.0, 1.0, 0.0],
                [0.0, 1.0, 2.0],
            ]
        )
        U, sigma = _dense_svd(A, 2)
        U = _fix_column_signs(U)
        U_o, sigma_o, _ = jacobi_svd(A)
        U_o = _fix_column_signs(U_o[:, :2])
        np.testing.assert_allclose(sigma, sigma_o[:2], atol=1e-10)
        np.testing.assert_allclose(U, U_o, atol=1e-8)

    @pytest.mark.parametrize("seed", [1, 2])
    def test_reconstruction_error_non_increasing(self, seed):
        A = self.random_matrix(seed, (6, 5))
        errors = []
        for k in range(1, 6):
            U, _ = _dense_svd(A, k)
            errors.append(np.linalg.norm(A - U @ (U.T @ A)))
        assert all(errors[i] >= errors[i + 1] - 1e-10 for i in range(len(errors) - 1))


class TestProject:
    def test_oov_tweet_is_zero(self):
        model = fitted()
        assert not project(make_tweet("zzz qqq"), model).any()

    def test_training_document_matches_v_row(self):
        model = fitted(k=3)
        # V row from the oracle SVD of the same tf-idf matrix the model used
        corpus = make_corpus(TEXTS)
        terms = sorted(model.term_index, key=model.term_index.get)
        A = np.zeros((len(terms), len(corpus)))
        for j, tweet in enumerate(corpus):
            A[:, j] = term_vector(tweet.tokens, model)
        U_o, sigma_o, V_o = jacobi_svd(A)
        # align oracle signs with the model's sign convention
        for col in range(3):
            idx = int(np.argmax(np.abs(U_o[:, col])))
            if U_o[idx, col] < 0:
                U_o[:, col] = -U_o[:, col]
                V_o[:, col] = -V_o[:, col]
        for j, tweet in enumerate(corpus):
            np.testing.assert_allclose(project(tweet, model), V_o[j, :3], atol=1e-6)

    def test_duplicate_document_same_projection(self):
        model = fitted()
        one = project(make_tweet(TEXTS[0]), model)
        two = project(make_tweet(TEXTS[0]), model)
        assert np.array_equal(one, two)

    def test_projection_linear_in_raw_vector(self):
        model = fitted(k=3)
        q1 = term_vector(["cat", "dog"], model)
        q2 = term_vector(["park", "the", "the"], model)
        combined = 2.0 * q1 + 0.5 * q2
        safe = model.sigma > 1e-12
        lhs = np.zeros(model.k)
        lhs[safe] = (model.U.T @ combined)[safe] / model.sigma[safe]
        rhs = np.zeros(model.k)
        rhs[safe] = (2.0 * (model.U.T @ q1) + 0.5 * (model.U.T @ q2))[safe] / model.sigma[safe]
        np.testing.assert_allclose(lhs, rhs, atol=1e-12)

    def test_tiny_sigma_coordinates_zeroed(self):
        corpus = make_corpus(["a b", "a b", "a b"])
        model = fit_lsi(corpus, k=2, min_df=1, method="dense")
        assert model.sigma[1] < 1e-12
        coords = project(make_tweet("a b"), model)
        assert coords[1] == 0.0
