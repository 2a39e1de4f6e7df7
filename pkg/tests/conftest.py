import os
from pathlib import Path

import pytest

from ironymlp.corpus import load_resources
from ironymlp.tokenization import TokenizedTweet, load_tagger

DATA_DIR = Path(__file__).parent / "data"


def official_path(*names):
    """First existing official dataset file under data/ or $IRONYMLP_DATA_DIR."""
    root = Path(os.environ.get("IRONYMLP_DATA_DIR", Path(__file__).parent.parent / "data"))
    for name in names:
        path = root / name
        if path.exists():
            return path
    return None


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "criterion(number, title): acceptance criterion metadata"
    )


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when == "call":
        marker = item.get_closest_marker("criterion")
        if marker:
            status = "PASS" if report.passed else ("SKIP" if report.skipped else "FAIL")
            number, title = marker.args
            print(f"\nACCEPTANCE CRITERION {number} [{status}]: {title}", flush=True)


@pytest.fixture(scope="session")
def resources():
    return load_resources()


@pytest.fixture(scope="session")
def tagger():
    return load_tagger()


def make_tweet(text, tweet_id=0, tags=None):
    """TokenizedTweet from a pre-tokenized string (tokens split on spaces)."""
    tokens = tuple(text.split())
    if tags is None:
        tags = ("NN",) * len(tokens)
    return TokenizedTweet(id=tweet_id, tokens=tokens, tags=tuple(tags), text=text)


def make_corpus(texts):
    return [make_tweet(text, tweet_id=i) for i, text in enumerate(texts)]
