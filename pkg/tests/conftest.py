import pytest

from interviewkit.extract import extract_features
from interviewkit.manifest import load_manifest
from interviewkit.synthetic import make_planted_corpus, write_mini_corpus


@pytest.fixture(scope="session")
def mini_corpus_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("mini_corpus")
    write_mini_corpus(out)
    return out


@pytest.fixture(scope="session")
def mini_manifest(mini_corpus_dir):
    return mini_corpus_dir / "manifest.json"


@pytest.fixture(scope="session")
def mini_records(mini_manifest):
    return load_manifest(mini_manifest)


@pytest.fixture(scope="session")
def mini_features(mini_records):
    return extract_features(mini_records)


@pytest.fixture(scope="session")
def planted_corpus():
    return make_planted_corpus(n_records=60, seed=0)
