from __future__ import annotations

import pytest

from litscape.fixtures import generate_corpus, write_corpus
from litscape.pipeline import build_from_dir


@pytest.fixture(scope="session")
def corpus200():
    return generate_corpus(seed=7, n_papers=200, alignment_rate=0.74, collision_rate=0.05)


@pytest.fixture(scope="session")
def data_dir200(corpus200, tmp_path_factory):
    d = tmp_path_factory.mktemp("corpus200")
    write_corpus(corpus200, d)
    return d


@pytest.fixture(scope="session")
def build200(data_dir200):
    return build_from_dir(data_dir200)


@pytest.fixture(scope="session")
def snapshot200(build200):
    return build200.snapshot


@pytest.fixture(scope="session")
def corpus500():
    return generate_corpus(seed=20, n_papers=500, alignment_rate=0.7, collision_rate=0.04)


@pytest.fixture(scope="session")
def data_dir500(corpus500, tmp_path_factory):
    d = tmp_path_factory.mktemp("corpus500")
    write_corpus(corpus500, d)
    return d


@pytest.fixture(scope="session")
def snapshot500(data_dir500):
    return build_from_dir(data_dir500).snapshot
