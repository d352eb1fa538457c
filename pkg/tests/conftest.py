from pathlib import Path

import pytest

from semistar.corpus import build_corpus
from semistar.io import load_model

MODELS = Path(__file__).resolve().parent.parent / "models"


def model(name):
    return load_model(MODELS / f"model{name}.json")


@pytest.fixture(scope="session")
def models():
    return {name: model(name) for name in "ABCD"}


@pytest.fixture(scope="session")
def corpora(models):
    return {name: build_corpus(tree, seed=1, cases=200) for name, tree in models.items()}


@pytest.fixture(scope="session")
def A(models):
    return models["A"]


@pytest.fixture(scope="session")
def B(models):
    return models["B"]


@pytest.fixture(scope="session")
def C(models):
    return models["C"]


@pytest.fixture(scope="session")
def D(models):
    return models["D"]
