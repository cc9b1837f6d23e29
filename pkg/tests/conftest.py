import sys
from pathlib import Path

import pytest

from fcat.category import validate_category
from fcat.fcatfile import load
from fcat.model import from_block

HERE = Path(__file__).resolve().parent
CORPUS = HERE.parent / "corpus"
SMALL = ["terminal.fcat", "two.fcat", "chain3.fcat", "diamond.fcat", "finset3.fcat"]
ALL_FILES = SMALL + ["finset.fcat"]

sys.path.insert(0, str(HERE))


def corpus_doc(filename):
    return load(CORPUS / filename)


def corpus_models(filename):
    """Fresh ``(block, K, M)`` for every model block in a corpus file."""
    doc = corpus_doc(filename)
    K = validate_category(doc.category())
    return [(b, K, from_block(K, b)) for b in doc.models]


@pytest.fixture(scope="session")
def finset_doc():
    return corpus_doc("finset.fcat")


@pytest.fixture(scope="session")
def finset_K(finset_doc):
    return validate_category(finset_doc.category())


@pytest.fixture(scope="session")
def finset_trivial(finset_K, finset_doc):
    return from_block(finset_K, finset_doc.model("trivial"))
