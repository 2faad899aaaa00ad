import pathlib
import sys

import pytest

sys.path.insert(0, str(pathlib.Path(__file__).parent))

import lda

ROOT = pathlib.Path(__file__).resolve().parent.parent


@pytest.fixture(scope="session")
def repo():
    return ROOT


@pytest.fixture(scope="session")
def seed_kb():
    return lda.load_kb_file(ROOT / "kb" / "core.kb.json")


@pytest.fixture(scope="session")
def calc_desc():
    return lda.load_description_file(ROOT / "golden" / "calc.desc.json")


@pytest.fixture(scope="session")
def calccond_desc():
    return lda.load_description_file(ROOT / "golden" / "calccond.desc.json")


@pytest.fixture(scope="session")
def calc_log():
    return lda.decisions_from_json(
        (ROOT / "fixtures" / "calc.decisions.json").read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def calccond_log():
    return lda.decisions_from_json(
        (ROOT / "fixtures" / "calccond.decisions.json").read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def ppbe_corpus():
    corpus = ROOT / "fixtures" / "ppbe"
    return [(f.name, f.read_text(encoding="utf-8")) for f in sorted(corpus.glob("*.ex"))]
