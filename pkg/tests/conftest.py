from pathlib import Path

import pytest

from vanref import normalize_database, parse_database

DATA_DIR = Path(__file__).parent / "data"
BIB_PATH = DATA_DIR / "vancouver.bib"
TEX_PATH = DATA_DIR / "manuscript.tex"
EXPECTED_PATH = DATA_DIR / "expected_refs.txt"


@pytest.fixture(scope="session")
def corpus_bib_text() -> str:
    return BIB_PATH.read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def corpus_tex_text() -> str:
    return TEX_PATH.read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def expected_lines() -> list[str]:
    return EXPECTED_PATH.read_text(encoding="utf-8").splitlines()


@pytest.fixture(scope="session")
def corpus_db(corpus_bib_text):
    db = parse_database(corpus_bib_text)
    assert not db.diagnostics
    return db


@pytest.fixture(scope="session")
def corpus_records(corpus_db):
    records, diagnostics = normalize_database(corpus_db.entries)
    assert not diagnostics
    return {record.key: record for record in records}
