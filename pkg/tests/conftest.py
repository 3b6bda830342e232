import sys
from pathlib import Path

import pytest

from transferpath import ingest_catalog, parse_transcript

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"

sys.path.insert(0, str(Path(__file__).resolve().parent))


@pytest.fixture(scope="session")
def snapshot():
    return ingest_catalog(FIXTURES / "catalog")


@pytest.fixture(scope="session")
def transfer_transcript(snapshot):
    text = (FIXTURES / "transcripts" / "two_cc_transfer.json").read_text(encoding="utf-8")
    return parse_transcript(text, snapshot.courses)


@pytest.fixture()
def catalog_dir():
    return FIXTURES / "catalog"


@pytest.fixture()
def transcript_path():
    return FIXTURES / "transcripts" / "two_cc_transfer.json"


@pytest.fixture()
def golden_dir():
    return Path(__file__).resolve().parent / "golden"
