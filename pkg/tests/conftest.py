from pathlib import Path

import pytest

from biblionet.wos_ingest import merge_corpora, parse_file

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def fixture_paths() -> list[Path]:
    return [DATA_DIR / "wos_tagged_part1.txt", DATA_DIR / "wos_tagged_part2.txt"]


@pytest.fixture(scope="session")
def fixture_corpus(fixture_paths):
    parts = [parse_file(path).records for path in fixture_paths]
    return merge_corpora(parts)


@pytest.fixture(scope="session")
def tab_fixture_path() -> Path:
    return DATA_DIR / "wos_tab.txt"
