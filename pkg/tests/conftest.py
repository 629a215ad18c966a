import json
from pathlib import Path

import numpy as np
import pytest

from src.models.catalog import CatalogEngine
from src.models.designs import DifferenceFamily, verify_df
from src.models.groups import AbelianGroup, parse_subset
from src.settings import get_settings


@pytest.fixture(autouse=True)
def fresh_settings(monkeypatch):
    for name in ("ECTFF_CATALOG", "ECTFF_TOL", "ECTFF_WINDOW", "ECTFF_PROGRESS", "ECTFF_LOG_LEVEL"):
        monkeypatch.delenv(name, raising=False)
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture(scope="session")
def engine():
    return CatalogEngine()


@pytest.fixture
def z13():
    return AbelianGroup.cyclic(13)


@pytest.fixture
def df13(z13) -> DifferenceFamily:
    """{1,3,9}, {2,6,5}: every nonzero element of Z13 appears once as a difference."""
    df = verify_df(z13, [parse_subset(z13, [1, 3, 9]), parse_subset(z13, [2, 6, 5])])
    assert df is not None
    return df


@pytest.fixture
def df13_file(tmp_path: Path) -> Path:
    path = tmp_path / "df13.json"
    path.write_text(json.dumps({"schema": "ectff-family/1", "group": "Z13",
                                "blocks": [[1, 3, 9], [2, 6, 5]], "lam": 1}), encoding="utf-8")
    return path
