from __future__ import annotations

import json
import os
from pathlib import Path

import pytest

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def published_tables() -> dict[int, dict[int, dict[int, int]]]:
    """Appendix W tables keyed ``k -> n -> D -> W``."""
    raw = json.loads((DATA / "w_tables.json").read_text())
    return {int(k): {int(n): {int(D): w for D, w in row.items()} for n, row in rows.items()} for k, rows in raw.items()}


def slow_enabled() -> bool:
    return os.environ.get("APCERT_SLOW", "") not in ("", "0")
