"""Reference tables shipped with the package and their recomputation."""
from __future__ import annotations

import json
from dataclasses import dataclass
from decimal import Decimal
from functools import lru_cache
from importlib import resources

from .asymptotics import RootEquation, solve_growth
from .enumeration import t4_sigma_total

TABLE_IDS = ("T000", "table1", "tab1b", "tab2", "tab3")


@lru_cache(maxsize=None)
def load_golden() -> dict:
    text = resources.files("pseudoknot").joinpath("data/golden.json").read_text("utf-8")
    return json.loads(text)


@dataclass(frozen=True)
class Check:
    table: str
    key: str
    expected: str
    computed: str
    ok: bool


def _key(entry: dict) -> str:
    parts = [f"k={entry['k']}"]
    if "sigma" in entry:
        parts.append(f"sigma={entry['sigma']}")
    if "n" in entry:
        parts.append(f"n={entry['n']}")
    return " ".join(parts)


def verify_table(table_id: str) -> list[Check]:
    """Recompute every entry of a reference table and compare at its tolerance."""
    if table_id not in TABLE_IDS:
        raise ValueError(f"unknown table {table_id!r}; expected one of {TABLE_IDS}")
    table = load_golden()[table_id]
    checks = []
    if table_id == "T000":
        for e in table["entries"]:
            got = t4_sigma_total(e["k"], e["sigma"], e["n"])
            checks.append(Check(table_id, _key(e), str(e["value"]), str(got), got == e["value"]))
        return checks
    tol = Decimal(str(table["tolerance"]))
    for e in table["entries"]:
        eq = RootEquation(table["kind"], e["k"], e.get("sigma"))
        rate = Decimal(str(solve_growth(eq).rate))
        expected = Decimal(e["value"])
        checks.append(
            Check(table_id, _key(e), e["value"], f"{rate:.6f}", abs(rate - expected) <= tol)
        )
    return checks
