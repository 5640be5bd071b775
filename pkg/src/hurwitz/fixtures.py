"""Reference tables shipped with the package, used by ``selfcheck`` and tests."""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources


@lru_cache(maxsize=None)
def load(name: str) -> dict:
    text = resources.files("hurwitz").joinpath("data", f"{name}.json").read_text()
    return json.loads(text)


def transitive_rows(n_max: int) -> list[tuple[int, int, tuple[int, ...]]]:
    """Expand the (n, d) solvability table into concrete rows with n <= n_max."""
    rows = {}
    for row in load("hurwitz_transitive")["rows"]:
        tail = tuple(row["tail"])
        if row["case"] == "n = d":
            pairs = [(n, n) for n in range(3, n_max + 1)]
        elif row["case"] == "fixed":
            pairs = [(row["n"], row["d"])] if row["n"] <= n_max else []
        else:
            pairs = [(n, (n + 3) // 2) for n in range(5, n_max + 1, 2)]
        for n, d in pairs:
            rows[(n, d)] = (1,) * (n - 2) + tail
    return [(n, d, x) for (n, d), x in sorted(rows.items())]
