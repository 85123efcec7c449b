"""Access to the bundled read-only data files.

certs/h{k}_expansion.json : the full bivariate polynomial h_k, k = 1..7
certs/h{k}_sos.json       : weighted-square certificate for h_k's bracket
data/g_appendix.json      : the reference expansion of g

All files use the polynomial JSON format ({"vars": [...], "terms": [...]})
with coefficients as exact rational strings.
"""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

from .polyring import MultiPoly


def _read(package_dir: str, name: str) -> dict:
    ref = resources.files(__package__).joinpath(package_dir).joinpath(name)
    with ref.open("r", encoding="utf-8") as fh:
        return json.load(fh)


@lru_cache(maxsize=None)
def load_h_expansion(m2: int) -> MultiPoly:
    """Bundled reference expansion of h_{m2}, 1 <= m2 <= 7."""
    if not 1 <= m2 <= 7:
        raise ValueError("bundled h expansions exist for m2 in 1..7")
    return MultiPoly.from_json_dict(_read("certs", f"h{m2}_expansion.json"))


@lru_cache(maxsize=None)
def load_certificate_dict(m2: int) -> dict:
    """Raw certificate JSON for h_{m2}'s bracket, 1 <= m2 <= 7."""
    if not 1 <= m2 <= 7:
        raise ValueError("bundled certificates exist for m2 in 1..7")
    return _read("certs", f"h{m2}_sos.json")


@lru_cache(maxsize=None)
def load_g_appendix() -> MultiPoly:
    """Bundled reference expansion of g over (a, b, c)."""
    return MultiPoly.from_json_dict(_read("data", "g_appendix.json"))
