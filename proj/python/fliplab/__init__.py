"""Matrix multiplication schemes over Z2, Zp and Q."""

import json

from ._fliplab import (
    ContractError,
    ParseError,
    Scheme,
    StructuralError,
    __version__,
    combine,
    extend,
    project,
    rat_reconstruct,
    scheme_from_json,
    search,
    standard_scheme,
    strassen_scheme,
    verify,
)
from ._fliplab import lift as _lift


def lift(scheme, level=32):
    """Returns (rational scheme or None, report dict)."""
    rational, report = _lift(scheme, level)
    return rational, json.loads(report)


def load(path):
    with open(path, encoding="utf-8") as fh:
        return scheme_from_json(fh.read())


def save(scheme, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(scheme.to_json())


__all__ = [
    "ContractError",
    "ParseError",
    "Scheme",
    "StructuralError",
    "__version__",
    "combine",
    "extend",
    "lift",
    "load",
    "project",
    "rat_reconstruct",
    "save",
    "scheme_from_json",
    "search",
    "standard_scheme",
    "strassen_scheme",
    "verify",
]
