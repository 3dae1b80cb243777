"""Named arrangements used as worked examples and regression data.

Names take an optional size argument written ``name:k`` or ``name(k)``.
"""
from __future__ import annotations

import random
import re

from .arrangement import Arrangement
from .errors import InputError, UnknownName
from .scalar import Eis

W = Eis(0, 1)       # primitive cube root of unity
W2 = Eis(-1, -1)    # its square

_FIXED = {
    "braid-A3": [[1, 1, 0], [1, -1, 0], [1, 0, 1], [1, 0, -1], [0, 1, 1], [0, 1, -1]],
    "B3": [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, -1, 0], [1, 1, 0],
           [1, 0, -1], [1, 0, 1], [0, 1, -1], [0, 1, 1]],
    "deleted-B3": [[1, 0, 0], [0, 1, 0], [1, -1, 0], [1, 1, 0],
                   [1, 0, -1], [1, 0, 1], [0, 1, -1], [0, 1, 1]],
    "non-fano": [[0, 0, 1], [1, 1, 0], [1, -1, 0], [1, 0, 1], [1, 0, -1], [0, 1, 1], [0, 1, -1]],
    "ceva3": [[1, -1, 0], [1, -W, 0], [1, -W2, 0],
              [0, 1, -1], [0, 1, -W], [0, 1, -W2],
              [1, 0, -1], [1, 0, -W2], [1, 0, -W]],
    "hessian": [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    + [[1, (1, W, W2)[a], (1, W, W2)[b]] for a in range(3) for b in range(3)],
    "pappus-1": [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, -1, 0], [0, 1, -1],
                 [1, -1, -1], [2, 1, 1], [2, 1, -1], [2, -5, 1]],
    "pappus-2": [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 0], [0, 1, 1],
                 [1, 0, 3], [1, 2, 1], [1, 2, 3], [2, 3, 3]],
    "grunbaum-10": [[1, 0, 0], [0, 1, 0], [0, 0, 1], [-1, 1, 0], [1, 1, 0], [0, 2, -1],
                    [-1, 1, -1], [-1, 1, 1], [1, 1, 1], [1, 1, -1]],
}

_MULT = {"deleted-B3": [2, 1, 3, 3, 2, 2, 1, 1]}

_DEFAULT_SIZE = {"pencil": 4, "near-pencil": 4, "generic": 4, "boolean": 3}

CATALOG_NAMES = ["braid-A3", "B3", "deleted-B3", "ceva3", "hessian", "non-fano", "pappus-1",
                 "pappus-2", "pencil", "near-pencil", "generic", "boolean", "grunbaum-10"]


def pencil(k: int) -> Arrangement:
    """k concurrent lines through [0:0:1]."""
    if k < 1:
        raise InputError("pencil needs k >= 1")
    forms = [[1, 0, 0], [0, 1, 0]] + [[1, -j, 0] for j in range(1, k - 1)]
    return Arrangement(forms[:k], name=f"pencil:{k}")


def near_pencil(n: int) -> Arrangement:
    """x = 0 together with n-1 lines through [1:0:0]."""
    if n < 3:
        raise InputError("near-pencil needs n >= 3")
    forms = [[1, 0, 0]] + [[0, 1, -j] for j in range(n - 1)]
    return Arrangement(forms, name=f"near-pencil:{n}")


def boolean(n: int) -> Arrangement:
    forms = [[int(i == j) for j in range(n)] for i in range(n)]
    return Arrangement(forms, name=f"boolean:{n}")


def generic(n: int, seed: int = 0) -> Arrangement:
    """n lines in general position with small seeded integer coefficients."""
    rng = random.Random(seed)
    for _ in range(10000):
        forms = [[rng.randint(-9, 9) for _ in range(3)] for _ in range(n)]
        try:
            A = Arrangement(forms, name=f"generic:{n}:{seed}")
        except InputError:
            continue
        if n >= 3 and A.rank < 3:
            continue
        if all(len(X.hyperplanes) == 2 for X in A.flats2):
            return A
    raise InputError("could not draw a generic arrangement")


def _split(name: str):
    m = re.fullmatch(r"([A-Za-z0-9\-]+?)(?:[:(](\d+)(?::(\d+))?\)?)?", name.strip())
    if not m:
        raise UnknownName(f"unknown catalog name {name!r}")
    base, a, b = m.groups()
    return base, (int(a) if a else None), (int(b) if b else None)


def catalog_lookup(name: str):
    """Return (Arrangement, multiplicities or None)."""
    base, k, seed = _split(name)
    lower = {key.lower(): key for key in _FIXED}
    if base.lower() in lower and k is None:
        key = lower[base.lower()]
        return Arrangement(_FIXED[key], name=key), _MULT.get(key)
    if base in _DEFAULT_SIZE:
        k = k if k is not None else _DEFAULT_SIZE[base]
        if base == "pencil":
            return pencil(k), None
        if base == "near-pencil":
            return near_pencil(k), None
        if base == "boolean":
            return boolean(k), None
        return generic(k, seed or 0), None
    raise UnknownName(f"unknown catalog name {name!r}; known: {', '.join(CATALOG_NAMES)}")


def default_catalog():
    """The 13 catalog entries at their default sizes."""
    return [n if n not in _DEFAULT_SIZE else f"{n}:{_DEFAULT_SIZE[n]}" for n in CATALOG_NAMES]
