"""Arrangements of linear forms, their rank-2 flats and Poincare data."""
from __future__ import annotations

import json
import random
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations

from .errors import (DimensionMismatch, DuplicateHyperplane, IndexOutOfRange,
                     InputError, UnsupportedRank, ZeroForm)
from .scalar import Eis, rank_exact, simplify_scalar


def _norm_coeff(c):
    if isinstance(c, Eis):
        return simplify_scalar(c)
    if isinstance(c, (list, tuple)):
        if len(c) != 2:
            raise InputError(f"coefficient {c!r} must be an integer or a pair [a, b] meaning a + b*w")
        return simplify_scalar(Eis(int(c[0]), int(c[1])))
    if isinstance(c, bool) or not isinstance(c, (int, Fraction)):
        if isinstance(c, str) and re.fullmatch(r"[+-]?\d+", c.strip()):
            return int(c)
        raise InputError(f"coefficient {c!r} is not an integer")
    return simplify_scalar(Fraction(c))


def cross(u, v):
    return (u[1] * v[2] - u[2] * v[1],
            u[2] * v[0] - u[0] * v[2],
            u[0] * v[1] - u[1] * v[0])


def dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def proportional(u, v) -> bool:
    for i in range(len(u)):
        for j in range(i + 1, len(u)):
            if u[i] * v[j] - u[j] * v[i] != 0:
                return False
    return True


def _normalize_point(P):
    lead = next(c for c in P if c != 0)
    return tuple(simplify_scalar(Eis.coerce(c) / lead) if isinstance(lead, Eis) or any(isinstance(x, Eis) for x in P)
                 else simplify_scalar(Fraction(c) / Fraction(lead)) for c in P)


@dataclass(frozen=True)
class Flat2:
    id: int
    hyperplanes: tuple
    mobius: int
    point: tuple | None = None

    def to_json(self):
        pt = None
        if self.point is not None:
            pt = [c.to_json() if isinstance(c, Eis) else (c if isinstance(c, int) else str(c))
                  for c in self.point]
        return {"id": self.id, "hyperplanes": [h + 1 for h in self.hyperplanes],
                "mobius": self.mobius, "point": pt}


class Arrangement:
    """Ordered central arrangement of hyperplanes given by linear forms."""

    def __init__(self, forms, labels=None, name=None, dim=None):
        forms = [tuple(_norm_coeff(c) for c in f) for f in forms]
        if not forms:
            raise InputError("an arrangement needs at least one hyperplane")
        d = dim if dim is not None else len(forms[0])
        for k, f in enumerate(forms):
            if len(f) != d:
                raise DimensionMismatch(f"form {k + 1} has {len(f)} coefficients, expected {d}")
            if all(c == 0 for c in f):
                raise ZeroForm(f"form {k + 1} is identically zero")
        for i, j in combinations(range(len(forms)), 2):
            if proportional(forms[i], forms[j]):
                raise DuplicateHyperplane(f"forms {i + 1} and {j + 1} are proportional")
        self.forms = tuple(forms)
        self.dim = d
        self.labels = tuple(labels) if labels else tuple(format_form(f) for f in forms)
        if len(self.labels) != len(forms):
            raise DimensionMismatch("label count does not match form count")
        self.name = name

    @property
    def n(self):
        return len(self.forms)

    @property
    def d(self):
        return self.dim - 1

    @cached_property
    def is_real(self):
        return not any(isinstance(c, Eis) for f in self.forms for c in f)

    @cached_property
    def rank(self):
        return rank_exact(self.forms)

    @property
    def essential(self):
        return self.rank == self.dim

    def sub(self, indices, name=None):
        idx = list(indices)
        B = Arrangement([self.forms[i] for i in idx], [self.labels[i] for i in idx],
                        name=name, dim=self.dim)
        if "flats2" in self.__dict__ and self.d == 2:
            # restricted flats come straight from the parent lattice
            pos = {h: k for k, h in enumerate(idx)}
            sets = []
            for X in self.flats2:
                S = tuple(sorted(pos[h] for h in X.hyperplanes if h in pos))
                if len(S) >= 2:
                    sets.append((S, X.point))
            sets.sort(key=lambda sp: (-len(sp[0]), sp[0]))
            B.__dict__["flats2"] = [Flat2(k, S, len(S) - 1, P) for k, (S, P) in enumerate(sets)]
        return B

    def __repr__(self):
        return f"Arrangement({self.name or ''!s}, n={self.n}, dim={self.dim})"

    def to_json(self):
        return {"dim": self.dim,
                "forms": [[c.to_json() if isinstance(c, Eis) else c for c in f] for f in self.forms],
                "labels": list(self.labels)}

    # -- lattice -----------------------------------------------------------
    @cached_property
    def flats2(self):
        return rank2_flats(self)

    @cached_property
    def pair_flat(self):
        """Map (i, j) with i < j to the id of the flat containing both."""
        out = {}
        for X in self.flats2:
            for i, j in combinations(X.hyperplanes, 2):
                out[(i, j)] = X.id
        return out

    def flat_of(self, i, j):
        if i > j:
            i, j = j, i
        return self.flats2[self.pair_flat[(i, j)]]

    @cached_property
    def flats_through(self):
        out = [[] for _ in range(self.n)]
        for X in self.flats2:
            for h in X.hyperplanes:
                out[h].append(X.id)
        return out


def format_form(f):
    names = ["x", "y", "z"] if len(f) == 3 else [f"z{i}" for i in range(len(f))]
    parts = []
    for c, v in zip(f, names):
        if c == 0:
            continue
        if isinstance(c, Eis):
            a, b = c.a, c.b
            s = "(" + (f"{a}" if a else "") + (f"{'+' if b > 0 and a else ''}{b}w") + ")"
            parts.append(f"+{s}{v}")
        elif c == 1:
            parts.append(f"+{v}")
        elif c == -1:
            parts.append(f"-{v}")
        else:
            parts.append(f"{'+' if c > 0 else ''}{c}{v}")
    s = "".join(parts)
    return s[1:] if s.startswith("+") else s


def _sort_flats(sets):
    return sorted(sets, key=lambda s: (-len(s), tuple(s)))


def _rank2_sets_general(forms):
    n = len(forms)
    seen, out = set(), []
    for i, j in combinations(range(n), 2):
        if (i, j) in seen:
            continue
        if len(forms[0]) == 3:
            P = cross(forms[i], forms[j])
            S = tuple(k for k in range(n) if dot(forms[k], P) == 0)
        else:
            S = tuple(k for k in range(n)
                      if k in (i, j) or rank_exact([forms[i], forms[j], forms[k]]) == 2)
        for a, b in combinations(S, 2):
            seen.add((a, b))
        out.append(S)
    return _sort_flats(out)


def rank2_flats(A: Arrangement) -> list:
    if A.d > 2:
        raise UnsupportedRank(f"rank-2 flats are computed for d <= 2 only (got d={A.d}); take a generic section first")
    if A.d < 1:
        return []
    if A.d == 1:
        if A.n < 2:
            return []
        return [Flat2(0, tuple(range(A.n)), A.n - 1, None)]
    flats = []
    for k, S in enumerate(_rank2_sets_general(A.forms)):
        P = _normalize_point(cross(A.forms[S[0]], A.forms[S[1]]))
        flats.append(Flat2(k, S, len(S) - 1, P))
    return flats


@dataclass
class LatticeSummary:
    flats2: list
    mu_center: int | None
    poincare_M: list
    poincare_U: list
    euler_U: int
    essential: bool

    @property
    def b2_M(self):
        return self.poincare_M[2] if len(self.poincare_M) > 2 else 0

    def to_json(self):
        return {"flats2": [X.to_json() for X in self.flats2], "mu_center": self.mu_center,
                "poincare_M": self.poincare_M, "poincare_U": self.poincare_U,
                "euler_U": self.euler_U, "essential": self.essential}


def mobius_poincare(A: Arrangement) -> LatticeSummary:
    flats = A.flats2
    n = A.n
    b2 = sum(X.mobius for X in flats)
    if A.rank <= 1:
        pm = [1, 1]
        mu_c = None
    elif A.rank == 2:
        pm = [1, n, b2]
        mu_c = None
    else:
        if A.rank > 3:
            raise UnsupportedRank("Poincare data is computed for rank <= 3")
        b3 = 1 - n + b2
        pm = [1, n, b2, b3]
        mu_c = -b3
    pu = [1]
    for k in range(1, len(pm) - 1):
        pu.append(pm[k] - pu[k - 1])
    assert pu[-1] == pm[-1] or len(pm) == 2 or pm[-1] == pu[-1]
    euler = sum((-1) ** k * c for k, c in enumerate(pu))
    return LatticeSummary(flats, mu_c, pm, pu, euler, A.essential)


def poly_mul_1t(pu):
    out = [0] * (len(pu) + 1)
    for k, c in enumerate(pu):
        out[k] += c
        out[k + 1] += c
    return out


def classify_shape(A: Arrangement) -> str:
    if A.d != 2 and A.d != 1:
        raise UnsupportedRank("shape classification needs d = 2")
    n = A.n
    flats = A.flats2
    if n <= 2 or any(len(X.hyperplanes) == n for X in flats):
        return "pencil"
    # a flat of size n - 1 forces the last line to be transverse to the rest
    if n >= 3 and any(len(X.hyperplanes) == n - 1 for X in flats):
        return "near-pencil"
    if all(len(X.hyperplanes) == 2 for X in flats):
        return "generic-position"
    return "other"


def delete_hyperplane(A: Arrangement, H: int) -> Arrangement:
    if A.n < 2:
        raise IndexOutOfRange("cannot delete from an arrangement with fewer than 2 hyperplanes")
    if not 0 <= H < A.n:
        raise IndexOutOfRange(f"hyperplane index {H + 1} out of range 1..{A.n}")
    keep = [i for i in range(A.n) if i != H]
    return A.sub(keep, name=(A.name + f"-del{H + 1}") if A.name else None)


def generic_section(A: Arrangement, seed: int = 0, max_tries: int = 200) -> Arrangement:
    """Restrict a rank > 3 arrangement to a generic 3-dimensional subspace."""
    if A.dim <= 3:
        return A
    rng = random.Random(seed)
    target = [tuple(S) for S in _rank2_sets_general(A.forms)]
    for _ in range(max_tries):
        L = [[rng.randint(-5, 5) for _ in range(3)] for _ in range(A.dim)]
        forms = [tuple(sum(f[k] * L[k][c] for k in range(A.dim)) for c in range(3)) for f in A.forms]
        if any(all(c == 0 for c in f) for f in forms):
            continue
        if any(proportional(forms[i], forms[j]) for i, j in combinations(range(len(forms)), 2)):
            continue
        if [tuple(S) for S in _rank2_sets_general(forms)] != target:
            continue
        if rank_exact(forms) < min(3, A.rank):
            continue
        return Arrangement(forms, A.labels, name=(A.name or "A") + "-section")
    raise InputError("no generic section found")


# ---------------------------------------------------------------------------
# parsing


_TOKEN = re.compile(r"\s*(?:(\d+)|(z\d+|[xyzw])|(\^)|([-+*()]))")


def _tokenize(text):
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise InputError(f"unexpected character at column {pos + 1}: {text[pos:pos + 10]!r}")
        num, name, caret, op = m.groups()
        if num is not None:
            out.append(("num", int(num)))
        elif name is not None:
            out.append(("name", name))
        elif caret:
            out.append(("op", "^"))
        else:
            out.append(("op", op))
        pos = m.end()
    return out


class _PolyParser:
    """Products of linear forms; integer (or w-multiple) coefficients."""

    def __init__(self, text):
        self.toks = _tokenize(text)
        self.i = 0
        names = [t[1] for t in self.toks if t[0] == "name" and t[1] != "w"]
        if any(nm.startswith("z") and nm != "z" for nm in names):
            if any(nm in ("x", "y", "z") for nm in names):
                raise InputError("mixing x,y,z with z0..zd variables is not supported")
            self.vars = {f"z{k}": k for k in range(max(int(nm[1:]) for nm in names) + 1)}
        else:
            self.vars = {"x": 0, "y": 1, "z": 2}
        self.dim = len(self.vars)

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def parse(self):
        factors = []
        sign = 1
        while self.peek() == ("op", "-") or self.peek() == ("op", "+"):
            if self.take()[1] == "-":
                sign = -sign
        while self.i < len(self.toks):
            if self.peek() == ("op", "*"):
                self.take()
                continue
            kind, val = self.peek()
            if kind == "num" and (self.i + 1 == len(self.toks) or self.toks[self.i + 1] in (("op", "*"), ("op", "("))):
                self.take()  # constant scalar factor, ignored
                continue
            if kind == "op" and val == "(":
                self.take()
                form = self.linear()
                if self.take() != ("op", ")"):
                    raise InputError("missing ')'")
            elif kind == "name" and val != "w":
                self.take()
                form = [0] * self.dim
                form[self.vars[val]] = 1
            else:
                raise InputError(f"unexpected token {val!r} at position {self.i + 1}")
            power = 1
            if self.peek() == ("op", "^"):
                self.take()
                k, v = self.take()
                if k != "num":
                    raise InputError("exponent must be an integer")
                power = v
            factors.append((form, power))
        return factors

    def linear(self):
        form = [0] * self.dim
        seen_term = False
        while True:
            sign = 1
            while self.peek() in (("op", "+"), ("op", "-")):
                if self.take()[1] == "-":
                    sign = -sign
            coef, var = Eis(sign), None
            got = False
            while True:
                kind, val = self.peek()
                if kind == "num":
                    self.take()
                    coef = coef * val
                    got = True
                elif kind == "name" and val == "w":
                    self.take()
                    coef = coef * Eis(0, 1)
                    got = True
                elif kind == "name":
                    if var is not None:
                        raise InputError("nonlinear term inside a factor (only products of linear forms are accepted)")
                    self.take()
                    var = self.vars.get(val)
                    if var is None:
                        raise InputError(f"unknown variable {val}")
                    got = True
                elif kind == "op" and val == "*":
                    self.take()
                    continue
                elif kind == "op" and val == "^":
                    raise InputError("powers inside a factor are not accepted; write products of linear forms")
                else:
                    break
            if not got:
                if seen_term:
                    raise InputError("dangling operator in linear form")
                break
            if var is None:
                raise InputError("constant term in a linear form (forms must be homogeneous)")
            form[var] = form[var] + coef
            seen_term = True
            if self.peek() not in (("op", "+"), ("op", "-")):
                break
        return [simplify_scalar(Eis.coerce(c)) for c in form]


def parse_polynomial(text: str):
    """Return (forms, multiplicities) for a product of linear forms."""
    p = _PolyParser(text)
    factors = p.parse()
    if not factors:
        raise InputError("empty polynomial")
    return [f for f, _ in factors], [k for _, k in factors]


def parse_arrangement(text: str):
    """Parse the JSON document (or a polynomial string); returns (A, m or None)."""
    stripped = text.strip()
    if not stripped.startswith("{"):
        forms, mult = parse_polynomial(stripped)
        A = Arrangement(forms)
        return A, (mult if any(k != 1 for k in mult) else None)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"JSON parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if "forms" not in doc:
        raise InputError("missing 'forms'")
    forms = doc["forms"]
    dim = doc.get("dim")
    if dim is not None and any(len(f) != dim for f in forms):
        bad = next(k for k, f in enumerate(forms) if len(f) != dim)
        raise DimensionMismatch(f"form {bad + 1} has {len(forms[bad])} coefficients, expected dim={dim}")
    A = Arrangement(forms, doc.get("labels"), name=doc.get("name"), dim=dim)
    m = doc.get("multiplicities")
    if m is not None:
        if len(m) != A.n or any((not isinstance(x, int)) or x < 1 for x in m):
            raise DimensionMismatch("multiplicities must be positive integers, one per form")
    return A, m
