"""Braid monodromy presentations of arrangement groups.

Words in a free group are lists of nonzero ints: ``k`` is the generator
x_k (1-based) and ``-k`` its inverse.  Braid words use the same encoding
for the Artin generators sigma_k.  A braid acts on words letter by letter,
first letter first, with

    sigma_i:       x_i -> x_i x_{i+1} x_i^-1,   x_{i+1} -> x_i
    sigma_i^-1:    x_i -> x_{i+1},              x_{i+1} -> x_{i+1}^-1 x_i x_{i+1}
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np

from .arrangement import Arrangement
from .errors import InputError, NonGeneric, UnsupportedRank
from .scalar import Eis, re_part, im_part, smith_normal_form


# ---------------------------------------------------------------------------
# free group words


def free_reduce(w):
    out = []
    for a in w:
        if out and out[-1] == -a:
            out.pop()
        else:
            out.append(a)
    return out


def inv(w):
    return [-a for a in reversed(w)]


def mul(*ws):
    out = []
    for w in ws:
        out.extend(w)
    return free_reduce(out)


def commutator(a, b):
    return mul(a, b, inv(a), inv(b))


def abelianize(w, n):
    v = [0] * n
    for a in w:
        v[abs(a) - 1] += 1 if a > 0 else -1
    return v


# ---------------------------------------------------------------------------
# Artin action


def _letter_image(letter, gen):
    i = abs(letter)
    if letter > 0:
        if gen == i:
            return [i, i + 1, -i]
        if gen == i + 1:
            return [i]
    else:
        if gen == i:
            return [i + 1]
        if gen == i + 1:
            return [-(i + 1), i, i + 1]
    return [gen]


def apply_letter(letter, w):
    out = []
    for a in w:
        img = _letter_image(letter, abs(a))
        out.extend(img if a > 0 else inv(img))
    return free_reduce(out)


def artin_action(braid, w):
    for letter in braid:
        w = apply_letter(letter, w)
    return w


def braid_inverse(b):
    return [-a for a in reversed(b)]


def braid_images(braid, n):
    return [tuple(artin_action(braid, [k])) for k in range(1, n + 1)]


def braids_equal(b1, b2, n):
    """Equality in B_n (the Artin representation is faithful).

    Free-group images grow exponentially in the length of mixed-sign
    words; use burau_equal as a screen for long braids.
    """
    return braid_images(b1, n) == braid_images(b2, n)


def burau_matrix(braid, n, t=123457, p=1000003):
    """Unreduced Burau image of a braid, evaluated at t over GF(p)."""
    M = np.eye(n, dtype=np.int64)
    ti = pow(t, p - 2, p)
    for a in braid:
        i = abs(a) - 1
        G = np.eye(n, dtype=np.int64)
        if a > 0:
            G[i, i], G[i, i + 1], G[i + 1, i], G[i + 1, i + 1] = (1 - t) % p, t, 1, 0
        else:
            G[i, i], G[i, i + 1], G[i + 1, i], G[i + 1, i + 1] = 0, 1, ti, (1 - ti) % p
        M = (M @ G) % p
    return M


def burau_equal(b1, b2, n, t=123457, p=1000003):
    """Necessary condition for equality in B_n (Burau at a random point)."""
    return bool(np.array_equal(burau_matrix(b1, n, t, p), burau_matrix(b2, n, t, p)))


def pure_generator(i, j):
    """A_ij for 1-based strands i < j."""
    if i > j:
        i, j = j, i
    up = list(range(j - 1, i, -1))
    return up + [i, i] + [-a for a in reversed(up)]


def full_twist(strands):
    """A_I: full twist on the strand set I (any increasing tuple)."""
    s = sorted(strands)
    out = []
    for b in range(1, len(s)):
        for a in range(b):
            out += pure_generator(s[a], s[b])
    return out


def block_full_twist(k, m):
    """(sigma_k ... sigma_{k+m-2})^m on the contiguous strands k..k+m-1."""
    return list(range(k, k + m - 1)) * m


# ---------------------------------------------------------------------------
# presentations


@dataclass
class GroupPresentation:
    ngens: int
    relators: list
    kind: str = "other"
    names: list | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.names is None:
            self.names = [f"x{i}" for i in range(1, self.ngens + 1)]

    def to_json(self):
        return {"gens": self.ngens, "names": list(self.names), "kind": self.kind,
                "relators": [list(r) for r in self.relators]}

    def abelianization_matrix(self):
        return [abelianize(r, self.ngens) for r in self.relators]

    def abelianization(self):
        """(free rank, torsion coefficients) of H_1."""
        M = self.abelianization_matrix()
        if not M:
            return self.ngens, []
        diag, r = smith_normal_form(M)
        tors = [d for d in diag if d > 1]
        return self.ngens - r, tors

    def is_commutator_relators(self):
        return all(not any(abelianize(r, self.ngens)) for r in self.relators)

    def word_str(self, w):
        return "".join(self.names[abs(a) - 1] + ("" if a > 0 else "^-1") for a in w) or "1"


# ---------------------------------------------------------------------------
# generic affine charts


def _affine_lines(forms, M):
    """Forms pulled back along (u, v, 1) -> M (u, v, 1); returns slopes, intercepts."""
    out = []
    for f in forms:
        a = sum(f[r] * M[r][0] for r in range(3))
        b = sum(f[r] * M[r][1] for r in range(3))
        c = sum(f[r] * M[r][2] for r in range(3))
        if b == 0:
            return None
        if isinstance(b, Eis) or isinstance(a, Eis) or isinstance(c, Eis):
            a, b, c = Eis.coerce(a), Eis.coerce(b), Eis.coerce(c)
            out.append((-(a / b), -(c / b)))
        else:
            out.append((-Fraction(a) / b, -Fraction(c) / b))
    return out


def _event_abscissae(A, lines):
    slopes = [s for s, _ in lines]
    if len(set(slopes)) != len(slopes):
        return None
    xs = []
    for X in A.flats2:
        i, j = X.hyperplanes[:2]
        (ai, bi), (aj, bj) = lines[i], lines[j]
        xs.append((bj - bi) / (ai - aj))
    if len(set(xs)) != len(xs):
        return None
    return xs


@dataclass
class ShearRecord:
    c: int
    s1: int
    s2: int
    matrix: list

    def to_json(self):
        return {"c": self.c, "s1": self.s1, "s2": self.s2}


def _shear_matrix(c, s1, s2):
    # x = u + c v, y = v, z = s1 u + s2 v + w
    return [[1, c, 0], [0, 1, 0], [s1, s2, 1]]


def _shear_candidates():
    total = 0
    while True:
        for c in range(total + 1):
            rest = total - c
            for a in range(-rest, rest + 1):
                b = rest - abs(a)
                for s2 in sorted({b, -b}, key=lambda t: (abs(t), -t)):
                    yield c, a, s2
        total += 1


def generic_shear(A: Arrangement, max_tries: int = 20000):
    """Smallest deterministic chart change putting every event at a distinct finite abscissa.

    Returns (lines, abscissae, record) with lines[i] = (slope, intercept).
    """
    if A.d != 2:
        raise UnsupportedRank("braid monodromy needs a rank-3 line arrangement")
    for t, (c, s1, s2) in enumerate(_shear_candidates()):
        if t > max_tries:
            break
        M = _shear_matrix(c, s1, s2)
        lines = _affine_lines(A.forms, M)
        if lines is None:
            continue
        xs = _event_abscissae(A, lines)
        if xs is None:
            continue
        return lines, xs, ShearRecord(c, s1, s2, M)
    raise NonGeneric("no generic chart found")


# ---------------------------------------------------------------------------
# real arrangements: wiring diagrams


@dataclass
class WiringEvent:
    x: Fraction
    flat: int
    I: tuple       # wire labels through the vertex, increasing
    lower: tuple
    upper: tuple
    J: tuple


@dataclass
class WiringDiagram:
    label_of_line: list     # hyperplane index -> wire label (1-based)
    line_of_label: list     # wire label -> hyperplane index (0-based)
    events: list
    shear: ShearRecord

    def to_json(self):
        return {"line_of_label": [h + 1 for h in self.line_of_label],
                "shear": self.shear.to_json(),
                "events": [{"x": str(e.x), "I": list(e.I), "lower": list(e.lower),
                            "upper": list(e.upper), "J": list(e.J)} for e in self.events]}


def wiring_diagram(A: Arrangement) -> WiringDiagram:
    if not A.is_real:
        raise InputError("wiring diagrams need a complexified-real arrangement")
    lines, xs, rec = generic_shear(A)
    n = A.n
    # wire labels bottom to top at the far left: larger slope is lower
    order = sorted(range(n), key=lambda h: (-lines[h][0], lines[h][1]))
    label = [0] * n
    for k, h in enumerate(order):
        label[h] = k + 1
    events = []
    for X, x in sorted(zip(A.flats2, xs), key=lambda t: t[1]):
        yq = lines[X.hyperplanes[0]][0] * x + lines[X.hyperplanes[0]][1]
        I = tuple(sorted(label[h] for h in X.hyperplanes))
        lower, upper = [], []
        for h in range(n):
            if h in X.hyperplanes:
                continue
            y = lines[h][0] * x + lines[h][1]
            (lower if y < yq else upper).append(label[h])
        J = tuple(sorted(j for j in upper if I[0] < j < I[-1]))
        events.append(WiringEvent(x, X.id, I, tuple(sorted(lower)), tuple(sorted(upper)), J))
    return WiringDiagram(label, order, events, rec)


def conjugating_braids(w: WiringDiagram):
    """delta_q = prod_{i in I_q} prod_{j in J_q, j < i} A_{ji}.

    Only pairs with j < i contribute (A_{ji} is indexed lower strand first);
    the resulting loops multiply to the full twist, checked in the tests.
    """
    out = []
    for e in w.events:
        d = []
        for i in e.I:
            for j in e.J:
                if j < i:
                    d += pure_generator(j, i)
        out.append(d)
    return out


def _relabel(word, line_of_label):
    return [(line_of_label[abs(a) - 1] + 1) * (1 if a > 0 else -1) for a in word]


def presentation_wiring(A: Arrangement) -> GroupPresentation:
    w = wiring_diagram(A)
    rels = []
    for e, d in zip(w.events, conjugating_braids(w)):
        b = braid_inverse(d) + full_twist(e.I) + d
        for i in e.I[:-1]:
            r = mul(artin_action(b, [i]), [-i])
            rels.append(_relabel(r, w.line_of_label))
    central = [h + 1 for h in w.line_of_label]
    return GroupPresentation(A.n, rels, "complement",
                             meta={"method": "wiring", "shear": w.shear.to_json(), "central": central})


# ---------------------------------------------------------------------------
# general (complex) braid monodromy along straight paths


@dataclass
class MonodromyDatum:
    flat: int
    block: tuple          # (first position, size) of the colliding strands
    path: list            # braid word of the straight path from the base point
    angle_key: tuple


@dataclass
class BraidMonodromy:
    base: object
    line_at_position: list   # position (0-based) -> hyperplane index
    data: list
    shear: ShearRecord


def _cross_key(v):
    """Sort key giving the counterclockwise angle order of nonzero (re, im) vectors."""
    x, y = v
    half = 0 if (y > 0 or (y == 0 and x > 0)) else 1
    return half, x, y


def _angle_cmp(u, v):
    hu, hv = _cross_key(u)[0], _cross_key(v)[0]
    if hu != hv:
        return -1 if hu < hv else 1
    cr = u[0] * v[1] - u[1] * v[0]
    return -1 if cr > 0 else (1 if cr < 0 else 0)


def _monodromy_attempt(A, lines, xs, x0):
    n = A.n
    y0 = [s * x0 + b for s, b in lines]
    re0 = [re_part(v) for v in y0]
    if len(set(re0)) != n:
        return None
    pos_order = sorted(range(n), key=lambda h: re0[h])
    data = []
    flats = A.flats2
    for X, xq in zip(flats, xs):
        d = xq - x0
        if not d:
            return None
        for xr in xs:
            if xr is xq or xr == xq:
                continue
            ratio = (xr - x0) / d if isinstance(d, Eis) else Fraction(xr - x0) / d
            if im_part(ratio) == 0 and 0 < re_part(ratio) < 1:
                return None
        I = set(X.hyperplanes)
        yq = lines[X.hyperplanes[0]][0] * xq + lines[X.hyperplanes[0]][1]
        # distinct points of the critical fiber need distinct real parts
        fib = {}
        for h in range(n):
            v = yq if h in I else lines[h][0] * xq + lines[h][1]
            fib.setdefault(re_part(v), set()).add(v)
        if any(len(s) > 1 for s in fib.values()):
            return None
        # velocities
        vel = [lines[h][0] * d for h in range(n)]
        # approach order inside the block must be strict
        if len({re_part(vel[h]) for h in I}) != len(I):
            return None
        events = {}
        for i, j in combinations(range(n), 2):
            if i in I and j in I:
                continue
            dv = re_part(vel[i]) - re_part(vel[j])
            if dv == 0:
                continue
            s = (re0[j] - re0[i]) / dv
            if 0 < s < 1:
                events.setdefault(s, []).append((i, j))
        order = list(pos_order)
        where = {h: p for p, h in enumerate(order)}
        word = []
        for s in sorted(events):
            pairs = events[s]
            used = set()
            for i, j in pairs:
                if i in used or j in used:
                    return None
                used.update((i, j))
            for i, j in pairs:
                pi, pj = where[i], where[j]
                if abs(pi - pj) != 1:
                    return None
                left, right = (i, j) if pi < pj else (j, i)
                iml = im_part(y0[left]) + s * im_part(vel[left])
                imr = im_part(y0[right]) + s * im_part(vel[right])
                if iml == imr:
                    return None
                p = min(pi, pj)
                word.append((p + 1) if iml < imr else -(p + 1))
                order[p], order[p + 1] = order[p + 1], order[p]
                where[order[p]], where[order[p + 1]] = p, p + 1
        ps = sorted(where[h] for h in I)
        if ps[-1] - ps[0] != len(ps) - 1:
            return None
        data.append(MonodromyDatum(X.id, (ps[0] + 1, len(ps)), word, (re_part(d), im_part(d))))
    return pos_order, data


def braid_monodromy(A: Arrangement, seed: int = 0, tries: int = 400) -> BraidMonodromy:
    if A.d != 2:
        raise UnsupportedRank("braid monodromy needs a rank-3 line arrangement")
    lines0, _, rec = generic_shear(A)
    lines0 = [(Eis.coerce(s), Eis.coerce(b)) for s, b in lines0]
    rng = random.Random(seed)
    for t in range(tries):
        # a non-real projection direction x -> x + mu*y keeps real triple
        # points from producing simultaneous crossings
        if t % 8 == 0:
            mu = Eis(0) if t == 0 and not A.is_real else Eis(rng.randint(-3, 3), rng.choice([-1, 1]) * rng.randint(1, 3))
            lines = []
            for a, b in lines0:
                den = 1 - a * mu
                if not den:
                    break
                lines.append((a / den, b / den))
            xs = _event_abscissae(A, lines) if len(lines) == A.n else None
        if xs is None:
            continue
        x0 = Eis(Fraction(rng.randint(-60, 60), 7), Fraction(rng.choice([-1, 1]) * rng.randint(1, 60), 11))
        # a generic fiber rotation y -> theta*y separates real parts
        theta = Eis(rng.randint(2, 13), rng.randint(1, 13))
        rot = [(theta * a, theta * b) for a, b in lines]
        res = _monodromy_attempt(A, rot, xs, x0)
        if res is not None:
            pos_order, data = res
            return BraidMonodromy(x0, pos_order, data, rec)
    raise NonGeneric("no generic base point found for braid monodromy")


def local_braids(bm: BraidMonodromy):
    """Loop braids (path, local full twist, path back) in counterclockwise order."""
    from functools import cmp_to_key
    items = sorted(bm.data, key=cmp_to_key(lambda a, b: _true_angle_cmp(a.angle_key, b.angle_key)))
    out = []
    for dt in items:
        k, m = dt.block
        out.append(dt.path + block_full_twist(k, m) + braid_inverse(dt.path))
    return out


def _true_angle_cmp(u, v):
    # u, v given as (re, b) with im = (sqrt3/2) b; scaling im keeps angular order
    return _angle_cmp(u, v)


def presentation_monodromy(A: Arrangement, seed: int = 0) -> GroupPresentation:
    bm = braid_monodromy(A, seed)
    rels = []
    for dt in bm.data:
        k, m = dt.block
        back = braid_inverse(dt.path)
        P = list(range(k, k + m))
        for j in range(k, k + m - 1):
            r = artin_action(back, commutator(P, [j]))
            rels.append(_relabel(r, bm.line_at_position))
    return GroupPresentation(A.n, rels, "complement",
                             meta={"method": "monodromy", "seed": seed, "shear": bm.shear.to_json(),
                                   "central": [h + 1 for h in bm.line_at_position]})


def presentation_complement(A: Arrangement, method: str = "auto", seed: int = 0) -> GroupPresentation:
    if A.d != 2:
        raise UnsupportedRank("presentations are computed for line arrangements (take a generic section)")
    if method == "auto":
        method = "wiring" if A.is_real else "monodromy"
    if method == "wiring":
        return presentation_wiring(A)
    return presentation_monodromy(A, seed)


def projectivize_presentation(p: GroupPresentation) -> GroupPresentation:
    """Add the boundary loop of the fiber (a central element) as a relator.

    That loop is the product of the meridians in fiber order at the base
    point, recorded by the presentation builders; it defaults to x_1 ... x_n.
    """
    rel = list(p.meta.get("central", range(1, p.ngens + 1)))
    return GroupPresentation(p.ngens, list(p.relators) + [rel], "projectivized", list(p.names),
                             dict(p.meta))
