"""Fox calculus, Alexander matrices and rank-one local systems."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .braids import GroupPresentation, abelianize
from .errors import ContextTooSmall, FieldMismatch, InputError, NotCommutatorRelators, TorsionAbelianization
from .scalar import (RootOfUnityContext, find_cyclotomic_prime, rank_exact, rank_mod_p,
                     element_order)


# ---------------------------------------------------------------------------
# Laurent polynomials: dict exponent tuple -> int


def _ladd(d, key, c):
    v = d.get(key, 0) + c
    if v:
        d[key] = v
    else:
        d.pop(key, None)


def fox_derivative(word, j, n):
    """Abelianized Fox derivative d(word)/dx_j as a Laurent polynomial."""
    out = {}
    pre = [0] * n
    for a in word:
        g = abs(a)
        if a > 0:
            if g == j:
                _ladd(out, tuple(pre), 1)
            pre[g - 1] += 1
        else:
            pre[g - 1] -= 1
            if g == j:
                _ladd(out, tuple(pre), -1)
    return out


@dataclass
class AlexanderMatrix:
    rows: int
    cols: int
    entries: list   # rows x cols list of Laurent dicts

    def evaluate(self, values, p=None):
        def ev(poly):
            tot = 0 if p else Fraction(0)
            for e, c in poly.items():
                term = c
                for v, k in zip(values, e):
                    if k:
                        term = term * (pow(v, k, p) if p else Fraction(v) ** k)
                        if p:
                            term %= p
                tot = (tot + term) % p if p else tot + term
            return tot
        return [[ev(x) for x in row] for row in self.entries]

    def to_json(self):
        return [[{",".join(map(str, e)): c for e, c in sorted(x.items())} for x in row]
                for row in self.entries]


def alexander_matrix(p: GroupPresentation, check_torsion: bool = True) -> AlexanderMatrix:
    if check_torsion:
        rank, tors = p.abelianization()
        if tors:
            raise TorsionAbelianization(f"abelianization has torsion {tors}; pass a torsion-free quotient")
    n = p.ngens
    entries = [[fox_derivative(r, j, n) for j in range(1, n + 1)] for r in p.relators]
    return AlexanderMatrix(len(p.relators), n, entries)


def linearized_matrix(p: GroupPresentation):
    """Entry (i, j) as a coefficient vector c with Phi_lin(i, j)(y) = <c, y>."""
    n = p.ngens
    if not p.is_commutator_relators():
        raise NotCommutatorRelators("linearization needs relators that vanish in the abelianization")
    out = []
    for r in p.relators:
        row = [[0] * n for _ in range(n)]
        pre = [0] * n
        for a in r:
            g = abs(a)
            if a > 0:
                vec = row[g - 1]
                for k in range(n):
                    vec[k] += pre[k]
                pre[g - 1] += 1
            else:
                pre[g - 1] -= 1
                vec = row[g - 1]
                for k in range(n):
                    vec[k] -= pre[k]
        out.append(row)
    return out


def evaluate_linearized(lin, a, p=None):
    if p:
        return [[sum(c * x for c, x in zip(vec, a)) % p for vec in row] for row in lin]
    return [[sum(Fraction(c) * x for c, x in zip(vec, a)) for vec in row] for row in lin]


def linearized_depth(p: GroupPresentation, a, field="Q", lin=None):
    """dim H^1 of the linearized complex at a: n - 1 - rank Phi_lin(a), for a != 0."""
    lin = lin if lin is not None else linearized_matrix(p)
    pr = None if field == "Q" else int(field)
    M = evaluate_linearized(lin, a, pr)
    r = rank_exact(M) if pr is None else rank_mod_p(M, pr)
    return p.ngens - 1 - r


# ---------------------------------------------------------------------------
# characters and local systems


@dataclass
class Character:
    values: list
    p: int | None = None            # None means rational values
    ctx: RootOfUnityContext | None = None

    def is_trivial(self):
        return all((v % self.p == 1) if self.p else v == 1 for v in self.values)

    def to_json(self):
        return {"values": [v if isinstance(v, int) else str(v) for v in self.values], "p": self.p}


def fox_matrix_at(p: GroupPresentation, values, prime=None):
    """Fox matrix evaluated at a character, by prefix products."""
    n = p.ngens
    rows = []
    if prime:
        vals = [int(v) % prime for v in values]
        invs = [pow(v, prime - 2, prime) for v in vals]
        for r in p.relators:
            row = [0] * n
            cur = 1
            for a in r:
                g = abs(a) - 1
                if a > 0:
                    row[g] = (row[g] + cur) % prime
                    cur = cur * vals[g] % prime
                else:
                    cur = cur * invs[g] % prime
                    row[g] = (row[g] - cur) % prime
            rows.append(row)
        return rows
    vals = [Fraction(v) for v in values]
    for r in p.relators:
        row = [Fraction(0)] * n
        cur = Fraction(1)
        for a in r:
            g = abs(a) - 1
            if a > 0:
                row[g] += cur
                cur *= vals[g]
            else:
                cur /= vals[g]
                row[g] -= cur
        rows.append(row)
    return rows


def _check_character(p: GroupPresentation, ch: Character):
    if len(ch.values) != p.ngens:
        raise FieldMismatch(f"character has {len(ch.values)} values for {p.ngens} generators")
    for r in p.relators:
        e = abelianize(r, p.ngens)
        if not any(e):
            continue
        if ch.p:
            v = 1
            for x, k in zip(ch.values, e):
                v = v * pow(int(x) % ch.p, k % (ch.p - 1), ch.p) % ch.p
            ok = v == 1
        else:
            v = Fraction(1)
            for x, k in zip(ch.values, e):
                v *= Fraction(x) ** k
            ok = v == 1
        if not ok:
            raise FieldMismatch("character does not vanish on a relator's abelianization")


def local_system_h1(p: GroupPresentation, ch: Character) -> int:
    _check_character(p, ch)
    if ch.p:
        if any(int(v) % ch.p == 0 for v in ch.values):
            raise FieldMismatch("character values must be units")
        F = fox_matrix_at(p, ch.values, ch.p)
        r2 = rank_mod_p(F, ch.p) if F else 0
    else:
        if any(Fraction(v) == 0 for v in ch.values):
            raise FieldMismatch("character values must be units")
        F = fox_matrix_at(p, ch.values, None)
        r2 = rank_exact(F) if F else 0
    r1 = 0 if ch.is_trivial() else 1
    return p.ngens - r1 - r2


@dataclass
class DepthProfile:
    depths: list
    characters: list
    summary: dict = field(default_factory=dict)

    def to_json(self):
        return {"depths": self.depths, "summary": {str(k): v for k, v in sorted(self.summary.items())}}


def depth_profile(p: GroupPresentation, characters) -> DepthProfile:
    ps = {c.p for c in characters}
    if len(ps) > 1:
        raise FieldMismatch("characters must share one field")
    depths = [local_system_h1(p, c) for c in characters]
    summary = {}
    for c, d in zip(characters, depths):
        if c.p:
            order = 1
            for v in c.values:
                o = element_order(int(v) % c.p, c.p)
                order = order * o // np.gcd(order, o)
        else:
            order = 0
        summary.setdefault(int(order), []).append(d)
    return DepthProfile(depths, list(characters), summary)


def diagonal_characters(n, N, ctx: RootOfUnityContext, weights=None):
    """rho_j: x_i -> zeta_N^(j * m_i), j = 0..N-1."""
    m = weights or [1] * n
    return [Character([ctx.power(j * mi) for mi in m], ctx.p, ctx) for j in range(N)]


# ---------------------------------------------------------------------------
# translated components


@dataclass
class PredictionReport:
    points: list
    controls: list
    prime: int
    passed: bool

    def to_json(self):
        return {"prime": self.prime, "passed": self.passed,
                "points": [{"values": v, "t_order": o, "depth": d} for v, o, d in self.points],
                "controls": [{"values": v, "kind": k, "depth": d} for v, k, d in self.controls]}


def verify_component_prediction(p: GroupPresentation, pred, samples: int = 5, t_orders=(5, 7, 4),
                                seed: int = 0) -> PredictionReport:
    """Sample torsion points of a predicted translated torus and check depths."""
    from .multinets import translated_character
    if pred.kind != "translated-prediction":
        raise InputError("expected a translated-prediction descriptor")
    mH = pred.translation_order
    orders = [o for o in t_orders if o > 1]
    if not orders:
        raise ContextTooSmall("no root order available for sampling")
    N = 1
    for o in orders + [mH]:
        N = N * o // np.gcd(N, o)
    ctx = find_cyclotomic_prime(int(N))
    p_ = ctx.p
    zeta = ctx.root(mH)
    rng = random.Random(seed)
    pts, ctrls = [], []
    candidates = []
    for o in orders:
        g = ctx.root(o)
        for k in range(1, o):
            if np.gcd(k, o) == 1:
                candidates.append((o, pow(g, k, p_)))
    rng.shuffle(candidates)
    for o, t in candidates[:max(samples, 1)]:
        vals = translated_character(pred, t, zeta, p_)
        d = local_system_h1(p, Character(vals, p_, ctx))
        pts.append((vals, o, d))
    # controls: the untranslated torus point and a generic point off it
    for o, t in candidates[:max(2, min(samples, len(candidates)))]:
        vals = translated_character(pred, t, 1, p_)
        if all(v == 1 for v in vals):
            continue
        d = local_system_h1(p, Character(vals, p_, ctx))
        ctrls.append((vals, "torus-without-translation", d))
    for _ in range(3):
        vals = [pow(ctx.zeta, rng.randrange(N), p_) for _ in range(p.ngens)]
        if p.kind == "projectivized":
            prod = 1
            for v in vals[:-1]:
                prod = prod * v % p_
            vals[-1] = pow(prod, p_ - 2, p_)
        d = local_system_h1(p, Character(vals, p_, ctx))
        ctrls.append((vals, "random", d))
    passed = all(d >= 1 for _, _, d in pts) and all(d == 0 for _, _, d in ctrls)
    return PredictionReport(pts, ctrls, p_, passed)
