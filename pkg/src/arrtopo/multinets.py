"""Multinets: validation, exhaustive search and resonance components."""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import product
from math import gcd
from functools import reduce

from .arrangement import Arrangement
from .errors import (DisconnectedClass, IdentityFailure, InconsistentNX, InputError,
                     MalformedMultinet, SearchBudgetExceeded, UncoveredCrossing,
                     UnequalWeights)
from .scalar import rref_exact

MAX_LINES = 12


@dataclass(frozen=True)
class Multinet:
    classes: tuple          # tuple of sorted index tuples
    m: tuple                # multiplicity per hyperplane of the host arrangement
    base_locus: tuple = ()  # flat ids of the host arrangement
    ell: int = 0
    k: int = 0
    support: tuple | None = None  # indices in a parent arrangement, when lifted

    def to_json(self, one_based=True):
        off = 1 if one_based else 0
        sup = self.support
        lift = (lambda h: sup[h] + off) if sup is not None else (lambda h: h + off)
        return {"classes": [[lift(h) for h in c] for c in self.classes],
                "m": list(self.m), "k": self.k, "ell": self.ell,
                "base_locus": list(self.base_locus),
                "support": [s + off for s in sup] if sup is not None else None}

    def signature(self):
        return "(" + "|".join("".join(str(h + 1) if h < 9 else f"[{h + 1}]" for h in c)
                              for c in self.classes) + ")"


def canonical_classes(classes):
    cs = [tuple(sorted(c)) for c in classes]
    return tuple(sorted(cs, key=lambda c: c[0]))


def _class_of(classes, n):
    lab = [-1] * n
    for ci, c in enumerate(classes):
        for h in c:
            if not 0 <= h < n:
                raise MalformedMultinet(f"hyperplane index {h + 1} out of range")
            if lab[h] != -1:
                raise MalformedMultinet(f"hyperplane {h + 1} appears in two classes")
            lab[h] = ci
    if -1 in lab:
        raise MalformedMultinet(f"hyperplane {lab.index(-1) + 1} is in no class")
    return lab


def base_locus_of(A: Arrangement, classes):
    lab = _class_of(classes, A.n)
    return tuple(X.id for X in A.flats2 if len({lab[h] for h in X.hyperplanes}) >= 2)


def _connected(A, cls, base):
    cls = list(cls)
    if len(cls) <= 1:
        return True
    seen = {cls[0]}
    stack = [cls[0]]
    while stack:
        h = stack.pop()
        for g in cls:
            if g not in seen and A.flat_of(h, g).id not in base:
                seen.add(g)
                stack.append(g)
    return len(seen) == len(cls)


def validate_multinet(A: Arrangement, candidate: Multinet) -> Multinet:
    n = A.n
    classes = canonical_classes(candidate.classes)
    k = len(classes)
    if k < 3:
        raise MalformedMultinet("a multinet needs at least 3 classes")
    lab = _class_of(classes, n)
    m = tuple(int(x) for x in candidate.m)
    if len(m) != n or any(x < 1 for x in m):
        raise MalformedMultinet("multiplicities must be positive, one per hyperplane")
    if reduce(gcd, m) != 1:
        raise MalformedMultinet("multiplicities must be primitive (gcd 1)")
    weights = [sum(m[h] for h in c) for c in classes]
    if len(set(weights)) != 1:
        raise UnequalWeights(f"class weights {weights} differ")
    ell = weights[0]
    base = base_locus_of(A, classes)
    if candidate.base_locus and tuple(sorted(candidate.base_locus)) != tuple(sorted(base)):
        raise UncoveredCrossing(f"base locus {sorted(candidate.base_locus)} does not match crossings {list(base)}")
    nX = {}
    for fid in base:
        X = A.flats2[fid]
        per = [sum(m[h] for h in X.hyperplanes if lab[h] == ci) for ci in range(k)]
        if len(set(per)) != 1:
            raise InconsistentNX(f"flat {[h + 1 for h in X.hyperplanes]} has class weights {per}")
        nX[fid] = per[0]
    bset = set(base)
    for c in classes:
        if not _connected(A, c, bset):
            raise DisconnectedClass(f"class {[h + 1 for h in c]} is disconnected off the base locus")
    # identities
    if sum(m) != k * ell:
        raise IdentityFailure("sum of multiplicities differs from k * ell")
    for h in range(n):
        if sum(nX[f] for f in A.flats_through[h] if f in nX) != ell:
            raise IdentityFailure(f"incidence sum at hyperplane {h + 1} differs from ell")
    if sum(v * v for v in nX.values()) != ell * ell:
        raise IdentityFailure("sum of squared n_X differs from ell^2")
    return Multinet(classes, m, tuple(base), ell, k, candidate.support)


def multinet_identities(A: Arrangement, M: Multinet):
    """The three counting identities, returned as booleans for reporting."""
    lab = _class_of(M.classes, A.n)
    nX = {}
    for fid in M.base_locus:
        X = A.flats2[fid]
        nX[fid] = sum(M.m[h] for h in X.hyperplanes if lab[h] == 0)
    id1 = sum(M.m) == M.k * M.ell
    id2 = all(sum(nX[f] for f in A.flats_through[h] if f in nX) == M.ell for h in range(A.n))
    id3 = sum(v * v for v in nX.values()) == M.ell ** 2
    return id1, id2, id3


# ---------------------------------------------------------------------------
# search


def _solve_multiplicities(A, classes, base, k, m_bound, budget):
    n = A.n
    lab = [0] * n
    for ci, c in enumerate(classes):
        for h in c:
            lab[h] = ci
    if k == 4 or m_bound == 1:
        cands = [tuple([1] * n)]
    else:
        eqs = []
        for ci in range(1, k):
            row = [0] * n
            for h in range(n):
                row[h] = (lab[h] == ci) - (lab[h] == 0)
            eqs.append(row)
        for fid in base:
            X = A.flats2[fid]
            for ci in range(1, k):
                row = [0] * n
                for h in X.hyperplanes:
                    row[h] = (lab[h] == ci) - (lab[h] == 0)
                eqs.append(row)
        R, piv = rref_exact(eqs)
        free = [c for c in range(n) if c not in piv]
        cands = []
        if len(free) > 8:
            budget[0] -= m_bound ** len(free)
            if budget[0] < 0:
                raise SearchBudgetExceeded("multiplicity enumeration too large")
        for vals in product(range(1, m_bound + 1), repeat=len(free)):
            m = [0] * n
            for f, v in zip(free, vals):
                m[f] = Fraction(v)
            ok = True
            for i, c in enumerate(piv):
                v = -sum(R[i][f] * m[f] for f in free)
                if v.denominator != 1 or not 1 <= v <= m_bound:
                    ok = False
                    break
                m[c] = v
            if ok:
                cands.append(tuple(int(x) for x in m))
    out = []
    for m in cands:
        if reduce(gcd, m) != 1:
            continue
        try:
            out.append(validate_multinet(A, Multinet(classes, m)))
        except (UnequalWeights, InconsistentNX, DisconnectedClass, IdentityFailure):
            continue
    return out


def search_multinets(A: Arrangement, k: int = 3, m_bound: int = 1, budget_nodes: int = 2_000_000):
    if k not in (3, 4):
        raise InputError("multinets have 3 or 4 classes for line arrangements")
    if A.n > MAX_LINES:
        raise InputError(f"search is limited to {MAX_LINES} hyperplanes")
    if not 1 <= m_bound <= 4:
        raise InputError("m_bound must be between 1 and 4")
    n = A.n
    # lines meeting at a flat with fewer than k lines must share a class
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for X in A.flats2:
        if len(X.hyperplanes) < k:
            r0 = find(X.hyperplanes[0])
            for h in X.hyperplanes[1:]:
                parent[find(h)] = r0
    blocks = {}
    for h in range(n):
        blocks.setdefault(find(h), []).append(h)
    blocks = sorted(blocks.values(), key=lambda b: b[0])
    if len(blocks) < k:
        return []
    big = [X for X in A.flats2 if len(X.hyperplanes) >= k]
    flat_members = [set(X.hyperplanes) for X in big]
    flats_of_line = [[fi for fi, S in enumerate(flat_members) if h in S] for h in range(n)]
    lab = [-1] * n
    results = {}
    budget = [budget_nodes]

    def feasible(touched):
        for fi in touched:
            S = big[fi].hyperplanes
            seen = {lab[h] for h in S if lab[h] >= 0}
            if len(seen) >= 2:
                free = sum(1 for h in S if lab[h] < 0)
                if len(seen) + free < k:
                    return False
        return True

    def rec(bi, used):
        budget[0] -= 1
        if budget[0] < 0:
            raise SearchBudgetExceeded("node budget exhausted", partial=list(results.values()))
        if bi == len(blocks):
            if used < k:
                return
            classes = canonical_classes([[h for h in range(n) if lab[h] == c] for c in range(k)])
            base = base_locus_of(A, classes)
            if not base:
                return
            for M in _solve_multiplicities(A, classes, base, k, m_bound, budget):
                results[(M.classes, M.m)] = M
            return
        remaining = len(blocks) - bi
        if k - used > remaining:
            return
        blk = blocks[bi]
        touched = {fi for h in blk for fi in flats_of_line[h]}
        for c in range(min(used + 1, k)):
            for h in blk:
                lab[h] = c
            if feasible(touched):
                rec(bi + 1, max(used, c + 1))
            for h in blk:
                lab[h] = -1

    rec(0, 0)
    return [results[key] for key in sorted(results)]


# ---------------------------------------------------------------------------
# components


@dataclass
class ResonanceComponentDescriptor:
    kind: str                 # local | multinet | translated-prediction
    support: tuple
    subspace: list            # basis vectors (length n of the host arrangement)
    dim: int
    parts: int = 0
    essential: bool = False
    translation_order: int = 0
    source: object = None
    data: dict = field(default_factory=dict)

    def to_json(self):
        def enc(v):
            return [x if isinstance(x, int) else (x.numerator if x.denominator == 1 else str(x)) for x in v]
        return {"kind": self.kind, "support": [s + 1 for s in self.support], "dim": self.dim,
                "parts": self.parts, "essential": self.essential,
                "translation_order": self.translation_order,
                "basis": [enc(v) for v in self.subspace]}


def multinet_component(M: Multinet, n_parent: int | None = None) -> ResonanceComponentDescriptor:
    sup = M.support if M.support is not None else tuple(range(len(M.m)))
    n = n_parent if n_parent is not None else (max(sup) + 1 if M.support is not None else len(M.m))
    us = []
    for c in M.classes:
        u = [0] * n
        for h in c:
            u[sup[h]] = M.m[h]
        us.append(u)
    basis = [[a - b for a, b in zip(u, us[0])] for u in us[1:]]
    return ResonanceComponentDescriptor("multinet", tuple(sorted(sup)), basis, M.k - 1,
                                        parts=M.k, source=M)


def _span_key(vectors):
    R, piv = rref_exact(vectors)
    return tuple(tuple(r) for r in R[:len(piv)])


def _contained(small, big):
    R, piv = rref_exact(big)
    r = len(piv)
    return len(rref_exact(list(big) + list(small))[1]) == r


def enumerate_r1_components(A: Arrangement, s: int = 1, m_bound: int = 4,
                            budget_nodes: int = 5_000_000, min_support: int = 3):
    """Local components plus multinet components over all sub-arrangements."""
    if A.n > MAX_LINES:
        raise InputError(f"component enumeration is limited to {MAX_LINES} hyperplanes")
    n = A.n
    comps = []
    for X in A.flats2:
        if len(X.hyperplanes) >= 3:
            hs = X.hyperplanes
            basis = []
            for h in hs[1:]:
                v = [0] * n
                v[hs[0]], v[h] = -1, 1
                basis.append(v)
            comps.append(ResonanceComponentDescriptor("local", hs, basis, len(hs) - 1,
                                                      parts=len(hs), source=X))
    budget = [budget_nodes]
    full = (1 << n) - 1
    flats = [sum(1 << h for h in X.hyperplanes) for X in A.flats2]
    for mask in range(full, 0, -1):
        size = bin(mask).count("1")
        if size < max(min_support, 3):
            continue
        # skip concurrent sub-arrangements (their resonance is local)
        if any(mask & f == mask for f in flats):
            continue
        # each line must lie on a restricted flat of size >= 3
        ok = True
        for h in range(n):
            if mask >> h & 1:
                if not any((f >> h & 1) and bin(f & mask).count("1") >= 3 for f in flats):
                    ok = False
                    break
        if not ok:
            continue
        idx = [h for h in range(n) if mask >> h & 1]
        B = A.sub(idx)
        for k in (3, 4):
            try:
                found = search_multinets(B, k, m_bound if k == 3 else 1, budget_nodes=budget[0])
            except SearchBudgetExceeded as exc:
                raise SearchBudgetExceeded(str(exc), partial=comps) from exc
            for M in found:
                M = replace(M, support=tuple(idx))
                comp = multinet_component(M, n)
                comp.essential = len(idx) == n
                comps.append(comp)
    # drop duplicates and components contained in larger ones
    keyed = []
    seen = set()
    for c in comps:
        key = _span_key(c.subspace)
        if key in seen:
            continue
        seen.add(key)
        keyed.append(c)
    final = []
    for c in keyed:
        if any(o is not c and o.dim > c.dim and _contained(c.subspace, o.subspace) for o in keyed):
            continue
        final.append(c)
    final = [c for c in final if c.parts >= s + 2]
    order = {"local": 0, "multinet": 1}
    final.sort(key=lambda c: (order[c.kind], not c.essential, c.support, c.dim))
    return final


# ---------------------------------------------------------------------------
# pointed multinets and translated tori


@dataclass(frozen=True)
class PointedMultinet:
    multinet: Multinet
    distinguished: int


def _nX(A, M):
    lab = _class_of(M.classes, A.n)
    return {fid: sum(M.m[h] for h in A.flats2[fid].hyperplanes if lab[h] == 0) for fid in M.base_locus}


def find_pointed_multinets(A: Arrangement, m_bound: int = 4):
    out = []
    for M in search_multinets(A, 3, m_bound):
        nX = _nX(A, M)
        for h in range(A.n):
            if M.m[h] > 1 and all(nX[f] % M.m[h] == 0 for f in A.flats_through[h] if f in nX):
                out.append(PointedMultinet(M, h))
    return out


def pointed_from(A: Arrangement, M: Multinet, H: int) -> PointedMultinet:
    M = validate_multinet(A, M)
    if M.m[H] <= 1:
        raise InputError("the distinguished hyperplane needs multiplicity > 1")
    nX = _nX(A, M)
    for f in A.flats_through[H]:
        if f in nX and nX[f] % M.m[H]:
            raise InputError("m_H must divide n_X at every base point on H")
    return PointedMultinet(M, H)


def predict_translated_component(pm: PointedMultinet) -> ResonanceComponentDescriptor:
    """One-parameter translated torus on the deletion A minus H.

    Classes not containing H map to the two punctures a, b of the base,
    the class of H to an orbifold point c of order m_H with a*b*c = 1.
    A character is t -> (a: t, b: (t*zeta)^-1, c: zeta), raised to m_K.
    """
    M, H = pm.multinet, pm.distinguished
    mH = M.m[H]
    n = len(M.m)
    keep = [h for h in range(n) if h != H]
    newidx = {h: i for i, h in enumerate(keep)}
    hc = next(ci for ci, c in enumerate(M.classes) if H in c)
    others = [ci for ci in range(M.k) if ci != hc]
    roles = [None] * (n - 1)
    mult = [0] * (n - 1)
    for ci, c in enumerate(M.classes):
        role = "c" if ci == hc else ("a" if ci == others[0] else "b")
        for h in c:
            if h != H:
                roles[newidx[h]] = role
                mult[newidx[h]] = M.m[h]
    direction = [mult[i] if roles[i] == "a" else (-mult[i] if roles[i] == "b" else 0)
                 for i in range(n - 1)]
    return ResonanceComponentDescriptor(
        "translated-prediction", tuple(range(n - 1)), [direction], 1, parts=M.k,
        translation_order=mH, source=pm,
        data={"roles": roles, "m": mult, "deleted": H})


def translated_character(pred: ResonanceComponentDescriptor, t: int, zeta: int, p: int):
    """Point of the predicted torus over GF(p); zeta of order m_H, t nonzero."""
    roles, mult = pred.data["roles"], pred.data["m"]
    b = pow(t * zeta % p, p - 2, p)
    base = {"a": t % p, "b": b, "c": zeta % p}
    return [pow(base[r], k, p) for r, k in zip(roles, mult)]
