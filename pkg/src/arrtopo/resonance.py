"""Degree <= 2 Orlik-Solomon algebra and pointwise resonance depth."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from .arrangement import Arrangement, mobius_poincare
from .errors import NonProjective, ZeroVector
from .scalar import rank_exact, rank_mod_p, rref_exact, rref_mod_p, to_mod


def field_rank(M, field):
    if field == "Q":
        return rank_exact(M)
    return rank_mod_p(M, field)


def _norm_field(field):
    if field in (None, 0, "Q", "q"):
        return "Q"
    return int(field)


@dataclass
class OSDegree2:
    field: object
    n: int
    pairs: list            # all (i, j), i < j, lex order
    basis2: list           # pairs whose classes form a basis of A^2(M)
    rel_matrix: list       # rows d(e_T) over collinear triples
    proj: object           # dim2 x len(pairs) matrix: pair vector -> basis coords
    proj_dim2: int         # dim A^2(U)

    @property
    def dim2(self):
        return len(self.basis2)

    @property
    def proj_basis1(self):
        """Basis e_k - e_{n-1} of A^1(U)."""
        out = []
        for k in range(self.n - 1):
            v = [0] * self.n
            v[k], v[self.n - 1] = 1, -1
            out.append(v)
        return out

    def wedge(self, a, b):
        """Coordinates of a*b in the chosen basis of A^2(M)."""
        v = [a[i] * b[j] - a[j] * b[i] for i, j in self.pairs]
        return self._apply(v)

    def _apply(self, v):
        if self.field == "Q":
            return [sum((c * x for c, x in zip(row, v) if c and x), Fraction(0)) for row in self.proj]
        vec = np.array([to_mod(x, self.field) for x in v], dtype=np.int64)
        return list((self.proj @ vec) % self.field)

    def wedge_matrix(self, a):
        """Matrix of b -> a*b on A^1(U) (columns indexed by proj_basis1)."""
        n = self.n
        cols = []
        for k in range(n - 1):
            b = [0] * n
            b[k], b[n - 1] = 1, -1
            cols.append(self.wedge(a, b))
        return [list(r) for r in zip(*cols)] if cols else []


def build_os2(A: Arrangement, field="Q") -> OSDegree2:
    field = _norm_field(field)
    n = A.n
    pairs = list(combinations(range(n), 2))
    pidx = {pq: k for k, pq in enumerate(pairs)}
    rel = []
    for X in A.flats2:
        if len(X.hyperplanes) < 3:
            continue
        for i, j, k in combinations(X.hyperplanes, 3):
            row = [0] * len(pairs)
            row[pidx[(j, k)]] += 1
            row[pidx[(i, k)]] -= 1
            row[pidx[(i, j)]] += 1
            rel.append(row)
    m = len(pairs)
    # reversed column order so the surviving basis pairs are lexicographically first
    order = list(range(m - 1, -1, -1))
    if rel:
        permuted = [[r[c] for c in order] for r in rel]
        if field == "Q":
            R, piv = rref_exact(permuted)
            R = R[:len(piv)]
        else:
            R, piv = rref_mod_p(permuted, field)
            R = R[:len(piv)]
        piv_cols = [order[c] for c in piv]
    else:
        R, piv, piv_cols = [], [], []
    basis_cols = [c for c in range(m) if c not in set(piv_cols)]
    # projection: e_c -> e_c - sum over pivot rows, read off on basis columns
    if field == "Q":
        proj = [[Fraction(0)] * m for _ in basis_cols]
        bpos = {c: t for t, c in enumerate(basis_cols)}
        for c in range(m):
            if c in bpos:
                proj[bpos[c]][c] = Fraction(1)
        for r_i, pc in enumerate(piv_cols):
            row = R[r_i]
            # e_pc = -sum_{other cols} row[col] e_col  (row normalized at pc)
            for t, bc in enumerate(basis_cols):
                coef = row[order.index(bc)]
                if coef:
                    proj[t][pc] = -coef
    else:
        p = field
        proj = np.zeros((len(basis_cols), m), dtype=np.int64)
        bpos = {c: t for t, c in enumerate(basis_cols)}
        for c, t in bpos.items():
            proj[t, c] = 1
        inv_order = {c: k for k, c in enumerate(order)}
        for r_i, pc in enumerate(piv_cols):
            row = R[r_i]
            for t, bc in enumerate(basis_cols):
                coef = int(row[inv_order[bc]])
                if coef:
                    proj[t, pc] = (-coef) % p
    os_ = OSDegree2(field, n, pairs, [pairs[c] for c in basis_cols], rel, proj, 0)
    # A^2(U) = image of Lambda^2 A^1(U)
    b1 = os_.proj_basis1
    vecs = [os_.wedge(b1[i], b1[j]) for i, j in combinations(range(len(b1)), 2)]
    os_.proj_dim2 = field_rank(vecs, field) if vecs else 0
    L = mobius_poincare(A)
    if os_.dim2 != L.b2_M:
        raise AssertionError(f"dim A^2(M)={os_.dim2} but b2(M)={L.b2_M}")
    b2U = L.poincare_U[2] if len(L.poincare_U) > 2 else 0
    if os_.proj_dim2 != b2U:
        raise AssertionError(f"dim A^2(U)={os_.proj_dim2} but b2(U)={b2U}")
    return os_


def _check_vector(os_: OSDegree2, a):
    if len(a) != os_.n:
        raise ValueError(f"vector has length {len(a)}, expected {os_.n}")
    if os_.field == "Q":
        a = [Fraction(x) for x in a]
        zero = all(x == 0 for x in a)
        s = sum(a)
    else:
        p = os_.field
        a = [to_mod(x, p) for x in a]
        zero = all(x == 0 for x in a)
        s = sum(a) % p
    if zero:
        raise ZeroVector("resonance depth is defined for nonzero classes")
    if s != 0:
        raise NonProjective("coordinates must sum to zero (class pulled back from U)")
    return a


def resonance_depth(os_: OSDegree2, a) -> int:
    """dim H^1(A(U), a) = dim ker(a: A^1(U) -> A^2(U)) - 1."""
    a = _check_vector(os_, a)
    Wm = os_.wedge_matrix(a)
    r = field_rank(Wm, os_.field) if Wm else 0
    return (os_.n - 1) - r - 1


def resonance_depth2_char_p(os_: OSDegree2, a) -> int:
    return resonance_depth(os_, a)


def local_components(A: Arrangement):
    return [(X, len(X.hyperplanes) - 1) for X in A.flats2 if len(X.hyperplanes) >= 3]


def local_component_basis(A: Arrangement, X):
    """Basis of P_X: vectors supported on X with zero coordinate sum."""
    hs = list(X.hyperplanes)
    out = []
    for h in hs[1:]:
        v = [0] * A.n
        v[hs[0]], v[h] = -1, 1
        out.append(v)
    return out
