"""Exact scalars and linear algebra.

Rationals come from :mod:`fractions`.  Prime fields are plain ``int``
residues handled with numpy ``int64`` arrays (all primes stay below 2**31
so products fit).  ``Eis`` implements the Eisenstein field Q(w) with
w**2 + w + 1 = 0, which is enough for every non-real arrangement in the
catalog.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

import numpy as np


# ---------------------------------------------------------------------------
# Eisenstein numbers a + b*w


class Eis:
    """Element a + b*w of Q(w), w a primitive cube root of unity."""

    __slots__ = ("a", "b")

    def __init__(self, a=0, b=0):
        self.a = Fraction(a)
        self.b = Fraction(b)

    @staticmethod
    def coerce(x):
        if isinstance(x, Eis):
            return x
        return Eis(x, 0)

    def __add__(self, o):
        o = Eis.coerce(o)
        return Eis(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return Eis(-self.a, -self.b)

    def __sub__(self, o):
        o = Eis.coerce(o)
        return Eis(self.a - o.a, self.b - o.b)

    def __rsub__(self, o):
        return Eis.coerce(o) - self

    def __mul__(self, o):
        o = Eis.coerce(o)
        # w^2 = -1 - w
        ac, bd = self.a * o.a, self.b * o.b
        return Eis(ac - bd, self.a * o.b + self.b * o.a - bd)

    __rmul__ = __mul__

    def conj(self):
        return Eis(self.a - self.b, -self.b)

    def norm(self):
        return self.a * self.a - self.a * self.b + self.b * self.b

    def __truediv__(self, o):
        o = Eis.coerce(o)
        nrm = o.norm()
        if nrm == 0:
            raise ZeroDivisionError("division by zero in Q(w)")
        num = self * o.conj()
        return Eis(num.a / nrm, num.b / nrm)

    def __rtruediv__(self, o):
        return Eis.coerce(o) / self

    def __eq__(self, o):
        if isinstance(o, (int, Fraction)):
            return self.b == 0 and self.a == o
        if isinstance(o, Eis):
            return self.a == o.a and self.b == o.b
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b))

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    @property
    def re(self):
        # real part is a - b/2
        return self.a - self.b / 2

    @property
    def im(self):
        # imaginary part is (sqrt(3)/2) * b; only b is kept
        return self.b

    def is_real(self):
        return self.b == 0

    def __repr__(self):
        if self.b == 0:
            return f"Eis({self.a})"
        return f"Eis({self.a}, {self.b})"

    def to_json(self):
        def f(q):
            return q.numerator if q.denominator == 1 else str(q)
        if self.b == 0:
            return f(self.a)
        return [f(self.a), f(self.b)]


def re_part(x):
    return x.re if isinstance(x, Eis) else Fraction(x)


def im_part(x):
    """Imaginary part up to the fixed positive factor sqrt(3)/2."""
    return x.b if isinstance(x, Eis) else Fraction(0)


def simplify_scalar(x):
    """Return an int/Fraction when x is real, else the Eis value."""
    if isinstance(x, Eis):
        if x.b == 0:
            a = x.a
            return a.numerator if a.denominator == 1 else a
        return x
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


# ---------------------------------------------------------------------------
# primes and roots of unity


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for q in small:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def prime_factors(n: int) -> list[int]:
    out, q = [], 2
    while q * q <= n:
        if n % q == 0:
            out.append(q)
            while n % q == 0:
                n //= q
        q += 1
    if n > 1:
        out.append(n)
    return out


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def euler_phi(n: int) -> int:
    r = n
    for q in prime_factors(n):
        r = r // q * (q - 1)
    return r


def primitive_root(p: int) -> int:
    fs = prime_factors(p - 1)
    g = 2 if p > 2 else 1
    while p > 2:
        if all(pow(g, (p - 1) // q, p) != 1 for q in fs):
            return g
        g += 1
    return 1


def element_order(x: int, p: int, N: int | None = None) -> int:
    """Multiplicative order of x mod p; searched among divisors of N if given."""
    x %= p
    if x == 0:
        raise ValueError("zero has no multiplicative order")
    cands = divisors(N) if N else divisors(p - 1)
    for d in cands:
        if pow(x, d, p) == 1:
            return d
    raise ValueError(f"{x} is not an N-th root of unity mod {p}")


@dataclass(frozen=True)
class RootOfUnityContext:
    N: int
    p: int
    zeta: int

    def power(self, k: int) -> int:
        return pow(self.zeta, k % self.N, self.p)

    def root(self, order: int) -> int:
        """A primitive root of unity of the given order dividing N."""
        if self.N % order:
            raise ValueError(f"order {order} does not divide {self.N}")
        return self.power(self.N // order)


def find_cyclotomic_prime(N: int, skip: int = 0) -> RootOfUnityContext:
    if N < 1:
        raise ValueError("N must be positive")
    p = max(N, 100) + 1
    count = 0
    while True:
        if (p - 1) % N == 0 and is_prime(p):
            if count == skip:
                break
            count += 1
        p += 1
    zeta = pow(primitive_root(p), (p - 1) // N, p)
    assert pow(zeta, N, p) == 1
    assert all(pow(zeta, k, p) != 1 for k in range(1, N))
    return RootOfUnityContext(N, p, zeta)


def qualifying_contexts(N: int, count: int = 3, skip: int = 0):
    return [find_cyclotomic_prime(N, skip + i) for i in range(count)]


def consensus(values):
    """Majority vote; returns (value, unanimous)."""
    tally: dict = {}
    for v in values:
        key = repr(v)
        tally.setdefault(key, [v, 0])[1] += 1
    best = max(tally.values(), key=lambda kv: kv[1])
    return best[0], best[1] == len(values)


# ---------------------------------------------------------------------------
# rank and row reduction


def to_mod(v, p: int) -> int:
    if isinstance(v, Fraction):
        return v.numerator * pow(v.denominator, -1, p) % p
    return int(v) % p


def _as_int64_mod(M, p):
    A = np.array(M, dtype=object) if not isinstance(M, np.ndarray) else M
    if A.size == 0:
        return np.zeros(A.shape if A.ndim == 2 else (0, 0), dtype=np.int64)
    if A.dtype == object:
        A = np.vectorize(lambda v: to_mod(v, p), otypes=[np.int64])(A)
    else:
        A = np.mod(A.astype(np.int64), p)
    return A


def rref_mod_p(M, p: int):
    """Reduced row echelon form over GF(p); returns (R, pivot columns)."""
    A = _as_int64_mod(M, p).copy()
    if A.ndim != 2 or A.size == 0:
        return A, []
    rows, cols = A.shape
    r, pivots = 0, []
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            A[[r, k]] = A[[k, r]]
        inv = pow(int(A[r, c]), p - 2, p)
        A[r] = (A[r] * inv) % p
        f = A[:, c].copy()
        f[r] = 0
        nzr = np.nonzero(f)[0]
        if nzr.size:
            A[nzr] = (A[nzr] - np.outer(f[nzr], A[r])) % p
        pivots.append(c)
        r += 1
    return A, pivots


def rank_mod_p(M, p: int) -> int:
    A = _as_int64_mod(M, p).copy()
    if A.ndim != 2 or A.size == 0:
        return 0
    rows, cols = A.shape
    if rows > cols:
        A = A.T.copy()
        rows, cols = cols, rows
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            A[[r, k]] = A[[k, r]]
        inv = pow(int(A[r, c]), p - 2, p)
        A[r, c:] = (A[r, c:] * inv) % p
        below = A[r + 1:, c]
        nzr = np.nonzero(below)[0]
        if nzr.size:
            idx = nzr + r + 1
            A[idx, c:] = (A[idx, c:] - np.outer(A[idx, c], A[r, c:])) % p
        r += 1
    return r


def nullspace_mod_p(M, p: int, ncols: int | None = None):
    """Basis (rows) of the right kernel of M over GF(p)."""
    A = _as_int64_mod(M, p)
    if A.size == 0:
        n = ncols if ncols is not None else (A.shape[1] if A.ndim == 2 else 0)
        return [list(row) for row in np.eye(n, dtype=np.int64)]
    R, piv = rref_mod_p(A, p)
    n = R.shape[1]
    free = [c for c in range(n) if c not in piv]
    basis = []
    for f in free:
        v = np.zeros(n, dtype=np.int64)
        v[f] = 1
        for i, c in enumerate(piv):
            v[c] = (-R[i, f]) % p
        basis.append([int(x) for x in v])
    return basis


def _field_zero_one(sample):
    if isinstance(sample, Eis):
        return Eis(0), Eis(1)
    return Fraction(0), Fraction(1)


def rref_exact(M):
    """RREF over Q or Q(w) using python objects; returns (rows, pivots)."""
    rows = [list(r) for r in M]
    if not rows or not rows[0]:
        return rows, []
    uses_eis = any(isinstance(x, Eis) for r in rows for x in r)
    conv = (lambda x: Eis.coerce(x)) if uses_eis else (lambda x: Fraction(x))
    rows = [[conv(x) for x in r] for r in rows]
    nr, nc = len(rows), len(rows[0])
    r, pivots = 0, []
    for c in range(nc):
        if r == nr:
            break
        k = next((i for i in range(r, nr) if rows[i][c]), None)
        if k is None:
            continue
        rows[r], rows[k] = rows[k], rows[r]
        pv = rows[r][c]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(nr):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return rows, pivots


def rank_exact(M) -> int:
    return len(rref_exact(M)[1])


def nullspace_exact(M, ncols: int | None = None):
    rows = [list(r) for r in M]
    if not rows:
        n = ncols or 0
        return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    R, piv = rref_exact(rows)
    n = len(R[0])
    zero, one = _field_zero_one(R[0][0])
    basis = []
    for f in range(n):
        if f in piv:
            continue
        v = [zero] * n
        v[f] = one
        for i, c in enumerate(piv):
            v[c] = -R[i][f]
        basis.append(v)
    return basis


def matrix_rank(M, field=None) -> int:
    """Rank over Q (field None or "Q") or over GF(p) (field an int prime)."""
    if field is None or field == "Q" or field == 0:
        if isinstance(M, np.ndarray) and M.dtype != object:
            M = M.tolist()
        return rank_exact(M)
    return rank_mod_p(M, int(field))


# ---------------------------------------------------------------------------
# Smith normal form


def _diagonalize_dense(rows):
    """Diagonalize an integer matrix given as list of lists; returns diagonal."""
    diag = []
    A = [r[:] for r in rows if any(r)]
    while A:
        ncols = len(A[0])
        # smallest nonzero entry as pivot
        best = None
        for i, r in enumerate(A):
            for j, v in enumerate(r):
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, pi, pj = best
        while True:
            piv = A[pi][pj]
            changed = False
            # clear column pj
            for i, r in enumerate(A):
                if i != pi and r[pj]:
                    q = r[pj] // piv
                    if q:
                        prow = A[pi]
                        A[i] = [x - q * y for x, y in zip(r, prow)]
                    if A[i][pj]:
                        pi = i
                        changed = True
                        break
            if changed:
                continue
            # clear row pi
            prow = A[pi]
            for j in range(ncols):
                if j != pj and prow[j]:
                    q = prow[j] // piv
                    if q:
                        for r in A:
                            if r[pj]:
                                r[j] -= q * r[pj]
                    if prow[j]:
                        pj = j
                        changed = True
                        break
            if not changed:
                break
        diag.append(abs(A[pi][pj]))
        A.pop(pi)
        A = [r[:pj] + r[pj + 1:] for r in A]
        A = [r for r in A if any(r)]
    return diag


_RANK_PRIMES = (1000000007, 998244353)


def _bareiss_det(M):
    A = [r[:] for r in M]
    n = len(A)
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            sw = next((i for i in range(k + 1, n) if A[i][k]), None)
            if sw is None:
                return 0
            A[k], A[sw] = A[sw], A[k]
            sign = -sign
        akk = A[k][k]
        for i in range(k + 1, n):
            aik = A[i][k]
            Ai, Ak = A[i], A[k]
            for j in range(k + 1, n):
                Ai[j] = (Ai[j] * akk - aik * Ak[j]) // prev
        prev = akk
    return sign * A[n - 1][n - 1] if n else 1


def _xgcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def _diagonalize_mod(rows, D):
    """Diagonal of the Smith form over Z/DZ, as divisors of D."""
    A = [[x % D for x in r] for r in rows]
    A = [r for r in A if any(r)]
    diag = []
    while A:
        best = None
        for i, r in enumerate(A):
            for j, v in enumerate(r):
                if v:
                    g = gcd(v, D)
                    if best is None or g < best[0]:
                        best = (g, i, j)
        if best is None:
            break
        _, pi, pj = best
        A[0], A[pi] = A[pi], A[0]
        for r in A:
            r[0], r[pj] = r[pj], r[0]
        while True:
            for i in range(1, len(A)):
                b = A[i][0]
                if b:
                    a = A[0][0]
                    g, s, t = _xgcd(a, b)
                    r0, ri = A[0], A[i]
                    A[0] = [(s * x + t * y) % D for x, y in zip(r0, ri)]
                    A[i] = [((b // g) * x - (a // g) * y) % D for x, y in zip(r0, ri)]
            r0 = A[0]
            dirty = False
            for j in range(1, len(r0)):
                b = r0[j]
                if b:
                    a = r0[0]
                    g, s, t = _xgcd(a, b)
                    for r in A:
                        x, y = r[0], r[j]
                        r[0] = (s * x + t * y) % D
                        r[j] = ((b // g) * x - (a // g) * y) % D
                    dirty = True
            if dirty and any(A[i][0] for i in range(1, len(A))):
                continue
            g = gcd(A[0][0], D)
            bad = next((i for i in range(1, len(A)) if any(x % g for x in A[i])), None)
            if bad is None:
                break
            A[0] = [(x + y) % D for x, y in zip(A[0], A[bad])]
        diag.append(gcd(A[0][0], D))
        A = [r[1:] for r in A[1:]]
        A = [r for r in A if any(r)]
    return diag


def _diagonalize_modular(rows):
    """Invariant factors via elimination modulo a nonzero maximal minor."""
    r, piv_c = -1, None
    for p in _RANK_PRIMES:
        R, pc = rref_mod_p(rows, p)
        if len(pc) > r:
            r, piv_c, prime = len(pc), pc, p
    if r == 0:
        return []
    _, piv_r = rref_mod_p([list(c) for c in zip(*rows)], prime)
    minor = [[rows[i][j] for j in piv_c] for i in piv_r]
    D = abs(_bareiss_det(minor))
    diag = _diagonalize_mod(rows, D)
    return diag + [D] * (r - len(diag))


def _chain_normalize(diag):
    d = sorted(x for x in diag if x)
    changed = True
    while changed:
        changed = False
        for i in range(len(d)):
            for j in range(i + 1, len(d)):
                g = gcd(d[i], d[j])
                if g != d[i]:
                    l = d[i] * d[j] // g
                    d[i], d[j] = g, l
                    changed = True
        d.sort()
    return d


def smith_normal_form(M):
    """Invariant factors of an integer matrix.

    Returns ``(diag, rank)`` with ``diag`` of length min(rows, cols), the
    nonzero invariants first in divisibility order, then zeros.
    Unit pivots are eliminated sparsely before a dense pass on the rest.
    """
    if isinstance(M, np.ndarray):
        M = M.tolist()
    M = [[int(x) for x in r] for r in M]
    nr = len(M)
    nc = len(M[0]) if nr else 0
    size = min(nr, nc)
    rows = {i: {j: v for j, v in enumerate(r) if v} for i, r in enumerate(M)}
    rows = {i: r for i, r in rows.items() if r}
    cols: dict[int, set] = {}
    for i, r in rows.items():
        for j in r:
            cols.setdefault(j, set()).add(i)
    units = 0
    heap = [(len(r), i) for i, r in rows.items()]
    heapq.heapify(heap)
    while heap:
        ln, i = heapq.heappop(heap)
        r = rows.get(i)
        if r is None or len(r) != ln:
            continue
        cand = [j for j, v in r.items() if v in (1, -1)]
        if not cand:
            continue
        j = min(cand, key=lambda c: len(cols[c]))
        pv = r[j]
        others = [k for k in cols[j] if k != i]
        for k in others:
            rk = rows[k]
            f = rk[j] * pv  # pv = +-1 so pv^-1 = pv
            for c, v in r.items():
                nv = rk.get(c, 0) - f * v
                if nv:
                    if c not in rk:
                        cols.setdefault(c, set()).add(k)
                    rk[c] = nv
                else:
                    if c in rk:
                        del rk[c]
                        cols[c].discard(k)
            if rk:
                heapq.heappush(heap, (len(rk), k))
            else:
                del rows[k]
        for c in r:
            cols[c].discard(i)
        del rows[i]
        units += 1
    diag = [1] * units
    if rows:
        used_cols = sorted({c for r in rows.values() for c in r})
        cidx = {c: t for t, c in enumerate(used_cols)}
        dense = []
        for r in rows.values():
            row = [0] * len(used_cols)
            for c, v in r.items():
                row[cidx[c]] = v
            dense.append(row)
        if len(dense) > 8 and len(dense[0]) > 8:
            diag += _diagonalize_modular(dense)
        else:
            diag += _diagonalize_dense(dense)
    d = _chain_normalize(diag)
    rank = len(d)
    return d + [0] * (size - rank), rank


def torsion_and_rank_of_cokernel(M, ncols: int):
    """Cokernel of the integer map Z^rows -> Z^ncols given by row vectors."""
    diag, rank = smith_normal_form(M) if M else ([], 0)
    tors = [d for d in diag[:rank] if d > 1]
    return ncols - rank, tors


# ---------------------------------------------------------------------------
# integer polynomials (coefficient lists, lowest degree first)


def poly_mul(f, g):
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return out


def poly_divexact(f, g):
    """Exact division of integer polynomials with monic divisor g."""
    f = list(f)
    dg = len(g) - 1
    assert g[-1] == 1
    q = [0] * max(len(f) - dg, 1)
    for k in range(len(f) - 1, dg - 1, -1):
        c = f[k]
        if c:
            q[k - dg] = c
            for j in range(dg + 1):
                f[k - dg + j] -= c * g[j]
    if any(f[:dg]):
        raise ValueError("division is not exact")
    return q


@lru_cache(maxsize=None)
def cyclotomic_poly(r: int) -> tuple:
    f = [-1] + [0] * (r - 1) + [1]
    for d in divisors(r):
        if d < r:
            f = poly_divexact(f, list(cyclotomic_poly(d)))
    return tuple(f)


def poly_mod(f, p):
    return [x % p for x in f]


# ---------------------------------------------------------------------------
# factored characteristic polynomials


@dataclass(frozen=True)
class FactoredCharPoly:
    """Product of (descriptor, exponent) pairs.

    A descriptor is ``("cyclo", r)`` for the r-th cyclotomic polynomial or
    ``("poly", coeffs)`` for an explicit polynomial (coefficients lowest
    degree first, integers or residues mod the field prime).
    """

    factors: tuple
    field_tag: object = "rational"
    galois_imbalance: bool = False

    @staticmethod
    def from_cyclo_exponents(exps: dict, field_tag="rational", imbalance=False):
        facs = tuple((("cyclo", r), e) for r, e in sorted(exps.items()) if e)
        return FactoredCharPoly(facs, field_tag, imbalance)

    def degree(self) -> int:
        tot = 0
        for (kind, data), e in self.factors:
            deg = euler_phi(data) if kind == "cyclo" else len(data) - 1
            tot += deg * e
        return tot

    def cyclo_exponents(self) -> dict:
        return {d[1]: e for d, e in self.factors if d[0] == "cyclo"}

    def exponent(self, r: int) -> int:
        return self.cyclo_exponents().get(r, 0)

    def is_cyclotomic(self) -> bool:
        return all(d[0] == "cyclo" for d, _ in self.factors)

    def expand(self):
        """Integer coefficients (only for fully cyclotomic products)."""
        f = [1]
        for (kind, data), e in self.factors:
            g = list(cyclotomic_poly(data)) if kind == "cyclo" else list(data)
            for _ in range(e):
                f = poly_mul(f, g)
        return f

    def to_json(self):
        out = []
        for (kind, data), e in self.factors:
            if kind == "cyclo":
                out.append(["cyclo", data, e])
            else:
                out.append(["poly", list(data), e])
        return out

    def __str__(self):
        parts = []
        for (kind, data), e in self.factors:
            if kind == "cyclo":
                base = "(t-1)" if data == 1 else ("(t+1)" if data == 2 else f"Phi{data}")
            else:
                base = "(" + "+".join(f"{c}*t^{k}" for k, c in enumerate(data) if c) + ")"
            parts.append(base if e == 1 else f"{base}^{e}")
        return "*".join(parts) if parts else "1"


def factor_by_root_orders(roots, ctx: RootOfUnityContext) -> FactoredCharPoly:
    p, N = ctx.p, ctx.N
    counts: dict[int, int] = {}
    for x in roots:
        x %= p
        if pow(x, N, p) != 1:
            raise ValueError(f"{x} is not an {N}-th root of unity mod {p}")
        counts[x] = counts.get(x, 0) + 1
    by_order: dict[int, dict[int, int]] = {}
    for x, c in counts.items():
        by_order.setdefault(element_order(x, p, N), {})[x] = c
    facs = []
    imbalance = False
    for r in sorted(by_order):
        prim = [ctx.power(k * (N // r)) for k in range(1, r + 1) if gcd(k, r) == 1]
        mults = [by_order[r].get(z, 0) for z in prim]
        if len(set(mults)) == 1:
            facs.append((("cyclo", r), mults[0]))
        else:
            imbalance = True
            for z, m in sorted(zip(prim, mults)):
                if m:
                    facs.append((("poly", ((-z) % p, 1)), m))
    return FactoredCharPoly(tuple(facs), (p, N), imbalance)
