"""Boundary manifold of a line arrangement and the boundary of its Milnor fiber."""
from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import gcd

from .arrangement import Arrangement, classify_shape, mobius_poincare
from .braids import GroupPresentation, commutator, free_reduce, inv, mul
from .errors import DimensionMismatch, InputError, NonEssential, SimplificationFailure, UnsupportedRank
from .jumploci import Character, local_system_h1
from .milnor import CyclicCoverSpec, DEFAULT_BUDGET_COLS, abelian_cover_monodromy, integral_cover_homology
from .resonance import build_os2
from .scalar import FactoredCharPoly, divisors, rank_mod_p, rref_exact, rref_mod_p


def _require_lines(A: Arrangement):
    if A.d != 2:
        raise UnsupportedRank(f"boundary invariants need a line arrangement (d = 2), got d = {A.d}")


def _is_pencil(A: Arrangement):
    return A.n <= 2 or any(len(X.hyperplanes) == A.n for X in A.flats2)


# ---------------------------------------------------------------------------
# graph


@dataclass
class BoundaryGraph:
    n: int
    points: list          # line tuples of the flats with >= 3 lines, by flat id
    flat_ids: list
    weights: list
    edges: list           # oriented (tail, head), lexicographic
    tree: list            # indices into edges
    cycles: list          # indices into edges, in y order
    root: int = 0

    @property
    def nv(self):
        return self.n + len(self.points)

    @property
    def s(self):
        return len(self.edges) - self.nv + 1

    @property
    def r(self):
        return len(self.points)

    def label(self, v):
        if v < self.n:
            return f"v{v + 1}"
        return "v" + "".join(str(i + 1) if self.n < 10 else f"_{i + 1}" for i in self.points[v - self.n])

    def neighbors(self, v):
        out = []
        for a, b in self.edges:
            if a == v:
                out.append(b)
            elif b == v:
                out.append(a)
        return sorted(out)

    def degree(self, v):
        return sum((a == v) + (b == v) for a, b in self.edges)

    def lines_of(self, v):
        return (v,) if v < self.n else tuple(self.points[v - self.n])

    def to_json(self):
        return {"n": self.n, "r": self.r, "s": self.s, "root": self.root,
                "vertices": [{"label": self.label(v), "weight": self.weights[v],
                              "lines": [i + 1 for i in self.lines_of(v)]} for v in range(self.nv)],
                "edges": [[self.label(a), self.label(b)] for a, b in self.edges],
                "tree": [[self.label(a), self.label(b)] for a, b in (self.edges[k] for k in self.tree)],
                "cycles": [[self.label(a), self.label(b)] for a, b in (self.edges[k] for k in self.cycles)]}

    def to_dot(self):
        lines = ["digraph boundary {"]
        for v in range(self.nv):
            shape = "circle" if v < self.n else "box"
            lines.append(f'  "{self.label(v)}" [weight={self.weights[v]}, shape={shape}];')
        tree = set(self.tree)
        ykey = {e: k + 1 for k, e in enumerate(self.cycles)}
        for k, (a, b) in enumerate(self.edges):
            attr = "style=dashed" if k in tree else f'label="y{ykey[k]}"'
            lines.append(f'  "{self.label(a)}" -> "{self.label(b)}" [{attr}];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def build_graph(A: Arrangement, root: int = 0, cycle_order: str = "lex",
                allow_pencil: bool = True) -> BoundaryGraph:
    """Weighted incidence graph of the blown-up arrangement.

    Pencils are not essential but have a well defined boundary manifold,
    so they are accepted unless ``allow_pencil`` is False.
    """
    _require_lines(A)
    if not A.essential and not (allow_pencil and _is_pencil(A)):
        raise NonEssential("the boundary graph needs an essential arrangement")
    n = A.n
    flats = sorted(A.flats2, key=lambda X: X.id)
    big = [X for X in flats if len(X.hyperplanes) >= 3]
    points = [tuple(X.hyperplanes) for X in big]
    weights = [1 - sum(i in P for P in points) for i in range(n)] + [-1] * len(points)
    edges = []
    for X in flats:
        if len(X.hyperplanes) == 2:
            edges.append(tuple(X.hyperplanes))
    for k, P in enumerate(points):
        edges += [(n + k, i) for i in P]
    edges.sort()
    nv = n + len(points)
    if not 0 <= root < nv:
        raise InputError(f"root {root} is not a vertex")
    adj = {v: [] for v in range(nv)}
    for k, (a, b) in enumerate(edges):
        adj[a].append((b, k))
        adj[b].append((a, k))
    seen, tree = {root}, []
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for w, k in sorted(adj[v]):
            if w not in seen:
                seen.add(w)
                tree.append(k)
                queue.append(w)
    if len(seen) != nv:
        raise InputError("incidence graph is disconnected")
    rest = [k for k in range(len(edges)) if k not in set(tree)]
    if cycle_order == "revlex":
        rest.reverse()
    elif cycle_order != "lex":
        raise InputError("cycle_order must be 'lex' or 'revlex'")
    return BoundaryGraph(n, points, [X.id for X in big], weights, edges, sorted(tree), rest, root)


# ---------------------------------------------------------------------------
# homology


def poincare_boundary(A: Arrangement) -> list:
    """Coefficients of Poin(U, t) + t^(2d-1) Poin(U, 1/t)."""
    L = mobius_poincare(A)
    pu = list(L.poincare_U)
    top = 2 * A.d - 1
    out = [0] * (top + 1)
    for k, c in enumerate(pu):
        out[k] += c
        out[top - k] += c
    return out


def b1_three_ways(A: Arrangement, g: BoundaryGraph | None = None):
    g = g or build_graph(A)
    pu = mobius_poincare(A).poincare_U
    split = (pu[1] if len(pu) > 1 else 0) + (pu[2] if len(pu) > 2 else 0)
    _, simp = westlund_presentation(g)
    rank, tors = simp.abelianization()
    return {"graph": (A.n - 1) + g.s, "splitting": split, "presentation": rank,
            "presentation_torsion": tors}


# ---------------------------------------------------------------------------
# doubled cohomology ring


def _solve_columns(vectors, field):
    """Pivot subset of the vectors and every vector's coordinates in it."""
    if not vectors:
        return [], []
    M = [list(col) for col in zip(*vectors)]
    if field == "Q":
        R, piv = rref_exact(M)
        coords = [[R[r][c] for r in range(len(piv))] for c in range(len(vectors))]
    else:
        R, piv = rref_mod_p(M, field)
        coords = [[int(R[r][c]) for r in range(len(piv))] for c in range(len(vectors))]
    return list(piv), coords


@dataclass
class DoubledRing:
    field: object
    n: int
    b2: int
    mu: dict                 # (i, j) -> coordinates of alpha_i alpha_j in the beta basis
    beta_pairs: list         # the products alpha_i alpha_j chosen as the beta basis
    table: dict = field(default_factory=dict)   # (p, q) -> array [i, j, k]

    @property
    def dims(self):
        m = self.n - 1
        return (1, m + self.b2, self.b2 + m, 1)

    def basis_names(self, deg):
        m = self.n - 1
        if deg == 0:
            return ["1"]
        if deg == 1:
            return [f"a{i + 1}" for i in range(m)] + [f"b'{k + 1}" for k in range(self.b2)]
        if deg == 2:
            return [f"b{k + 1}" for k in range(self.b2)] + [f"a'{i + 1}" for i in range(m)]
        return ["w"]

    def _zero(self):
        return Fraction(0) if self.field == "Q" else 0

    def mult(self, p, u, q, v):
        """Product of homogeneous coordinate vectors u (degree p) and v (degree q)."""
        if p + q > 3:
            return []
        T = self.table[(p, q)]
        out = []
        for k in range(self.dims[p + q]):
            tot = self._zero()
            for i, x in enumerate(u):
                if not x:
                    continue
                for j, y in enumerate(v):
                    c = T[i][j][k]
                    if c and y:
                        tot += c * x * y
            out.append(tot % self.field if self.field != "Q" else tot)
        return out

    def pairing_matrix(self):
        """Degree (1, 2) pairing with columns in dual order (a', b')."""
        T = self.table[(1, 2)]
        m = self.n - 1
        cols = [self.b2 + i for i in range(m)] + list(range(self.b2))
        return [[T[i][j][0] for j in cols] for i in range(self.dims[1])]

    def check(self):
        """Associativity and graded commutativity on all basis triples."""
        d = self.dims
        f = self.field
        for (p, q), T in self.table.items():
            S = self.table[(q, p)]
            sign = -1 if (p * q) % 2 else 1
            for i in range(d[p]):
                for j in range(d[q]):
                    a = [x for x in T[i][j]]
                    b = [sign * x for x in S[j][i]]
                    if f != "Q":
                        a = [x % f for x in a]
                        b = [x % f for x in b]
                    if a != b:
                        return False
        for p in range(4):
            for q in range(4 - p):
                for r in range(4 - p - q):
                    for i in range(d[p]):
                        ei = _unit(d[p], i, self._zero())
                        for j in range(d[q]):
                            ej = _unit(d[q], j, self._zero())
                            left = self.mult(p, ei, q, ej)
                            for k in range(d[r]):
                                ek = _unit(d[r], k, self._zero())
                                x = self.mult(p + q, left, r, ek)
                                y = self.mult(p, ei, q + r, self.mult(q, ej, r, ek))
                                if x != y:
                                    return False
        return True


def _unit(n, i, zero):
    v = [zero] * n
    v[i] = zero + 1
    return v


def doubled_ring(A: Arrangement, field="Q") -> DoubledRing:
    _require_lines(A)
    os_ = build_os2(A, field)
    f = os_.field
    n = A.n
    m = n - 1
    b1 = os_.proj_basis1
    pairs = list(combinations(range(m), 2))
    vecs = [os_.wedge(b1[i], b1[j]) for i, j in pairs]
    piv, coords = _solve_columns(vecs, f)
    b2 = len(piv)
    zero = Fraction(0) if f == "Q" else 0
    mu = {}
    for (i, j), c in zip(pairs, coords):
        mu[(i, j)] = c
        mu[(j, i)] = [(-x) % f if f != "Q" else -x for x in c]
    for i in range(m):
        mu[(i, i)] = [zero] * b2
    dims = (1, m + b2, b2 + m, 1)

    def blank(p, q):
        return [[[zero] * (dims[p + q] if p + q <= 3 else 0) for _ in range(dims[q])] for _ in range(dims[p])]

    T = {}
    for p in range(4):
        for q in range(4 - p):
            T[(p, q)] = blank(p, q)
    # the unit
    for q in range(4):
        for j in range(dims[q]):
            T[(0, q)][0][j][j] = zero + 1
            T[(q, 0)][j][0][j] = zero + 1
    # degree 1 x degree 1: alpha alpha -> beta, alpha b' -> alpha', b' b' = 0
    T11 = T[(1, 1)]
    for i in range(m):
        for j in range(m):
            for k in range(b2):
                T11[i][j][k] = mu[(i, j)][k]
        for k in range(b2):
            for l in range(m):
                c = mu[(l, i)][k]
                if c:
                    T11[i][m + k][b2 + l] = c
                    T11[m + k][i][b2 + l] = -c if f == "Q" else (-c) % f
    # degree 1 x degree 2 and back: the duality pairing
    T12, T21 = T[(1, 2)], T[(2, 1)]
    for i in range(m):
        T12[i][b2 + i][0] = zero + 1
        T21[b2 + i][i][0] = zero + 1
    for k in range(b2):
        T12[m + k][k][0] = zero + 1
        T21[k][m + k][0] = zero + 1
    return DoubledRing(f, n, b2, mu, [pairs[c] for c in piv], T)


def boundary_h1_dim(ring: DoubledRing, a) -> int:
    """dim H^1 of the complex given by multiplication with a in degree 1."""
    d1 = ring.dims[1]
    if len(a) != d1:
        raise DimensionMismatch(f"vector has {len(a)} entries, degree-1 part has dimension {d1}")
    f = ring.field
    a = [Fraction(x) for x in a] if f == "Q" else [int(x) % f for x in a]
    cols = []
    for j in range(d1):
        cols.append(ring.mult(1, a, 1, _unit(d1, j, ring._zero())))
    M = [list(r) for r in zip(*cols)]
    if f == "Q":
        from .scalar import rank_exact
        r = rank_exact(M)
    else:
        r = rank_mod_p(M, f)
    nonzero = any(a)
    return d1 - r - (1 if nonzero else 0)


def boundary_resonance_membership(ring: DoubledRing, a, s: int) -> bool:
    """Whether a lies in R^1_s of the doubled ring.

    The zero vector has H^1 equal to the whole degree-1 part, so it is a
    member exactly when s does not exceed that dimension.
    """
    return boundary_h1_dim(ring, a) >= s


# ---------------------------------------------------------------------------
# Alexander polynomial and V^1_1


@dataclass
class BoundaryAlexander:
    n: int
    numerator: list        # (line tuple, exponent > 0)
    denominator: list      # (line tuple, exponent > 0) for vertices of degree < 2
    components: list       # line tuples v with d_v >= 3, one subtorus {t_v = 1} each
    vanishing: list        # factors whose t_v is the product of all t_i (identically 1 on the torus)

    def __str__(self):
        def fac(lines, e):
            base = "*".join(f"t{i + 1}" for i in lines)
            return f"({base}-1)" + (f"^{e}" if e != 1 else "")
        num = "*".join(fac(L, e) for L, e in self.numerator) or "1"
        if self.denominator:
            return num + " / (" + "*".join(fac(L, e) for L, e in self.denominator) + ")"
        return num

    def to_json(self):
        return {"numerator": [[[i + 1 for i in L], e] for L, e in self.numerator],
                "denominator": [[[i + 1 for i in L], e] for L, e in self.denominator],
                "components": [[i + 1 for i in L] for L in self.components],
                "vanishing_on_torus": [[i + 1 for i in L] for L in self.vanishing],
                "text": str(self)}


def alexander_boundary(A: Arrangement, g: BoundaryGraph | None = None) -> BoundaryAlexander:
    g = g or build_graph(A)
    num, den, comps, van = [], [], [], []
    for v in range(g.nv):
        e = g.degree(v) - 2
        lines = g.lines_of(v)
        if e > 0:
            num.append((lines, e))
        elif e < 0:
            den.append((lines, -e))
        if e >= 1:
            comps.append(lines)
        if e and len(lines) == A.n:
            van.append(lines)
    return BoundaryAlexander(A.n, num, den, comps, van)


def v1_depth_at(simplified: GroupPresentation, n: int, tvals, yvals, ctx) -> int:
    """dim H^1 of pi_1 of the boundary at a character given on x_1..x_{n-1} and y."""
    vals = list(tvals[:n - 1]) + list(yvals)
    return local_system_h1(simplified, Character(vals, ctx.p, ctx))


# ---------------------------------------------------------------------------
# fundamental group


def _conj(x, u):
    """x^u = u^-1 x u."""
    return mul(inv(u), x, u)


def _power(g, e):
    return [g] * e if e >= 0 else [-g] * (-e)


def _cyc_reduce(w):
    w = free_reduce(w)
    while len(w) > 1 and w[0] == -w[-1]:
        w = w[1:-1]
    return w


def _substitute(w, g, repl):
    out = []
    for a in w:
        if a == g:
            out.extend(repl)
        elif a == -g:
            out.extend(inv(repl))
        else:
            out.append(a)
    return free_reduce(out)


def _solve_for(rel, g):
    """If g occurs once in rel, the word it equals."""
    pos = [k for k, a in enumerate(rel) if abs(a) == g]
    if len(pos) != 1:
        return None
    k = pos[0]
    before, after = rel[:k], rel[k + 1:]
    if rel[k] > 0:
        return mul(inv(before), inv(after))
    return mul(after, before)


def westlund_presentation(g: BoundaryGraph):
    """(raw, simplified) presentations of pi_1 of the boundary manifold.

    Raw generators are x_1..x_{n+r} (one per vertex) and y_1..y_s; every edge
    gives a commutator and every vertex a product relator.  The simplified
    form keeps x_1..x_{n-1}, y_1..y_s: commutators of tree edges are dropped
    (each follows from the other relators at its lower endpoint, working up
    from the leaves of the tree), then point generators and x_n are removed
    by Tietze moves.
    """
    n, nv = g.n, g.nv
    s = g.s
    ygen = {e: nv + k + 1 for k, e in enumerate(g.cycles)}
    tree = set(g.tree)
    u = {}
    for k, (a, b) in enumerate(g.edges):
        if k in tree:
            u[(a, b)] = []
            u[(b, a)] = []
        else:
            u[(a, b)] = [ygen[k]]
            u[(b, a)] = [-ygen[k]]
    names = [g.label(v).replace("v", "x", 1) for v in range(nv)] + [f"y{k + 1}" for k in range(s)]
    comms, tree_comms, verts = [], [], []
    for k, (a, b) in enumerate(g.edges):
        rel = commutator([a + 1], _conj([b + 1], u[(a, b)]))
        (tree_comms if k in tree else comms).append(rel)
    for i in range(nv):
        w = []
        for j in range(nv):
            if j == i:
                w += _power(i + 1, g.weights[i])
            elif (i, j) in u:
                w += _conj([j + 1], u[(i, j)])
        verts.append(free_reduce(w))
    raw_rels = [r for r in comms + tree_comms + verts]
    raw = GroupPresentation(nv + s, raw_rels, kind="boundary-raw", names=names,
                            meta={"n": n, "r": g.r, "s": s})
    rels = [list(r) for r in comms] + [list(r) for r in verts]
    own = {i: len(comms) + i for i in range(nv)}
    order = list(range(n + 1, nv + 1)) + ([n] if n >= 1 else [])
    for gen in order:
        idx = own[gen - 1]
        sol = _solve_for(rels[idx], gen) if idx is not None else None
        if sol is None:
            cands = [(len(r), k) for k, r in enumerate(rels) if _solve_for(r, gen) is not None]
            if not cands:
                err = SimplificationFailure(f"no relator determines {names[gen - 1]}")
                err.raw = raw
                raise err
            idx = min(cands)[1]
            sol = _solve_for(rels[idx], gen)
        rels = [_substitute(r, gen, sol) for k, r in enumerate(rels) if k != idx]
        own = {v: (k if k < idx else k - 1) if k is not None and k != idx else None
               for v, k in own.items()}
    keep = list(range(1, n)) + list(range(nv + 1, nv + s + 1))
    ren = {gg: k + 1 for k, gg in enumerate(keep)}
    out = []
    for r in rels:
        w = _cyc_reduce([ren[abs(a)] * (1 if a > 0 else -1) for a in r])
        if w:
            out.append(w)
    simp = GroupPresentation(len(keep), out, kind="boundary",
                             names=[f"x{i}" for i in range(1, n)] + [f"y{k + 1}" for k in range(s)],
                             meta={"n": n, "s": s})
    rank, tors = simp.abelianization()
    if rank != n - 1 + s or tors:
        err = SimplificationFailure(f"simplified abelianization is Z^{rank} + {tors}, expected Z^{n - 1 + s}")
        err.raw = raw
        raise err
    return raw, simp


# ---------------------------------------------------------------------------
# boundary of the Milnor fiber


def bdF_charpoly(A: Arrangement) -> FactoredCharPoly:
    """prod over rank-2 flats X of (t-1)(t^gcd(mu+1, n) - 1)^(mu-1)."""
    n = A.n
    exps: dict = {}
    for X in A.flats2:
        mu = X.mobius
        exps[1] = exps.get(1, 0) + 1
        gg = gcd(mu + 1, n)
        for r in divisors(gg):
            exps[r] = exps.get(r, 0) + (mu - 1)
    return FactoredCharPoly.from_cyclo_exponents(exps, "rational")


def bdF_b1(A: Arrangement) -> int:
    return sum(1 + (X.mobius - 1) * gcd(X.mobius + 1, A.n) for X in A.flats2)


@dataclass
class BdFInvariants:
    n: int
    cover: CyclicCoverSpec
    charpoly: FactoredCharPoly
    b1: int
    integral_h1: tuple | None
    sweep_charpoly: FactoredCharPoly | None
    consistent: bool

    def to_json(self):
        out = {"N": self.n, "chi": list(self.cover.chi), "charpoly": str(self.charpoly),
               "charpoly_factors": self.charpoly.to_json(), "b1": self.b1,
               "degree": self.charpoly.degree(), "consistent": self.consistent}
        if self.integral_h1 is not None:
            out["integral_h1"] = {"rank": self.integral_h1[0], "torsion": list(self.integral_h1[1])}
        if self.sweep_charpoly is not None:
            out["sweep_charpoly"] = str(self.sweep_charpoly)
        return out


def bdF_invariants(A: Arrangement, budget_cols: int = DEFAULT_BUDGET_COLS, integral: bool = True,
                   g: BoundaryGraph | None = None) -> BdFInvariants:
    g = g or build_graph(A)
    _, simp = westlund_presentation(g)
    n = A.n
    spec = CyclicCoverSpec(simp, n, [1] * (n - 1) + [0] * g.s)
    cp = bdF_charpoly(A)
    b1 = bdF_b1(A)
    sweep = abelian_cover_monodromy(spec) if n > 1 else None
    ih = None
    if integral and n > 1:
        ih = integral_cover_homology(spec, budget_cols)
    ok = cp.degree() == b1
    if sweep is not None:
        ok = ok and sweep.cyclo_exponents() == cp.cyclo_exponents()
    if ih is not None:
        ok = ok and ih[0] == b1
    return BdFInvariants(n, spec, cp, b1, ih, sweep, ok)


def generic_torsion_expectation(n: int):
    """Expected H_1 of the boundary Milnor fiber for n generic lines (not a theorem)."""
    return n * (n - 1) // 2, [n] * ((n - 2) * (n - 3) // 2)


# ---------------------------------------------------------------------------
# formality


@dataclass
class FormalityReport:
    shape: str
    formal: bool
    boundary_type: str | None
    bdF_type: str | None
    witness: dict | None

    def to_json(self):
        return {"shape": self.shape, "formal_boundary": self.formal, "formal_bdF": self.formal,
                "boundary_type": self.boundary_type, "bdF_type": self.bdF_type, "witness": self.witness}


def _connected_sum(k, piece="S^1xS^2"):
    if k == 0:
        return "S^3"
    return piece if k == 1 else f"#^{k} {piece}"


def formality_report(A: Arrangement, seed: int = 0, p: int = 10007) -> FormalityReport:
    _require_lines(A)
    shape = classify_shape(A)
    n = A.n
    if shape == "pencil":
        return FormalityReport(shape, True, _connected_sum(n - 1), _connected_sum((n - 1) ** 2), None)
    if shape == "near-pencil":
        t = f"S^1xSigma_{n - 2}"
        return FormalityReport(shape, True, t, t, None)
    # R^1_1 is all of H^1: a random class is resonant.  V^1_1 is a finite
    # union of codimension-one subtori, so its tangent cone at 1 is a union
    # of hyperplanes and cannot fill H^1.
    rng = random.Random(seed)
    ring = doubled_ring(A, p)
    a = [rng.randrange(1, p) for _ in range(ring.dims[1])]
    depth = boundary_h1_dim(ring, a)
    alex = alexander_boundary(A)
    hyper = [[i + 1 for i in L] for L in alex.components]
    witness = {"field": p, "random_class_depth": depth, "resonant": depth >= 1,
               "h1_dim": ring.dims[1], "v1_subtori": hyper,
               "tangent_cone": "union of hyperplanes {sum_{i in v} a_i = 0}",
               "violation": depth >= 1 and bool(hyper)}
    return FormalityReport(shape, False, None, None, witness)


# ---------------------------------------------------------------------------
# aggregate


@dataclass
class BoundaryInvariants:
    graph: BoundaryGraph
    poincare: list
    alexander: BoundaryAlexander
    b1: dict
    formality: FormalityReport
    bdF: BdFInvariants | None

    def to_json(self):
        return {"graph": self.graph.to_json(), "poincare": self.poincare,
                "alexander": self.alexander.to_json(), "b1": self.b1,
                "formality": self.formality.to_json(),
                "bdF": self.bdF.to_json() if self.bdF else None}


def boundary_invariants(A: Arrangement, budget_cols: int = DEFAULT_BUDGET_COLS, seed: int = 0):
    g = build_graph(A)
    return BoundaryInvariants(g, poincare_boundary(A), alexander_boundary(A, g), b1_three_ways(A, g),
                              formality_report(A, seed), bdF_invariants(A, budget_cols, g=g))
