"""Milnor fibers of multi-arrangements as cyclic covers of the projective complement."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from math import gcd
from functools import reduce

import numpy as np

from .arrangement import Arrangement, mobius_poincare
from .braids import GroupPresentation, presentation_complement, projectivize_presentation
from .errors import BadPrime, BudgetExceeded, InputError, NonPrimitiveMultiplicity
from .jumploci import Character, DepthProfile, fox_derivative, local_system_h1
from .scalar import (FactoredCharPoly, RootOfUnityContext, consensus, cyclotomic_poly, divisors,
                     euler_phi, find_cyclotomic_prime, is_prime, poly_divexact, qualifying_contexts,
                     rank_mod_p, smith_normal_form)

DEFAULT_BUDGET_COLS = 4096
_PRES_CACHE: dict = {}


def base_presentation(A: Arrangement) -> GroupPresentation:
    """Projectivized arrangement group (cached per arrangement)."""
    key = (A.forms, A.dim)
    if key not in _PRES_CACHE:
        _PRES_CACHE[key] = projectivize_presentation(presentation_complement(A))
    return _PRES_CACHE[key]


def _check_m(A: Arrangement, m):
    if m is None:
        m = [1] * A.n
    m = [int(x) for x in m]
    if len(m) != A.n:
        raise InputError(f"{len(m)} multiplicities given for {A.n} hyperplanes")
    if any(x < 1 for x in m):
        raise InputError("multiplicities must be positive")
    if reduce(gcd, m) != 1:
        raise NonPrimitiveMultiplicity(f"gcd of multiplicities is {reduce(gcd, m)}; the Milnor fiber is disconnected")
    return m


def euler_U(A: Arrangement) -> int:
    L = mobius_poincare(A)
    return L.euler_U


def delta_character(A: Arrangement, m, ctx: RootOfUnityContext):
    m = _check_m(A, m)
    N = sum(m)
    if ctx.N % N:
        raise InputError(f"context of order {ctx.N} lacks primitive {N}-th roots")
    z = ctx.root(N)
    return [Character([pow(z, j * mh, ctx.p) for mh in m], ctx.p, ctx) for j in range(N)]


# ---------------------------------------------------------------------------
# cover chain complexes


def _abelian_elements(moduli):
    return list(product(*[range(d) for d in moduli]))


def _cover_matrices(P: GroupPresentation, chi, moduli):
    """Boundary maps of the cover classified by chi, as integer arrays.

    Cells are indexed (cell, group element) with group elements in
    lexicographic order.  Returns (D1, D2) with D2 of shape
    (relators*G) x (gens*G) acting on row vectors, and D1 of shape
    (gens*G) x G.
    """
    elems = _abelian_elements(moduli)
    G = len(elems)
    index = {g: k for k, g in enumerate(elems)}
    n, m = P.ngens, len(P.relators)

    def push(e):
        return tuple(sum(ek * chi[k][i] for k, ek in enumerate(e)) % d for i, d in enumerate(moduli))

    def add(g, a):
        return tuple((x + y) % d for x, y, d in zip(g, a, moduli))

    D2 = np.zeros((m * G, n * G), dtype=np.int64)
    for i, r in enumerate(P.relators):
        for j in range(1, n + 1):
            fd = fox_derivative(r, j, n)
            if not fd:
                continue
            coeffs = {}
            for e, c in fd.items():
                a = push(e)
                coeffs[a] = coeffs.get(a, 0) + c
            for a, c in coeffs.items():
                if not c:
                    continue
                for g in elems:
                    D2[i * G + index[g], (j - 1) * G + index[add(g, a)]] += c
    D1 = np.zeros((n * G, G), dtype=np.int64)
    for j in range(n):
        a = tuple(chi[j][i] % d for i, d in enumerate(moduli))
        for g in elems:
            D1[j * G + index[g], index[add(g, a)]] += 1
            D1[j * G + index[g], index[g]] -= 1
    return D1, D2


def _check_chi(P, chi, moduli):
    if len(chi) != P.ngens:
        raise InputError(f"chi has {len(chi)} entries for {P.ngens} generators")
    chi = [tuple(c) if isinstance(c, (list, tuple)) else (c,) for c in chi]
    if any(len(c) != len(moduli) for c in chi):
        raise InputError("each chi entry needs one residue per cyclic factor")
    # every relator must map to zero
    for r in P.relators:
        e = [0] * P.ngens
        for a in r:
            e[abs(a) - 1] += 1 if a > 0 else -1
        for i, d in enumerate(moduli):
            if sum(ek * chi[k][i] for k, ek in enumerate(e)) % d:
                raise InputError("chi does not factor through the group")
    # surjectivity: the residues must generate the group
    sub = {tuple([0] * len(moduli))}
    frontier = list(sub)
    while frontier:
        g = frontier.pop()
        for c in chi:
            h = tuple((x + y) % d for x, y, d in zip(g, c, moduli))
            if h not in sub:
                sub.add(h)
                frontier.append(h)
    G = 1
    for d in moduli:
        G *= d
    if len(sub) != G:
        raise InputError("chi is not surjective; the cover would be disconnected")
    return chi


@dataclass
class CyclicCoverSpec:
    base_presentation: GroupPresentation
    N: int
    chi: list

    @staticmethod
    def milnor(A: Arrangement, m=None):
        m = _check_m(A, m)
        return CyclicCoverSpec(base_presentation(A), sum(m), [x % sum(m) for x in m])


def integral_cover_homology(spec, budget_cols: int = DEFAULT_BUDGET_COLS, moduli=None):
    """(free rank, torsion list) of H_1 of the cover, via Smith normal form."""
    P = spec.base_presentation
    moduli = list(moduli) if moduli else [spec.N]
    chi = _check_chi(P, spec.chi, moduli)
    G = 1
    for d in moduli:
        G *= d
    if P.ngens * G > budget_cols:
        raise BudgetExceeded(f"cover matrix needs {P.ngens * G} columns (budget {budget_cols})")
    D1, D2 = _cover_matrices(P, chi, moduli)
    rank1 = G - 1
    if len(D2):
        diag, rank2 = smith_normal_form(D2.tolist())
    else:
        diag, rank2 = [], 0
    tors = [d for d in diag if d > 1]
    return P.ngens * G - rank1 - rank2, tors


def cover_h1_mod_p(P: GroupPresentation, chi, moduli, p: int) -> int:
    chi = _check_chi(P, chi, moduli)
    D1, D2 = _cover_matrices(P, chi, moduli)
    r1 = rank_mod_p(D1 % p, p)
    r2 = rank_mod_p(D2 % p, p) if len(D2) else 0
    return D1.shape[0] - r1 - r2


def _shift_power_matrix(G, poly, ncells, p):
    """Block-diagonal matrix of poly(T) with T the cyclic shift, on ncells blocks."""
    C = np.zeros((G, G), dtype=np.int64)
    for k, c in enumerate(poly):
        c %= p
        if not c:
            continue
        for g in range(G):
            C[g, (g + k) % G] = (C[g, (g + k) % G] + c) % p
    return np.kron(np.eye(ncells, dtype=np.int64), C) % p


def isotypic_h1_dims(P: GroupPresentation, chi, N: int, p: int) -> dict:
    """dim of the Phi_r-primary part of H_1 of the Z_N cover over GF(p), p not dividing N."""
    if N % p == 0:
        raise BadPrime(f"p={p} divides N={N}")
    chi = _check_chi(P, [[c % N] for c in chi], [N])
    D1, D2 = _cover_matrices(P, chi, [N])
    n, m = P.ngens, len(P.relators)
    tN = [-1] + [0] * (N - 1) + [1]
    out = {}
    for r in divisors(N):
        psi = poly_divexact(tN, list(cyclotomic_poly(r)))
        S1 = _shift_power_matrix(N, psi, n, p)
        S2 = _shift_power_matrix(N, psi, m, p)
        # row-vector convention: a chain c maps to c @ D
        r1 = rank_mod_p((S1 @ D1) % p, p)
        r2 = rank_mod_p((S2 @ D2) % p, p) if m else 0
        out[r] = n * euler_phi(r) - r1 - r2
    return out


# ---------------------------------------------------------------------------
# Betti numbers and characteristic polynomials


@dataclass
class MilnorH1:
    dim: int
    p: int
    N: int
    depths: list | None = None
    method: str = "characters"

    def profile(self):
        return DepthProfile(self.depths or [], [])


def _sweep(P, m, ctx):
    N = sum(m)
    z = ctx.root(N)
    depths = []
    for j in range(N):
        ch = Character([pow(z, j * mh, ctx.p) for mh in m], ctx.p, ctx)
        depths.append(local_system_h1(P, ch))
    return depths


def milnor_h1(A: Arrangement, m=None, p: int | None = None) -> MilnorH1:
    m = _check_m(A, m)
    N = sum(m)
    P = base_presentation(A)
    if p is None:
        ctx = find_cyclotomic_prime(N)
        d = _sweep(P, m, ctx)
        return MilnorH1(sum(d), ctx.p, N, d)
    if not is_prime(p):
        raise InputError(f"{p} is not prime")
    if N % p == 0:
        raise BadPrime(f"p={p} divides N={N}")
    if (p - 1) % N == 0:
        ctx = RootOfUnityContext(N, p, find_root(N, p))
        d = _sweep(P, m, ctx)
        return MilnorH1(sum(d), p, N, d)
    dim = cover_h1_mod_p(P, [[x % N] for x in m], [N], p)
    return MilnorH1(dim, p, N, None, "cover")


def find_root(N: int, p: int) -> int:
    from .scalar import primitive_root
    return pow(primitive_root(p), (p - 1) // N, p)


def _charpoly_from_depths(depths, N, field_tag):
    by_order: dict = {}
    for j, d in enumerate(depths):
        r = N // gcd(j, N)
        by_order.setdefault(r, []).append(d)
    exps, imbalance = {}, False
    for r, ds in by_order.items():
        if len(set(ds)) != 1:
            imbalance = True
        exps[r] = sum(ds) // len(ds) if len(set(ds)) == 1 else sum(ds) / len(ds)
    if imbalance:
        exps = {r: e for r, e in exps.items()}
    return FactoredCharPoly.from_cyclo_exponents(
        {r: (int(e) if float(e).is_integer() else e) for r, e in exps.items()}, field_tag, imbalance)


def charpoly_q1(A: Arrangement, m=None, p: int | None = None) -> FactoredCharPoly:
    m = _check_m(A, m)
    N = sum(m)
    P = base_presentation(A)
    if p is None or (p - 1) % N == 0:
        h = milnor_h1(A, m, p)
        return _charpoly_from_depths(h.depths, N, ("char0" if p is None else p))
    dims = isotypic_h1_dims(P, m, N, p)
    exps, imbalance = {}, False
    for r, dim in dims.items():
        if dim % euler_phi(r):
            imbalance = True
        exps[r] = dim // euler_phi(r)
    return FactoredCharPoly.from_cyclo_exponents(exps, p, imbalance)


def charpoly_q2(A: Arrangement, m, q1: FactoredCharPoly, b1: int) -> FactoredCharPoly:
    """Delta_2 = Delta_1 * (t^N - 1)^chi(U) / (t - 1), with the degree identity enforced."""
    m = _check_m(A, m)
    N = sum(m)
    chiU = euler_U(A)
    exps = dict(q1.cyclo_exponents())
    for r in divisors(N):
        exps[r] = exps.get(r, 0) + chiU
    exps[1] = exps.get(1, 0) - 1
    if any(e < 0 for e in exps.values()):
        raise ArithmeticError(f"negative exponent in the degree-2 polynomial: {exps}")
    out = FactoredCharPoly.from_cyclo_exponents(exps, q1.field_tag, q1.galois_imbalance)
    if out.degree() != N * chiU - 1 + b1:
        raise ArithmeticError("degree identity for b_2(F) failed")
    return out


def monodromy_charpoly(A: Arrangement, m=None, q: int = 1, p: int | None = None) -> FactoredCharPoly:
    m = _check_m(A, m)
    d1 = charpoly_q1(A, m, p)
    if q == 1:
        return d1
    if q == 2:
        return charpoly_q2(A, m, d1, d1.degree())
    raise InputError("q must be 1 or 2")


@dataclass
class MilnorInvariants:
    N: int
    b1: int
    charpoly_q1: FactoredCharPoly
    charpoly_q2: FactoredCharPoly
    integral_h1: tuple | None
    per_prime: dict
    unanimous: bool

    def to_json(self):
        out = {"N": self.N, "b1": self.b1, "per_prime": {str(p): v for p, v in sorted(self.per_prime.items())},
               "charpoly_q1": self.charpoly_q1.to_json(), "charpoly_q2": self.charpoly_q2.to_json(),
               "charpoly_q1_str": str(self.charpoly_q1), "charpoly_q2_str": str(self.charpoly_q2),
               "unanimous": self.unanimous}
        if self.integral_h1 is not None:
            out["integral_h1"] = {"rank": self.integral_h1[0], "torsion": list(self.integral_h1[1])}
        else:
            out["integral_h1"] = None
        return out


def milnor_invariants(A: Arrangement, m=None, primes: int = 3, budget_cols: int = DEFAULT_BUDGET_COLS,
                      integral: bool = True) -> MilnorInvariants:
    m = _check_m(A, m)
    N = sum(m)
    P = base_presentation(A)
    per_prime, polys = {}, []
    for ctx in qualifying_contexts(N, primes):
        d = _sweep(P, m, ctx)
        per_prime[ctx.p] = sum(d)
        polys.append(_charpoly_from_depths(d, N, "char0"))
    q1, unanimous = consensus(polys)
    b1 = q1.degree()
    unanimous = unanimous and len(set(per_prime.values())) == 1
    q2 = charpoly_q2(A, m, q1, b1)
    ih = None
    if integral and P.ngens * N <= budget_cols:
        ih = integral_cover_homology(CyclicCoverSpec(P, N, [x % N for x in m]), budget_cols)
    return MilnorInvariants(N, b1, q1, q2, ih, per_prime, unanimous)


# ---------------------------------------------------------------------------
# general abelian covers


def abelian_cover_betti(P: GroupPresentation, chi, moduli, p: int | None = None) -> int:
    """dim H_1 of the cover classified by chi: G -> prod Z_d, over GF(p)."""
    moduli = list(moduli)
    chi = _check_chi(P, chi, moduli)
    order = 1
    for d in moduli:
        order *= d
    expo = reduce(lambda a, b: a * b // gcd(a, b), moduli, 1)
    if p is not None and order % p == 0:
        raise BadPrime(f"p={p} divides the group order {order}")
    if p is None or (p - 1) % expo == 0:
        ctx = find_cyclotomic_prime(expo) if p is None else RootOfUnityContext(expo, p, find_root(expo, p))
        roots = [ctx.root(d) for d in moduli]
        total = 0
        for ks in _abelian_elements(moduli):
            vals = []
            for c in chi:
                v = 1
                for z, k, ci in zip(roots, ks, c):
                    v = v * pow(z, k * ci, ctx.p) % ctx.p
                vals.append(v)
            total += local_system_h1(P, Character(vals, ctx.p, ctx))
        return total
    return cover_h1_mod_p(P, chi, moduli, p)


def abelian_cover_monodromy(spec: CyclicCoverSpec, alpha: int = 1, p: int | None = None) -> FactoredCharPoly:
    """Characteristic polynomial of the deck transformation alpha on H_1 of a cyclic cover."""
    N = spec.N
    if gcd(alpha, N) != 1:
        raise InputError("alpha must generate Z_N")
    P = spec.base_presentation
    chi = [c % N for c in spec.chi]
    if p is not None and N % p == 0:
        raise BadPrime(f"p={p} divides N={N}")
    if p is None or (p - 1) % N == 0:
        ctx = find_cyclotomic_prime(N) if p is None else RootOfUnityContext(N, p, find_root(N, p))
        depths = [0] * N
        for j in range(N):
            vals = [ctx.power(j * c) for c in chi]
            # eigenvalue of alpha on the rho_j part is zeta^(j*alpha)
            depths[(j * alpha) % N] += local_system_h1(P, Character(vals, ctx.p, ctx))
        return _charpoly_from_depths(depths, N, "char0" if p is None else p)
    if alpha % N != 1:
        raise InputError("non-split fields are handled for the standard generator only")
    dims = isotypic_h1_dims(P, chi, N, p)
    exps, imbalance = {}, False
    for r, dim in dims.items():
        if dim % euler_phi(r):
            imbalance = True
        exps[r] = dim // euler_phi(r)
    return FactoredCharPoly.from_cyclo_exponents(exps, p, imbalance)


@dataclass
class TorsionScan:
    N: int
    char0: int
    per_prime: dict
    excess: dict

    def to_json(self):
        return {"N": self.N, "char0": self.char0,
                "per_prime": {str(p): d for p, d in sorted(self.per_prime.items())},
                "excess": {str(p): e for p, e in sorted(self.excess.items())},
                "torsion_primes": sorted(p for p, e in self.excess.items() if e > 0)}


def torsion_scan(A: Arrangement, m=None, primes=(2, 3, 5, 7)) -> TorsionScan:
    """Compare GF(p) Betti numbers with the char-0 value; excess counts p-torsion summands."""
    m = _check_m(A, m)
    N = sum(m)
    base = milnor_invariants(A, m, integral=False)
    per, exc = {}, {}
    for p in primes:
        if N % p == 0:
            raise BadPrime(f"p={p} divides N={N}")
        d = milnor_h1(A, m, p).dim
        per[p] = d
        exc[p] = d - base.b1
    return TorsionScan(N, base.b1, per, exc)


@dataclass
class PolarizationSummary:
    size: int
    rank: int
    degree_q: int
    doubled: list

    def to_json(self):
        return {"size": self.size, "rank": self.rank, "torsion_degree_q": self.degree_q,
                "hyperplanes_with_m_ge_2": [h + 1 for h in self.doubled]}


def polarization_summary(A: Arrangement, m) -> PolarizationSummary:
    m = [int(x) for x in m]
    if len(m) != A.n or any(x < 1 for x in m):
        raise InputError("one positive multiplicity per hyperplane is required")
    doubled = [h for h, x in enumerate(m) if x >= 2]
    q = 1 + sum(1 for x in m if x >= 3)
    return PolarizationSummary(sum(m), A.rank + len(doubled), q, doubled)
