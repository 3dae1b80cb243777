import random

import pytest

from arrtopo.arrangement import Arrangement
from arrtopo.boundary import (alexander_boundary, b1_three_ways, bdF_invariants, boundary_h1_dim,
                              boundary_resonance_membership, build_graph, doubled_ring, formality_report,
                              generic_torsion_expectation, poincare_boundary, v1_depth_at, westlund_presentation)
from arrtopo.catalog import catalog_lookup, default_catalog
from arrtopo.errors import DimensionMismatch, InputError, NonEssential
from arrtopo.jumploci import Character, local_system_h1
from arrtopo.scalar import find_cyclotomic_prime


def test_generic_graph_is_complete():
    g = build_graph(catalog_lookup("generic:4")[0])
    assert (g.nv, len(g.edges), g.s, g.r) == (4, 6, 3, 0)
    assert g.weights == [1, 1, 1, 1]


def test_near_pencil_graph():
    g = build_graph(catalog_lookup("near-pencil:4")[0])
    assert (g.nv, len(g.edges), g.s) == (5, 6, 2)
    assert g.weights == [1, 0, 0, 0, -1]
    assert g.label(4) == "v234"


def test_pencil_graph_is_a_star():
    A, _ = catalog_lookup("pencil:4")
    g = build_graph(A)
    assert g.s == 0 and g.nv == 5 and all(g.degree(v) == 1 for v in range(4))
    with pytest.raises(NonEssential):
        build_graph(A, allow_pencil=False)
    with pytest.raises(InputError):
        build_graph(catalog_lookup("generic:4")[0], cycle_order="random")


def test_generic4_presentation_form():
    g = build_graph(catalog_lookup("generic:4")[0], root=3, cycle_order="revlex")
    raw, simp = westlund_presentation(g)
    words = [simp.word_str(r) for r in simp.relators]
    assert simp.ngens == 6 and len(words) == 6
    # [x1, x2^y3], [x1, x3^y2], [x2, x3^y1] with a^b = b^-1 a b
    assert words[:3] == ["x1y3^-1x2y3x1^-1y3^-1x2^-1y3",
                         "x1y2^-1x3y2x1^-1y2^-1x3^-1y2",
                         "x2y1^-1x3y1x2^-1y1^-1x3^-1y1"]
    assert raw.ngens == 7 and len(raw.relators) == 6 + 4


def test_presentation_degenerate_cases():
    A = Arrangement([[1, 0, 0]])
    _, simp = westlund_presentation(build_graph(A))
    assert simp.ngens == 0 and simp.relators == []
    _, simp = westlund_presentation(build_graph(catalog_lookup("pencil:4")[0]))
    assert simp.ngens == 3 and simp.relators == []


def _raw_character(g, tvals, yvals, p):
    # x_n closes the product of meridians, x_J is the product over the point's lines
    prod = 1
    for t in tvals:
        prod = prod * t % p
    x = list(tvals) + [pow(prod, p - 2, p)]
    for P in g.points:
        v = 1
        for i in P:
            v = v * x[i] % p
        x.append(v)
    return x + list(yvals)


@pytest.mark.parametrize("name", ["generic:4", "near-pencil:5", "braid-A3", "B3"])
def test_raw_and_simplified_twisted_h1_agree(name):
    A, _ = catalog_lookup(name)
    g = build_graph(A)
    raw, simp = westlund_presentation(g)
    ctx = find_cyclotomic_prime(12)
    rng = random.Random(3)
    for _ in range(8):
        t = [ctx.power(rng.randrange(12)) for _ in range(A.n - 1)]
        y = [ctx.power(rng.randrange(12)) for _ in range(g.s)]
        d_simp = v1_depth_at(simp, A.n, t, y, ctx)
        d_raw = local_system_h1(raw, Character(_raw_character(g, t, y, ctx.p), ctx.p, ctx))
        assert d_raw == d_simp


@pytest.mark.parametrize("name", default_catalog())
def test_b1_three_ways(name):
    A, _ = catalog_lookup(name)
    b = b1_three_ways(A)
    assert b["graph"] == b["splitting"] == b["presentation"]
    assert b["presentation_torsion"] == []


def test_poincare_boundary():
    assert poincare_boundary(catalog_lookup("generic:4")[0]) == [1, 6, 6, 1]
    assert poincare_boundary(catalog_lookup("braid-A3")[0]) == [1, 11, 11, 1]


def test_doubled_ring():
    R = doubled_ring(catalog_lookup("generic:5")[0])
    assert R.dims == (1, 10, 10, 1)
    assert R.check()
    pm = R.pairing_matrix()
    assert all(pm[i][j] == (i == j) for i in range(10) for j in range(10))
    assert doubled_ring(catalog_lookup("braid-A3")[0], 7).check()


def test_boundary_resonance_membership():
    A, _ = catalog_lookup("generic:5")
    R = doubled_ring(A)
    z = [0] * R.b2
    z[R.beta_pairs.index((0, 1))] = 1
    a = [0] * 4 + z
    assert boundary_h1_dim(R, a) == 7
    assert boundary_resonance_membership(R, a, 7) and not boundary_resonance_membership(R, a, 8)
    rng = random.Random(0)
    assert boundary_h1_dim(R, [0] * 4 + [rng.randint(1, 9) for _ in range(R.b2)]) == 5
    # the zero class: H^1 is all of the degree-1 part
    assert boundary_resonance_membership(R, [0] * 10, 10)
    assert not boundary_resonance_membership(R, [0] * 10, 11)
    with pytest.raises(DimensionMismatch):
        boundary_h1_dim(R, [1, 2])


def test_near_pencil_resonance_hyperplane():
    R = doubled_ring(catalog_lookup("near-pencil:4")[0])
    rng = random.Random(1)
    assert R.basis_names(1) == ["a1", "a2", "a3", "b'1", "b'2"]
    for _ in range(5):
        a = [rng.randint(1, 9) for _ in range(R.dims[1])]
        assert boundary_h1_dim(R, a) == 0
        a[0] = 0
        assert boundary_h1_dim(R, a) == 2


def test_alexander_polynomials():
    assert str(alexander_boundary(catalog_lookup("generic:4")[0])) == "(t1-1)*(t2-1)*(t3-1)*(t4-1)"
    al = alexander_boundary(catalog_lookup("near-pencil:4")[0])
    assert str(al) == "(t1-1)*(t2*t3*t4-1)"
    assert al.components == [(0,), (1, 2, 3)]


@pytest.mark.parametrize("name", ["braid-A3", "generic:5", "near-pencil:5", "pappus-1"])
def test_v1_sampling(name):
    A, _ = catalog_lookup(name)
    g = build_graph(A)
    _, simp = westlund_presentation(g)
    al = alexander_boundary(A, g)
    ctx = find_cyclotomic_prime(35)
    p, n = ctx.p, A.n
    rng = random.Random(5)
    for L in al.components:
        # a point with t_v = 1 for the vertex lines L (coordinates t_1..t_{n-1})
        for _ in range(2):
            t = [ctx.power(rng.randrange(1, 35)) for _ in range(n - 1)]
            S = [i for i in L if i < n - 1] if n - 1 not in L else [i for i in range(n - 1) if i not in L]
            prod = 1
            for i in S[1:]:
                prod = prod * t[i] % p
            t[S[0]] = pow(prod, p - 2, p)
            y = [ctx.power(rng.randrange(35)) for _ in range(g.s)]
            assert v1_depth_at(simp, n, t, y, ctx) >= 1
    # off every component the depth is 0
    checked = 0
    while checked < 4:
        t = [ctx.power(rng.randrange(1, 35)) for _ in range(n - 1)]
        full = t + [pow(_prod(t, p), p - 2, p)]
        if any(_prod([full[i] for i in L], p) == 1 for L in al.components):
            continue
        y = [ctx.power(rng.randrange(35)) for _ in range(g.s)]
        assert v1_depth_at(simp, n, t, y, ctx) == 0
        checked += 1


def _prod(vals, p):
    out = 1
    for v in vals:
        out = out * v % p
    return out


@pytest.mark.parametrize("name,cp,h1", [
    ("generic:4", "(t-1)^6", (6, [4])),
    ("near-pencil:4", "(t-1)^5", None),
    ("pappus-1", "(t-1)^27*Phi3^9", (45, [3] * 7 + [9] * 5)),
    ("pappus-2", "(t-1)^27*Phi3^9", (45, [3] * 9 + [9] * 3)),
    ("hessian", "(t-1)^39*(t+1)^18*Phi4^18", None),
])
def test_bdF_golden(name, cp, h1):
    inv = bdF_invariants(catalog_lookup(name)[0])
    assert str(inv.charpoly) == cp
    assert inv.consistent
    if h1:
        assert inv.integral_h1 == h1


def test_generic_bdF_torsion_expectation():
    # reported, not a theorem; both computed cases match it
    for n in (4, 5):
        inv = bdF_invariants(catalog_lookup(f"generic:{n}")[0])
        assert inv.integral_h1 == generic_torsion_expectation(n)


def test_bdF_independent_of_choices():
    A, _ = catalog_lookup("braid-A3")
    ref = bdF_invariants(A).integral_h1
    for root, order in [(2, "lex"), (4, "revlex"), (7, "lex")]:
        assert bdF_invariants(A, g=build_graph(A, root=root, cycle_order=order)).integral_h1 == ref


def test_position_independence():
    A, _ = catalog_lookup("pappus-1")
    perm = [4, 0, 8, 2, 6, 1, 3, 7, 5]
    B = Arrangement([A.forms[i] for i in perm])
    assert bdF_invariants(B).integral_h1 == bdF_invariants(A).integral_h1
    assert b1_three_ways(B) == b1_three_ways(A)


def test_formality():
    r = formality_report(catalog_lookup("pencil:3")[0])
    assert r.formal and r.boundary_type == "#^2 S^1xS^2" and r.bdF_type == "#^4 S^1xS^2"
    assert formality_report(catalog_lookup("pencil:2")[0]).boundary_type == "S^1xS^2"
    assert formality_report(Arrangement([[1, 0, 0]])).boundary_type == "S^3"
    r = formality_report(catalog_lookup("near-pencil:5")[0])
    assert r.formal and r.boundary_type == "S^1xSigma_3"
    r = formality_report(catalog_lookup("braid-A3")[0])
    assert not r.formal and r.witness["resonant"] and r.witness["v1_subtori"]
