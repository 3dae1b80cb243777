import random
from fractions import Fraction

import pytest

from arrtopo.braids import GroupPresentation, commutator, presentation_complement, projectivize_presentation
from arrtopo.catalog import catalog_lookup
from arrtopo.errors import FieldMismatch, NotCommutatorRelators, TorsionAbelianization
from arrtopo.jumploci import (Character, alexander_matrix, depth_profile, diagonal_characters, fox_derivative,
                              linearized_depth, linearized_matrix, local_system_h1)
from arrtopo.resonance import build_os2, resonance_depth
from arrtopo.scalar import find_cyclotomic_prime, rank_exact


def test_fox_derivatives_of_commutator():
    w = commutator([1], [2])          # x1 x2 x1^-1 x2^-1
    # d/dx1 = 1 - x1 x2 x1^-1 -> 1 - t2 ; d/dx2 = x1 - x1 x2 x1^-1 x2^-1 -> t1 - 1
    assert fox_derivative(w, 1, 2) == {(0, 0): 1, (0, 1): -1}
    assert fox_derivative(w, 2, 2) == {(1, 0): 1, (0, 0): -1}


def test_fundamental_formula():
    # sum_j (dw/dx_j)(t_j - 1) = t^ab(w) - 1, checked at a rational point
    rng = random.Random(0)
    vals = [2, 3, 5]
    for _ in range(20):
        w = [rng.choice([1, 2, 3, -1, -2, -3]) for _ in range(7)]
        A = alexander_matrix(GroupPresentation(3, [w]), check_torsion=False).evaluate(vals)
        lhs = sum(A[0][j] * (vals[j] - 1) for j in range(3))
        e = [sum((1 if a > 0 else -1) for a in w if abs(a) == j + 1) for j in range(3)]
        rhs = 1
        for v, k in zip(vals, e):
            rhs *= Fraction(v) ** k
        assert lhs == rhs - 1


def test_free_group_and_torus():
    ctx = find_cyclotomic_prime(5)
    F3 = GroupPresentation(3, [])
    assert local_system_h1(F3, Character([ctx.power(1), ctx.power(2), 1], ctx.p)) == 2
    assert local_system_h1(F3, Character([1, 1, 1], ctx.p)) == 3
    Z2 = GroupPresentation(2, [commutator([1], [2])])
    assert local_system_h1(Z2, Character([ctx.power(1), 1], ctx.p)) == 0
    assert local_system_h1(Z2, Character([1, 1], ctx.p)) == 2


def test_character_checks():
    P = projectivize_presentation(presentation_complement(catalog_lookup("braid-A3")[0]))
    with pytest.raises(FieldMismatch):
        local_system_h1(P, Character([2, 1, 1, 1, 1, 1], 101))
    with pytest.raises(FieldMismatch):
        local_system_h1(P, Character([1, 1, 1], 101))
    with pytest.raises(TorsionAbelianization):
        alexander_matrix(GroupPresentation(1, [[1, 1]]))
    with pytest.raises(NotCommutatorRelators):
        linearized_matrix(P)


def test_alexander_matrix_rank_at_trivial_character():
    A, _ = catalog_lookup("braid-A3")
    P = presentation_complement(A)
    M = alexander_matrix(P).evaluate([1] * A.n)
    assert rank_exact(M) == 0


@pytest.mark.parametrize("name", ["braid-A3", "B3", "non-fano", "ceva3"])
def test_linearized_depth_equals_os_depth(name):
    A, _ = catalog_lookup(name)
    P = presentation_complement(A)
    lin = linearized_matrix(P)
    os_ = build_os2(A)
    rng = random.Random(2)
    for _ in range(15):
        a = [rng.randint(-4, 4) for _ in range(A.n - 1)]
        a.append(-sum(a))
        if not any(a):
            continue
        assert linearized_depth(P, a, "Q", lin) == resonance_depth(os_, a)


def test_diagonal_profile_braid():
    A, _ = catalog_lookup("braid-A3")
    P = projectivize_presentation(presentation_complement(A))
    ctx = find_cyclotomic_prime(6)
    prof = depth_profile(P, diagonal_characters(6, 6, ctx))
    # rho_0 trivial gives b1(U) = 5; order-3 characters give depth 1
    assert prof.depths == [5, 0, 1, 0, 1, 0]
    assert prof.summary[3] == [1, 1]
