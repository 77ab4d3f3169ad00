from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import residue_sets
from mers.lattice import (
    EMPTY,
    EXOTIC,
    FULL,
    IDENTITY,
    SHEAR,
    SWAP,
    RadicalMap,
    ResidueSet,
    canonical_1d,
    coset,
    l_set,
    l_set_scaled,
    lattice,
    lattice_index,
    make,
)

W = range(-8, 9)
WINDOW = list(product(W, W))


def points(T: ResidueSet) -> set:
    return {p for p in WINDOW if T.contains(p)}


# -- hand-computed examples ------------------------------------------------

def test_lattice_and_coset_membership():
    T = lattice(2, 4)
    assert (0, 0) in T and (2, -4) in T and (1, 0) not in T and (0, 2) not in T
    C = coset((1, 3), 2, 4)
    assert (1, 3) in C and (-1, -1) in C and (1, 1) not in C


def test_l_set_definition():
    # m a + n b with (m - i)(n - j) even
    for i, j in product((0, 1), repeat=2):
        T = l_set(i, j)
        for m, n in WINDOW:
            assert T.contains((m, n)) == (((m - i) * (n - j)) % 2 == 0)


def test_l_set_scaled_crosses_scales():
    T = l_set_scaled(0, 0, 1, 2)  # a scaled by 2, b by 1
    assert T.modulus == (4, 2)
    assert (2, 1) not in T and (2, 0) in T and (0, 1) in T and (1, 0) not in T


def test_l_set_scaled_two_two_has_three_residues():
    T = l_set_scaled(0, 0, 2, 2)
    assert T.modulus == (4, 4)
    assert sorted(T.residues()) == [(0, 0), (0, 2), (2, 0)]


def test_canonical_form_is_minimal():
    # {0, 2} mod 4 in b is just 2Z
    T = make((4, 4), [(x, y) for x in range(4) for y in (0, 2)])
    assert T.modulus == (1, 2) and T.residues() == [(0, 0)]
    assert make((8, 8), [(x, y) for x in range(8) for y in range(8)]) == FULL
    assert make((2, 2), []) == EMPTY


def test_make_rejects_bad_input():
    with pytest.raises(ValueError):
        make((3, 1), [(0, 0)])
    with pytest.raises(ValueError):
        make((2, 2), [(2, 0)])
    with pytest.raises(ValueError):
        make((16, 1), [(0, 0)])


def test_canonical_1d():
    assert canonical_1d(4, {0, 2}) == (2, frozenset({0}))
    assert canonical_1d(4, {1, 3}) == (2, frozenset({1}))
    assert canonical_1d(4, {0, 1}) == (4, frozenset({0, 1}))
    assert canonical_1d(8, set()) == (1, frozenset())


def test_scale_subtract_example():
    # 2Z x Z minus 2 * (Z x Z) is still 2Z x Z
    A = lattice(2, 1)
    assert A.scale_subtract(2, FULL) == A
    # (1 + 2Z) x Z minus 1 * (2Z x Z) stays in the odd coset
    B = coset((1, 0), 2, 1)
    assert B.scale_subtract(1, A) == B
    assert B.scale_subtract(1, FULL) == FULL


def test_lattice_index_examples():
    assert lattice_index([(1, 0), (0, 1)]) == 1
    assert lattice_index([(2, 0), (0, 3)]) == 6
    assert lattice_index([(2, 0), (0, 2), (1, 1)]) == 2
    assert lattice_index([(1, 2), (2, 4)]) == 0
    assert lattice_index([]) == 0


def test_radical_maps():
    assert SWAP.act((1, 2)) == (2, 1)
    assert SHEAR.act((1, 0)) == (1, 1)
    assert EXOTIC.act((1, 0)) == (1, -2)
    assert (SHEAR @ SHEAR.inverse()) == IDENTITY
    with pytest.raises(ValueError):
        RadicalMap(((2, 0), (0, 1)))


def test_json_round_trip_example():
    T = l_set(1, 0)
    assert ResidueSet.from_json(T.to_json()) == T


# -- brute-force oracles on the window [-8, 8]^2 -----------------------------

@settings(max_examples=150, deadline=None)
@given(residue_sets(), residue_sets())
def test_boolean_ops_match_point_sets(A, B):
    pa, pb = points(A), points(B)
    assert points(A | B) == pa | pb
    assert points(A & B) == pa & pb
    assert points(A - B) == pa - pb
    assert A.issubset(B) == (pa <= pb)


@settings(max_examples=150, deadline=None)
@given(residue_sets(), st.tuples(st.integers(-9, 9), st.integers(-9, 9)))
def test_translate_and_negate_match_points(A, c):
    assert points(A.translate(c)) == {p for p in WINDOW if A.contains((p[0] - c[0], p[1] - c[1]))}
    assert points(-A) == {p for p in WINDOW if A.contains((-p[0], -p[1]))}


@settings(max_examples=100, deadline=None)
@given(residue_sets(), residue_sets(), st.sampled_from([1, 2, 4, -1, -2]))
def test_scale_subtract_matches_points(A, B, k):
    # v ranges over one full period of B, which suffices since all moduli divide 8
    period = [v for v in product(range(8), range(8)) if B.contains(v)]
    want = {p for p in WINDOW if any(A.contains((p[0] + k * v[0], p[1] + k * v[1])) for v in period)}
    assert points(A.scale_subtract(k, B)) == (want if period else set())


MAPS = [IDENTITY, SWAP, SHEAR, EXOTIC, RadicalMap(((1, 1), (0, 1))), RadicalMap(((2, 1), (1, 1)))]


@settings(max_examples=100, deadline=None)
@given(residue_sets(), st.sampled_from(MAPS))
def test_apply_map_matches_points(A, M):
    inv = M.inverse()
    image = A.apply_map(M)
    assert points(image) == {p for p in WINDOW if A.contains(inv.act(p))}


@settings(max_examples=100, deadline=None)
@given(residue_sets(), st.sampled_from(MAPS), st.sampled_from(MAPS))
def test_group_action_law(A, M, N):
    assert A.apply_map(M).apply_map(N) == A.apply_map(N @ M)
    assert A.apply_map(IDENTITY) == A


@settings(max_examples=150, deadline=None)
@given(residue_sets())
def test_canonical_and_serialization(A):
    assert make(A.modulus, A.residues()) == A
    assert ResidueSet.from_json(A.to_json()) == A
    big = A.lift((8, 8))
    assert make((8, 8), big) == A
    num, den = A.density
    assert num * 64 == len(big) * den


@settings(max_examples=150, deadline=None)
@given(residue_sets(), st.tuples(st.integers(0, 7), st.integers(0, 7)))
def test_stabilizer(A, c):
    assert A.stabilizer_contains(c) == (points(A.translate(c)) == points(A))


VECS = st.tuples(st.integers(-6, 6), st.integers(-6, 6))


@settings(max_examples=150, deadline=None)
@given(st.lists(VECS, min_size=1, max_size=5), st.sampled_from(MAPS))
def test_lattice_index_invariants(vs, M):
    idx = lattice_index(vs)
    assert lattice_index([M.act(v) for v in vs]) == idx
    assert lattice_index(vs + [(vs[0][0] + vs[-1][0], vs[0][1] + vs[-1][1])]) == idx
    if idx:
        # the lattice contains idx * Z^2 and has exactly idx cosets inside it
        n = idx
        reach = {(0, 0)}
        frontier = [(0, 0)]
        while frontier:
            x = frontier.pop()
            for v in vs:
                for s in (1, -1):
                    y = ((x[0] + s * v[0]) % n, (x[1] + s * v[1]) % n)
                    if y not in reach:
                        reach.add(y)
                        frontier.append(y)
        assert len(reach) == n * n // idx
