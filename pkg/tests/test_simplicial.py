import itertools

import pytest
from hypothesis import given, settings, strategies as st

from opforge.errors import DomainError
from opforge.formal import FormalSum
from opforge.paths import (
    complexity,
    enumerate_paths,
    parse_path,
    point_path,
    signature,
    validate_path,
)
from opforge.simplicial import (
    boundary_terms,
    codegeneracy,
    coface,
    cosimplicial_differential,
    degeneracy,
    face,
    simplicial_differential,
    total_differential,
)

EXAMPLE = parse_path("lat 3,2;8 | 0 1:3 1:1 2:0 1:2 2:0 2:0 1:2")


def all_signatures(max_n, max_total_k, max_l):
    for n in range(max_n + 1):
        for ks in itertools.product(range(max_total_k + 1), repeat=n):
            if sum(ks) <= max_total_k:
                for l in range(max_l + 1):
                    yield signature(ks, l)


def paths_in_range(max_n, max_total_k, max_l):
    for sig in all_signatures(max_n, max_total_k, max_l):
        yield from enumerate_paths(sig)


# A compact deterministic pool for the randomized-style suites.
PATH_POOL = list(paths_in_range(2, 3, 2))


def test_face_merges_markings():
    # Figure 1: identifying the point marked 3 with the point marked 1
    # gives a point marked 3+1=4.
    f = face(EXAMPLE, 1, 1)
    assert f.markings == (0, 4, 0, 2, 0, 0, 2)
    assert f.moves == (1, 2, 1, 2, 2, 1)


def test_face_direction_two():
    f = face(EXAMPLE, 2, 0)
    assert f.moves == (1, 1, 1, 2, 2, 1)
    assert f.markings == (0, 3, 1, 2, 0, 0, 2)


def test_face_zero_markings_stay_zero():
    p = validate_path(signature((1,), 0), (1, 1), (0, 0, 0))
    f = face(p, 1, 0)
    assert f.markings == (0, 0)
    assert f.signature.inputs == (0,)


def test_face_rejects_zero_colour():
    with pytest.raises(DomainError):
        face(point_path(0), 1, 0)
    p = validate_path(signature((0,), 0), (1,), (0, 0))
    with pytest.raises(DomainError, match="k_1 >= 1"):
        face(p, 1, 0)


def test_degeneracy_adds_unmarked_internal_point():
    # Figure 2: one new unmarked point, always internal.
    s = degeneracy(EXAMPLE, 2, 1)
    assert s.moves == (1, 1, 2, 1, 2, 2, 2, 1)
    assert s.markings == (0, 3, 1, 0, 2, 0, 0, 0, 2)
    new_index = 6
    assert s.moves[new_index - 1] == s.moves[new_index]


def test_degeneracy_new_point_always_internal():
    from opforge.paths import classify_points

    for p in PATH_POOL:
        marked_before = classify_points(p).marked_indices
        for r, k in enumerate(p.signature.inputs, start=1):
            for i in range(k + 1):
                s = degeneracy(p, r, i)
                new_points = [a for a, m in enumerate(s.markings) if m == 0]
                internal = classify_points(s).internal_indices
                # the single added point is unmarked and internal
                assert len(s.markings) == len(p.markings) + 1
                assert len(classify_points(s).marked_indices) == len(marked_before)
                assert face(s, r, i) == p
                assert any(a in internal for a in new_points)


def test_degeneracy_then_face_is_identity():
    p = validate_path(signature((0, 0), 0), (1, 2), (0, 0, 0))
    s = degeneracy(p, 1, 0)
    assert s.moves == (1, 1, 2)
    assert s.markings == (0, 0, 0, 0)
    assert face(s, 1, 0) == p


def test_simplicial_identities_within_direction():
    # face/face, degeneracy/degeneracy and the mixed relations, checked on
    # every path in the pool.
    for p in PATH_POOL:
        for r, k in enumerate(p.signature.inputs, start=1):
            if k >= 2:
                for j in range(k + 1):
                    for i in range(j):
                        assert face(face(p, r, j), r, i) == face(face(p, r, i), r, j - 1)
            for i in range(k + 1):
                for j in range(i, k + 1):
                    assert degeneracy(degeneracy(p, r, j), r, i) == degeneracy(
                        degeneracy(p, r, i), r, j + 1
                    )
            for i in range(k + 1):
                for j in range(k + 1):
                    s = degeneracy(p, r, j)
                    if i == j or i == j + 1:
                        assert face(s, r, i) == p
                    elif i < j:
                        assert face(s, r, i) == degeneracy(face(p, r, i), r, j - 1)
                    else:
                        assert face(s, r, i) == degeneracy(face(p, r, i - 1), r, j)


def test_faces_commute_across_directions():
    for p in PATH_POOL:
        ks = p.signature.inputs
        if len(ks) < 2:
            continue
        for r1, r2 in itertools.combinations(range(1, len(ks) + 1), 2):
            if ks[r1 - 1] < 1 or ks[r2 - 1] < 1:
                continue
            for i in range(ks[r1 - 1] + 1):
                for j in range(ks[r2 - 1] + 1):
                    assert face(face(p, r1, i), r2 - 0, j) == face(face(p, r2, j), r1, i)
                    assert degeneracy(face(p, r1, i), r2, j) == face(
                        degeneracy(p, r2, j), r1, i
                    )


def test_coface_on_point():
    assert coface(point_path(0), 0) == point_path(1)


def test_coface_preserves_moves():
    for p in PATH_POOL:
        for i in range(p.signature.output + 2):
            assert coface(p, i).moves == p.moves


def test_codegeneracy_of_point():
    assert codegeneracy(point_path(3), 0) == point_path(2)
    assert codegeneracy(point_path(3), 2) == point_path(2)


def test_codegeneracy_range_errors():
    with pytest.raises(DomainError):
        codegeneracy(point_path(0), 0)
    with pytest.raises(DomainError):
        codegeneracy(point_path(2), 2)


def test_cosimplicial_identities_exhaustive():
    # delta^j delta^i = delta^i delta^(j-1) for i < j, s^j s^i = s^i s^(j+1)
    # for i <= j, and the mixed relations, on every pooled path.
    for p in PATH_POOL:
        l = p.signature.output
        for j in range(l + 3):
            for i in range(j):
                assert coface(coface(p, i), j) == coface(coface(p, j - 1), i)
        # mixed: s^j d^i
        for j in range(l):
            for i in range(l + 2):
                left = codegeneracy(coface(p, i), j)
                if i == j or i == j + 1:
                    assert left == p
                elif i < j:
                    assert left == coface(codegeneracy(p, j - 1), i)
                else:
                    assert left == coface(codegeneracy(p, j), i - 1)


def test_codegeneracy_codegeneracy_identity():
    for p in paths_in_range(2, 2, 3):
        l = p.signature.output
        for i in range(max(l - 1, 0)):
            for j in range(i, l - 1):
                assert codegeneracy(codegeneracy(p, j + 1), i) == codegeneracy(
                    codegeneracy(p, i), j
                )


@settings(max_examples=60, derandomize=True)
@given(st.integers(0, len(PATH_POOL) - 1))
def test_codegeneracy_inverts_coface(idx):
    p = PATH_POOL[idx]
    for i in range(p.signature.output + 1):
        assert codegeneracy(coface(p, i), i) == p


def test_simplicial_differential_squares_to_zero():
    for p in paths_in_range(2, 4, 2):
        dd = simplicial_differential(simplicial_differential(p))
        assert not dd, f"d^2 != 0 on {p}"


def test_differential_on_all_zero_colours():
    p = validate_path(signature((0, 0, 0), 1), (1, 2, 3), (0, 1, 0, 0))
    assert not simplicial_differential(p)


def test_cosimplicial_differential_squares_to_zero():
    for p in PATH_POOL:
        assert not cosimplicial_differential(cosimplicial_differential(p))


def test_mixed_anticommutation():
    # The column sign (-1)^l makes the two differentials anticommute, which
    # is exactly d^2 = 0 for the total differential.
    for p in paths_in_range(2, 3, 2):
        d2 = total_differential(total_differential(FormalSum.basis(p)))
        assert not d2, f"total d^2 != 0 on {p}"


def test_total_differential_on_colour_zero_is_simplicial():
    for p in paths_in_range(2, 3, 0):
        dp = total_differential(p)
        sp = simplicial_differential(p)
        for q, c in sp:
            assert dp.coeff(q) == c


def test_face_never_increases_complexity():
    for p in paths_in_range(2, 4, 1):
        cp = complexity(p)
        for q, _ in boundary_terms(p):
            assert complexity(q) <= cp
