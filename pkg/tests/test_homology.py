import itertools
import math
import random

import pytest

from opforge.errors import DomainError
from opforge.homology import (
    ChainWindow,
    SparseIntMatrix,
    build_window,
    homology,
    homology_table,
    rank,
    serialize_basis,
    smith_normal_form,
)


def minors_gcd_factors(mat):
    """Invariant factors straight from the definition: d_k = gcd of all k x k
    minors, f_k = d_k / d_(k-1).  Independent of any elimination strategy."""
    import math as _math
    from itertools import combinations

    n_rows = len(mat)
    n_cols = len(mat[0]) if mat else 0

    def det(rows, cols):
        idx = list(cols)
        size = len(rows)
        if size == 1:
            return mat[rows[0]][idx[0]]
        total = 0
        sign = 1
        for pos, r in enumerate(rows):
            v = mat[r][idx[0]]
            if v:
                rest = rows[:pos] + rows[pos + 1 :]
                total += sign * v * det(rest, idx[1:])
            sign = -sign
        return total

    factors = []
    previous = 1
    for k in range(1, min(n_rows, n_cols) + 1):
        g = 0
        for rows in combinations(range(n_rows), k):
            for cols in combinations(range(n_cols), k):
                g = _math.gcd(g, det(list(rows), list(cols)))
            if g == 1:
                break
        if g == 0:
            break
        factors.append(g // previous)
        previous = g
    return factors


def to_sparse(mat):
    rows = len(mat)
    cols = len(mat[0]) if mat else 0
    out = SparseIntMatrix(rows, cols)
    for i, row in enumerate(mat):
        for j, v in enumerate(row):
            out.add(i, j, v)
    return out


def test_snf_trivial_cases():
    assert smith_normal_form(SparseIntMatrix(3, 5)) == ([], 0)
    ident = to_sparse([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert smith_normal_form(ident) == ([1, 1, 1], 3)
    diag = to_sparse([[2, 0], [0, 3]])
    assert smith_normal_form(diag) == ([1, 6], 2)


def normalize_chain(diagonal):
    import math as _math

    diag = sorted(abs(d) for d in diagonal if d)
    done = False
    while not done:
        done = True
        for i in range(len(diag)):
            for j in range(i + 1, len(diag)):
                if diag[j] % diag[i]:
                    g = _math.gcd(diag[i], diag[j])
                    diag[i], diag[j] = g, diag[i] * diag[j] // g
                    done = False
        diag.sort()
    return diag


def test_snf_on_shuffled_known_diagonals():
    # unimodular row/column operations preserve invariant factors, so
    # shuffling a known diagonal gives 12x12 instances with known answers
    rng = random.Random(77)
    for _ in range(60):
        n_rows = rng.randint(2, 12)
        n_cols = rng.randint(2, 12)
        diag = [rng.choice([0, 1, 1, 2, 3, 4, 6]) for _ in range(min(n_rows, n_cols))]
        mat = [[0] * n_cols for _ in range(n_rows)]
        for i, d in enumerate(diag):
            mat[i][i] = d
        for _ in range(25):
            kind = rng.randrange(4)
            if kind == 0:
                i, j = rng.sample(range(n_rows), 2)
                c = rng.randint(-2, 2)
                for col in range(n_cols):
                    mat[i][col] += c * mat[j][col]
            elif kind == 1:
                i, j = rng.sample(range(n_cols), 2)
                c = rng.randint(-2, 2)
                for row in mat:
                    row[i] += c * row[j]
            elif kind == 2:
                i, j = rng.sample(range(n_rows), 2)
                mat[i], mat[j] = mat[j], mat[i]
            else:
                i = rng.randrange(n_rows)
                for col in range(n_cols):
                    mat[i][col] = -mat[i][col]
        expected = normalize_chain(diag)
        got, got_rank = smith_normal_form(to_sparse(mat))
        assert got == expected, (diag, expected, got)
        assert got_rank == len(expected)


def test_snf_against_minor_gcds():
    rng = random.Random(79)
    for _ in range(40):
        n_rows = rng.randint(1, 5)
        n_cols = rng.randint(1, 5)
        mat = [[rng.randint(-5, 5) for _ in range(n_cols)] for _ in range(n_rows)]
        assert smith_normal_form(to_sparse(mat))[0] == minors_gcd_factors(mat)


def test_snf_factors_form_divisibility_chain():
    rng = random.Random(78)
    for _ in range(40):
        mat = [[rng.randint(-9, 9) for _ in range(6)] for _ in range(6)]
        factors, _ = smith_normal_form(to_sparse(mat))
        for a, b in zip(factors, factors[1:]):
            assert b % a == 0


def test_matrix_product_shapes():
    a = to_sparse([[1, 2]])
    b = to_sparse([[1], [1]])
    assert a.multiply(b).entries == {(0, 0): 3}
    with pytest.raises(DomainError):
        b.multiply(to_sparse([[1, 1], [1, 1]])).multiply(a)


# --- windows -------------------------------------------------------------------


def test_nbrac22_window():
    w = build_window("nbrac", 2, 2, -1, 0)
    assert w.basis_size(0) == 2
    assert w.basis_size(-1) == 2
    assert homology_table(w) == {-1: (1, []), 0: (1, [])}


def test_degree_zero_basis_is_permutations():
    for n in (1, 2, 3):
        for c in (1, 2, 3):
            w = build_window("brac", c, n, 0, 0)
            assert w.basis_size(0) == math.factorial(n)


def test_empty_degree_is_zero_module():
    w = build_window("brac", 2, 2, 1, 1)
    assert w.basis_size(1) == 0
    assert homology(w, 1) == (0, [])


def test_window_edge_rejected():
    w = build_window("nbrac", 2, 2, -1, 0)
    with pytest.raises(DomainError, match="edge"):
        homology(w, -2)


def test_little_disks_ranks():
    w2 = build_window("nbrac", 2, 2, -1, 0)
    assert homology_table(w2) == {-1: (1, []), 0: (1, [])}
    w3 = build_window("nbrac", 2, 3, -2, 0)
    assert homology_table(w3) == {-2: (2, []), -1: (3, []), 0: (1, [])}
    total = sum(b for b, _ in homology_table(w3).values())
    assert total == math.factorial(3)


def test_alternating_column_ranks():
    # two alternating staircases per degree; homology sits at the ends
    for c in (1, 2, 3, 4):
        w = build_window("nbrac", c, 2, -4, 0)
        expected = {0: 2} if c == 1 else {0: 1, -(c - 1): 1}
        got = {d: b for d, (b, t) in homology_table(w).items() if b}
        assert got == expected
        assert all(not t for _, t in homology_table(w).values())


def test_betti_agree_between_brac_and_nbrac():
    for n in (1, 2):
        for c in (0, 1, 2, 3):
            wb = build_window("brac", c, n, -3, 0)
            wn = build_window("nbrac", c, n, -3, 0)
            for d in wb.degrees:
                assert homology(wb, d)[0] == homology(wn, d)[0], (n, c, d)


def test_total_window_builds_and_squares():
    # the truncated total complex is a quotient complex; build_window
    # asserts d^2 = 0 internally
    w = build_window("total", 2, 2, -2, 2, l_bound=3)
    assert w.degrees == [-2, -1, 0, 1, 2]
    table = homology_table(w)
    assert all(isinstance(b, int) for b, _ in table.values())


def test_column_window():
    w = build_window("column", 2, 2, -2, 0, l_bound=1)
    for d in w.degrees:
        betti, torsion = homology(w, d)
        assert betti >= 0 and not torsion


def test_homology_invariant_under_basis_permutation():
    rng = random.Random(99)
    w = build_window("nbrac", 2, 2, -2, 0)

    def permuted(matrix):
        rows = list(range(matrix.rows))
        cols = list(range(matrix.cols))
        rng.shuffle(rows)
        rng.shuffle(cols)
        out = SparseIntMatrix(matrix.rows, matrix.cols)
        for (r, c), v in matrix.entries.items():
            out.add(rows[r], cols[c], v)
        return out

    for d, m in w.matrices.items():
        assert smith_normal_form(m) == smith_normal_form(permuted(m))


def test_serialize_basis_deterministic():
    w1 = build_window("nbrac", 2, 2, -1, 0)
    w2 = build_window("nbrac", 2, 2, -1, 0)
    for d in (-1, 0):
        assert serialize_basis(w1, d) == serialize_basis(w2, d)
        assert all(line.startswith("lat ") for line in serialize_basis(w1, d))
