import itertools
import math
import random

import pytest

from opforge.errors import DomainError
from opforge.formal import FormalSum
from opforge.operad import (
    ClosureVerdict,
    Surjection,
    brac_compose,
    compose,
    fibre_sizes,
    hbrac_closure_check,
    is_nondegenerate,
    monotone_map,
    nondegenerate_surjections,
    normalize,
    parse_surjection,
    path_to_surjection,
    relabel,
    surjection_complexity,
    surjection_to_path,
    whisker_terms,
)
from opforge.paths import (
    MarkedLatticePath,
    complexity,
    enumerate_paths,
    has_internal_point,
    identity_path,
    parse_path,
    point_path,
    signature,
    unmarked_paths,
    validate_path,
    weak_compositions,
)
from opforge.simplicial import simplicial_differential

RNG_SEED = 20240811


def random_path(rng, ks, l):
    moves = []
    for d, k in enumerate(ks, start=1):
        moves += [d] * (k + 1)
    rng.shuffle(moves)
    n_points = len(moves) + 1
    marks = [0] * n_points
    for _ in range(l):
        marks[rng.randrange(n_points)] += 1
    return validate_path(signature(ks, l), moves, marks)


def random_signature(rng, max_colour=2, max_n=3, min_n=1):
    n = rng.randint(min_n, max_n)
    return tuple(rng.randint(0, max_colour) for _ in range(n))


# --- operadic composition -------------------------------------------------


def test_unit_laws():
    rng = random.Random(RNG_SEED)
    for _ in range(100):
        ks = random_signature(rng)
        p = random_path(rng, ks, rng.randint(0, 3))
        for i, k in enumerate(ks, start=1):
            assert compose(p, i, identity_path(k)) == p
        unit = identity_path(p.signature.output)
        assert compose(unit, 1, p) == p


def test_compose_colour_mismatch():
    p = identity_path(2)
    with pytest.raises(DomainError, match="colour mismatch"):
        compose(p, 1, identity_path(1))
    with pytest.raises(DomainError, match="slot"):
        compose(p, 2, identity_path(2))


def test_compose_against_ordinal_maps():
    # For one input colour, paths are order- and endpoint-preserving maps
    # and composition must be map composition (tabulated exhaustively).
    for k_out, l in itertools.product(range(3), range(3)):
        for outer in enumerate_paths(signature((k_out,), l)):
            for m in range(3):
                for inner in enumerate_paths(signature((m,), k_out)):
                    got = monotone_map(compose(outer, 1, inner))
                    inner_map = monotone_map(inner)
                    expected = tuple(inner_map[v] for v in monotone_map(outer))
                    assert got == expected


def test_vertical_associativity_random():
    rng = random.Random(RNG_SEED + 1)
    for _ in range(300):
        ks_q = random_signature(rng)
        j = rng.randint(1, len(ks_q))
        r = random_path(rng, random_signature(rng), ks_q[j - 1])
        ks_p = random_signature(rng)
        i = rng.randint(1, len(ks_p))
        q = random_path(rng, ks_q, ks_p[i - 1])
        p = random_path(rng, ks_p, rng.randint(0, 2))
        left = compose(compose(p, i, q), i + j - 1, r)
        right = compose(p, i, compose(q, j, r))
        assert left == right


def test_horizontal_associativity_random():
    rng = random.Random(RNG_SEED + 2)
    for _ in range(200):
        ks_p = random_signature(rng, min_n=2)
        i, j = sorted(rng.sample(range(1, len(ks_p) + 1), 2))
        q = random_path(rng, random_signature(rng), ks_p[i - 1])
        r = random_path(rng, random_signature(rng), ks_p[j - 1])
        p = random_path(rng, ks_p, rng.randint(0, 2))
        m = q.signature.n
        left = compose(compose(p, i, q), j + m - 1, r)
        right = compose(compose(p, j, r), i, q)
        assert left == right


def _block_permutation(sigma, i, m):
    # sigma o_i id_m: the relabelling matching (sigma.p) o_sigma(i) q with
    # sigma(p o_i q).
    n = len(sigma)
    tau = []
    for d in range(1, n + m):
        if d < i:
            s = sigma[d - 1]
            tau.append(s + (m - 1 if s > sigma[i - 1] else 0))
        elif d <= i + m - 1:
            tau.append(sigma[i - 1] + (d - i))
        else:
            s = sigma[d - m]
            tau.append(s + (m - 1 if s > sigma[i - 1] else 0))
    return tuple(tau)


def test_equivariance_random():
    rng = random.Random(RNG_SEED + 3)
    for _ in range(200):
        ks_p = random_signature(rng, min_n=1)
        n = len(ks_p)
        i = rng.randint(1, n)
        q = random_path(rng, random_signature(rng), ks_p[i - 1])
        p = random_path(rng, ks_p, rng.randint(0, 2))
        sigma = list(range(1, n + 1))
        rng.shuffle(sigma)
        sigma = tuple(sigma)
        m = q.signature.n
        left = compose(relabel(p, sigma), sigma[i - 1], q)
        right = relabel(compose(p, i, q), _block_permutation(sigma, i, m))
        assert left == right


def test_compose_preserves_complexity_filtration():
    rng = random.Random(RNG_SEED + 4)
    for _ in range(300):
        ks_p = random_signature(rng)
        i = rng.randint(1, len(ks_p))
        q = random_path(rng, random_signature(rng), ks_p[i - 1])
        p = random_path(rng, ks_p, rng.randint(0, 2))
        assert complexity(compose(p, i, q)) <= max(complexity(p), complexity(q))


# --- whiskering -----------------------------------------------------------

FIG3_SOURCE = validate_path(signature((2, 2), 0), (1, 2, 2, 1, 2, 1), (0,) * 7)
FIG3_TERM = validate_path(
    signature((6, 6), 8),
    (1, 1, 1, 2, 2, 2, 2, 2, 1, 1, 2, 2, 1, 1),
    (0, 1, 1, 0, 1, 0, 1, 1, 0, 1, 0, 1, 0, 1, 0),
)


def test_whisker_zero_is_identity():
    for p in unmarked_paths((1, 1)):
        assert whisker_terms(p, 0) == [p]


def test_whisker_counts():
    # stars and bars over the moves of the path
    for p in unmarked_paths((1, 0)):
        for s in range(4):
            assert len(whisker_terms(p, s)) == math.comb(len(p.moves) + s - 1, s)


def test_whisker_figure_term():
    terms = whisker_terms(FIG3_SOURCE, 8)
    assert FIG3_TERM in terms


def test_whisker_on_square_path():
    # Each insertion subdivides one of the two moves; the new point must be
    # internal, so exactly two degree-1 terms exist.
    p = validate_path(signature((0, 0), 0), (1, 2), (0, 0, 0))
    terms = whisker_terms(p, 1)
    assert len(terms) == 2
    assert {t.moves for t in terms} == {(1, 1, 2), (1, 2, 2)}
    for t in terms:
        (a,) = [a for a, m in enumerate(t.markings) if m]
        assert t.moves[a - 1] == t.moves[a]  # internal


def test_whisker_rejects_marked_paths():
    with pytest.raises(DomainError):
        whisker_terms(identity_path(1), 1)


def test_whisker_terms_are_valid_and_contract_back():
    from opforge.paths import validate_path as vp

    for p in unmarked_paths((1, 1)):
        for s in range(3):
            for t in whisker_terms(p, s):
                vp(t.signature, t.moves, t.markings)
                # contract marked (internal) points back
                moves = list(t.moves)
                marks = list(t.markings)
                for a in sorted(
                    (a for a, m in enumerate(marks) if m), reverse=True
                ):
                    assert moves[a - 1] == moves[a]
                    del moves[a]
                    del marks[a]
                assert tuple(moves) == p.moves


# --- brace-type composition ------------------------------------------------


def brac_unit():
    return validate_path(signature((0,), 0), (1,), (0, 0))


def test_brac_unit_laws():
    rng = random.Random(RNG_SEED + 5)
    unit = brac_unit()
    for _ in range(60):
        ks = random_signature(rng, max_colour=1, max_n=2)
        p = random_path(rng, ks, 0)
        if complexity(p) > 2:
            continue
        assert brac_compose(unit, 1, p) == FormalSum.basis(p)
        for i in range(1, len(ks) + 1):
            assert brac_compose(p, i, unit) == FormalSum.basis(p)


def test_brac_compose_markings_zero_and_term_count():
    cups = [p for p in unmarked_paths((0, 0))]
    for p, q in itertools.product(cups, cups):
        out = brac_compose(p, 1, q)
        assert len(out) == len(whisker_terms(q, 0))
        for term, coeff in out:
            assert coeff == 1
            assert term.signature == signature((0, 0, 0), 0)


def test_brac_compose_complexity_guard():
    zig = validate_path(signature((1, 1), 0), (1, 2, 1, 2), (0,) * 5)
    assert complexity(zig) == 3
    with pytest.raises(DomainError, match="unsigned"):
        brac_compose(zig, 1, brac_unit())
    out = brac_compose(zig, 1, brac_unit(), unsigned=True)
    assert len(out) == 1


# --- normalization ---------------------------------------------------------


def test_normalize_drops_internal_points_only():
    for p in unmarked_paths((1, 1)):
        image = normalize(p)
        if has_internal_point(p):
            assert not image
        else:
            assert image == FormalSum.basis(p)


def test_normalize_is_chain_map():
    for n in (1, 2):
        for ks in itertools.product(range(5), repeat=n):
            if sum(ks) > 4:
                continue
            for p in unmarked_paths(ks):
                lhs = normalize(simplicial_differential(p))
                rhs = normalize(simplicial_differential(normalize(p)))
                # on the quotient both compute the induced differential
                drop = lambda s: normalize(s)
                assert drop(lhs) == drop(rhs)


def test_normalize_is_multiplicative():
    rng = random.Random(RNG_SEED + 6)
    done = 0
    while done < 100:
        ks = random_signature(rng, max_colour=1, max_n=2)
        i = rng.randint(1, len(ks))
        p = random_path(rng, ks, 0)
        q = random_path(rng, random_signature(rng, max_colour=1, max_n=2), 0)
        if max(complexity(p), complexity(q)) > 2:
            continue
        lhs = normalize(brac_compose(p, i, q))
        if has_internal_point(p) or has_internal_point(q):
            assert not lhs
        else:
            rhs = brac_compose(p, i, q).bind(
                lambda t: normalize(FormalSum.basis(t))
            )
            assert lhs == rhs
        done += 1


# --- closure dichotomy ------------------------------------------------------


def test_closed_for_low_complexity():
    for c in (0, 1, 2):
        verdict = hbrac_closure_check(c, 2, 4)
        assert verdict.closed


def test_counterexample_at_complexity_three():
    verdict = hbrac_closure_check(3, 2, 3)
    assert not verdict.closed
    assert not has_internal_point(verdict.counterexample)
    assert has_internal_point(verdict.offending_term)
    # the paper's own picture: the 2x2 zig-zag path whose face creates an
    # internal point
    zig = validate_path(signature((1, 1), 0), (2, 1, 2, 1), (0,) * 5)
    image = simplicial_differential(zig)
    assert any(has_internal_point(q) for q, _ in image)


# --- surjections ------------------------------------------------------------


def test_surjection_to_path_examples():
    u = Surjection((1, 2, 1), 2)
    p = surjection_to_path(u)
    assert p.moves == (1, 2, 1)
    assert p.signature == signature((1, 0), 0)

    bijection = Surjection((1, 2, 3), 3)
    q = surjection_to_path(bijection)
    assert q.moves == (1, 2, 3)
    assert fibre_sizes(bijection) == (1, 1, 1)


def test_staircases_are_bijections():
    perms = list(itertools.permutations((1, 2, 3)))
    for perm in perms:
        p = surjection_to_path(Surjection(perm, 3))
        assert complexity(p) <= 2
        assert path_to_surjection(p).values == perm
    assert len(perms) == 6


def test_surjection_roundtrip_exhaustive():
    for n in (1, 2, 3):
        for m in range(n, 8):
            count = 0
            for u in nondegenerate_surjections(m, n):
                count += 1
                p = surjection_to_path(u)
                assert not has_internal_point(p)
                assert path_to_surjection(p) == u
            # every internal-point-free unmarked path arises exactly once
            paths = set()
            for ks in itertools.product(range(m), repeat=n):
                if sum(k + 1 for k in ks) != m:
                    continue
                for p in unmarked_paths(ks):
                    if not has_internal_point(p):
                        paths.add(p)
            assert count == len(paths)


def test_degenerate_surjection_rejected():
    u = Surjection((1, 1, 2), 2)
    p = surjection_to_path(u)
    assert has_internal_point(p)
    with pytest.raises(DomainError, match="internal point"):
        path_to_surjection(p)


def test_two_target_counts():
    # nondegenerate surjections onto {1,2} strictly alternate, so there are
    # exactly two of every length m >= 2
    for m in range(2, 9):
        assert sum(1 for _ in nondegenerate_surjections(m, 2)) == 2


def test_complexity_matches_filtration():
    for n in (1, 2, 3):
        for m in range(n, 7):
            for u in nondegenerate_surjections(m, n):
                assert surjection_complexity(u) == complexity(surjection_to_path(u))


def test_parse_surjection():
    u = parse_surjection("surj n=2 : 1,2,1")
    assert u == Surjection((1, 2, 1), 2)
    assert str(u) == "surj n=2 : 1,2,1"
