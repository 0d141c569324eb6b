"""Coloured operadic composition of marked lattice paths, and the
zero-marking (brace-type) suboperads built from it.

Composition is functor substitution: the i-th input colour of the outer path
indexes a coordinate direction, and each unit step of the outer path in that
direction is replaced by the stretch of the inner path between two of its
cut points (the functor values encoded by the inner markings).  Outer
markings ride along to the image points; inner markings are consumed as the
cut-point data and do not survive.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, NamedTuple

from .errors import DomainError
from .formal import FormalSum
from .paths import (
    ColourSignature,
    MarkedLatticePath,
    complexity,
    has_internal_point,
    phi_point_indices,
    unmarked_paths,
    weak_compositions,
)
from .simplicial import boundary_terms


def compose(outer: MarkedLatticePath, i: int, inner: MarkedLatticePath) -> MarkedLatticePath:
    ks, l = outer.signature
    n = len(ks)
    if not 1 <= i <= n:
        raise DomainError(f"slot {i} outside 1..{n}")
    ms = inner.signature.inputs
    if inner.signature.output != ks[i - 1]:
        raise DomainError(
            f"colour mismatch: inner output {inner.signature.output} != slot colour {ks[i - 1]}"
        )
    p = len(ms)
    cut = phi_point_indices(inner)
    moves: list[int] = []
    marks = [outer.markings[0]]
    a = 0
    for t, d in enumerate(outer.moves):
        if d == i:
            for q in inner.moves[cut[a] : cut[a + 1]]:
                moves.append(i - 1 + q)
                marks.append(0)
            marks[-1] += outer.markings[t + 1]
            a += 1
        else:
            moves.append(d if d < i else d + p - 1)
            marks.append(outer.markings[t + 1])
    sig = ColourSignature(ks[: i - 1] + ms + ks[i:], l)
    return MarkedLatticePath(sig, tuple(moves), tuple(marks))


def relabel(path: MarkedLatticePath, perm) -> MarkedLatticePath:
    """Permute input colours: direction d is renamed perm[d-1].

    This is the symmetric-group action on the underlying set of paths; the
    zero-marking suboperads use it as white-slot relabelling.
    """
    ks = path.signature.inputs
    n = len(ks)
    perm = tuple(perm)
    if sorted(perm) != list(range(1, n + 1)):
        raise DomainError("relabelling must be a permutation of 1..n")
    new_ks = [0] * n
    for d in range(1, n + 1):
        new_ks[perm[d - 1] - 1] = ks[d - 1]
    moves = tuple(perm[d - 1] for d in path.moves)
    return MarkedLatticePath(
        ColourSignature(tuple(new_ks), path.signature.output), moves, path.markings
    )


def monotone_map(path: MarkedLatticePath) -> tuple[int, ...]:
    """For n = 1: the underlying order-preserving, endpoint-preserving map
    [l+1] -> [k+1], as the tuple of its values."""
    if path.signature.n != 1:
        raise DomainError("monotone_map needs exactly one input colour")
    return tuple(phi_point_indices(path))


def whisker_terms(path: MarkedLatticePath, s: int) -> list[MarkedLatticePath]:
    """All paths obtained by inserting s new internal points marked 1.

    Insertions stretch unit moves into runs; the s new points are the run
    interiors and carry marking 1, while every original point stays and
    keeps marking 0.  Contracting the marked points recovers the input, so
    the terms are exactly the degree-s whiskering of an unmarked path.
    Enumeration order is lexicographic in the distribution of insertions
    over the moves.
    """
    if not path.is_unmarked():
        raise DomainError("whiskering is defined on unmarked paths")
    moves = path.moves
    ks = path.signature.inputs
    out = []
    for comp in weak_compositions(s, len(moves)):
        new_moves: list[int] = []
        new_marks = [0]
        new_ks = list(ks)
        for extra, d in zip(comp, moves):
            for _ in range(extra):
                new_moves.append(d)
                new_marks.append(1)
            new_moves.append(d)
            new_marks.append(0)
            new_ks[d - 1] += extra
        sig = ColourSignature(tuple(new_ks), s)
        out.append(MarkedLatticePath(sig, tuple(new_moves), tuple(new_marks)))
    return out


def brac_compose(
    outer: MarkedLatticePath,
    i: int,
    inner: MarkedLatticePath,
    unsigned: bool = False,
) -> FormalSum:
    """Whiskered insertion of unmarked paths: compose with every degree-a_i
    whiskering of the inner path.

    For complexity <= 2 all coefficients are +1 in the operadic convention
    (the tree model realizes them so); at complexity >= 3 the true signs are
    not implemented and the unsigned sum is only produced when explicitly
    requested via ``unsigned=True``.
    """
    if not outer.is_unmarked() or not inner.is_unmarked():
        raise DomainError("brace composition needs unmarked paths")
    if not unsigned and max(complexity(outer), complexity(inner)) > 2:
        raise DomainError(
            "signed brace composition is only defined for complexity <= 2; "
            "pass unsigned=True for the unsigned term sum"
        )
    a_i = outer.signature.inputs[i - 1]
    out = FormalSum()
    for w in whisker_terms(inner, a_i):
        out.add_term(compose(outer, i, w), 1)
    return out


def normalize(elem: FormalSum | MarkedLatticePath) -> FormalSum:
    """Project to the normalized quotient: kill paths with internal points."""
    if isinstance(elem, MarkedLatticePath):
        elem = FormalSum.basis(elem)
    out = FormalSum()
    for p, c in elem:
        if not has_internal_point(p):
            out.add_term(p, c)
    return out


@dataclass(frozen=True)
class ClosureVerdict:
    closed: bool
    counterexample: MarkedLatticePath | None
    offending_term: MarkedLatticePath | None


def hbrac_closure_check(c: int, n: int, max_total_colour: int) -> ClosureVerdict:
    """Is the span of internal-point-free unmarked paths closed under the
    simplicial differential inside complexity <= c?

    Scans every internal-point-free basis path with n input colours and
    total colour up to the bound.  Closed for c <= 2; for c >= 3 returns the
    first basis path whose differential keeps an internal-point term after
    exact cancellation.
    """
    import itertools

    for total in range(max_total_colour + 1):
        for ks in itertools.product(range(total + 1), repeat=n):
            if sum(ks) != total:
                continue
            for p in unmarked_paths(ks, c):
                if has_internal_point(p):
                    continue
                image = FormalSum()
                for q, coeff in boundary_terms(p):
                    image.add_term(q, coeff)
                for q, _ in image:
                    if has_internal_point(q):
                        return ClosureVerdict(False, p, q)
    return ClosureVerdict(True, None, None)


class Surjection(NamedTuple):
    values: tuple[int, ...]
    n: int

    def __str__(self) -> str:
        return f"surj n={self.n} : " + ",".join(map(str, self.values))


def validate_surjection(values, n: int) -> Surjection:
    values = tuple(values)
    if any(not 1 <= v <= n for v in values):
        raise DomainError(f"surjection values must lie in 1..{n}")
    if set(values) != set(range(1, n + 1)):
        raise DomainError("every value in 1..n must be attained (surjectivity)")
    return Surjection(values, n)


def is_nondegenerate(u: Surjection) -> bool:
    return all(a != b for a, b in zip(u.values, u.values[1:]))


def fibre_sizes(u: Surjection) -> tuple[int, ...]:
    return tuple(sum(1 for v in u.values if v == i) for i in range(1, u.n + 1))


def surjection_complexity(u: Surjection) -> int:
    """Filtration level: complexity of the associated path."""
    return complexity(surjection_to_path(u))


def surjection_to_path(u: Surjection) -> MarkedLatticePath:
    """Advance by the basis vector d_{u(j)} at step j; unmarked result.

    Nondegenerate surjections land exactly on the internal-point-free
    paths, which is the basis of the normalized zero-marking operad.
    """
    u = validate_surjection(u.values, u.n)
    ks = tuple(size - 1 for size in fibre_sizes(u))
    sig = ColourSignature(ks, 0)
    return MarkedLatticePath(sig, u.values, (0,) * (len(u.values) + 1))


def path_to_surjection(path: MarkedLatticePath) -> Surjection:
    if not path.is_unmarked():
        raise DomainError("only unmarked paths correspond to surjections")
    if has_internal_point(path):
        raise DomainError(
            "path has an internal point; it is degenerate and has no "
            "nondegenerate surjection"
        )
    return Surjection(path.moves, path.signature.n)


def parse_surjection(text: str) -> Surjection:
    # Format: `surj n=<n> : u1,u2,...,um`
    from .errors import FormatError

    tokens = text.split()
    if len(tokens) != 4 or tokens[0] != "surj" or tokens[2] != ":":
        raise FormatError("surjection must look like 'surj n=<n> : u1,...,um'")
    if not tokens[1].startswith("n="):
        raise FormatError("missing 'n=' in surjection", position=1)
    try:
        n = int(tokens[1][2:])
        values = tuple(int(t) for t in tokens[3].split(","))
    except ValueError as exc:
        raise FormatError(f"bad surjection: {exc}") from None
    return validate_surjection(values, n)


def nondegenerate_surjections(m: int, n: int) -> Iterator[Surjection]:
    """All nondegenerate surjections {1..m} -> {1..n}, lexicographic."""
    values: list[int] = []

    def rec(missing: int):
        if len(values) == m:
            if missing == 0:
                yield Surjection(tuple(values), n)
            return
        remaining = m - len(values)
        for v in range(1, n + 1):
            if values and values[-1] == v:
                continue
            new_missing = missing - (v not in values)
            if new_missing > remaining - 1:
                continue
            values.append(v)
            yield from rec(new_missing)
            values.pop()

    if m >= n >= 1:
        yield from rec(n)
