"""Marked lattice paths in integral hypercubes.

A path with input colours ``(k_1, ..., k_n)`` runs monotonically from the
origin to ``(k_1+1, ..., k_n+1)``, taking exactly ``k_i + 1`` unit steps in
direction ``i``.  Every visited point carries a non-negative marking and the
markings sum to the output colour ``l``.  Paths are stored as the step
sequence plus the marking sequence; absolute points are recomputed on demand,
which keeps face/degeneracy maps and projections pure sequence edits.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, NamedTuple

from .errors import DomainError, FormatError


class ColourSignature(NamedTuple):
    inputs: tuple[int, ...]
    output: int

    @property
    def n(self) -> int:
        return len(self.inputs)

    def __str__(self) -> str:
        return ",".join(map(str, self.inputs)) + ";" + str(self.output)


@dataclass(frozen=True)
class MarkedLatticePath:
    signature: ColourSignature
    moves: tuple[int, ...]
    markings: tuple[int, ...]

    @property
    def n_points(self) -> int:
        return len(self.moves) + 1

    def points(self) -> list[tuple[int, ...]]:
        """Absolute coordinates of the visited lattice points."""
        n = self.signature.n
        pos = [0] * n
        out = [tuple(pos)]
        for d in self.moves:
            pos[d - 1] += 1
            out.append(tuple(pos))
        return out

    def is_unmarked(self) -> bool:
        return all(m == 0 for m in self.markings)

    def __str__(self) -> str:
        return format_path(self)


@dataclass(frozen=True)
class PointClassification:
    angle_indices: frozenset[int]
    internal_indices: frozenset[int]
    marked_indices: frozenset[int]


def signature(inputs, output) -> ColourSignature:
    return ColourSignature(tuple(inputs), output)


def validate_path(sig: ColourSignature, moves, markings) -> MarkedLatticePath:
    """Checked constructor; raises DomainError naming the broken invariant."""
    moves = tuple(moves)
    markings = tuple(markings)
    ks, l = sig
    if any(k < 0 for k in ks) or l < 0:
        raise DomainError("signature entries must be non-negative")
    n = len(ks)
    for d in moves:
        if not 1 <= d <= n:
            raise DomainError(f"move direction {d} outside 1..{n}")
    for i, k in enumerate(ks, start=1):
        count = sum(1 for d in moves if d == i)
        if count != k + 1:
            raise DomainError(
                f"direction {i} must occur exactly k_{i}+1={k + 1} times, found {count}"
            )
    if len(markings) != len(moves) + 1:
        raise DomainError(
            f"markings length {len(markings)} != number of points {len(moves) + 1}"
        )
    if any(m < 0 for m in markings):
        raise DomainError("markings must be non-negative")
    total = sum(markings)
    if total != l:
        raise DomainError(f"marking sum {total} != output colour l={l}")
    return MarkedLatticePath(sig, moves, markings)


def classify_points(path: MarkedLatticePath) -> PointClassification:
    """Partition interior points into angles and internal points.

    Point ``a`` (with ``1 <= a <= N-2``) is an angle exactly when the step
    before it and the step after it go in different directions.
    """
    moves = path.moves
    angles = set()
    internal = set()
    for a in range(1, len(moves)):
        if moves[a - 1] != moves[a]:
            angles.add(a)
        else:
            internal.add(a)
    marked = frozenset(a for a, m in enumerate(path.markings) if m > 0)
    return PointClassification(frozenset(angles), frozenset(internal), marked)


def internal_point_indices(path: MarkedLatticePath) -> list[int]:
    moves = path.moves
    return [a for a in range(1, len(moves)) if moves[a - 1] == moves[a]]


def has_internal_point(path: MarkedLatticePath) -> bool:
    moves = path.moves
    return any(moves[a - 1] == moves[a] for a in range(1, len(moves)))


def projection(path: MarkedLatticePath, i: int, j: int) -> MarkedLatticePath:
    """Project to the 2-face spanned by directions ``i < j``.

    Deleted steps collapse runs of points onto one projected point, which
    absorbs their markings; the total marking is preserved.
    """
    n = path.signature.n
    if not (1 <= i < j <= n):
        raise DomainError(f"projection needs 1 <= i < j <= n, got ({i},{j})")
    moves = []
    marks = [path.markings[0]]
    for d, m in zip(path.moves, path.markings[1:]):
        if d == i or d == j:
            moves.append(1 if d == i else 2)
            marks.append(m)
        else:
            marks[-1] += m
    ks = path.signature.inputs
    sig = ColourSignature((ks[i - 1], ks[j - 1]), path.signature.output)
    return MarkedLatticePath(sig, tuple(moves), tuple(marks))


def _alternations(seq) -> int:
    changes = 0
    prev = None
    for d in seq:
        if prev is not None and d != prev:
            changes += 1
        prev = d
    return changes


def complexity(path: MarkedLatticePath) -> int:
    """Maximum angle count over all 2-dimensional projections; 0 for n <= 1."""
    n = path.signature.n
    if n <= 1:
        return 0
    best = 0
    moves = path.moves
    for i in range(1, n):
        for j in range(i + 1, n + 1):
            c = _alternations([d for d in moves if d == i or d == j])
            if c > best:
                best = c
    return best


def _move_sequences(counts: list[int]) -> Iterator[tuple[int, ...]]:
    # Lexicographically ordered permutations of the multiset
    # {1^counts[0], 2^counts[1], ...}.
    total = sum(counts)
    seq: list[int] = []

    def rec():
        if len(seq) == total:
            yield tuple(seq)
            return
        for d in range(len(counts)):
            if counts[d]:
                counts[d] -= 1
                seq.append(d + 1)
                yield from rec()
                seq.pop()
                counts[d] += 1

    yield from rec()


def weak_compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Weak compositions of ``total`` into ``parts`` parts, lexicographic."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in weak_compositions(total - first, parts - 1):
            yield (first,) + rest


def enumerate_paths(sig: ColourSignature, c: int | None = None) -> Iterator[MarkedLatticePath]:
    """All marked paths of the signature with complexity <= c (None: unbounded).

    Order: lexicographic on the move sequence, then on the marking sequence.
    The order is part of the contract; fixtures and CLI output rely on it.
    """
    ks, l = sig
    counts = [k + 1 for k in ks]
    n_points = sum(counts) + 1
    for moves in _move_sequences(counts):
        if c is not None:
            probe = MarkedLatticePath(sig, moves, (0,) * n_points)
            if complexity(probe) > c:
                continue
        for marks in weak_compositions(l, n_points):
            yield MarkedLatticePath(sig, moves, marks)


def unmarked_paths(inputs: tuple[int, ...], c: int | None = None) -> Iterator[MarkedLatticePath]:
    sig = ColourSignature(tuple(inputs), 0)
    yield from enumerate_paths(sig, c)


def identity_path(k: int) -> MarkedLatticePath:
    """The colour-k operadic unit: straight path, interior points marked 1."""
    if k < 0:
        raise DomainError("colour must be non-negative")
    marks = (0,) + (1,) * k + (0,)
    return MarkedLatticePath(ColourSignature((k,), k), (1,) * (k + 1), marks)


def point_path(l: int) -> MarkedLatticePath:
    """The unique path with no inputs: a single point marked l."""
    return MarkedLatticePath(ColourSignature((), l), (), (l,))


def phi_point_indices(path: MarkedLatticePath) -> list[int]:
    """Point indices of the functor underlying the path.

    For a path with output colour l the functor is defined on ``0..l+1``:
    value 0 is the first point, value l+1 the last, and value j (interior)
    is the point at which the running marking total first reaches j.  These
    are the cut points used by cosimplicial maps and operadic composition.
    """
    l = path.signature.output
    marks = path.markings
    out = [0]
    cum = marks[0]
    a = 0
    for j in range(1, l + 1):
        while cum < j:
            a += 1
            cum += marks[a]
        out.append(a)
    out.append(len(marks) - 1)
    return out


# Text format: `lat <k1,...,kn>;<l> | m0 d1:m1 d2:m2 ...`


def format_path(path: MarkedLatticePath) -> str:
    body = " ".join(
        f"{d}:{m}" for d, m in zip(path.moves, path.markings[1:])
    )
    head = f"lat {path.signature} | {path.markings[0]}"
    return f"{head} {body}".rstrip()


def parse_signature(text: str) -> ColourSignature:
    if ";" not in text:
        raise FormatError("signature must look like 'k1,...,kn;l'")
    left, _, right = text.partition(";")
    left = left.strip()
    try:
        inputs = tuple(int(t) for t in left.split(",")) if left else ()
        output = int(right)
    except ValueError as exc:
        raise FormatError(f"bad signature {text!r}: {exc}") from None
    return ColourSignature(inputs, output)


def parse_path(text: str) -> MarkedLatticePath:
    tokens = text.split()
    if not tokens or tokens[0] != "lat":
        raise FormatError("path must start with 'lat'", position=0)
    if len(tokens) < 4 or tokens[2] != "|":
        raise FormatError("path must look like 'lat sig | m0 d:m ...'", position=1)
    sig = parse_signature(tokens[1])
    try:
        m0 = int(tokens[3])
    except ValueError:
        raise FormatError(f"bad origin marking {tokens[3]!r}", position=3) from None
    moves = []
    marks = [m0]
    for pos, tok in enumerate(tokens[4:], start=4):
        d, sep, m = tok.partition(":")
        if not sep:
            raise FormatError(f"expected 'direction:marking', got {tok!r}", position=pos)
        try:
            moves.append(int(d))
            marks.append(int(m))
        except ValueError:
            raise FormatError(f"bad token {tok!r}", position=pos) from None
    return validate_path(sig, moves, marks)
