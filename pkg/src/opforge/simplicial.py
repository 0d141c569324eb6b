"""Simplicial and cosimplicial structure maps on marked lattice paths.

Face and degeneracy maps act in one input direction r by collapsing or
stretching one coordinate level; cofaces and codegeneracies act on markings
only and never change the underlying path.

Index convention for the marking maps.  Write phi for the functor underlying
a path with output colour l (see ``paths.phi_point_indices``; domain 0..l+1).
The coface ``coface(p, i)`` (0 <= i <= l+1) increments the marking at phi(i).
The codegeneracy ``codegeneracy(p, i)`` (0 <= i <= l-1) decrements the
marking at phi(i+1), not phi(i): phi(i+1) is an interior functor value and
therefore always carries a positive marking, so the decrement is always
legal.  Targeting phi(i) instead would hit the (possibly unmarked) first
point for i = 0 and make the map partial.  This choice is exactly the action
of ordinal maps under Joyal duality, and it is the convention under which the
cosimplicial identities and d^2 = 0 hold (the test suite checks all of them
exhaustively on small signatures).
"""

from __future__ import annotations

from .errors import DomainError
from .formal import FormalSum
from .paths import ColourSignature, MarkedLatticePath, phi_point_indices


def _crossing_move(path: MarkedLatticePath, r: int, i: int) -> int:
    # Index of the move taking coordinate r from level i to i+1,
    # i.e. the (i+1)-th occurrence of r in the move sequence.
    seen = 0
    for t, d in enumerate(path.moves):
        if d == r:
            if seen == i:
                return t
            seen += 1
    raise DomainError(f"no crossing of level {i} -> {i + 1} in direction {r}")


def face(path: MarkedLatticePath, r: int, i: int) -> MarkedLatticePath:
    """Collapse coordinate-r levels above i; markings of the two identified
    points add up."""
    ks, l = path.signature
    if not 1 <= r <= len(ks):
        raise DomainError(f"direction {r} outside 1..{len(ks)}")
    m = ks[r - 1]
    if m < 1:
        raise DomainError(f"face needs k_{r} >= 1, got {m}")
    if not 0 <= i <= m:
        raise DomainError(f"face index {i} outside 0..{m}")
    t = _crossing_move(path, r, i)
    moves = path.moves[:t] + path.moves[t + 1 :]
    marks = list(path.markings)
    marks[t] += marks[t + 1]
    del marks[t + 1]
    sig = ColourSignature(ks[: r - 1] + (m - 1,) + ks[r:], l)
    return MarkedLatticePath(sig, moves, tuple(marks))


def degeneracy(path: MarkedLatticePath, r: int, i: int) -> MarkedLatticePath:
    """Stretch coordinate-r level i; the one missing point appears unmarked.

    The new point sits between two moves in direction r, so it is always an
    internal point of the image path.
    """
    ks, l = path.signature
    if not 1 <= r <= len(ks):
        raise DomainError(f"direction {r} outside 1..{len(ks)}")
    m = ks[r - 1]
    if not 0 <= i <= m:
        raise DomainError(f"degeneracy index {i} outside 0..{m}")
    t = _crossing_move(path, r, i)
    moves = path.moves[:t] + (r,) + path.moves[t:]
    marks = path.markings[: t + 1] + (0,) + path.markings[t + 1 :]
    sig = ColourSignature(ks[: r - 1] + (m + 1,) + ks[r:], l)
    return MarkedLatticePath(sig, moves, marks)


def coface(path: MarkedLatticePath, i: int) -> MarkedLatticePath:
    """Increment the marking at the i-th functor value; output colour l+1."""
    ks, l = path.signature
    if not 0 <= i <= l + 1:
        raise DomainError(f"coface index {i} outside 0..{l + 1}")
    phi = phi_point_indices(path)
    marks = list(path.markings)
    marks[phi[i]] += 1
    return MarkedLatticePath(ColourSignature(ks, l + 1), path.moves, tuple(marks))


def codegeneracy(path: MarkedLatticePath, i: int) -> MarkedLatticePath:
    """Decrement the marking at the (i+1)-th functor value; output l-1.

    The target is an interior functor value, hence marked; see the module
    docstring for why the index is shifted.
    """
    ks, l = path.signature
    if l < 1:
        raise DomainError("codegeneracy needs output colour l >= 1")
    if not 0 <= i <= l - 1:
        raise DomainError(f"codegeneracy index {i} outside 0..{l - 1}")
    phi = phi_point_indices(path)
    target = phi[i + 1]
    marks = list(path.markings)
    if marks[target] < 1:
        raise DomainError("codegeneracy target point is unmarked")
    marks[target] -= 1
    return MarkedLatticePath(ColourSignature(ks, l - 1), path.moves, tuple(marks))


def boundary_terms(path: MarkedLatticePath):
    """Signed face terms of the simplicial differential of one basis path.

    The r-th block carries the multicomplex cross-sign
    ``(-1)^(k_1 + ... + k_(r-1))`` so that blocks in distinct directions
    anticommute; within a block the faces alternate as usual.
    """
    ks, _ = path.signature
    eps = 1
    for r, k in enumerate(ks, start=1):
        if k >= 1:
            for i in range(k + 1):
                yield face(path, r, i), eps * (-1) ** i
        if k % 2:
            eps = -eps


def simplicial_differential(elem: FormalSum | MarkedLatticePath) -> FormalSum:
    """The differential induced by the n simplicial structures (degree +1
    against the grading by minus the total input colour)."""
    if isinstance(elem, MarkedLatticePath):
        elem = FormalSum.basis(elem)
    return elem.bind(lambda p: ((q, c) for q, c in boundary_terms(p)))


def cosimplicial_differential(elem: FormalSum | MarkedLatticePath) -> FormalSum:
    """Alternating sum of cofaces; raises output colour by one."""
    if isinstance(elem, MarkedLatticePath):
        elem = FormalSum.basis(elem)

    def terms(p):
        l = p.signature.output
        return ((coface(p, i), (-1) ** i) for i in range(l + 2))

    return elem.bind(terms)


def total_differential(elem, context: str = "lattice") -> FormalSum:
    """Total degree +1 differential.

    lattice context: d = delta + partial on the bicomplex of marked paths,
    graded by l - (k_1 + ... + k_n).  The simplicial part acting on the l-th
    column carries the standard column sign (-1)^l, which is what makes the
    two anticommute; on the l = 0 column d is the simplicial differential on
    the nose.

    tree-operad context: d = partial - delta on planar trees (the whole sum
    is delegated to the tree calculus).
    """
    if context == "tree-operad":
        from .trees import tree_differential

        if not isinstance(elem, FormalSum):
            elem = FormalSum.basis(elem)
        return elem.bind(tree_differential)
    if context != "lattice":
        raise DomainError(f"unknown differential context {context!r}")
    if isinstance(elem, MarkedLatticePath):
        elem = FormalSum.basis(elem)

    def terms(p):
        l = p.signature.output
        sign = (-1) ** l
        for q, c in boundary_terms(p):
            yield q, sign * c
        for i in range(l + 2):
            yield coface(p, i), (-1) ** i

    return elem.bind(terms)
