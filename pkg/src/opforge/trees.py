"""Planar rooted trees with white, black and special vertices.

Trees are nested tuples: ``('W', label, children)``, ``('B', children)``,
``('S',)`` for the special (unit) vertex, ``('L', label)`` for a leg.  A tree
with n white vertices (labeled 1..n, white vertex i of arity k_i) and l legs
(labeled 1..l) spans the (l; k_1..k_n) component of the tree operad; black
vertices have arity >= 2 and never touch another black or a special vertex.
The two exceptional trees are the bare edge ``|`` (one leg, representing the
identity cochain) and the bare special vertex ``*`` (representing the unit
of the algebra).

Sign conventions.  All signs funnel through one function, ``reading_sign``:
the Koszul sign of the shuffle that moves the labeled inputs (cochain
symbols of degree arity-1 and algebra elements of degree -1) from the order
(f_1, ..., f_n, x_1, ..., x_l) into the order in which they appear in the
planar traversal of the tree.  Black and special vertices are constants of
the operation and never contribute crossings.  The traversal sign times the
plain planar expression is the operation the tree represents; the
differential coefficients below are derived from the Hochschild differential
through exactly this dictionary, and the symbolic test suite checks the
round trip term by term.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import DomainError, FormatError
from .formal import FormalSum
from .paths import ColourSignature, MarkedLatticePath, complexity

Node = tuple

SPECIAL: Node = ("S",)


def white(label: int, *children: Node) -> Node:
    return ("W", label, tuple(children))


def black(*children: Node) -> Node:
    return ("B", tuple(children))


def leg(label: int) -> Node:
    return ("L", label)


@dataclass(frozen=True)
class PlanarTree:
    root: Node

    def __str__(self) -> str:
        return format_tree(self)


BAR = PlanarTree(("L", 1))
DOT = PlanarTree(SPECIAL)


def _children(node: Node):
    if node[0] == "W":
        return node[2]
    if node[0] == "B":
        return node[1]
    return ()


def white_arities(tree: PlanarTree) -> dict[int, int]:
    out: dict[int, int] = {}

    def walk(nd: Node):
        if nd[0] == "W":
            if nd[1] in out:
                raise DomainError(f"white label {nd[1]} repeated")
            out[nd[1]] = len(nd[2])
        for c in _children(nd):
            walk(c)

    walk(tree.root)
    return out


def leg_labels(tree: PlanarTree) -> list[int]:
    """Leg labels in planar (counterclockwise traversal) order."""
    out: list[int] = []

    def walk(nd: Node):
        if nd[0] == "L":
            out.append(nd[1])
        for c in _children(nd):
            walk(c)

    walk(tree.root)
    return out


def tree_signature(tree: PlanarTree) -> ColourSignature:
    ar = white_arities(tree)
    n = len(ar)
    if sorted(ar) != list(range(1, n + 1)):
        raise DomainError("white labels must be exactly 1..n")
    return ColourSignature(tuple(ar[i] for i in range(1, n + 1)), len(leg_labels(tree)))


def tree_degree(tree: PlanarTree) -> int:
    ks, l = tree_signature(tree)
    return l - sum(ks) + len(ks) - 1


def validate_tree(tree: PlanarTree) -> ColourSignature:
    """Structural invariants; raises DomainError naming the violation."""

    def walk(nd: Node, parent_kind: str | None):
        kind = nd[0]
        if kind == "B":
            if len(nd[1]) < 2:
                raise DomainError("black vertices must have arity >= 2")
            if parent_kind == "B":
                raise DomainError("edge connecting two black vertices")
            for c in nd[1]:
                if c[0] == "S":
                    raise DomainError("edge connecting a black and a special vertex")
                walk(c, "B")
        elif kind == "W":
            for c in nd[2]:
                walk(c, "W")
        elif kind == "S":
            if parent_kind == "B":
                raise DomainError("edge connecting a black and a special vertex")
        elif kind != "L":
            raise DomainError(f"unknown node kind {kind!r}")

    walk(tree.root, None)
    sig = tree_signature(tree)
    labels = leg_labels(tree)
    if sorted(labels) != list(range(1, len(labels) + 1)):
        raise DomainError("leg labels must be exactly 1..l")
    return sig


# --- Koszul sign machinery ---------------------------------------------------


def reading(tree: PlanarTree) -> list[tuple[str, int]]:
    """Symbols in planar traversal order: ('f', i) for white vertex i and
    ('x', j) for leg j; black and special vertices are transparent."""
    out: list[tuple[str, int]] = []

    def walk(nd: Node):
        if nd[0] == "W":
            out.append(("f", nd[1]))
        elif nd[0] == "L":
            out.append(("x", nd[1]))
        for c in _children(nd):
            walk(c)

    walk(tree.root)
    return out


def reading_sign(tree: PlanarTree, white_degrees: dict[int, int] | None = None) -> int:
    """Koszul sign of the shuffle (f_1..f_n, x_1..x_l) -> planar order.

    ``white_degrees`` overrides the default degree arity-1 of a white
    vertex; legs always have odd degree.
    """
    seq = reading(tree)
    degs = {i: len(kids) - 1 for kind, i, kids in _white_nodes(tree.root)}
    if white_degrees:
        degs.update(white_degrees)
    n = len(degs)
    sign = 1
    for q in range(len(seq)):
        kq, iq = seq[q]
        rank_q = iq if kq == "f" else n + iq
        odd_q = (degs[iq] % 2 != 0) if kq == "f" else True
        if not odd_q:
            continue
        for p in range(q):
            kp, ip = seq[p]
            rank_p = ip if kp == "f" else n + ip
            if rank_p > rank_q:
                odd_p = (degs[ip] % 2 != 0) if kp == "f" else True
                if odd_p:
                    sign = -sign
    return sign


def _white_nodes(node: Node):
    if node[0] == "W":
        yield node
    for c in _children(node):
        yield from _white_nodes(c)


def signature_sign(tree: PlanarTree) -> int:
    """Koszul sign comparing white labels against planar order, with white
    vertex i weighted by degree k_i - 1."""
    seq = [s for s in reading(tree) if s[0] == "f"]
    degs = {nd[1]: len(nd[2]) - 1 for nd in _white_nodes(tree.root)}
    sign = 1
    for q in range(len(seq)):
        if degs[seq[q][1]] % 2 == 0:
            continue
        for p in range(q):
            if seq[p][1] > seq[q][1] and degs[seq[p][1]] % 2 != 0:
                sign = -sign
    return sign


def relabel_whites(tree: PlanarTree, perm) -> PlanarTree:
    """Rename white label j to perm[j-1]; no sign."""
    perm = tuple(perm)

    def walk(nd: Node) -> Node:
        if nd[0] == "W":
            return ("W", perm[nd[1] - 1], tuple(walk(c) for c in nd[2]))
        if nd[0] == "B":
            return ("B", tuple(walk(c) for c in nd[1]))
        return nd

    return PlanarTree(walk(tree.root))


def relabel_whites_signed(tree: PlanarTree, perm) -> tuple[int, PlanarTree]:
    """The symmetric-group action with its Koszul sign.

    Returns (sign, T') with O_{T'}(f_1..f_n) = sign * O_T(f_{perm(1)}, ...):
    the sign is the product of the two traversal signs, since the underlying
    planar expressions coincide.
    """
    out = relabel_whites(tree, perm)
    return reading_sign(out) * reading_sign(tree), out


# --- legalization and insertion ----------------------------------------------


def legalize(node: Node) -> Node:
    """Collapse black-black edges and absorb unit (special) inputs of black
    vertices; iterated to a fixed point bottom-up.

    Neither rewrite moves any labeled symbol, so legalization never changes
    the traversal sign.
    """
    kind = node[0]
    if kind == "W":
        return ("W", node[1], tuple(legalize(c) for c in node[2]))
    if kind == "B":
        kids: list[Node] = []
        for c in node[1]:
            c = legalize(c)
            if c[0] == "B":
                kids.extend(c[1])
            elif c[0] == "S":
                continue
            else:
                kids.append(c)
        if not kids:
            return SPECIAL
        if len(kids) == 1:
            return kids[0]
        return ("B", tuple(kids))
    return node


def _replace_white(node: Node, i: int, make) -> Node:
    kind = node[0]
    if kind == "W":
        if node[1] == i:
            return make(node[2])
        return ("W", node[1], tuple(_replace_white(c, i, make) for c in node[2]))
    if kind == "B":
        return ("B", tuple(_replace_white(c, i, make) for c in node[1]))
    return node


def _find_white(node: Node, i: int) -> Node | None:
    for nd in _white_nodes(node):
        if nd[1] == i:
            return nd
    return None


def tree_insert(outer: PlanarTree, i: int, inner: PlanarTree) -> PlanarTree:
    """Vertex insertion: replace white vertex i of the outer tree by the
    inner tree, the inner legs picking up the removed vertex's inputs by
    label order; black-black edges collapse afterwards."""
    ks_out, _ = tree_signature(outer)
    sig_in = tree_signature(inner)
    n, m = len(ks_out), sig_in.n
    if not 1 <= i <= n:
        raise DomainError(f"slot {i} outside 1..{n}")
    if sig_in.output != ks_out[i - 1]:
        raise DomainError(
            f"inner tree has {sig_in.output} legs, slot {i} has arity {ks_out[i - 1]}"
        )

    # relabel around the slot; the slot itself becomes a sentinel (0) so a
    # legless inner tree cannot collide with the shifted labels
    def shift_outer(nd: Node) -> Node:
        if nd[0] == "W":
            label = 0 if nd[1] == i else (nd[1] if nd[1] < i else nd[1] + m - 1)
            return ("W", label, tuple(shift_outer(c) for c in nd[2]))
        if nd[0] == "B":
            return ("B", tuple(shift_outer(c) for c in nd[1]))
        return nd

    shifted = shift_outer(outer.root)
    target = _find_white(shifted, 0)
    assert target is not None
    grafts = dict(zip(range(1, len(target[2]) + 1), target[2]))

    def transplant(nd: Node) -> Node:
        if nd[0] == "L":
            return grafts[nd[1]]
        if nd[0] == "W":
            return ("W", nd[1] + i - 1, tuple(transplant(c) for c in nd[2]))
        if nd[0] == "B":
            return ("B", tuple(transplant(c) for c in nd[1]))
        return nd

    replacement = transplant(inner.root)
    new_root = _replace_white(shifted, 0, lambda _kids: replacement)
    return PlanarTree(legalize(new_root))


# --- differentials -----------------------------------------------------------


def tree_del_i(tree: PlanarTree, i: int) -> FormalSum:
    """The direction-i part of the differential: substitute the Hochschild
    differential into the i-th cochain slot.

    Coefficients are the Hochschild-display coefficients transported along
    the traversal-sign dictionary: each replacement pattern V contributes

        (-1)^(k_i+...+k_n+l+n+i) * c_display * sign(T) * sign(V).

    Both traversal signs are taken with natural degrees: the substituted
    cochain d_H(f_i) has the same degree as the slot it fills, while V's
    slot i naturally carries the dropped arity.  Collapsing and unit
    absorption in V change neither its traversal nor the coefficient.
    """
    ks, l = tree_signature(tree)
    n = len(ks)
    if not 1 <= i <= n:
        raise DomainError(f"slot {i} outside 1..{n}")
    k = ks[i - 1]
    if k == 0:
        return FormalSum.zero()
    lead = (-1) ** (sum(ks[i - 1 :]) + l + n + i)
    eps_t = reading_sign(tree)
    out = FormalSum()

    def add(make, display_coeff: int):
        result = PlanarTree(legalize(_replace_white(tree.root, i, make)))
        out.add_term(result, lead * display_coeff * eps_t * reading_sign(result))

    add(lambda C: ("B", (C[0], ("W", i, C[1:]))), (-1) ** k)
    add(lambda C: ("B", (("W", i, C[:-1]), C[-1])), 1)
    for s in range(1, k):
        add(
            lambda C, s=s: ("W", i, C[: s - 1] + (("B", (C[s - 1], C[s])),) + C[s + 1 :]),
            (-1) ** (s + k),
        )
    return out


def tree_del(tree: PlanarTree) -> FormalSum:
    ks, _ = tree_signature(tree)
    out = FormalSum()
    for i in range(1, len(ks) + 1):
        out = out + tree_del_i(tree, i)
    return out


def tree_delta(tree: PlanarTree) -> FormalSum:
    """Post-compose with the Hochschild differential (one more leg)."""
    ks, l = tree_signature(tree)
    eps_t = reading_sign(tree)
    out = FormalSum()

    def shift_legs(nd: Node, cut: int) -> Node:
        # legs with label >= cut move up by one
        if nd[0] == "L":
            return ("L", nd[1] + 1) if nd[1] >= cut else nd
        if nd[0] == "W":
            return ("W", nd[1], tuple(shift_legs(c, cut) for c in nd[2]))
        if nd[0] == "B":
            return ("B", tuple(shift_legs(c, cut) for c in nd[1]))
        return nd

    def add(node: Node, display_coeff: int):
        result = PlanarTree(legalize(node))
        out.add_term(result, display_coeff * eps_t * reading_sign(result))

    add(("B", (("L", 1), shift_legs(tree.root, 1))), (-1) ** (l + 1))
    add(("B", (tree.root, ("L", l + 1))), 1)

    def merge_leg(nd: Node, s: int) -> Node:
        if nd[0] == "L":
            if nd[1] == s:
                return ("B", (("L", s), ("L", s + 1)))
            return ("L", nd[1] + 1) if nd[1] > s else nd
        if nd[0] == "W":
            return ("W", nd[1], tuple(merge_leg(c, s) for c in nd[2]))
        if nd[0] == "B":
            return ("B", tuple(merge_leg(c, s) for c in nd[1]))
        return nd

    for s in range(1, l + 1):
        add(merge_leg(tree.root, s), (-1) ** (s + l + 1))
    return out


def tree_differential(tree: PlanarTree) -> FormalSum:
    """Total degree +1 differential of the tree operads: d = del - delta."""
    return tree_del(tree) - tree_delta(tree)


# --- the correspondence with complexity <= 2 lattice paths -------------------


def tree_to_path(tree: PlanarTree) -> MarkedLatticePath:
    """Walk the tree counterclockwise: hitting white vertex i advances the
    path in direction i, hitting a leg marks the current point.

    Leg labels are ignored (the path cannot carry them); white vertex i of
    arity k contributes k+1 unit moves in direction i.
    """
    ks, l = tree_signature(tree)
    moves: list[int] = []
    marks = [0]

    def walk(nd: Node):
        if nd[0] == "W":
            moves.append(nd[1])
            marks.append(0)
            for c in nd[2]:
                walk(c)
                moves.append(nd[1])
                marks.append(0)
        elif nd[0] == "B":
            for c in nd[1]:
                walk(c)
        elif nd[0] == "L":
            marks[-1] += 1

    walk(tree.root)
    return MarkedLatticePath(ColourSignature(ks, l), tuple(moves), tuple(marks))


def _wrap_gap(units: list[Node]) -> Node:
    if not units:
        return SPECIAL
    if len(units) == 1:
        return units[0]
    return ("B", tuple(units))


def path_to_tree(path: MarkedLatticePath) -> PlanarTree:
    """Inverse of tree_to_path for paths of complexity <= 2.

    Every direction belongs to one white vertex, so its moves delimit that
    vertex's subtree; with complexity <= 2 the spans of distinct directions
    are properly nested and the events parse by recursive descent.  Empty
    gaps between consecutive moves of one direction are stubs, multiple
    units in one gap sit under a black vertex.
    """
    if complexity(path) > 2:
        raise DomainError("only paths of complexity <= 2 correspond to trees")

    events: list[tuple] = [("leg",)] * path.markings[0]
    for d, m in zip(path.moves, path.markings[1:]):
        events.append(("move", d))
        events.extend([("leg",)] * m)

    def parse_units(ev: list[tuple]) -> list[Node]:
        units: list[Node] = []
        pos = 0
        while pos < len(ev):
            if ev[pos][0] == "leg":
                units.append(("L", 0))
                pos += 1
                continue
            d = ev[pos][1]
            last = max(q for q in range(pos, len(ev)) if ev[q] == ("move", d))
            span = ev[pos : last + 1]
            cuts = [q for q, e in enumerate(span) if e == ("move", d)]
            children = [
                _wrap_gap(parse_units(span[a + 1 : b])) for a, b in zip(cuts, cuts[1:])
            ]
            units.append(("W", d, tuple(children)))
            pos = last + 1
        return units

    units = parse_units(events)
    if not units:
        root: Node = SPECIAL
    elif len(units) == 1:
        root = units[0]
    else:
        root = ("B", tuple(units))

    tree = PlanarTree(_canonical_legs(root))
    if tree_to_path(tree) != path:
        raise DomainError("path does not parse into a tree (not complexity <= 2?)")
    return tree


def _canonical_legs(node: Node) -> Node:
    counter = itertools.count(1)

    def walk(nd: Node) -> Node:
        if nd[0] == "L":
            return ("L", next(counter))
        if nd[0] == "W":
            return ("W", nd[1], tuple(walk(c) for c in nd[2]))
        if nd[0] == "B":
            return ("B", tuple(walk(c) for c in nd[1]))
        return nd

    return walk(node)


def canonicalize_legs(tree: PlanarTree) -> PlanarTree:
    return PlanarTree(_canonical_legs(tree.root))


# --- enumeration and membership ----------------------------------------------


def enumerate_trees(l: int, ks: tuple[int, ...], allow_stubs: bool = True):
    """All (l; k_1..k_n)-trees with legs labeled in planar order.

    Trees are generated by recursive descent over root contents; within one
    signature the order is deterministic.
    """
    arity = {i + 1: k for i, k in enumerate(ks)}
    all_whites = frozenset(arity)

    def gen_white(label, whites, legs):
        k = arity[label]

        def slots(idx, whites, legs, acc):
            if idx == k:
                yield ("W", label, tuple(acc)), whites, legs
                return
            for child, w2, l2 in gen_child(whites, legs):
                acc.append(child)
                yield from slots(idx + 1, w2, l2, acc)
                acc.pop()

        yield from slots(0, whites - {label}, legs, [])

    def gen_child(whites, legs):
        if allow_stubs:
            yield SPECIAL, whites, legs
        yield from gen_unit(whites, legs)
        yield from gen_black(whites, legs)

    def gen_unit(whites, legs):
        if legs:
            yield ("L", 0), whites, legs - 1
        for w in sorted(whites):
            yield from gen_white(w, whites, legs)

    def gen_black(whites, legs):
        def extend(count, whites, legs, acc):
            if count >= 2:
                yield ("B", tuple(acc)), whites, legs
            for u, w2, l2 in gen_unit(whites, legs):
                acc.append(u)
                yield from extend(count + 1, w2, l2, acc)
                acc.pop()

        yield from extend(0, whites, legs, [])

    if not ks and l == 0:
        yield DOT
    for unit, w2, l2 in gen_unit(all_whites, l):
        if not w2 and l2 == 0:
            yield PlanarTree(_canonical_legs(unit))
    for blk, w2, l2 in gen_black(all_whites, l):
        if not w2 and l2 == 0:
            yield PlanarTree(_canonical_legs(blk))


def has_stub(tree: PlanarTree) -> bool:
    def walk(nd: Node) -> bool:
        if nd[0] == "W":
            return any(c == SPECIAL or walk(c) for c in nd[2])
        if nd[0] == "B":
            return any(walk(c) for c in nd[1])
        return False

    return walk(tree.root)


def suboperad_membership(tree: PlanarTree) -> dict[str, bool]:
    """Flags for the stub-free and leg-unlabeled suboperads."""
    no_unit = not has_stub(tree) and tree != DOT
    labels = leg_labels(tree)
    planar = labels == list(range(1, len(labels) + 1))
    return {"in_Bhat": no_unit, "in_T": planar, "in_That": no_unit and planar}


# --- text format ---------------------------------------------------------------


def format_tree(tree: PlanarTree) -> str:
    if tree.root[0] == "L":
        return "|"
    if tree.root == SPECIAL:
        return "*"

    def fmt(nd: Node) -> str:
        if nd[0] == "W":
            return f"W{nd[1]}(" + ",".join(fmt(c) for c in nd[2]) + ")"
        if nd[0] == "B":
            return "B(" + ",".join(fmt(c) for c in nd[1]) + ")"
        if nd[0] == "S":
            return "S"
        return f"L{nd[1]}"

    return fmt(tree.root)


def parse_tree(text: str) -> PlanarTree:
    text = text.strip()
    if text == "|":
        return BAR
    if text == "*":
        return DOT
    pos = 0

    def error(msg):
        raise FormatError(msg, position=pos)

    def parse_node() -> Node:
        nonlocal pos
        if pos >= len(text):
            error("unexpected end of tree expression")
        ch = text[pos]
        if ch == "W":
            pos += 1
            label = parse_int()
            return ("W", label, parse_children())
        if ch == "B":
            pos += 1
            return ("B", parse_children())
        if ch == "S":
            pos += 1
            return SPECIAL
        if ch == "L":
            pos += 1
            if pos < len(text) and text[pos].isdigit():
                return ("L", parse_int())
            return ("L", 0)
        error(f"unexpected character {ch!r}")

    def parse_int() -> int:
        nonlocal pos
        start = pos
        while pos < len(text) and text[pos].isdigit():
            pos += 1
        if start == pos:
            error("expected a number")
        return int(text[start:pos])

    def parse_children() -> tuple:
        nonlocal pos
        if pos >= len(text) or text[pos] != "(":
            error("expected '('")
        pos += 1
        kids = []
        if text[pos] == ")":
            pos += 1
            return ()
        while True:
            kids.append(parse_node())
            if pos >= len(text):
                error("missing ')'")
            if text[pos] == ",":
                pos += 1
                continue
            if text[pos] == ")":
                pos += 1
                return tuple(kids)
            error(f"expected ',' or ')', got {text[pos]!r}")

    root = parse_node()
    if pos != len(text):
        error("trailing characters after tree")
    labels = leg_labels(PlanarTree(root))
    if labels and all(x == 0 for x in labels):
        root = _canonical_legs(root)
    elif any(x == 0 for x in labels):
        raise FormatError("legs must be either all labeled or all unlabeled")
    tree = PlanarTree(root)
    validate_tree(tree)
    return tree
