"""Brace calculus on amputated trees (trees with no legs).

The whiskered insertion glues the inputs of the removed white vertex into
the angles of the inserted tree, one summand per monotone assignment, all
with coefficient +1 (the operadic convention).  Whiskering decorates a tree
with legs in all possible angle positions; it is an infinite product, so
every API takes an explicit leg budget and is exact within it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import DomainError
from .formal import FormalSum
from .trees import (
    DOT,
    Node,
    PlanarTree,
    SPECIAL,
    _canonical_legs,
    _find_white,
    _replace_white,
    legalize,
    relabel_whites,
    relabel_whites_signed,
    tree_del,
    tree_signature,
    white_arities,
)


def assert_amputated(tree: PlanarTree) -> None:
    if tree_signature(tree).output != 0:
        raise DomainError("amputated trees have no legs")


def angles(tree: PlanarTree) -> list[tuple[int, int]]:
    """The ordered angle list: (white label, slot) pairs along the
    counterclockwise walk; white vertex of arity k contributes k+1 angles,
    black and special vertices none."""
    out: list[tuple[int, int]] = []

    def walk(nd: Node):
        if nd[0] == "W":
            out.append((nd[1], 0))
            for s, c in enumerate(nd[2], start=1):
                walk(c)
                out.append((nd[1], s))
        elif nd[0] == "B":
            for c in nd[1]:
                walk(c)

    walk(tree.root)
    return out


def _insert_at_angles(node: Node, extra: dict[tuple[int, int], tuple]) -> Node:
    if node[0] == "W":
        label = node[1]
        kids: list[Node] = list(extra.get((label, 0), ()))
        for s, c in enumerate(node[2], start=1):
            kids.append(_insert_at_angles(c, extra))
            kids.extend(extra.get((label, s), ()))
        return ("W", label, tuple(kids))
    if node[0] == "B":
        return ("B", tuple(_insert_at_angles(c, extra) for c in node[1]))
    return node


def whiskered_insert(outer: PlanarTree, i: int, inner: PlanarTree) -> FormalSum:
    """Sum over monotone gluings of the slot's inputs into the angles of the
    inserted tree; coefficients are all +1.

    When slot i has no inputs this is plain grafting with a single term.
    Monotone maps are enumerated lexicographically, so term order is
    deterministic.  The inserted tree must be amputated; the receiving tree
    may carry legs (the corolla form of the whiskering relies on this).
    """
    assert_amputated(inner)
    n = tree_signature(outer).n
    m = tree_signature(inner).n
    if not 1 <= i <= n:
        raise DomainError(f"slot {i} outside 1..{n}")

    # slot label becomes a sentinel so a whiteless inner tree cannot
    # collide with the shifted outer labels
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
    children = target[2]
    inner_shifted = relabel_whites(inner, tuple(j + i - 1 for j in range(1, m + 1)))
    angle_list = angles(inner_shifted)

    out = FormalSum()
    for beta in itertools.combinations_with_replacement(
        range(len(angle_list)), len(children)
    ):
        extra: dict[tuple[int, int], list] = {}
        for child, a in zip(children, beta):
            extra.setdefault(angle_list[a], []).append(child)
        grown = _insert_at_angles(inner_shifted.root, {k: tuple(v) for k, v in extra.items()})
        glued = _replace_white(shifted, 0, lambda _kids: grown)
        out.add_term(PlanarTree(legalize(glued)), 1)
    return out


def amputated_differential(elem) -> FormalSum:
    """The tree differential restricted to amputated trees (no leg terms)."""
    if isinstance(elem, PlanarTree):
        elem = FormalSum.basis(elem)
    for tree, _ in elem:
        assert_amputated(tree)
    return elem.bind(tree_del)


def angle_constant_parities(tree: PlanarTree) -> list[int]:
    """For each angle (in order), the parity of the odd-degree constant
    vertices a leg inserted there must cross.

    Only constants inside the earlier input subtrees of the angle's own
    white vertex count: black vertices contribute their operation degree
    (arity - 1) and special vertices contribute 1.  These are exactly the
    Koszul factors the traversal sign of a decorated tree cannot see (it
    tracks cochain symbols and inputs only), so they ride on the whiskering
    coefficients; the chain-map property of the whiskering, checked
    exhaustively on small trees, pins this rule down.
    """
    out: list[int] = []

    def const_parity(nd: Node) -> int:
        if nd[0] == "W":
            return sum(const_parity(c) for c in nd[2]) % 2
        if nd[0] == "B":
            return (len(nd[1]) - 1 + sum(const_parity(c) for c in nd[1])) % 2
        return 1 if nd[0] == "S" else 0

    def walk(nd: Node):
        if nd[0] == "W":
            parity = 0
            out.append(parity)
            for c in nd[2]:
                walk(c)
                parity = (parity + const_parity(c)) % 2
                out.append(parity)
        elif nd[0] == "B":
            for c in nd[1]:
                walk(c)

    walk(tree.root)
    return out


def whisker(tree: PlanarTree, leg_budget: int) -> FormalSum:
    """All leg decorations of an amputated tree with at most the given
    number of legs; legs are labeled in planar order.

    Each term's coefficient is the product, over inserted legs, of the
    constant-crossing signs of the chosen angles (see
    ``angle_constant_parities``)."""
    assert_amputated(tree)
    angle_list = angles(tree)
    parities = angle_constant_parities(tree)
    out = FormalSum()
    for d in range(leg_budget + 1):
        for placement in itertools.combinations_with_replacement(range(len(angle_list)), d):
            extra: dict[tuple[int, int], list] = {}
            sign = 1
            for a in placement:
                extra.setdefault(angle_list[a], []).append(("L", 0))
                if parities[a]:
                    sign = -sign
            grown = _insert_at_angles(tree.root, {k: tuple(v) for k, v in extra.items()})
            out.add_term(PlanarTree(_canonical_legs(grown)), sign)
    return out


def whisker_with_arities(
    tree: PlanarTree, arities: dict[int, int]
) -> list[tuple[PlanarTree, int]]:
    """Signed leg decorations whose white vertex i reaches the given arity;
    empty when some target arity is below the bare arity."""
    assert_amputated(tree)
    bare = white_arities(tree)
    parity_of = dict(zip(angles(tree), angle_constant_parities(tree)))
    per_white = []
    for label in sorted(bare):
        extra = arities[label] - bare[label]
        if extra < 0:
            return []
        gaps = bare[label] + 1
        per_white.append(
            (label, list(itertools.combinations_with_replacement(range(gaps), extra)))
        )
    out = []
    for combo in itertools.product(*(choices for _, choices in per_white)):
        extra_map: dict[tuple[int, int], list] = {}
        sign = 1
        for (label, _), placement in zip(per_white, combo):
            for gap in placement:
                extra_map.setdefault((label, gap), []).append(("L", 0))
                if parity_of[(label, gap)]:
                    sign = -sign
        grown = _insert_at_angles(tree.root, {k: tuple(v) for k, v in extra_map.items()})
        out.append((PlanarTree(_canonical_legs(grown)), sign))
    return out


def whiskered_operation(elem, cochains) -> "Cochain":
    """The natural operation of a whiskered amputated tree (or sum), with
    white slots decorated by the given cochains.

    Picks out of the whiskering product exactly the components matching the
    cochain arities; this realizes braces, cup products and their
    differentials as honest operations on cochains.
    """
    from .symbolic import Cochain, evaluate

    if isinstance(elem, PlanarTree):
        elem = FormalSum.basis(elem)
    arities = {i: c.arity for i, c in cochains.items()}
    arity = None
    for tree, _ in elem:
        sig = tree_signature(tree)
        this = sum(arities[i] for i in range(1, sig.n + 1)) - sum(sig.inputs)
        if arity is None:
            arity = this
        elif arity != this:
            raise DomainError("mixed output arities in whiskered operation")
    if arity is None:
        arity = 0

    def fn(words):
        out = FormalSum()
        for tree, coeff in elem:
            for decorated, sign in whisker_with_arities(tree, arities):
                value = evaluate(
                    decorated, cochains, {j + 1: w for j, w in enumerate(words)}
                )
                out = out + (coeff * sign) * value
        return out

    return Cochain(arity, fn, "w[...]")


# --- atoms and decomposition ---------------------------------------------------


@dataclass(frozen=True)
class AtomExpr:
    kind: str  # 'id', 'dot', 'cup', or 'brace'
    width: int = 0


@dataclass(frozen=True)
class InsertExpr:
    outer: object
    slot: int
    inner: object


@dataclass(frozen=True)
class RelabelExpr:
    inner: object
    perm: tuple


@dataclass(frozen=True)
class Decomposition:
    expression: object
    sign: int


def identity_atom() -> PlanarTree:
    return PlanarTree(("W", 1, ()))


def cup_atom() -> PlanarTree:
    return PlanarTree(("B", (("W", 1, ()), ("W", 2, ()))))


def brace_atom(d: int) -> PlanarTree:
    if d < 1:
        raise DomainError("brace atoms need at least one slot")
    return PlanarTree(("W", 1, tuple(("W", j, ()) for j in range(2, d + 2))))


def atom_tree(expr: AtomExpr) -> PlanarTree:
    if expr.kind == "id":
        return identity_atom()
    if expr.kind == "dot":
        return DOT
    if expr.kind == "cup":
        return cup_atom()
    if expr.kind == "brace":
        return brace_atom(expr.width)
    raise DomainError(f"unknown atom {expr.kind!r}")


def eval_expression(expr) -> FormalSum:
    """Evaluate an atom expression with whiskered insertion and the signed
    relabelling action."""
    if isinstance(expr, AtomExpr):
        return FormalSum.basis(atom_tree(expr))
    if isinstance(expr, InsertExpr):
        outer = eval_expression(expr.outer)
        inner = eval_expression(expr.inner)
        out = FormalSum()
        for t_out, c_out in outer:
            for t_in, c_in in inner:
                part = whiskered_insert(t_out, expr.slot, t_in)
                for t, c in part:
                    out.add_term(t, c * c_out * c_in)
        return out
    if isinstance(expr, RelabelExpr):
        out = FormalSum()
        for t, c in eval_expression(expr.inner):
            sign, relabeled = relabel_whites_signed(t, expr.perm)
            out.add_term(relabeled, sign * c)
        return out
    raise DomainError(f"unknown expression node {expr!r}")


def format_expression(expr) -> str:
    if isinstance(expr, AtomExpr):
        return expr.kind if expr.kind != "brace" else f"br{expr.width}"
    if isinstance(expr, InsertExpr):
        return f"({format_expression(expr.outer)} o_{expr.slot} {format_expression(expr.inner)})"
    if isinstance(expr, RelabelExpr):
        perm = ",".join(map(str, expr.perm))
        return f"relabel[{perm}]({format_expression(expr.inner)})"
    raise DomainError(f"unknown expression node {expr!r}")


def _planar_white_order(tree: PlanarTree) -> list[int]:
    out = []

    def walk(nd: Node):
        if nd[0] == "W":
            out.append(nd[1])
        for c in (nd[2] if nd[0] == "W" else nd[1] if nd[0] == "B" else ()):
            walk(c)

    walk(tree.root)
    return out


def _subtree_as_tree(node: Node) -> PlanarTree:
    """View a stub-free subtree as a standalone amputated tree with its
    whites renumbered 1..m in planar order (an order-preserving, hence
    sign-free, relabelling)."""
    labels = _planar_white_order(PlanarTree(node))
    rank = {label: t + 1 for t, label in enumerate(sorted(labels))}

    def walk(nd: Node) -> Node:
        if nd[0] == "W":
            return ("W", rank[nd[1]], tuple(walk(c) for c in nd[2]))
        if nd[0] == "B":
            return ("B", tuple(walk(c) for c in nd[1]))
        return nd

    return PlanarTree(walk(node))


def _decompose_planar(tree: PlanarTree):
    """Decompose a stub-free amputated tree whose white labels are already
    1..n in planar order; the expression evaluates to the tree with
    coefficient exactly +1."""
    root = tree.root
    if root[0] == "W":
        children = root[2]
        if not children:
            return AtomExpr("id")
        expr = AtomExpr("brace", len(children))
        offset = 2
        for child in children:
            sub = _subtree_as_tree(child)
            expr = InsertExpr(expr, offset, _decompose_planar(sub))
            offset += tree_signature(sub).n
        return expr
    if root[0] == "B":
        kids = root[1]
        left_node: Node = kids[0] if len(kids) == 2 else ("B", kids[:-1])
        left = _subtree_as_tree(left_node)
        right = _subtree_as_tree(kids[-1])
        expr = InsertExpr(AtomExpr("cup"), 1, _decompose_planar(left))
        return InsertExpr(expr, tree_signature(left).n + 1, _decompose_planar(right))
    raise DomainError(f"cannot decompose subtree rooted at {root[0]!r}")


def _as_atom(tree: PlanarTree) -> AtomExpr | None:
    if tree == DOT:
        return AtomExpr("dot")
    if tree == identity_atom():
        return AtomExpr("id")
    if tree == cup_atom():
        return AtomExpr("cup")
    root = tree.root
    if root[0] == "W" and root[1] == 1 and root[2]:
        if all(
            c[0] == "W" and c[1] == j + 2 and not c[2] for j, c in enumerate(root[2])
        ):
            return AtomExpr("brace", len(root[2]))
    return None


def decompose_into_atoms(tree: PlanarTree) -> Decomposition:
    """Express an amputated tree through the generators: the identity
    corolla, the unit, the cup and the brace corollas.

    Stubs are peeled first (each becomes an extra arity-0 white vertex that
    swallows a unit atom), then white roots peel along the brace corolla and
    black roots split left-nested along the cup.  The recorded sign makes
    the evaluated expression reproduce the tree exactly.
    """
    assert_amputated(tree)
    atom = _as_atom(tree)
    if atom is not None:
        return Decomposition(atom, 1)

    n = tree_signature(tree).n
    stubs = _count_stubs(tree.root)
    if stubs:
        grown, _ = _stubs_to_whites(tree.root, n)
        inner = decompose_into_atoms(PlanarTree(grown))
        expr = inner.expression
        for label in range(n + stubs, n, -1):
            expr = InsertExpr(expr, label, AtomExpr("dot"))
        result = eval_expression(expr)
        return _signed(expr, result, tree)

    order = _planar_white_order(tree)
    rank = {label: t + 1 for t, label in enumerate(order)}
    planar = relabel_whites(tree, tuple(rank[j] for j in range(1, n + 1)))
    expr = _decompose_planar(planar)
    if order != list(range(1, n + 1)):
        inverse = tuple(order[j - 1] for j in range(1, n + 1))
        expr = RelabelExpr(expr, inverse)
    result = eval_expression(expr)
    return _signed(expr, result, tree)


def _signed(expr, result: FormalSum, tree: PlanarTree) -> Decomposition:
    if len(result) != 1:
        raise DomainError("decomposition did not evaluate to a single tree")
    ((got, coeff),) = list(result)
    if got != tree or coeff not in (1, -1):
        raise DomainError(f"decomposition evaluated to {coeff}*{got}, wanted {tree}")
    return Decomposition(expr, coeff)


def _count_stubs(node: Node) -> int:
    if node[0] == "W":
        return sum(1 if c == SPECIAL else _count_stubs(c) for c in node[2])
    if node[0] == "B":
        return sum(_count_stubs(c) for c in node[1])
    return 0


def _stubs_to_whites(node: Node, next_label: int) -> tuple[Node, int]:
    """Replace stubs by fresh arity-0 white vertices labeled in planar
    order starting at next_label+1."""
    if node[0] == "W":
        kids = []
        for c in node[2]:
            if c == SPECIAL:
                next_label += 1
                kids.append(("W", next_label, ()))
            else:
                c2, next_label = _stubs_to_whites(c, next_label)
                kids.append(c2)
        return ("W", node[1], tuple(kids)), next_label
    if node[0] == "B":
        kids = []
        for c in node[1]:
            c2, next_label = _stubs_to_whites(c, next_label)
            kids.append(c2)
        return ("B", tuple(kids)), next_label
    return node, next_label


def internal_edge_count(tree: PlanarTree) -> int:
    """Edges between two vertices (legs and the root edge do not count)."""

    def walk(nd: Node) -> int:
        if nd[0] == "W":
            return sum(1 + walk(c) if c[0] != "L" else 0 for c in nd[2])
        if nd[0] == "B":
            return sum(1 + walk(c) if c[0] != "L" else 0 for c in nd[1])
        return 0

    return walk(tree.root)
