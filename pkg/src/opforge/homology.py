"""Finite degree windows of the path/tree chain complexes and their integer
homology via Smith normal form.

All arithmetic is exact: Python integers, no floating point anywhere.  The
solver diagonalizes by gcd-elimination with a fill-reducing pivot choice and
then normalizes the diagonal into a divisibility chain, which is enough to
read off ranks and torsion.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import gcd

from .errors import DomainError
from .formal import FormalSum
from .operad import normalize
from .paths import (
    ColourSignature,
    MarkedLatticePath,
    enumerate_paths,
    format_path,
    has_internal_point,
)
from .simplicial import boundary_terms, total_differential


@dataclass
class SparseIntMatrix:
    rows: int
    cols: int
    entries: dict = field(default_factory=dict)  # (row, col) -> nonzero int

    def add(self, r: int, c: int, v: int) -> None:
        if not v:
            return
        key = (r, c)
        new = self.entries.get(key, 0) + v
        if new:
            self.entries[key] = new
        else:
            del self.entries[key]

    def multiply(self, other: "SparseIntMatrix") -> "SparseIntMatrix":
        """Matrix product self * other."""
        if self.cols != other.rows:
            raise DomainError("matrix shape mismatch")
        by_col: dict[int, list] = {}
        for (r, c), v in self.entries.items():
            by_col.setdefault(c, []).append((r, v))
        out = SparseIntMatrix(self.rows, other.cols)
        for (k, j), w in other.entries.items():
            for i, v in by_col.get(k, ()):
                out.add(i, j, v * w)
        return out

    def is_zero(self) -> bool:
        return not self.entries


def smith_normal_form(matrix: SparseIntMatrix) -> tuple[list[int], int]:
    """Invariant factors (d_1 | d_2 | ...) and the rank.

    Gcd-elimination with Markowitz-style pivoting; the cleared diagonal is
    normalized into a divisibility chain afterwards (pairwise gcd/lcm), which
    yields the same invariant factors.
    """
    rows: dict[int, dict[int, int]] = {}
    col_index: dict[int, set[int]] = {}
    for (r, c), v in matrix.entries.items():
        rows.setdefault(r, {})[c] = v
        col_index.setdefault(c, set()).add(r)

    def drop(r, c):
        del rows[r][c]
        if not rows[r]:
            del rows[r]
        col_index[c].discard(r)
        if not col_index[c]:
            del col_index[c]

    def put(r, c, v):
        if v:
            rows.setdefault(r, {})[c] = v
            col_index.setdefault(c, set()).add(r)
        elif c in rows.get(r, {}):
            drop(r, c)

    def row_combine(r1, r2, a, b, c_, d_):
        # (row r1, row r2) <- (a*r1 + b*r2, c*r1 + d*r2), unimodular
        cols = set(rows.get(r1, {})) | set(rows.get(r2, {}))
        v1 = dict(rows.get(r1, {}))
        v2 = dict(rows.get(r2, {}))
        for col in cols:
            x, y = v1.get(col, 0), v2.get(col, 0)
            put(r1, col, a * x + b * y)
            put(r2, col, c_ * x + d_ * y)

    def col_combine(c1, c2, a, b, c_, d_):
        rws = (col_index.get(c1, set()) | col_index.get(c2, set())).copy()
        for r in rws:
            x = rows.get(r, {}).get(c1, 0)
            y = rows.get(r, {}).get(c2, 0)
            put(r, c1, a * x + b * y)
            put(r, c2, c_ * x + d_ * y)

    def xgcd(a, b):
        x0, x1, y0, y1 = 1, 0, 0, 1
        while b:
            q, a, b = a // b, b, a % b
            x0, x1 = x1, x0 - q * x1
            y0, y1 = y1, y0 - q * y1
        return a, x0, y0

    diagonal: list[int] = []
    while rows:
        # pivot: smallest magnitude, then least fill
        best = None
        for r, cols in rows.items():
            for c, v in cols.items():
                score = (abs(v), (len(cols) - 1) * (len(col_index[c]) - 1))
                if best is None or score < best[0]:
                    best = (score, r, c)
                    if score == (1, 0):
                        break
            if best and best[0] == (1, 0):
                break
        _, pr, pc = best
        while True:
            # clear the pivot column with unimodular row operations
            changed = False
            for r in list(col_index.get(pc, ())):
                if r == pr:
                    continue
                a = rows[pr][pc]
                b = rows[r][pc]
                if b % a == 0:
                    q = b // a
                    row_combine(pr, r, 1, 0, -q, 1)
                else:
                    g, x, y = xgcd(a, b)
                    row_combine(pr, r, x, y, -(b // g), a // g)
                changed = True
            for c in list(rows.get(pr, {})):
                if c == pc:
                    continue
                a = rows[pr][pc]
                b = rows[pr][c]
                if b % a == 0:
                    q = b // a
                    col_combine(pc, c, 1, 0, -q, 1)
                else:
                    g, x, y = xgcd(a, b)
                    col_combine(pc, c, x, y, -(b // g), a // g)
                changed = True
            if not changed:
                break
        diagonal.append(abs(rows[pr][pc]))
        drop(pr, pc)

    # normalize into a divisibility chain
    diagonal.sort()
    done = False
    while not done:
        done = True
        for i in range(len(diagonal)):
            for j in range(i + 1, len(diagonal)):
                a, b = diagonal[i], diagonal[j]
                if b % a:
                    g = gcd(a, b)
                    diagonal[i], diagonal[j] = g, a * b // g
                    done = False
        diagonal.sort()
    return diagonal, len(diagonal)


def rank(matrix: SparseIntMatrix) -> int:
    return smith_normal_form(matrix)[1]


@dataclass
class ChainWindow:
    description: str
    degrees: list[int]  # degrees with valid homology
    basis: dict  # degree -> list of basis paths (materialized range)
    matrices: dict  # degree -> SparseIntMatrix for d: C_deg -> C_(deg+1)

    def basis_size(self, degree: int) -> int:
        return len(self.basis.get(degree, []))


def _signatures_with_total(n: int, total: int):
    for ks in itertools.product(range(total + 1), repeat=n):
        if sum(ks) == total:
            yield ks


def _brac_basis(c: int, n: int, total_colour: int, normalized: bool):
    out = []
    for ks in _signatures_with_total(n, total_colour):
        for p in enumerate_paths(ColourSignature(ks, 0), c):
            if normalized and has_internal_point(p):
                continue
            out.append(p)
    return out


def _column_basis(c: int, n: int, l: int, total_colour: int):
    out = []
    for ks in _signatures_with_total(n, total_colour):
        out.extend(enumerate_paths(ColourSignature(ks, l), c))
    return out


def _matrix_from(basis_src, basis_dst, image) -> SparseIntMatrix:
    index = {p: i for i, p in enumerate(basis_dst)}
    m = SparseIntMatrix(len(basis_dst), len(basis_src))
    for j, p in enumerate(basis_src):
        for q, coeff in image(p):
            m.add(index[q], j, coeff)
    return m


def build_window(
    model: str,
    c: int,
    n: int,
    degree_lo: int,
    degree_hi: int,
    l_bound: int | None = None,
) -> ChainWindow:
    """Materialize a contiguous degree range of one chain complex.

    Models: ``brac`` (unmarked paths, degree -sum(k)), ``nbrac`` (its
    internal-point-free normalization), ``column`` (marked paths of fixed
    output colour ``l_bound``, simplicial differential only), ``total``
    (all output colours up to ``l_bound``, total differential, truncation by
    the colour bound is a quotient complex).  The window is extended by one
    degree on each side so homology is valid on the whole requested range.
    """
    if degree_lo > degree_hi:
        raise DomainError("empty degree window")
    lo, hi = degree_lo - 1, degree_hi + 1

    basis: dict[int, list] = {}
    if model in ("brac", "nbrac"):
        for d in range(lo, hi + 1):
            basis[d] = [] if d > 0 else _brac_basis(c, n, -d, model == "nbrac")

        def image(p):
            img = FormalSum()
            for q, coeff in boundary_terms(p):
                img.add_term(q, coeff)
            if model == "nbrac":
                img = normalize(img)
            return img

    elif model == "column":
        if l_bound is None:
            raise DomainError("column model needs the output colour (l_bound)")
        for d in range(lo, hi + 1):
            basis[d] = [] if d > 0 else _column_basis(c, n, l_bound, -d)

        def image(p):
            img = FormalSum()
            for q, coeff in boundary_terms(p):
                img.add_term(q, coeff)
            return img

    elif model == "total":
        if l_bound is None:
            raise DomainError("total model needs an output colour bound")
        for d in range(lo, hi + 1):
            basis[d] = []
            for l in range(l_bound + 1):
                total_colour = l - d
                if total_colour < 0:
                    continue
                basis[d].extend(_column_basis(c, n, l, total_colour))

        def image(p):
            img = FormalSum()
            for q, coeff in total_differential(p):
                if q.signature.output <= l_bound:
                    img.add_term(q, coeff)
            return img

    else:
        raise DomainError(f"unknown window model {model!r}")

    matrices = {}
    for d in range(lo, hi):
        matrices[d] = _matrix_from(basis[d], basis[d + 1], image)
    for d in range(lo, hi - 1):
        if not matrices[d + 1].multiply(matrices[d]).is_zero():
            raise DomainError(f"boundary fails to square to zero at degree {d}")
    return ChainWindow(
        description=f"{model}(c={c}, n={n})"
        + (f", l<={l_bound}" if l_bound is not None else ""),
        degrees=list(range(degree_lo, degree_hi + 1)),
        basis=basis,
        matrices=matrices,
    )


def homology(window: ChainWindow, degree: int) -> tuple[int, list[int]]:
    """Betti rank and torsion factors at one interior degree of the window."""
    if degree not in window.degrees:
        raise DomainError(
            f"degree {degree} is at or beyond the window edge; "
            f"valid range {window.degrees[0]}..{window.degrees[-1]}"
        )
    out_m = window.matrices[degree]
    in_m = window.matrices[degree - 1]
    factors_in, rank_in = smith_normal_form(in_m)
    _, rank_out = smith_normal_form(out_m)
    betti = window.basis_size(degree) - rank_out - rank_in
    torsion = [f for f in factors_in if f > 1]
    return betti, torsion


def homology_table(window: ChainWindow) -> dict[int, tuple[int, list[int]]]:
    return {d: homology(window, d) for d in window.degrees}


def serialize_basis(window: ChainWindow, degree: int) -> list[str]:
    return [format_path(p) for p in window.basis.get(degree, [])]
