"""Integer-coefficient formal sums of basis objects.

Basis objects only need to be hashable; paths, trees and words all qualify.
Zero coefficients are never stored, so equality of sums is dict equality and
an identity that "cancels to zero" really produces the empty sum.
"""

from __future__ import annotations

from typing import Callable, Iterator


def ksign(exponent: int) -> int:
    """(-1)**exponent as an exact integer, valid for negative exponents
    (cochain degrees can be -1)."""
    return -1 if exponent % 2 else 1


class FormalSum:
    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms: dict = {}
        if terms:
            for basis, coeff in terms.items() if isinstance(terms, dict) else terms:
                if coeff:
                    new = self.terms.get(basis, 0) + coeff
                    if new:
                        self.terms[basis] = new
                    else:
                        del self.terms[basis]

    @classmethod
    def zero(cls) -> "FormalSum":
        return cls()

    @classmethod
    def basis(cls, basis, coeff: int = 1) -> "FormalSum":
        s = cls()
        if coeff:
            s.terms[basis] = coeff
        return s

    def __iter__(self) -> Iterator:
        return iter(self.terms.items())

    def __len__(self) -> int:
        return len(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        return isinstance(other, FormalSum) and self.terms == other.terms

    def __hash__(self):
        raise TypeError("FormalSum is mutable-backed; not hashable")

    def coeff(self, basis) -> int:
        return self.terms.get(basis, 0)

    def add_term(self, basis, coeff: int) -> None:
        # In-place accumulation; used by the hot loops that build sums.
        if not coeff:
            return
        new = self.terms.get(basis, 0) + coeff
        if new:
            self.terms[basis] = new
        else:
            del self.terms[basis]

    def __add__(self, other: "FormalSum") -> "FormalSum":
        out = FormalSum(dict(self.terms))
        for basis, coeff in other.terms.items():
            out.add_term(basis, coeff)
        return out

    def __sub__(self, other: "FormalSum") -> "FormalSum":
        out = FormalSum(dict(self.terms))
        for basis, coeff in other.terms.items():
            out.add_term(basis, -coeff)
        return out

    def __neg__(self) -> "FormalSum":
        return FormalSum({b: -c for b, c in self.terms.items()})

    def __rmul__(self, scalar: int) -> "FormalSum":
        if not scalar:
            return FormalSum()
        return FormalSum({b: scalar * c for b, c in self.terms.items()})

    __mul__ = __rmul__

    def bind(self, fn: Callable) -> "FormalSum":
        """Linear extension of a basis-level map.

        ``fn`` sends a basis object to a FormalSum (or an iterable of
        ``(basis, coeff)`` pairs); coefficients multiply and cancel exactly.
        """
        out = FormalSum()
        for basis, coeff in self.terms.items():
            image = fn(basis)
            pairs = image.terms.items() if isinstance(image, FormalSum) else image
            for b, c in pairs:
                out.add_term(b, coeff * c)
        return out

    def map_basis(self, fn: Callable) -> "FormalSum":
        """Linear extension of a basis-to-basis map (may merge terms)."""
        out = FormalSum()
        for basis, coeff in self.terms.items():
            out.add_term(fn(basis), coeff)
        return out

    def sorted_terms(self, key=str) -> list:
        return sorted(self.terms.items(), key=lambda item: key(item[0]))

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*{b}" for b, c in self.sorted_terms())
