"""Sparse integer group ring of the weight lattice and Weyl characters.

A ``GroupRingElement`` is a finitely supported integer combination of
basis symbols ``e^lam`` indexed by weights; products convolve exponents.
Weyl characters are produced by exact division of antisymmetrized orbit
sums, and invariant elements are expanded in a character basis by greedy
triangular elimination against a total order refining dominance.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Callable

from .rootdata import RootSystem, Weight, weight_add, weight_sub

_DIVISION_STEP_CAP = 4_000_000


class ExpansionError(ValueError):
    """Basis expansion stalled or the input failed an invariance check."""


class ExactDivisionError(ArithmeticError):
    """The requested group-ring quotient does not exist."""


class GroupRingElement:
    """Finitely supported map weight -> nonzero integer coefficient.

    Treat instances as immutable; all arithmetic returns new objects.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms=()):
        data: dict[Weight, int] = {}
        items = terms.items() if isinstance(terms, dict) else terms
        for w, c in items:
            if c:
                w = tuple(w)
                nc = data.get(w, 0) + c
                if nc:
                    data[w] = nc
                else:
                    del data[w]
        self._terms = data

    # -- access -----------------------------------------------------------

    def items(self):
        return self._terms.items()

    def support(self):
        return self._terms.keys()

    def coefficient(self, w: Weight) -> int:
        return self._terms.get(tuple(w), 0)

    def dimension(self) -> int:
        """Sum of all coefficients (the dimension of a genuine character)."""
        return sum(self._terms.values())

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other) -> bool:
        return isinstance(other, GroupRingElement) and self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    # -- ring operations ----------------------------------------------------

    def __add__(self, other: "GroupRingElement") -> "GroupRingElement":
        out = dict(self._terms)
        for w, c in other._terms.items():
            nc = out.get(w, 0) + c
            if nc:
                out[w] = nc
            else:
                del out[w]
        res = GroupRingElement.__new__(GroupRingElement)
        res._terms = out
        return res

    def __neg__(self) -> "GroupRingElement":
        res = GroupRingElement.__new__(GroupRingElement)
        res._terms = {w: -c for w, c in self._terms.items()}
        return res

    def __sub__(self, other: "GroupRingElement") -> "GroupRingElement":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            if other == 0:
                return GroupRingElement()
            res = GroupRingElement.__new__(GroupRingElement)
            res._terms = {w: other * c for w, c in self._terms.items()}
            return res
        small, big = (self._terms, other._terms)
        if len(small) > len(big):
            small, big = big, small
        out: dict[Weight, int] = {}
        for w1, c1 in small.items():
            for w2, c2 in big.items():
                w = weight_add(w1, w2)
                nc = out.get(w, 0) + c1 * c2
                if nc:
                    out[w] = nc
                else:
                    del out[w]
        res = GroupRingElement.__new__(GroupRingElement)
        res._terms = out
        return res

    def __rmul__(self, other):
        return self.__mul__(other)

    def __repr__(self) -> str:
        items = sorted(self._terms.items())
        shown = ", ".join(f"{w}:{c}" for w, c in items[:6])
        more = f", ...({len(items)} terms)" if len(items) > 6 else ""
        return f"GroupRingElement({{{shown}{more}}})"


def monomial(w: Weight, c: int = 1) -> GroupRingElement:
    return GroupRingElement([(tuple(w), c)])


def one(rank: int) -> GroupRingElement:
    return monomial((0,) * rank)


def frobenius_twist(f: GroupRingElement, h: int, p: int) -> GroupRingElement:
    """Scale every exponent by p^h; coefficients unchanged."""
    if p < 2:
        raise ValueError("base must be at least 2")
    if h < 0:
        raise ValueError("twist exponent must be nonnegative")
    if h == 0:
        return f
    q = p**h
    res = GroupRingElement.__new__(GroupRingElement)
    res._terms = {tuple(q * x for x in w): c for w, c in f.items()}
    return res


def apply_matrix(f: GroupRingElement, matrix) -> GroupRingElement:
    """Transform every exponent by an integer matrix."""
    res = GroupRingElement.__new__(GroupRingElement)
    res._terms = {
        tuple(sum(row[k] * w[k] for k in range(len(w))) for row in matrix): c
        for w, c in f.items()
    }
    return res


def is_invariant(rs: RootSystem, f: GroupRingElement) -> bool:
    """Fixed by every simple reflection (hence by the whole Weyl group)."""
    return all(
        apply_matrix(f, s.matrix) == f for s in rs.weyl_group.simple_reflections
    )


def antisymmetrize(rs: RootSystem, zeta: Weight) -> GroupRingElement:
    """Signed orbit sum of ``zeta`` over the Weyl group."""
    return GroupRingElement(
        [(w.apply(tuple(zeta)), w.sign) for w in rs.weyl_group.elements]
    )


def _order_key(rs: RootSystem, w: Weight):
    # Total order refining dominance: scaled height first, then coordinates.
    return (-rs.height_key(w), tuple(-c for c in w))


def _exact_divide(rs: RootSystem, numerator: GroupRingElement,
                  denominator: GroupRingElement, den_top: Weight) -> GroupRingElement:
    """Quotient ``numerator / denominator`` where the denominator has
    order-maximal term ``e^den_top`` with coefficient 1."""
    rem = dict(numerator.items())
    heap = [(_order_key(rs, w), w) for w in rem]
    heapq.heapify(heap)
    quotient: dict[Weight, int] = {}
    steps = 0
    den_items = list(denominator.items())
    while heap:
        _, w = heapq.heappop(heap)
        c = rem.get(w, 0)
        if not c:
            continue
        steps += 1
        if steps > _DIVISION_STEP_CAP:
            raise ExactDivisionError("division does not terminate; not divisible")
        q = weight_sub(w, den_top)
        quotient[q] = quotient.get(q, 0) + c
        for dw, dc in den_items:
            u = weight_add(q, dw)
            nc = rem.get(u, 0) - c * dc
            if nc:
                rem[u] = nc
                heapq.heappush(heap, (_order_key(rs, u), u))
            else:
                rem.pop(u, None)
    if any(rem.values()):
        raise ExactDivisionError("nonzero remainder; not divisible")
    res = GroupRingElement.__new__(GroupRingElement)
    res._terms = {w: c for w, c in quotient.items() if c}
    return res


_weyl_denominator_cache: dict = {}
_weyl_character_cache: dict = {}


def weyl_denominator(rs: RootSystem) -> GroupRingElement:
    den = _weyl_denominator_cache.get(rs.key)
    if den is None:
        den = antisymmetrize(rs, rs.rho)
        _weyl_denominator_cache[rs.key] = den
    return den


def weyl_character(rs: RootSystem, zeta: Weight) -> GroupRingElement:
    """The irreducible Weyl character with strictly dominant index ``zeta``.

    This is the exact quotient of the signed orbit sum of ``zeta`` by the
    one of ``rho``; the result is Weyl-invariant with unique top term
    ``e^(zeta - rho)``.  The quotient is verified by multiplying back.
    """
    zeta = tuple(zeta)
    if not rs.is_strictly_dominant(zeta):
        raise ValueError(f"strictly dominant weight required, got {zeta}")
    cached = _weyl_character_cache.get((rs.key, zeta))
    if cached is not None:
        return cached
    den = weyl_denominator(rs)
    num = antisymmetrize(rs, zeta)
    quot = _exact_divide(rs, num, den, rs.rho)
    if quot * den != num:
        raise ExactDivisionError("verification failed: quotient times denominator")
    _weyl_character_cache[(rs.key, zeta)] = quot
    return quot


@dataclass(frozen=True)
class CharacterExpansion:
    """Integer coefficients of an invariant element in a character basis.

    ``basis`` is ``"weyl"`` or ``"quantum"``; keys are the strictly
    dominant indices of the basis characters.
    """

    basis: str
    coefficients: tuple[tuple[Weight, int], ...]

    @classmethod
    def from_dict(cls, basis: str, coeffs: dict[Weight, int]) -> "CharacterExpansion":
        return cls(basis, tuple(sorted((w, c) for w, c in coeffs.items() if c)))

    def as_dict(self) -> dict[Weight, int]:
        return dict(self.coefficients)

    def __len__(self) -> int:
        return len(self.coefficients)


def expand_in_basis(
    rs: RootSystem,
    f: GroupRingElement,
    supplier: Callable[[Weight], GroupRingElement],
    basis: str,
    check_invariance: bool = True,
) -> CharacterExpansion:
    """Greedy triangular expansion of an invariant element.

    ``supplier(zeta)`` must return the basis character indexed by the
    strictly dominant weight ``zeta``, whose order-maximal term is
    ``e^(zeta - rho)`` with coefficient 1.  Coefficients may be negative;
    a non-dominant maximal support weight signals corrupt input.
    """
    if check_invariance and not is_invariant(rs, f):
        raise ExpansionError("input is not Weyl-invariant")
    rem = dict(f.items())
    heap = [(_order_key(rs, w), w) for w in rem]
    heapq.heapify(heap)
    out: dict[Weight, int] = {}
    steps = 0
    while heap:
        _, w = heapq.heappop(heap)
        c = rem.get(w, 0)
        if not c:
            continue
        steps += 1
        if steps > _DIVISION_STEP_CAP:
            raise ExpansionError("expansion does not terminate")
        if not rs.is_dominant(w):
            raise ExpansionError(f"maximal support weight {w} is not dominant")
        zeta = weight_add(w, rs.rho)
        basis_elt = supplier(zeta)
        if basis_elt.coefficient(w) != 1:
            raise ExpansionError(f"basis character at {zeta} lacks unit top term")
        out[zeta] = out.get(zeta, 0) + c
        for bw, bc in basis_elt.items():
            nc = rem.get(bw, 0) - c * bc
            if nc:
                rem[bw] = nc
                heapq.heappush(heap, (_order_key(rs, bw), bw))
            else:
                rem.pop(bw, None)
    return CharacterExpansion.from_dict(basis, out)


def expand_weyl_basis(rs: RootSystem, f: GroupRingElement,
                      check_invariance: bool = True) -> CharacterExpansion:
    """Expansion in the basis of Weyl characters."""
    return expand_in_basis(
        rs, f, lambda zeta: weyl_character(rs, zeta), "weyl", check_invariance
    )
