"""Base-p digit combinatorics of dominant weights.

A dominant weight has a unique coordinatewise base-p expansion whose
digits are restricted weights (all coordinates in ``[0, p-1]``).  The
recursions elsewhere in the package only ever touch weights through these
digits, their tails, and digit surgery (grafting a new weight onto the
low digits).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .rootdata import Weight, weight_add, weight_scale


def _check_base(p: int) -> None:
    if p < 2:
        raise ValueError(f"base must be at least 2, got {p}")


def _check_dominant(lam: Weight) -> None:
    if any(c < 0 for c in lam):
        raise ValueError(f"dominant weight required, got {lam}")


@dataclass(frozen=True)
class DigitVector:
    """Finite list of base-p digits of a dominant weight, low digit first.

    Trailing zero digits are normalized away; the zero weight has no digits.
    """

    p: int
    digits: tuple[Weight, ...]

    def reconstruct(self) -> Weight:
        if not self.digits:
            raise ValueError("empty digit vector has no rank")
        rank = len(self.digits[0])
        total = (0,) * rank
        power = 1
        for d in self.digits:
            total = weight_add(total, weight_scale(power, d))
            power *= self.p
        return total

    def digit(self, k: int) -> Weight:
        if not self.digits:
            raise ValueError("empty digit vector")
        rank = len(self.digits[0])
        return self.digits[k] if k < len(self.digits) else (0,) * rank


def to_digits(lam: Weight, p: int) -> DigitVector:
    """Coordinatewise base-p expansion of a dominant weight."""
    _check_base(p)
    _check_dominant(lam)
    digits = []
    cur = lam
    while any(cur):
        digits.append(tuple(c % p for c in cur))
        cur = tuple(c // p for c in cur)
    return DigitVector(p, tuple(digits))


def digit(lam: Weight, k: int, p: int) -> Weight:
    """The k-th base-p digit of a dominant weight."""
    _check_base(p)
    _check_dominant(lam)
    q = p**k
    return tuple((c // q) % p for c in lam)


def digit_tail(lam: Weight, h: int, p: int) -> Weight:
    """Everything from digit ``h`` up: ``sum_j p^j * digit(lam, h+j)``."""
    _check_base(p)
    _check_dominant(lam)
    q = p**h
    return tuple(c // q for c in lam)


def digit_splice(lam: Weight, h: int, mu: Weight, p: int) -> Weight:
    """Low digits of ``lam`` below position ``h-1`` with ``mu`` grafted there.

    Returns ``lam^0 + p lam^1 + ... + p^(h-2) lam^(h-2) + p^(h-1) mu``;
    ``h = 1`` is full replacement by ``mu``.
    """
    if h < 1:
        raise ValueError("splice position must be >= 1")
    _check_base(p)
    _check_dominant(lam)
    _check_dominant(mu)
    q = p ** (h - 1)
    low = tuple(c % q for c in lam)
    return weight_add(low, weight_scale(q, mu))


def is_strictly_dominant(lam: Weight) -> bool:
    return all(c >= 1 for c in lam)


def top_digit_level(lam: Weight, p: int) -> int | None:
    """Index of the highest nonzero digit, or None for the zero weight."""
    dv = to_digits(lam, p)
    return len(dv.digits) - 1 if dv.digits else None


def in_strict_sector(lam: Weight, k: int, p: int) -> bool:
    """Digit ``k`` strictly dominant and all higher digits zero.

    Such weights are automatically strictly dominant (a test elsewhere
    asserts this); strictness of the top digit is the substantive part.
    """
    if k < 0:
        raise ValueError("digit index must be >= 0")
    _check_base(p)
    if not all(c >= 0 for c in lam):
        return False
    return top_digit_level(lam, p) == k and is_strictly_dominant(digit(lam, k, p))


def strict_sector_level(lam: Weight, p: int) -> int | None:
    """The unique ``k`` with ``in_strict_sector(lam, k, p)``, if any."""
    k = top_digit_level(lam, p)
    if k is not None and is_strictly_dominant(digit(lam, k, p)):
        return k
    return None


def iter_restricted(rank: int, p: int, strict: bool = False):
    """All restricted weights of the given rank, coordinates in [0, p-1]
    (or [1, p-1] when strict), in lexicographic order."""
    lo = 1 if strict else 0
    yield from product(range(lo, p), repeat=rank)


def iter_strict_sector(rank: int, p: int, k: int):
    """All weights whose top digit sits strictly dominant at position ``k``."""
    _check_base(p)
    if k < 0:
        raise ValueError("digit index must be >= 0")
    lower = [iter_restricted(rank, p) for _ in range(k)]
    for parts in product(*([list(g) for g in lower] + [list(iter_restricted(rank, p, strict=True))])):
        total = (0,) * rank
        power = 1
        for d in parts:
            total = weight_add(total, weight_scale(power, d))
            power *= p
        yield total
