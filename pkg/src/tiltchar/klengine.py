"""Kazhdan-Lusztig combinatorics for the affine Weyl group.

Computes ordinary KL polynomials by the classical recursion (organized by
columns ``P_{., w}``), antispherical parabolic KL polynomials as signed
sums of ordinary ones over the finite Weyl group, and the dictionary
between strictly dominant weights and alcoves of the p-dilated affine
reflection arrangement.  Evaluating antispherical polynomials at 1 along
that dictionary yields the Weyl-basis multiplicities of quantum tilting
characters; the tensor-factorization recursion elsewhere cross-checks the
convention.

Polynomials in q are stored as integer tuples indexed by degree.
"""

from __future__ import annotations

import json
import os
from collections import OrderedDict
from dataclasses import dataclass
from fractions import Fraction

from .rootdata import AffineWeyl, AffineWeylElement, RootSystem, Weight

_DEFAULT_CACHE_SIZE = 200_000
_CACHE_ENV = "TILTCHAR_CACHE_SIZE"


class LengthBoundExceeded(RuntimeError):
    """Resource guard: the recursion would leave the configured length ball."""


class WallWeight(ValueError):
    """The weight lies on a reflection wall; no alcove is attached to it."""


class NotMinimalCoset(ValueError):
    """Antispherical polynomials need minimal-length coset representatives."""


class TableValidationError(ValueError):
    """A loaded multiplicity table violates its invariants."""


# -- polynomial helpers (tuples indexed by degree) -----------------------------

def _trim(c: list[int]) -> tuple[int, ...]:
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _padd(a, b):
    n = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)
                  for i in range(n)])


def _psub_scaled_shift(a, coeff: int, shift: int, b):
    """a - coeff * q^shift * b."""
    n = max(len(a), shift + len(b))
    out = [(a[i] if i < len(a) else 0) for i in range(n)]
    for i, c in enumerate(b):
        out[shift + i] -= coeff * c
    return _trim(out)


def _pshift(a, k: int):
    return tuple([0] * k + list(a)) if a else ()


@dataclass(frozen=True)
class KLPolynomial:
    """A single KL (or parabolic KL) polynomial in q."""

    coeffs: tuple[int, ...]

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def constant_term(self) -> int:
        return self.coeffs[0] if self.coeffs else 0

    def at_one(self) -> int:
        return sum(self.coeffs)

    def __call__(self, v: int) -> int:
        return sum(c * v**i for i, c in enumerate(self.coeffs))


class KLEngine:
    """KL polynomials and alcove data for one root system.

    The engine is independent of p except for the weight-alcove dictionary,
    whose methods take p explicitly.  Column results are memoized in an LRU
    cache (size from the TILTCHAR_CACHE_SIZE environment variable when set).
    """

    def __init__(self, root_system: RootSystem, length_bound: int = 128,
                 cache_size: int | None = None):
        self.rs = root_system
        self.affine = AffineWeyl(root_system)
        self.length_bound = length_bound
        if cache_size is None:
            cache_size = int(os.environ.get(_CACHE_ENV, _DEFAULT_CACHE_SIZE))
        self.cache_size = max(cache_size, 16)
        self._columns: OrderedDict = OrderedDict()
        # Finite Weyl group as affine transforms, with signs, for the
        # alternating sums defining antispherical polynomials.
        zero = (0,) * root_system.rank
        self._finite = tuple(
            (w.sign, (w.matrix, zero)) for w in root_system.weyl_group.elements
        )
        self._alcove_cache: dict = {}

    # -- ordinary KL polynomials -----------------------------------------------

    def kl_column(self, w: AffineWeylElement) -> dict[AffineWeylElement, tuple[int, ...]]:
        """All nonzero P_{y,w} as polynomial tuples, keyed by y."""
        aff = self.affine
        cached = self._columns.get(w)
        if cached is not None:
            self._columns.move_to_end(w)
            return cached
        if w.length > self.length_bound:
            raise LengthBoundExceeded(
                f"KL recursion needs length {w.length} > bound {self.length_bound}"
            )
        if w.length == 0:
            col = {aff.identity: (1,)}
        else:
            s = w.word[0]
            v = aff.left_multiply(s, w)
            colv = self.kl_column(v)
            # mu-terms of the column at v whose left descents include s.
            mus = []
            for z, poly in colv.items():
                gap = v.length - z.length
                if gap % 2 == 1 and len(poly) - 1 == (gap - 1) // 2:
                    if aff.left_multiply(s, z).length < z.length:
                        mus.append((z, poly[-1], self.kl_column(z)))
            candidates = set(colv)
            candidates.update(aff.left_multiply(s, y) for y in colv)
            col = {}
            for y in sorted(candidates, key=lambda e: (-e.length, e.word)):
                sy = aff.left_multiply(s, y)
                if sy.length < y.length:
                    poly = _padd(colv.get(sy, ()), _pshift(colv.get(y, ()), 1))
                    for z, mu, colz in mus:
                        pyz = colz.get(y)
                        if pyz:
                            poly = _psub_scaled_shift(
                                poly, mu, (w.length - z.length) // 2, pyz
                            )
                else:
                    poly = col.get(sy, ())
                if poly:
                    col[y] = poly
        self._columns[w] = col
        if len(self._columns) > self.cache_size:
            self._columns.popitem(last=False)
        return col

    def kl_polynomial(self, y: AffineWeylElement, w: AffineWeylElement) -> KLPolynomial:
        """P_{y,w}: unit at y = w, zero unless y <= w in Bruhat order."""
        return KLPolynomial(self.kl_column(w).get(y, ()))

    def mu(self, z: AffineWeylElement, w: AffineWeylElement) -> int:
        """Coefficient of q^((l(w)-l(z)-1)/2) in P_{z,w}."""
        gap = w.length - z.length
        if gap <= 0 or gap % 2 == 0:
            return 0
        poly = self.kl_column(w).get(z, ())
        deg = (gap - 1) // 2
        return poly[deg] if len(poly) > deg else 0

    # -- antispherical polynomials ----------------------------------------------

    def antispherical_kl(self, y: AffineWeylElement, w: AffineWeylElement) -> KLPolynomial:
        """Parabolic KL polynomial of antispherical type for minimal reps.

        Computed as the alternating sum of ordinary KL polynomials over the
        finite Weyl group acting on the left of y.
        """
        aff = self.affine
        if not aff.is_minimal_representative(y):
            raise NotMinimalCoset(f"{y} has a finite left descent")
        if not aff.is_minimal_representative(w):
            raise NotMinimalCoset(f"{w} has a finite left descent")
        col = self.kl_column(w)
        acc: tuple[int, ...] = ()
        ty = aff.transform_of(y)
        for sign, vt in self._finite:
            vy = aff.element_of_transform(aff.compose(vt, ty))
            poly = col.get(vy)
            if poly:
                acc = _padd(acc, poly if sign > 0 else tuple(-c for c in poly))
        return KLPolynomial(acc)

    # -- weight/alcove dictionary -------------------------------------------------

    def _locate(self, zeta: Weight, p: int):
        key = (tuple(zeta), p)
        hit = self._alcove_cache.get(key)
        if hit is not None:
            return hit
        rs = self.rs
        zeta = tuple(zeta)
        if not rs.is_strictly_dominant(zeta):
            raise ValueError(f"strictly dominant weight required, got {zeta}")
        if not rs.is_regular(zeta, p):
            raise WallWeight(f"{zeta} lies on a wall of the p={p} arrangement")
        point = tuple(Fraction(c, p) for c in zeta)
        word, rep = self.affine.walk_to_fundamental(point)
        if len(word) > self.length_bound:
            raise LengthBoundExceeded(
                f"alcove of {zeta} has length {len(word)} > bound {self.length_bound}"
            )
        elt = self.affine.normal_form(word)
        self._alcove_cache[key] = (elt, rep)
        return elt, rep

    def weight_to_alcove(self, zeta: Weight, p: int) -> AffineWeylElement:
        """Minimal coset representative whose alcove contains ``zeta/p``.

        Dominant regular weights land on minimal representatives
        automatically; wall weights are rejected.
        """
        return self._locate(zeta, p)[0]

    def linkage_point(self, zeta: Weight, p: int):
        """Fundamental-alcove representative of the linkage class of ``zeta``."""
        return self._locate(zeta, p)[1]

    # -- quantum tilting multiplicities ---------------------------------------------

    def quantum_multiplicity_row(self, zeta: Weight, p: int) -> dict[Weight, int]:
        """Weyl-basis multiplicities of the quantum tilting character at ``zeta``.

        ``zeta`` must be strictly dominant and regular; the row collects the
        antispherical polynomials at 1 over all linked strictly dominant
        regular weights below ``zeta``.
        """
        zeta = tuple(zeta)
        w, rep = self._locate(zeta, p)
        col = self.kl_column(w)  # warm the cache for the whole row
        row: dict[Weight, int] = {}
        for mu in self.rs.dominant_below(zeta, strict=True):
            if not self.rs.is_regular(mu, p):
                continue
            y, rep_mu = self._locate(mu, p)
            if rep_mu != rep:
                continue
            value = self.antispherical_kl(y, w).at_one()
            if value < 0:
                raise RuntimeError(
                    f"negative multiplicity {value} at {mu}; convention violated"
                )
            if value:
                row[mu] = value
        return row


# -- serialized multiplicity tables ------------------------------------------------


@dataclass
class MultiplicityTable:
    """Rows of quantum-character multiplicities, indexed by strictly
    dominant weights, with provenance."""

    cartan_type: str
    p: int
    rows: dict[Weight, dict[Weight, int]]
    provenance: str = "computed"

    def row(self, zeta: Weight) -> dict[Weight, int] | None:
        return self.rows.get(tuple(zeta))

    def to_payload(self) -> dict:
        entries = []
        for zeta in sorted(self.rows):
            for mu in sorted(self.rows[zeta]):
                entries.append(
                    {"zeta": list(zeta), "mu": list(mu), "x": self.rows[zeta][mu]}
                )
        return {"type": self.cartan_type, "p": self.p, "entries": entries}

    def to_json(self) -> str:
        return json.dumps(self.to_payload(), sort_keys=True, indent=2)

    @classmethod
    def from_payload(cls, payload: dict, rs: RootSystem) -> "MultiplicityTable":
        try:
            label = payload["type"]
            p = int(payload["p"])
            entries = payload["entries"]
        except (KeyError, TypeError) as exc:
            raise TableValidationError(f"malformed multiplicity table: {exc}") from exc
        if label != rs.cartan_type:
            raise TableValidationError(
                f"table type {label!r} does not match root system {rs.cartan_type!r}"
            )
        rows: dict[Weight, dict[Weight, int]] = {}
        for entry in entries:
            zeta = tuple(int(c) for c in entry["zeta"])
            mu = tuple(int(c) for c in entry["mu"])
            value = int(entry["x"])
            if len(zeta) != rs.rank or len(mu) != rs.rank:
                raise TableValidationError("weight length does not match rank")
            if value < 0:
                raise TableValidationError("negative multiplicity entry")
            rows.setdefault(zeta, {})[mu] = value
        table = cls(label, p, rows, provenance="loaded")
        table.validate(rs)
        return table

    @classmethod
    def from_json(cls, text: str, rs: RootSystem) -> "MultiplicityTable":
        return cls.from_payload(json.loads(text), rs)

    def validate(self, rs: RootSystem) -> None:
        for zeta, row in self.rows.items():
            if not rs.is_strictly_dominant(zeta):
                raise TableValidationError(f"row index {zeta} not strictly dominant")
            if row.get(zeta) != 1:
                raise TableValidationError(f"row at {zeta} lacks unit diagonal")
            for mu, value in row.items():
                if value < 0:
                    raise TableValidationError("negative multiplicity entry")
                if not rs.is_strictly_dominant(mu):
                    raise TableValidationError(f"column index {mu} not strictly dominant")
                if not rs.dominance_leq(mu, zeta):
                    raise TableValidationError(
                        f"entry at ({mu}, {zeta}) violates support triangularity"
                    )
