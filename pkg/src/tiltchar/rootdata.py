"""Root systems of rank <= 3, their Weyl groups, and the affine Weyl group.

Weights are plain integer tuples in fundamental-weight coordinates: entry
``i`` of a weight is its pairing with the ``i``-th simple coroot.  The
lattice is the full weight lattice (simply connected convention), so
addition and scaling are componentwise.  Everything here is exact: matrix
work uses integers or ``Fraction``, never floats.

Affine Weyl group elements are canonicalized reduced words in generators
``0..rank`` where index 0 is the affine reflection in the wall of the
highest coroot.  The canonical form is the ShortLex-minimal reduced word,
recovered by walking a generic point of the element's alcove back into the
fundamental alcove.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

Weight = tuple[int, ...]
Matrix = tuple[tuple[int, ...], ...]

CARTAN_TYPES: dict[str, Matrix] = {
    "A1": ((2,),),
    "A2": ((2, -1), (-1, 2)),
    "B2": ((2, -1), (-2, 2)),
    "C2": ((2, -2), (-1, 2)),
    "G2": ((2, -1), (-3, 2)),
}

# Positive-root counts for the named types (used as a construction check).
_POSITIVE_ROOT_COUNTS = {"A1": 1, "A2": 3, "B2": 4, "C2": 4, "G2": 6}

# The largest finite Weyl group in rank <= 3 is B3/C3 with 48 elements;
# blowing past this means the Cartan matrix is not of finite type.
_ORDER_CAP = 384
_ROOT_CAP = 64
_WALK_CAP = 100000


class RootDataError(ValueError):
    """Invalid Cartan data: wrong shape, wrong signs, or not finite type."""


def weight_add(a: Weight, b: Weight) -> Weight:
    return tuple(x + y for x, y in zip(a, b, strict=True))


def weight_sub(a: Weight, b: Weight) -> Weight:
    return tuple(x - y for x, y in zip(a, b, strict=True))


def weight_scale(c: int, a: Weight) -> Weight:
    return tuple(c * x for x in a)


def _mat_vec(m, v):
    return tuple(sum(row[k] * v[k] for k in range(len(v))) for row in m)


def _mat_mul(a, b):
    n = len(a)
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n))
        for i in range(n)
    )


def _identity_matrix(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def _invert_matrix(m) -> tuple[tuple[Fraction, ...], ...]:
    """Exact inverse by Gauss-Jordan elimination over Fraction."""
    n = len(m)
    aug = [[Fraction(m[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)]
           for i in range(n)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            raise RootDataError("singular Cartan matrix")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = Fraction(1) / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                factor = aug[r][col]
                aug[r] = [x - factor * y for x, y in zip(aug[r], aug[col])]
    return tuple(tuple(row[n:]) for row in aug)


@dataclass(frozen=True)
class WeylElement:
    """A finite Weyl group element: its matrix on fundamental coordinates."""

    matrix: Matrix
    length: int
    sign: int
    word: tuple[int, ...]

    def apply(self, lam: Weight) -> Weight:
        return _mat_vec(self.matrix, lam)


class WeylGroup:
    """Fully enumerated finite Weyl group acting on weight coordinates."""

    def __init__(self, root_system: "RootSystem"):
        self.root_system = root_system
        n = root_system.rank
        gens = [root_system.simple_reflection_matrix(i) for i in range(1, n + 1)]
        ident = WeylElement(_identity_matrix(n), 0, 1, ())
        elements = [ident]
        by_matrix = {ident.matrix: ident}
        frontier = [ident]
        while frontier:
            new_frontier = []
            for w in frontier:
                for i, g in enumerate(gens, start=1):
                    mat = _mat_mul(g, w.matrix)
                    if mat not in by_matrix:
                        elt = WeylElement(mat, w.length + 1, -w.sign, (i,) + w.word)
                        by_matrix[mat] = elt
                        new_frontier.append(elt)
                        if len(by_matrix) > _ORDER_CAP:
                            raise RootDataError("Weyl group is not finite; bad Cartan matrix")
            frontier = new_frontier
        self.elements: tuple[WeylElement, ...] = tuple(
            sorted(by_matrix.values(), key=lambda w: (w.length, w.word))
        )
        self._by_matrix = by_matrix
        self.identity = ident
        self.simple_reflections = tuple(by_matrix[g] for g in gens)

    def __len__(self) -> int:
        return len(self.elements)

    def multiply(self, a: WeylElement, b: WeylElement) -> WeylElement:
        return self._by_matrix[_mat_mul(a.matrix, b.matrix)]

    def orbit(self, lam: Weight) -> set[Weight]:
        return {w.apply(lam) for w in self.elements}

    def dominant_representative(self, lam: Weight) -> Weight:
        """The unique dominant weight in the orbit of ``lam``."""
        rs = self.root_system
        cur = lam
        while not rs.is_dominant(cur):
            i = next(k for k, c in enumerate(cur) if c < 0)
            cur = self.simple_reflections[i].apply(cur)
        return cur


class RootSystem:
    """Cartan matrix, positive roots and coroots, rho, and the Weyl group.

    ``cartan_type`` is one of the labels in ``CARTAN_TYPES`` or an explicit
    Cartan matrix (sequence of rows) of rank at most 3.
    """

    def __init__(self, cartan_type):
        if isinstance(cartan_type, str):
            label = cartan_type.upper()
            if label not in CARTAN_TYPES:
                raise RootDataError(f"unknown Cartan type {cartan_type!r}")
            matrix = CARTAN_TYPES[label]
        else:
            matrix = tuple(tuple(int(x) for x in row) for row in cartan_type)
            label = next((k for k, v in CARTAN_TYPES.items() if v == matrix), "custom")
        n = len(matrix)
        if n == 0 or n > 3 or any(len(row) != n for row in matrix):
            raise RootDataError("Cartan matrix must be square of rank 1..3")
        for i in range(n):
            if matrix[i][i] != 2:
                raise RootDataError("Cartan matrix diagonal must be 2")
            for j in range(n):
                if i != j and matrix[i][j] > 0:
                    raise RootDataError("off-diagonal Cartan entries must be <= 0")
                if i != j and (matrix[i][j] == 0) != (matrix[j][i] == 0):
                    raise RootDataError("Cartan matrix zero pattern must be symmetric")

        self.cartan_type = label
        self.cartan_matrix: Matrix = matrix
        self.rank = n
        self.rho: Weight = (1,) * n
        self._inverse_cartan = _invert_matrix(matrix)
        # Integer height functional: height scaled by det(A) > 0, which
        # orders weights exactly like the rational height.
        det = self._determinant()
        self._det = det
        self._height_vector = tuple(
            sum(self._inverse_cartan[a][i] * det for a in range(n)) for i in range(n)
        )
        if any(h.denominator != 1 for h in self._height_vector):
            raise RootDataError("non-integral adjugate; bad Cartan matrix")
        self._height_vector = tuple(int(h) for h in self._height_vector)

        self._generate_roots()
        if label in _POSITIVE_ROOT_COUNTS and len(self.positive_roots) != _POSITIVE_ROOT_COUNTS[label]:
            raise RootDataError("positive root count mismatch")
        self._weyl: WeylGroup | None = None

    # -- basic linear algebra ------------------------------------------------

    def _determinant(self) -> int:
        m = self.cartan_matrix
        n = self.rank
        if n == 1:
            return m[0][0]
        if n == 2:
            return m[0][0] * m[1][1] - m[0][1] * m[1][0]
        return (
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        )

    def simple_root(self, i: int) -> Weight:
        """Fundamental coordinates of the i-th simple root (1-indexed)."""
        return tuple(self.cartan_matrix[j][i - 1] for j in range(self.rank))

    def simple_reflection_matrix(self, i: int) -> Matrix:
        """Matrix of s_i on fundamental coordinates: lam -> lam - lam[i-1]*alpha_i."""
        n = self.rank
        alpha = self.simple_root(i)
        return tuple(
            tuple((1 if j == k else 0) - (alpha[j] if k == i - 1 else 0) for k in range(n))
            for j in range(n)
        )

    def _generate_roots(self) -> None:
        n = self.rank
        refl = [self.simple_reflection_matrix(i) for i in range(1, n + 1)]
        cart = self.cartan_matrix
        # Pairs (root in fundamental coordinates, coroot as a pairing functional
        # written in the basis of simple coroots).
        seeds = [(self.simple_root(i), tuple(int(k == i - 1) for k in range(n)))
                 for i in range(1, n + 1)]
        seen = set(seeds)
        frontier = list(seeds)
        while frontier:
            new_frontier = []
            for root, coroot in frontier:
                for j in range(n):
                    new_root = _mat_vec(refl[j], root)
                    pairing = sum(coroot[m] * cart[m][j] for m in range(n))
                    new_coroot = tuple(
                        c - pairing if k == j else c for k, c in enumerate(coroot)
                    )
                    pair = (new_root, new_coroot)
                    if pair not in seen:
                        seen.add(pair)
                        new_frontier.append(pair)
                        if len(seen) > _ROOT_CAP:
                            raise RootDataError("root system is not finite; bad Cartan matrix")
            frontier = new_frontier

        positive = []
        for root, coroot in seen:
            coords = self.root_coordinates(root)
            if all(c >= 0 for c in coords):
                if any(c.denominator != 1 for c in coords):
                    raise RootDataError("non-integral root coordinates")
                positive.append((tuple(int(c) for c in coords), root, coroot))
        positive.sort()
        self.positive_roots: tuple[Weight, ...] = tuple(p[0] for p in positive)
        self.positive_roots_fundamental: tuple[Weight, ...] = tuple(p[1] for p in positive)
        self.positive_coroots: tuple[Weight, ...] = tuple(p[2] for p in positive)

        # Highest coroot: the unique coroot dominating all others componentwise.
        highest = None
        for _, root, coroot in positive:
            if all(
                all(a - b >= 0 for a, b in zip(coroot, other))
                for _, _, other in positive
            ):
                highest = (root, coroot)
        if highest is None:
            raise RootDataError("no highest coroot; bad Cartan matrix")
        self.highest_short_root: Weight = highest[0]
        self.highest_coroot: Weight = highest[1]

    # -- pairings and orders ---------------------------------------------------

    def pair(self, lam: Weight, coroot_index: int) -> int:
        """Pairing of ``lam`` with the simple coroot ``coroot_index`` (1-indexed)."""
        if not 1 <= coroot_index <= self.rank:
            raise IndexError(f"coroot index {coroot_index} out of range 1..{self.rank}")
        return lam[coroot_index - 1]

    def coroot_pairing(self, coroot: Weight, lam: Weight) -> int:
        return sum(c * x for c, x in zip(coroot, lam, strict=True))

    def highest_coroot_pairing(self, lam: Weight) -> int:
        return self.coroot_pairing(self.highest_coroot, lam)

    def is_dominant(self, lam: Weight) -> bool:
        return all(c >= 0 for c in lam)

    def is_strictly_dominant(self, lam: Weight) -> bool:
        return all(c >= 1 for c in lam)

    def is_regular(self, lam: Weight, p: int) -> bool:
        """No positive-coroot pairing of ``lam`` divisible by ``p``."""
        return all(self.coroot_pairing(c, lam) % p != 0 for c in self.positive_coroots)

    def root_coordinates(self, lam: Weight) -> tuple[Fraction, ...]:
        """Coordinates of ``lam`` in the basis of simple roots (exact rationals)."""
        return tuple(
            sum(self._inverse_cartan[a][i] * lam[i] for i in range(self.rank))
            for a in range(self.rank)
        )

    def height_key(self, lam: Weight) -> int:
        """Integer functional ordering weights compatibly with dominance."""
        return sum(h * x for h, x in zip(self._height_vector, lam))

    def dominance_leq(self, mu: Weight, lam: Weight) -> bool:
        """True iff lam - mu is a nonnegative integer combination of positive roots."""
        diff = weight_sub(lam, mu)
        for c in self.root_coordinates(diff):
            if c.denominator != 1 or c < 0:
                return False
        return True

    def dominant_below(self, zeta: Weight, strict: bool = False) -> list[Weight]:
        """All dominant (or strictly dominant) weights <= ``zeta`` in dominance."""
        if not self.is_dominant(zeta):
            raise ValueError("dominant weight required")
        bounds = [int(c) for c in self.root_coordinates(zeta)]
        lower = 1 if strict else 0
        found = []
        for ns in product(*(range(b + 1) for b in bounds)):
            drop = _mat_vec(self.cartan_matrix, ns)
            mu = weight_sub(zeta, drop)
            if all(c >= lower for c in mu):
                found.append(mu)
        found.sort()
        return found

    @property
    def weyl_group(self) -> WeylGroup:
        if self._weyl is None:
            self._weyl = WeylGroup(self)
        return self._weyl

    @property
    def key(self):
        return self.cartan_matrix

    def __repr__(self) -> str:
        return f"RootSystem({self.cartan_type!r})"


# -- affine Weyl group ---------------------------------------------------------

@dataclass(frozen=True)
class AffineWeylElement:
    """Canonical form of an affine Weyl group element.

    ``word`` is the ShortLex-minimal reduced word in generators 0..rank
    (0 affine); two elements are equal iff their words coincide.
    """

    word: tuple[int, ...]
    length: int

    def __repr__(self) -> str:
        return f"<aff {'.'.join(map(str, self.word)) or 'e'}>"


_Transform = tuple[Matrix, Weight]


class AffineWeyl:
    """The affine Weyl group attached to a root system.

    Elements act on weight space by ``x -> Mx + t`` with the affine
    generator reflecting in the wall where the highest-coroot pairing
    equals 1.  Lengths, normal forms and descents are all computed by
    walking a generic interior point of the fundamental alcove.
    """

    def __init__(self, root_system: RootSystem):
        self.rs = root_system
        n = root_system.rank
        zero = (0,) * n
        gens: list[_Transform] = [None] * (n + 1)  # type: ignore[list-item]
        theta = root_system.highest_short_root
        theta_co = root_system.highest_coroot
        refl_theta = tuple(
            tuple((1 if j == k else 0) - theta[j] * theta_co[k] for k in range(n))
            for j in range(n)
        )
        gens[0] = (refl_theta, theta)
        for i in range(1, n + 1):
            gens[i] = (root_system.simple_reflection_matrix(i), zero)
        self.gens: tuple[_Transform, ...] = tuple(gens)
        self.identity_transform: _Transform = (_identity_matrix(n), zero)

        h = root_system.highest_coroot_pairing(root_system.rho) + 1
        self._base_point = tuple(Fraction(1, h) for _ in range(n))

        self.identity = AffineWeylElement((), 0)
        self._transform_by_word: dict[tuple[int, ...], _Transform] = {
            (): self.identity_transform
        }
        self._element_by_transform: dict[_Transform, AffineWeylElement] = {
            self.identity_transform: self.identity
        }
        self._left_mul_cache: dict[tuple[int, tuple[int, ...]], AffineWeylElement] = {}
        self._bruhat_cache: dict[tuple[tuple[int, ...], tuple[int, ...]], bool] = {}
        self._ball: list[AffineWeylElement] = [self.identity]
        self._ball_length = 0

    # -- transforms ------------------------------------------------------------

    def compose(self, a: _Transform, b: _Transform) -> _Transform:
        ma, ta = a
        mb, tb = b
        return (_mat_mul(ma, mb), weight_add(_mat_vec(ma, tb), ta))

    def invert(self, a: _Transform) -> _Transform:
        m, t = a
        inv = _invert_matrix(m)
        minv = tuple(tuple(int(x) for x in row) for row in inv)
        return (minv, weight_scale(-1, _mat_vec(minv, t)))

    def apply(self, a: _Transform, point):
        m, t = a
        return tuple(
            sum(m[j][k] * point[k] for k in range(len(point))) + t[j]
            for j in range(len(point))
        )

    def transform_of(self, elt: AffineWeylElement) -> _Transform:
        return self._transform_by_word[elt.word]

    def transform_of_word(self, word) -> _Transform:
        t = self.identity_transform
        for j in word:
            if not 0 <= j <= self.rs.rank:
                raise ValueError(f"generator index {j} out of range 0..{self.rs.rank}")
            t = self.compose(t, self.gens[j])
        return t

    # -- alcove walk -----------------------------------------------------------

    def _violated_wall(self, point) -> int | None:
        """Smallest generator index whose fundamental-alcove wall separates
        ``point`` from the fundamental alcove, or None if inside."""
        if self.rs.coroot_pairing(self.rs.highest_coroot, point) > 1:
            return 0
        for i in range(self.rs.rank):
            if point[i] < 0:
                return i + 1
        return None

    def walk_to_fundamental(self, point):
        """Reduce a regular point into the fundamental alcove.

        Returns ``(word, representative)`` where ``word`` is the ShortLex
        minimal reduced word of the element whose alcove contains ``point``.
        """
        word = []
        pt = point
        for _ in range(_WALK_CAP):
            j = self._violated_wall(pt)
            if j is None:
                return tuple(word), pt
            pt = self.apply(self.gens[j], pt)
            word.append(j)
        raise RuntimeError("alcove walk did not terminate; point is not generic")

    def element_of_transform(self, t: _Transform) -> AffineWeylElement:
        elt = self._element_by_transform.get(t)
        if elt is None:
            word, _ = self.walk_to_fundamental(self.apply(t, self._base_point))
            elt = AffineWeylElement(word, len(word))
            self._element_by_transform[t] = elt
            self._transform_by_word[word] = t
        return elt

    def normal_form(self, word) -> AffineWeylElement:
        """Canonical reduced form of an arbitrary word in the generators."""
        return self.element_of_transform(self.transform_of_word(word))

    def element_of_word(self, word) -> AffineWeylElement:
        return self.normal_form(word)

    # -- group operations on canonical elements ---------------------------------

    def multiply(self, a: AffineWeylElement, b: AffineWeylElement) -> AffineWeylElement:
        return self.element_of_transform(
            self.compose(self.transform_of(a), self.transform_of(b))
        )

    def left_multiply(self, j: int, a: AffineWeylElement) -> AffineWeylElement:
        key = (j, a.word)
        out = self._left_mul_cache.get(key)
        if out is None:
            out = self.element_of_transform(
                self.compose(self.gens[j], self.transform_of(a))
            )
            self._left_mul_cache[key] = out
        return out

    def inverse(self, a: AffineWeylElement) -> AffineWeylElement:
        return self.element_of_transform(self.invert(self.transform_of(a)))

    def left_descents(self, a: AffineWeylElement) -> list[int]:
        pt = self.apply(self.transform_of(a), self._base_point)
        out = []
        if self.rs.coroot_pairing(self.rs.highest_coroot, pt) > 1:
            out.append(0)
        for i in range(self.rs.rank):
            if pt[i] < 0:
                out.append(i + 1)
        return out

    def is_minimal_representative(self, a: AffineWeylElement) -> bool:
        """No finite left descent: minimal in its coset under the finite group."""
        return all(j == 0 for j in self.left_descents(a))

    def bruhat_leq(self, y: AffineWeylElement, w: AffineWeylElement) -> bool:
        """Bruhat order via the standard lifting recursion."""
        if y.length > w.length:
            return False
        if y == w:
            return True
        if w.length == 0:
            return y.length == 0
        key = (y.word, w.word)
        cached = self._bruhat_cache.get(key)
        if cached is not None:
            return cached
        s = w.word[0]  # first letter of the canonical word is a left descent
        sw = self.left_multiply(s, w)
        sy = self.left_multiply(s, y)
        if sy.length < y.length:
            out = self.bruhat_leq(sy, sw)
        else:
            out = self.bruhat_leq(y, sw)
        self._bruhat_cache[key] = out
        return out

    def ball(self, max_length: int) -> list[AffineWeylElement]:
        """All elements of length <= max_length, sorted by (length, word)."""
        while self._ball_length < max_length:
            target = self._ball_length + 1
            frontier = [e for e in self._ball if e.length == self._ball_length]
            seen = {e.word for e in self._ball}
            for e in frontier:
                t = self.transform_of(e)
                for j in range(self.rs.rank + 1):
                    cand = self.element_of_transform(self.compose(t, self.gens[j]))
                    if cand.length == target and cand.word not in seen:
                        seen.add(cand.word)
                        self._ball.append(cand)
            self._ball_length = target
            self._ball.sort(key=lambda e: (e.length, e.word))
        return [e for e in self._ball if e.length <= max_length]
