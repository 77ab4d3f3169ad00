"""Finite unions of cosets of product sublattices of Z^2.

A :class:`ResidueSet` stands for the subset of ``Z a + Z b`` made of all
``(m, n)`` whose residues ``(m mod M_a, n mod M_b)`` lie in a finite table.
Every translation set attached to a root-length class is of this form.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from math import gcd
from typing import Iterable, Iterator

Vec = tuple[int, int]

#: moduli are restricted to divisors of this number on each axis
MAX_MODULUS = 8
_ALLOWED = (1, 2, 4, 8)


def lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def _check_modulus(modulus: Vec) -> None:
    for m in modulus:
        if m not in _ALLOWED:
            raise ValueError(f"modulus component {m} must divide {MAX_MODULUS}")


@dataclass(frozen=True)
class ResidueSet:
    """Periodic subset of Z^2, always kept in canonical (minimal modulus) form.

    ``mask`` has bit ``r_a * M_b + r_b`` set iff residue ``(r_a, r_b)`` belongs
    to the set.  Build instances with :func:`make`; the raw constructor does
    not canonicalize.
    """

    modulus: Vec
    mask: int

    # -- basic views -------------------------------------------------
    def residues(self) -> list[Vec]:
        ma, mb = self.modulus
        return [(i // mb, i % mb) for i in range(ma * mb) if self.mask >> i & 1]

    def __contains__(self, v: Vec) -> bool:
        return self.contains(v)

    def contains(self, v: Vec) -> bool:
        ma, mb = self.modulus
        return bool(self.mask >> ((v[0] % ma) * mb + v[1] % mb) & 1)

    @property
    def sort_key(self) -> tuple[int, int, int]:
        return (self.modulus[0], self.modulus[1], self.mask)

    def __bool__(self) -> bool:
        return self.mask != 0

    def __len__(self) -> int:
        """Number of stored residues (at the canonical modulus)."""
        return bin(self.mask).count("1")

    @property
    def density(self) -> tuple[int, int]:
        """Fraction of Z^2 covered, as ``(numerator, denominator)``."""
        return len(self), self.modulus[0] * self.modulus[1]

    def lift(self, modulus: Vec) -> list[Vec]:
        """Residues of the same set at a multiple of the current modulus."""
        ma, mb = self.modulus
        if modulus[0] % ma or modulus[1] % mb:
            raise ValueError(f"{modulus} is not a multiple of {self.modulus}")
        return [
            (x, y)
            for x, y in product(range(modulus[0]), range(modulus[1]))
            if self.mask >> ((x % ma) * mb + y % mb) & 1
        ]

    def points(self, bound: int) -> Iterator[Vec]:
        """All members with ``|m|, |n| <= bound`` in lexicographic order."""
        for m in range(-bound, bound + 1):
            for n in range(-bound, bound + 1):
                if self.contains((m, n)):
                    yield (m, n)

    # -- set algebra -------------------------------------------------
    def _common(self, other: ResidueSet) -> tuple[Vec, list[Vec], list[Vec]]:
        mod = (lcm(self.modulus[0], other.modulus[0]), lcm(self.modulus[1], other.modulus[1]))
        return mod, self.lift(mod), other.lift(mod)

    def union(self, other: ResidueSet) -> ResidueSet:
        mod, a, b = self._common(other)
        return make(mod, set(a) | set(b))

    def intersect(self, other: ResidueSet) -> ResidueSet:
        mod, a, b = self._common(other)
        return make(mod, set(a) & set(b))

    def difference(self, other: ResidueSet) -> ResidueSet:
        mod, a, b = self._common(other)
        return make(mod, set(a) - set(b))

    __or__ = union
    __and__ = intersect
    __sub__ = difference

    def issubset(self, other: ResidueSet) -> bool:
        return not (self - other)

    __le__ = issubset

    def equals(self, other: ResidueSet) -> bool:
        # canonical forms are unique, so structural equality is set equality
        return self == other

    def negate(self) -> ResidueSet:
        ma, mb = self.modulus
        return make(self.modulus, {(-x % ma, -y % mb) for x, y in self.residues()})

    __neg__ = negate

    def translate(self, c: Vec) -> ResidueSet:
        """The shifted set ``S + c``."""
        ma, mb = self.modulus
        return make(self.modulus, {((x + c[0]) % ma, (y + c[1]) % mb) for x, y in self.residues()})

    def scale_subtract(self, k: int, other: ResidueSet) -> ResidueSet:
        """The set ``{w - k v : w in self, v in other}``.

        The result is periodic modulo ``self.modulus``, so it is computed
        exactly on residues at the common modulus.
        """
        if k == 0 or not self:
            return self
        if not other:
            return EMPTY
        mod, ws, vs = self._common(other)
        ma, mb = self.modulus
        kv = {(k * x, k * y) for x, y in vs}
        out = {((w0 - x) % ma, (w1 - y) % mb) for w0, w1 in ws for x, y in kv}
        return make(self.modulus, out)

    def apply_map(self, matrix: RadicalMap | Iterable[Iterable[int]]) -> ResidueSet:
        """Image ``{A v : v in self}`` under a unimodular integer matrix."""
        A = matrix if isinstance(matrix, RadicalMap) else RadicalMap.of(matrix)
        if not self:
            return self
        n = lcm(*self.modulus)
        return make((n, n), {A.act(v, n) for v in self.lift((n, n))})

    def stabilizer_contains(self, c: Vec) -> bool:
        return self.translate(c) == self

    def projection(self, axis: int) -> tuple[int, frozenset[int]]:
        """Canonical residues of the projection to the a- (0) or b- (1) coordinate."""
        mod = self.modulus[axis]
        return canonical_1d(mod, {r[axis] for r in self.residues()})

    # -- serialization ---------------------------------------------
    def to_json(self) -> dict:
        return {"modulus": list(self.modulus), "residues": [list(r) for r in self.residues()]}

    @classmethod
    def from_json(cls, data: dict) -> ResidueSet:
        return make(tuple(data["modulus"]), [tuple(r) for r in data["residues"]])

    def __repr__(self) -> str:
        if not self:
            return "ResidueSet(empty)"
        return f"ResidueSet({self.modulus}, {self.residues()})"


def _periodic(mod: Vec, cells: set[Vec], axis: int, d: int) -> bool:
    step = (d, 0) if axis == 0 else (0, d)
    return all(((x + step[0]) % mod[0], (y + step[1]) % mod[1]) in cells for x, y in cells)


def make(modulus: Vec, residues: Iterable[Vec]) -> ResidueSet:
    """Canonical :class:`ResidueSet` from a modulus pair and residue table."""
    modulus = (int(modulus[0]), int(modulus[1]))
    _check_modulus(modulus)
    cells = set()
    for r in residues:
        x, y = int(r[0]), int(r[1])
        if not (0 <= x < modulus[0] and 0 <= y < modulus[1]):
            raise ValueError(f"residue {r} out of range for modulus {modulus}")
        cells.add((x, y))
    if not cells:
        return EMPTY
    mod = list(modulus)
    for axis in (0, 1):
        for d in _ALLOWED:
            if d >= mod[axis]:
                break
            if mod[axis] % d == 0 and _periodic(tuple(mod), cells, axis, d):
                mod[axis] = d
                break
        cells = {(x % mod[0], y % mod[1]) for x, y in cells}
    mb = mod[1]
    mask = sum(1 << (x * mb + y) for x, y in cells)
    return ResidueSet((mod[0], mod[1]), mask)


def from_predicate(modulus: Vec, pred) -> ResidueSet:
    """Set of residues ``(x, y)`` at ``modulus`` for which ``pred(x, y)`` holds."""
    return make(modulus, [(x, y) for x in range(modulus[0]) for y in range(modulus[1]) if pred(x, y)])


def canonical_1d(mod: int, residues: set[int]) -> tuple[int, frozenset[int]]:
    if not residues:
        return (1, frozenset())
    for d in _ALLOWED:
        if d > mod:
            break
        if mod % d == 0 and all((r + d) % mod in residues for r in residues):
            return d, frozenset(r % d for r in residues)
    return mod, frozenset(residues)


EMPTY = ResidueSet((1, 1), 0)
FULL = ResidueSet((1, 1), 1)


def lattice(sa: int, sb: int) -> ResidueSet:
    """The product sublattice ``sa Z a + sb Z b``."""
    return make((sa, sb), [(0, 0)])


def coset(offset: Vec, sa: int, sb: int) -> ResidueSet:
    """``offset + sa Z a + sb Z b``."""
    return make((sa, sb), [(offset[0] % sa, offset[1] % sb)])


def l_set_scaled(i: int, j: int, s1: int, s2: int) -> ResidueSet:
    """``{s2 m a + s1 n b : (m - i)(n - j) = 0 mod 2}``.

    Note the crossing: ``s2`` scales the a-coefficient and ``s1`` the
    b-coefficient.
    """
    if i not in (0, 1) or j not in (0, 1):
        raise ValueError("i and j must be 0 or 1")
    if s1 not in (1, 2, 4) or s2 not in (1, 2, 4):
        raise ValueError("scales must be 1, 2 or 4")
    mod = (2 * s2, 2 * s1)
    return from_predicate(
        mod,
        lambda x, y: x % s2 == 0 and y % s1 == 0 and ((x // s2 - i) * (y // s1 - j)) % 2 == 0,
    )


def l_set(i: int, j: int) -> ResidueSet:
    """``{m a + n b : (m - i)(n - j) = 0 mod 2}``."""
    return l_set_scaled(i, j, 1, 1)


def lattice_index(vectors: Iterable[Vec]) -> int:
    """Index in Z^2 of the subgroup generated by ``vectors`` (0 if not full rank)."""
    vs = list(dict.fromkeys(vectors))
    g = 0
    for i, a in enumerate(vs):
        for b in vs[i + 1:]:
            g = gcd(g, a[0] * b[1] - a[1] * b[0])
            if g == 1:
                return 1
    return g


@dataclass(frozen=True)
class RadicalMap:
    """Unimodular 2x2 integer matrix acting on coefficient vectors ``(m, n)``.

    The vector ``m a + n b`` is sent to ``(p m + q n) a + (r m + s n) b`` for
    ``entries = ((p, q), (r, s))``.
    """

    entries: tuple[tuple[int, int], tuple[int, int]]

    def __post_init__(self):
        if self.det not in (1, -1):
            raise ValueError(f"matrix {self.entries} is not invertible over Z (det {self.det})")

    @classmethod
    def of(cls, rows: Iterable[Iterable[int]]) -> RadicalMap:
        (p, q), (r, s) = rows
        return cls(((int(p), int(q)), (int(r), int(s))))

    @property
    def det(self) -> int:
        (p, q), (r, s) = self.entries
        return p * s - q * r

    def act(self, v: Vec, mod: int | None = None) -> Vec:
        (p, q), (r, s) = self.entries
        x, y = p * v[0] + q * v[1], r * v[0] + s * v[1]
        if mod:
            return x % mod, y % mod
        return x, y

    def __matmul__(self, other: RadicalMap) -> RadicalMap:
        (p, q), (r, s) = self.entries
        (P, Q), (R, S) = other.entries
        return RadicalMap(((p * P + q * R, p * Q + q * S), (r * P + s * R, r * Q + s * S)))

    def inverse(self) -> RadicalMap:
        (p, q), (r, s) = self.entries
        d = self.det
        return RadicalMap(((s * d, -q * d), (-r * d, p * d)))

    def to_json(self) -> list[list[int]]:
        return [list(row) for row in self.entries]


IDENTITY = RadicalMap(((1, 0), (0, 1)))
#: a <-> b
SWAP = RadicalMap(((0, 1), (1, 0)))
#: a -> a + b, b -> b
SHEAR = RadicalMap(((1, 0), (1, 1)))
#: a + 2b -> a, b -> b
EXOTIC = RadicalMap(((1, 0), (-2, 1)))

