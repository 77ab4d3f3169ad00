"""Isomorphisms between marked elliptic root systems and orbit canonical forms.

An isomorphism acts on ``F = R^l + R a + R b`` by a unimodular map ``A`` of
the radical together with an optional shift of the finite basis,
``e_i -> e_i + c_i`` with ``c_i`` radical.  The shift is an isometry (the
radical is orthogonal to everything) and fixes the marking line, so it is
available both for marked and unmarked isomorphy.  A root ``alpha + v`` with
``alpha = sum x_i e_i`` is sent to ``alpha + A v + sum x_i c_i``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Iterable, NamedTuple

from .catalog import MarkedERS, admissible, build
from .finite import CLASSES, finite_roots
from .lattice import EXOTIC, IDENTITY, SHEAR, SWAP, RadicalMap, ResidueSet, make

Vec = tuple[int, int]


@dataclass(frozen=True)
class Isomorphism:
    matrix: RadicalMap = IDENTITY
    # shift of e_i, applied after the matrix; a single entry means the same shift for every i
    shifts: tuple[Vec, ...] = ()

    def shift_of(self, i: int) -> Vec:
        if not self.shifts:
            return (0, 0)
        return self.shifts[i] if len(self.shifts) > 1 else self.shifts[0]

    def describe(self) -> str:
        (p, q), (r, s) = self.matrix.entries
        text = f"a -> {_vec_str((p, r))}, b -> {_vec_str((q, s))}"
        if any(c != (0, 0) for c in self.shifts):
            if len(set(self.shifts)) == 1:
                text += f", e_i -> e_i + {_vec_str(self.shifts[0])}"
            else:
                text += "".join(f", e_{i + 1} -> e_{i + 1} + {_vec_str(c)}" for i, c in enumerate(self.shifts))
        return text

    def to_json(self) -> dict:
        return {"matrix": self.matrix.to_json(), "shifts": [list(c) for c in self.shifts]}


def _vec_str(v: Vec) -> str:
    parts = []
    for coef, sym in zip(v, "ab"):
        if coef:
            parts.append(f"{'' if coef == 1 else '-' if coef == -1 else coef}{sym}")
    return " + ".join(parts).replace("+ -", "- ") or "0"


def apply_iso(iso: Isomorphism | RadicalMap, R: MarkedERS) -> MarkedERS:
    """Image of ``R``; raises ValueError if the image is not uniform per length class."""
    if isinstance(iso, RadicalMap):
        iso = Isomorphism(iso)
    images = {c: R.translation[c].apply_map(iso.matrix) for c in CLASSES}
    out: dict[str, ResidueSet] = {}
    for alpha in finite_roots(R.rank):
        c = alpha.length_class
        T = images[c]
        off = [0, 0]
        for i, x in enumerate(alpha.coords):
            if x:
                ci = iso.shift_of(i)
                off[0] += x * ci[0]
                off[1] += x * ci[1]
        moved = T.translate((off[0], off[1])) if T else T
        if c in out and out[c] != moved:
            raise ValueError(f"image of {R.name or 'system'} is not uniform on the {c} class")
        out.setdefault(c, moved)
    middle = out.get("middle", R.middle)
    return MarkedERS(R.rank, out["short"], middle, out["long"])


class ListedIso(NamedTuple):
    item: int
    lhs: str
    rhs: str
    iso: Isomorphism


#: the isomorphisms between non-reduced marked types, written as lhs -> rhs maps
LISTED_ISOMORPHISMS: tuple[ListedIso, ...] = (
    ListedIso(1, "BCC(2)(1)", "BBv(1)", Isomorphism(SWAP)),
    ListedIso(1, "CvBC(2)(1)", "BBv(4)", Isomorphism(SWAP)),
    ListedIso(1, "BCC(2)(2)", "CvC(1)", Isomorphism(SWAP)),
    ListedIso(1, "CvBC(2)(2)", "CvC(4)", Isomorphism(SWAP)),
    ListedIso(1, "BCC(2)*0", "CvC(1)*0", Isomorphism(SWAP)),
    ListedIso(1, "BCC(2)*1", "CvC(1)*1", Isomorphism(SWAP)),
    ListedIso(1, "CvBC(2)*0", "CvC(4)*0", Isomorphism(SWAP)),
    ListedIso(1, "CvBC(2)*1", "CvC(4)*1", Isomorphism(SWAP)),
    ListedIso(1, "BBv(2)(2)", "CvC(2)(1)", Isomorphism(SWAP)),
    ListedIso(2, "BCC(1)*0'", "BCC(1)*0", Isomorphism(SHEAR)),
    ListedIso(2, "CvBC(4)*0'", "CvBC(4)*0", Isomorphism(SHEAR)),
    # the shear alone does not match the formulas; it needs e_i -> e_i + b as well
    ListedIso(2, "CvC(2)*1'", "CvC(2)*1", Isomorphism(SHEAR, ((0, 1),))),
    ListedIso(3, "BCC(4)", "CvBC(1)", Isomorphism(SWAP)),
    ListedIso(3, "CvC(2)diamond", "CvBC(1)", Isomorphism(EXOTIC)),
)


@dataclass
class IsoCheck:
    item: int
    lhs: str
    rhs: str
    iso: Isomorphism
    verified: bool
    detail: str = ""

    def to_json(self) -> dict:
        return {
            "item": self.item,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "map": self.iso.describe(),
            **self.iso.to_json(),
            "verified": self.verified,
            "detail": self.detail,
        }


def _first_difference(A: MarkedERS, B: MarkedERS) -> str:
    for c in CLASSES:
        x, y = A.translation[c], B.translation[c]
        if x != y:
            diff = (x - y) or (y - x)
            side = "image only" if (x - y) else "target only"
            return f"{c} class differs at residue {diff.residues()[0]} mod {diff.modulus} ({side})"
    return ""


def verify_listed_isomorphisms(rank: int) -> list[IsoCheck]:
    out = []
    for li in LISTED_ISOMORPHISMS:
        if not (admissible(li.lhs, rank) and admissible(li.rhs, rank)):
            continue
        lhs, rhs = build(li.lhs, rank), build(li.rhs, rank)
        try:
            image = apply_iso(li.iso, lhs)
        except ValueError as exc:
            out.append(IsoCheck(li.item, li.lhs, li.rhs, li.iso, False, str(exc)))
            continue
        ok = image == rhs
        out.append(IsoCheck(li.item, li.lhs, li.rhs, li.iso, ok, "" if ok else _first_difference(image, rhs)))
    return out


# -- canonical forms ---------------------------------------------------

@dataclass(frozen=True)
class IsoGroupSpec:
    """Finite group of radical maps (mod ``modulus``) plus finite-basis shifts.

    ``marked`` keeps the line ``R a``: matrices ``[[u, w], [0, v]]``.
    ``unmarked`` allows every matrix of determinant +-1.
    """

    kind: str = "marked"
    modulus: int = 4
    shifts: bool = True

    def __post_init__(self):
        if self.kind not in ("marked", "unmarked"):
            raise ValueError(f"group kind must be marked or unmarked, not {self.kind!r}")
        if self.modulus not in (2, 4, 8):
            raise ValueError("working modulus must be 2, 4 or 8")

    def matrices(self) -> list[tuple[int, int, int, int]]:
        return _matrices(self.kind, self.modulus)


@lru_cache(maxsize=None)
def _matrices(kind: str, M: int) -> list[tuple[int, int, int, int]]:
    out = []
    for p, q, r, s in product(range(M), repeat=4):
        if kind == "marked" and r != 0:
            continue
        if (p * s - q * r) % M in (1, M - 1):
            out.append((p, q, r, s))
    return out


class _MaskSpace:
    """Sets of residues mod ``(M, M)`` as ``M*M``-bit integers with fast permutations."""

    def __init__(self, M: int):
        self.M = M
        self.cells = [(x, y) for x in range(M) for y in range(M)]
        self.n = M * M
        self._perm_tables: dict = {}
        self._stab: dict[int, int] = {}

    def idx(self, v: Vec) -> int:
        return (v[0] % self.M) * self.M + v[1] % self.M

    def _tables(self, key, fn):
        tabs = self._perm_tables.get(key)
        if tabs is None:
            targets = [1 << self.idx(fn(c)) for c in self.cells]
            tabs = []
            for start in range(0, self.n, 8):
                chunk = targets[start:start + 8]
                tab = [0] * 256
                for byte in range(1, 256):
                    low = byte & -byte
                    bit = low.bit_length() - 1
                    tab[byte] = tab[byte ^ low] | (chunk[bit] if bit < len(chunk) else 0)
                tabs.append(tab)
            self._perm_tables[key] = tabs
        return tabs

    @staticmethod
    def _apply(tabs, mask: int) -> int:
        out = 0
        for tab in tabs:
            out |= tab[mask & 0xFF]
            mask >>= 8
        return out

    def matrix_image(self, A, mask: int) -> int:
        p, q, r, s = A
        return self._apply(self._tables(("m", A), lambda v: (p * v[0] + q * v[1], r * v[0] + s * v[1])), mask)

    def translate(self, mask: int, c: Vec) -> int:
        c = (c[0] % self.M, c[1] % self.M)
        return self._apply(self._tables(("t", c), lambda v: (v[0] + c[0], v[1] + c[1])), mask)

    def stab(self, mask: int) -> int:
        """Bitmask of translations ``c`` with ``mask + c == mask``."""
        s = self._stab.get(mask)
        if s is None:
            s = 0
            for c in self.cells:
                if self.translate(mask, c) == mask:
                    s |= 1 << self.idx(c)
            self._stab[mask] = s
        return s

    def to_mask(self, T: ResidueSet) -> int:
        if not T:
            return 0
        if self.M % T.modulus[0] or self.M % T.modulus[1]:
            raise ValueError(
                f"translation set with modulus {T.modulus} does not fit working modulus {self.M}; "
                "use a larger modulus"
            )
        return sum(1 << self.idx(v) for v in T.lift((self.M, self.M)))

    def from_mask(self, mask: int) -> ResidueSet:
        return make((self.M, self.M), [c for c in self.cells if mask >> self.idx(c) & 1])


@lru_cache(maxsize=None)
def _space(M: int) -> _MaskSpace:
    return _MaskSpace(M)


@lru_cache(maxsize=None)
def _offset_patterns(rank: int, M: int, shifts: bool):
    """Per shift choice, the translation offsets each class picks up.

    At rank >= 3 uniformity forces the differences ``c_i - c_j`` into the
    stabilizers of the short and middle sets and ``2(c_i - c_j)`` into that
    of the long set, so a common shift ``c`` gives every reachable image.
    """
    cells = [(x, y) for x in range(M) for y in range(M)]
    if not shifts:
        choices = [((0, 0),) * rank]
    elif rank <= 2:
        choices = list(product(cells, repeat=rank))
    else:
        choices = [(c,) * rank for c in cells]
    roots = finite_roots(rank)
    out = []
    for cs in choices:
        per_class: dict[str, set[Vec]] = {c: set() for c in CLASSES}
        for alpha in roots:
            off = (
                sum(x * c[0] for x, c in zip(alpha.coords, cs)) % M,
                sum(x * c[1] for x, c in zip(alpha.coords, cs)) % M,
            )
            per_class[alpha.length_class].add(off)
        out.append((cs, tuple(tuple(sorted(per_class[c])) for c in CLASSES)))
    return out


CanonicalKey = tuple[int, int, int]


@lru_cache(maxsize=None)
def _valid_offsets(rank: int, M: int, shifts: bool, stabs: tuple[int, int, int]):
    """Distinct per-class offsets reachable by shifts that keep every class uniform.

    Offsets are reduced modulo the class stabilizers, so each entry gives a
    different image.  Returns ``[(offsets per class, shift choice), ...]``.
    """
    sp = _space(M)

    def reduce(o: Vec, st: int) -> int:
        return min(sp.idx((o[0] + d[0], o[1] + d[1])) for d in sp.cells if st >> sp.idx(d) & 1)

    seen: dict[tuple, tuple] = {}
    for cs, per_class in _offset_patterns(rank, M, shifts):
        triple = []
        for offs, st in zip(per_class, stabs):
            if not offs:
                triple.append(0)
                continue
            o0 = offs[0]
            if any(not st >> sp.idx((o[0] - o0[0], o[1] - o0[1])) & 1 for o in offs[1:]):
                break
            triple.append(reduce(o0, st))
        else:
            seen.setdefault(tuple(triple), cs)
    return [(tuple(sp.cells[i] for i in t), cs) for t, cs in seen.items()]


def _orbit(R: MarkedERS, group: IsoGroupSpec):
    """Yield ``(image masks, matrix, shift choice)`` over the group orbit of ``R``."""
    sp = _space(group.modulus)
    masks = [sp.to_mask(T) for T in R.sets()]
    for A in group.matrices():
        imgs = [sp.matrix_image(A, m) if m else 0 for m in masks]
        stabs = tuple(sp.stab(m) if m else sp.stab(0) for m in imgs)
        for offs, cs in _valid_offsets(R.rank, group.modulus, group.shifts, stabs):
            yield tuple(sp.translate(m, o) if m else 0 for m, o in zip(imgs, offs)), A, cs


def canonical_form(R: MarkedERS, group: IsoGroupSpec = IsoGroupSpec()) -> CanonicalKey:
    """Lexicographically least image of ``R`` (as residue masks) over the group."""
    return min(k for k, _, _ in _orbit(R, group))


def key_str(key: CanonicalKey, modulus: int = 4) -> str:
    width = (modulus * modulus + 3) // 4
    return "-".join(f"{m:0{width}x}" for m in key)


def find_isomorphism(R1: MarkedERS, R2: MarkedERS, group: IsoGroupSpec = IsoGroupSpec()) -> Isomorphism | None:
    """A group element sending ``R1`` onto ``R2`` (matrix entries reduced mod the working modulus)."""
    if R1.rank != R2.rank:
        return None
    sp = _space(group.modulus)
    target = tuple(sp.to_mask(T) for T in R2.sets())
    for key, A, cs in _orbit(R1, group):
        if key == target:
            return Isomorphism(_lift_matrix(A, group.modulus), tuple(cs) if group.shifts else ())
    return None


def _lift_matrix(A, M: int) -> RadicalMap:
    """An integer matrix of determinant +-1 reducing to ``A`` mod ``M``."""
    p, q, r, s = A
    steps = (0, -M, M, -2 * M, 2 * M)
    for dp, dq, dr, ds in product(steps, repeat=4):
        cand = (p + dp, q + dq, r + dr, s + ds)
        if cand[0] * cand[3] - cand[1] * cand[2] in (1, -1):
            return RadicalMap(((cand[0], cand[1]), (cand[2], cand[3])))
    raise ValueError(f"no small unimodular lift of {A} mod {M}")


@dataclass
class IsoClass:
    key: CanonicalKey
    members: list[MarkedERS] = field(default_factory=list)

    @property
    def names(self) -> list[str]:
        return [R.name or "?" for R in self.members]


def dedup(entries: Iterable[MarkedERS], group: IsoGroupSpec = IsoGroupSpec()) -> list[IsoClass]:
    """Group ``entries`` into orbits; classes appear in order of first member."""
    classes: dict[CanonicalKey, IsoClass] = {}
    for R in entries:
        k = (R.rank,) + canonical_form(R, group)
        classes.setdefault(k, IsoClass(k)).members.append(R)
    return list(classes.values())


def group_is_closed(group: IsoGroupSpec) -> bool:
    """Multiplication-table check that the residue matrices form a group."""
    M = group.modulus
    mats = set(group.matrices())
    for a, b, c, d in mats:
        for e, f, g, h in mats:
            prod = ((a * e + b * g) % M, (a * f + b * h) % M, (c * e + d * g) % M, (c * f + d * h) % M)
            if prod not in mats:
                return False
    return True
