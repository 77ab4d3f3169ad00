"""Marked elliptic root systems of BC_l shape and the named catalog types.

A system is stored as one translation set per length class::

    R = (R(BC_l)_s + S) u (R(BC_l)_m + L) u (R(BC_l)_l + E)

with ``S, L, E`` subsets of ``Z a + Z b`` and the marking ``G = R a``.
"""

from __future__ import annotations

import json
from pathlib import Path
from dataclasses import dataclass, field, replace
from typing import Callable, Iterator, NamedTuple

from .finite import CLASSES, LONG, MIDDLE, SHORT, classify_vector, finite_roots
from .lattice import EMPTY, ResidueSet, coset, l_set, l_set_scaled, lattice, lcm, make

# b-direction steps of the four non-reduced affine root systems built on BC_l
AFFINE_B_STEPS = {
    "BCC": (1, 1, 1),
    "BBv": (1, 1, 2),
    "CvC": (1, 2, 2),
    "CvBC": (1, 2, 4),
}
AFFINE_MIN_RANK = {"BCC": 1, "BBv": 2, "CvC": 1, "CvBC": 1}
# first tier number -> affine quotient type
TIER_FAMILY = {1: "BCC", 4: "CvBC", 2: "CvC"}


@dataclass(frozen=True)
class MarkedERS:
    rank: int
    short: ResidueSet
    middle: ResidueSet
    long: ResidueSet
    name: str | None = field(default=None, compare=False)

    @property
    def translation(self) -> dict[str, ResidueSet]:
        return {SHORT: self.short, MIDDLE: self.middle, LONG: self.long}

    def sets(self) -> tuple[ResidueSet, ResidueSet, ResidueSet]:
        return self.short, self.middle, self.long

    def with_sets(self, short=None, middle=None, long=None, name=None) -> MarkedERS:
        return replace(
            self,
            short=self.short if short is None else short,
            middle=self.middle if middle is None else middle,
            long=self.long if long is None else long,
            name=name,
        )

    def contains(self, vec: tuple[int, ...]) -> bool:
        """Membership of ``finite part + m a + n b`` given as ``(x_1..x_l, m, n)``."""
        if len(vec) != self.rank + 2:
            return False
        cls = classify_vector(tuple(vec[: self.rank]))
        if cls is None:
            return False
        return self.translation[cls].contains((vec[-2], vec[-1]))

    def to_descriptor(self) -> dict:
        return {
            "name": self.name,
            "rank": self.rank,
            "classes": {
                SHORT: self.short.to_json(),
                MIDDLE: self.middle.to_json() if self.rank > 1 else None,
                LONG: self.long.to_json(),
            },
        }

    @classmethod
    def from_descriptor(cls, data: dict) -> MarkedERS:
        try:
            rank = int(data["rank"])
            classes = data["classes"]
            middle = classes.get(MIDDLE)
            return cls(
                rank,
                ResidueSet.from_json(classes[SHORT]),
                EMPTY if middle is None else ResidueSet.from_json(middle),
                ResidueSet.from_json(classes[LONG]),
                name=data.get("name"),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed mERS descriptor: {exc}") from exc

    def __str__(self) -> str:
        label = self.name or "mERS"
        return f"{label} (l={self.rank}): S={self.short!r} L={self.middle!r} E={self.long!r}"


class CatalogType(NamedTuple):
    name: str
    display: str
    quotient: str  # affine type of R/G
    reduced: bool
    min_rank: int
    max_rank: int | None
    sets: Callable[[], tuple[ResidueSet, ResidueSet, ResidueSet]]


def _classical(family: str, a_steps: tuple[int, int, int]):
    bs = AFFINE_B_STEPS[family]
    return lambda: tuple(lattice(sa, sb) for sa, sb in zip(a_steps, bs))


def _reduced_classical(family: str):
    bs, bm, bl = AFFINE_B_STEPS[family]
    return lambda: (lattice(1, bs), lattice(1, bm), coset((1, 0), 2, bl))


def _star(i: int, t1: int, t2: int):
    family = TIER_FAMILY[t1]
    bs, bm, bl = AFFINE_B_STEPS[family]

    def sets():
        middle = lattice(min(2, t2), bm)
        if (t1, t2) == (2, 2):
            return l_set(0, 0), middle, l_set_scaled(i, i, 2, 2)
        if t1 in (1, 2) and t2 in (1, 2):
            return lattice(1, bs), middle, l_set_scaled(i, i, t1, t2)
        return l_set(i, i), middle, lattice(t2, bl)

    return sets


_STAR_PAIRS = [(1, 1), (1, 2), (2, 1), (2, 2), (2, 4), (4, 2), (4, 4)]

DISPLAY_FAMILY = {"BCC": "BCC_l", "CvBC": "C∨BC_l", "BBv": "BB∨_l", "CvC": "C∨C_l"}


def _types() -> list[CatalogType]:
    t: list[CatalogType] = []
    # reduced systems whose quotient is not reduced
    for name, disp, fam in [
        ("BC(1,2)", "BC_l^(1,2)", "BCC"),
        ("BC(4,2)", "BC_l^(4,2)", "CvBC"),
        ("BC(2,2)sigma1", "BC_l^(2,2)σ(1)", "BBv"),
        ("BC(2,2)sigma2", "BC_l^(2,2)σ(2)", "CvC"),
    ]:
        t.append(CatalogType(name, disp, fam, True, AFFINE_MIN_RANK[fam], None, _reduced_classical(fam)))
    t.append(CatalogType("BC(1,1)*", "BC_l^(1,1)∗", "BCC", True, 1, None, _star(1, 1, 1)))
    t.append(CatalogType("BC(4,4)*", "BC_l^(4,4)∗", "CvBC", True, 1, None, _star(1, 4, 4)))

    # non-reduced classical types X^(1), X^(2)(1), X^(2)(2), X^(4)
    for fam in ("BCC", "CvBC", "BBv", "CvC"):
        d = DISPLAY_FAMILY[fam]
        lo = AFFINE_MIN_RANK[fam]
        t.append(CatalogType(f"{fam}(1)", f"{d}^(1)", fam, False, lo, None, _classical(fam, (1, 1, 1))))
        t.append(CatalogType(f"{fam}(2)(1)", f"{d}^(2)(1)", fam, False, 2, None, _classical(fam, (1, 1, 2))))
        t.append(CatalogType(f"{fam}(2)(2)", f"{d}^(2)(2)", fam, False, lo, None, _classical(fam, (1, 2, 2))))
        t.append(CatalogType(f"{fam}(4)", f"{d}^(4)", fam, False, lo, None, _classical(fam, (1, 2, 4))))

    # star types indexed by the tier pair (t1, t2)
    for i in (0, 1):
        for t1, t2 in _STAR_PAIRS:
            if i == 1 and (t1, t2) in ((1, 1), (4, 4)):
                continue  # these two are the reduced BC(1,1)* and BC(4,4)*
            fam = TIER_FAMILY[t1]
            t.append(CatalogType(
                f"{fam}({t2})*{i}", f"{DISPLAY_FAMILY[fam]}^({t2})∗{i}", fam, False, 1, None, _star(i, t1, t2)
            ))

    # primed star types
    t.append(CatalogType(
        "BCC(1)*0'", "BCC_l^(1)∗0'", "BCC", False, 1, None,
        lambda: (lattice(1, 1), lattice(1, 1), l_set(0, 1)),
    ))
    t.append(CatalogType(
        "CvC(2)*1'", "C∨C_l^(2)∗1'", "CvC", False, 1, None,
        lambda: (l_set(0, 0), lattice(2, 2), l_set_scaled(1, 0, 2, 2)),
    ))
    t.append(CatalogType(
        "CvBC(4)*0'", "C∨BC_l^(4)∗0'", "CvBC", False, 1, None,
        lambda: (l_set(0, 1), lattice(2, 2), lattice(4, 4)),
    ))
    t.append(CatalogType(
        "CvC(2)*s", "C∨C_l^(2)∗s", "CvC", False, 1, None,
        lambda: (l_set(0, 0), lattice(2, 2), lattice(2, 2)),
    ))
    t.append(CatalogType(
        "CvC(2)*l", "C∨C_l^(2)∗l", "CvC", False, 1, None,
        lambda: (lattice(1, 1), lattice(2, 2), l_set_scaled(0, 0, 2, 2)),
    ))
    t.append(CatalogType(
        "BBv(2)*", "BB∨_2^(2)∗", "BBv", False, 2, 2,
        lambda: (lattice(1, 1), l_set(0, 0), lattice(2, 2)),
    ))
    t.append(CatalogType(
        "CvC(2)diamond", "C∨C_l^(2)◇", "CvC", False, 1, None,
        lambda: (lattice(1, 1), lattice(1, 2), make((2, 4), [(x, y) for x in range(2) for y in (0, 2) if (x - y // 2) % 2 == 0])),
    ))
    return t


TYPES: dict[str, CatalogType] = {t.name: t for t in _types()}

ALIASES = {
    "BCC(1)*1": "BC(1,1)*",
    "CvBC(4)*1": "BC(4,4)*",
    "BBv(2)iso": "BBv(2)*",
    "BBv(2)*iso": "BBv(2)*",
}

# order in which the two theorems list the non-reduced types
QUOTIENT_FAMILIES = ("BCC", "CvBC", "BBv", "CvC")


def resolve_name(name: str) -> str:
    name = ALIASES.get(name, name)
    if name not in TYPES:
        raise KeyError(f"unknown type {name!r}; known types: {', '.join(TYPES)}")
    return name


def admissible(name: str, rank: int) -> bool:
    t = TYPES[resolve_name(name)]
    return rank >= t.min_rank and (t.max_rank is None or rank <= t.max_rank)


def build(name: str, rank: int) -> MarkedERS:
    """The catalog system ``name`` at rank ``rank``."""
    name = resolve_name(name)
    t = TYPES[name]
    if not admissible(name, rank):
        hi = "" if t.max_rank is None else f" and <= {t.max_rank}"
        raise ValueError(f"type {name} requires rank >= {t.min_rank}{hi}, got {rank}")
    s, m, l = t.sets()
    return MarkedERS(rank, s, m if rank > 1 else EMPTY, l, name=name)


def catalog(rank: int, which: str = "all") -> list[MarkedERS]:
    """Admissible catalog entries at ``rank``; ``which`` is all, reduced or non-reduced."""
    if rank < 1:
        raise ValueError("rank must be positive")
    out = []
    for t in TYPES.values():
        if which == "reduced" and not t.reduced or which == "non-reduced" and t.reduced:
            continue
        if admissible(t.name, rank):
            out.append(build(t.name, rank))
    return out


def roots_in_window(R: MarkedERS, bound: int) -> list[tuple[int, ...]]:
    """Roots ``alpha + m a + n b`` with ``|m|, |n| <= bound`` as integer vectors."""
    out = []
    trans = R.translation
    points = {c: list(trans[c].points(bound)) for c in CLASSES}
    for alpha in finite_roots(R.rank):
        for m, n in points[alpha.length_class]:
            out.append(alpha.coords + (m, n))
    return out


def iter_short_doubles(R: MarkedERS) -> Iterator[tuple[int, int]]:
    """Short translations ``v`` with ``2 v`` in the long translation set."""
    S, E = R.short, R.long
    if not S or not E:
        return
    mod = (lcm(S.modulus[0], E.modulus[0]), lcm(S.modulus[1], E.modulus[1]))
    for v in S.lift(mod):
        if E.contains((2 * v[0], 2 * v[1])):
            yield v


def is_reduced(R: MarkedERS) -> bool:
    # twice a middle root has squared length 8, never a root; so only short/long matter
    return next(iter_short_doubles(R), None) is None


def _coset_step(S: ResidueSet, axis: int) -> int | None:
    mod, res = S.projection(axis)
    return mod if len(res) == 1 else None


def tier_numbers(R: MarkedERS) -> tuple[int, int]:
    """``(t1, t2)``: shrinking of the long translations in the b- and a-directions."""
    out = []
    for axis in (1, 0):
        ds, dl = _coset_step(R.short, axis), _coset_step(R.long, axis)
        if ds is None or dl is None or dl % ds:
            raise ValueError("non-classical: translation projections are not cosets of subgroups")
        out.append(dl // ds)
    return out[0], out[1]


def dump_descriptors(systems: list[MarkedERS]) -> str:
    return json.dumps([R.to_descriptor() for R in systems], indent=1)


def load_descriptors(text: str) -> list[MarkedERS]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"malformed descriptor file: {exc}") from exc
    if isinstance(data, dict):
        data = [data]
    if not isinstance(data, list):
        raise ValueError("descriptor file must hold an object or a list of objects")
    return [MarkedERS.from_descriptor(d) for d in data]


DATA_DIR = Path(__file__).with_name("data")


def golden_path(rank: int) -> Path:
    return DATA_DIR / f"catalog_rank{rank}.json"


def load_golden(rank: int) -> list[MarkedERS]:
    return load_descriptors(golden_path(rank).read_text())


def write_golden(ranks=(1, 2, 3), directory: Path = DATA_DIR) -> list[Path]:
    """Regenerate the stored descriptor files for ``ranks``."""
    paths = []
    for rank in ranks:
        path = Path(directory) / golden_path(rank).name
        path.write_text(dump_descriptors(catalog(rank)) + "\n")
        paths.append(path)
    return paths
