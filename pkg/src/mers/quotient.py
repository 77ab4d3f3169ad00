"""The affine quotient ``R / R a`` and recognition of the non-reduced affine types."""

from __future__ import annotations

from dataclasses import dataclass

from .catalog import MarkedERS
from .finite import CLASSES, LONG, MIDDLE, SHORT
from .lattice import canonical_1d

Profile = tuple[int, frozenset[int]]  # (modulus, residues) of a periodic subset of Z

REDUCED_OR_OTHER = "reduced-or-other"

Z = (1, frozenset({0}))
TWO_Z = (2, frozenset({0}))
FOUR_Z = (4, frozenset({0}))

# (short, middle, long) b-profiles of the four non-reduced affine systems
AFFINE_PROFILES = {
    "BCC": (Z, Z, Z),
    "CvBC": (Z, TWO_Z, FOUR_Z),
    "BBv": (Z, Z, TWO_Z),
    "CvC": (Z, TWO_Z, TWO_Z),
}


def profile_str(p: Profile) -> str:
    mod, res = p
    if not res:
        return "-"
    if len(res) == 1:
        (r,) = res
        base = "Z" if mod == 1 else f"{mod}Z"
        return base if r == 0 else f"{r}+{base}"
    return "{" + ",".join(map(str, sorted(res))) + f"}} mod {mod}"


@dataclass(frozen=True)
class AffineProfile:
    rank: int
    short: Profile
    middle: Profile
    long: Profile

    @property
    def classes(self) -> dict[str, Profile]:
        return {SHORT: self.short, MIDDLE: self.middle, LONG: self.long}

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            **{c: {"modulus": p[0], "residues": sorted(p[1]), "text": profile_str(p)} for c, p in self.classes.items()},
        }

    def __str__(self) -> str:
        return ", ".join(f"{c}: {profile_str(p)}" for c, p in self.classes.items())


def quotient(R: MarkedERS) -> AffineProfile:
    """Project each translation set onto its b-coefficients."""
    profs = [R.translation[c].projection(1) if R.translation[c] else (1, frozenset()) for c in CLASSES]
    return AffineProfile(R.rank, *profs)


def make_profile(mod: int, residues) -> Profile:
    return canonical_1d(mod, set(r % mod for r in residues))


def identify_affine_type(A: AffineProfile) -> str:
    if A.rank == 1:
        # no middle roots: the long profile alone separates the types
        if A.short != Z:
            return REDUCED_OR_OTHER
        return {Z: "BCC", TWO_Z: "CvC", FOUR_Z: "CvBC"}.get(A.long, REDUCED_OR_OTHER)
    triple = (A.short, A.middle, A.long)
    for name, want in AFFINE_PROFILES.items():
        if triple == want:
            return name
    return REDUCED_OR_OTHER


def is_quotient_non_reduced(A: AffineProfile) -> bool:
    """Whether some short root of the quotient has its double among the long roots."""
    smod, sres = A.short
    lmod, lres = A.long
    if not sres or not lres:
        return False
    mod = smod * lmod
    return any((2 * v) % lmod in lres for v in range(mod) if v % smod in sres)
