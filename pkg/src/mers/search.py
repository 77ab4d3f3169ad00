"""Exhaustive re-derivation of the classification over translation-set triples.

Every candidate ``(S, L, E)`` is a triple of residue sets mod ``(M, M)``.  A
closure condition ``T2 - k T1 <= T2`` is equivalent to ``k T1`` lying in the
translation stabilizer of ``T2``, so after precomputing stabilizers and
scaled masks the joint filter is pure bit arithmetic.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .axioms import radical_generators
from .catalog import MarkedERS, build, catalog, is_reduced, tier_numbers
from .finite import CLASSES, LONG, MIDDLE, SHORT, class_graph_connected, closure_conditions
from .isomorphy import IsoGroupSpec, _space, canonical_form, key_str
from .lattice import EMPTY, l_set, lattice, lattice_index
from .quotient import identify_affine_type, is_quotient_non_reduced, quotient

log = logging.getLogger(__name__)

FILTERS = ("non-reduced-R", "reduced-R-non-reduced-quotient", "all")
MAX_SYMMETRIC_MASKS = 1 << 20
MAX_CANDIDATE_PAIRS = 5_000_000


class SearchLimitError(RuntimeError):
    pass


@dataclass(frozen=True)
class SearchConfig:
    rank: int
    modulus: int = 4
    filter: str = "non-reduced-R"
    guided: bool = False  # restrict the middle class to the forms X_m + min(2, t2) Z a
    group: str = "marked"
    workers: int = 1

    def __post_init__(self):
        if self.modulus not in (2, 4, 8):
            raise ValueError("modulus must be 2, 4 or 8")
        if self.filter not in FILTERS:
            raise ValueError(f"filter must be one of {FILTERS}")
        if self.rank < 1:
            raise ValueError("rank must be positive")

    @property
    def iso_group(self) -> IsoGroupSpec:
        return IsoGroupSpec(self.group, self.modulus)


def _scaled(sp, mask: int, k: int) -> int:
    out = 0
    for c in sp.cells:
        if mask >> sp.idx(c) & 1:
            out |= 1 << sp.idx((k * c[0], k * c[1]))
    return out


def _symmetric_masks(M: int):
    sp = _space(M)
    orbits: list[int] = []
    seen = set()
    for c in sp.cells:
        if c in seen:
            continue
        neg = (-c[0] % M, -c[1] % M)
        seen |= {c, neg}
        orbits.append((1 << sp.idx(c)) | (1 << sp.idx(neg)))
    if 1 << len(orbits) > MAX_SYMMETRIC_MASKS:
        raise SearchLimitError(
            f"{2 ** len(orbits)} symmetric masks per class at modulus {M}; "
            "use modulus 4 or the guided middle mode"
        )
    for bits in range(1, 1 << len(orbits)):
        mask = 0
        for i, o in enumerate(orbits):
            if bits >> i & 1:
                mask |= o
        yield mask


def _guided_middle(rank: int, M: int) -> list[int]:
    sp = _space(M)
    forms = [lattice(p, q) for p in (1, 2) for q in (1, 2)]
    if rank == 2:
        forms.append(l_set(0, 0))
    return [sp.to_mask(T) for T in forms]


def enumerate_class_candidates(rank: int, cls: str, config: SearchConfig) -> list[int]:
    """Masks for one class passing symmetry and the closure conditions inside the class."""
    M = config.modulus
    if cls == MIDDLE and rank == 1:
        return [0]
    sp = _space(M)
    ks = sorted({c.k for c in closure_conditions(rank) if c.reflecting_class == cls == c.reflected_class} - {0})
    source = _guided_middle(rank, M) if (cls == MIDDLE and config.guided) else _symmetric_masks(M)
    out = []
    for mask in source:
        st = sp.stab(mask)
        if all(_scaled(sp, mask, k) & ~st == 0 for k in ks):
            out.append(mask)
    return out


@dataclass
class _Tables:
    rank: int
    M: int
    cands: dict[str, list[int]]
    stab: dict[int, int]
    scaled: dict[tuple[int, int], int]
    conds: list[tuple[str, str, int]]  # cross-class (reflecting, reflected, k)


def _tables(config: SearchConfig) -> _Tables:
    sp = _space(config.modulus)
    cands = {c: enumerate_class_candidates(config.rank, c, config) for c in CLASSES}
    conds = sorted({
        (c.reflecting_class, c.reflected_class, c.k)
        for c in closure_conditions(config.rank)
        if c.reflecting_class != c.reflected_class and c.k != 0
    })
    ks = {k for _, _, k in conds}
    masks = {m for ms in cands.values() for m in ms}
    stab = {m: sp.stab(m) for m in masks}
    scaled = {(m, k): _scaled(sp, m, k) for m in masks for k in ks}
    return _Tables(config.rank, config.modulus, cands, stab, scaled, conds)


def _ok(t: _Tables, assign: dict[str, int], pair: tuple[str, str]) -> bool:
    for src, dst, k in t.conds:
        if {src, dst} != set(pair):
            continue
        if t.scaled[assign[src], k] & ~t.stab[assign[dst]]:
            return False
    return True


def _joint_filter(t: _Tables, shorts: list[int]) -> list[tuple[int, int, int]]:
    out = []
    for S in shorts:
        for E in t.cands[LONG]:
            if not _ok(t, {SHORT: S, LONG: E}, (SHORT, LONG)):
                continue
            for L in t.cands[MIDDLE]:
                a = {SHORT: S, MIDDLE: L, LONG: E}
                if t.rank > 1 and not (_ok(t, a, (SHORT, MIDDLE)) and _ok(t, a, (MIDDLE, LONG))):
                    continue
                out.append((S, L, E))
    return out


def _global_ok(R: MarkedERS) -> bool:
    if lattice_index(radical_generators(R)) != 1:
        return False
    present = [c for c in CLASSES if R.translation[c]]
    return class_graph_connected(R.rank, present)


def _keep(R: MarkedERS, flt: str) -> bool:
    if flt == "all":
        return True
    red = is_reduced(R)
    if flt == "non-reduced-R":
        return not red
    return red and is_quotient_non_reduced(quotient(R))


@dataclass
class FoundClass:
    key: tuple[int, int, int]
    system: MarkedERS
    catalog_names: list[str] = field(default_factory=list)
    size: int = 1  # raw triples in this class

    @property
    def name(self) -> str:
        return self.catalog_names[0] if self.catalog_names else f"new:{key_str(self.key)}"


def search(config: SearchConfig) -> list[FoundClass]:
    """Triples passing every axiom and the filter, one per isomorphism class."""
    t = _tables(config)
    n_pairs = len(t.cands[SHORT]) * len(t.cands[LONG]) * len(t.cands[MIDDLE])
    log.info("candidates: %s (%d triples before joint filter)", {c: len(v) for c, v in t.cands.items()}, n_pairs)
    if n_pairs > MAX_CANDIDATE_PAIRS:
        raise SearchLimitError(f"{n_pairs} candidate triples exceed the cap; try --guided")

    shorts = t.cands[SHORT]
    if config.workers > 1:
        chunks = [shorts[i::config.workers] for i in range(config.workers)]
        with ProcessPoolExecutor(config.workers) as ex:
            triples = [x for part in ex.map(_joint_filter, [t] * len(chunks), chunks) for x in part]
    else:
        triples = _joint_filter(t, shorts)
    triples.sort()

    sp = _space(config.modulus)
    group = config.iso_group
    classes: dict[tuple, FoundClass] = {}
    for S, L, E in triples:
        R = MarkedERS(config.rank, sp.from_mask(S), sp.from_mask(L) if L else EMPTY, sp.from_mask(E))
        if not _global_ok(R) or not _keep(R, config.filter):
            continue
        key = canonical_form(R, group)
        if key in classes:
            classes[key].size += 1
        else:
            rep = MarkedERS(config.rank, *(sp.from_mask(m) if m else EMPTY for m in key))
            classes[key] = FoundClass(key, rep)

    names = _catalog_keys(config)
    for key, fc in classes.items():
        fc.catalog_names = names.get(key, [])
        if fc.catalog_names:
            # report the catalog system itself rather than the orbit minimum
            fc.system = build(fc.catalog_names[0], config.rank)
    return [classes[k] for k in sorted(classes)]


def _catalog_entries(config: SearchConfig) -> list[MarkedERS]:
    if config.filter == "non-reduced-R":
        return catalog(config.rank, "non-reduced")
    if config.filter == "reduced-R-non-reduced-quotient":
        return catalog(config.rank, "reduced")
    return catalog(config.rank)


def _catalog_keys(config: SearchConfig) -> dict[tuple, list[str]]:
    out: dict[tuple, list[str]] = {}
    for R in _catalog_entries(config):
        out.setdefault(canonical_form(R, config.iso_group), []).append(R.name)
    return out


@dataclass
class MatchReport:
    matched: list[tuple[str, str]]  # (key, catalog names joined)
    extra: list[str]  # found keys without a catalog entry
    missing: list[str]  # catalog names not found

    @property
    def bijection(self) -> bool:
        return not self.extra and not self.missing

    def to_json(self) -> dict:
        return {"bijection": self.bijection, "matched": self.matched, "extra": self.extra, "missing": self.missing}


def match_report(found: list[FoundClass], entries: list[MarkedERS], group: IsoGroupSpec) -> MatchReport:
    cat: dict[tuple, list[str]] = {}
    for R in entries:
        cat.setdefault(canonical_form(R, group), []).append(R.name or "?")
    found_keys = {fc.key for fc in found}
    matched = [(key_str(k), "=".join(cat[k])) for k in sorted(found_keys) if k in cat]
    extra = [key_str(k) for k in sorted(found_keys) if k not in cat]
    missing = [n for k in sorted(cat) if k not in found_keys for n in cat[k]]
    return MatchReport(matched, extra, missing)


def summary_rows(found: list[FoundClass]) -> list[dict]:
    rows = []
    for fc in found:
        R = fc.system
        try:
            tiers = "%d,%d" % tier_numbers(R)
        except ValueError:
            tiers = "-"
        rows.append({
            "name": fc.name,
            "quotient": identify_affine_type(quotient(R)),
            "reduced": is_reduced(R),
            "tiers": tiers,
            "key": key_str(fc.key),
        })
    return rows


def candidate_counts(config: SearchConfig) -> dict[str, int]:
    return {c: len(enumerate_class_candidates(config.rank, c, config)) for c in CLASSES}


__all__ = [
    "SearchConfig",
    "SearchLimitError",
    "FoundClass",
    "MatchReport",
    "enumerate_class_candidates",
    "search",
    "match_report",
    "summary_rows",
    "candidate_counts",
]
