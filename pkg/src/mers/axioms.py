"""Root-system axiom checks: exact symbolic ones and a windowed brute-force oracle.

Both checkers return an :class:`AxiomReport` with the same keys so their
verdicts can be compared item by item.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .catalog import MarkedERS, roots_in_window
from .finite import (
    CLASSES,
    LONG,
    MIDDLE,
    SHORT,
    class_graph_connected,
    closure_conditions,
    finite_roots,
    pairing,
)
from .lattice import lattice_index

CHECKS = ("shape", "symmetry", "axiom1", "axiom2", "axiom3", "axiom4", "axiom5", "marking")


@dataclass
class AxiomReport:
    method: str
    passed: dict[str, bool] = field(default_factory=dict)
    witness: dict[str, str] = field(default_factory=dict)

    def record(self, check: str, ok: bool, witness: str = "") -> None:
        self.passed[check] = ok
        if not ok and witness:
            self.witness[check] = witness

    @property
    def ok(self) -> bool:
        return all(self.passed.get(c, False) for c in CHECKS)

    def failures(self) -> list[str]:
        return [c for c in CHECKS if not self.passed.get(c, False)]

    def to_json(self) -> dict:
        return {"method": self.method, "ok": self.ok, "passed": dict(self.passed), "witness": dict(self.witness)}

    def __str__(self) -> str:
        if self.ok:
            return f"{self.method}: all axioms pass"
        parts = [f"{c} ({self.witness.get(c, 'failed')})" for c in self.failures()]
        return f"{self.method}: FAIL " + "; ".join(parts)


def _present_classes(R: MarkedERS) -> list[str]:
    return [c for c in CLASSES if R.translation[c]]


def radical_generators(R: MarkedERS) -> list[tuple[int, int]]:
    """Generators of ``Q(R) n rad(I)`` read off the integer relations of BC_l.

    The relations ``e_i + (-e_i) = 0``, ``(e_i - e_j) - e_i + e_j = 0`` and
    ``2e_i - e_i - e_i = 0`` together with differences inside one class span
    every relation among the finite parts.
    """
    gens = []
    for T in R.sets():
        if not T:
            continue
        ma, mb = T.modulus
        res = T.residues()
        x0 = res[0]
        gens += [(ma, 0), (0, mb)]
        gens += [(x[0] - x0[0], x[1] - x0[1]) for x in res[1:]]
    s0 = R.short.residues()[0]
    gens.append((2 * s0[0], 2 * s0[1]))
    if R.rank > 1 and R.middle:
        gens.append(R.middle.residues()[0])
    e0 = R.long.residues()[0]
    gens.append((e0[0] - 2 * s0[0], e0[1] - 2 * s0[1]))
    return gens


def check_axioms_symbolic(R: MarkedERS) -> AxiomReport:
    rep = AxiomReport("symbolic")
    expect_middle = R.rank > 1
    shape_ok = bool(R.short) and bool(R.long) and bool(R.middle) == expect_middle
    rep.record("shape", shape_ok, f"nonempty classes {_present_classes(R)} at rank {R.rank}")
    if not (R.short and R.long):
        for c in CHECKS[1:]:
            rep.record(c, False, "short or long class empty")
        return rep

    bad = [c for c in CLASSES if R.translation[c].negate() != R.translation[c]]
    rep.record("symmetry", not bad, f"-T != T for {bad}")

    # finite parts: short roots span R^l, radical part must be all of Z a + Z b
    index = lattice_index(radical_generators(R))
    rep.record("axiom1", index == 1, f"radical part of Q(R) has index {index} in Za+Zb")
    rep.record("marking", index != 0, "G n Q(R) is not full in G")

    # finite parts are anisotropic and the radical is orthogonal to everything
    rep.record("axiom2", True)

    present = set(_present_classes(R))
    roots = [r for r in finite_roots(R.rank) if r.length_class in present]
    witness = ""
    for alpha in roots:
        for beta in roots:
            try:
                pairing(beta, alpha)
            except ArithmeticError:
                witness = f"I({beta}, {alpha}^v) not integral"
                break
        if witness:
            break
    rep.record("axiom3", not witness, witness)

    witness = ""
    for cond in sorted(closure_conditions(R.rank)):
        src = R.translation[cond.reflecting_class]
        dst = R.translation[cond.reflected_class]
        if not src or not dst:
            continue
        image = dst.scale_subtract(cond.k, src)
        target = R.translation[cond.image_class]
        extra = image - target
        if extra:
            witness = (
                f"{cond.reflected_class} translations minus {cond.k} x {cond.reflecting_class} "
                f"translations reach {extra.residues()[0]} mod {extra.modulus}, "
                f"outside the {cond.image_class} set"
            )
            break
    rep.record("axiom4", not witness, witness)

    rep.record("axiom5", class_graph_connected(R.rank, present), f"classes {sorted(present)} disconnected")
    return rep


# -- windowed oracle ---------------------------------------------------

def _hnf_det(rows: list[tuple[int, ...]], dim: int) -> int:
    """|det| of the lattice spanned by ``rows`` in Z^dim (0 if rank-deficient)."""
    pivots: dict[int, list[int]] = {}
    for r in rows:
        v = list(r)
        for col in range(dim):
            if v[col] == 0:
                continue
            if col not in pivots:
                if v[col] < 0:
                    v = [-x for x in v]
                pivots[col] = v
                break
            b = pivots[col]
            while v[col]:
                q = b[col] // v[col]
                b = [x - q * y for x, y in zip(b, v)]
                b, v = v, b
            if b[col] < 0:
                b = [-x for x in b]
            pivots[col] = b
    if len(pivots) < dim:
        return 0
    det = 1
    for col in range(dim):
        det *= pivots[col][col]
    return abs(det)


def _membership_table(R: MarkedERS) -> np.ndarray:
    table = np.zeros((len(CLASSES), 8, 8), dtype=bool)
    for ci, c in enumerate(CLASSES):
        T = R.translation[c]
        for m in range(8):
            for n in range(8):
                table[ci, m, n] = T.contains((m, n))
    return table


def _finite_lookup(rank: int):
    """Map a finite vector (entries in [-6, 6]) to its class index, -1 if not a root."""
    base = 13
    size = base**rank
    lut = np.full(size, -1, dtype=np.int8)
    for r in finite_roots(rank):
        key = sum((x + 6) * base**i for i, x in enumerate(r.coords))
        lut[key] = CLASSES.index(r.length_class)
    weights = base ** np.arange(rank)
    return lut, weights


def check_axioms_windowed(R: MarkedERS, bound: int = 3) -> AxiomReport:
    """Literal checks on the finitely many roots with ``|m|, |n| <= bound``."""
    rep = AxiomReport(f"windowed(B={bound})")
    l = R.rank
    roots = roots_in_window(R, bound)
    if not roots:
        for c in CHECKS:
            rep.record(c, False, "window contains no roots")
        return rep
    X = np.array(roots, dtype=np.int64)
    fin = X[:, :l]
    norms = (fin * fin).sum(axis=1)
    classes_seen = {CLASSES[{1: 0, 2: 1, 4: 2}[int(q)]] for q in np.unique(norms)}
    want = {SHORT, LONG} | ({MIDDLE} if l > 1 else set())
    rep.record("shape", classes_seen == want, f"classes in window {sorted(classes_seen)}")

    table = _membership_table(R)
    lut, weights = _finite_lookup(l)

    def member(V: np.ndarray) -> np.ndarray:
        f = V[..., :l]
        inside = (np.abs(f) <= 6).all(axis=-1)
        key = ((np.clip(f, -6, 6) + 6) * weights).sum(axis=-1)
        cls = np.where(inside, lut[key], -1)
        m = V[..., l] % 8
        n = V[..., l + 1] % 8
        return (cls >= 0) & table[np.maximum(cls, 0), m, n]

    neg_ok = member(-X)
    rep.record("symmetry", bool(neg_ok.all()), f"-({roots[int(np.argmin(neg_ok))]}) not a root")
    rep.record("axiom2", bool((norms != 0).all()), "isotropic root in window")

    gram = fin @ fin.T
    twice = 2 * gram
    integral = (twice % norms[:, None]) == 0
    if not integral.all():
        i, j = map(int, np.argwhere(~integral)[0])
        rep.record("axiom3", False, f"I({roots[j]}, {roots[i]}^v) not integral")
    else:
        rep.record("axiom3", True)
    k = twice // norms[:, None]  # k[i, j] = I(beta_j, alpha_i^v)

    witness = ""
    chunk = max(1, 200_000 // len(roots))
    for start in range(0, len(roots), chunk):
        A = X[start:start + chunk]
        K = k[start:start + chunk]
        images = X[None, :, :] - K[:, :, None] * A[:, None, :]
        ok = member(images)
        if not ok.all():
            i, j = map(int, np.argwhere(~ok)[0])
            witness = f"w_({roots[start + i]})({roots[j]}) = {tuple(int(x) for x in images[i, j])} not a root"
            break
    rep.record("axiom4", not witness, witness)

    det = _hnf_det(sorted(set(roots)), l + 2)
    rep.record("axiom1", det == 1, f"window roots span a sublattice of index {det} in Z^{l + 2}")
    rep.record("marking", det != 0, "window roots do not span the radical")

    adj = gram != 0
    seen = np.zeros(len(roots), dtype=bool)
    seen[0] = True
    frontier = seen.copy()
    while frontier.any():
        nxt = adj[frontier].any(axis=0) & ~seen
        seen |= nxt
        frontier = nxt
    rep.record("axiom5", bool(seen.all()), f"{int((~seen).sum())} window roots not connected to {roots[0]}")
    return rep


def verdicts_agree(a: AxiomReport, b: AxiomReport) -> bool:
    return a.ok == b.ok
