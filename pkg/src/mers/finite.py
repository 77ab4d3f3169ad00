"""Finite root data of type BC_l in the orthonormal basis eps_1..eps_l."""

from __future__ import annotations

from functools import lru_cache
from typing import NamedTuple

SHORT, MIDDLE, LONG = "short", "middle", "long"
CLASSES = (SHORT, MIDDLE, LONG)
SQUARED_LENGTH = {SHORT: 1, MIDDLE: 2, LONG: 4}
_CLASS_OF_LENGTH = {v: k for k, v in SQUARED_LENGTH.items()}


class FiniteRoot(NamedTuple):
    coords: tuple[int, ...]
    length_class: str

    @property
    def rank(self) -> int:
        return len(self.coords)

    def __str__(self) -> str:
        terms = []
        for i, c in enumerate(self.coords, 1):
            if c:
                sign = "-" if c < 0 else "+"
                mag = "" if abs(c) == 1 else str(abs(c))
                terms.append(f"{sign}{mag}e{i}")
        s = "".join(terms)
        return s[1:] if s.startswith("+") else s


class ClosureCondition(NamedTuple):
    """Reflection of a ``reflected_class`` root by a ``reflecting_class`` root.

    ``k`` is the pairing ``I(beta, alpha^vee)``; the image lies in ``image_class``.
    """

    reflecting_class: str
    reflected_class: str
    image_class: str
    k: int


def classify_vector(coords: tuple[int, ...]) -> str | None:
    """Length class of ``coords`` if it is a root of BC_l, else None."""
    nz = [c for c in coords if c]
    if len(nz) == 1 and abs(nz[0]) in (1, 2):
        return SHORT if abs(nz[0]) == 1 else LONG
    if len(nz) == 2 and all(abs(c) == 1 for c in nz):
        return MIDDLE
    return None


@lru_cache(maxsize=None)
def finite_roots(rank: int) -> tuple[FiniteRoot, ...]:
    """All roots of BC_l: short ``±e_i``, middle ``±e_i±e_j``, long ``±2e_i``."""
    if rank < 1:
        raise ValueError(f"rank must be at least 1, got {rank}")

    def unit(i: int, c: int) -> list[int]:
        v = [0] * rank
        v[i] = c
        return v

    roots = [FiniteRoot(tuple(unit(i, s)), SHORT) for i in range(rank) for s in (1, -1)]
    for i in range(rank):
        for j in range(i + 1, rank):
            for si in (1, -1):
                for sj in (1, -1):
                    v = unit(i, si)
                    v[j] = sj
                    roots.append(FiniteRoot(tuple(v), MIDDLE))
    roots += [FiniteRoot(tuple(unit(i, 2 * s)), LONG) for i in range(rank) for s in (1, -1)]
    return tuple(roots)


def roots_of_class(rank: int, cls: str) -> tuple[FiniteRoot, ...]:
    return tuple(r for r in finite_roots(rank) if r.length_class == cls)


def inner(alpha, beta) -> int:
    a = getattr(alpha, "coords", alpha)
    b = getattr(beta, "coords", beta)
    if len(a) != len(b):
        raise ValueError(f"rank mismatch: {len(a)} vs {len(b)}")
    return sum(x * y for x, y in zip(a, b))


def coroot(alpha) -> tuple[tuple[int, ...], int]:
    """Coroot ``2 alpha / I(alpha, alpha)`` as ``(numerator, 2)``.

    Coordinates of BC_l coroots are half-integers at worst, so a fixed
    denominator of 2 keeps everything integral.
    """
    a = getattr(alpha, "coords", alpha)
    norm = inner(a, a)
    if norm == 0:
        raise ValueError("zero vector has no coroot")
    num = [4 * x for x in a]
    if any(x % norm for x in num):
        raise ValueError(f"coroot of {a} is not half-integral")
    return tuple(x // norm for x in num), 2


def pairing(beta, alpha) -> int:
    """``I(beta, alpha^vee)``; raises if it is not an integer."""
    num, den = coroot(alpha)
    val = inner(beta, num)
    if val % den:
        raise ArithmeticError(f"non-integral pairing of {beta} with coroot of {alpha}")
    return val // den


def reflect_finite(alpha: FiniteRoot, beta: FiniteRoot) -> tuple[FiniteRoot, int]:
    k = pairing(beta, alpha)
    coords = tuple(b - k * a for a, b in zip(alpha.coords, beta.coords))
    cls = classify_vector(coords)
    if cls is None:
        raise AssertionError(f"reflection of {beta} by {alpha} left BC_{alpha.rank}")
    return FiniteRoot(coords, cls), k


@lru_cache(maxsize=None)
def closure_conditions(rank: int) -> frozenset[ClosureCondition]:
    out = set()
    roots = finite_roots(rank)
    for alpha in roots:
        for beta in roots:
            gamma, k = reflect_finite(alpha, beta)
            out.add(ClosureCondition(alpha.length_class, beta.length_class, gamma.length_class, k))
    return frozenset(out)


def class_graph_connected(rank: int, classes) -> bool:
    """Whether the finite roots in ``classes`` form one component under I != 0."""
    roots = [r for r in finite_roots(rank) if r.length_class in classes]
    if not roots:
        return False
    seen = {0}
    stack = [0]
    while stack:
        i = stack.pop()
        for j, r in enumerate(roots):
            if j not in seen and inner(roots[i], r) != 0:
                seen.add(j)
                stack.append(j)
    return len(seen) == len(roots)
