"""Enumeration of exceptional classes.

Two routes: the closed Demazure list for k <= 8, and a bounded backtracking
search below an area threshold that works for any k.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .formvec import ConeStatus, FormVector, as_rational, cone_status, is_reduced, lorentz_norm
from .homology import HomologyClass, area, chern, intersection, is_exceptional

DEFAULT_A_MAX = 64


@dataclass(frozen=True)
class DemazureType:
    a: int
    b_multiset: tuple[tuple[int, int], ...]  # (value, multiplicity), zeros implicit

    @property
    def support(self) -> int:
        return sum(m for _, m in self.b_multiset)

    def padded(self, k: int) -> list[int]:
        out = [v for v, m in self.b_multiset for _ in range(m)]
        return out + [0] * (k - len(out))


DEMAZURE_TYPES = (
    DemazureType(0, ((-1, 1),)),
    DemazureType(1, ((1, 2),)),
    DemazureType(2, ((1, 5),)),
    DemazureType(3, ((2, 1), (1, 6))),
    DemazureType(4, ((2, 3), (1, 5))),
    DemazureType(5, ((2, 6), (1, 2))),
    DemazureType(6, ((3, 1), (2, 7))),
)


def distinct_permutations(items) -> Iterator[tuple]:
    """Each distinct ordering of a multiset exactly once."""
    counts: dict = {}
    for x in items:
        counts[x] = counts.get(x, 0) + 1
    keys = sorted(counts)
    n = len(items)
    out: list = []

    def rec():
        if len(out) == n:
            yield tuple(out)
            return
        for x in keys:
            if counts[x]:
                counts[x] -= 1
                out.append(x)
                yield from rec()
                out.pop()
                counts[x] += 1

    yield from rec()


def demazure_classes(k: int) -> frozenset[HomologyClass]:
    """All exceptional classes of M_k for 1 <= k <= 8."""
    if not 1 <= k <= 8:
        raise ValueError(f"the exceptional set is finite and tabulated only for 1 <= k <= 8, got {k}")
    classes = set()
    for t in DEMAZURE_TYPES:
        if t.support > k:
            continue
        for b in distinct_permutations(t.padded(k)):
            classes.add(HomologyClass(t.a, b))
    return frozenset(classes)


@dataclass(frozen=True)
class EnumerationResult:
    classes: frozenset[HomologyClass]
    complete: bool
    a_reached: int
    a_limit: int | None = None  # first level known to exceed the bound


def level_exceeds_bound(omega: FormVector, bound: Fraction, a: int) -> bool:
    """True if no class with E.E = -1 and L-coefficient >= a has area <= bound.

    Splitting (a; b) = x/N * omega + w with w Lorentz-orthogonal to omega
    (N = <omega, omega> > 0, x the area) gives
    a*N - x*lam <= |delta| * sqrt(N + x^2), and the right side grows with x.
    Squared out, the test is exact.
    """
    n = lorentz_norm(omega)
    s = sum((d * d for d in omega.deltas), Fraction(0))
    lhs = a * n - bound * omega.lam
    return lhs > 0 and lhs * lhs > s * (n + bound * bound)


def first_closed_level(omega: FormVector, bound: Fraction) -> int:
    a = 0
    while not level_exceeds_bound(omega, bound, a):
        a += 1
    return a


def _level_solutions(a: int, deltas: tuple[Fraction, ...], lam: Fraction,
                     bound: Fraction) -> Iterator[tuple[int, ...]]:
    """b in [0, a]^k with sum 3a-1, sum of squares a^2+1 and area <= bound.

    ``deltas`` must be weakly decreasing and positive.  Inside a run of equal
    deltas only non-increasing b are produced; callers expand those runs.
    """
    k = len(deltas)
    target_sum = 3 * a - 1
    target_sq = a * a + 1
    need = a * lam - bound  # sum b_j delta_j must reach this
    same_as_prev = [j > 0 and deltas[j] == deltas[j - 1] for j in range(k)]
    # suffix capacity greedy: best sum b_j delta_j for positions >= j with total r
    b = [0] * k

    def greedy(j: int, r: int) -> Fraction:
        total = Fraction(0)
        while r > 0 and j < k:
            take = min(a, r)
            total += take * deltas[j]
            r -= take
            j += 1
        return total

    def rec(j: int, r: int, q: int, acc: Fraction):
        slots = k - j
        if r < 0 or q < r:
            return
        if r > slots * a:
            return
        if slots == 0:
            if r == 0 and q == 0 and acc >= need:
                yield tuple(b)
            return
        full, rem = divmod(r, a)
        if q > full * a * a + rem * rem:
            return
        t, s = divmod(r, slots)
        if q < (slots - s) * t * t + s * (t + 1) * (t + 1):
            return
        if acc + greedy(j, r) < need:
            return
        hi = min(a, r)
        if same_as_prev[j]:
            hi = min(hi, b[j - 1])
        for x in range(hi, -1, -1):
            b[j] = x
            yield from rec(j + 1, r - x, q - x * x, acc + x * deltas[j])
        b[j] = 0

    yield from rec(0, target_sum, target_sq, Fraction(0))


def _expand_runs(b: tuple[int, ...], deltas: tuple[Fraction, ...]) -> Iterator[tuple[int, ...]]:
    runs = []
    start = 0
    for j in range(1, len(deltas) + 1):
        if j == len(deltas) or deltas[j] != deltas[start]:
            runs.append((start, j))
            start = j

    def rec(i: int, prefix: tuple):
        if i == len(runs):
            yield prefix
            return
        s, e = runs[i]
        for perm in distinct_permutations(b[s:e]):
            yield from rec(i + 1, prefix + perm)

    yield from rec(0, ())


def enumerate_exceptional(omega: FormVector, bound, a_max: int = DEFAULT_A_MAX,
                          certify: bool = True) -> EnumerationResult:
    """All exceptional classes with area against ``omega`` at most ``bound``.

    ``omega`` must be reduced, forward-positive and have positive entries;
    then every exceptional class other than the E_j satisfies
    0 <= b_j <= a.  Levels a = 1, 2, ... are searched until
    :func:`level_exceeds_bound` closes the search (``complete=True``) or
    ``a_max`` is passed (``complete=False``).
    """
    bound = as_rational(bound)
    if cone_status(omega) is not ConeStatus.FORWARD_POSITIVE:
        raise ValueError(f"{omega} is not in the forward positive cone")
    if omega.k < 3:
        raise ValueError("enumeration needs k >= 3")
    if not is_reduced(omega) or omega.lam <= 0 or any(d <= 0 for d in omega.deltas):
        raise ValueError(f"{omega} must be reduced with positive entries; reduce first")
    k = omega.k
    found = set()
    for j, d in enumerate(omega.deltas):
        if d <= bound:
            b = [0] * k
            b[j] = -1
            found.add(HomologyClass(0, tuple(b)))
    a = 1
    complete = False
    while a <= a_max:
        if level_exceeds_bound(omega, bound, a):
            complete = True
            break
        for b in _level_solutions(a, omega.deltas, omega.lam, bound):
            for bb in _expand_runs(b, omega.deltas):
                A = HomologyClass(a, bb)
                if certify and not is_exceptional(A):
                    continue
                found.add(A)
        a += 1
    if not complete and level_exceeds_bound(omega, bound, a):
        complete = True
    limit = a if complete else None
    result = frozenset(found)
    for A in result:
        assert intersection(A, A) == -1 and chern(A) == 1 and area(omega, A) <= bound
    return EnumerationResult(result, complete, a - 1, limit)
