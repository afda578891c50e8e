"""Reduction to canonical form, Lorentzian reflections, and chamber probes."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .formvec import (
    ConeStatus,
    FormVector,
    MoveRecord,
    as_rational,
    cone_status,
    defect,
    has_ties,
    is_reduced,
    lorentz_product,
    replay,
    sort_permutation,
    standard_move,
)

DEFAULT_MAX_ITER = 10_000


@dataclass(frozen=True)
class MoveTrace:
    records: tuple[MoveRecord, ...] = ()

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def replay(self, v: FormVector) -> FormVector:
        return replay(v, self.records)

    @property
    def cremona_count(self) -> int:
        return sum(1 for r in self.records if r.cremona_fired)


@dataclass(frozen=True)
class ReductionResult:
    v_red: FormVector
    trace: MoveTrace
    iterations: int
    cone: ConeStatus


class Inconclusive(Exception):
    """Raised when an iteration budget runs out before a definite answer.

    ``partial`` carries whatever state was reached.
    """

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


def reduce(v: FormVector, max_iter: int = DEFAULT_MAX_ITER) -> ReductionResult:
    """Apply standard Cremona moves until the vector is reduced.

    Termination is guaranteed inside the forward positive cone; elsewhere the
    loop may run out of budget, in which case :class:`Inconclusive` is raised
    with the partial :class:`ReductionResult` attached.
    """
    if v.k < 3:
        raise ValueError(f"reduction needs k >= 3, got k={v.k}")
    if max_iter < 1:
        raise ValueError("max_iter must be positive")
    cone = cone_status(v)
    records: list[MoveRecord] = []
    w = v
    while not is_reduced(w):
        if len(records) >= max_iter:
            partial = ReductionResult(w, MoveTrace(tuple(records)), len(records), cone)
            raise Inconclusive(
                f"{v} not reduced after {max_iter} standard moves (cone: {cone.value})",
                partial,
            )
        w, rec = standard_move(w)
        records.append(rec)
    return ReductionResult(w, MoveTrace(tuple(records)), len(records), cone)


def reflect(v: FormVector, e: FormVector) -> FormVector:
    """Lorentzian reflection of ``v`` through the hyperplane orthogonal to ``e``."""
    ee = lorentz_product(e, e)
    if ee == 0:
        raise ValueError(f"cannot reflect through null vector {e}")
    c = 2 * lorentz_product(v, e) / ee
    return v - e.scaled(c)


def path_on_wall(v: FormVector, max_iter: int = DEFAULT_MAX_ITER) -> bool:
    """True if the reduction path of ``v`` touches a sorting or Cremona wall.

    A wall is met when a visited vector has two equal deltas or when the
    sorted vector has defect exactly zero; the terminal reduced vector is
    checked too.
    """
    return _touches_wall(reduce(v, max_iter))


def _touches_wall(res: ReductionResult) -> bool:
    if any(r.on_wall for r in res.trace):
        return True
    w = res.v_red
    return has_ties(w.deltas) or defect(w) == 0


def _radical_inverse(n: int, base: int) -> Fraction:
    q, denom = Fraction(0), 1
    while n:
        n, digit = divmod(n, base)
        denom *= base
        q += Fraction(digit, denom)
    return q


_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71)


def _primes(n: int) -> list[int]:
    if n <= len(_PRIMES):
        return list(_PRIMES[:n])
    out = list(_PRIMES)
    c = out[-1] + 2
    while len(out) < n:
        if all(c % p for p in out if p * p <= c):
            out.append(c)
        c += 2
    return out


def perturbations(v: FormVector, radius, samples: int, seed: int) -> list[FormVector]:
    """Rational points in the max-norm ball of ``radius`` around ``v``.

    The offsets come from a Halton sequence with a seeded rational shift
    (Cranley-Patterson rotation), so the output is exact and reproducible.
    """
    radius = as_rational(radius)
    dim = v.k + 1
    rng = random.Random(seed)
    shift = [Fraction(rng.randrange(1, 1000), 1000) for _ in range(dim)]
    bases = _primes(dim)
    out = []
    for n in range(1, samples + 1):
        offs = []
        for b, s in zip(bases, shift):
            u = _radical_inverse(n, b) + s
            u -= int(u)
            offs.append(radius * (2 * u - 1))
        out.append(v + FormVector.from_entries(offs))
    return out


@dataclass(frozen=True)
class ProbeReport:
    constant_trace: bool
    hyperplane_hits: int
    samples: int
    center_on_wall: bool
    differing: tuple[FormVector, ...] = field(default=(), repr=False)


def chamber_probe(v: FormVector, radius, samples: int = 64, seed: int = 0,
                  max_iter: int = DEFAULT_MAX_ITER) -> ProbeReport:
    """Reduce sampled neighbours of ``v`` and compare their traces with v's."""
    if cone_status(v) is not ConeStatus.FORWARD_POSITIVE:
        raise ValueError(f"{v} is not in the forward positive cone")
    radius = as_rational(radius)
    if radius <= 0:
        raise ValueError("radius must be positive")
    if samples < 1:
        raise ValueError("samples must be positive")
    center = reduce(v, max_iter)
    base = center.trace
    hits = 0
    differing = []
    for w in perturbations(v, radius, samples, seed):
        if cone_status(w) is not ConeStatus.FORWARD_POSITIVE:
            raise ValueError(f"radius {radius} leaves the forward positive cone at {w}")
        res = reduce(w, max_iter)
        if _touches_wall(res):
            hits += 1
        if res.trace != base:
            differing.append(w)
    return ProbeReport(
        constant_trace=not differing,
        hyperplane_hits=hits,
        samples=samples,
        center_on_wall=_touches_wall(center),
        differing=tuple(differing),
    )


__all__ = [
    "DEFAULT_MAX_ITER",
    "Inconclusive",
    "MoveRecord",
    "MoveTrace",
    "ProbeReport",
    "ReductionResult",
    "chamber_probe",
    "path_on_wall",
    "perturbations",
    "reduce",
    "reflect",
    "sort_permutation",
]
