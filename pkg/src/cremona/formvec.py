"""Exact form vectors (lambda; delta_1, ..., delta_k) and the standard Cremona move.

All arithmetic is done with :class:`fractions.Fraction`, so every comparison
made by the decision procedures (reducedness, cone membership, defect sign)
is exact.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence


def as_rational(x) -> Fraction:
    """Convert an int, Fraction or numeric string ("7/20", "0.35") exactly.

    Floats are refused: a binary float almost never denotes the rational
    the caller had in mind.
    """
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not an exact rational: {x!r}") from exc
    raise TypeError(f"cannot convert {type(x).__name__} exactly; pass int, Fraction or str")


def format_rational(q: Fraction) -> str:
    """Canonical string form, "p" or "p/q"."""
    return str(q)


class DimensionError(ValueError):
    pass


@dataclass(frozen=True)
class FormVector:
    """The vector (lam; deltas) encoding a class in H^2(M_k; R)."""

    lam: Fraction
    deltas: tuple[Fraction, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "lam", as_rational(self.lam))
        object.__setattr__(self, "deltas", tuple(as_rational(d) for d in self.deltas))

    @classmethod
    def of(cls, lam, *deltas) -> FormVector:
        return cls(lam, tuple(deltas))

    @classmethod
    def from_entries(cls, entries: Sequence) -> FormVector:
        if len(entries) == 0:
            raise ValueError("a form vector needs at least the lambda entry")
        return cls(entries[0], tuple(entries[1:]))

    @property
    def k(self) -> int:
        return len(self.deltas)

    @property
    def entries(self) -> tuple[Fraction, ...]:
        return (self.lam,) + self.deltas

    def __iter__(self):
        return iter(self.entries)

    def __str__(self) -> str:
        if not self.deltas:
            return f"({self.lam})"
        return f"({self.lam}; {', '.join(str(d) for d in self.deltas)})"

    def __repr__(self) -> str:
        return f"FormVector{self}"

    def permuted(self, perm: Sequence[int]) -> FormVector:
        """Return the vector whose i-th delta is ``self.deltas[perm[i]]``."""
        return FormVector(self.lam, tuple(self.deltas[p] for p in perm))

    def scaled(self, c) -> FormVector:
        c = as_rational(c)
        return FormVector(self.lam * c, tuple(d * c for d in self.deltas))

    def __add__(self, other: FormVector) -> FormVector:
        _same_k(self, other)
        return FormVector(self.lam + other.lam,
                          tuple(x + y for x, y in zip(self.deltas, other.deltas)))

    def __sub__(self, other: FormVector) -> FormVector:
        _same_k(self, other)
        return FormVector(self.lam - other.lam,
                          tuple(x - y for x, y in zip(self.deltas, other.deltas)))


class ConeStatus(enum.Enum):
    FORWARD_POSITIVE = "ForwardPositive"
    BOUNDARY = "Boundary"
    OUTSIDE = "Outside"


@dataclass(frozen=True)
class MoveRecord:
    """One standard Cremona move: a sort permutation, then maybe a Cremona step.

    ``perm[i]`` is the index (0-based) of the pre-move delta that lands in
    slot ``i``.  Only ``perm`` and ``cremona_fired`` take part in equality;
    ``defect`` and ``tie`` are diagnostics used by the chamber probe.
    """

    perm: tuple[int, ...]
    cremona_fired: bool
    defect: Fraction | None = field(default=None, compare=False)
    tie: bool = field(default=False, compare=False)

    @property
    def is_identity_perm(self) -> bool:
        return all(i == p for i, p in enumerate(self.perm))

    @property
    def on_wall(self) -> bool:
        return self.tie or self.defect == 0


def _same_k(u: FormVector, v: FormVector) -> None:
    if u.k != v.k:
        raise DimensionError(f"dimension mismatch: k={u.k} vs k={v.k}")


def _need_three(v: FormVector) -> None:
    if v.k < 3:
        raise ValueError(f"operation needs k >= 3, got k={v.k}")


def lorentz_product(u: FormVector, v: FormVector) -> Fraction:
    _same_k(u, v)
    return u.lam * v.lam - sum((x * y for x, y in zip(u.deltas, v.deltas)), Fraction(0))


def lorentz_norm(v: FormVector) -> Fraction:
    """<v, v> = lam^2 - sum delta_j^2."""
    return lorentz_product(v, v)


def defect(v: FormVector) -> Fraction:
    """delta_1 + delta_2 + delta_3 - lam, on the entries as stored."""
    _need_three(v)
    d = v.deltas
    return d[0] + d[1] + d[2] - v.lam


def cremona(v: FormVector) -> FormVector:
    _need_three(v)
    d = defect(v)
    head = tuple(x - d for x in v.deltas[:3])
    return FormVector(v.lam - d, head + v.deltas[3:])


def sort_permutation(values: Sequence) -> tuple[int, ...]:
    """Stable permutation putting ``values`` in weakly decreasing order."""
    return tuple(sorted(range(len(values)), key=lambda i: -values[i]))


def has_ties(values: Sequence) -> bool:
    return len(set(values)) < len(values)


def standard_move(v: FormVector) -> tuple[FormVector, MoveRecord]:
    _need_three(v)
    perm = sort_permutation(v.deltas)
    w = v.permuted(perm)
    d = defect(w)
    fired = d >= 0
    if fired:
        w = cremona(w)
    return w, MoveRecord(perm, fired, defect=d, tie=has_ties(v.deltas))


def is_sorted_desc(values: Sequence) -> bool:
    return all(values[i] >= values[i + 1] for i in range(len(values) - 1))


def is_reduced(v: FormVector) -> bool:
    _need_three(v)
    d = v.deltas
    return is_sorted_desc(d) and d[0] + d[1] + d[2] <= v.lam


def cone_status(v: FormVector) -> ConeStatus:
    n = lorentz_norm(v)
    if v.lam > 0 and n > 0:
        return ConeStatus.FORWARD_POSITIVE
    if v.lam >= 0 and n == 0:
        return ConeStatus.BOUNDARY
    return ConeStatus.OUTSIDE


def replay(v: FormVector, records: Iterable[MoveRecord]) -> FormVector:
    """Apply recorded moves to ``v`` without re-deciding anything."""
    for rec in records:
        v = v.permuted(rec.perm)
        if rec.cremona_fired:
            v = cremona(v)
    return v
