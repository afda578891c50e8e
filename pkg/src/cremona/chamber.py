"""Integer (-2)-vectors and the reflection hyperplanes they cut out."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .formvec import FormVector, lorentz_product


@dataclass(frozen=True)
class RootVector:
    """An integer vector e with <e, e> = -2; reflection in e is integral."""

    e: FormVector

    def __post_init__(self):
        if any(x.denominator != 1 for x in self.e.entries):
            raise ValueError(f"root {self.e} must have integer entries")
        if lorentz_product(self.e, self.e) != -2:
            raise ValueError(f"root {self.e} must satisfy <e,e> = -2")

    @classmethod
    def of(cls, *entries) -> RootVector:
        return cls(FormVector.from_entries(entries))

    def __str__(self) -> str:
        return str(self.e)


def cremona_root(k: int) -> RootVector:
    """(1; 1, 1, 1, 0, ..., 0): reflection in it is the Cremona transformation."""
    if k < 3:
        raise ValueError("the Cremona root needs k >= 3")
    return RootVector(FormVector(1, (1, 1, 1) + (0,) * (k - 3)))


def transposition_roots(k: int) -> list[RootVector]:
    """(0; ..., -1, 1, ...) swapping delta_i and delta_{i+1}, for i = 1..k-1."""
    out = []
    for i in range(k - 1):
        d = [0] * k
        d[i], d[i + 1] = -1, 1
        out.append(RootVector(FormVector(0, tuple(d))))
    return out


def incident_roots(v: FormVector, height_bound: int) -> frozenset[RootVector]:
    """Every (-2)-root with entries in [-h, h] whose hyperplane contains ``v``.

    Exhaustive within the height bound and nothing more: there is no global
    height bound for the roots meeting a neighbourhood of ``v``.
    """
    if height_bound < 1:
        raise ValueError("height_bound must be positive")
    h = height_bound
    k = v.k
    found = set()
    delta = v.deltas
    for e0 in range(-h, h + 1):
        # need sum e_j^2 = e0^2 + 2 and sum e_j delta_j = e0 * lam
        sq_target = e0 * e0 + 2
        dot_target = e0 * v.lam
        es = [0] * k

        def rec(j: int, sq_left: int, dot_acc: Fraction):
            if j == k:
                if sq_left == 0 and dot_acc == dot_target:
                    found.add(RootVector(FormVector(e0, tuple(es))))
                return
            for x in range(-h, h + 1):
                if x * x > sq_left:
                    continue
                es[j] = x
                rec(j + 1, sq_left - x * x, dot_acc + x * delta[j])
            es[j] = 0

        rec(0, sq_target, Fraction(0))
    return frozenset(found)
