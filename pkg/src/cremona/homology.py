"""Integer homology classes aL - b_1 E_1 - ... - b_k E_k of M_k."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .formvec import DimensionError, FormVector, MoveRecord, standard_move
from .reduction import Inconclusive, MoveTrace

FORWARD = "forward"
BACKWARD = "backward"


@dataclass(frozen=True, order=True)
class HomologyClass:
    """The class a*L - sum_j b[j]*E_{j+1}.

    Note the sign: E_1 itself is ``HomologyClass(0, (-1, 0, ...))``.
    """

    a: int
    b: tuple[int, ...] = ()

    def __post_init__(self):
        if isinstance(self.a, bool) or int(self.a) != self.a:
            raise TypeError(f"coefficient of L must be an integer, got {self.a!r}")
        object.__setattr__(self, "a", int(self.a))
        b = tuple(int(x) for x in self.b)
        if b != tuple(self.b):
            raise TypeError(f"coefficients must be integers, got {self.b!r}")
        object.__setattr__(self, "b", b)

    @property
    def k(self) -> int:
        return len(self.b)

    @classmethod
    def from_entries(cls, entries: Sequence[int]) -> HomologyClass:
        return cls(entries[0], tuple(entries[1:]))

    @property
    def entries(self) -> tuple[int, ...]:
        return (self.a,) + self.b

    def __str__(self) -> str:
        return format_class(self)

    def __repr__(self) -> str:
        return f"HomologyClass({self.a}; {', '.join(map(str, self.b))})"


def line(k: int) -> HomologyClass:
    """L."""
    return HomologyClass(1, (0,) * k)


def exceptional_divisor(i: int, k: int) -> HomologyClass:
    """E_i (1-based)."""
    if not 1 <= i <= k:
        raise ValueError(f"E_{i} does not exist for k={k}")
    b = [0] * k
    b[i - 1] = -1
    return HomologyClass(0, tuple(b))


def line_through(i: int, j: int, k: int) -> HomologyClass:
    """E_ij = L - E_i - E_j (1-based, i != j)."""
    if i == j or not (1 <= i <= k and 1 <= j <= k):
        raise ValueError(f"L - E_{i} - E_{j} is not defined for k={k}")
    b = [0] * k
    b[i - 1] = 1
    b[j - 1] = 1
    return HomologyClass(1, tuple(b))


def format_class(A: HomologyClass) -> str:
    """Human form such as ``2L - E1 - E2`` or ``E3`` (sign as in aL - sum b_j E_j)."""
    terms = []
    if A.a:
        terms.append((A.a > 0, "L", abs(A.a)))
    for j, bj in enumerate(A.b, start=1):
        if bj:
            terms.append((bj < 0, f"E{j}", abs(bj)))
    if not terms:
        return "0"
    out = []
    for n, (positive, name, c) in enumerate(terms):
        coef = "" if c == 1 else str(c)
        if n == 0:
            out.append(("" if positive else "-") + coef + name)
        else:
            out.append(("+ " if positive else "- ") + coef + name)
    return " ".join(out)


def _same_k(A: HomologyClass, B) -> None:
    if A.k != B.k:
        raise DimensionError(f"dimension mismatch: k={A.k} vs k={B.k}")


def intersection(A: HomologyClass, B: HomologyClass) -> int:
    _same_k(A, B)
    return A.a * B.a - sum(x * y for x, y in zip(A.b, B.b))


def chern(A: HomologyClass) -> int:
    """c_1(TM_k)(A) = 3a - sum b_j."""
    return 3 * A.a - sum(A.b)


def area(omega: FormVector, A: HomologyClass) -> Fraction:
    """Normalized symplectic area a*lam - sum b_j*delta_j."""
    _same_k(A, omega)
    return A.a * omega.lam - sum((bj * dj for bj, dj in zip(A.b, omega.deltas)), Fraction(0))


def cremona_class(A: HomologyClass) -> HomologyClass:
    """Lattice map dual to the Cremona transformation (same defect formula)."""
    if A.k < 3:
        raise ValueError(f"Cremona needs k >= 3, got k={A.k}")
    b = A.b
    d = b[0] + b[1] + b[2] - A.a
    return HomologyClass(A.a - d, (b[0] - d, b[1] - d, b[2] - d) + b[3:])


def _permute(A: HomologyClass, perm: Sequence[int]) -> HomologyClass:
    return HomologyClass(A.a, tuple(A.b[p] for p in perm))


def _unpermute(A: HomologyClass, perm: Sequence[int]) -> HomologyClass:
    b = [0] * A.k
    for i, p in enumerate(perm):
        b[p] = A.b[i]
    return HomologyClass(A.a, tuple(b))


def apply_move(A: HomologyClass, m: MoveRecord, direction: str = FORWARD) -> HomologyClass:
    """Act on a class by the lattice isometry behind one recorded move.

    Forward applies the same transformation the move applied to the form
    vector; backward applies its inverse, which is also its adjoint, so
    ``area(move(v), A) == area(v, apply_move(A, m, BACKWARD))``.
    """
    if len(m.perm) != A.k:
        raise DimensionError(f"move acts on k={len(m.perm)}, class has k={A.k}")
    if direction == FORWARD:
        A = _permute(A, m.perm)
        return cremona_class(A) if m.cremona_fired else A
    if direction == BACKWARD:
        if m.cremona_fired:
            A = cremona_class(A)
        return _unpermute(A, m.perm)
    raise ValueError(f"direction must be {FORWARD!r} or {BACKWARD!r}, got {direction!r}")


def transport(A: HomologyClass, trace: MoveTrace | Iterable[MoveRecord],
              direction: str = BACKWARD) -> HomologyClass:
    """Fold :func:`apply_move` over a trace.

    With ``trace = reduce(v).trace``, backward transport turns a class
    expressed against ``v_red`` into the class with the same area against ``v``.
    """
    records = tuple(trace)
    if direction == BACKWARD:
        records = records[::-1]
    elif direction != FORWARD:
        raise ValueError(f"direction must be {FORWARD!r} or {BACKWARD!r}, got {direction!r}")
    for m in records:
        A = apply_move(A, m, direction)
    return A


def is_exceptional(A: HomologyClass, max_iter: int = 10_000) -> bool:
    """Decide whether A is an exceptional class.

    Besides E.E = -1 and c_1(E) = 1, the coefficient vector (a; b) is run
    through standard Cremona moves; it must land on (0; 0, ..., 0, -1),
    the sorted form of E_k.  Every class in the orbit of an exceptional
    class is exceptional and therefore has a >= 0, so a negative L
    coefficient along the way is a certificate of non-membership.
    """
    if A.k < 3:
        raise ValueError(f"is_exceptional needs k >= 3, got k={A.k}")
    if intersection(A, A) != -1 or chern(A) != 1:
        return False
    target = FormVector(0, (0,) * (A.k - 1) + (-1,))
    v = FormVector.from_entries(A.entries)
    for _ in range(max_iter + 1):
        if v.lam < 0:
            return False
        if v == target:
            return True
        w, _rec = standard_move(v)
        if w == v:
            return False
        v = w
    raise Inconclusive(f"orbit certificate for {A!r} exceeded {max_iter} moves", v)
