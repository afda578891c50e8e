"""Top-level decisions: blowup classes, diffeomorphism, minimal exceptional classes."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction

from .exceptional import DEFAULT_A_MAX, EnumerationResult, demazure_classes, enumerate_exceptional
from .formvec import ConeStatus, FormVector, cone_status, is_reduced, lorentz_norm
from .homology import (
    BACKWARD,
    HomologyClass,
    area,
    exceptional_divisor,
    line_through,
    transport,
)
from .reduction import DEFAULT_MAX_ITER, MoveTrace, reduce


class Reason(enum.Enum):
    REDUCED_POSITIVE = "ReducedPositive"
    NON_POSITIVE_ENTRY = "NonPositiveEntry"
    OUTSIDE_FORWARD_CONE = "OutsideForwardCone"
    GROMOV_FAIL = "GromovFail"
    VOLUME_FAIL = "VolumeFail"


class NotABlowupClass(ValueError):
    pass


@dataclass(frozen=True)
class ClassificationVerdict:
    is_blowup: bool
    reason: Reason
    v_red: FormVector | None = None
    trace: MoveTrace = field(default_factory=MoveTrace)

    def __bool__(self) -> bool:
        return self.is_blowup


def classify_blowup(v: FormVector, max_iter: int = DEFAULT_MAX_ITER) -> ClassificationVerdict:
    """Does the class encoded by ``v`` contain a blowup form?"""
    k = v.k
    if k >= 3:
        if cone_status(v) is not ConeStatus.FORWARD_POSITIVE:
            return ClassificationVerdict(False, Reason.OUTSIDE_FORWARD_CONE)
        res = reduce(v, max_iter)
        ok = all(x > 0 for x in res.v_red.entries)
        reason = Reason.REDUCED_POSITIVE if ok else Reason.NON_POSITIVE_ENTRY
        return ClassificationVerdict(ok, reason, res.v_red, res.trace)
    if any(x <= 0 for x in v.entries):
        return ClassificationVerdict(False, Reason.NON_POSITIVE_ENTRY)
    if k == 2 and v.deltas[0] + v.deltas[1] >= v.lam:
        return ClassificationVerdict(False, Reason.GROMOV_FAIL)
    if k == 1 and v.deltas[0] >= v.lam:
        return ClassificationVerdict(False, Reason.VOLUME_FAIL)
    return ClassificationVerdict(True, Reason.REDUCED_POSITIVE)


def _require_blowup(v: FormVector, max_iter: int) -> ClassificationVerdict:
    verdict = classify_blowup(v, max_iter)
    if not verdict.is_blowup:
        raise NotABlowupClass(f"{v} is not a blowup class ({verdict.reason.value})")
    return verdict


@dataclass(frozen=True)
class DiffeoResult:
    diffeomorphic: bool
    left: ClassificationVerdict
    right: ClassificationVerdict

    def __bool__(self) -> bool:
        return self.diffeomorphic


def diffeomorphic(v: FormVector, w: FormVector, max_iter: int = DEFAULT_MAX_ITER) -> DiffeoResult:
    """Compare two blowup classes by their reduced forms."""
    if v.k != w.k:
        raise ValueError(f"different numbers of blowups: k={v.k} vs k={w.k}")
    left = _require_blowup(v, max_iter)
    right = _require_blowup(w, max_iter)
    if v.k >= 3:
        same = left.v_red == right.v_red
    elif v.k == 2:
        same = v.lam == w.lam and sorted(v.deltas) == sorted(w.deltas)
    else:
        same = v == w
    return DiffeoResult(same, left, right)


@dataclass(frozen=True)
class MinimalClassReport:
    case_label: str
    classes: frozenset[HomologyClass]  # in the basis of the input vector
    min_area: Fraction | None
    reduced_classes: frozenset[HomologyClass] = frozenset()  # in the basis of v_red
    v_red: FormVector | None = None
    trace: MoveTrace = field(default_factory=MoveTrace)


def case_label(v: FormVector) -> str:
    """Which of 1a, 1b, 2a, 2b, 3a, 3b a reduced positive vector falls in."""
    if v.k < 3 or not is_reduced(v) or any(x <= 0 for x in v.entries):
        raise ValueError(f"{v} is not a reduced vector with positive entries")
    lam, d = v.lam, v.deltas
    lam_f = lam - d[0]
    last = d[-1]
    if 3 * d[0] <= lam:
        return "1b" if 3 * last == lam else "1a"
    if 2 * d[1] <= lam_f:
        return "2b" if 2 * last == lam_f else "2a"
    return "3b" if last == lam - d[0] - d[1] else "3a"


def minimal_classes_reduced(v: FormVector) -> tuple[str, frozenset[HomologyClass]]:
    """Minimal-area exceptional classes for a reduced vector with positive entries."""
    label = case_label(v)
    k, d = v.k, v.deltas
    if label == "1b":
        if k > 8:
            raise ValueError(f"{v} has all deltas equal to lambda/3 with k={k} > 8")
        return label, demazure_classes(k)
    smallest = frozenset(exceptional_divisor(l + 1, k) for l in range(k) if d[l] == d[-1])
    if label == "2b":
        return label, frozenset(
            [exceptional_divisor(l, k) for l in range(2, k + 1)]
            + [line_through(1, l, k) for l in range(2, k + 1)]
        )
    if label == "3b":
        return label, smallest | {line_through(1, 2, k)}
    return label, smallest


def _small_k_report(v: FormVector) -> MinimalClassReport:
    k = v.k
    if k == 0:
        return MinimalClassReport("k0", frozenset(), None)
    if k == 1:
        e1 = exceptional_divisor(1, 1)
        return MinimalClassReport("k1", frozenset([e1]), v.deltas[0], frozenset([e1]))
    # k = 2: the table assumes delta_1 >= delta_2; swapping E_1, E_2 is a diffeomorphism
    swapped = v.deltas[0] < v.deltas[1]
    lam = v.lam
    d1, d2 = sorted(v.deltas, reverse=True)
    lam_f = lam - d1
    e1, e2, e12 = exceptional_divisor(1, 2), exceptional_divisor(2, 2), line_through(1, 2, 2)
    if 2 * d2 < lam_f:
        label, cls, m = ("k2-sub1", {e2}, d2) if d2 < d1 else ("k2-sub2", {e1, e2}, d2)
    elif 2 * d2 == lam_f:
        label, cls, m = ("k2-sub3", {e2, e12}, d2) if d2 < d1 else ("k2-sub4", {e1, e2, e12}, d2)
    else:
        label, cls, m = "k2-sub5", {e12}, lam - d1 - d2
    reduced = frozenset(cls)
    if swapped:
        cls = {HomologyClass(A.a, A.b[::-1]) for A in cls}
    return MinimalClassReport(label, frozenset(cls), m, reduced)


def minimal_exceptional(v: FormVector, max_iter: int = DEFAULT_MAX_ITER) -> MinimalClassReport:
    """Exceptional classes of minimal area against ``v``, with the case label.

    For k >= 3 the vector is reduced, the reduced vector's case decides the
    set, and the set is carried back to the basis of ``v`` along the trace.
    """
    verdict = _require_blowup(v, max_iter)
    if v.k < 3:
        return _small_k_report(v)
    label, reduced = minimal_classes_reduced(verdict.v_red)
    classes = frozenset(transport(A, verdict.trace, BACKWARD) for A in reduced)
    min_area = verdict.v_red.deltas[-1]
    assert all(area(v, A) == min_area for A in classes)
    return MinimalClassReport(label, classes, min_area, reduced, verdict.v_red, verdict.trace)


@dataclass(frozen=True)
class ClassicalInvariants:
    volume_term: Fraction
    chern_pairing: Fraction


def classical_invariants(v: FormVector) -> ClassicalInvariants:
    """(lam^2 - sum delta^2, 3 lam - sum delta)."""
    return ClassicalInvariants(lorentz_norm(v), 3 * v.lam - sum(v.deltas, Fraction(0)))


def exceptional_below(v: FormVector, bound, a_max: int = DEFAULT_A_MAX,
                      max_iter: int = DEFAULT_MAX_ITER) -> EnumerationResult:
    """Exceptional classes of area <= bound against any blowup vector (k >= 3).

    The search runs against the reduced form and the results are carried
    back to the basis of ``v``; areas are unchanged by the transport.
    """
    if v.k < 3:
        raise ValueError("enumeration needs k >= 3")
    verdict = _require_blowup(v, max_iter)
    res = enumerate_exceptional(verdict.v_red, bound, a_max)
    classes = frozenset(transport(A, verdict.trace, BACKWARD) for A in res.classes)
    return EnumerationResult(classes, res.complete, res.a_reached, res.a_limit)
