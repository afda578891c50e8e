"""Acceptance criteria, one test per criterion.

The conftest prints a pass/fail line per criterion at the end of the run.
"""
import itertools
import random
from fractions import Fraction as F

from cremona.classify import (
    Reason,
    case_label,
    classical_invariants,
    classify_blowup,
    diffeomorphic,
    minimal_exceptional,
)
from cremona.exceptional import demazure_classes, enumerate_exceptional
from cremona.formvec import (
    ConeStatus,
    FormVector,
    cone_status,
    cremona,
    is_reduced,
    lorentz_norm,
    standard_move,
)
from cremona.homology import (
    BACKWARD,
    HomologyClass,
    apply_move,
    area,
    chern,
    exceptional_divisor as E,
    intersection,
    is_exceptional,
    line_through as L2,
    transport,
)
from cremona.reduction import chamber_probe, path_on_wall, reduce

from oracles import demazure_count, orbit_of_e1
from sampling import CASE_LABELS, forward_cone_vector, reduced_vector

V = FormVector.of
EXAMPLE_ROWS = (V(15, 9, 5, 4), V(12, 6, 2, 1), V(11, 4, 1, 1))


def test_criterion_1_example_rows():
    a, b, c = EXAMPLE_ROWS
    assert diffeomorphic(a, b).diffeomorphic is True
    assert diffeomorphic(a, c).diffeomorphic is False
    assert diffeomorphic(b, c).diffeomorphic is False
    for v in EXAMPLE_ROWS:
        assert classify_blowup(v).is_blowup
        inv = classical_invariants(v)
        assert inv.volume_term == F(103) and inv.chern_pairing == F(27)


def test_criterion_2_six_point_reduction():
    for d in (F(7, 20), F(11, 30), F(39, 100)):
        assert F(1, 3) < d < F(2, 5)
        res = reduce(V(1, *[d] * 6))
        assert res.iterations == 3
        assert [r.cremona_fired for r in res.trace] == [True] * 3
        assert res.v_red == V(5 - 12 * d, *[2 - 5 * d] * 6)
        assert is_reduced(res.v_red) and all(x > 0 for x in res.v_red.entries)
    assert reduce(V(1, *[F(7, 20)] * 6)).v_red == V(F(4, 5), *[F(1, 4)] * 6)


def test_criterion_3_demazure_counts():
    expected = {3: 6, 4: 10, 5: 16, 6: 27, 7: 56, 8: 240}
    for k, n in expected.items():
        classes = demazure_classes(k)
        assert len(classes) == n == demazure_count(k)
        for A in classes:
            assert intersection(A, A) == -1 and chern(A) == 1


def test_criterion_4_minimal_classes_match_enumeration():
    fixtures = {
        V(12, 6, 2, 1): ("2a", {E(3, 3)}),
        V(4, 2, 1, 1, 1): ("2b", {E(2, 4), E(3, 4), E(4, 4),
                                  L2(1, 2, 4), L2(1, 3, 4), L2(1, 4, 4)}),
        V(5, 2, 2, 1, 1): ("3b", {L2(1, 2, 4), E(3, 4), E(4, 4)}),
    }
    for v, (label, expected) in fixtures.items():
        rep = minimal_exceptional(v)
        assert rep.case_label == label and rep.classes == expected
        res = enumerate_exceptional(v, v.deltas[-1])
        assert res.complete and res.classes == expected

    rng = random.Random(20240604)
    for label in CASE_LABELS:
        for _ in range(200):
            v = reduced_vector(rng, label, rng.randint(3, 8))
            assert case_label(v) == label
            rep = minimal_exceptional(v)
            assert rep.case_label == label and rep.v_red == v
            res = enumerate_exceptional(rep.v_red, rep.v_red.deltas[-1])
            assert res.complete
            assert rep.classes == res.classes


def test_criterion_5_move_calculus():
    rng = random.Random(5)
    for _ in range(1000):
        k = rng.randint(3, 10)
        v = forward_cone_vector(rng, k)
        assert cremona(cremona(v)) == v
        assert cone_status(cremona(v)) is ConeStatus.FORWARD_POSITIVE
        w, m = standard_move(v)
        assert (w == v) == is_reduced(v)

        res = reduce(v, max_iter=10_000)
        assert lorentz_norm(res.v_red) == lorentz_norm(v)
        assert cone_status(res.v_red) is ConeStatus.FORWARD_POSITIVE
        assert is_reduced(res.v_red)
        assert reduce(res.v_red).v_red == res.v_red
        assert res.trace.replay(v) == res.v_red

        A = HomologyClass(rng.randint(-3, 6), tuple(rng.randint(-6, 6) for _ in range(k)))
        assert area(w, A) == area(v, apply_move(A, m, BACKWARD))
        assert area(res.v_red, A) == area(v, transport(A, res.trace, BACKWARD))


def test_criterion_6_exceptional_certificate():
    for k in (3, 4, 5):
        orbit = orbit_of_e1(k, depth=12)
        for b in itertools.product(range(-6, 7), repeat=k):
            sq = sum(x * x for x in b)
            s = sum(b)
            for a in range(7):
                expected = a * a - sq == -1 and 3 * a - s == 1 and (a,) + b in orbit
                assert is_exceptional(HomologyClass(a, b)) == expected, (a, b)


def test_criterion_7_small_k_rules():
    rows = [
        (V(1, F(1, 4), F(1, 8)), "k2-sub1", {E(2, 2)}),
        (V(1, F(1, 4), F(1, 4)), "k2-sub2", {E(1, 2), E(2, 2)}),
        (V(1, F(1, 2), F(1, 4)), "k2-sub3", {E(2, 2), L2(1, 2, 2)}),
        (V(1, F(1, 3), F(1, 3)), "k2-sub4", {E(1, 2), E(2, 2), L2(1, 2, 2)}),
        (V(1, F(1, 2), F(1, 3)), "k2-sub5", {L2(1, 2, 2)}),
    ]
    for v, label, expected in rows:
        rep = minimal_exceptional(v)
        assert rep.case_label == label and rep.classes == expected
        # direct check against the three exceptional classes for k = 2
        areas = {A: area(v, A) for A in demazure_classes(2)}
        low = min(areas.values())
        assert rep.min_area == low
        assert expected == {A for A, x in areas.items() if x == low}

    rng = random.Random(7)
    accepted = rejected = 0
    for _ in range(100):
        lam = F(rng.randint(-1, 8), 4)
        d1, d2 = (F(rng.randint(-1, 8), 8) for _ in range(2))
        v = V(lam, d1, d2)
        inside = lam > 0 and d1 > 0 and d2 > 0 and d1 + d2 < lam
        verdict = classify_blowup(v)
        assert verdict.is_blowup == inside
        if not inside and lam > 0 and d1 > 0 and d2 > 0:
            assert verdict.reason is Reason.GROMOV_FAIL
        accepted += inside
        rejected += not inside
    assert accepted >= 10 and rejected >= 10


def test_criterion_8_continuity_probe():
    rng = random.Random(8)
    probed = 0
    while probed < 50:
        v = forward_cone_vector(rng, rng.randint(3, 10), den=rng.choice([6, 7, 12]))
        # a margin from the null cone keeps the whole probe box in the forward cone
        if lorentz_norm(v) * 10 < v.lam ** 2 or path_on_wall(v):
            continue
        rep = chamber_probe(v, v.lam / 1000, samples=64, seed=probed)
        assert rep.constant_trace, v
        assert rep.hyperplane_hits == 0
        probed += 1

