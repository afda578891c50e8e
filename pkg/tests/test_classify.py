import random
from fractions import Fraction as F

import pytest

from cremona.classify import (
    NotABlowupClass,
    Reason,
    case_label,
    classical_invariants,
    classify_blowup,
    diffeomorphic,
    exceptional_below,
    minimal_exceptional,
)
from cremona.formvec import ConeStatus, FormVector, cone_status, lorentz_norm
from cremona.homology import area, exceptional_divisor as E, line_through as L2

from sampling import CASE_LABELS, reduced_vector, scramble

V = FormVector.of


def test_classify_examples():
    for v in (V(15, 9, 5, 4), V(12, 6, 2, 1), V(11, 4, 1, 1)):
        verdict = classify_blowup(v)
        assert verdict and verdict.reason is Reason.REDUCED_POSITIVE
    verdict = classify_blowup(V(1, F(1, 2), F(1, 2), F(1, 2), F(1, 2)))
    assert not verdict and verdict.reason is Reason.OUTSIDE_FORWARD_CONE
    verdict = classify_blowup(V(1, F(1, 2), F(3, 5)))
    assert not verdict and verdict.reason is Reason.GROMOV_FAIL


def test_two_fifths_lies_on_the_boundary():
    # 2L - E1 - ... - E5 has area 2 - 5 * 2/5 = 0, so no blowup form exists
    v = V(1, *[F(2, 5)] * 6)
    verdict = classify_blowup(v)
    assert not verdict and verdict.reason is Reason.NON_POSITIVE_ENTRY
    assert verdict.v_red == V(F(1, 5), *[0] * 6)
    assert lorentz_norm(verdict.v_red) == F(1, 25)


def test_small_k_classification():
    assert classify_blowup(V(1, F(1, 2)))
    v = classify_blowup(V(1, 1))
    assert not v and v.reason is Reason.VOLUME_FAIL
    assert classify_blowup(V(1))
    assert classify_blowup(V(1, 0)).reason is Reason.NON_POSITIVE_ENTRY


def test_diffeo_examples():
    assert diffeomorphic(V(15, 9, 5, 4), V(12, 6, 2, 1))
    assert not diffeomorphic(V(15, 9, 5, 4), V(11, 4, 1, 1))
    assert diffeomorphic(V(1, F(1, 4), F(1, 8)), V(1, F(1, 8), F(1, 4)))
    assert not diffeomorphic(V(1, F(1, 4), F(1, 8)), V(1, F(1, 4), F(1, 7)))
    with pytest.raises(NotABlowupClass):
        diffeomorphic(V(15, 9, 5, 4), V(1, F(1, 2), F(1, 2), F(1, 2)))
    with pytest.raises(ValueError):
        diffeomorphic(V(15, 9, 5, 4), V(15, 9, 5, 4, 1))


def test_diffeo_is_an_equivalence_on_scrambled_vectors():
    rng = random.Random(2)
    for _ in range(40):
        k = rng.randint(3, 8)
        v = reduced_vector(rng, rng.choice(CASE_LABELS), k)
        u = scramble(rng, v, 4)
        w = scramble(rng, v, 5)
        if cone_status(u) is not ConeStatus.FORWARD_POSITIVE or u.lam <= 0:
            continue
        assert diffeomorphic(u, u)
        assert bool(diffeomorphic(u, w)) == bool(diffeomorphic(w, u))
        assert diffeomorphic(u, w) and diffeomorphic(u, v) and diffeomorphic(v, w)


def test_invariants():
    for v in (V(15, 9, 5, 4), V(12, 6, 2, 1), V(11, 4, 1, 1)):
        inv = classical_invariants(v)
        assert (inv.volume_term, inv.chern_pairing) == (103, 27)
    inv = classical_invariants(V(1, 0, 0, 0))
    assert (inv.volume_term, inv.chern_pairing) == (1, 3)


def test_minimal_fixtures():
    rep = minimal_exceptional(V(12, 6, 2, 1))
    assert rep.case_label == "2a" and rep.classes == {E(3, 3)} and rep.min_area == 1
    rep = minimal_exceptional(V(4, 2, 1, 1, 1))
    assert rep.case_label == "2b" and rep.min_area == 1
    assert rep.classes == {E(2, 4), E(3, 4), E(4, 4), L2(1, 2, 4), L2(1, 3, 4), L2(1, 4, 4)}
    rep = minimal_exceptional(V(5, 2, 2, 1, 1))
    assert rep.case_label == "3b" and rep.classes == {L2(1, 2, 4), E(3, 4), E(4, 4)}


def test_minimal_classes_of_unreduced_input_are_transported():
    rep = minimal_exceptional(V(15, 9, 5, 4))
    assert rep.v_red == V(12, 6, 2, 1)
    assert rep.reduced_classes == {E(3, 3)}
    assert rep.classes == {L2(1, 2, 3)}
    assert area(V(15, 9, 5, 4), L2(1, 2, 3)) == 1


def test_minimal_agrees_with_enumeration_on_scrambled_inputs():
    rng = random.Random(3)
    checked = 0
    while checked < 40:
        k = rng.randint(3, 8)
        v = reduced_vector(rng, rng.choice(CASE_LABELS), k)
        u = scramble(rng, v, rng.randint(1, 5))
        if u.lam <= 0 or cone_status(u) is not ConeStatus.FORWARD_POSITIVE:
            continue
        rep = minimal_exceptional(u)
        below = exceptional_below(u, rep.min_area)
        assert below.complete and below.classes == rep.classes
        checked += 1


def test_minimal_small_k():
    rep = minimal_exceptional(V(1, F(1, 4), F(1, 8)))
    assert rep.case_label == "k2-sub1" and rep.classes == {E(2, 2)}
    rep = minimal_exceptional(V(1, F(1, 8), F(1, 4)))
    assert rep.classes == {E(1, 2)} and rep.min_area == F(1, 8)
    rep = minimal_exceptional(V(1, F(1, 2)))
    assert rep.case_label == "k1" and rep.classes == {E(1, 1)}
    rep = minimal_exceptional(V(1))
    assert rep.case_label == "k0" and rep.classes == frozenset()


def test_minimal_rejects_non_blowup():
    with pytest.raises(NotABlowupClass):
        minimal_exceptional(V(1, *[F(2, 5)] * 6))


def test_case_label_requires_reduced_positive():
    with pytest.raises(ValueError):
        case_label(V(15, 9, 5, 4))
    assert case_label(V(3, 1, 1, 1)) == "1b"
