from __future__ import annotations

import re
from fractions import Fraction

import pytest
from hypothesis import settings, strategies as st

from cremona.formvec import FormVector, lorentz_norm
from cremona.homology import HomologyClass

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@st.composite
def rationals(draw, bound: int = 5, max_den: int = 12):
    den = draw(st.integers(1, max_den))
    return Fraction(draw(st.integers(-bound * den, bound * den)), den)


@st.composite
def vectors(draw, k_min: int = 3, k_max: int = 10):
    k = draw(st.integers(k_min, k_max))
    lam = draw(rationals())
    deltas = tuple(draw(rationals()) for _ in range(k))
    return FormVector(lam, deltas)


@st.composite
def cone_vectors(draw, k_min: int = 3, k_max: int = 10):
    """Forward-cone vectors: deltas are drawn as a fraction of lambda."""
    k = draw(st.integers(k_min, k_max))
    lam = draw(st.integers(1, 60).map(lambda n: Fraction(n, 12)))
    scale = Fraction(1, k) if draw(st.booleans()) else Fraction(1, 2)
    deltas = tuple(lam * scale * draw(rationals(1)) for _ in range(k))
    v = FormVector(lam, deltas)
    if lorentz_norm(v) <= 0:
        v = FormVector(lam, tuple(d / (2 * k) for d in deltas))
    return v


@st.composite
def classes(draw, k: int):
    a = draw(st.integers(-4, 6))
    b = tuple(draw(st.integers(-6, 6)) for _ in range(k))
    return HomologyClass(a, b)


# --------------------------------------------------------------------------
# One pass/fail line per acceptance criterion at the end of the run.

_ACCEPTANCE: dict[int, tuple[str, str]] = {}
_NAME = re.compile(r"test_criterion_(\d+)_(\w+)")


def pytest_runtest_logreport(report):
    m = _NAME.search(report.nodeid)
    if not m or "test_acceptance" not in report.nodeid:
        return
    n = int(m.group(1))
    title = m.group(2).replace("_", " ")
    if report.when == "call" or report.outcome != "passed":
        prev = _ACCEPTANCE.get(n, (title, "PASS"))[1]
        status = "PASS" if report.outcome == "passed" and prev == "PASS" else "FAIL"
        if report.outcome == "skipped":
            status = "SKIP"
        _ACCEPTANCE[n] = (title, status)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_ACCEPTANCE):
        title, status = _ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n} ({title}): {status}")
