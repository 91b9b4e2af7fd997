from fractions import Fraction

import pytest
from hypothesis import strategies as st

from coverlab.model import Hyperplane, Instance, ProductSpace


@pytest.fixture
def square_noncover():
    return Instance.build((2, 2), [{1: 0}, {2: 0}])


@pytest.fixture
def square_cover():
    return Instance.build((2, 2), [{1: 0}, {2: 0}, {1: 1, 2: 1}])


@st.composite
def instances(draw, max_n=4, max_size=4, max_hyperplanes=6, allow_empty_fixings=False):
    n = draw(st.integers(1, max_n))
    sizes = tuple(draw(st.lists(st.integers(2, max_size), min_size=n, max_size=n)))
    hyperplanes = []
    for _ in range(draw(st.integers(0, max_hyperplanes))):
        coords = draw(st.sets(st.integers(1, n), min_size=0 if allow_empty_fixings else 1))
        hyperplanes.append(
            Hyperplane(tuple((j, draw(st.integers(0, sizes[j - 1] - 1))) for j in sorted(coords)))
        )
    return Instance(ProductSpace(sizes), tuple(hyperplanes))


deltas = st.sampled_from([Fraction(1, 10), Fraction(1, 4), Fraction(1, 3), Fraction(1, 2)])


CRITERIA = {
    "test_ac1": "AC1 prime constant at 1e200",
    "test_ac2": "AC2 prime growth p_k >= 4k",
    "test_ac3": "AC3 scalar condition equals 3",
    "test_ac4": "AC4 worked 2x2 micro-instance",
    "test_ac5": "AC5 measure invariants, random corpus",
    "test_ac6": "AC6 mode ordering and soundness",
    "test_ac7": "AC7 CRT bridge equivalence",
    "test_ac8": "AC8 reference constants in metadata",
    "test_ac9": "AC9 TailBound rigor",
}


def pytest_terminal_summary(terminalreporter):
    status: dict[str, list[str]] = {}
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            if "test_acceptance" not in rep.nodeid or rep.when != "call" and outcome == "passed":
                continue
            func = rep.nodeid.split("::")[-1]
            key = "_".join(func.split("_")[:2])
            if key in CRITERIA:
                status.setdefault(key, []).append(outcome)
    if not status:
        return
    terminalreporter.section("acceptance criteria")
    for key, label in CRITERIA.items():
        if key in status:
            ok = all(o == "passed" for o in status[key])
            terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {label}")
