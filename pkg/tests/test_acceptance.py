"""One test per acceptance criterion; each prints a PASS/FAIL line."""

import pytest

from galeroot.verify import SUITES

from conftest import ACCEPTANCE_LINES

CRITERIA = [
    (1, "symbolic duality and syzygies", "duality", {}, 30),
    (2, "recursion matches closed form", "closed-form", {}, 60),
    (3, "small binomial example, exact", "small-binomial", {}, None),
    (4, "power-basis sector", "sector", {}, 60),
    (5, "binomial containment", "containment", {}, 60),
    (6, "binomial tightness", "tightness", {}, None),
    (7, "leading asymptotics", "asymptotics", {}, None),
    (8, "limiting circles", "circles", {}, None),
    (9, "oval count and real-axis interlacing", "ovals", {}, None),
    (10, "Ehrhart refinement", "ehrhart", {}, None),
    (11, "chromatic alternating-power invariance", "chromatic-altpower", {}, None),
    (12, "chromatic binomial determinants", "chromatic-binomial", {}, None),
    (13, "barycenter identity and clustering proxy", "barycenter", {}, None),
]


@pytest.mark.parametrize("number,title,suite,kwargs,budget", CRITERIA,
                         ids=[f"criterion-{c[0]:02d}-{c[2]}" for c in CRITERIA])
def test_criterion(number, title, suite, kwargs, budget):
    result = SUITES[suite](**kwargs)
    within = budget is None or result.seconds < budget
    ok = result.passed and within
    line = f"[{number:2d}] {'PASS' if ok else 'FAIL'} {title}: {result.line()}"
    if not within:
        line += f" (over the {budget}s budget)"
    ACCEPTANCE_LINES[number] = line
    print(line)
    assert result.passed, result.line()
    assert within, f"took {result.seconds:.1f}s, budget {budget}s"
