"""End-to-end acceptance gate.

One test per headline claim; each drives the corresponding named check in
nonclass.acceptance so the CLI ``reproduce`` verb and this suite can never
drift apart.  Failure messages carry the measured numbers and the expected
tolerances verbatim.
"""

import pytest

from nonclass import acceptance


def _run(name):
    results = acceptance.run_checks(name)
    matches = [r for r in results if r.name == name]
    assert len(matches) == 1, f"check {name!r} not registered"
    result = matches[0]
    assert result.passed, f"{result.name}: measured {result.measured}; expected {result.expected}"
    return result


def test_all_claims_are_registered():
    assert set(acceptance.check_names()) == {
        "werner-values",
        "bell-maximal",
        "schmidt-family",
        "closed-vs-bruteforce",
        "bound-ordering",
        "chsh-link",
        "faithfulness",
        "werner-zero-point",
        "multiplicity-schmidt",
        "separable-maximality",
        "local-unitary-invariance",
    }


def test_werner_values():
    assert _run("werner-values").elapsed < 1.0


def test_bell_maximal():
    assert _run("bell-maximal").elapsed < 5.0


def test_schmidt_family():
    assert _run("schmidt-family").elapsed < 10.0


def test_closed_form_against_brute_force():
    assert _run("closed-vs-bruteforce").elapsed < 120.0


def test_bound_ordering():
    _run("bound-ordering")


def test_chsh_link():
    _run("chsh-link")


def test_faithfulness_equivalences():
    assert _run("faithfulness").elapsed < 180.0


def test_werner_zero_point():
    _run("werner-zero-point")


def test_multiplicity_schmidt_rank_criterion():
    assert _run("multiplicity-schmidt").elapsed < 120.0


def test_separable_maximality():
    _run("separable-maximality")


def test_local_unitary_invariance():
    _run("local-unitary-invariance")
