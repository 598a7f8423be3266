"""Case driver: system regeneration, membership certificates, solutions."""

import pytest

from rbu3.catalog import (case_preset, case_preset_names, run_case,
                          unit_square_certificate)
from rbu3.groebner import Limits, buchberger, normal_form
from rbu3.operators import Ansatz, generate_system, rb_residual

FAST = Limits(max_pairs=100000, deadline=240.0)


def test_preset_names():
    names = case_preset_names()
    for required in ("sec4.1", "sec5", "sec5-reduced", "sec5-sub2.1",
                     "sec6", "sec7"):
        assert required in names
    with pytest.raises(KeyError):
        case_preset("sec9.9")


def test_sec41_full_case():
    report = run_case(case_preset("sec4.1"), FAST)
    assert report.variables == 15
    assert report.gb_reduced and not report.resource_limited
    assert report.all_pass(), report.to_text()
    # the three linear kernel facts and the quoted products all certify
    kinds = {m.text: m.certified_by for m in report.memberships}
    assert kinds["(c) * (a)"] in ("ideal", "power-2", "power-3")
    assert all(m.member for m in report.memberships)


def test_sec42_case():
    report = run_case(case_preset("sec4.2"), FAST)
    assert report.variables == 12
    assert len(report.memberships) == 18
    assert report.all_pass(), report.to_text()


def test_sec43_case():
    report = run_case(case_preset("sec4.3"), FAST)
    assert report.variables == 11
    assert len(report.memberships) == 20
    assert report.all_pass(), report.to_text()


def test_sec43_branch_conjugates_onto_the_corrected_r9():
    """The middle-image branch at (s, t) = (2, 3) lands exactly on the
    shipped R9 after the quoted conjugation alpha = delta = s, beta = -t:
    this is the derivation that disambiguates R9's display."""
    from fractions import Fraction
    from rbu3.catalog import get_entry
    from rbu3.operators import Operator
    from rbu3.transform import AutoParams, build_psi, conjugate_operator
    family = Operator.from_images({"e23": "3*e12 + e22", "e11": "-2*e13",
                                   "e33": "2*e13"})
    assert rb_residual(family).is_zero()
    psi = build_psi(AutoParams(alpha=Fraction(2), delta=Fraction(2),
                               beta=Fraction(-3)))
    assert conjugate_operator(family, psi) == get_entry("R9").operator


def test_sec5_reduced_case():
    report = run_case(case_preset("sec5-reduced"), FAST)
    assert report.variables == 9
    assert report.all_pass(), report.to_text()
    assert {tuple(m.factors) for m in report.memberships} == {
        ("f", "b"), ("f", "d"), ("f", "g"), ("j", "b"), ("j", "d"), ("j", "g")}


def test_sec5_subcase_21_localization():
    report = run_case(case_preset("sec5-sub2.1"), FAST)
    assert report.all_pass(), report.to_text()
    # with i invertible the five letters vanish at ideal level
    assert all(m.certified_by == "ideal" for m in report.memberships)
    assert {m.text for m in report.memberships} == {"a", "b", "d", "g", "h"}


def test_sec6_reduced_case():
    report = run_case(case_preset("sec6"), FAST)
    assert report.variables == 18
    assert len(report.memberships) == 42
    assert report.all_pass(), report.to_text()


def test_sec7_full_case():
    report = run_case(case_preset("sec7"), FAST)
    assert report.variables == 30
    assert report.all_pass(), report.to_text()
    quad = [m for m in report.memberships if m.factors == ("b_33_23^2 - b_33_23",)]
    assert quad and quad[0].member


def test_sec7_printed_linear_variant_provably_fails():
    """The linear relation as printed in the source table has the wrong
    orientation: b_11_12 - b_33_23 + 1 does not vanish on the case's
    solution set (the flip swaps b_11_12 and b_33_23, and the displayed
    solution has b_11_12 = 1, b_33_23 = 0).  The symmetric form does."""
    from rbu3.catalog import _SEC7_PRINTED_LINEAR
    spec = case_preset("sec7")
    system, shape = generate_system(spec.ansatz())
    gb = buchberger(system, FAST)
    printed = shape.expand(_SEC7_PRINTED_LINEAR)
    corrected = shape.expand("b_11_12 + b_33_23 - 1")
    # corrected form: some power falls into the ideal
    assert normal_form(corrected * corrected, gb.basis, system.order).is_zero()
    # printed form: does not vanish on the variety (localization stays proper)
    localized = system.localize(printed, "t_loc")
    loc_gb = buchberger(localized, FAST)
    assert not (len(loc_gb.basis) == 1 and loc_gb.basis[0].is_constant())


def test_sec7_unit_square_certificate():
    assert unit_square_certificate("sec7")


def test_solutions_are_certified_families():
    for name in ("sec4.1", "sec5", "sec6", "sec7"):
        for solution in case_preset(name).solutions:
            assert rb_residual(solution.operator()).is_zero(), \
                (name, solution.name)


def test_case_report_json_shape():
    report = run_case(case_preset("sec5-reduced"), FAST)
    data = report.to_json()
    assert data["schema"] == 1 and data["all_pass"] is True
    assert data["case"] == "sec5-reduced"
    assert all(m["member"] for m in data["memberships"])
    assert all(s["satisfies_ansatz"] and s["annihilates_system"]
               for s in data["solutions"])


def test_resource_limited_case_reports_partial_state():
    report = run_case(case_preset("sec6"), Limits(max_pairs=50))
    assert report.resource_limited and not report.gb_reduced
    # zero normal forms against the partial basis are still sound; nothing
    # may be reported as a definite non-member
    assert all(m.member in (True, None) for m in report.memberships)


def test_extra_branch_of_the_pm_e13_family_is_empty():
    """The case R(1) = 0, R(e33) = R(e12) = 0, R(e13) = e12,
    R(e23) = e11 + e22 + s e12 admits no solution with R(e22) != 0: every
    coordinate of R(e22) lies in the case ideal.  (This refutes the branch
    that the shipped R13 display was copied from.)"""
    ansatz = Ansatz(3).fix_unit_image("0")
    ansatz.fix_image("e33", "0")
    ansatz.fix_image("e12", "0")
    ansatz.fix_image("e13", "e12")
    for dst in ("11", "22"):
        ansatz.tie(f"b_23_{dst} - 1")
    for dst in ("13", "23", "33"):
        ansatz.tie(f"b_23_{dst}")
    system, shape = generate_system(ansatz)
    gb = buchberger(system, FAST)
    for dst in ("11", "12", "13", "22", "23", "33"):
        coord = shape.expand(f"b_22_{dst}")
        # vanishing on the solution set: a small power falls into the ideal
        assert normal_form(coord * coord, gb.basis, system.order).is_zero(), dst
