import random

import pytest

from curvature_locus.classifier import (
    TableViolation,
    check_mixed_terms_criterion,
    classify_regular,
    classify_singular,
    cylinder_constraint,
    generic_census,
    kind_from_evidence,
    random_unit_direction,
    random_upper_triangular,
)
from curvature_locus.determinantal import ConstraintQuadric
from curvature_locus.net_model import NetOfQuadrics, SingularJet, abc_family
from curvature_locus.variety import ProjectiveLineSolution, VarietyDecomposition


def _dec(real, cplx=(), planes=()):
    lines = [ProjectiveLineSolution((i, 1, 0), "real", m) for i, m in enumerate(real)]
    lines += [ProjectiveLineSolution((i, 2, 0), "complex-pair", m) for i, m in enumerate(cplx)]
    return VarietyDecomposition(tuple(planes), tuple(lines), 6, not planes)


@pytest.mark.parametrize(
    "real, cplx, planes, kind",
    [
        ([1] * 6, (), (), "RomanSteiner"),
        ([1, 1], [1, 1], (), "CrossCapSurface"),
        ([2, 1, 2, 1], (), (), "Type5"),
        ([3, 3], (), (), "Type6"),
        ([3], (), ("z",), "TruncatedCone"),
        ([], (), ("z",), "Ellipsoid"),
        ([1, 1, 1, 1], [1], (), "Degenerate"),
        ([2, 2, 2], (), (), "Degenerate"),
    ],
)
def test_decision_table(real, cplx, planes, kind):
    assert kind_from_evidence(_dec(real, cplx, planes)) == kind


@pytest.mark.parametrize(
    "polys, kind",
    [
        (("2*x*y", "2*x*z", "z^2"), "Type5"),
        (("x^2", "2*x*y", "y^2+2*x*z"), "Type6"),
        (("x^2", "2*x*y", "y^2"), "TruncatedCone"),
        (("-x^2-y^2+2*z^2", "x^2/2-y^2/2", "x*z"), "TruncatedCone"),
        (("2*x*z", "2*y*z", "z^2"), "Ellipsoid"),
        (("x*y", "x*z", "y*z"), "RomanSteiner"),
        (("x^2", "y^2", "z^2"), "Planar"),
    ],
)
def test_classify_regular_examples(polys, kind):
    assert classify_regular(NetOfQuadrics.parse(*polys)).kind == kind


def test_planar_note():
    cls = classify_regular(NetOfQuadrics.parse("x^2", "y^2", "z^2"))
    assert not cls.substantial and "affine plane" in cls.notes[0]


def test_abc_spot_values():
    assert classify_regular(abc_family(-2, 1)).kind == "RomanSteiner"
    assert classify_regular(abc_family(-2, 0)).kind == "CrossCapSurface"


def test_steiner_criterion_holds():
    holds, cls = check_mixed_terms_criterion(NetOfQuadrics.parse("x*y", "x*z", "y*z"))
    assert holds and cls.kind == "RomanSteiner"
    holds, _ = check_mixed_terms_criterion(NetOfQuadrics.parse("2*x*y", "2*x*z", "z^2"))
    assert not holds


def test_cylinder_constraint_default_axis():
    c = cylinder_constraint((0, 0, 1))
    assert c.form.coeffs == ConstraintQuadric.cylinder().form.coeffs


def test_cylinder_constraint_scaled_axis():
    # the cylinder around (1, 1, 0), scaled by |w|^2 = 2
    c = cylinder_constraint((1, 1, 0))
    assert c.form.to_poly()(1, -1, 0) == 4
    assert c.form.to_poly()(1, 1, 0) == 0


def test_singular_labels():
    assert classify_singular(NetOfQuadrics.parse("x^2+y*z", "y^2+x*z", "z^2+x*y")).label == "6 CC"
    jet = SingularJet.from_net(NetOfQuadrics.parse("x^2", "2*x*y", "y^2"))
    assert classify_singular(jet).label == "Ellipse"
    assert classify_singular(NetOfQuadrics.parse("2*x*z", "2*y*z", "z^2")).label == "Paraboloid"


def test_singular_at_infinity():
    rep = classify_singular(NetOfQuadrics.parse("x^2/2-y^2/2", "x*z", "y*z"))
    assert rep.asymptotic_projection
    assert rep.label == "2 CC" and len(rep.at_infinity) == 1


def test_random_helpers_are_seeded():
    a = random_upper_triangular(random.Random(4))
    b = random_upper_triangular(random.Random(4))
    assert a == b
    assert all(a[i][i] > 0 for i in range(3)) and a[2][0] == 0
    u = random_unit_direction(random.Random(9))
    assert sum(c * c for c in u) == 1


def test_census_within_row():
    assert generic_census("H", trials=3, seed=0) == {"Type6"}
    assert generic_census("I", trials=3, seed=0, mode="singular") == {"Ellipse"}


def test_census_reports_witness(monkeypatch):
    from curvature_locus import classifier
    from curvature_locus.net_model import orbit

    rec = orbit("H")
    fake = type(rec)(rec.name, rec.codimension, rec.normal_form, rec.discriminant, regular_kinds=frozenset({"Type5"}))
    monkeypatch.setattr(classifier, "orbit", lambda name: fake)
    with pytest.raises(TableViolation) as err:
        generic_census("H", trials=2, seed=0)
    assert err.value.witness["orbit"] == "H" and err.value.witness["trial"] == 0
    assert len(err.value.witness["T"]) == 3


def test_unknown_mode():
    with pytest.raises(ValueError):
        generic_census("H", trials=1, mode="other")
