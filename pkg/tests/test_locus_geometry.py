import hashlib
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from curvature_locus.classifier import classify_regular
from curvature_locus.locus_geometry import (
    angular_distance,
    eta_expansion,
    eta_regular,
    eta_singular,
    export_mesh,
    mesh_arrays,
    numeric_singular_points,
    sphere_point,
)
from curvature_locus.net_model import NetOfQuadrics, QuadraticTernaryForm, SingularJet

angles = st.floats(0, 2 * math.pi, allow_nan=False)
coef = st.integers(-5, 5)
nets = st.tuples(*[st.tuples(*[coef] * 6).map(QuadraticTernaryForm)] * 3).map(lambda t: NetOfQuadrics(*t))


def test_eta_regular_at_pole(net_cyclic):
    # u = (0, 0, 1): 2 Q(u) = (0, 0, 2)
    assert np.allclose(eta_regular(net_cyclic, 0.0, 0.0), [0, 0, 2])


@settings(max_examples=60, deadline=None)
@given(nets, angles, st.floats(0, math.pi))
def test_basis_expansion_matches(net, theta, phi):
    assert np.allclose(eta_regular(net, theta, phi, check=False), eta_expansion(net, theta, phi), atol=1e-9)


@settings(max_examples=60, deadline=None)
@given(nets, angles, st.floats(0, math.pi))
def test_eta_is_even(net, theta, phi):
    # u and -u give the same point
    assert np.allclose(eta_regular(net, theta, phi), eta_regular(net, theta + math.pi, math.pi - phi))


@settings(max_examples=60, deadline=None)
@given(nets, angles, st.floats(-5, 5))
def test_eta_singular_is_twice_the_net(net, theta, c):
    u = np.array([math.cos(theta), math.sin(theta), c])
    a = np.array([[[float(v) for v in row] for row in q.sym_matrix()] for q in net.forms])
    direct = 2 * np.einsum("kij,i,j->k", a, u, u)
    assert np.allclose(eta_singular(SingularJet.from_net(net), theta, c), direct)
    assert np.allclose(eta_singular(net, theta, c), eta_singular(net, theta + math.pi, -c))


def test_singular_parametrization_example(net_cyclic):
    # at c = cot(phi) the locus point is (2cos^2 + 2c sin, 2sin^2 + 2c cos, 2c^2 + sin 2theta)
    th, c = 0.7, 1.3
    want = [
        2 * math.cos(th) ** 2 + 2 * math.sin(th) * c,
        2 * math.sin(th) ** 2 + 2 * math.cos(th) * c,
        2 * c * c + math.sin(2 * th),
    ]
    assert np.allclose(eta_singular(net_cyclic, th, c), want)


def test_angular_distance():
    assert angular_distance((1, 0, 0), (-2, 0, 0)) == 0
    assert angular_distance((1, 0, 0), (0, 1, 0)) == pytest.approx(math.pi / 2)


def _match(net):
    exact = [l.unit_direction() for l in classify_regular(net).evidence.real_lines]
    found = numeric_singular_points(net, grid=256, tol=1e-6)
    assert not found.is_curve
    assert len(found.directions) == len(exact)
    for e in exact:
        assert min(angular_distance(e, d) for d in found.directions) < 1e-6


def test_numeric_matches_exact_type5(net_type5):
    _match(net_type5)


def test_numeric_matches_exact_steiner(net_steiner):
    _match(net_steiner)


def test_numeric_flags_curve():
    found = numeric_singular_points(NetOfQuadrics.parse("2*x*z", "2*y*z", "z^2"))
    assert found.is_curve


def test_numeric_cylinder(net_half):
    found = numeric_singular_points(net_half, case="cylinder", height=6)
    # two finite cross-caps; the axis itself is at infinity
    assert len(found.directions) == 2
    assert all(abs(p[1]) < 6 for p in found.parameters)


def test_unknown_case(net_half):
    with pytest.raises(ValueError):
        numeric_singular_points(net_half, case="torus")
    with pytest.raises(ValueError):
        mesh_arrays(net_half, case="torus")


def test_mesh_structure(net_steiner):
    verts, faces = mesh_arrays(net_steiner, samples=8)
    assert verts.shape == (81, 3) and len(faces) == 128
    assert min(min(f) for f in faces) == 1 and max(max(f) for f in faces) == 81
    assert np.allclose(verts[0], eta_regular(net_steiner, 0.0, 0.0))


def test_mesh_text_deterministic(net_steiner, tmp_path):
    a = export_mesh(net_steiner, samples=8)
    b = export_mesh(net_steiner, samples=8, path=tmp_path / "m.obj")
    assert a == b == (tmp_path / "m.obj").read_text()
    assert a.count("\nf ") == 128 and a.startswith("v ")
    assert "-0 " not in a
    assert hashlib.sha256(a.encode()).hexdigest() == hashlib.sha256(export_mesh(net_steiner, samples=8).encode()).hexdigest()


def test_mesh_cylinder(net_half):
    verts, faces = mesh_arrays(net_half, case="cylinder", samples=8, cylinder_height=2)
    assert verts.shape == (81, 3)
    assert np.isclose(verts[:, 2].max(), 4.0)  # 2 Q at (cos, sin, 2) on the third component is 4 sin


def test_mesh_rejects_tiny_grid(net_half):
    with pytest.raises(ValueError):
        mesh_arrays(net_half, samples=4)


def test_sphere_point_is_unit():
    assert np.isclose(np.linalg.norm(sphere_point(1.1, 2.2)), 1)
