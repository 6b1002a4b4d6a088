"""End-to-end smoke tests for the Python bindings.

The heavy numerics are covered by the C++ unit and acceptance suites; these
tests pin the binding surface: argument handling, result shapes, exception
mapping, and a couple of frozen reference values.
"""

import json
import math

import numpy as np
import pytest

import thin2graph as t2g

# Two unit edges at angles 0 and pi: the thin domain is an exact 2 x (2 eps)
# rectangle, so the low thin-domain eigenvalues match the graph values up to
# FEM discretization error only.
RECTANGLE = """
[graph]
lengths = 1, 1

[domain]
eps = 0.1

[solver]
modes = 3
"""

THREE_STAR = [1.0, 1.0, 1.0]


def test_graph_spectrum_three_star_closed_form():
    rows = t2g.graph_spectrum(THREE_STAR, coupling=0.0, modes=6)
    assert len(rows) == 6
    q = (math.pi / 2.0) ** 2
    exact = [0.0, q, q, 4.0 * q, 9.0 * q, 9.0 * q]
    mult = [1, 2, 2, 1, 2, 2]
    for row, lam, m in zip(rows, exact, mult):
        assert abs(row[0] - lam) <= 1e-10
        assert row[1] == m
        assert abs(row[2] - math.sqrt(lam)) <= 1e-10


def test_graph_fem_agrees_with_secular():
    rows = t2g.graph_spectrum(THREE_STAR, coupling=1.0, modes=4)
    fem = t2g.graph_fem_spectrum(THREE_STAR, coupling=1.0, h=2e-3, modes=4)
    for row, lam_fem in zip(rows, fem):
        assert abs(row[0] - lam_fem) <= 1e-3 * max(1.0, row[0])


def test_coupling_constant_frozen_value():
    # (1/2) * v0 * rho^2 * (pi/4 - 1/pi) ... for the cosine bump at v0 = 1
    got = t2g.coupling_constant("cosine", 0.8, 1.0)
    assert got == pytest.approx(0.2989364974167409, rel=1e-12)


def test_solve_amplitude_inverts_coupling():
    v0 = t2g.solve_amplitude("cosine", 0.8, 1.0)
    assert v0 == pytest.approx(3.345192068019455, rel=1e-9)
    assert t2g.coupling_constant("cosine", 0.8, v0) == pytest.approx(1.0, abs=1e-9)
    assert t2g.solve_amplitude("box", 0.5, 0.0) == 0.0


def test_thin_spectrum_rectangle():
    lambdas, residuals = t2g.thin_spectrum(RECTANGLE)
    assert len(lambdas) == 3 and len(residuals) == 3
    assert abs(lambdas[0]) <= 1e-8
    assert lambdas[1] == pytest.approx((math.pi / 2.0) ** 2, rel=5e-3)
    assert lambdas[2] == pytest.approx(math.pi**2, rel=5e-3)
    assert all(r <= 1e-6 for r in residuals)


def test_project_points_rectangle():
    pts = np.array([[0.5, 0.05], [-0.7, 0.0], [0.0, 0.0]])
    out = t2g.project_points(RECTANGLE, pts)
    assert out[0] == (0, pytest.approx(0.5, abs=1e-12))
    assert out[1] == (1, pytest.approx(0.7, abs=1e-12))
    assert out[2][1] == pytest.approx(0.0, abs=1e-12)


def test_mesh_info_rectangle():
    info = t2g.mesh_info(RECTANGLE)
    assert info["nodes"] > 100
    assert info["triangles"] > 100
    assert info["min_angle_deg"] == pytest.approx(45.0, abs=1e-9)
    assert info["max_aspect"] == pytest.approx(math.sqrt(2.0), abs=1e-9)
    # plain-text layout: node count, node lines, triangle count, triangle lines
    text = t2g.mesh_text(RECTANGLE)
    assert int(text.splitlines()[0]) == info["nodes"]


CONVERGE_CFG = """
[graph]
lengths = 1, 1

[domain]
eps = 0.1

[solver]
modes = 2

[harness]
eps_sweep = 0.2, 0.1, 0.05
"""


def test_converge_json_report():
    report = json.loads(t2g.converge_json(CONVERGE_CFG))
    assert report["schema"] == "thin2graph/report/1"
    assert len(report["rows"]) == 3
    assert all(row["ok"] for row in report["rows"])
    assert len(report["extrapolation"]) == 2
    # the rectangle's first nonzero mode is exact in eps, so the extrapolated
    # limit should sit very close to the graph value
    mode1 = report["extrapolation"][1]
    assert mode1["rel_err"] <= 1e-3


def test_exceptions_map_to_value_error():
    with pytest.raises(ValueError):
        t2g.graph_spectrum(THREE_STAR, coupling=-2.0)
    with pytest.raises(ValueError):
        t2g.thin_spectrum(RECTANGLE.replace("eps = 0.1", "eps = 0.4"))
    with pytest.raises(ValueError):
        t2g.project_points(RECTANGLE, np.zeros((2, 3)))
