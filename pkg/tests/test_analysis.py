"""Classification, torse-forming extraction, and the Yamabe soliton solver."""

import numpy as np
import pytest

from accr.analysis import (
    DEGENERATE,
    FAILS,
    HOLDS,
    check_f5,
    check_sasaki_like,
    classify,
    f5_form_residual,
    proportionality_split,
    sasaki_form_residual,
    torse_forming_extract,
    verify_paper_suite,
    vertical_potential,
    yamabe_soliton_solve,
)
from accr.errors import NonVerticalPotential, ZeroPotential
from accr.expr import parse
from accr.geometry import point_geometry
from accr.manifold import load_manifold, sample_points
from accr.report import VERDICT_PASS

from test_manifold import cone_json

COORDS = ("t", "u", "v")


def _exprs(*sources, constants=("c",)):
    return tuple(parse(s, COORDS, constants) for s in sources)


def test_classify_cone(cone, cone_points, cone_bindings):
    cm = classify(cone, cone_points, cone_bindings)
    assert cm.sasaki_like.status == FAILS
    assert cm.f5.status == HOLDS
    assert cm.f5_0.status == HOLDS
    assert cm.f0.status == FAILS
    assert [e.name for e in cm.entries()] == ["sasaki_like", "f5", "f5_0", "f0"]
    # F5 consequences come back as extras when the form holds
    assert cm.f5.extras["theta* = theta*(xi) eta"] < 1e-11
    assert cm.f5.extras["F(xi,y,z) = 0"] < 1e-11
    assert cm.f5.extras["omega = 0"] < 1e-11
    # a failing membership keeps a meaningful residual
    assert cm.sasaki_like.residual > 0.1


def test_classify_flat(flat, flat_points):
    cm = classify(flat, flat_points)
    assert cm.f0.status == HOLDS
    assert cm.f0.residual == 0.0
    # with F identically zero the F5 subclass question is vacuous
    assert cm.f5.status == DEGENERATE
    assert cm.f5_0.status == DEGENERATE
    assert cm.sasaki_like.status == FAILS


def test_sasaki_form_residual_oracle(cone):
    # data manufactured to satisfy the defining form exactly
    g, phi, xi, eta = cone.values_at((2.0, 0.3, -0.4))
    gpp = np.einsum("ai,bj,ab->ij", phi, phi, g)
    F = np.einsum("ij,z->ijz", gpp, eta) + np.einsum("iz,j->ijz", gpp, eta)
    assert sasaki_form_residual(F, g, phi, eta) == 0.0
    assert sasaki_form_residual(F * 1.5, g, phi, eta) > 0.1


def test_f5_form_residual_oracle(cone):
    pg = point_geometry(cone, "g", (2.0, 0.3, -0.4))
    assert f5_form_residual(pg.F, pg.g, pg.phi, pg.eta, pg.theta_star_xi, pg.n) < 1e-13
    assert f5_form_residual(pg.F, pg.g, pg.phi, pg.eta, 2.0 * pg.theta_star_xi, pg.n) > 0.5


def test_perturbed_metric_leaves_f5(cone_points):
    g = [["1", "0", "0"], ["0", "t^2", "0.01*t"], ["0", "0.01*t", "-t^2"]]
    S = load_manifold(cone_json(g=g))
    f5, f5_0, f0 = check_f5(S, cone_points)
    assert f5.status == FAILS
    assert f5_0.status == FAILS
    assert f0.status == FAILS
    assert f5.extras == {}
    sasaki = check_sasaki_like(S, cone_points)
    assert sasaki.status == FAILS and sasaki.extras == {}


def test_vertical_potential_builder(cone):
    pot = vertical_potential(cone, "c*t")
    values = [e.eval_number((2.0, 0.3, -0.4), {"c": 1.5}) for e in pot]
    assert np.allclose(values, [3.0, 0.0, 0.0])
    # an Expression is accepted as well
    pot2 = vertical_potential(cone, parse("t", cone.chart.coordinates))
    assert [e.eval_number((2.0, 0.3, -0.4)) for e in pot2] == [2.0, 0.0, 0.0]


@pytest.mark.parametrize("c", [1.0, 2.0])
def test_torse_forming_extraction_ct(cone, cone_points, c):
    pot = vertical_potential(cone, "c*t")
    res = torse_forming_extract(cone, "g", pot, cone_points, {"c": c})
    assert res.residual < 1e-11
    assert np.max(np.abs(res.f - c)) < 1e-11
    assert np.max(np.abs(res.gamma)) < 1e-11
    assert {"torse-forming", "torqued", "concircular"} <= res.taxonomy
    assert ("concurrent" in res.taxonomy) == (c == 1.0)
    assert "recurrent" not in res.taxonomy
    assert res.vertical
    ts = np.array([p[0] for p in cone_points])
    assert np.allclose(res.k, c * ts)
    assert np.allclose(res.h, 1.0 / ts)  # f/k = 1/t independent of c
    assert np.max(np.abs(res.dk_xi - c)) < 1e-11
    for name, value in res.vertical_checks.items():
        assert value < 1e-9, name
    assert np.isfinite(res.condition_number)


def test_extraction_quadratic_vertical_field(cone, cone_points):
    # v = t^2 xi is torse-forming with f = t and gamma = eta / t, hence
    # not torqued: gamma(v) = t is visible in the fitted form
    pot = _exprs("t^2", "0", "0")
    res = torse_forming_extract(cone, "g", pot, cone_points)
    assert res.residual < 1e-10
    assert "torse-forming" in res.taxonomy
    assert "torqued" not in res.taxonomy
    assert "concircular" not in res.taxonomy
    ts = np.array([p[0] for p in cone_points])
    assert np.allclose(res.f, ts)
    assert np.allclose(res.gamma[:, 0], 1.0 / ts)
    assert np.max(np.abs(res.gamma[:, 1:])) < 1e-11
    assert res.vertical
    # f = t but dk(xi) = 2t: the torqued criterion fails measurably
    assert res.vertical_checks["f = dk(xi)"] > 0.5


def test_extraction_non_vertical_field(cone, cone_points):
    pot = _exprs("0", "t^2", "0")
    res = torse_forming_extract(cone, "g", pot, cone_points)
    assert not res.vertical
    assert res.k is None and res.h is None and res.vertical_checks is None
    assert res.residual > 1.0  # nowhere near torse-forming
    assert res.taxonomy == frozenset()


def test_extraction_recurrent_not_parallel(flat, flat_points):
    # on the flat structure v = t xi has f = 0 with nonzero gamma
    pot = tuple(parse(s, flat.chart.coordinates) for s in ("t", "0", "0"))
    res = torse_forming_extract(flat, "g", pot, flat_points)
    assert res.residual < 1e-12
    assert "recurrent" in res.taxonomy
    assert "parallel" not in res.taxonomy
    assert "torqued" not in res.taxonomy


def test_extraction_parallel_field(flat, flat_points):
    pot = tuple(parse(s, flat.chart.coordinates) for s in ("1", "0", "0"))
    res = torse_forming_extract(flat, "g", pot, flat_points)
    assert res.residual == 0.0
    assert {"torse-forming", "torqued", "concircular", "recurrent", "parallel"} <= res.taxonomy
    assert "concurrent" not in res.taxonomy  # f = 0, not 1
    # taxonomy implications hold as sets
    tx = res.taxonomy
    assert ("parallel" not in tx) or ({"recurrent", "concircular"} <= tx)
    assert ("concurrent" not in tx) or ("concircular" in tx)


def test_zero_potential_rejected(cone, cone_points):
    pot = _exprs("0", "0", "0")
    with pytest.raises(ZeroPotential):
        torse_forming_extract(cone, "g", pot, cone_points)


def test_proportionality_split_oracle():
    rng = np.random.default_rng(5)
    g = np.diag([1.0, 4.0, -4.0])
    ginv = np.linalg.inv(g)
    for mu in (-2.0, 0.0, 3.5):
        got_mu, resid = proportionality_split(mu * g, g, ginv)
        assert abs(got_mu - mu) < 1e-12
        assert resid < 1e-12
    # a non-proportional part is reported, never absorbed
    bump = np.zeros((3, 3))
    bump[0, 1] = bump[1, 0] = 0.25
    got_mu, resid = proportionality_split(2.0 * g + bump, g, ginv)
    assert abs(got_mu - 2.0) < 1e-12  # bump is trace-free against ginv
    assert abs(resid - 0.25) < 1e-12


def test_yamabe_soliton_on_cone(cone, cone_points):
    pot = vertical_potential(cone, "c*t")
    pot_t = vertical_potential(cone, "ct*t")
    b = {"c": 1.0, "ct": 1.0}
    sol = yamabe_soliton_solve(cone, "g", pot, cone_points, b, other_potential=pot_t)
    assert sol.verdict == "soliton"
    assert np.max(sol.residuals) < 1e-11
    ts = np.array([p[0] for p in cone_points])
    # lambda(t) = -2/t^2 - c for the flat fiber
    assert np.max(np.abs(sol.lambdas - (-2.0 / ts**2 - 1.0))) < 1e-11
    assert np.isclose(sol.lambdas[0], -1.5)  # pinned t = 2 sample
    assert sol.theorem_checks["tau = f + lambda"] < 1e-10
    assert sol.theorem_checks["f = dk(xi)"] < 1e-10
    assert sol.theorem_checks["f/k matches between the two metrics"] < 1e-11


def test_yamabe_soliton_on_gtilde(cone, cone_points):
    pot = vertical_potential(cone, "ct*t")
    for ct in (0.5, 2.0):
        sol = yamabe_soliton_solve(cone, "gtilde", pot, cone_points, {"ct": ct})
        assert sol.verdict == "soliton"
        ts = np.array([p[0] for p in cone_points])
        assert np.max(np.abs(sol.lambdas - (-2.0 / ts**2 - ct))) < 1e-11
        assert sol.theorem_checks["tau = f + lambda"] < 1e-10
        assert sol.theorem_checks["f/k matches between the two metrics"] is None


def test_yamabe_not_soliton(cone, cone_points):
    pot = _exprs("t^2", "0", "0")
    sol = yamabe_soliton_solve(cone, "g", pot, cone_points)
    assert sol.verdict == "not-soliton"
    assert np.max(sol.residuals) > 1.0
    # the theorem premises fail, so their checks stay unevaluated
    assert sol.theorem_checks["tau = f + lambda"] is None


def test_yamabe_rejects_non_vertical(cone, cone_points):
    pot = _exprs("0", "t^2", "0")
    with pytest.raises(NonVerticalPotential):
        yamabe_soliton_solve(cone, "g", pot, cone_points)
    mixed = _exprs("1", "1", "0")
    with pytest.raises(NonVerticalPotential):
        yamabe_soliton_solve(cone, "g", mixed, cone_points)


def test_verify_paper_suite_all_pass(cone_bindings):
    records, points = verify_paper_suite(samples=16)
    assert len(points) == 16
    assert len(records) >= 50
    failing = [r.name for r in records if r.verdict != VERDICT_PASS]
    assert failing == []
    assert all(r.anchor for r in records)
    # anchors speak in formulas, not citations
    assert not any("eq" in r.anchor.lower() or "sec" in r.anchor.lower() for r in records)


def test_verify_paper_suite_other_constants():
    records, _ = verify_paper_suite(
        bindings={"c": 2.0, "ct": 0.5},
        samples=8,
        pinned=((1.0, 0.1, 0.1),),
    )
    assert all(r.verdict == VERDICT_PASS for r in records)
