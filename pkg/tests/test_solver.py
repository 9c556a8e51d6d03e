import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import omega, random_feasible_system
from oracles import least_norm_full_pivot
from steerdma import (ArrayGeometry, ConstraintSystem, RankError, RowLabel, build_system,
                      gram_condition, make_spec, solve_max_wng, steering_vector, wng)

rad = np.radians


def _raw_system(geom, matrix, rhs):
    labels = tuple(RowLabel("null", 0.0, 0) for _ in range(len(rhs)))
    return ConstraintSystem(np.asarray(matrix), np.asarray(rhs, dtype=float), labels, geom, 1.0)


def test_distortionless_only(paper_geom):
    w = omega(1000)
    h = solve_max_wng(build_system(paper_geom, w, make_spec("Null", 1, 0.7)))
    np.testing.assert_allclose(h.coefficients, steering_vector(paper_geom, w, 0.7).values / 8,
                               atol=1e-15)
    assert np.vdot(h.h, h.h).real == pytest.approx(1 / 8, rel=1e-14)
    assert wng(h, paper_geom).linear == pytest.approx(8.0, rel=1e-12)


def test_paper_second_order_design(paper_geom):
    spec = make_spec("DerivCon", 2, rad(50), rad([120, 240]), i_beta=[1, 0, -2, 0, 0])
    sys = build_system(paper_geom, omega(1000), spec)
    h = solve_max_wng(sys)
    b = lambda t: h.h.conj() @ steering_vector(paper_geom, h.omega, t).values
    assert abs(b(rad(50)) - 1) < 1e-10
    assert abs(b(rad(170))) < 1e-8
    assert abs(b(rad(290))) < 1e-8
    ref, _ = least_norm_full_pivot(sys.matrix, sys.rhs)
    assert np.linalg.norm(h.h - ref) < 1e-9 * np.linalg.norm(ref)
    assert np.max(np.abs(sys.matrix @ h.h - sys.rhs)) < 1e-10
    assert h.residual < 1e-10
    assert h.spec_digest == spec.digest(paper_geom)


def test_gram_condition_single_row(paper_geom):
    sys = build_system(paper_geom, omega(700), make_spec("Null", 1, 0.0))
    assert gram_condition(sys) == pytest.approx(1.0, abs=1e-12)


def test_gram_condition_duplicate_row(paper_geom):
    row = steering_vector(paper_geom, omega(1000), 0.3).values.conj()
    sys = _raw_system(paper_geom, [row, row], [1, 0])
    assert gram_condition(sys) > 1e15
    with pytest.raises(RankError):
        solve_max_wng(sys)


def test_gram_condition_regression_baseline(paper_geom):
    spec = make_spec("DerivCon", 2, rad(50), rad([120, 240]), i_beta=[1, 0, -2, 0, 0])
    cond = gram_condition(build_system(paper_geom, omega(1000), spec))
    assert cond == pytest.approx(916.9849236919476, rel=1e-9)


def test_too_many_rows_raises(paper_geom):
    rng = np.random.default_rng(0)
    sys = _raw_system(ArrayGeometry(2, 0.02), rng.standard_normal((3, 2)) + 0j, [1, 0, 0])
    with pytest.raises(RankError):
        solve_max_wng(sys)


def test_tikhonov_loading_shrinks_norm(paper_geom):
    spec = make_spec("DerivCon", 2, 0.0, rad([120, 240]))
    sys = build_system(paper_geom, omega(300), spec)
    exact = solve_max_wng(sys)
    loaded = solve_max_wng(sys, loading=1e-3)
    assert np.linalg.norm(loaded.h) < np.linalg.norm(exact.h)
    assert loaded.residual > exact.residual


def test_cholesky_fallback(monkeypatch, paper_geom):
    from scipy import linalg
    from steerdma import solver

    def boom(*a, **k):
        raise linalg.LinAlgError("forced")

    monkeypatch.setattr(solver.linalg, "cho_factor", boom)
    sys = build_system(paper_geom, omega(1000), make_spec("Null", 2, 0.4, rad([72, 144])))
    h = solver.solve_max_wng(sys)
    assert h.residual < 1e-12


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_minimum_norm_properties(seed):
    sys, h = random_feasible_system(np.random.default_rng(seed))
    h = h.h
    d = sys.matrix
    assert np.max(np.abs(d @ h - sys.rhs)) < 1e-8

    ref, null_basis = least_norm_full_pivot(d, sys.rhs)
    assert np.linalg.norm(h - ref) < 1e-9 * np.linalg.norm(ref)
    if null_basis.size:
        # h lies in the row space
        assert np.linalg.norm(null_basis.conj() @ h) < 1e-10 * np.linalg.norm(h)
        rng = np.random.default_rng(seed)
        z = null_basis.T @ (rng.standard_normal(len(null_basis)) + 1j * rng.standard_normal(len(null_basis)))
        for eps in (1e-3, -1e-3):
            assert np.linalg.norm(h + eps * z) >= np.linalg.norm(h)
