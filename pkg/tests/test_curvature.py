import math

import numpy as np
import pytest

from dualgeo.connections import conjugate, explicit_connection, levi_civita
from dualgeo.curvature import (DegeneratePlaneError, DimensionError,
                               curvature_duality_residual, curvature_report,
                               first_bianchi_defect, is_constant_sectional, is_flat,
                               orthonormal_frame_at, ricci_at, ricci_contraction_at,
                               ricci_operator_at, riemann_at, scalar_at, sectional_at,
                               weyl_at, weyl_trace_defect)
from dualgeo import fixtures as fx

from oracles import gram_schmidt_frame, ricci_frame_oracle, riemann_fd, scalar_frame_oracle


class TestRiemann:
    def test_euclidean_flat(self, euclid2):
        assert np.allclose(riemann_at(levi_civita(euclid2), [0.1, 0.2]), 0.0)

    def test_sphere_sectional_contraction(self, sphere):
        x = [math.pi / 3, 1.0]
        lc = levi_civita(sphere)
        R = riemann_at(lc, x)
        g = sphere.metric_at(x)
        e1 = np.array([1.0, 0.0])
        e2 = np.array([0.0, 1.0 / math.sin(math.pi / 3)])
        val = np.einsum("lijk,i,j,k,lm,m->", R, e1, e2, e2, g, e1)
        assert val == pytest.approx(1.0, abs=1e-12)
        assert np.allclose(R, riemann_fd(lc, x), atol=1e-6)

    def test_hyperbolic_contraction(self, hyperbolic):
        x = [0.0, 1.5]
        lc = levi_civita(hyperbolic)
        R = riemann_at(lc, x)
        g = hyperbolic.metric_at(x)
        e1 = np.array([1.5, 0.0])
        e2 = np.array([0.0, 1.5])
        val = np.einsum("lijk,i,j,k,lm,m->", R, e1, e2, e2, g, e1)
        assert val == pytest.approx(-1.0, abs=1e-12)
        assert np.allclose(R, riemann_fd(lc, x), atol=1e-6)

    def test_antisymmetry_exact(self, fisher):
        C = explicit_connection(fisher, {(0, 0, 1): "m", (1, 1, 1): "s"})
        R = riemann_at(C, [0.3, 1.2])
        assert np.array_equal(R, -np.einsum("ljik->lijk", R))

    def test_first_bianchi_levi_civita(self):
        for M in fx.standard_manifolds():
            lc = levi_civita(M)
            for pt in M.sample_points(8, 2):
                assert first_bianchi_defect(lc, pt) < 1e-9


class TestCurvatureDuality:
    def test_metric_pair_on_sphere(self, sphere):
        lc = levi_civita(sphere)
        rng = np.random.default_rng(0)
        for pt in sphere.sample_points(8, 0):
            X, Y, Z, W = rng.uniform(-1, 1, (4, 2))
            assert curvature_duality_residual(sphere, lc, lc, pt, X, Y, Z, W) < 1e-8

    def test_explicit_pair_on_fisher(self, fisher):
        C = explicit_connection(fisher, {(0, 0, 0): "0.5*m", (1, 0, 1): "s"})
        Cstar = conjugate(C, fisher)
        rng = np.random.default_rng(1)
        for pt in fisher.sample_points(16, 1):
            X, Y, Z, W = rng.uniform(-1, 1, (4, 2))
            assert curvature_duality_residual(fisher, C, Cstar, pt, X, Y, Z, W) < 1e-8

    def test_flat_iff_dual_flat(self, euclid2, sphere):
        flat = explicit_connection(euclid2, {})
        assert is_flat(euclid2, flat, 16).flat
        assert is_flat(euclid2, conjugate(flat, euclid2), 16).flat
        lc = levi_civita(sphere)
        assert not is_flat(sphere, lc, 16).flat
        assert not is_flat(sphere, conjugate(lc, sphere), 16).flat


class TestRicci:
    def test_euclidean_zero(self, euclid3):
        assert np.allclose(ricci_at(euclid3, levi_civita(euclid3), [0, 0, 0]), 0.0)

    def test_sphere_einstein(self, sphere):
        lc = levi_civita(sphere)
        for pt in sphere.sample_points(6, 3):
            ric = ricci_at(sphere, lc, pt)
            assert np.max(np.abs(ric - sphere.metric_at(pt))) < 1e-8
            assert np.allclose(ric, ricci_frame_oracle(sphere, lc, pt.coords), atol=1e-5)

    def test_hyperbolic_einstein(self, hyperbolic):
        lc = levi_civita(hyperbolic)
        for pt in hyperbolic.sample_points(6, 3):
            ric = ricci_at(hyperbolic, lc, pt)
            assert np.max(np.abs(ric + hyperbolic.metric_at(pt))) < 1e-8

    def test_frame_equals_contraction_for_any_connection(self, fisher):
        C = explicit_connection(fisher, {(0, 1, 0): "m*s", (1, 0, 0): "1"})
        for pt in fisher.sample_points(6, 5):
            assert np.allclose(ricci_at(fisher, C, pt), ricci_contraction_at(C, pt),
                               atol=1e-10)

    def test_orthonormal_frame(self, fisher):
        for pt in fisher.sample_points(6, 6):
            g = fisher.metric_at(pt)
            E = orthonormal_frame_at(fisher, pt)
            assert np.allclose(E @ g @ E.T, np.eye(2), atol=1e-13)
            assert np.allclose(E, gram_schmidt_frame(g), atol=1e-13)


class TestScalar:
    def test_classical_values(self, sphere, hyperbolic, euclid3):
        assert scalar_at(sphere, levi_civita(sphere), [1.1, 0.4]) == pytest.approx(2.0, abs=1e-10)
        assert scalar_at(hyperbolic, levi_civita(hyperbolic), [0.2, 1.0]) == pytest.approx(-2.0, abs=1e-10)
        assert scalar_at(euclid3, levi_civita(euclid3), [0, 0, 0]) == 0.0

    def test_matches_frame_oracle(self, sphere):
        lc = levi_civita(sphere)
        x = np.array([0.9, 1.2])
        assert scalar_at(sphere, lc, x) == pytest.approx(scalar_frame_oracle(sphere, lc, x),
                                                         abs=1e-5)

    def test_matches_metric_contraction(self):
        for M in fx.standard_manifolds():
            lc = levi_civita(M)
            for pt in M.sample_points(4, 7):
                ric = ricci_at(M, lc, pt)
                via_trace = float(np.einsum("jk,jk->", M.inverse_metric_at(pt), ric))
                assert scalar_at(M, lc, pt) == pytest.approx(via_trace, abs=1e-10)


class TestRicciOperator:
    def test_euclidean(self, euclid2):
        assert np.allclose(ricci_operator_at(euclid2, levi_civita(euclid2), [0, 0]), 0.0)

    def test_sphere_identity(self, sphere):
        Q = ricci_operator_at(sphere, levi_civita(sphere), [1.0, 0.5])
        assert np.allclose(Q, np.eye(2), atol=1e-10)

    def test_hyperbolic_negative_identity(self, hyperbolic):
        Q = ricci_operator_at(hyperbolic, levi_civita(hyperbolic), [0.0, 2.0])
        assert np.allclose(Q, -np.eye(2), atol=1e-10)

    def test_defining_property(self, fisher):
        lc = levi_civita(fisher)
        for pt in fisher.sample_points(5, 9):
            g = fisher.metric_at(pt)
            ric = ricci_at(fisher, lc, pt)
            Q = ricci_operator_at(fisher, lc, pt)
            assert np.max(np.abs(g @ Q - ric)) < 1e-10


class TestWeyl:
    def test_flat_four_space(self, euclid4):
        W = weyl_at(euclid4, levi_civita(euclid4), [0, 0, 0, 0])
        assert np.allclose(W, 0.0)

    def test_three_dimensions_vanish(self, standard_twists):
        P = standard_twists["warped-sphere-fiber"]
        M = P.manifold
        for pt in M.sample_points(4, 2):
            assert np.max(np.abs(weyl_at(M, P.chart_levi_civita, pt))) < 1e-8

    def test_dimension_error(self, sphere):
        with pytest.raises(DimensionError):
            weyl_at(sphere, levi_civita(sphere), [1.0, 1.0])

    def test_trace_free(self, euclid3, standard_twists):
        P = standard_twists["hyperbolic-4d"]
        for pt in P.manifold.sample_points(3, 4):
            assert weyl_trace_defect(P.manifold, P.chart_levi_civita, pt) < 1e-8
        assert weyl_trace_defect(euclid3, levi_civita(euclid3), [0, 0, 0]) < 1e-12

    def test_variant_differs_when_ricci_nonzero(self, standard_twists):
        P = standard_twists["hyperbolic-4d"]
        pt = P.manifold.sample_points(1, 5)[0]
        std = weyl_at(P.manifold, P.chart_levi_civita, pt, "standard")
        printed = weyl_at(P.manifold, P.chart_levi_civita, pt, "as-printed")
        assert np.max(np.abs(std - printed)) > 0.1

    def test_unknown_variant_rejected(self, euclid3):
        with pytest.raises(ValueError):
            weyl_at(euclid3, levi_civita(euclid3), [0, 0, 0], variant="other")


class TestSectional:
    def test_classical_values(self, sphere, hyperbolic, fisher):
        assert sectional_at(sphere, [1.0, 1.0], [1, 0], [0, 1]) == pytest.approx(1.0, abs=1e-10)
        assert sectional_at(hyperbolic, [0.1, 1.5], [1, 0], [0, 1]) == pytest.approx(-1.0, abs=1e-10)
        assert sectional_at(fisher, [0.0, 1.0], [1, 0], [0, 1]) == pytest.approx(-0.5, abs=1e-10)

    def test_plane_dependence_only(self, fisher):
        rng = np.random.default_rng(12)
        x = [0.2, 1.3]
        base = sectional_at(fisher, x, [1, 0], [0, 1])
        for _ in range(10):
            A = rng.uniform(-1, 1, (2, 2))
            if abs(np.linalg.det(A)) < 0.1:
                continue
            X = A[0, 0] * np.array([1.0, 0.0]) + A[0, 1] * np.array([0.0, 1.0])
            Y = A[1, 0] * np.array([1.0, 0.0]) + A[1, 1] * np.array([0.0, 1.0])
            assert sectional_at(fisher, x, X, Y) == pytest.approx(base, abs=1e-9)

    def test_degenerate_plane(self, sphere):
        with pytest.raises(DegeneratePlaneError):
            sectional_at(sphere, [1.0, 1.0], [1, 0], [2, 0])


class TestFlatness:
    def test_euclidean_flat(self, euclid3):
        result = is_flat(euclid3, levi_civita(euclid3), samples=16)
        assert result.flat and result.max_abs_riemann < 1e-15

    def test_sphere_not_flat(self, sphere):
        result = is_flat(sphere, levi_civita(sphere), samples=16)
        assert not result.flat
        assert result.max_abs_riemann == pytest.approx(1.0, rel=0.1)

    def test_one_dimensional_always_flat(self, euclid1):
        C = explicit_connection(euclid1, {(0, 0, 0): "sin(x)"})
        assert is_flat(euclid1, C, samples=16).flat


class TestConstantSectional:
    def test_sphere(self, sphere):
        result = is_constant_sectional(sphere, samples=16)
        assert result.constant and result.kappa == pytest.approx(1.0, abs=1e-9)

    def test_fisher(self, fisher):
        result = is_constant_sectional(fisher, samples=16)
        assert result.constant and result.kappa == pytest.approx(-0.5, abs=1e-9)

    def test_bumpy_sphere_not_constant(self):
        result = is_constant_sectional(fx.bumpy_sphere2(), samples=16)
        assert not result.constant
        assert result.max_deviation > 1e-3

    def test_dimension_guard(self, euclid1):
        with pytest.raises(DimensionError):
            is_constant_sectional(euclid1)


class TestReport:
    def test_sphere_report(self, sphere):
        rep = curvature_report(sphere, levi_civita(sphere), [math.pi / 3, 1.0])
        assert rep.scalar == pytest.approx(2.0, abs=1e-10)
        assert rep.weyl is None
        assert not rep.flat_at_point
        payload = rep.to_dict()
        assert payload["scalar"] == rep.scalar
        assert payload["weyl"] is None

    def test_flat_report_with_weyl(self, euclid3):
        rep = curvature_report(euclid3, levi_civita(euclid3), [0, 0, 0])
        assert rep.flat_at_point
        assert rep.weyl is not None
