"""Graph model: vertex matrices, determinant expansion, realification."""

import math

import numpy as np
import pytest

from qgspectra import (
    BondSpec,
    QuantumGraph,
    SizeCapExceeded,
    ValidationError,
    VertexSpec,
    DegreeMismatch,
    evaluate,
    expand_secular,
    scan_roots,
    secular_series,
    transfer_determinant,
    transfer_matrix,
    vertex_scattering,
)

from conftest import ALL_GRAPHS, make_star3


def numeric_det(graph, k):
    n = 2 * len(graph.bonds)
    return np.linalg.det(np.eye(n) - transfer_matrix(graph, k))


class TestVertexScattering:
    def test_dirichlet_degree_one(self):
        sigma = vertex_scattering(VertexSpec(0, "dirichlet"), 1)
        assert sigma.shape == (1, 1)
        assert sigma[0, 0] == -1

    def test_kirchhoff_degree_two_is_transparent(self):
        sigma = vertex_scattering(VertexSpec(0, "kirchhoff"), 2)
        assert np.allclose(sigma, [[0, 1], [1, 0]], atol=0)

    def test_zero_strength_delta_equals_kirchhoff(self):
        delta = vertex_scattering(VertexSpec(0, "scaling_delta", 0.0), 3)
        kirch = vertex_scattering(VertexSpec(0, "kirchhoff"), 3)
        assert np.array_equal(delta, kirch)

    def test_invalid_degree(self):
        with pytest.raises(DegreeMismatch):
            vertex_scattering(VertexSpec(0, "kirchhoff"), 0)

    @pytest.mark.parametrize("condition,lam", [
        ("dirichlet", 0.0),
        ("kirchhoff", 0.0),
        ("scaling_delta", 0.0),
        ("scaling_delta", 1.7),
        ("scaling_delta", -3.2),
        ("scaling_delta", 25.0),
    ])
    @pytest.mark.parametrize("degree", [1, 2, 3, 5, 8])
    def test_unitarity(self, condition, lam, degree):
        sigma = vertex_scattering(VertexSpec(0, condition, lam), degree)
        assert np.max(np.abs(sigma @ sigma.conj().T - np.eye(degree))) <= 1e-12


class TestGraphValidation:
    def test_duplicate_vertex_ids(self):
        with pytest.raises(ValidationError, match="unique"):
            QuantumGraph(
                vertices=(VertexSpec(0, "dirichlet"), VertexSpec(0, "dirichlet")),
                bonds=(BondSpec((0, 0), 1.0),),
            )

    def test_unknown_endpoint(self):
        with pytest.raises(ValidationError, match="not a vertex id"):
            QuantumGraph(
                vertices=(VertexSpec(0, "dirichlet"), VertexSpec(1, "dirichlet")),
                bonds=(BondSpec((0, 7), 1.0),),
            )

    def test_nonpositive_length(self):
        with pytest.raises(ValidationError, match="length"):
            QuantumGraph(
                vertices=(VertexSpec(0, "dirichlet"), VertexSpec(1, "dirichlet")),
                bonds=(BondSpec((0, 1), 0.0),),
            )

    def test_tunneling_fraction_rejected(self):
        with pytest.raises(ValidationError, match="potential_fraction must be < 1"):
            QuantumGraph(
                vertices=(VertexSpec(0, "dirichlet"), VertexSpec(1, "dirichlet")),
                bonds=(BondSpec((0, 1), 1.0, 1.2),),
            )

    def test_disconnected_graph(self):
        with pytest.raises(ValidationError, match="not connected"):
            QuantumGraph(
                vertices=tuple(VertexSpec(i, "dirichlet") for i in range(4)),
                bonds=(BondSpec((0, 1), 1.0), BondSpec((2, 3), 1.0)),
            )

    def test_isolated_vertex(self):
        with pytest.raises(ValidationError, match="degree 0"):
            QuantumGraph(
                vertices=(VertexSpec(0, "dirichlet"), VertexSpec(1, "dirichlet"),
                          VertexSpec(2, "kirchhoff")),
                bonds=(BondSpec((0, 1), 1.0),),
            )

    def test_size_cap(self):
        vertices = [VertexSpec(0, "kirchhoff")]
        vertices += [VertexSpec(i, "dirichlet") for i in range(1, 10)]
        bonds = tuple(BondSpec((0, i), 1.0 + 0.01 * i) for i in range(1, 10))
        with pytest.raises(SizeCapExceeded):
            QuantumGraph(vertices=tuple(vertices), bonds=bonds)

    def test_delta_strength_only_on_delta(self):
        with pytest.raises(ValidationError, match="delta strength"):
            QuantumGraph(
                vertices=(VertexSpec(0, "dirichlet", 1.0), VertexSpec(1, "dirichlet")),
                bonds=(BondSpec((0, 1), 1.0),),
            )

    def test_bond_action_folds_potential(self):
        bond = BondSpec((0, 1), 2.0, 0.75)
        assert bond.action == pytest.approx(1.0, abs=1e-15)


class TestSecularSeries:
    def test_dirichlet_bond_is_sine(self):
        series = secular_series(ALL_GRAPHS["bond_dd"]())
        assert series.leading_action == pytest.approx(1.0, abs=0)
        assert series.leading_phase == pytest.approx(3 * math.pi / 2, abs=1e-12)
        assert series.terms == ()
        for k in (0.3, 1.0, 2.7):
            assert evaluate(series, k) == pytest.approx(math.sin(k), abs=1e-15)

    def test_mixed_bond_is_cosine(self):
        series = secular_series(ALL_GRAPHS["bond_dk"]())
        assert series.leading_action == pytest.approx(1.0, abs=0)
        assert min(series.leading_phase, 2 * math.pi - series.leading_phase) <= 1e-12
        assert series.terms == ()

    def test_three_star_structure(self):
        series = secular_series(make_star3())
        assert series.leading_action == pytest.approx(2.14, abs=1e-12)
        actions = sorted(t.action for t in series.terms)
        # Signed length combinations inside (0, S0).
        assert actions == pytest.approx([0.14, 0.72, 1.28], abs=1e-9)
        for t in series.terms:
            assert t.amplitude == pytest.approx(1.0 / 3.0, abs=1e-9)

    def test_equal_arm_star_collapses_to_double_bond(self):
        # A transparent degree-two Kirchhoff vertex joins the two unit arms
        # into one Dirichlet bond of length 2, whose series is sin(2k).
        series = secular_series(ALL_GRAPHS["star2_equal"]())
        assert series.leading_action == pytest.approx(2.0, abs=1e-12)
        assert series.leading_phase == pytest.approx(3 * math.pi / 2, abs=1e-12)
        assert series.terms == ()

    def test_reconstruction_residual(self, any_graph):
        expansion = expand_secular(any_graph)
        rng = np.random.default_rng(11)
        ks = rng.uniform(0.05, 50.0, size=200)
        for k in ks:
            recon = expansion.normalization * np.exp(-1j * expansion.theta * k) * numeric_det(any_graph, k)
            assert abs(evaluate(expansion.series, k) - recon.real) <= 1e-9
            assert abs(recon.imag) <= 1e-9

    def test_zero_sets_coincide(self, any_graph):
        # Roots of the realified series against roots of the numeric
        # determinant; the latter are located without the symbolic
        # expansion, through the recorded constants only.
        expansion = expand_secular(any_graph)
        series = expansion.series
        window = (0.0, 25.0)
        series_roots = scan_roots(series, window)

        def real_det(k):
            return (expansion.normalization * np.exp(-1j * expansion.theta * k) * numeric_det(any_graph, k)).real

        s0 = series.leading_action
        ks = np.linspace(0.05, window[1], int(50 * s0 * window[1] / math.pi))
        vals = np.array([real_det(k) for k in ks])
        signs = np.sign(vals)
        det_roots = []
        for i in np.nonzero(signs[:-1] != signs[1:])[0]:
            a, b = ks[i], ks[i + 1]
            fa = vals[i]
            for _ in range(80):
                mid = 0.5 * (a + b)
                fm = real_det(mid)
                if np.sign(fm) == np.sign(fa):
                    a, fa = mid, fm
                else:
                    b = mid
            det_roots.append(0.5 * (a + b))
        det_roots = np.array(det_roots)

        assert len(det_roots) == len(series_roots)
        if len(det_roots):
            assert np.max(np.abs(det_roots - series_roots)) <= 1e-8

    def test_exponent_vectors_are_binary(self, any_graph):
        expo = transfer_determinant(any_graph)
        n = expo.n_directed
        assert len(expo.coefficients) <= 2 ** n
        for mask in expo.coefficients:
            assert 0 <= mask < 2 ** n
            assert set(expo.exponent_vector(mask)) <= {0, 1}
        assert all(abs(c) >= 1e-14 for c in expo.coefficients.values())

    def test_expo_polynomial_matches_numeric_det(self, any_graph):
        expo = transfer_determinant(any_graph)
        for k in (0.17, 1.3, 6.9):
            assert expo.evaluate(k) == pytest.approx(numeric_det(any_graph, k), abs=1e-10)

    def test_commensurate_actions_merge(self):
        # Two arms of equal length make several subsets share one total
        # action; their coefficients must be added, not duplicated.
        graph = QuantumGraph(
            vertices=(
                VertexSpec(0, "kirchhoff"),
                VertexSpec(1, "dirichlet"),
                VertexSpec(2, "dirichlet"),
                VertexSpec(3, "dirichlet"),
            ),
            bonds=(BondSpec((0, 1), 1.0), BondSpec((0, 2), 1.0), BondSpec((0, 3), 0.5)),
        )
        series = secular_series(graph)
        actions = [t.action for t in series.terms]
        assert len(actions) == len(set(actions))
        rng = np.random.default_rng(3)
        expansion = expand_secular(graph)
        for k in rng.uniform(0.1, 30.0, size=50):
            recon = expansion.normalization * np.exp(-1j * expansion.theta * k) * numeric_det(graph, k)
            assert abs(evaluate(series, k) - recon.real) <= 1e-9
