import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lenardlab import chartcore as cc
from lenardlab import equivariant as eq
from lenardlab.sampling import default_rng, sample_gapped_box, sample_segments
from lenardlab.wdvv import wdvv_residual


# --- quadratic invariant and charts -----------------------------------------


def test_chart_map_example_values():
    quad = eq.QuadraticInvariant(2.0, 1.0)
    assert np.allclose(quad.a_to_A([1.0, 0.0, 0.0]), [2.0, 1.0, 1.0])
    assert np.allclose(quad.a_to_A(np.zeros(3)), np.zeros(3))
    assert np.allclose(eq.a_to_A(quad, [1.0, 0.0, 0.0]), [2.0, 1.0, 1.0])
    assert np.allclose(eq.A_to_a(quad, [2.0, 1.0, 1.0]), [1.0, 0.0, 0.0])


@settings(max_examples=40)
@given(a=st.tuples(*[st.floats(-5, 5).map(lambda v: round(v, 4))] * 3).map(np.array),
       alpha=st.floats(0.5, 5), beta=st.floats(0.1, 2))
def test_chart_round_trip(a, alpha, beta):
    if abs((alpha - beta) ** 2 * (2 * beta + alpha)) < 1e-3:
        return
    quad = eq.QuadraticInvariant(alpha, beta)
    assert np.allclose(quad.A_to_a(quad.a_to_A(a)), a, atol=1e-12)


def test_degenerate_invariants_rejected():
    with pytest.raises(eq.DegenerateParametersError):
        eq.QuadraticInvariant(1.0, 1.0)
    with pytest.raises(eq.DegenerateParametersError):
        eq.QuadraticInvariant(2.0, -1.0)  # 2*beta + alpha = 0


def test_gradient_form_matches_quadratic():
    quad = eq.QuadraticInvariant(2.0, 1.0)
    dA = quad.gradient_form()
    assert np.allclose(dA.coeff_at([1.0, 0.0, 0.0]), [2.0, 1.0, 1.0])
    a = np.array([0.8, 1.7, 2.5])
    assert cc.fd_check_one_form(dA, a) < 1e-9
    assert cc.closure_residual(dA, a) == 0.0
    assert np.allclose(cc.fd_gradient(quad.value, a), quad.gradient(a), atol=1e-8)


# --- parameter constraints ----------------------------------------------------


def test_sigma_constraints_reference_solution():
    sigma1, sigma0 = eq.solve_sigma_constraints(2.0, 1.0, -0.125)
    assert sigma1 == pytest.approx(0.0, abs=1e-15)
    assert sigma0 == pytest.approx(0.25, abs=1e-15)


def test_sigma_constraints_shift_linearity():
    # resolving after sigma2 -> sigma2 + delta shifts sigma1 by -delta and
    # sigma0 by +8*delta (the sigma0 rule carries -4*sigma1 + 4*sigma2)
    base1, base0 = eq.solve_sigma_constraints(2.0, 1.0, -0.125)
    delta = 0.01
    new1, new0 = eq.solve_sigma_constraints(2.0, 1.0, -0.125 + delta)
    assert new1 - base1 == pytest.approx(-delta, abs=1e-14)
    assert new0 - base0 == pytest.approx(8 * delta, abs=1e-14)


def test_sigma_constraints_beta_zero():
    sigma1, _ = eq.solve_sigma_constraints(1.0, 0.0, 0.3)
    assert sigma1 == pytest.approx(-0.3)


def test_family_params_reject_broken_sum_rules():
    quad = eq.QuadraticInvariant(2.0, 1.0)
    with pytest.raises(ValueError, match="sum rules"):
        eq.FamilyParams(quad, 0.25, (0.1, -0.125), (1.0, -1.0))
    with pytest.raises(eq.DegenerateParametersError):
        eq.FamilyParams(quad, 0.25, (0.0, -0.125), (1.0, 0.0))


def test_phi_and_psi_reference_values():
    assert eq.phi(2.0, 1.0, -0.125) == pytest.approx(0.0, abs=1e-15)
    assert eq.phi(2.0, 1.0, 0.0) == pytest.approx(5.0 / 8.0)
    assert eq.psi([1.0, 1.0, 1.0]) == pytest.approx(3.0 / 8.0)
    with pytest.raises(cc.SingularPointError):
        eq.psi([1.0, -1.0, 2.0])


def test_phi_roots_reference_values():
    roots = eq.solve_phi_roots(2.0, 1.0)
    assert roots.root1 == pytest.approx(-1.0 / 8.0)
    assert roots.root2 == pytest.approx(-5.0 / 32.0)
    assert eq.solve_phi_roots(5.0, 2.0).root1 == pytest.approx(-1.0 / 27.0)


def test_phi_roots_beta_zero_flagged():
    with pytest.raises(eq.DegenerateParametersError, match="identically"):
        eq.solve_phi_roots(1.0, 0.0)


@settings(max_examples=40)
@given(alpha=st.floats(0.5, 4), beta=st.floats(0.1, 2), c=st.floats(0.5, 3))
def test_phi_roots_scale_inversely(alpha, beta, c):
    if abs((alpha - beta) ** 2 * (2 * beta + alpha)) < 1e-3:
        return
    base = eq.solve_phi_roots(alpha, beta)
    scaled = eq.solve_phi_roots(c * alpha, c * beta)
    assert scaled.root1 == pytest.approx(base.root1 / c, rel=1e-9)
    assert scaled.root2 == pytest.approx(base.root2 / c, rel=1e-9)


# --- one-form family -----------------------------------------------------------


@pytest.fixture(scope="module")
def sample_a(example3):
    _, _, cx = example3
    return sample_gapped_box(default_rng(5150), 20, predicates=cx.sampling_predicates())


def test_dQ_reference_family_closed_form(example3, sample_a):
    params, _, _ = example3
    dQ = eq.build_dQ(params)
    for a in sample_a:
        expected = np.array([-0.25, 0.25, 0.0]) / (a[0] - a[1])
        assert np.allclose(dQ.coeff_at(a), expected, atol=1e-12)
        assert cc.closure_residual(dQ, a) < 1e-12


def test_dQ_vanishes_for_zero_sigmas():
    params = eq.FamilyParams(eq.QuadraticInvariant(1.0, 0.0), 1.0, (0.0, 0.0), (1.0, -1.0))
    dQ = eq.build_dQ(params)
    assert np.allclose(dQ.coeff_at([0.5, 1.5, 2.5]), 0.0)


def test_family_forms_have_required_symmetries(example3, sample_a):
    params, _, _ = example3
    dQ, dP = eq.build_dQ(params), eq.build_dP(params)
    for a in sample_a[:10]:
        assert np.allclose(cc.pullback(eq.SIGMA_12, dQ).coeff_at(a), dQ.coeff_at(a), atol=1e-12)
        assert np.allclose(cc.pullback(eq.SIGMA_23, dP).coeff_at(a), dP.coeff_at(a), atol=1e-12)


def test_family_forms_fd_jacobians(example3, sample_a):
    params, _, _ = example3
    for form in (eq.build_dQ(params), eq.build_dP(params)):
        for a in sample_a[:5]:
            assert cc.fd_check_one_form(form, a) < 1e-6


# --- square completion ----------------------------------------------------------


def test_complete_square_trivial_relabeling():
    quad = eq.QuadraticInvariant(1.0, 0.0)
    dA = quad.gradient_form()
    dP = cc.coordinate_form(eq.A_CHART, 0)
    dQ = cc.constant_form(eq.A_CHART, [0.0, 0.0, 0.0])
    square = eq.complete_square(dA, dP, dQ, quad=quad)
    a = np.array([0.3, 0.9, 2.1])
    assert np.allclose(square.dS.coeff_at(a), [0, 1, 0])
    assert np.allclose(square.dV.coeff_at(a), [0, 0, 1])


def test_complete_square_rejects_asymmetric_input():
    quad = eq.QuadraticInvariant(1.0, 0.0)
    dA = quad.gradient_form()
    with pytest.raises(eq.SquareSymmetryError):
        eq.complete_square(dA, cc.coordinate_form(eq.A_CHART, 0),
                           cc.coordinate_form(eq.A_CHART, 0))


def test_square_frozen_coefficients_at_reference_point(example3):
    _, _, cx = example3
    a = np.array([2.0, 1.0, 3.0])
    assert np.allclose(cx.square.dT.coeff_at(a), [0.0, 0.125, -0.125])  # -(1/4)/(a2-a3) = 1/8
    assert np.allclose(cx.square.dP.coeff_at(a), [1.0 / 16.0, -7.0 / 32.0, 9.0 / 32.0],
                       atol=1e-14)
    assert np.allclose(cx.square.dS.coeff_at(a), [2.0 / 7.0, -17.0 / 56.0, 9.0 / 56.0],
                       atol=1e-14)


def test_display_forms_match_construction(example3, sample_a):
    _, _, cx = example3
    displays = eq.example3_display_forms()
    built = cx.square.named_forms()
    for a in sample_a:
        for name, disp in displays.items():
            assert np.allclose(built[name].coeff_at(a), disp(a), atol=1e-12), name


def test_dP_display_numerator_variant_is_not_closed():
    """The dP display's first numerator must carry -2*a1*a3; the variant with
    -2*a2*a3 instead fails exactness, so it cannot be a square entry."""
    def variant(a):
        a1, a2, a3 = a
        x1 = 2 * a1 + a2 + a3
        return np.array([
            (6 * a1**2 - 2 * a1 * a2 - 2 * a2 * a3 - a2**2 - a3**2)
            / (4 * x1 * (a1 - a2) * (a1 - a3)),
            -(2 * a2 + a1 + a3) / (4 * x1 * (a1 - a2)),
            -(2 * a3 + a1 + a2) / (4 * x1 * (a1 - a3)),
        ])

    correct = eq.example3_display_forms()["dP"]
    a = np.array([2.0, 1.0, 3.0])
    j_variant = cc.fd_jacobian(variant, a)
    j_correct = cc.fd_jacobian(correct, a)
    assert np.max(np.abs(j_variant - j_variant.T)) > 0.01
    assert np.max(np.abs(j_correct - j_correct.T)) < 1e-8


# --- the assembled complex -------------------------------------------------------


def test_chain_fields_are_inverse_hessian_rows(example3, sample_a):
    _, _, cx = example3
    for a in sample_a:
        for j, k in enumerate(cx.operators):
            assert np.allclose(k.mat_at(a) @ a, eq.EXAMPLE3_CHAIN_FIELDS[j], atol=1e-12)


def test_partition_of_identity(example3, sample_a):
    _, _, cx = example3
    for a in sample_a:
        big_a = cx.dA.coeff_at(a)
        total = sum(big_a[i] * cx.operators[i].mat_at(a) for i in range(3))
        assert np.max(np.abs(total - np.eye(3))) < 1e-10


def test_operator_exchange_under_transpositions(example3, sample_a):
    _, _, cx = example3
    for sig, j, l in eq.TRANSPOSITIONS:
        moved = cc.transform_tensor(sig, cx.operators[j])
        for a in sample_a[:10]:
            assert np.allclose(moved.mat_at(a), cx.operators[l].mat_at(a), atol=1e-10)


def test_k2dR_matches_k3dQ(example3, sample_a):
    _, _, cx = example3
    for a in sample_a:
        lhs = cx.square.dR.coeff_at(a) @ cx.operators[1].mat_at(a)
        rhs = cx.square.dQ.coeff_at(a) @ cx.operators[2].mat_at(a)
        assert np.max(np.abs(lhs - rhs)) < 1e-9


def test_verify_complex_reference_family(example3, example3_points):
    _, _, cx = example3
    report = eq.verify_complex(cx, example3_points, with_fd=True)
    assert report.passed, [c.to_dict() for c in report.conditions if not c.passed]


def test_operator_commutator_at_reference_point(example3):
    _, _, cx = example3
    a = np.array([2.0, 1.0, 3.0])
    assert cc.commutator_residual(cx.operators[1], cx.operators[2], a) < 1e-10


def test_verification_is_order_independent(example3, example3_points):
    # max-reduction aggregation: shuffling the point set changes nothing
    _, _, cx = example3
    pts = list(example3_points[:15])
    forward = eq.verify_complex(cx, pts)
    backward = eq.verify_complex(cx, pts[::-1])
    for a, b in zip(forward.conditions, backward.conditions):
        assert a.to_dict() == b.to_dict()


@pytest.mark.parametrize("alpha,beta,root", [(2.0, 1.0, 2), (5.0, 2.0, 1), (5.0, 2.0, 2)])
def test_verify_complex_other_roots(alpha, beta, root):
    roots = eq.solve_phi_roots(alpha, beta)
    sigma2 = roots.root1 if root == 1 else roots.root2
    cx = eq.assemble_complex(eq.FamilyParams.solve(alpha, beta, sigma2))
    pts = sample_gapped_box(default_rng(7 + root), 25, predicates=cx.sampling_predicates())
    report = eq.verify_complex(cx, pts)
    assert report.passed, [c.to_dict() for c in report.conditions if not c.passed]


def test_perturbed_root_breaks_commutativity(example3_points):
    cx = eq.assemble_complex(eq.FamilyParams.solve(2.0, 1.0, -0.125 + 1e-2))
    report = eq.verify_complex(cx, example3_points[:20])
    assert report.condition("operator_commutators").max_residual > 1e-4
    assert report.condition("symmetry_constraint").max_residual > 1e-4
    assert report.condition("chain_of_forms").passed  # sum rules still hold
    assert report.condition("chain_of_vector_fields").passed


def test_symmetry_constraint_residual_vanishes_at_root(example3, sample_a):
    _, _, cx = example3
    assert max(eq.symmetry_constraint_residual(cx, a) for a in sample_a) < 1e-10


@pytest.mark.parametrize("sigma2", [0.0, -0.0625, -0.25, 0.1, -0.115])
def test_split_form_identity_off_root(sigma2, sample_a):
    params = eq.FamilyParams.solve(2.0, 1.0, sigma2)
    cx = eq.assemble_complex(params)
    for a in sample_a:
        assert eq.split_form_residual(params, a, cx=cx) < 1e-9
    # off the roots the constraint defect has the predicted magnitude
    a = sample_a[0]
    big_a = params.quad.a_to_A(a)
    scale = abs(eq.phi(2.0, 1.0, sigma2) * eq.psi(big_a))
    assert eq.symmetry_constraint_residual(cx, a) > 0.1 * scale


def test_split_form_scalar_magnitude(example3_points):
    # the defect is exactly Phi*Psi*(dA3/A3 - dA2/A2): check the size relation
    params = eq.FamilyParams.solve(2.0, 1.0, 0.0)
    cx = eq.assemble_complex(params)
    a = example3_points[0]
    big_a = params.quad.a_to_A(a)
    comparison = abs(eq.phi(2.0, 1.0, 0.0) * eq.psi(big_a)) * np.max(np.abs(
        params.quad.hessian() @ np.array([0.0, -1.0 / big_a[1], 1.0 / big_a[2]])))
    assert eq.symmetry_constraint_residual(cx, a) == pytest.approx(comparison, rel=1e-9)


# --- WDVV from the square ---------------------------------------------------------


def test_wdvv_residual_of_complex_small(example3, sample_a):
    _, _, cx = example3
    assert max(eq.wdvv_residual_of_complex(cx, a) for a in sample_a) < 1e-9


def test_third_tensor_routes_agree(example3, sample_a):
    _, _, cx = example3
    for a in sample_a[:10]:
        c_forms = eq.third_tensor_from_square(cx, a)
        c_chain = eq.third_tensor_from_chain(cx, a)
        assert np.max(np.abs(c_forms - c_chain)) < 1e-10


def test_third_tensor_totally_symmetric(example3, sample_a):
    _, _, cx = example3
    for a in sample_a[:10]:
        c = eq.third_tensor_from_chain(cx, a)
        assert eq._symmetry_defect(c) < 1e-10


def test_complex_residual_matches_reference_potential(example3, sample_a):
    params, reference, cx = example3
    h = params.quad.hessian()
    for a in sample_a[:10]:
        assert abs(eq.wdvv_residual_of_complex(cx, a)
                   - wdvv_residual(reference, h @ a)) < 1e-8


def test_square_in_x_equals_reference_third_slice(example3, sample_a):
    params, reference, cx = example3
    h = params.quad.hessian()
    dQ_x = eq.square_form_in_x(cx.square, 0, 1)
    for a in sample_a[:10]:
        x = h @ a
        assert np.allclose(dQ_x.coeff_at(x), reference.third_at(x)[0, 1], atol=1e-10)


# --- reconstruction ----------------------------------------------------------------


def _segments(example3, count=5, seed=333):
    params, _, cx = example3
    h = params.quad.hessian()
    preds = [p for j in range(3) for l in range(j, 3)
             for p in eq.square_form_in_x(cx.square, j, l).predicates]
    return sample_segments(default_rng(seed), count, predicates=preds,
                           to_ambient=lambda a: h @ a)


def test_reconstruction_matches_reference_hessian(example3):
    params, reference, cx = example3
    for x0, x1 in _segments(example3):
        dh = reference.hessian_at(x1) - reference.hessian_at(x0)
        for j in range(3):
            for l in range(j, 3):
                val = eq.reconstruct_potential_entry(cx.square, j, l, x0, x1)
                assert val == pytest.approx(dh[j, l], abs=1e-8)


def test_reconstruction_loop_and_path_independence(example3):
    _, _, cx = example3
    (x0, x1), (x2, _) = _segments(example3, count=2, seed=41)
    loop = (eq.reconstruct_potential_entry(cx.square, 0, 1, x0, x1)
            + eq.reconstruct_potential_entry(cx.square, 0, 1, x1, x0))
    assert abs(loop) < 1e-9
    direct = eq.reconstruct_potential_entry(cx.square, 1, 2, x0, x1)
    detour = (eq.reconstruct_potential_entry(cx.square, 1, 2, x0, x2)
              + eq.reconstruct_potential_entry(cx.square, 1, 2, x2, x1))
    assert direct == pytest.approx(detour, abs=1e-8)


def test_reconstruction_rejects_singular_path(example3):
    _, _, cx = example3
    x0 = np.array([8.0, 7.0, 9.0])     # ordering x1 > x2 is flipped at the far end
    x1 = np.array([7.0, 8.0, 9.5])
    with pytest.raises(cc.SingularSegmentError):
        eq.reconstruct_potential_entry(cx.square, 0, 1, x0, x1)


def test_square_without_quad_cannot_change_chart():
    quad = eq.QuadraticInvariant(1.0, 0.0)
    square = eq.complete_square(quad.gradient_form(), cc.coordinate_form(eq.A_CHART, 0),
                                cc.constant_form(eq.A_CHART, [0.0, 0.0, 0.0]))
    with pytest.raises(ValueError, match="quadratic invariant"):
        eq.square_form_in_x(square, 0, 0)


# --- fixture ------------------------------------------------------------------------


def test_fixture_sigma2_is_first_root(example3):
    params, _, _ = example3
    assert params.sigma2 == pytest.approx(eq.solve_phi_roots(2.0, 1.0).root1)
    assert params.sigma1 == pytest.approx(0.0, abs=1e-15)
    assert params.sigma0 == pytest.approx(0.25)


def test_fixture_reference_scale(example3):
    _, reference, _ = example3
    # d^2F/dx1 dx2 = -(1/16)(2 log(x1-x2)^2 + 6)
    x = np.array([3.0, 1.0, 6.0])
    expected = -(2.0 * np.log(4.0) + 6.0) / 16.0
    assert reference.hessian_at(x)[0, 1] == pytest.approx(expected, abs=1e-12)
