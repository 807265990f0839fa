"""The quadratic hydrodynamic recursion operator on R^3 and its Lenard complex.

The flow

    w2_t = 2 w1_x,    w1_t = 2 w0_x - w2 w2_x,    w0_t = -(1/2) w1 w2_x

has coefficient matrix V; recast as a (1,1)-tensor K through the covector
action (coordinates ordered (w0, w1, w2)):

    K dw2 = 2 dw1,    K dw1 = 2 dw0 - w2 dw2,    K dw0 = -(1/2) w1 dw2.

K has nonvanishing Nijenhuis torsion, completely characterized by

    dF(Torsion(K)) = dw2 ^ dF,

so powers of K do not produce a closed square of forms.  The corrected
operators K1 = Id, K2 = K, K3 = K^2 + w2 Id together with dA = dw2 and
X = d/dw0 satisfy all the complex conditions, and K itself has vanishing
Haantjes torsion.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .chartcore import (
    Chart,
    NIJENHUIS_WEDGE_CALIBRATION,
    REGULARITY_MARGIN,
    OneFormField,
    RegularPoint,
    ScalarField,
    TensorField11,
    VectorFieldSpec,
    closure_residual,
    commutator_residual,
    constant_form,
    coordinate_vector_field,
    coords_of,
    covector_image,
    fd_check_one_form,
    fd_check_tensor,
    haantjes_residual,
    identity_tensor,
    lie_bracket_residual,
    nijenhuis_contracted,
    pairwise_indices,
    tensor_add_scalar_identity,
    tensor_compose,
    vector_image,
    wedge_matrix,
)
from .report import VerificationReport

W_CHART = Chart("w", 3)


def gd_point(w0: float, w1: float, w2: float) -> RegularPoint:
    """A point of the w-chart; the operator is polynomial, so no locus to avoid."""
    return RegularPoint(W_CHART, np.array([w0, w1, w2], dtype=float))


def gd_operator() -> TensorField11:
    """The recursion operator; row i is the covector image of dw_i."""

    def mat(w: np.ndarray) -> np.ndarray:
        return np.array([
            [0.0, 0.0, -0.5 * w[1]],
            [2.0, 0.0, -w[2]],
            [0.0, 2.0, 0.0],
        ])

    def jac(w: np.ndarray) -> np.ndarray:
        j = np.zeros((3, 3, 3))
        j[0, 2, 1] = -0.5
        j[1, 2, 2] = -1.0
        return j

    return TensorField11(W_CHART, mat, jac)


def gd_scalar() -> ScalarField:
    """The scalar entering K3 = K^2 + A Id; dA = dw2 fixes A = w2 up to a
    constant, which is taken to be zero (closure checks do not see it)."""
    e2 = np.array([0.0, 0.0, 1.0])
    return ScalarField(W_CHART, lambda w: float(w[2]), lambda w: e2)


@dataclass(frozen=True, eq=False)
class GDComplex:
    operators: tuple[TensorField11, TensorField11, TensorField11]
    dA: OneFormField
    X: VectorFieldSpec
    scalar: ScalarField


def gd_complex() -> GDComplex:
    k = gd_operator()
    k3 = tensor_add_scalar_identity(tensor_compose(k, k), gd_scalar())
    return GDComplex(
        operators=(identity_tensor(W_CHART), k, k3),
        dA=constant_form(W_CHART, [0.0, 0.0, 1.0]),
        X=coordinate_vector_field(W_CHART, 0),
        scalar=gd_scalar(),
    )


def gd_torsion_identity_residual(f: ScalarField, p) -> float:
    """Residual of df(Torsion(K)) = dw2 ^ df at p, with the package-wide
    calibration factor applied."""
    k = gd_operator()
    contracted = nijenhuis_contracted(k, f, p)
    e2 = np.array([0.0, 0.0, 1.0])
    target = NIJENHUIS_WEDGE_CALIBRATION * wedge_matrix(e2, f.grad_at(p))
    return float(np.max(np.abs(contracted - target)))


def chain_form(cx: GDComplex, j: int) -> OneFormField:
    """theta_j = K_j dA."""
    return covector_image(cx.operators[j], cx.dA)


def square_form(cx: GDComplex, j: int, l: int) -> OneFormField:
    """theta_{jl} = K_j K_l dA."""
    return covector_image(cx.operators[j], chain_form(cx, l))


def naive_power_form(k_power: int) -> OneFormField:
    """K^k dw2 for the uncorrected power chain; not closed from k = 3 on."""
    k = gd_operator()
    form = constant_form(W_CHART, [0.0, 0.0, 1.0])
    for _ in range(k_power):
        form = covector_image(k, form)
    return form


def verify_gd_complex(points: Sequence, tol: float = 1e-8,
                      tol_fd: float = 1e-6, with_fd: bool = False) -> VerificationReport:
    """Check the complex conditions for (Id, K, K^2 + w2 Id, dw2, d/dw0)."""
    pts = [coords_of(p, 3) for p in points]
    if not pts:
        raise ValueError("need at least one point")
    cx = gd_complex()
    chain = [chain_form(cx, j) for j in range(3)]
    square = {(j, l): square_form(cx, j, l) for j in range(3) for l in range(j, 3)}
    fields = [vector_image(k, cx.X) for k in cx.operators]

    res = {
        "chain_closure": 0.0,
        "square_closure": 0.0,
        "vector_field_commutators": 0.0,
        "operator_commutators": 0.0,
        "haantjes_torsion": 0.0,
        "operator_symmetry_along_X": 0.0,
    }
    if with_fd:
        res["jacobian_fd_agreement"] = 0.0

    # chain independence is reported per point, not assumed: the shortfall of
    # |det| below the regularity margin (here det = -8 identically)
    min_det = np.inf
    for w in pts:
        chain_mat = np.stack([f.coeff_at(w) for f in chain])
        min_det = min(min_det, abs(float(np.linalg.det(chain_mat))))
        for f in chain:
            res["chain_closure"] = max(res["chain_closure"], closure_residual(f, w))
        for f in square.values():
            res["square_closure"] = max(res["square_closure"], closure_residual(f, w))
        for j, l in pairwise_indices(3):
            res["vector_field_commutators"] = max(
                res["vector_field_commutators"],
                lie_bracket_residual(fields[j], fields[l], w))
            res["operator_commutators"] = max(
                res["operator_commutators"],
                commutator_residual(cx.operators[j], cx.operators[l], w))
        for k in cx.operators:
            res["haantjes_torsion"] = max(res["haantjes_torsion"], haantjes_residual(k, w))
            # Lie_X(K) = 0 for X = d/dw0: no matrix entry depends on w0.
            res["operator_symmetry_along_X"] = max(
                res["operator_symmetry_along_X"],
                float(np.max(np.abs(k.jac_at(w)[:, :, 0]))))
        if with_fd:
            worst = max(fd_check_one_form(f, w) for f in square.values())
            worst = max(worst, max(fd_check_tensor(k, w) for k in cx.operators))
            res["jacobian_fd_agreement"] = max(res["jacobian_fd_agreement"], worst)

    report = VerificationReport()
    for name, value in res.items():
        report.add(name, len(pts), value, tol_fd if name == "jacobian_fd_agreement" else tol)
    report.add("chain_independence", len(pts), max(0.0, REGULARITY_MARGIN - min_det), 1e-12)
    return report
