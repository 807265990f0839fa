"""Equivariant Lenard complexes on R^3 built from logarithmic one-form families.

The construction runs in two charts related by the constant Hessian H of an
S3-invariant quadratic A:

    A-coordinates  A = H a,          H = (alpha - beta) I + beta J,

with the one-form family defined in the A-chart,

    dQ = sum_k sigma_k [ d(A1 + eta_k A2)/(A1 + eta_k A2)
                         + d(A2 + eta_k A1)/(A2 + eta_k A1) ],
    dP = sigma0 dA1/A1
         + sum_k (sigma_k/eta_k) [ d(A1 + eta_k A2)/(...) + d(A1 + eta_k A3)/(...) ]
         + sum_k (sigma_k eta_k) [ d(A2 + eta_k A1)/(...) + d(A3 + eta_k A1)/(...) ],

and everything converted to the a-chart, where the permutation action is the
plain coordinate transposition (H commutes with it).  The recursion operators
are assembled row-wise from the completed square of forms

    K1: (dP, dQ, dR)    K2: (dQ, dS, dT)    K3: (dR, dT, dV)

and the scaling field X has a-components equal to the point itself.

The free parameters obey two linear sum rules (fixing sigma1 and sigma0 from
sigma2 for the m = 2 family with eta = (+1, -1)); the remaining nonlinear
symmetry condition sigma23*(K3 dQ) = K3 dQ factors through the scalar
Phi(alpha, beta, sigma2), whose roots give genuine complexes.
"""

from __future__ import annotations

from collections import namedtuple
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .chartcore import (
    Chart,
    OneFormField,
    Permutation,
    SingularPointError,
    TensorField11,
    VectorFieldSpec,
    closure_residual,
    coords_of,
    covector_image,
    fd_check_one_form,
    fd_check_tensor,
    fd_check_vector_field,
    haantjes_residual,
    integrate_one_form,
    lie_bracket_residual,
    pairwise_indices,
    pullback,
    transform_tensor,
    vector_image,
)
from .report import VerificationReport
from .wdvv import (
    Prepotential,
    VeselovPotential,
    _commutation_residual,
    _guarded_inverse,
    veselov_prepotential,
)

A_CHART = Chart("a", 3)
X_CHART = Chart("x", 3)

SIGMA_12 = Permutation.transposition(3, 0, 1)
SIGMA_13 = Permutation.transposition(3, 0, 2)
SIGMA_23 = Permutation.transposition(3, 1, 2)
TRANSPOSITIONS = ((SIGMA_12, 0, 1), (SIGMA_13, 0, 2), (SIGMA_23, 1, 2))

TOL_ANALYTIC = 1e-9
TOL_FD = 1e-6

# Probe points used for cheap structural checks while building squares.
_PROBES = (
    np.array([0.7, 1.9, 2.6]),
    np.array([1.3, 0.6, 2.9]),
    np.array([2.3, 1.1, 0.8]),
)


class DegenerateParametersError(ValueError):
    """Quadratic invariant or family parameters outside the admissible set."""


class SquareSymmetryError(ValueError):
    """Input forms violate the symmetry constraints needed for completion."""


# ---------------------------------------------------------------------------
# quadratic invariant and charts


@dataclass(frozen=True)
class QuadraticInvariant:
    """A = (alpha/2) sum a_i^2 + beta (a1 a2 + a2 a3 + a3 a1) on R^3.

    The product block is the full symmetric sum (S3 invariance forces the
    a3 a1 term).  Admissibility requires (alpha - beta)^2 (2 beta + alpha)
    to be nonzero, so the Hessian is invertible.
    """

    alpha: float
    beta: float

    def __post_init__(self) -> None:
        disc = (self.alpha - self.beta) ** 2 * (2 * self.beta + self.alpha)
        if abs(disc) < 1e-12:
            raise DegenerateParametersError(
                f"(alpha-beta)^2*(2*beta+alpha) = {disc:g} must be nonzero "
                f"(alpha={self.alpha:g}, beta={self.beta:g})"
            )

    def hessian(self) -> np.ndarray:
        return (self.alpha - self.beta) * np.eye(3) + self.beta * np.ones((3, 3))

    def hessian_inverse(self) -> np.ndarray:
        d = (self.alpha - self.beta) * (self.alpha + 2 * self.beta)
        return ((self.alpha + 2 * self.beta) * np.eye(3) - self.beta * np.ones((3, 3))) / d

    def value(self, a) -> float:
        a = coords_of(a, 3)
        return float(0.5 * a @ self.hessian() @ a)

    def gradient(self, a) -> np.ndarray:
        return self.hessian() @ coords_of(a, 3)

    def a_to_A(self, a) -> np.ndarray:
        return self.hessian() @ coords_of(a, 3)

    def A_to_a(self, big_a) -> np.ndarray:
        return self.hessian_inverse() @ coords_of(big_a, 3)

    def gradient_form(self) -> OneFormField:
        """dA = sum_i A_i da_i in the a-chart (exact by construction)."""
        h = self.hessian()
        return OneFormField(A_CHART, lambda a: h @ a, lambda a: h)


def a_to_A(quad: QuadraticInvariant, a) -> np.ndarray:
    return quad.a_to_A(a)


def A_to_a(quad: QuadraticInvariant, big_a) -> np.ndarray:
    return quad.A_to_a(big_a)


# ---------------------------------------------------------------------------
# parameters: sum rules and the symmetry-constraint scalar


def solve_sigma_constraints(alpha: float, beta: float, sigma2: float) -> tuple[float, float]:
    """Solve the two linear sum rules for (sigma1, sigma0), m = 2, eta = (+1, -1)."""
    QuadraticInvariant(alpha, beta)  # validate
    sigma1 = beta / (2 * (beta - alpha) * (2 * beta + alpha)) - sigma2
    sigma0 = (alpha + beta) / ((alpha - beta) * (2 * beta + alpha)) - 4 * sigma1 + 4 * sigma2
    return sigma1, sigma0


@dataclass(frozen=True)
class FamilyParams:
    """Parameters of the logarithmic family; the two sum rules are enforced.

    Sum rules (for any m):
        2 sum_k sigma_k                                = beta / ((beta-alpha)(2 beta+alpha))
        sigma0 + 2 sum_k (sigma_k/eta_k + sigma_k eta_k) = (alpha+beta) / ((alpha-beta)(2 beta+alpha))
    """

    quad: QuadraticInvariant
    sigma0: float
    sigmas: tuple[float, ...]
    etas: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.sigmas) != len(self.etas):
            raise ValueError("sigmas and etas must have equal length")
        if any(e == 0 for e in self.etas):
            raise DegenerateParametersError("every eta_k must be nonzero")
        a, b = self.quad.alpha, self.quad.beta
        rhs_c = b / ((b - a) * (2 * b + a))
        rhs_d = (a + b) / ((a - b) * (2 * b + a))
        lhs_c = 2 * sum(self.sigmas)
        lhs_d = self.sigma0 + 2 * sum(s / e + s * e for s, e in zip(self.sigmas, self.etas))
        if abs(lhs_c - rhs_c) > 1e-10 or abs(lhs_d - rhs_d) > 1e-10:
            raise ValueError(
                f"parameters violate the sum rules: "
                f"{lhs_c:.12g} vs {rhs_c:.12g}, {lhs_d:.12g} vs {rhs_d:.12g}"
            )

    @classmethod
    def solve(cls, alpha: float, beta: float, sigma2: float) -> "FamilyParams":
        sigma1, sigma0 = solve_sigma_constraints(alpha, beta, sigma2)
        return cls(QuadraticInvariant(alpha, beta), sigma0, (sigma1, sigma2), (1.0, -1.0))

    @property
    def sigma1(self) -> float:
        return self.sigmas[0]

    @property
    def sigma2(self) -> float:
        return self.sigmas[1]


def phi(alpha: float, beta: float, sigma2: float) -> float:
    """Obstruction scalar of the symmetry condition sigma23*(K3 dQ) = K3 dQ."""
    QuadraticInvariant(alpha, beta)  # validate
    f1 = 2 * alpha * beta * sigma2 + 2 * alpha**2 * sigma2 - 4 * beta**2 * sigma2 + beta
    f2 = 8 * alpha * beta * sigma2 + 8 * alpha**2 * sigma2 - 16 * beta**2 * sigma2 \
        + alpha + 3 * beta
    return 2 * beta * f1 * f2 / ((alpha - beta) ** 2 * (2 * beta + alpha) ** 2)


def psi(big_a) -> float:
    """Psi(A) = (A1 A2 + A2 A3 + A3 A1) / ((A1+A2)(A2+A3)(A3+A1))."""
    a1, a2, a3 = coords_of(big_a, 3)
    den = (a1 + a2) * (a2 + a3) * (a3 + a1)
    if den == 0.0:
        raise SingularPointError(f"pole of Psi at A = {(a1, a2, a3)}")
    return float((a1 * a2 + a2 * a3 + a3 * a1) / den)


PhiRoots = namedtuple("PhiRoots", ["root1", "root2"])


def solve_phi_roots(alpha: float, beta: float) -> PhiRoots:
    """Both sigma2 roots of phi(alpha, beta, .); each factor is linear in sigma2.

    beta = 0 makes phi vanish identically (every sigma2 admissible) and is
    reported as degenerate rather than solved.
    """
    QuadraticInvariant(alpha, beta)  # validate
    if beta == 0:
        raise DegenerateParametersError(
            "phi vanishes identically for beta = 0; every sigma2 satisfies "
            "the symmetry condition"
        )
    den = (alpha - beta) * (alpha + 2 * beta)
    roots = PhiRoots(-beta / (2 * den), -(alpha + 3 * beta) / (8 * den))
    for r in roots:
        if abs(phi(alpha, beta, r)) > 1e-12:
            raise ArithmeticError(f"root postcondition failed: phi = {phi(alpha, beta, r):g}")
    return roots


# ---------------------------------------------------------------------------
# the logarithmic one-forms, built in the A-chart and pushed to the a-chart


def _log_form(quad: QuadraticInvariant, terms: Sequence[tuple[float, np.ndarray]]) -> OneFormField:
    """sum of w * d(v.A)/(v.A) terms, expressed in the a-chart via A = H a."""
    h = quad.hessian()
    weights = [float(w) for w, _ in terms]
    dirs = [np.asarray(v, dtype=float) for _, v in terms]

    def coeff(a: np.ndarray) -> np.ndarray:
        big_a = h @ a
        c = np.zeros(3)
        for w, v in zip(weights, dirs):
            c += w * v / float(v @ big_a)
        return h @ c

    def jac(a: np.ndarray) -> np.ndarray:
        big_a = h @ a
        j = np.zeros((3, 3))
        for w, v in zip(weights, dirs):
            j -= w * np.outer(v, v) / float(v @ big_a) ** 2
        return h @ j @ h

    seen: dict[tuple, None] = {}
    preds = []
    for v in dirs:
        key = tuple(np.round(v, 12))
        if key not in seen:
            seen[key] = None
            preds.append(lambda a, v=v: float(v @ (h @ a)))
    return OneFormField(A_CHART, coeff, jac, tuple(preds))


def build_dQ(params: FamilyParams) -> OneFormField:
    terms = []
    for s, e in zip(params.sigmas, params.etas):
        terms.append((s, [1.0, e, 0.0]))
        terms.append((s, [e, 1.0, 0.0]))
    return _log_form(params.quad, terms)


def build_dP(params: FamilyParams) -> OneFormField:
    terms = [(params.sigma0, [1.0, 0.0, 0.0])]
    for s, e in zip(params.sigmas, params.etas):
        terms.append((s / e, [1.0, e, 0.0]))
        terms.append((s / e, [1.0, 0.0, e]))
        terms.append((s * e, [e, 1.0, 0.0]))
        terms.append((s * e, [e, 0.0, 1.0]))
    return _log_form(params.quad, terms)


# ---------------------------------------------------------------------------
# square completion and the complex


@dataclass(frozen=True, eq=False)
class EquivariantSquare:
    """The seven forms of an equivariant square, all in the a-chart."""

    dA: OneFormField
    dP: OneFormField
    dQ: OneFormField
    dR: OneFormField
    dT: OneFormField
    dS: OneFormField
    dV: OneFormField
    quad: QuadraticInvariant | None = None

    def form(self, j: int, l: int) -> OneFormField:
        """Square entry theta_{jl} = K_j K_l dA (0-based, symmetric)."""
        table = {
            (0, 0): self.dP, (0, 1): self.dQ, (0, 2): self.dR,
            (1, 1): self.dS, (1, 2): self.dT, (2, 2): self.dV,
        }
        return table[(min(j, l), max(j, l))]

    def named_forms(self) -> dict[str, OneFormField]:
        return {"dA": self.dA, "dP": self.dP, "dQ": self.dQ, "dR": self.dR,
                "dT": self.dT, "dS": self.dS, "dV": self.dV}


def _probe_residual(form_a: OneFormField, form_b: OneFormField) -> float:
    worst, used = 0.0, 0
    for a in _PROBES:
        try:
            worst = max(worst, float(np.max(np.abs(form_a.coeff_at(a) - form_b.coeff_at(a)))))
            used += 1
        except SingularPointError:
            continue
    if used == 0:
        raise SingularPointError("all probe points are singular for these forms")
    return worst


def complete_square(dA: OneFormField, dP: OneFormField, dQ: OneFormField,
                    quad: QuadraticInvariant | None = None,
                    tol: float = TOL_ANALYTIC) -> EquivariantSquare:
    """Complete (dA, dP, dQ) to the full square by transposition pullbacks.

    Requires the input symmetries sigma12*dA = dA, sigma12*dQ = dQ,
    sigma23*dP = dP; produces dR, dT (orbit of dQ) and dS, dV (orbit of dP)
    and cross-checks the exchange table of the completed square.
    """
    for name, sig, form in (("dA", SIGMA_12, dA), ("dQ", SIGMA_12, dQ), ("dP", SIGMA_23, dP)):
        r = _probe_residual(pullback(sig, form), form)
        if r > tol:
            raise SquareSymmetryError(f"{name} violates its input symmetry (residual {r:.3e})")

    square = EquivariantSquare(
        dA=dA, dP=dP, dQ=dQ,
        dR=pullback(SIGMA_23, dQ),
        dT=pullback(SIGMA_13, dQ),
        dS=pullback(SIGMA_12, dP),
        dV=pullback(SIGMA_13, dP),
        quad=quad,
    )
    # exchange table: sigma_{jl} sends theta_{pq} to theta_{pi(p) pi(q)}
    for sig, j, l in TRANSPOSITIONS:
        perm = list(range(3))
        perm[j], perm[l] = perm[l], perm[j]
        for p, q in [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)]:
            r = _probe_residual(pullback(sig, square.form(p, q)), square.form(perm[p], perm[q]))
            if r > tol:
                raise SquareSymmetryError(
                    f"completed square breaks the exchange table at sigma({j},{l}), "
                    f"entry ({p},{q}): residual {r:.3e}"
                )
    return square


def _tensor_from_rows(rows: Sequence[OneFormField]) -> TensorField11:
    """Tensor whose covector images of the coordinate differentials are ``rows``."""
    chart = rows[0].chart

    def mat(u: np.ndarray) -> np.ndarray:
        return np.stack([np.asarray(r.coeff(u), dtype=float) for r in rows])

    def jac(u: np.ndarray) -> np.ndarray:
        return np.stack([np.asarray(r.jac(u), dtype=float) for r in rows])

    preds = tuple(p for r in rows for p in r.predicates)
    return TensorField11(chart, mat, jac, preds)


@dataclass(frozen=True, eq=False)
class LenardComplex:
    """Recursion operators, pivot form and scaling field in the a-chart."""

    params: FamilyParams
    square: EquivariantSquare
    operators: tuple[TensorField11, TensorField11, TensorField11]
    dA: OneFormField
    X: VectorFieldSpec

    @property
    def quad(self) -> QuadraticInvariant:
        return self.params.quad

    def sampling_predicates(self) -> tuple:
        preds = []
        for f in self.square.named_forms().values():
            preds.extend(f.predicates)
        preds.extend((lambda a, i=i, j=j: a[i] - a[j]) for i, j in pairwise_indices(3))
        return tuple(preds)


def assemble_complex(params: FamilyParams) -> LenardComplex:
    dA = params.quad.gradient_form()
    square = complete_square(dA, build_dP(params), build_dQ(params), quad=params.quad)
    k1 = _tensor_from_rows([square.dP, square.dQ, square.dR])
    k2 = _tensor_from_rows([square.dQ, square.dS, square.dT])
    k3 = _tensor_from_rows([square.dR, square.dT, square.dV])
    x = VectorFieldSpec(A_CHART, lambda a: np.asarray(a, dtype=float), lambda a: np.eye(3))
    return LenardComplex(params, square, (k1, k2, k3), dA, x)


# ---------------------------------------------------------------------------
# symmetry constraint and its split form


def k3_dq_form(cx: LenardComplex) -> OneFormField:
    return covector_image(cx.operators[2], cx.square.dQ)


def symmetry_constraint_residual(cx: LenardComplex, p) -> float:
    """Max-norm of sigma23*(K3 dQ) - K3 dQ at p (a-chart coefficients)."""
    theta = k3_dq_form(cx)
    diff = pullback(SIGMA_23, theta).coeff_at(p) - theta.coeff_at(p)
    return float(np.max(np.abs(diff)))


def split_form_residual(params: FamilyParams, p, cx: LenardComplex | None = None) -> float:
    """Residual of the factorized identity

        sigma23*(K3 dQ) - K3 dQ = Phi(alpha, beta, sigma2) Psi(A)
                                    (dA3/A3 - dA2/A2).
    """
    cx = cx if cx is not None else assemble_complex(params)
    theta = k3_dq_form(cx)
    lhs = pullback(SIGMA_23, theta).coeff_at(p) - theta.coeff_at(p)
    a = coords_of(p, 3)
    big_a = params.quad.a_to_A(a)
    scalar = phi(params.quad.alpha, params.quad.beta, params.sigma2) * psi(big_a)
    rhs = scalar * (params.quad.hessian() @ np.array([0.0, -1.0 / big_a[1], 1.0 / big_a[2]]))
    return float(np.max(np.abs(lhs - rhs)))


# ---------------------------------------------------------------------------
# verification


def third_tensor_from_square(cx: LenardComplex, p) -> np.ndarray:
    """c[j, l, m] = m-th x-chart coefficient of theta_{jl} at p (p in the a-chart)."""
    hinv = cx.quad.hessian_inverse()
    a = coords_of(p, 3)
    c = np.zeros((3, 3, 3))
    for j in range(3):
        for l in range(3):
            c[j, l] = hinv @ cx.square.form(j, l).coeff_at(a)
    return c


def third_tensor_from_chain(cx: LenardComplex, p) -> np.ndarray:
    """c[j, l, m] = dA(K_j K_l K_m X) at p; totally symmetric for a genuine complex."""
    a = coords_of(p, 3)
    mats = [k.mat_at(a) for k in cx.operators]
    big_a = cx.dA.coeff_at(a)
    x = cx.X.comp_at(a)
    c = np.zeros((3, 3, 3))
    for j in range(3):
        for l in range(3):
            for m in range(3):
                c[j, l, m] = big_a @ (mats[j] @ (mats[l] @ (mats[m] @ x)))
    return c


def _symmetry_defect(c: np.ndarray) -> float:
    worst = 0.0
    for axes in ((0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)):
        worst = max(worst, float(np.max(np.abs(c - np.transpose(c, axes)))))
    return worst


def wdvv_residual_of_complex(cx: LenardComplex, p, tol_chain: float = TOL_ANALYTIC,
                             require_symmetric: bool = True) -> float:
    """WDVV commutation residual of the square written in the x-chart.

    The identification x-chart = A-chart is only valid when the vector chain
    condition K_j X = d/dA_j holds, so that is asserted first.  With
    ``require_symmetric`` the total symmetry of the coefficients is asserted
    too; callers that report the symmetry defect separately may disable it.
    """
    a = coords_of(p, 3)
    hinv = cx.quad.hessian_inverse()
    chain_defect = max(
        float(np.max(np.abs(k.mat_at(a) @ cx.X.comp_at(a) - hinv[j])))
        for j, k in enumerate(cx.operators)
    )
    if chain_defect > tol_chain:
        raise ValueError(
            f"vector chain condition fails at {a} (defect {chain_defect:.3e}); "
            "the x-chart is not established, no WDVV residual is defined"
        )
    c = third_tensor_from_square(cx, p)
    if require_symmetric and _symmetry_defect(c) > 1e-6:
        raise ValueError("square coefficients are not totally symmetric at this point")
    return _commutation_residual(c, _guarded_inverse(c[0], "pivot slice c[0]"))


def verify_complex(cx: LenardComplex, points: Sequence, tol_analytic: float = TOL_ANALYTIC,
                   tol_fd: float = TOL_FD, with_fd: bool = False) -> VerificationReport:
    """Check every defining identity of the complex at the given points.

    Residuals are aggregated as maxima over points (order-independent), one
    report condition per identity family.
    """
    pts = [coords_of(p, 3) for p in points]
    if not pts:
        raise ValueError("need at least one point")
    hinv = cx.quad.hessian_inverse()
    forms = cx.square.named_forms()
    chain_fields = [vector_image(k, cx.X) for k in cx.operators]
    theta = k3_dq_form(cx)
    theta_pulled = pullback(SIGMA_23, theta)
    exchanged = [(transform_tensor(sig, cx.operators[j]), cx.operators[l])
                 for sig, j, l in TRANSPOSITIONS]
    table_pairs = []
    for sig, j, l in TRANSPOSITIONS:
        perm = list(range(3))
        perm[j], perm[l] = perm[l], perm[j]
        for p_, q_ in [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)]:
            table_pairs.append((pullback(sig, cx.square.form(p_, q_)),
                                cx.square.form(perm[p_], perm[q_])))

    res = {name: 0.0 for name in (
        "chain_of_forms", "chain_of_vector_fields", "vector_field_commutators",
        "square_closure", "operator_commutators", "third_tensor_symmetry",
        "haantjes_torsion", "symmetry_constraint", "partition_of_identity",
        "k2dR_equals_k3dQ", "operator_exchange", "square_equivariance",
    )}
    if with_fd:
        res["jacobian_fd_agreement"] = 0.0

    eye = np.eye(3)
    for a in pts:
        big_a = cx.dA.coeff_at(a)
        mats = [k.mat_at(a) for k in cx.operators]
        for j in range(3):
            res["chain_of_forms"] = max(res["chain_of_forms"],
                                        float(np.max(np.abs(big_a @ mats[j] - eye[j]))))
            res["chain_of_vector_fields"] = max(res["chain_of_vector_fields"],
                                                float(np.max(np.abs(mats[j] @ a - hinv[j]))))
            res["haantjes_torsion"] = max(res["haantjes_torsion"],
                                          haantjes_residual(cx.operators[j], a))
        for j, l in pairwise_indices(3):
            res["operator_commutators"] = max(
                res["operator_commutators"],
                float(np.max(np.abs(mats[j] @ mats[l] - mats[l] @ mats[j]))))
            res["vector_field_commutators"] = max(
                res["vector_field_commutators"],
                lie_bracket_residual(chain_fields[j], chain_fields[l], a))
        for f in forms.values():
            res["square_closure"] = max(res["square_closure"], closure_residual(f, a))
        res["third_tensor_symmetry"] = max(res["third_tensor_symmetry"],
                                           _symmetry_defect(third_tensor_from_chain(cx, a)))
        res["symmetry_constraint"] = max(
            res["symmetry_constraint"],
            float(np.max(np.abs(theta_pulled.coeff_at(a) - theta.coeff_at(a)))))
        res["partition_of_identity"] = max(
            res["partition_of_identity"],
            float(np.max(np.abs(sum(big_a[i] * mats[i] for i in range(3)) - eye))))
        res["k2dR_equals_k3dQ"] = max(
            res["k2dR_equals_k3dQ"],
            float(np.max(np.abs(cx.square.dR.coeff_at(a) @ mats[1]
                                - cx.square.dQ.coeff_at(a) @ mats[2]))))
        for moved, target in exchanged:
            res["operator_exchange"] = max(
                res["operator_exchange"],
                float(np.max(np.abs(moved.mat_at(a) - target.mat_at(a)))))
        for fa, fb in table_pairs:
            res["square_equivariance"] = max(
                res["square_equivariance"],
                float(np.max(np.abs(fa.coeff_at(a) - fb.coeff_at(a)))))
        if with_fd:
            worst = max(fd_check_one_form(f, a) for f in forms.values())
            worst = max(worst, max(fd_check_tensor(k, a) for k in cx.operators))
            worst = max(worst, fd_check_vector_field(cx.X, a))
            res["jacobian_fd_agreement"] = max(res["jacobian_fd_agreement"], worst)

    report = VerificationReport()
    n = len(pts)
    for name, value in res.items():
        tol = tol_fd if name == "jacobian_fd_agreement" else tol_analytic
        report.add(name, n, value, tol)
    return report


# ---------------------------------------------------------------------------
# matrix potential reconstruction


def square_form_in_x(square: EquivariantSquare, j: int, l: int) -> OneFormField:
    """theta_{jl} rewritten on the x-chart (x = A-coordinates)."""
    if square.quad is None:
        raise ValueError("square carries no quadratic invariant; cannot change chart")
    hinv = square.quad.hessian_inverse()
    form = square.form(j, l)

    def coeff(x: np.ndarray) -> np.ndarray:
        return hinv @ np.asarray(form.coeff(hinv @ x), dtype=float)

    def jac(x: np.ndarray) -> np.ndarray:
        return hinv @ np.asarray(form.jac(hinv @ x), dtype=float) @ hinv

    preds = tuple((lambda x, p=p: p(hinv @ x)) for p in form.predicates)
    return OneFormField(X_CHART, coeff, jac, preds)


def reconstruct_potential_entry(square: EquivariantSquare, j: int, l: int,
                                x_from, x_to, tol: float = 1e-10) -> float:
    """A_{jl}(x_to) - A_{jl}(x_from) by line integration of theta_{jl} in x.

    The straight segment must stay clear of every singular locus; a sign
    change of any regularity predicate along the path raises.
    """
    return integrate_one_form(square_form_in_x(square, j, l), x_from, x_to, tol=tol)


# ---------------------------------------------------------------------------
# the (2, 1) reference family


def example3_params() -> FamilyParams:
    """The alpha=2, beta=1 family at the first root, sigma2 = -1/8
    (hence sigma1 = 0, sigma0 = 1/4)."""
    return FamilyParams.solve(2.0, 1.0, -0.125)


def example3_fixture() -> tuple[FamilyParams, Prepotential]:
    """Parameters plus the closed-form reference potential of that family,

        F = (1/16) [ sum_{i<j} (x_i-x_j)^2 log(x_i-x_j)^2 + sum_i x_i^2 log x_i^2 ],

    whose second-derivative differentials reproduce the square forms.
    """
    reference = veselov_prepotential(VeselovPotential(3, 1.0), scale=1.0 / 16.0)
    return example3_params(), reference


def example3_display_forms() -> dict:
    """Closed-form a-chart coefficient displays of the (2,1) family square.

    These are the hand-simplified rational expressions for the seven forms.
    The first dP numerator must contain -2*a1*a3 (its -2*a2*a3 variant is not
    a closed form); dS and dV follow from dP by the coordinate exchanges.
    """
    def dA(a):
        a1, a2, a3 = a
        return np.array([2 * a1 + a2 + a3, a1 + 2 * a2 + a3, a1 + a2 + 2 * a3])

    def dQ(a):
        a1, a2, a3 = a
        return np.array([-0.25 / (a1 - a2), 0.25 / (a1 - a2), 0.0])

    def dR(a):
        a1, a2, a3 = a
        return np.array([-0.25 / (a1 - a3), 0.0, 0.25 / (a1 - a3)])

    def dT(a):
        a1, a2, a3 = a
        return np.array([0.0, -0.25 / (a2 - a3), 0.25 / (a2 - a3)])

    def dP(a):
        a1, a2, a3 = a
        x1 = 2 * a1 + a2 + a3
        return np.array([
            (6 * a1**2 - 2 * a1 * a2 - 2 * a1 * a3 - a2**2 - a3**2)
            / (4 * x1 * (a1 - a2) * (a1 - a3)),
            -(2 * a2 + a1 + a3) / (4 * x1 * (a1 - a2)),
            -(2 * a3 + a1 + a2) / (4 * x1 * (a1 - a3)),
        ])

    def dS(a):
        a1, a2, a3 = a
        x2 = 2 * a2 + a1 + a3
        return np.array([
            -(2 * a1 + a2 + a3) / (4 * x2 * (a2 - a1)),
            (6 * a2**2 - 2 * a2 * a3 - 2 * a2 * a1 - a3**2 - a1**2)
            / (4 * x2 * (a2 - a1) * (a2 - a3)),
            -(2 * a3 + a2 + a1) / (4 * x2 * (a2 - a3)),
        ])

    def dV(a):
        a1, a2, a3 = a
        x3 = 2 * a3 + a1 + a2
        return np.array([
            -(2 * a1 + a2 + a3) / (4 * x3 * (a3 - a1)),
            -(2 * a2 + a1 + a3) / (4 * x3 * (a3 - a2)),
            (6 * a3**2 - 2 * a3 * a1 - 2 * a3 * a2 - a1**2 - a2**2)
            / (4 * x3 * (a3 - a1) * (a3 - a2)),
        ])

    return {"dA": dA, "dQ": dQ, "dR": dR, "dT": dT, "dP": dP, "dS": dS, "dV": dV}


#: Constant a-chart components of the iterated fields K_j X for the (2,1)
#: family: the rows of the inverse Hessian of A.
EXAMPLE3_CHAIN_FIELDS = np.array([
    [0.75, -0.25, -0.25],
    [-0.25, 0.75, -0.25],
    [-0.25, -0.25, 0.75],
])
