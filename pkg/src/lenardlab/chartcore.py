"""Charts, points, differentiable fields and the generic residual computations.

Everything lives on a fixed coordinate chart of R^n.  Fields are pairs of
callables (components and their analytic first derivatives); all residuals
below are computed from the analytic derivatives, with central finite
differences available only as an independent cross-check.

Conventions, fixed once for the whole package:

* A (1,1)-tensor field K is stored as a single matrix-valued map M(u).
  Row i of M is the covector image of the i-th coordinate differential,
      (K du_i)_m = M[i, m],
  the action on vectors is (K X)^i = sum_m M[i, m] X^m, and the two actions
  are adjoint:  theta(K X) = (K theta)(X).
* One-form Jacobians are jac[i, j] = d c_i / d u_j; vector-field Jacobians
  are jac[i, j] = d X^i / d u_j; tensor Jacobians are jac[i, j, d] =
  d M[i, j] / d u_d.
* Nijenhuis torsion: N_K(X, Y) = K^2 [X, Y] + [KX, KY] - K[KX, Y] - K[X, KY].
* Wedge of one-forms on basis pairs: (a ^ b)[i, j] = a_i b_j - a_j b_i.

With these conventions the contraction df(N_K) for the quadratic
hydrodynamic operator of :mod:`lenardlab.gelfand_dikii` reproduces
dw_2 ^ df with factor exactly +1; see NIJENHUIS_WEDGE_CALIBRATION.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

# Points are accepted only if every attached regularity predicate is bounded
# away from zero by this margin.
REGULARITY_MARGIN = 1e-3

# Central-difference step is FD_STEP * max(1, |u_i|) per coordinate.
FD_STEP = 1e-5

# Constant relating df(Torsion(K)) to the wedge-product normal form above.
# Fixed by checking the quadratic hydrodynamic operator; do not change one
# without the other.
NIJENHUIS_WEDGE_CALIBRATION = 1.0

Predicate = Callable[[np.ndarray], float]


class SingularPointError(ValueError):
    """A point violates a regularity predicate of the field it is fed to."""


class SingularSegmentError(SingularPointError):
    """A straight integration segment crosses (or grazes) a singular locus."""


class ChartMismatchError(ValueError):
    """Operands live on charts of different dimension."""


@dataclass(frozen=True)
class Chart:
    """A named coordinate chart of R^dim."""

    name: str
    dim: int

    def __post_init__(self) -> None:
        if self.dim < 2:
            raise ValueError(f"chart dimension must be >= 2, got {self.dim}")


@dataclass(frozen=True, eq=False)
class RegularPoint:
    """Coordinates certified against the predicates they were checked with."""

    chart: Chart
    coords: np.ndarray

    def __post_init__(self) -> None:
        c = np.array(self.coords, dtype=float).reshape(-1)
        if c.shape != (self.chart.dim,):
            raise ChartMismatchError(
                f"point of length {c.size} on chart {self.chart.name!r} (dim {self.chart.dim})"
            )
        c.flags.writeable = False
        object.__setattr__(self, "coords", c)


def coords_of(p, dim: int | None = None) -> np.ndarray:
    """Accept a RegularPoint or a bare coordinate array."""
    u = p.coords if isinstance(p, RegularPoint) else np.asarray(p, dtype=float)
    if dim is not None and u.shape != (dim,):
        raise ChartMismatchError(f"expected a point of length {dim}, got shape {u.shape}")
    return u


def check_regular(predicates: Sequence[Predicate], u: np.ndarray,
                  margin: float = REGULARITY_MARGIN) -> None:
    for k, pred in enumerate(predicates):
        if abs(pred(u)) < margin:
            raise SingularPointError(
                f"regularity predicate #{k} is {pred(u):.3e} at {u} (margin {margin:g})"
            )


def certify(chart: Chart, coords, predicates: Sequence[Predicate] = ()) -> RegularPoint:
    """Build a RegularPoint, rejecting coordinates inside the singular margin."""
    u = np.asarray(coords, dtype=float)
    check_regular(predicates, u)
    return RegularPoint(chart, u)


# ---------------------------------------------------------------------------
# fields


@dataclass(frozen=True, eq=False)
class ScalarField:
    """Scalar function with analytic gradient."""

    chart: Chart
    value: Callable[[np.ndarray], float]
    grad: Callable[[np.ndarray], np.ndarray]
    predicates: tuple[Predicate, ...] = ()

    def value_at(self, p) -> float:
        u = coords_of(p, self.chart.dim)
        check_regular(self.predicates, u)
        return float(self.value(u))

    def grad_at(self, p) -> np.ndarray:
        u = coords_of(p, self.chart.dim)
        check_regular(self.predicates, u)
        return np.asarray(self.grad(u), dtype=float)


@dataclass(frozen=True, eq=False)
class OneFormField:
    """One-form sum_i c_i(u) du_i with analytic coefficient Jacobian."""

    chart: Chart
    coeff: Callable[[np.ndarray], np.ndarray]
    jac: Callable[[np.ndarray], np.ndarray]
    predicates: tuple[Predicate, ...] = ()

    def coeff_at(self, p) -> np.ndarray:
        u = coords_of(p, self.chart.dim)
        check_regular(self.predicates, u)
        return np.asarray(self.coeff(u), dtype=float)

    def jac_at(self, p) -> np.ndarray:
        u = coords_of(p, self.chart.dim)
        check_regular(self.predicates, u)
        return np.asarray(self.jac(u), dtype=float)

    def pair_with(self, x_comp: np.ndarray, p) -> float:
        return float(self.coeff_at(p) @ np.asarray(x_comp, dtype=float))


@dataclass(frozen=True, eq=False)
class VectorFieldSpec:
    """Vector field with analytic component Jacobian."""

    chart: Chart
    comp: Callable[[np.ndarray], np.ndarray]
    jac: Callable[[np.ndarray], np.ndarray]
    predicates: tuple[Predicate, ...] = ()

    def comp_at(self, p) -> np.ndarray:
        u = coords_of(p, self.chart.dim)
        check_regular(self.predicates, u)
        return np.asarray(self.comp(u), dtype=float)

    def jac_at(self, p) -> np.ndarray:
        u = coords_of(p, self.chart.dim)
        check_regular(self.predicates, u)
        return np.asarray(self.jac(u), dtype=float)


@dataclass(frozen=True, eq=False)
class TensorField11:
    """(1,1)-tensor field; see the module docstring for the row convention."""

    chart: Chart
    mat: Callable[[np.ndarray], np.ndarray]
    jac: Callable[[np.ndarray], np.ndarray]
    predicates: tuple[Predicate, ...] = ()

    def mat_at(self, p) -> np.ndarray:
        u = coords_of(p, self.chart.dim)
        check_regular(self.predicates, u)
        return np.asarray(self.mat(u), dtype=float)

    def jac_at(self, p) -> np.ndarray:
        u = coords_of(p, self.chart.dim)
        check_regular(self.predicates, u)
        return np.asarray(self.jac(u), dtype=float)

    def apply_vector(self, x_comp: np.ndarray, p) -> np.ndarray:
        return self.mat_at(p) @ np.asarray(x_comp, dtype=float)

    def apply_covector(self, theta: np.ndarray, p) -> np.ndarray:
        return np.asarray(theta, dtype=float) @ self.mat_at(p)


# constructors ---------------------------------------------------------------


def constant_form(chart: Chart, coeffs) -> OneFormField:
    c = np.array(coeffs, dtype=float)
    zero = np.zeros((chart.dim, chart.dim))
    return OneFormField(chart, lambda u: c, lambda u: zero)


def coordinate_form(chart: Chart, i: int) -> OneFormField:
    """The coordinate differential du_i (0-based index)."""
    e = np.zeros(chart.dim)
    e[i] = 1.0
    return constant_form(chart, e)


def constant_vector_field(chart: Chart, comps) -> VectorFieldSpec:
    c = np.array(comps, dtype=float)
    zero = np.zeros((chart.dim, chart.dim))
    return VectorFieldSpec(chart, lambda u: c, lambda u: zero)


def coordinate_vector_field(chart: Chart, i: int) -> VectorFieldSpec:
    e = np.zeros(chart.dim)
    e[i] = 1.0
    return constant_vector_field(chart, e)


def constant_tensor(chart: Chart, mat) -> TensorField11:
    m = np.array(mat, dtype=float)
    zero = np.zeros((chart.dim,) * 3)
    return TensorField11(chart, lambda u: m, lambda u: zero)


def identity_tensor(chart: Chart) -> TensorField11:
    return constant_tensor(chart, np.eye(chart.dim))


def _same_chart(*fields) -> Chart:
    charts = {f.chart.dim for f in fields}
    if len(charts) != 1:
        raise ChartMismatchError(f"operands on charts of dimensions {sorted(charts)}")
    return fields[0].chart


# ---------------------------------------------------------------------------
# permutations


@dataclass(frozen=True)
class Permutation:
    """Coordinate permutation of a chart, acting as sigma(u)_i = u[mapping[i]]."""

    mapping: tuple[int, ...]

    def __post_init__(self) -> None:
        if sorted(self.mapping) != list(range(len(self.mapping))):
            raise ValueError(f"{self.mapping} is not a bijection of 0..{len(self.mapping) - 1}")

    @classmethod
    def identity(cls, dim: int) -> "Permutation":
        return cls(tuple(range(dim)))

    @classmethod
    def transposition(cls, dim: int, i: int, j: int) -> "Permutation":
        m = list(range(dim))
        m[i], m[j] = m[j], m[i]
        return cls(tuple(m))

    @property
    def dim(self) -> int:
        return len(self.mapping)

    def __call__(self, u) -> np.ndarray:
        return np.asarray(u, dtype=float)[list(self.mapping)]

    def inverse(self) -> "Permutation":
        return Permutation(tuple(int(k) for k in np.argsort(self.mapping)))

    def after(self, other: "Permutation") -> "Permutation":
        """Composite map self o other (apply ``other`` first)."""
        if self.dim != other.dim:
            raise ChartMismatchError("permutations of different dimension")
        return Permutation(tuple(other.mapping[self.mapping[i]] for i in range(self.dim)))

    def is_involution(self) -> bool:
        return self.after(self).mapping == tuple(range(self.dim))


def pullback(sigma: Permutation, omega: OneFormField) -> OneFormField:
    """Pull a one-form back along the coordinate permutation sigma.

    Coefficients transform as c'_m(u) = c_{sigma^{-1}(m)}(sigma(u)), which for
    transpositions is the familiar swap of both labels and arguments.
    """
    if sigma.dim != omega.chart.dim:
        raise ChartMismatchError(
            f"permutation of dim {sigma.dim} on chart of dim {omega.chart.dim}"
        )
    inv = np.argsort(sigma.mapping)

    def coeff(u: np.ndarray) -> np.ndarray:
        return np.asarray(omega.coeff(sigma(u)), dtype=float)[inv]

    def jac(u: np.ndarray) -> np.ndarray:
        return np.asarray(omega.jac(sigma(u)), dtype=float)[np.ix_(inv, inv)]

    preds = tuple((lambda uu, p=p: p(sigma(uu))) for p in omega.predicates)
    return OneFormField(omega.chart, coeff, jac, preds)


def pushforward(sigma: Permutation, x: VectorFieldSpec) -> VectorFieldSpec:
    """Push a vector field forward: (sigma_* X)^i(u) = X^{sigma(i)}(sigma^{-1}(u))."""
    if sigma.dim != x.chart.dim:
        raise ChartMismatchError(
            f"permutation of dim {sigma.dim} on chart of dim {x.chart.dim}"
        )
    inv = sigma.inverse()
    idx = list(sigma.mapping)

    def comp(u: np.ndarray) -> np.ndarray:
        return np.asarray(x.comp(inv(u)), dtype=float)[idx]

    def jac(u: np.ndarray) -> np.ndarray:
        return np.asarray(x.jac(inv(u)), dtype=float)[np.ix_(idx, idx)]

    preds = tuple((lambda uu, p=p: p(inv(uu))) for p in x.predicates)
    return VectorFieldSpec(x.chart, comp, jac, preds)


def transform_tensor(sigma: Permutation, k: TensorField11) -> TensorField11:
    """Transform a (1,1)-tensor by the usual rule, (sigma K)(u) = K(sigma^{-1}u) conjugated."""
    if sigma.dim != k.chart.dim:
        raise ChartMismatchError(
            f"permutation of dim {sigma.dim} on chart of dim {k.chart.dim}"
        )
    inv = sigma.inverse()
    idx = list(sigma.mapping)

    def mat(u: np.ndarray) -> np.ndarray:
        return np.asarray(k.mat(inv(u)), dtype=float)[np.ix_(idx, idx)]

    def jac(u: np.ndarray) -> np.ndarray:
        return np.asarray(k.jac(inv(u)), dtype=float)[np.ix_(idx, idx, idx)]

    preds = tuple((lambda uu, p=p: p(inv(uu))) for p in k.predicates)
    return TensorField11(k.chart, mat, jac, preds)


# ---------------------------------------------------------------------------
# residuals


def closure_residual(omega: OneFormField, p) -> float:
    """Max antisymmetric part of the coefficient Jacobian; zero iff d(omega) = 0 at p."""
    j = omega.jac_at(p)
    return float(np.max(np.abs(j - j.T)))


def commutator_residual(k: TensorField11, l: TensorField11, p) -> float:
    _same_chart(k, l)
    a, b = k.mat_at(p), l.mat_at(p)
    return float(np.max(np.abs(a @ b - b @ a)))


def lie_bracket(x: VectorFieldSpec, y: VectorFieldSpec, p) -> np.ndarray:
    """[X, Y] = (DY) X - (DX) Y from the analytic Jacobians."""
    _same_chart(x, y)
    return y.jac_at(p) @ x.comp_at(p) - x.jac_at(p) @ y.comp_at(p)


def lie_bracket_residual(x: VectorFieldSpec, y: VectorFieldSpec, p) -> float:
    return float(np.max(np.abs(lie_bracket(x, y, p))))


def covector_image(k: TensorField11, omega: OneFormField) -> OneFormField:
    """The one-form K(omega), with analytic Jacobian by the product rule."""
    chart = _same_chart(k, omega)

    def coeff(u: np.ndarray) -> np.ndarray:
        return np.asarray(omega.coeff(u), dtype=float) @ np.asarray(k.mat(u), dtype=float)

    def jac(u: np.ndarray) -> np.ndarray:
        th = np.asarray(omega.coeff(u), dtype=float)
        jth = np.asarray(omega.jac(u), dtype=float)
        m = np.asarray(k.mat(u), dtype=float)
        jm = np.asarray(k.jac(u), dtype=float)
        return np.einsum("id,im->md", jth, m) + np.einsum("i,imd->md", th, jm)

    return OneFormField(chart, coeff, jac, k.predicates + omega.predicates)


def vector_image(k: TensorField11, x: VectorFieldSpec) -> VectorFieldSpec:
    """The vector field K(X), with analytic Jacobian."""
    chart = _same_chart(k, x)

    def comp(u: np.ndarray) -> np.ndarray:
        return np.asarray(k.mat(u), dtype=float) @ np.asarray(x.comp(u), dtype=float)

    def jac(u: np.ndarray) -> np.ndarray:
        m = np.asarray(k.mat(u), dtype=float)
        jm = np.asarray(k.jac(u), dtype=float)
        xc = np.asarray(x.comp(u), dtype=float)
        jx = np.asarray(x.jac(u), dtype=float)
        return np.einsum("ibd,b->id", jm, xc) + m @ jx

    return VectorFieldSpec(chart, comp, jac, k.predicates + x.predicates)


def tensor_compose(k: TensorField11, l: TensorField11) -> TensorField11:
    """K o L (apply L first): matrices multiply as M_K M_L in both actions."""
    chart = _same_chart(k, l)

    def mat(u: np.ndarray) -> np.ndarray:
        return np.asarray(k.mat(u), dtype=float) @ np.asarray(l.mat(u), dtype=float)

    def jac(u: np.ndarray) -> np.ndarray:
        mk, ml = np.asarray(k.mat(u), dtype=float), np.asarray(l.mat(u), dtype=float)
        jk, jl = np.asarray(k.jac(u), dtype=float), np.asarray(l.jac(u), dtype=float)
        return np.einsum("ibd,bj->ijd", jk, ml) + np.einsum("ib,bjd->ijd", mk, jl)

    return TensorField11(chart, mat, jac, k.predicates + l.predicates)


def tensor_add_scalar_identity(k: TensorField11, f: ScalarField) -> TensorField11:
    """K + f * Id."""
    chart = _same_chart(k, f)
    eye = np.eye(chart.dim)

    def mat(u: np.ndarray) -> np.ndarray:
        return np.asarray(k.mat(u), dtype=float) + float(f.value(u)) * eye

    def jac(u: np.ndarray) -> np.ndarray:
        g = np.asarray(f.grad(u), dtype=float)
        return np.asarray(k.jac(u), dtype=float) + np.einsum("ij,d->ijd", eye, g)

    return TensorField11(chart, mat, jac, k.predicates + f.predicates)


# torsion --------------------------------------------------------------------


def nijenhuis_tensor(k: TensorField11, p) -> np.ndarray:
    """Components N[a, i, j] of the Nijenhuis torsion on coordinate basis pairs."""
    m = k.mat_at(p)
    j = k.jac_at(p)
    t1 = np.einsum("bi,ajb->aij", m, j)
    t2 = np.einsum("bj,aib->aij", m, j)
    t3 = np.einsum("ab,bji->aij", m, j)
    t4 = np.einsum("ab,bij->aij", m, j)
    return t1 - t2 - t3 + t4


def nijenhuis_contracted(k: TensorField11, f: ScalarField, p) -> np.ndarray:
    """The antisymmetric matrix df(N_K(., .)) on coordinate basis pairs."""
    _same_chart(k, f)
    n = nijenhuis_tensor(k, p)
    return np.einsum("a,aij->ij", f.grad_at(p), n)


def haantjes_tensor(k: TensorField11, p) -> np.ndarray:
    """H_K(X,Y) = K^2 N(X,Y) + N(KX,KY) - K(N(KX,Y) + N(X,KY)) on basis pairs."""
    m = k.mat_at(p)
    n = nijenhuis_tensor(k, p)
    m2 = m @ m
    return (
        np.einsum("ab,bij->aij", m2, n)
        + np.einsum("abc,bi,cj->aij", n, m, m)
        - np.einsum("ab,bcj,ci->aij", m, n, m)
        - np.einsum("ab,bic,cj->aij", m, n, m)
    )


def haantjes_residual(k: TensorField11, p) -> float:
    return float(np.max(np.abs(haantjes_tensor(k, p))))


def wedge_matrix(a, b) -> np.ndarray:
    """(a ^ b) on coordinate basis pairs."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return np.outer(a, b) - np.outer(b, a)


# ---------------------------------------------------------------------------
# finite differences (cross-check only, never the primary derivative)


def _fd_steps(u: np.ndarray) -> np.ndarray:
    return FD_STEP * np.maximum(1.0, np.abs(u))


def fd_jacobian(fun: Callable[[np.ndarray], np.ndarray], u) -> np.ndarray:
    """Central-difference Jacobian of a (possibly tensor-valued) map; the
    differentiation index is appended as the last axis.

    Uses the five-point (fourth-order) central stencil: with the h above, a
    two-point stencil cannot certify 1e-6 agreement for the logarithmic
    coefficients near the 0.05 sampling gap, while this one stays below
    1e-10 there.
    """
    u = np.asarray(u, dtype=float)
    h = _fd_steps(u)

    def at(d: int, k: int) -> np.ndarray:
        v = u.copy()
        v[d] += k * h[d]
        return np.asarray(fun(v), dtype=float)

    cols = []
    for d in range(u.size):
        cols.append((at(d, -2) - 8.0 * at(d, -1) + 8.0 * at(d, 1) - at(d, 2)) / (12.0 * h[d]))
    return np.stack(cols, axis=-1)


def fd_gradient(fun: Callable[[np.ndarray], float], u) -> np.ndarray:
    return fd_jacobian(lambda v: np.array(float(fun(v))), u).reshape(-1)


# Second differences sit on a roundoff floor of eps|f|/h^2, so they use a
# larger step than the first-derivative checks.
FD_STEP_SECOND = 3e-4

_STENCIL4 = {-2: 1.0 / 12.0, -1: -8.0 / 12.0, 1: 8.0 / 12.0, 2: -1.0 / 12.0}


def fd_hessian(fun: Callable[[np.ndarray], float], u) -> np.ndarray:
    """Fourth-order central second differences of a scalar map."""
    u = np.asarray(u, dtype=float)
    h = FD_STEP_SECOND * np.maximum(1.0, np.abs(u))
    n = u.size

    def at(shift: dict[int, int]) -> float:
        v = u.copy()
        for d, k in shift.items():
            v[d] += k * h[d]
        return float(fun(v))

    out = np.empty((n, n))
    f0 = at({})
    for i in range(n):
        out[i, i] = (-at({i: -2}) + 16 * at({i: -1}) - 30 * f0
                     + 16 * at({i: 1}) - at({i: 2})) / (12 * h[i] * h[i])
        for j in range(i + 1, n):
            acc = 0.0
            for ki, ci in _STENCIL4.items():
                for kj, cj in _STENCIL4.items():
                    acc += ci * cj * at({i: ki, j: kj})
            out[i, j] = out[j, i] = acc / (h[i] * h[j])
    return out


def fd_check_one_form(omega: OneFormField, p) -> float:
    u = coords_of(p, omega.chart.dim)
    check_regular(omega.predicates, u)
    return float(np.max(np.abs(fd_jacobian(omega.coeff, u) - omega.jac(u))))


def fd_check_vector_field(x: VectorFieldSpec, p) -> float:
    u = coords_of(p, x.chart.dim)
    check_regular(x.predicates, u)
    return float(np.max(np.abs(fd_jacobian(x.comp, u) - x.jac(u))))


def fd_check_tensor(k: TensorField11, p) -> float:
    u = coords_of(p, k.chart.dim)
    check_regular(k.predicates, u)
    return float(np.max(np.abs(fd_jacobian(k.mat, u) - k.jac(u))))


def fd_check_scalar(f: ScalarField, p) -> float:
    u = coords_of(p, f.chart.dim)
    check_regular(f.predicates, u)
    return float(np.max(np.abs(fd_gradient(f.value, u) - np.asarray(f.grad(u), dtype=float))))


# ---------------------------------------------------------------------------
# line integrals


def assert_segment_regular(predicates: Sequence[Predicate], u0, u1,
                           samples: int = 65, margin: float = REGULARITY_MARGIN) -> None:
    """Reject straight segments on which any predicate changes sign or enters
    the singular margin (sampled test; the predicates in use are monotone
    along straight lines, so endpoint agreement is already decisive)."""
    u0 = np.asarray(u0, dtype=float)
    u1 = np.asarray(u1, dtype=float)
    for k, pred in enumerate(predicates):
        vals = np.array([pred(u0 + t * (u1 - u0)) for t in np.linspace(0.0, 1.0, samples)])
        if np.min(np.abs(vals)) < margin or np.min(vals) * np.max(vals) < 0:
            raise SingularSegmentError(
                f"segment {u0} -> {u1} crosses the zero set of predicate #{k}"
            )


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(12)


def _gl_panel(f: Callable[[float], float], a: float, b: float) -> float:
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    return half * float(sum(w * f(mid + half * t) for t, w in zip(_GL_NODES, _GL_WEIGHTS)))


def integrate_one_form(omega: OneFormField, u_from, u_to,
                       tol: float = 1e-10, max_depth: int = 24) -> float:
    """Line integral of omega along the straight segment, adaptive Gauss-Legendre.

    Panels are bisected until the two-half refinement agrees with the single
    panel estimate to ``tol`` (scaled by panel count).
    """
    u0 = np.asarray(u_from, dtype=float)
    u1 = np.asarray(u_to, dtype=float)
    if u0.shape != (omega.chart.dim,) or u1.shape != (omega.chart.dim,):
        raise ChartMismatchError("segment endpoints do not match the chart dimension")
    assert_segment_regular(omega.predicates, u0, u1)
    direction = u1 - u0

    def f(t: float) -> float:
        return float(np.asarray(omega.coeff(u0 + t * direction), dtype=float) @ direction)

    def adapt(a: float, b: float, whole: float, depth: int) -> float:
        mid = 0.5 * (a + b)
        left = _gl_panel(f, a, mid)
        right = _gl_panel(f, mid, b)
        if depth >= max_depth or abs(left + right - whole) <= tol:
            return left + right
        return adapt(a, mid, left, depth + 1) + adapt(mid, b, right, depth + 1)

    return adapt(0.0, 1.0, _gl_panel(f, 0.0, 1.0), 0)


def pairwise_indices(dim: int):
    return itertools.combinations(range(dim), 2)
