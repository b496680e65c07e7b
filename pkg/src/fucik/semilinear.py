"""Saddle-point solves of the forced semilinear problem.

A bounded continuous nonlinearity f and an L2 forcing h perturb the
asymmetric quadratic functional J into

    E(u) = J(u) - integral of (F(u) + h u),    F(t) = antiderivative of f,

whose critical points are discrete weak solutions of the equation
A u = alpha u+ - beta u- + f(u) + h.  Because f is bounded, E inherits J's
saddle geometry: anticoercive on the low subspace, bounded below on the
manifold of partial maximizers when (alpha, beta) lies strictly below the
spectral curve.  The solver exploits exactly that structure: phase one
minimizes the reduced functional v -> max over the low subspace of E(u + v)
by preconditioned descent, phase two polishes with a full-space Newton
iteration on the gradient.

On the curve itself solvability needs an admissibility condition on the
asymptotic behavior of f and h (the generalized Landesman-Lazer check,
operationalized as a ray-limit sign condition over the computed set of
spectrum eigenfunctions).  When the condition fails, minimizing sequences
escape along an eigenfunction ray; the solver detects the escape (norm
growth with a Cauchy-stable direction) and reports the ray instead of a
solution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import (
    BracketExhausted,
    ConfigError,
    MaxIterations,
    MissingLimits,
    RegimeViolation,
)
from .operator import ConditionCheck, EigenBasis, Field, to_field
from .spectrum import (
    FucikParams,
    _gradient_arrays,
    _maximize_t,
    beta_of_alpha,
    fucik_energy,
    maximize_low,
    minimize_on_sphere,
)

NONRESONANCE = "nonresonance"
RESONANCE = "resonance"
OUT_OF_SCOPE = "out-of-scope"

CONVERGED = "converged"
MAX_ITERATIONS = "max-iterations"
DIVERGING_RAY = "diverging-ray"

# divergence heuristics, fixed and recorded in SaddleResult.diagnostics
RAY_GROWTH_FACTOR = 10.0
RAY_CAUCHY_TOL = 1e-4
RAY_CAUCHY_WINDOW = 10

_F_PANEL_TOL = 1e-12


def _adaptive_simpson(func, a, b, tol=_F_PANEL_TOL):
    """Adaptive Simpson quadrature of a scalar function on [a, b]."""
    if a == b:
        return 0.0
    fa, fb = func(a), func(b)
    m = 0.5 * (a + b)
    fm = func(m)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    return _simpson_refine(func, a, b, fa, fm, fb, whole, tol, 48)


def _simpson_refine(func, a, b, fa, fm, fb, whole, tol, depth):
    m = 0.5 * (a + b)
    lm, rm = 0.5 * (a + m), 0.5 * (m + b)
    flm, frm = func(lm), func(rm)
    left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
    right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
    err = left + right - whole
    if depth <= 0 or abs(err) <= 15.0 * tol:
        return left + right + err / 15.0
    half = 0.5 * tol
    return _simpson_refine(func, a, m, fa, flm, fm, left, half, depth - 1) + _simpson_refine(
        func, m, b, fm, frm, fb, right, half, depth - 1
    )


@dataclass(frozen=True, eq=False)
class Nonlinearity:
    """Bounded continuous nonlinearity with certified growth data.

    bound is the certified sup of |f|; limit_left / limit_right are the
    asymptotic values of f at -inf / +inf (None when undeclared, in which
    case the admissibility check is unavailable).  antiderivative, when
    given, must be the exact primitive with F(0) = 0; otherwise F is
    computed by adaptive Simpson from 0 over a fixed dyadic segment grid
    with cached segment integrals, so values are independent of evaluation
    order.
    """

    name: str
    func: object
    bound: float
    limit_left: float | None = None
    limit_right: float | None = None
    antiderivative: object | None = None
    deriv: object | None = None
    _fcache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.bound < 0.0:
            raise ConfigError("bound must be a nonnegative sup of |f|")

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls) -> "Nonlinearity":
        return cls(
            name="zero",
            func=lambda t: np.zeros_like(np.asarray(t, dtype=float)),
            bound=0.0,
            limit_left=0.0,
            limit_right=0.0,
            antiderivative=lambda t: np.zeros_like(np.asarray(t, dtype=float)),
            deriv=lambda t: np.zeros_like(np.asarray(t, dtype=float)),
        )

    @classmethod
    def tanh(cls) -> "Nonlinearity":
        def F(t):
            t = np.asarray(t, dtype=float)
            # log cosh t, overflow-safe
            return np.abs(t) + np.log1p(np.exp(-2.0 * np.abs(t))) - math.log(2.0)

        return cls(
            name="tanh",
            func=np.tanh,
            bound=1.0,
            limit_left=-1.0,
            limit_right=1.0,
            antiderivative=F,
            deriv=lambda t: 1.0 / np.cosh(np.asarray(t, dtype=float)) ** 2,
        )

    @classmethod
    def atan_scaled(cls) -> "Nonlinearity":
        c = 2.0 / math.pi

        def F(t):
            t = np.asarray(t, dtype=float)
            return -c * (t * np.arctan(t) - 0.5 * np.log1p(t**2))

        return cls(
            name="atan_scaled",
            func=lambda t: -c * np.arctan(np.asarray(t, dtype=float)),
            bound=1.0,
            limit_left=1.0,
            limit_right=-1.0,
            antiderivative=F,
            deriv=lambda t: -c / (1.0 + np.asarray(t, dtype=float) ** 2),
        )

    @classmethod
    def bounded_poly_clip(cls) -> "Nonlinearity":
        def F(t):
            t = np.asarray(t, dtype=float)
            return np.where(np.abs(t) <= 1.0, 0.5 * t**2, np.abs(t) - 0.5)

        return cls(
            name="bounded_poly_clip",
            func=lambda t: np.clip(np.asarray(t, dtype=float), -1.0, 1.0),
            bound=1.0,
            limit_left=-1.0,
            limit_right=1.0,
            antiderivative=F,
            deriv=lambda t: (np.abs(np.asarray(t, dtype=float)) < 1.0).astype(float),
        )

    @classmethod
    def from_table(cls, points, values, limits=None, bound=None) -> "Nonlinearity":
        pts = np.asarray(points, dtype=float)
        vals = np.asarray(values, dtype=float)
        if pts.ndim != 1 or pts.shape != vals.shape or pts.size < 2:
            raise ConfigError("table needs matching 1-D points/values with >= 2 entries")
        if np.any(np.diff(pts) <= 0.0):
            raise ConfigError("table points must be strictly increasing")
        if limits is None:
            limits = (float(vals[0]), float(vals[-1]))
        # constant extrapolation beyond the table makes the declared limits
        # exact and the sup over the whole line equal to the tabulated sup
        if abs(limits[0] - vals[0]) > 1e-12 or abs(limits[1] - vals[-1]) > 1e-12:
            raise ConfigError("declared limits must match the table edge values")
        if bound is None:
            bound = float(np.max(np.abs(vals)))
        return cls(
            name="table",
            func=lambda t: np.interp(np.asarray(t, dtype=float), pts, vals),
            bound=float(bound),
            limit_left=limits[0],
            limit_right=limits[1],
        )

    # -- evaluation ---------------------------------------------------------

    def evaluate(self, t):
        return np.asarray(self.func(np.asarray(t, dtype=float)), dtype=float)

    def derivative(self, t):
        """f' analytically when declared, else by central differences."""
        t = np.asarray(t, dtype=float)
        if self.deriv is not None:
            return np.asarray(self.deriv(t), dtype=float)
        step = 1e-6 * (1.0 + np.abs(t))
        return (self.evaluate(t + step) - self.evaluate(t - step)) / (2.0 * step)

    def _scalar_f(self, t: float) -> float:
        return float(self.func(np.asarray(t, dtype=float)))

    def _primitive_scalar(self, t: float) -> float:
        # integral from 0 to t over dyadic anchor segments 0, +-1, +-2, +-4 ...
        # segment integrals and per-t partials are cached; the anchor grid is
        # fixed so cached values never depend on evaluation order
        if t in self._fcache:
            return self._fcache[t]
        sign = 1.0 if t >= 0.0 else -1.0
        mag = abs(t)
        base = 0.0
        total = 0.0
        if mag > 1.0:
            level = int(math.floor(math.log2(mag)))
            base = sign * float(2**level)
            key = ("anchor", sign, level)
            if key not in self._fcache:
                acc = _adaptive_simpson(self._scalar_f, 0.0, sign * 1.0)
                for j in range(level):
                    acc += _adaptive_simpson(self._scalar_f, sign * float(2**j), sign * float(2 ** (j + 1)))
                self._fcache[key] = acc
            total = self._fcache[key]
        value = total + _adaptive_simpson(self._scalar_f, base, t)
        self._fcache[t] = value
        return value

    def primitive(self, t):
        """F(t) with F(0) = 0; closed form when declared, else quadrature."""
        if self.antiderivative is not None:
            return np.asarray(self.antiderivative(np.asarray(t, dtype=float)), dtype=float)
        arr = np.asarray(t, dtype=float)
        flat = arr.reshape(-1)
        out = np.fromiter((self._primitive_scalar(float(x)) for x in flat), dtype=float, count=flat.size)
        return out.reshape(arr.shape) if arr.shape else float(out[0])

    # -- certification ------------------------------------------------------

    def validate(self, probe_count: int = 10000) -> "NonlinearityReport":
        """Certify boundedness, F(0) = 0, F' = f, and |F(t)| <= bound * |t|.

        The f bound runs on the full probe grid over [-1e6, 1e6]; the
        antiderivative checks run on the full grid for closed-form F and on
        a geometric subsample when F is quadrature-backed (each evaluation
        there costs an adaptive integral).
        """
        checks = []

        probes = np.linspace(-1e6, 1e6, probe_count)
        fmax = float(np.max(np.abs(self.evaluate(probes))))
        checks.append(
            ConditionCheck(
                name="bound",
                passed=fmax <= self.bound * (1.0 + 1e-12) + 1e-300,
                details={"sup_sampled": fmax, "bound": self.bound},
            )
        )

        f0 = float(self.primitive(0.0))
        checks.append(
            ConditionCheck(
                name="antiderivative_zero",
                passed=abs(f0) <= 1e-12 * (1.0 + self.bound),
                details={"value": f0},
            )
        )

        closed = self.antiderivative is not None
        if closed:
            # step small enough that even a jump of F'' (kinked f, e.g. the
            # clipped ramp) keeps the central-difference error below 1e-6
            t_fd = np.linspace(-20.0, 20.0, 401)
            fd_step = 1e-6 * (1.0 + np.abs(t_fd))
        else:
            t_fd = np.concatenate([-np.geomspace(1e-2, 64.0, 20), [0.0], np.geomspace(1e-2, 64.0, 20)])
            fd_step = 1e-4 * (1.0 + np.abs(t_fd))
        fd = (self.primitive(t_fd + fd_step) - self.primitive(t_fd - fd_step)) / (2.0 * fd_step)
        f_ref = self.evaluate(t_fd)
        fd_err = float(np.max(np.abs(fd - f_ref) / (1.0 + np.abs(f_ref))))
        checks.append(
            ConditionCheck(
                name="derivative_consistency",
                passed=fd_err <= 1e-6,
                details={"max_relative_error": fd_err},
            )
        )

        if closed:
            t_gr = probes
        else:
            t_gr = np.concatenate([-np.geomspace(1e-3, 1e6, 31), np.geomspace(1e-3, 1e6, 31)])
        growth = np.abs(self.primitive(t_gr)) - self.bound * np.abs(t_gr)
        worst = float(np.max(growth))
        checks.append(
            ConditionCheck(
                name="linear_growth",
                passed=worst <= 1e-9 * (1.0 + self.bound),
                details={"max_excess": worst},
            )
        )

        return NonlinearityReport(name=self.name, checks=tuple(checks))


@dataclass(frozen=True)
class NonlinearityReport:
    name: str
    checks: tuple

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str) -> ConditionCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


# ---------------------------------------------------------------------------
# problem construction and classification


@dataclass(frozen=True)
class SemilinearProblem:
    """Immutable description of one forced semilinear solve.

    curve_beta is the computed spectral-curve ordinate at alpha when the
    classification needed it (None when a shortcut decided the regime);
    eigenset holds L2-normalized spectrum eigenfunctions at (alpha, beta),
    populated only in the resonance regime.
    """

    params: FucikParams
    nonlinearity: Nonlinearity
    h: Field
    regime: str
    curve_beta: float | None = None
    eigenset: tuple = ()

    @property
    def tol_res(self) -> float:
        return 1e-8 * (1.0 + self.h.norm_l2 + self.nonlinearity.bound)

    @property
    def tol_gll(self) -> float:
        return 1e-10


def classify(params: FucikParams, seed: int = 0):
    """Regime of (alpha, beta) against the spectral curve.

    Returns (regime, curve_beta) where curve_beta is None when a shortcut
    settled the answer without computing the curve: beta <= lambda_{k+1}
    lies strictly below it except at the diagonal resonance corner
    alpha = beta = lambda_{k+1}.
    """
    lam_k1 = params.lambda_k1
    tol = params.tol_beta
    if abs(params.alpha - lam_k1) <= tol and abs(params.beta - lam_k1) <= tol:
        return RESONANCE, lam_k1
    if params.beta <= lam_k1:
        return NONRESONANCE, None
    try:
        root = beta_of_alpha(params.alpha, params.basis, seed=seed)
    except BracketExhausted as exc:
        # no root below the cap and beta <= cap: strictly below the curve
        if params.beta <= exc.beta_max:
            return NONRESONANCE, None
        return OUT_OF_SCOPE, None
    if abs(params.beta - root.beta) <= tol:
        return RESONANCE, root.beta
    if params.beta < root.beta:
        return NONRESONANCE, root.beta
    return OUT_OF_SCOPE, root.beta


def _eigenset_at(params: FucikParams, seed: int) -> tuple:
    """L2-normalized spectrum eigenfunctions at (alpha, beta) on the curve."""
    point = minimize_on_sphere(params, seed=seed)
    members = []
    if point.eigenfunction is not None:
        members.append(point.eigenfunction)
    for alt in point.alternates:
        top = maximize_low(params, alt)
        members.append(to_field(params.basis, coeffs=top.coeffs + alt.coeffs))
    out = []
    for w in members:
        c = w.coeffs / np.linalg.norm(w.coeffs)
        if all(np.linalg.norm(c - o.coeffs) > 1e-6 for o in out):
            out.append(to_field(params.basis, coeffs=c))
    return tuple(out)


def build_problem(
    params: FucikParams, nonlinearity: Nonlinearity, h: Field, seed: int = 0
) -> SemilinearProblem:
    """Classify (alpha, beta) and assemble an immutable problem description.

    The nonlinearity is certified here (bound, F(0), F' = f, linear growth)
    so solvers can rely on it; out-of-scope parameter pairs are rejected.
    """
    report = nonlinearity.validate(probe_count=2000)
    if not report.passed:
        failed = [c.name for c in report.checks if not c.passed]
        raise ConfigError(f"nonlinearity failed certification: {', '.join(failed)}")
    if h.basis is not params.basis:
        raise ConfigError("forcing field must live on the problem basis")
    regime, curve_beta = classify(params, seed=seed)
    if regime == OUT_OF_SCOPE:
        raise ConfigError(
            f"beta={params.beta} lies above the spectral curve (beta(alpha)={curve_beta}); "
            "only the characterized region below and on the curve is solvable"
        )
    eigenset = ()
    if regime == RESONANCE:
        eigenset = _eigenset_at(params, seed)
    return SemilinearProblem(
        params=params,
        nonlinearity=nonlinearity,
        h=h,
        regime=regime,
        curve_beta=curve_beta,
        eigenset=eigenset,
    )


# ---------------------------------------------------------------------------
# energy, gradient, residuals


def _forcing_integral(problem: SemilinearProblem, coeffs: np.ndarray) -> float:
    basis = problem.params.basis
    u_s = basis.sample_values @ coeffs
    integrand = problem.nonlinearity.primitive(u_s) + problem.h.samples * u_s
    return float(basis.sample_weights @ integrand)


def semilinear_energy(problem: SemilinearProblem, u: Field) -> float:
    """E(u) = J(u) - integral of (F(u) + h u), all on the shared quadrature."""
    return fucik_energy(problem.params, u) - _forcing_integral(problem, u.coeffs)


def _semilinear_gradient_coeffs(problem: SemilinearProblem, coeffs: np.ndarray) -> np.ndarray:
    p = problem.params
    basis = p.basis
    g = _gradient_arrays(basis, p.alpha, p.beta, coeffs)
    u_s = basis.sample_values @ coeffs
    f_rep = basis.sample_values.T @ (basis.sample_weights * problem.nonlinearity.evaluate(u_s))
    return g - f_rep - problem.h.coeffs


def semilinear_gradient(problem: SemilinearProblem, u: Field) -> Field:
    """L2 gradient of E at u in eigenbasis coefficients."""
    return to_field(problem.params.basis, coeffs=_semilinear_gradient_coeffs(problem, u.coeffs))


@dataclass(frozen=True)
class ResidualReport:
    """Weak-form residuals against every basis function."""

    max_abs: float
    per_mode: np.ndarray


def residual_report(problem: SemilinearProblem, u: Field) -> ResidualReport:
    """Pairings of the E gradient with each basis function.

    By M-orthonormality of the basis these are exactly the gradient
    coefficients, so the table doubles as a per-mode residual map.
    """
    g = _semilinear_gradient_coeffs(problem, u.coeffs)
    g = g.copy()
    g.flags.writeable = False
    return ResidualReport(max_abs=float(np.max(np.abs(g))), per_mode=g)


# ---------------------------------------------------------------------------
# admissibility at resonance


@dataclass(frozen=True)
class GLLReport:
    """Ray-limit admissibility summary at a resonance point.

    satisfied means every eigenset ray drives the forcing functional to
    -infinity (strict negativity of the ray functional); ray_values lists
    the functional per eigenset member, ray_slopes the measured large-t
    secant slopes that back the ray reduction, window the diagonal-case
    two-sided bounds (lower, value, upper) or None.
    """

    satisfied: bool
    ray_values: tuple
    ray_slopes: tuple
    slope_consistent: bool
    window: tuple | None
    eigenset_size: int


def _ray_functional(problem: SemilinearProblem, v: Field) -> float:
    basis = problem.params.basis
    nl = problem.nonlinearity
    s = v.samples
    w = basis.sample_weights
    pos = float(w @ np.clip(s, 0.0, None))
    neg = float(w @ np.clip(-s, 0.0, None))
    return nl.limit_right * pos - nl.limit_left * neg + float(problem.h.coeffs @ v.coeffs)


def _ray_slope(problem: SemilinearProblem, v: Field) -> float:
    # secant of t -> integral of F(t v) + t h v between the two largest
    # probes; the secant cancels the bounded offset integral of F - (ray part)
    def phi(t):
        return _forcing_integral(problem, t * v.coeffs)

    t1, t2 = 1e3, 1e4
    return (phi(t2) - phi(t1)) / (t2 - t1)


def check_gll(problem: SemilinearProblem, eigenset: tuple | None = None) -> GLLReport:
    """Generalized admissibility check along spectrum eigenfunction rays.

    For each normalized eigenfunction v the functional
    r(v) = f_r * integral(v+) - f_l * integral(v-) + integral(h v) is the
    asymptotic slope of t -> integral(F(t v) + t h v); the condition holds
    when every slope is strictly negative, which forces the forcing term to
    -infinity along every escaping ray.  In the diagonal case both signs of
    the eigenfunction are rays, which is reported as the two-sided window
    lower < integral(h v) < upper.
    """
    nl = problem.nonlinearity
    if nl.limit_left is None or nl.limit_right is None:
        raise MissingLimits("asymptotic limits f_l, f_r must be declared for the ray check")
    if problem.regime != RESONANCE:
        raise ConfigError("the admissibility check applies to the resonance regime")
    members = problem.eigenset if eigenset is None else tuple(eigenset)
    if not members:
        raise ConfigError("no eigenfunctions available at the resonance point")

    diagonal = abs(problem.params.alpha - problem.params.beta) <= problem.params.tol_beta
    rays = list(members)
    if diagonal:
        rays.extend(to_field(v.basis, coeffs=-v.coeffs) for v in members)

    values = tuple(_ray_functional(problem, v) for v in rays)
    slopes = tuple(_ray_slope(problem, v) for v in rays)
    scale = 1e-9 * (1.0 + nl.bound + problem.h.norm_l2)
    consistent = all(abs(s - r) <= 0.02 * abs(r) + scale for s, r in zip(slopes, values))
    satisfied = all(r < -problem.tol_gll for r in values)

    window = None
    if diagonal:
        v = members[0]
        s = v.samples
        w = problem.params.basis.sample_weights
        pos = float(w @ np.clip(s, 0.0, None))
        neg = float(w @ np.clip(-s, 0.0, None))
        lower = nl.limit_right * neg - nl.limit_left * pos
        upper = nl.limit_left * neg - nl.limit_right * pos
        window = (lower, float(problem.h.coeffs @ v.coeffs), upper)

    return GLLReport(
        satisfied=satisfied,
        ray_values=values,
        ray_slopes=slopes,
        slope_consistent=consistent,
        window=window,
        eigenset_size=len(members),
    )


# ---------------------------------------------------------------------------
# saddle-point solver


@dataclass(frozen=True)
class SaddleResult:
    """Outcome of one saddle-point search.

    status is one of CONVERGED (residual certified below tol_res and the
    weak form verified against random test fields), MAX_ITERATIONS (best
    iterate returned), or DIVERGING_RAY (iterates escaped along ray, the
    numerical signature of a failed compactness condition).
    """

    u_star: Field | None
    residual: float
    energy: float
    iterations: int
    status: str
    trace: tuple
    ray: Field | None = None
    diagnostics: dict = field(default_factory=dict)


def _maximize_low_E(problem: SemilinearProblem, v_coeffs: np.ndarray, t0: np.ndarray, tol: float):
    """Damped Newton max of E(u + v) over the low subspace.

    The quadratic part is strictly concave with margin delta; the bounded-f
    part can locally spoil the Hessian sign, so the factorization falls back
    to a gradient step and acceptance is by increase or gradient halving.
    Returns (t, grad_norm, delta_eff) where delta_eff is the worst observed
    concavity ratio along accepted iterate pairs (positive = still concave).
    """
    p = problem.params
    basis, k = p.basis, p.k
    lam1 = basis.eigenvalues[:k]
    s1 = basis.sample_values[:, :k]
    w = basis.sample_weights
    nl = problem.nonlinearity
    h_low = problem.h.coeffs[:k]
    v_samples = basis.sample_values @ v_coeffs

    def value_grad(t):
        u = v_samples + s1 @ t
        up = np.clip(u, 0.0, None)
        un = np.clip(-u, 0.0, None)
        fu = nl.evaluate(u)
        val = (
            0.5 * (float(lam1 @ t**2) - p.alpha * float(w @ up**2) - p.beta * float(w @ un**2))
            - float(w @ nl.primitive(u))
            - float(w @ (problem.h.samples * u))
        )
        grad = lam1 * t - s1.T @ (w * (p.alpha * up - p.beta * un + fu)) - h_low
        return val, grad, u

    t = np.asarray(t0, dtype=float).copy()
    val, grad, u = value_grad(t)
    delta_eff = math.inf
    for _ in range(120):
        gn = float(np.linalg.norm(grad))
        if gn <= tol:
            break
        sel = np.where(u > 0.0, p.alpha, p.beta) + nl.derivative(u)
        h = np.diag(lam1) - s1.T @ ((w * sel)[:, None] * s1)
        try:
            step = scipy.linalg.cho_solve(scipy.linalg.cho_factor(-h), grad)
        except scipy.linalg.LinAlgError:
            step = grad / (p.beta + p.lambda_k + nl.bound)
        slope = float(grad @ step)
        if slope <= 0.0:
            step = grad / (p.beta + p.lambda_k + nl.bound)
            slope = float(grad @ step)
        theta = 1.0
        accepted = False
        while theta > 1e-10:
            t_new = t + theta * step
            val_new, grad_new, u_new = value_grad(t_new)
            if val_new >= val + 0.3 * theta * slope or float(np.linalg.norm(grad_new)) <= 0.5 * gn:
                accepted = True
                break
            theta *= 0.5
        if not accepted:
            break
        dt = t_new - t
        energy_sq = float(lam1 @ dt**2)
        if energy_sq > 1e-20:
            delta_eff = min(delta_eff, -float((grad_new - grad) @ dt) / energy_sq)
        t, val, grad, u = t_new, val_new, grad_new, u_new
    return t, float(np.linalg.norm(grad)), delta_eff


def saddle_gap_probe(problem: SemilinearProblem, seed: int = 0, n_samples: int = 50) -> dict:
    """Sampled certificate of the linking geometry.

    Searches the smallest power-of-2 radius R (energy norm, capped at 2^15)
    at which the sampled sup of E over the low-subspace sphere of radius R
    falls strictly below the sampled inf of E over the partial-maximizer
    manifold.  Failure to certify is reported, not raised: the solve may
    proceed regardless.
    """
    p = problem.params
    basis, k = p.basis, p.k
    rng = np.random.default_rng(seed)

    # manifold samples: random high directions at a range of amplitudes
    inf_high = math.inf
    for _ in range(n_samples):
        c = np.zeros(basis.dim)
        c[k:] = rng.standard_normal(basis.dim - k)
        c[k:] *= rng.uniform(0.2, 8.0) / np.linalg.norm(c[k:])
        v = to_field(basis, coeffs=c)
        top = maximize_low(p, v)
        w = to_field(basis, coeffs=top.coeffs + c)
        inf_high = min(inf_high, semilinear_energy(problem, w))

    radius = 1.0
    while radius <= 2.0**15:
        sup_low = -math.inf
        for _ in range(n_samples):
            t = rng.standard_normal(k)
            t *= radius / math.sqrt(float(basis.eigenvalues[:k] @ t**2))
            c = np.zeros(basis.dim)
            c[:k] = t
            sup_low = max(sup_low, semilinear_energy(problem, to_field(basis, coeffs=c)))
        if sup_low < inf_high:
            return {"radius": radius, "sup_low": sup_low, "inf_high": inf_high, "certified": True}
        radius *= 2.0
    return {"radius": radius / 2.0, "sup_low": sup_low, "inf_high": inf_high, "certified": False}


def _detect_ray(norms: list, dirs: list, start_norm: float):
    if len(norms) < RAY_CAUCHY_WINDOW:
        return None
    if norms[-1] < RAY_GROWTH_FACTOR * max(1.0, start_norm):
        return None
    window = dirs[-RAY_CAUCHY_WINDOW:]
    ref = window[-1]
    if all(float(np.linalg.norm(d - ref)) <= RAY_CAUCHY_TOL for d in window[:-1]):
        return ref
    return None


def solve(
    problem: SemilinearProblem,
    seed: int = 0,
    force: bool = False,
    max_outer: int = 500,
    max_newton: int = 60,
) -> SaddleResult:
    """Two-phase saddle-point search for a critical point of E.

    Phase one minimizes the reduced functional (partial max over the low
    subspace, warm-started and Newton-polished) by preconditioned descent
    over the high subspace, watching for norm escape along a stable ray.
    Phase two runs full-space Newton on the E gradient with a least-squares
    fallback for the singular directions that appear at resonance.
    Convergence additionally verifies the weak formulation against 50
    seeded random test fields.  At resonance the admissibility check runs
    first and a failure raises RegimeViolation unless force=True.
    """
    p = problem.params
    basis, k = p.basis, p.k
    tol_res = problem.tol_res
    diagnostics = {
        "ray_growth_factor": RAY_GROWTH_FACTOR,
        "ray_cauchy_tol": RAY_CAUCHY_TOL,
        "ray_cauchy_window": RAY_CAUCHY_WINDOW,
    }

    if problem.regime == RESONANCE:
        gll = check_gll(problem)
        diagnostics["gll_satisfied"] = gll.satisfied
        diagnostics["gll_ray_values"] = gll.ray_values
        if not gll.satisfied and not force:
            raise RegimeViolation(
                "admissibility check failed at resonance; pass force=True to search anyway"
            )

    nl = problem.nonlinearity
    lam = basis.eigenvalues
    pre = 1.0 / (np.abs(lam[k:] - p.alpha) + (p.beta - p.alpha) + 1.0 + nl.bound)
    inner_tol = 1e-2 * tol_res

    # phase 1: reduced descent over the high subspace
    v = np.zeros(basis.dim - k)
    t_warm, _, _ = _maximize_t(p, basis.sample_values[:, k:] @ v, np.zeros(k))
    trace = []
    norms, dirs = [], []
    delta_eff = math.inf
    iterations = 0

    def composite(v_high, t_low):
        c = np.zeros(basis.dim)
        c[:k] = t_low
        c[k:] = v_high
        return c

    c0 = composite(v, t_warm)
    start_norm = float(np.linalg.norm(c0))

    def reduced_eval(v_high, warm_t):
        v_full = composite(v_high, np.zeros(k))
        t_new, _, deff = _maximize_low_E(problem, v_full, warm_t, inner_tol)
        c = composite(v_high, t_new)
        val = semilinear_energy(problem, to_field(basis, coeffs=c))
        g_full = _semilinear_gradient_coeffs(problem, c)
        return val, g_full[k:], t_new, c, deff

    val, g, t_warm, c_cur, deff = reduced_eval(v, t_warm)
    delta_eff = min(delta_eff, deff)
    eta = 1.0
    prev_v = prev_g = None
    phase1_status = None
    for _ in range(max_outer):
        gn = float(np.linalg.norm(g))
        res_full = float(np.linalg.norm(_semilinear_gradient_coeffs(problem, c_cur)))
        trace.append((val, res_full))
        norms.append(float(np.linalg.norm(c_cur)))
        dirs.append(c_cur / max(norms[-1], 1e-300))
        ray = _detect_ray(norms, dirs, start_norm)
        if ray is not None:
            return SaddleResult(
                u_star=None,
                residual=res_full,
                energy=val,
                iterations=iterations,
                status=DIVERGING_RAY,
                trace=tuple(trace),
                ray=to_field(basis, coeffs=ray),
                diagnostics=diagnostics,
            )
        if gn <= 0.5 * tol_res:
            break
        d = pre * g
        if prev_v is not None:
            dv = v - prev_v
            dg = g - prev_g
            denom = float(dv @ dg)
            eta = min(max(float(dv @ dv) / denom, 1e-4), 1e4) if denom > 0 else 1.0
        step = eta
        accepted = False
        for _ in range(30):
            v_new = v - step * d
            val_new, g_new, t_new, c_new, deff = reduced_eval(v_new, t_warm)
            if val_new <= val - 1e-4 * step * float(g @ d) or float(np.linalg.norm(g_new)) <= 0.5 * gn:
                accepted = True
                break
            step *= 0.5
        iterations += 1
        if not accepted:
            break
        prev_v, prev_g = v, g
        v, val, g, t_warm, c_cur = v_new, val_new, g_new, t_new, c_new
        delta_eff = min(delta_eff, deff)
    diagnostics["delta_eff"] = delta_eff

    # phase 2: full-space Newton on the gradient with lstsq fallback; the
    # internal target sits well below tol_res because the quadratic tail of
    # Newton is nearly free and linear problems then come out machine-exact
    c = c_cur.copy()
    g_full = _semilinear_gradient_coeffs(problem, c)
    res = float(np.linalg.norm(g_full))
    s = basis.sample_values
    w = basis.sample_weights
    newton_target = 1e-4 * tol_res
    for _ in range(max_newton):
        if res <= newton_target:
            break
        u_s = s @ c
        sel = np.where(u_s > 0.0, p.alpha, p.beta) + nl.derivative(u_s)
        hess = np.diag(lam) - s.T @ ((w * sel)[:, None] * s)
        try:
            step = scipy.linalg.solve(hess, -g_full)
        except scipy.linalg.LinAlgError:
            step = None
        if step is None or not np.all(np.isfinite(step)):
            step = scipy.linalg.lstsq(hess, -g_full)[0]
        theta = 1.0
        accepted = False
        while theta > 1e-12:
            c_new = c + theta * step
            g_new = _semilinear_gradient_coeffs(problem, c_new)
            res_new = float(np.linalg.norm(g_new))
            if res_new <= (1.0 - 0.1 * theta) * res:
                accepted = True
                break
            theta *= 0.5
        if not accepted:
            break
        c, g_full, res = c_new, g_new, res_new
        iterations += 1
        trace.append((semilinear_energy(problem, to_field(basis, coeffs=c)), res))

    u_star = to_field(basis, coeffs=c)
    energy_val = semilinear_energy(problem, u_star)
    if res > tol_res:
        return SaddleResult(
            u_star=u_star,
            residual=res,
            energy=energy_val,
            iterations=iterations,
            status=MAX_ITERATIONS,
            trace=tuple(trace),
            diagnostics=diagnostics,
        )

    # weak-form verification against random test fields
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(50):
        d = rng.standard_normal(basis.dim)
        d /= np.linalg.norm(d)
        worst = max(worst, abs(float(g_full @ d)))
    diagnostics["weak_form_max_pairing"] = worst
    if worst > tol_res:
        return SaddleResult(
            u_star=u_star,
            residual=res,
            energy=energy_val,
            iterations=iterations,
            status=MAX_ITERATIONS,
            trace=tuple(trace),
            diagnostics=diagnostics,
        )

    return SaddleResult(
        u_star=u_star,
        residual=res,
        energy=energy_val,
        iterations=iterations,
        status=CONVERGED,
        trace=tuple(trace),
        diagnostics=diagnostics,
    )


# ---------------------------------------------------------------------------
# problem documents


_BUILTIN_NONLINEARITIES = {
    "zero": Nonlinearity.zero,
    "tanh": Nonlinearity.tanh,
    "atan_scaled": Nonlinearity.atan_scaled,
    "bounded_poly_clip": Nonlinearity.bounded_poly_clip,
}


def _field_from_spec(basis: EigenBasis, spec) -> Field:
    if not isinstance(spec, dict) or len(spec) != 1:
        raise ConfigError("forcing spec must be one of {coeffs | nodal | named}")
    if "coeffs" in spec:
        return to_field(basis, coeffs=np.asarray(spec["coeffs"], dtype=float))
    if "nodal" in spec:
        return to_field(basis, nodal=np.asarray(spec["nodal"], dtype=float))
    if "named" in spec:
        name = spec["named"]
        if not (isinstance(name, str) and name.startswith("phi_")):
            raise ConfigError(f"named field must look like phi_j, got {name!r}")
        try:
            j = int(name[4:])
        except ValueError as exc:
            raise ConfigError(f"bad eigenfunction index in {name!r}") from exc
        if not (1 <= j <= basis.dim):
            raise ConfigError(f"eigenfunction index {j} outside 1..{basis.dim}")
        c = np.zeros(basis.dim)
        c[j - 1] = 1.0
        return to_field(basis, coeffs=c)
    raise ConfigError("forcing spec must be one of {coeffs | nodal | named}")


def problem_from_dict(basis: EigenBasis, doc: dict, seed: int = 0) -> SemilinearProblem:
    """Build a problem from its JSON-style description.

    Keys: alpha (number), beta (number or the string "on-curve"), k
    (optional split index), f ({name} or {table}), f_limits (optional
    override pair), h (field spec).  "on-curve" resolves beta by the curve
    computation at alpha, which lands the problem in the resonance regime.
    """
    if not isinstance(doc, dict):
        raise ConfigError("problem document must be a mapping")
    unknown = set(doc) - {"alpha", "beta", "k", "f", "f_limits", "h"}
    if unknown:
        raise ConfigError(f"unknown problem keys: {sorted(unknown)}")
    try:
        alpha = float(doc["alpha"])
        beta_spec = doc["beta"]
        f_spec = doc["f"]
        h_spec = doc["h"]
    except KeyError as exc:
        raise ConfigError(f"problem document missing key {exc}") from exc

    if "k" in doc:
        basis = basis.with_k(int(doc["k"]))

    if isinstance(f_spec, dict) and "name" in f_spec:
        name = f_spec["name"]
        if name not in _BUILTIN_NONLINEARITIES:
            raise ConfigError(f"unknown nonlinearity {name!r}; builtins: {sorted(_BUILTIN_NONLINEARITIES)}")
        nl = _BUILTIN_NONLINEARITIES[name]()
    elif isinstance(f_spec, dict) and "table" in f_spec:
        table = f_spec["table"]
        nl = Nonlinearity.from_table(
            table["points"], table["values"], limits=tuple(doc["f_limits"]) if "f_limits" in doc else None
        )
    else:
        raise ConfigError("f spec must carry a builtin name or a table")

    if "f_limits" in doc and isinstance(f_spec, dict) and "name" in f_spec:
        fl, fr = (float(x) for x in doc["f_limits"])
        if abs(fl - nl.limit_left) > 1e-12 or abs(fr - nl.limit_right) > 1e-12:
            raise ConfigError("declared f_limits contradict the builtin nonlinearity")

    h = _field_from_spec(basis, h_spec)

    if beta_spec == "on-curve":
        root = beta_of_alpha(alpha, basis, seed=seed)
        beta = root.beta
    else:
        beta = float(beta_spec)
    params = FucikParams(alpha=alpha, beta=beta, basis=basis)
    return build_problem(params, nl, h, seed=seed)
