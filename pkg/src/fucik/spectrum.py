"""Variational computation of asymmetric spectral curves.

For spectral parameters (alpha, beta) the quadratic-with-kinks functional

    J(u) = 1/2 (<A u, u> - alpha ||u+||^2 - beta ||u-||^2)

is strictly concave in the span of the first k modes whenever alpha exceeds
lambda_k, so its partial maximizer over that subspace is unique and the
reduced functional v -> J(maximizer(v) + v) is well defined on the high
subspace.  Its minimum m(alpha, beta) over the L2-unit sphere of the high
subspace is positive below the spectral curve and crosses zero exactly on it,
which turns curve computation into one-dimensional root finding in beta.

Solvers: the partial maximization is a damped semismooth Newton method (the
gradient is piecewise linear in the low coefficients); the sphere minimum
combines projected gradient descent with a sign-pattern-freeze refinement
that solves the exact quadratic obtained by freezing the positive/negative
sample pattern, accepting only true decreases.  All quadratures use the
basis's shared per-element Simpson rule, which integrates products of
piecewise-linear fields exactly; several identities in the tests (diagonal
case, concavity constant) hold to machine precision because of this.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import (
    BracketExhausted,
    ConfigError,
    FucikError,
    MaxIterations,
)
from .operator import EigenBasis, Field, to_field


@dataclass(frozen=True)
class FucikParams:
    """Spectral parameters pinned to a basis and split index.

    Requires lambda_k < alpha <= lambda_{k+1} (the right edge is admitted so
    the diagonal resonance point is expressible) and alpha <= beta; points
    with beta < alpha are reached through swap().
    """

    alpha: float
    beta: float
    basis: EigenBasis
    k: int = None

    def __post_init__(self):
        if self.k is None:
            object.__setattr__(self, "k", self.basis.k)
        elif self.k != self.basis.k:
            object.__setattr__(self, "basis", self.basis.with_k(self.k))
        lam_k, lam_k1 = self.basis.lambda_k, self.basis.lambda_k1
        if not (lam_k < self.alpha <= lam_k1):
            raise ConfigError(
                f"alpha={self.alpha} outside the admissible strip ({lam_k}, {lam_k1}]"
            )
        if self.beta < self.alpha:
            raise ConfigError("beta < alpha; exchange roles via swap()")

    @property
    def lambda_k(self) -> float:
        return self.basis.lambda_k

    @property
    def lambda_k1(self) -> float:
        return self.basis.lambda_k1

    @property
    def delta(self) -> float:
        """Concavity margin of the low-subspace problem."""
        return self.alpha / self.lambda_k - 1.0

    @property
    def tol_grad(self) -> float:
        return 1e-9 * (1.0 + self.lambda_k1)

    @property
    def tol_m(self) -> float:
        return 1e-8 * self.lambda_k1

    @property
    def tol_beta(self) -> float:
        return 1e-6 * self.lambda_k1


@dataclass(frozen=True)
class FucikPoint:
    """Result of the sphere minimization at fixed (alpha, beta).

    minimizer is the unit-norm high-subspace argmin; eigenfunction is
    populated (maximizer + minimizer) only when m_value vanishes within
    tol_m, in which case it is a discrete eigenfunction of the asymmetric
    problem and must change sign.  alternates collects distinct multistart
    minimizers whose values tie within tol_m.
    """

    alpha: float
    beta: float
    m_value: float
    minimizer: Field
    eigenfunction: Field | None = None
    alternates: tuple = ()
    residual: float = 0.0
    beta_slope: float = 0.0
    iterations: int = 0

    def __post_init__(self):
        k = self.minimizer.basis.k
        if np.any(self.minimizer.coeffs[:k] != 0.0):
            raise FucikError("minimizer has support on the low subspace")
        if abs(self.minimizer.norm_l2 - 1.0) > 1e-10:
            raise FucikError(f"minimizer norm {self.minimizer.norm_l2} not unit")
        if self.eigenfunction is not None:
            w = self.eigenfunction.nodal
            scale = float(np.max(np.abs(w)))
            if not (np.min(w) < -1e-12 * scale and np.max(w) > 1e-12 * scale):
                raise FucikError("computed eigenfunction does not change sign")


@dataclass(frozen=True)
class CurveBranch:
    """Sampled spectral curve beta(alpha) in one strip.

    mirrored=True marks a branch produced by swap(), which lies on the other
    side of the diagonal (second coordinates below lambda_{k+1}).
    """

    k: int
    lambda_k: float
    lambda_k1: float
    samples: tuple
    tolerances: dict
    lipschitz: float = 0.0
    annotations: tuple = ()
    mirrored: bool = False

    def __post_init__(self):
        alphas = [p.alpha for p in self.samples]
        betas = [p.beta for p in self.samples]
        if any(a2 <= a1 for a1, a2 in zip(alphas, alphas[1:])):
            raise FucikError("curve samples not ascending in alpha")
        slack = 1e-12 * (1.0 + self.lambda_k1)
        if any(b2 >= b1 + slack for b1, b2 in zip(betas, betas[1:])):
            raise FucikError("curve is not strictly decreasing")
        if not self.mirrored and any(b <= self.lambda_k1 - self.tolerances["tol_beta"] for b in betas):
            raise FucikError("curve sample fell at or below lambda_{k+1}")


# ---------------------------------------------------------------------------
# energy and gradient


def _pos(x):
    return np.clip(x, 0.0, None)


def _neg(x):
    return np.clip(-x, 0.0, None)


def _energy_arrays(basis: EigenBasis, alpha: float, beta: float, coeffs: np.ndarray) -> float:
    samples = basis.sample_values @ coeffs
    w = basis.sample_weights
    quad = float(basis.eigenvalues @ coeffs**2)
    return 0.5 * (quad - alpha * float(w @ _pos(samples) ** 2) - beta * float(w @ _neg(samples) ** 2))


def _gradient_arrays(basis: EigenBasis, alpha: float, beta: float, coeffs: np.ndarray) -> np.ndarray:
    samples = basis.sample_values @ coeffs
    w = basis.sample_weights
    rep = basis.sample_values.T @ (w * (alpha * _pos(samples) - beta * _neg(samples)))
    return basis.eigenvalues * coeffs - rep


def fucik_energy(params: FucikParams, u: Field) -> float:
    """J(u) with the sampled Simpson quadrature of the one-sided squares."""
    return _energy_arrays(params.basis, params.alpha, params.beta, u.coeffs)


def fucik_gradient(params: FucikParams, u: Field) -> Field:
    """L2 gradient of J at u, in eigenbasis coefficients."""
    return to_field(params.basis, coeffs=_gradient_arrays(params.basis, params.alpha, params.beta, u.coeffs))


# ---------------------------------------------------------------------------
# partial maximization over the low subspace


def _maximize_t(params: FucikParams, v_samples: np.ndarray, t0: np.ndarray, max_iter: int = 120):
    """Semismooth Newton ascent for the k low coefficients.

    The sample-pattern Hessian selection keeps every candidate Hessian below
    diag(lambda_j - alpha) < 0, so the Newton system is uniformly negative
    definite and the step is an ascent direction; Armijo damping globalizes.
    Returns (t, gradient_norm, iterations).
    """
    basis, alpha, beta = params.basis, params.alpha, params.beta
    k = params.k
    lam1 = basis.eigenvalues[:k]
    s1 = basis.sample_values[:, :k]
    w = basis.sample_weights

    def value_grad(t):
        u = v_samples + s1 @ t
        up, un = _pos(u), _neg(u)
        val = 0.5 * (float(lam1 @ t**2) - alpha * float(w @ up**2) - beta * float(w @ un**2))
        grad = lam1 * t - s1.T @ (w * (alpha * up - beta * un))
        return val, grad, u

    t = np.asarray(t0, dtype=float).copy()
    val, grad, u = value_grad(t)
    tol = 1e-4 * params.tol_grad * (1.0 + float(np.linalg.norm(v_samples)))
    floor = params.tol_grad
    it = 0
    while it < max_iter:
        gn = float(np.linalg.norm(grad))
        if gn <= tol:
            break
        # generalized Hessian with the alpha branch on u >= 0
        sel = np.where(u > 0.0, alpha, beta) * w
        h = np.diag(lam1) - s1.T @ (sel[:, None] * s1)
        try:
            step = scipy.linalg.cho_solve(scipy.linalg.cho_factor(-h), grad)
        except scipy.linalg.LinAlgError:
            step = grad / (beta + basis.lambda_k)
        slope = float(grad @ step)
        # accept on sufficient increase, or (once increases drown in
        # roundoff) on halving the gradient, which full Newton steps do
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
        t, val, grad, u = t_new, val_new, grad_new, u_new
        it += 1
    gn = float(np.linalg.norm(grad))
    if gn > floor:
        raise MaxIterations(
            f"low-subspace maximization stalled at gradient norm {gn:.3e}",
            best=t,
            residual=gn,
        )
    return t, gn, it


def maximize_low(params: FucikParams, v: Field, warm: np.ndarray | None = None) -> Field:
    """Unique maximizer of J(. + v) over the low subspace.

    v must be supported on the high modes.  The concavity certificate (the
    monotonicity inequality with constant delta in the energy seminorm) is
    spot-checked against the start and final iterates.
    """
    k = params.k
    if np.any(v.coeffs[:k] != 0.0):
        raise ConfigError("v must be supported on the high subspace")
    v_samples = v.samples
    t0 = np.zeros(k) if warm is None else np.asarray(warm, dtype=float)
    t, _, _ = _maximize_t(params, v_samples, t0)
    _check_concavity(params, v, t0, t)
    coeffs = np.zeros(params.basis.dim)
    coeffs[:k] = t
    return to_field(params.basis, coeffs=coeffs)


def _check_concavity(params: FucikParams, v: Field, t1: np.ndarray, t2: np.ndarray) -> None:
    # <grad(u2+v) - grad(u1+v), u2-u1> <= -delta ||u2-u1||_A^2 must hold for
    # any pair; a material violation means the assembled pieces disagree
    basis, k = params.basis, params.k
    dt = t2 - t1
    energy_sq = float(basis.eigenvalues[:k] @ dt**2)
    if energy_sq == 0.0:
        return
    c1 = np.zeros(basis.dim)
    c1[:k] = t1
    c2 = np.zeros(basis.dim)
    c2[:k] = t2
    g1 = _gradient_arrays(basis, params.alpha, params.beta, c1 + v.coeffs)
    g2 = _gradient_arrays(basis, params.alpha, params.beta, c2 + v.coeffs)
    lhs = float((g2 - g1)[:k] @ dt)
    slack = 1e-6 * (1.0 + energy_sq) * (1.0 + params.beta)
    if lhs > -params.delta * energy_sq + slack:
        raise FucikError(
            f"concavity certificate violated: {lhs:.3e} > {-params.delta * energy_sq:.3e}"
        )


def reduced_energy(params: FucikParams, v: Field) -> float:
    """J evaluated at maximize_low(v) + v."""
    top = maximize_low(params, v)
    return _energy_arrays(params.basis, params.alpha, params.beta, top.coeffs + v.coeffs)


def reduced_gradient(params: FucikParams, v: Field) -> Field:
    """High-subspace projection of the J gradient at the partial maximizer.

    The low component of the gradient vanishes at the maximizer, so this is
    the full derivative of the reduced functional.
    """
    top = maximize_low(params, v)
    g = _gradient_arrays(params.basis, params.alpha, params.beta, top.coeffs + v.coeffs)
    g[: params.k] = 0.0
    return to_field(params.basis, coeffs=g)


# ---------------------------------------------------------------------------
# sphere minimization


class _SphereSolver:
    """One (alpha, beta) instance: reduced energy/gradient with warm starts."""

    def __init__(self, params: FucikParams):
        self.params = params
        self.basis = params.basis
        self.k = params.k
        self.lam = self.basis.eigenvalues
        self.s = self.basis.sample_values
        self.w = self.basis.sample_weights
        self.t_warm = np.zeros(self.k)

    def eval(self, vh: np.ndarray):
        """Reduced value, tangential gradient, and full coefficients at unit vh."""
        p, k = self.params, self.k
        coeffs = np.zeros(self.basis.dim)
        coeffs[k:] = vh
        v_samples = self.s[:, k:] @ vh
        t, _, _ = _maximize_t(p, v_samples, self.t_warm)
        self.t_warm = t
        coeffs[:k] = t
        val = _energy_arrays(self.basis, p.alpha, p.beta, coeffs)
        grad = _gradient_arrays(self.basis, p.alpha, p.beta, coeffs)[k:]
        tangential = grad - (2.0 * val) * vh
        return val, tangential, coeffs

    def descend(self, vh: np.ndarray, max_iter: int = 80):
        """Preconditioned projected gradient with a BB step and Armijo guard."""
        p, k = self.params, self.k
        pre = 1.0 / (self.lam[k:] - p.alpha + 1.0 + p.beta - p.alpha)
        vh = vh / np.linalg.norm(vh)
        val, g, _ = self.eval(vh)
        eta = 1.0
        prev_v, prev_g = None, None
        used = 0
        for _ in range(max_iter):
            gn = float(np.linalg.norm(g))
            if gn <= 0.3 * p.tol_grad:
                break
            d = pre * g
            if prev_v is not None:
                dv = vh - prev_v
                dg = g - prev_g
                denom = float(dv @ dg)
                if denom > 0:
                    eta = min(max(float(dv @ dv) / denom, 1e-4), 1e3)
                else:
                    eta = 1.0
            step = eta
            accepted = False
            for _ in range(25):
                cand = vh - step * d
                cand /= np.linalg.norm(cand)
                val_new, g_new, _ = self.eval(cand)
                if val_new <= val - 1e-4 * step * float(g @ d):
                    accepted = True
                    break
                step *= 0.5
            if not accepted:
                break
            prev_v, prev_g = vh, g
            vh, val, g = cand, val_new, g_new
            used += 1
        return vh, val, g, used

    def freeze_refine(self, vh: np.ndarray, max_iter: int = 40):
        """Sign-pattern-freeze refinement.

        Freezing the positive/negative pattern of the current composite field
        makes the reduced functional an exact homogeneous quadratic whose
        sphere minimum is the smallest eigenpair of a Schur complement; steps
        are accepted (with damping) only on true decrease, and the iteration
        terminates at a pattern fixed point where the frozen and true
        gradients coincide.
        """
        p, k = self.params, self.k
        val, g, coeffs = self.eval(vh)
        pattern = self.s @ coeffs > 0.0
        used = 0
        for _ in range(max_iter):
            neg_w = self.w * (~pattern)
            sneg = self.s * np.sqrt(neg_w)[:, None]
            b = sneg.T @ sneg
            h = -(p.beta - p.alpha) * b
            h[np.diag_indices_from(h)] += self.lam - p.alpha
            h11 = h[:k, :k]
            h12 = h[:k, k:]
            try:
                sol = scipy.linalg.solve(h11, h12, assume_a="sym")
            except scipy.linalg.LinAlgError:
                break
            schur = h[k:, k:] - h12.T @ sol
            schur = 0.5 * (schur + schur.T)
            mu, vec = scipy.linalg.eigh(schur, subset_by_index=[0, 0])
            v_new = vec[:, 0]
            if float(v_new @ vh) < 0.0:
                v_new = -v_new
            # accept on true-value decrease, or (near the optimum, where value
            # differences drown in roundoff) on halving the true gradient
            gn = float(np.linalg.norm(g))
            improved = False
            theta = 1.0
            for _ in range(12):
                cand = (1.0 - theta) * vh + theta * v_new
                nrm = float(np.linalg.norm(cand))
                if nrm > 1e-12:
                    cand /= nrm
                    val_new, g_new, coeffs_new = self.eval(cand)
                    if val_new < val - 1e-15 * (1.0 + abs(val)) or float(np.linalg.norm(g_new)) < 0.5 * gn:
                        improved = True
                        break
                theta *= 0.5
            if not improved:
                break
            vh, val, g, coeffs = cand, val_new, g_new, coeffs_new
            used += 1
            if float(np.linalg.norm(g)) <= 0.05 * p.tol_grad:
                break
            pattern_new = self.s @ coeffs > 0.0
            if np.array_equal(pattern_new, pattern):
                break
            pattern = pattern_new
        return vh, val, g, used


def minimize_on_sphere(
    params: FucikParams, seed: int = 0, warm: Field | None = None, multistart: bool = True
) -> FucikPoint:
    """Best-of-multistart minimum of the reduced energy on the unit sphere.

    Starts from +-phi_{k+1}, +-phi_{k+2}, and one seeded random direction
    (plus the warm start when given); each start runs projected descent then
    pattern-freeze refinement.  With multistart=False only the warm start is
    solved (cheap continuation inside root finding); correctness there is
    backed by a full multistart certification at the located root.  The
    returned point carries a stationarity certificate (tangential gradient of
    the true reduced functional below tol_grad), the tie-break diagnostics,
    and all distinct tied minimizers.
    """
    basis, k = params.basis, params.k
    dim_high = basis.dim - k
    solver = _SphereSolver(params)

    starts = []
    if warm is not None:
        starts.append(warm.coeffs[k:] / np.linalg.norm(warm.coeffs[k:]))
    if multistart or not starts:
        e1 = np.zeros(dim_high)
        e1[0] = 1.0
        starts.append(e1)
        starts.append(-e1)
        if dim_high >= 2:
            e2 = np.zeros(dim_high)
            e2[1] = 1.0
            starts.append(e2)
            starts.append(-e2)
            rng = np.random.default_rng(seed)
            r = rng.standard_normal(dim_high)
            starts.append(r / np.linalg.norm(r))

    results = []
    total_iter = 0
    for idx, v0 in enumerate(starts):
        if multistart:
            vh, val, g, used_a = solver.descend(v0)
            vh, val, g, used_b = solver.freeze_refine(vh)
        else:
            # continuation step: the frozen-pattern solve alone usually lands
            # the new optimum; fall back to descent if its certificate slips
            vh, val, g, used_b = solver.freeze_refine(v0)
            used_a = 0
            if float(np.linalg.norm(g)) > params.tol_grad:
                vh, val, g, used_a = solver.descend(vh)
                vh, val, g, used_c = solver.freeze_refine(vh)
                used_b += used_c
        results.append((val, idx, vh, g))
        total_iter += used_a + used_b

    best_val = min(r[0] for r in results)
    tied = [r for r in results if r[0] <= best_val + params.tol_m]

    def beta_slope(vh):
        # dJ~/dbeta = -1/2 ||negative part of the composite field||^2
        _, _, coeffs = solver.eval(vh)
        u = basis.sample_values @ coeffs
        return -0.5 * float(basis.sample_weights @ _neg(u) ** 2)

    keyed = sorted(tied, key=lambda r: (abs(beta_slope(r[2])), r[1]))
    val, idx, vh, g = keyed[0]
    val, g, coeffs = solver.eval(vh)

    residual = float(np.linalg.norm(g))
    if residual > params.tol_grad:
        raise MaxIterations(
            f"sphere minimization certificate failed: tangential gradient {residual:.3e}",
            best=vh,
            residual=residual,
        )

    vc = np.zeros(basis.dim)
    vc[k:] = vh / np.linalg.norm(vh)
    minimizer = to_field(basis, coeffs=vc)

    alternates = []
    for other_val, _, other_vh, _ in keyed[1:]:
        if np.linalg.norm(other_vh - vh) > 1e-6:
            oc = np.zeros(basis.dim)
            oc[k:] = other_vh / np.linalg.norm(other_vh)
            alternates.append(to_field(basis, coeffs=oc))

    eigenfunction = None
    if abs(val) <= params.tol_m:
        eigenfunction = to_field(basis, coeffs=coeffs)

    return FucikPoint(
        alpha=params.alpha,
        beta=params.beta,
        m_value=val,
        minimizer=minimizer,
        eigenfunction=eigenfunction,
        alternates=tuple(alternates),
        residual=residual,
        beta_slope=beta_slope(vh),
        iterations=total_iter,
    )


# ---------------------------------------------------------------------------
# curve computation


def _m_eval(params: FucikParams, seed: int, warm: Field | None, careful: bool) -> FucikPoint:
    try:
        return minimize_on_sphere(params, seed=seed, warm=warm, multistart=careful or warm is None)
    except MaxIterations:
        if careful:
            raise
        return minimize_on_sphere(params, seed=seed, warm=warm, multistart=True)


def _locate_root(alpha, basis, tol_beta, tol_m, seed, careful) -> FucikPoint:
    lam_k, lam_k1 = basis.lambda_k, basis.lambda_k1
    point_lo = minimize_on_sphere(FucikParams(alpha, lam_k1, basis), seed=seed)
    if abs(point_lo.m_value) <= tol_m:
        return point_lo
    if point_lo.m_value < 0.0:
        raise FucikError(
            f"m(alpha, lambda_k1) = {point_lo.m_value:.3e} < 0 contradicts the strip bound"
        )

    lo, m_lo, warm = lam_k1, point_lo.m_value, point_lo.minimizer
    hi = 2.0 * lam_k1 - lam_k
    beta_max = 50.0 * lam_k1
    while True:
        point_hi = _m_eval(FucikParams(alpha, hi, basis), seed, warm, careful)
        m_hi, warm = point_hi.m_value, point_hi.minimizer
        if m_hi <= 0.0:
            break
        lo, m_lo = hi, m_hi
        hi = lam_k1 + 2.0 * (hi - lam_k1)
        if hi > beta_max:
            point_cap = _m_eval(FucikParams(alpha, beta_max, basis), seed, warm, careful=True)
            if point_cap.m_value <= 0.0:
                hi, m_hi = beta_max, point_cap.m_value
                warm = point_cap.minimizer
                break
            raise BracketExhausted(
                f"m(alpha={alpha}, beta) stayed positive up to beta={beta_max}",
                beta_max=beta_max,
                m_at_max=point_cap.m_value,
            )

    best = point_hi if abs(m_hi) < abs(m_lo) else point_lo
    while hi - lo > tol_beta:
        mid = 0.5 * (lo + hi)
        point = _m_eval(FucikParams(alpha, mid, basis), seed, warm, careful)
        warm = point.minimizer
        if abs(point.m_value) < abs(best.m_value):
            best = point
        if point.m_value > 0.0:
            lo, m_lo = mid, point.m_value
        else:
            hi, m_hi = mid, point.m_value

    # secant polish inside the final bracket
    b1, f1, b2, f2 = lo, m_lo, hi, m_hi
    for _ in range(12):
        if abs(best.m_value) <= tol_m:
            break
        if f2 == f1:
            break
        cand = b2 - f2 * (b2 - b1) / (f2 - f1)
        if not (lo <= cand <= hi):
            cand = 0.5 * (lo + hi)
        point = _m_eval(FucikParams(alpha, cand, basis), seed, warm, careful)
        warm = point.minimizer
        if abs(point.m_value) < abs(best.m_value):
            best = point
        if point.m_value > 0.0:
            lo, m_lo = cand, point.m_value
        else:
            hi, m_hi = cand, point.m_value
        b1, f1, b2, f2 = b2, f2, cand, point.m_value

    if abs(best.m_value) > tol_m:
        raise MaxIterations(
            f"secant polish left |m| = {abs(best.m_value):.3e} > tol_m = {tol_m:.3e}",
            best=best,
            residual=abs(best.m_value),
        )
    return best


def beta_of_alpha(
    alpha: float,
    basis: EigenBasis,
    k: int | None = None,
    tol_beta: float | None = None,
    seed: int = 0,
) -> FucikPoint:
    """Root of beta -> m(alpha, beta) above lambda_{k+1}.

    m is positive at beta = lambda_{k+1} and strictly decreasing in beta, so
    the root is bracketed by doubling expansion (capped at 50 lambda_{k+1},
    beyond which BracketExhausted reports the no-root outcome) and located by
    bisection to tol_beta, then polished by secant to |m| <= tol_m.  Interior
    evaluations run warm-started single solves; the located root is then
    re-certified by a full multistart solve, falling back to all-multistart
    root finding in the (rare) event the continuation tracked a non-global
    minimum past the true root.
    """
    if k is not None and k != basis.k:
        basis = basis.with_k(k)
    probe = FucikParams(alpha=alpha, beta=basis.lambda_k1, basis=basis)
    tol_beta = probe.tol_beta if tol_beta is None else float(tol_beta)
    if tol_beta <= 0:
        raise ConfigError("tol_beta must be positive")
    tol_m = probe.tol_m

    best = _locate_root(alpha, basis, tol_beta, tol_m, seed, careful=False)
    final = minimize_on_sphere(
        FucikParams(alpha, best.beta, basis), seed=seed, warm=best.minimizer, multistart=True
    )
    if abs(final.m_value) <= tol_m:
        return final
    return _locate_root(alpha, basis, tol_beta, tol_m, seed, careful=True)


def trace_curve(
    basis: EigenBasis,
    n_samples: int,
    k: int | None = None,
    seed: int = 0,
    tol_beta: float | None = None,
) -> CurveBranch:
    """Sample the curve at Chebyshev-spaced alphas strictly inside the strip."""
    if n_samples < 3:
        raise ConfigError("need at least 3 samples")
    if k is not None and k != basis.k:
        basis = basis.with_k(k)
    lam_k, lam_k1 = basis.lambda_k, basis.lambda_k1
    mid = 0.5 * (lam_k + lam_k1)
    half = 0.5 * (lam_k1 - lam_k)
    nodes = mid + half * np.cos(np.pi * (2.0 * np.arange(n_samples) + 1.0) / (2.0 * n_samples))
    alphas = np.sort(nodes)

    points = []
    annotations = []
    for a in alphas:
        try:
            points.append(beta_of_alpha(float(a), basis, seed=seed, tol_beta=tol_beta))
        except (BracketExhausted, MaxIterations) as e:
            annotations.append(f"alpha={float(a)!r}: {e}")
    lipschitz = 0.0
    for p1, p2 in zip(points, points[1:]):
        lipschitz = max(lipschitz, abs(p2.beta - p1.beta) / (p2.alpha - p1.alpha))
    probe = FucikParams(alpha=float(alphas[0]), beta=lam_k1, basis=basis)
    return CurveBranch(
        k=basis.k,
        lambda_k=lam_k,
        lambda_k1=lam_k1,
        samples=tuple(points),
        tolerances={
            "tol_grad": probe.tol_grad,
            "tol_m": probe.tol_m,
            "tol_beta": probe.tol_beta if tol_beta is None else float(tol_beta),
        },
        lipschitz=lipschitz,
        annotations=tuple(annotations),
    )


# ---------------------------------------------------------------------------
# symmetry and residuals


def _negate(u: Field | None) -> Field | None:
    if u is None:
        return None
    return to_field(u.basis, coeffs=-u.coeffs)


def swap(obj):
    """Mirror across the diagonal: exchanges the parameter roles and negates
    fields (positive and negative parts trade places under u -> -u).  The
    energy value is invariant under the exchange."""
    if isinstance(obj, FucikPoint):
        return FucikPoint(
            alpha=obj.beta,
            beta=obj.alpha,
            m_value=obj.m_value,
            minimizer=_unit_negate(obj.minimizer),
            eigenfunction=_negate(obj.eigenfunction),
            alternates=tuple(_unit_negate(a) for a in obj.alternates),
            residual=obj.residual,
            beta_slope=obj.beta_slope,
            iterations=obj.iterations,
        )
    if isinstance(obj, CurveBranch):
        swapped = tuple(swap(p) for p in reversed(obj.samples))
        return CurveBranch(
            k=obj.k,
            lambda_k=obj.lambda_k,
            lambda_k1=obj.lambda_k1,
            samples=swapped,
            tolerances=dict(obj.tolerances),
            lipschitz=(1.0 / obj.lipschitz if obj.lipschitz > 0 else 0.0),
            annotations=obj.annotations,
            mirrored=not obj.mirrored,
        )
    raise ConfigError(f"cannot swap object of type {type(obj).__name__}")


def _unit_negate(u: Field) -> Field:
    return to_field(u.basis, coeffs=-u.coeffs)


def eigen_residual(basis: EigenBasis, alpha: float, beta: float, w: Field) -> float:
    """L2 norm of A w - alpha w+ + beta w- in coefficients.

    Works for either ordering of the parameters, so swapped points can be
    checked directly.
    """
    return float(np.linalg.norm(_gradient_arrays(basis, alpha, beta, w.coeffs)))
