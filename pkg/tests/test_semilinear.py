"""Tests for the forced semilinear solver: nonlinearity certification,
regime classification, admissibility check, and the saddle-point search."""

import math

import numpy as np
import pytest

import fucik


@pytest.fixture(scope="module")
def basis():
    mesh = fucik.Mesh1D(0.0, math.pi, 48)
    return fucik.eigenpairs(fucik.assemble(fucik.Kernel.local(), mesh), k=1)


def _mid_alpha(basis, frac=0.5):
    return basis.lambda_k + frac * (basis.lambda_k1 - basis.lambda_k)


def _field(basis, coeffs):
    c = np.zeros(basis.dim)
    c[: len(coeffs)] = coeffs
    return fucik.to_field(basis, coeffs=c)


def _zero_field(basis):
    return fucik.to_field(basis, coeffs=np.zeros(basis.dim))


def _log_cosh(t):
    t = np.abs(np.asarray(t, dtype=float))
    return t + np.log1p(np.exp(-2.0 * t)) - math.log(2.0)


def _nonres_problem(basis, nl=None, h=None, frac=0.5):
    a = _mid_alpha(basis, frac)
    p = fucik.FucikParams(alpha=a, beta=a, basis=basis)
    return fucik.build_problem(
        p, nl if nl is not None else fucik.Nonlinearity.tanh(), h if h is not None else _zero_field(basis)
    )


def _diag_resonance(basis, nl, h):
    lam2 = basis.lambda_k1
    return fucik.build_problem(fucik.FucikParams(lam2, lam2, basis), nl, h)


# ---------------------------------------------------------------------------
# nonlinearity certification


def test_builtins_validate():
    for ctor in (
        fucik.Nonlinearity.zero,
        fucik.Nonlinearity.tanh,
        fucik.Nonlinearity.atan_scaled,
        fucik.Nonlinearity.bounded_poly_clip,
    ):
        rep = ctor().validate()
        assert rep.passed, [c.name for c in rep.checks if not c.passed]
        assert rep.check("bound").passed


def test_antiderivative_values():
    t = np.array([-3.0, -0.5, 0.0, 1.2, 10.0])
    tanh = fucik.Nonlinearity.tanh()
    assert np.max(np.abs(tanh.primitive(t) - np.log(np.cosh(t)))) <= 1e-12
    clip = fucik.Nonlinearity.bounded_poly_clip()
    assert clip.primitive(0.5) == 0.125
    assert clip.primitive(-3.0) == 2.5
    zero = fucik.Nonlinearity.zero()
    assert np.all(zero.primitive(t) == 0.0)


def test_atan_scaled_limits_and_sign():
    nl = fucik.Nonlinearity.atan_scaled()
    assert nl.limit_left == 1.0 and nl.limit_right == -1.0
    assert nl.evaluate(1e9) < -0.999
    assert nl.evaluate(-1e9) > 0.999


def test_derivative_analytic_and_fd_paths():
    tanh = fucik.Nonlinearity.tanh()
    t = np.array([-1.0, 0.3, 2.0])
    assert np.max(np.abs(tanh.derivative(t) - (1.0 - np.tanh(t) ** 2))) <= 1e-12
    pts = np.linspace(-6.0, 6.0, 1201)
    table = fucik.Nonlinearity.from_table(pts, np.tanh(pts))
    assert np.max(np.abs(table.derivative(t) - (1.0 - np.tanh(t) ** 2))) <= 1e-3


def test_overstated_bound_fails_validation():
    nl = fucik.Nonlinearity(
        name="lying", func=np.tanh, bound=0.5, limit_left=-1.0, limit_right=1.0,
        antiderivative=_log_cosh,
    )
    rep = nl.validate()
    assert not rep.check("bound").passed
    assert not rep.passed


def test_table_rejects_malformed():
    with pytest.raises(fucik.ConfigError):
        fucik.Nonlinearity.from_table([0.0, 1.0, 0.5], [1.0, 2.0, 3.0])
    with pytest.raises(fucik.ConfigError):
        fucik.Nonlinearity.from_table([0.0, 1.0], [1.0, 2.0], limits=(5.0, 2.0))


def test_table_quadrature_antiderivative():
    pts = np.linspace(-8.0, 8.0, 801)
    table = fucik.Nonlinearity.from_table(pts, np.tanh(pts))
    probe = np.array([-5.0, -1.0, 0.0, 2.5, 7.0])
    err = np.max(np.abs(table.primitive(probe) - np.log(np.cosh(probe))))
    assert err <= 5e-5  # limited by table interpolation, not quadrature
    # values do not depend on evaluation order
    other = fucik.Nonlinearity.from_table(pts, np.tanh(pts))
    other.primitive(np.array([7.0, 0.1]))
    assert other.primitive(2.5) == table.primitive(2.5)


# ---------------------------------------------------------------------------
# classification and problem construction


def test_classify_diagonal_below_curve(basis):
    a = _mid_alpha(basis)
    regime, curve_beta = fucik.classify(fucik.FucikParams(a, a, basis))
    assert regime == fucik.NONRESONANCE
    assert curve_beta is None  # shortcut: beta <= lambda_{k+1}


def test_classify_on_and_above_curve(basis):
    a = _mid_alpha(basis, 0.6)
    root = fucik.beta_of_alpha(a, basis)
    regime_on, beta_on = fucik.classify(fucik.FucikParams(a, root.beta, basis))
    assert regime_on == fucik.RESONANCE
    assert abs(beta_on - root.beta) <= 1e-9 * root.beta
    regime_above, _ = fucik.classify(fucik.FucikParams(a, root.beta + 1.0, basis))
    assert regime_above == fucik.OUT_OF_SCOPE


def test_classify_resonance_corner(basis):
    lam2 = basis.lambda_k1
    regime, curve_beta = fucik.classify(fucik.FucikParams(lam2, lam2, basis))
    assert regime == fucik.RESONANCE
    assert curve_beta == lam2


def test_build_rejects_out_of_scope(basis):
    a = _mid_alpha(basis, 0.6)
    root = fucik.beta_of_alpha(a, basis)
    with pytest.raises(fucik.ConfigError):
        fucik.build_problem(
            fucik.FucikParams(a, root.beta + 1.0, basis), fucik.Nonlinearity.zero(), _zero_field(basis)
        )


def test_build_rejects_uncertified_nonlinearity(basis):
    bad = fucik.Nonlinearity(
        name="lying", func=np.tanh, bound=0.5, limit_left=-1.0, limit_right=1.0,
        antiderivative=_log_cosh,
    )
    a = _mid_alpha(basis)
    with pytest.raises(fucik.ConfigError):
        fucik.build_problem(fucik.FucikParams(a, a, basis), bad, _zero_field(basis))


def test_build_populates_eigenset_at_resonance(basis):
    prob = _diag_resonance(basis, fucik.Nonlinearity.zero(), _zero_field(basis))
    assert prob.regime == fucik.RESONANCE
    assert len(prob.eigenset) >= 1
    for w in prob.eigenset:
        assert abs(float(np.linalg.norm(w.coeffs)) - 1.0) <= 1e-12


# ---------------------------------------------------------------------------
# energy and gradient


def test_energy_reduces_to_quadratic(basis):
    prob = _nonres_problem(basis, nl=fucik.Nonlinearity.zero())
    rng = np.random.default_rng(2)
    u = fucik.to_field(basis, coeffs=rng.standard_normal(basis.dim))
    assert fucik.semilinear_energy(prob, u) == fucik.fucik_energy(prob.params, u)
    g1 = fucik.semilinear_gradient(prob, u).coeffs
    g2 = fucik.fucik_gradient(prob.params, u).coeffs
    assert np.max(np.abs(g1 - g2)) <= 1e-14


def test_energy_forcing_bound(basis):
    # |E - J| <= ||M_f + |h|||_L2 * ||u||_L2
    rng = np.random.default_rng(3)
    h = _field(basis, [0.4, -0.2, 0.7])
    prob = _nonres_problem(basis, nl=fucik.Nonlinearity.tanh(), h=h)
    bound_fn = prob.nonlinearity.bound + np.abs(h.samples)
    K = math.sqrt(float(basis.sample_weights @ bound_fn**2))
    for _ in range(100):
        u = fucik.to_field(basis, coeffs=rng.standard_normal(basis.dim) * rng.uniform(0.05, 30.0))
        gap = abs(fucik.semilinear_energy(prob, u) - fucik.fucik_energy(prob.params, u))
        assert gap <= K * u.norm_l2 + 1e-9


def test_energy_anticoercive_on_low_subspace(basis):
    # E(u) <= (1 - alpha/lambda_k)/2 * ||u||_A^2 + C ||u||_A on the low span
    h = _field(basis, [0.3])
    prob = _nonres_problem(basis, nl=fucik.Nonlinearity.tanh(), h=h)
    a = prob.params.alpha
    lam1 = basis.lambda_k
    K = math.sqrt(float(basis.sample_weights @ (1.0 + np.abs(h.samples)) ** 2))
    C = K / math.sqrt(lam1)
    for norm_a in (10.0, 1e2, 1e3):
        for sign in (1.0, -1.0):
            u = _field(basis, [sign * norm_a / math.sqrt(lam1)])
            val = fucik.semilinear_energy(prob, u)
            assert val <= 0.5 * (1.0 - a / lam1) * norm_a**2 + C * norm_a + 1e-9


def test_gradient_matches_finite_differences(basis):
    rng = np.random.default_rng(7)
    h = _field(basis, [0.1, 0.05])
    prob = _nonres_problem(basis, nl=fucik.Nonlinearity.tanh(), h=h)
    eps = 1e-5
    for _ in range(20):
        u = fucik.to_field(basis, coeffs=rng.standard_normal(basis.dim))
        d = rng.standard_normal(basis.dim)
        d /= np.linalg.norm(d)
        g = fucik.semilinear_gradient(prob, u).coeffs
        ep = fucik.semilinear_energy(prob, fucik.to_field(basis, coeffs=u.coeffs + eps * d))
        em = fucik.semilinear_energy(prob, fucik.to_field(basis, coeffs=u.coeffs - eps * d))
        fd = (ep - em) / (2.0 * eps)
        assert abs(float(g @ d) - fd) <= 1e-6 * (1.0 + abs(fd))


def test_gradient_linear_identity(basis):
    # f = 0: the Fredholm coefficients zero the gradient exactly
    rng = np.random.default_rng(11)
    mu = 0.5 * (basis.lambda_k + basis.lambda_k1)
    h = fucik.to_field(basis, coeffs=rng.standard_normal(basis.dim))
    prob = fucik.build_problem(
        fucik.FucikParams(mu, mu, basis), fucik.Nonlinearity.zero(), h
    )
    u = fucik.to_field(basis, coeffs=h.coeffs / (basis.eigenvalues - mu))
    g = fucik.semilinear_gradient(prob, u).coeffs
    assert np.max(np.abs(g)) <= 1e-12


def test_manifold_lower_bound(basis):
    # E(M(v)+v) >= m ||v||^2 - K ||M(v)+v|| in the nonresonance regime
    rng = np.random.default_rng(13)
    h = _field(basis, [0.2, -0.1])
    prob = _nonres_problem(basis, nl=fucik.Nonlinearity.atan_scaled(), h=h, frac=0.4)
    p = prob.params
    m = fucik.minimize_on_sphere(p, seed=0).m_value
    assert m > 0.0
    bound_fn = prob.nonlinearity.bound + np.abs(h.samples)
    K = math.sqrt(float(basis.sample_weights @ bound_fn**2))
    for _ in range(100):
        c = np.zeros(basis.dim)
        c[basis.k :] = rng.standard_normal(basis.dim - basis.k) * rng.uniform(0.05, 10.0)
        v = fucik.to_field(basis, coeffs=c)
        w = fucik.to_field(basis, coeffs=fucik.maximize_low(p, v).coeffs + c)
        val = fucik.semilinear_energy(prob, w)
        assert val >= m * v.norm_l2**2 - K * w.norm_l2 - 1e-8


def test_residual_report_random_field(basis):
    rng = np.random.default_rng(17)
    prob = _nonres_problem(basis)
    u = fucik.to_field(basis, coeffs=rng.standard_normal(basis.dim))
    rep = fucik.residual_report(prob, u)
    g = fucik.semilinear_gradient(prob, u).coeffs
    assert np.max(np.abs(rep.per_mode - g)) <= 1e-12
    assert rep.max_abs == np.max(np.abs(g))


# ---------------------------------------------------------------------------
# admissibility check


def test_gll_requires_limits(basis):
    nolimits = fucik.Nonlinearity(name="nolimits", func=np.tanh, bound=1.0,
                                  antiderivative=_log_cosh)
    prob = _diag_resonance(basis, nolimits, _zero_field(basis))
    with pytest.raises(fucik.MissingLimits):
        fucik.check_gll(prob)


def test_gll_requires_resonance(basis):
    prob = _nonres_problem(basis)
    with pytest.raises(fucik.ConfigError):
        fucik.check_gll(prob)


def test_gll_satisfied_for_crossing_limits(basis):
    # f_l = 1 > f_r = -1 forces r(v) = -int(v+) - int(v-) < 0 for every ray
    prob = _diag_resonance(basis, fucik.Nonlinearity.atan_scaled(), _zero_field(basis))
    rep = fucik.check_gll(prob)
    assert rep.satisfied
    assert all(r < 0.0 for r in rep.ray_values)
    assert rep.slope_consistent
    assert rep.eigenset_size >= 1


def test_gll_boundary_case_fails(basis):
    prob = _diag_resonance(basis, fucik.Nonlinearity.zero(), _zero_field(basis))
    rep = fucik.check_gll(prob)
    assert not rep.satisfied
    assert all(abs(r) <= 1e-12 for r in rep.ray_values)


def test_gll_diagonal_window_width(basis):
    prob = _diag_resonance(basis, fucik.Nonlinearity.atan_scaled(), _zero_field(basis))
    rep = fucik.check_gll(prob)
    lower, value, upper = rep.window
    v = prob.eigenset[0]
    w = basis.sample_weights
    mass = float(w @ np.abs(v.samples))
    f_l, f_r = 1.0, -1.0
    assert abs((upper - lower) - (f_l - f_r) * mass) <= 1e-9
    assert lower < value < upper


def test_gll_slope_matches_ray_functional(basis):
    h = _field(basis, [0.05, 0.02])
    prob = _diag_resonance(basis, fucik.Nonlinearity.tanh(), h)
    rep = fucik.check_gll(prob)
    for slope, r in zip(rep.ray_slopes, rep.ray_values):
        assert abs(slope - r) <= 0.02 * abs(r) + 1e-6


# ---------------------------------------------------------------------------
# saddle-point solves


def test_solve_linear_fredholm(basis):
    rng = np.random.default_rng(19)
    mu = 0.5 * (basis.lambda_k + basis.lambda_k1)
    for _ in range(5):
        h = fucik.to_field(basis, coeffs=rng.standard_normal(basis.dim))
        prob = fucik.build_problem(fucik.FucikParams(mu, mu, basis), fucik.Nonlinearity.zero(), h)
        res = fucik.solve(prob, seed=0)
        assert res.status == fucik.CONVERGED
        expect = h.coeffs / (basis.eigenvalues - mu)
        assert np.max(np.abs(res.u_star.coeffs - expect)) <= 1e-8


def test_solve_nonresonance_tanh(basis):
    h = _field(basis, [0.1])
    prob = _nonres_problem(basis, nl=fucik.Nonlinearity.tanh(), h=h, frac=0.25)
    res = fucik.solve(prob, seed=0)
    assert res.status == fucik.CONVERGED
    assert res.residual <= prob.tol_res
    assert fucik.residual_report(prob, res.u_star).max_abs <= prob.tol_res
    assert len(res.trace) > 0
    assert res.diagnostics["weak_form_max_pairing"] <= prob.tol_res


def test_solve_detects_diverging_ray(basis):
    h = _field(basis, [0.0, 1.0])
    prob = _diag_resonance(basis, fucik.Nonlinearity.zero(), h)
    res = fucik.solve(prob, seed=0, force=True)
    assert res.status == fucik.DIVERGING_RAY
    assert res.u_star is None
    cosine = abs(float(res.ray.coeffs[1]))
    assert cosine >= 0.99
    assert res.diagnostics["ray_growth_factor"] == 10.0


def test_solve_orthogonal_forcing_at_resonance(basis):
    h = _field(basis, [1.0])
    prob = _diag_resonance(basis, fucik.Nonlinearity.zero(), h)
    res = fucik.solve(prob, seed=0, force=True)
    assert res.status == fucik.CONVERGED
    assert res.residual <= prob.tol_res
    # the flat direction stays untouched: solution orthogonal to phi_2
    assert abs(res.u_star.coeffs[1]) <= 1e-10


def test_solve_resonance_with_admissibility(basis):
    prob = _diag_resonance(basis, fucik.Nonlinearity.atan_scaled(), _zero_field(basis))
    res = fucik.solve(prob, seed=0)
    assert res.status == fucik.CONVERGED
    assert res.residual <= prob.tol_res
    assert res.diagnostics["gll_satisfied"]


def test_solve_refuses_failed_admissibility(basis):
    h = _field(basis, [0.0, 1.0])
    prob = _diag_resonance(basis, fucik.Nonlinearity.zero(), h)
    with pytest.raises(fucik.RegimeViolation):
        fucik.solve(prob, seed=0)


def test_saddle_gap_certified(basis):
    h = _field(basis, [0.1])
    prob = _nonres_problem(basis, nl=fucik.Nonlinearity.tanh(), h=h, frac=0.3)
    gap = fucik.saddle_gap_probe(prob, seed=1)
    assert gap["certified"]
    assert gap["sup_low"] < gap["inf_high"]


# ---------------------------------------------------------------------------
# problem documents


def test_problem_from_dict_named_forcing(basis):
    a = _mid_alpha(basis)
    doc = {"alpha": a, "beta": a, "f": {"name": "tanh"}, "h": {"named": "phi_1"}}
    prob = fucik.problem_from_dict(basis, doc)
    assert prob.regime == fucik.NONRESONANCE
    assert prob.h.coeffs[0] == 1.0
    assert prob.nonlinearity.name == "tanh"


def test_problem_from_dict_on_curve(basis):
    doc = {
        "alpha": basis.lambda_k1,
        "beta": "on-curve",
        "f": {"name": "atan_scaled"},
        "h": {"coeffs": [0.0] * basis.dim},
    }
    prob = fucik.problem_from_dict(basis, doc)
    assert prob.regime == fucik.RESONANCE
    assert abs(prob.curve_beta - basis.lambda_k1) <= 1e-9 * basis.lambda_k1


def test_problem_from_dict_table(basis):
    a = _mid_alpha(basis)
    pts = list(np.linspace(-6.0, 6.0, 241))
    doc = {
        "alpha": a,
        "beta": a,
        "f": {"table": {"points": pts, "values": list(np.tanh(pts))}},
        "h": {"nodal": list(np.zeros(basis.dim))},
    }
    prob = fucik.problem_from_dict(basis, doc)
    assert prob.nonlinearity.name == "table"
    assert abs(prob.nonlinearity.limit_right - math.tanh(6.0)) <= 1e-12


def test_problem_from_dict_rejects_malformed(basis):
    a = _mid_alpha(basis)
    good = {"alpha": a, "beta": a, "f": {"name": "zero"}, "h": {"named": "phi_1"}}
    with pytest.raises(fucik.ConfigError):
        fucik.problem_from_dict(basis, {**good, "extra": 1})
    with pytest.raises(fucik.ConfigError):
        fucik.problem_from_dict(basis, {**good, "f": {"name": "cubic"}})
    with pytest.raises(fucik.ConfigError):
        fucik.problem_from_dict(basis, {**good, "h": {"named": "psi_1"}})
    with pytest.raises(fucik.ConfigError):
        fucik.problem_from_dict(basis, {**good, "h": {"named": "phi_0"}})
    missing = {k: v for k, v in good.items() if k != "beta"}
    with pytest.raises(fucik.ConfigError):
        fucik.problem_from_dict(basis, missing)
