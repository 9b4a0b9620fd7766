"""Maximum-entropy null models for directed weighted layers.

Two models are provided:

* the directed random graph (DRG), whose expected binary reciprocity is
  simply the connectance, and
* the weighted reciprocated configuration model (WRCM), which constrains,
  for every node, the non-reciprocated out-strength, the non-reciprocated
  in-strength and the reciprocated strength of the min-based dyad
  decomposition.

The WRCM is an exponential random graph over nonnegative integer weight
matrices. With multipliers x_i, y_i, z_i (exponentials of the Lagrange
multipliers) the expected dyad weights are

    <w_right_ij> = x_i y_j (1 - x_j y_i) / ((1 - x_i y_j)(1 - x_i x_j y_i y_j))
    <w_left_ij>  = <w_right_ji>
    <w_mut_ij>   = z_i z_j / (1 - z_i z_j)

and the multipliers are fitted so the expected strengths reproduce the
observed ones exactly. Real-valued layers are rescaled and rounded to
integers before fitting (see SolverConfig.rescale_target); expectations are
mapped back to the original units.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import check_layer, decompose_dyads
from .errors import ConvergenceError, UndefinedStatisticError, ValidationError
from .metrics import cross_product_stats, local_stats, weighted_reciprocity_min

_FEAS_MARGIN = 1e-12


@dataclass
class SolverConfig:
    """Settings for the WRCM maximum-likelihood solver."""

    tol: float = 1e-8          # relative residual, infinity norm
    max_iter: int = 100_000
    damping: float = 0.5       # backtracking factor on rejected steps
    rescale_target: int = 10   # median positive weight after integer rescaling


@dataclass
class WrcmFit:
    """Fitted WRCM multipliers, expectations and diagnostics.

    Expected matrices are in the units of the input layer (the integer
    rescaling factor `scale` has been applied back). Residuals are relative
    constraint gaps per node for (out, in, mutual) strengths; nodes with a
    zero strength have their multiplier pinned at 0 and a zero residual.
    """

    x: np.ndarray
    y: np.ndarray
    z: np.ndarray
    expected_right: np.ndarray
    expected_left: np.ndarray
    expected_mutual: np.ndarray
    residuals: np.ndarray           # shape (N, 3)
    log_likelihood: float
    dyad_partition: np.ndarray      # Z_ij per dyad, 1 on the diagonal
    iterations: int
    converged: bool
    scale: float = 1.0
    loglik_history: list = field(default_factory=list, repr=False)

    @property
    def expected_total(self):
        """Expected full weight matrix <w_ij> = <w_right_ij> + <w_mut_ij>."""
        return self.expected_right + self.expected_mutual


def drg_expectation(layer):
    """Expected binary reciprocity under the directed random graph.

    Equals the connectance L / (N(N-1)) identically.
    """
    w = check_layer(layer)
    n = w.shape[0]
    links = int((w > 0).sum())
    if links == 0:
        raise UndefinedStatisticError("DRG expectation undefined on an empty graph")
    return links / (n * (n - 1))


def integerize(layer, target=10):
    """Rescale a layer to integer weights for the WRCM ensemble.

    Already-integral layers are returned unchanged (scale 1). Otherwise the
    layer is divided by scale = median positive weight / target and rounded,
    so the median positive weight maps to `target`. Returns (int_layer,
    scale); original units are recovered as int_layer * scale.
    """
    w = check_layer(layer)
    if np.all(w == np.round(w)):
        return w.copy(), 1.0
    positive = w[w > 0]
    scale = float(np.median(positive)) / float(target)
    return np.round(w / scale), scale


def _expected_matrices(x, y, z):
    """Closed-form expected dyad weights given multipliers."""
    n = len(x)
    p = np.outer(x, y)      # x_i y_j
    q = p.T                 # x_j y_i
    r = p * q
    zz = np.outer(z, z)
    with np.errstate(divide="ignore", invalid="ignore"):
        e_right = p * (1.0 - q) / ((1.0 - p) * (1.0 - r))
        e_mut = zz / (1.0 - zz)
    np.fill_diagonal(e_right, 0.0)
    np.fill_diagonal(e_mut, 0.0)
    return e_right, e_mut


def _feasible(x, y, z):
    n = len(x)
    off = ~np.eye(n, dtype=bool)
    p = np.outer(x, y)[off]
    zz = np.outer(z, z)[off]
    lim = 1.0 - _FEAS_MARGIN
    return bool(p.max(initial=0.0) < lim and zz.max(initial=0.0) < lim)


def _log_likelihood(x, y, z, w_right, w_mutual, masks=None):
    """Log-likelihood of the observed (integer) layer under the multipliers."""
    n = len(x)
    if masks is None:
        upper = np.triu(np.ones((n, n), dtype=bool), 1)
        off = upper | upper.T
    else:
        upper, off = masks
    p = np.outer(x, y)
    zz = np.outer(z, z)

    def xlogy(w, v):
        out = np.zeros_like(v)
        m = w > 0
        out[m] = w[m] * np.log(v[m])
        return out

    terms = xlogy(w_right, p)[off].sum() + xlogy(w_mutual, zz)[upper].sum()
    log_z = (np.log1p(-(p * p.T)[upper]).sum()
             - np.log1p(-p[off]).sum()
             - np.log1p(-zz[upper]).sum())
    return float(terms - log_z)


def _residuals(e_right, e_mut, s_out, s_in, s_mut):
    """Relative constraint gaps per node, zero where the strength is zero."""
    gaps = np.zeros((len(s_out), 3))
    est = (e_right.sum(axis=1), e_right.sum(axis=0), e_mut.sum(axis=1))
    obs = (s_out, s_in, s_mut)
    for k in range(3):
        active = obs[k] > 0
        gaps[active, k] = np.abs(est[k][active] - obs[k][active]) / obs[k][active]
    return gaps


def _newton_proposal(x, y, z, e_right, e_mut, s_out, s_in, s_mut,
                     active_x, active_y, active_z):
    """Newton step on the log-multipliers, as multiplicative update ratios.

    The log-likelihood Hessian in log-parameters is the negative Fisher
    information, assembled per dyad from the variances/covariance of the
    non-reciprocated pair and the variance of the reciprocated weight.
    A small ridge absorbs the x/y rescaling gauge freedom.
    """
    n = len(x)
    p = np.outer(x, y)
    pq = p * p.T
    s = np.outer(z, z)
    with np.errstate(divide="ignore", invalid="ignore"):
        vu = p / (1.0 - p) ** 2 - pq / (1.0 - pq) ** 2
        cuv = -pq / (1.0 - pq) ** 2
        vm = s / (1.0 - s) ** 2
    for m in (vu, cuv, vm):
        np.fill_diagonal(m, 0.0)

    rx = np.ones(n)
    ry = np.ones(n)
    rz = np.ones(n)

    ax = np.flatnonzero(active_x)
    ay = np.flatnonzero(active_y)
    if ax.size or ay.size:
        m_aa = np.diag(vu.sum(axis=1)) + cuv
        m_ab = vu + np.diag(cuv.sum(axis=1))
        m_bb = np.diag(vu.sum(axis=0)) + cuv
        top = np.hstack([m_aa[np.ix_(ax, ax)], m_ab[np.ix_(ax, ay)]])
        bot = np.hstack([m_ab.T[np.ix_(ay, ax)], m_bb[np.ix_(ay, ay)]])
        fisher = np.vstack([top, bot])
        grad = np.concatenate([
            (s_out - e_right.sum(axis=1))[ax],
            (s_in - e_right.sum(axis=0))[ay],
        ])
        ridge = 1e-10 * max(fisher.diagonal().max(initial=0.0), 1.0)
        fisher[np.diag_indices_from(fisher)] += ridge
        try:
            step = np.linalg.solve(fisher, grad)
        except np.linalg.LinAlgError:
            step = np.linalg.lstsq(fisher, grad, rcond=None)[0]
        step = np.clip(step, -30.0, 30.0)
        rx[ax] = np.exp(step[:ax.size])
        ry[ay] = np.exp(step[ax.size:])

    az = np.flatnonzero(active_z)
    if az.size:
        m_cc = (np.diag(vm.sum(axis=1)) + vm)[np.ix_(az, az)]
        grad = (s_mut - e_mut.sum(axis=1))[az]
        ridge = 1e-10 * max(m_cc.diagonal().max(initial=0.0), 1.0)
        m_cc[np.diag_indices_from(m_cc)] += ridge
        try:
            step = np.linalg.solve(m_cc, grad)
        except np.linalg.LinAlgError:
            step = np.linalg.lstsq(m_cc, grad, rcond=None)[0]
        rz[az] = np.exp(np.clip(step, -30.0, 30.0))
    return rx, ry, rz


def fit_wrcm(layer, config=None):
    """Fit the WRCM to one layer by maximum likelihood.

    The solver is a damped fixed-point iteration on (x, y, z): each
    multiplier is updated from its own constraint equation holding the
    others fixed, which in log-space is an ascent direction of the concave
    log-likelihood; steps are backtracked (factor config.damping) until the
    iterate is feasible and the likelihood does not decrease. After a short
    warm-up, a Newton step on the log-parameters (analytic Fisher
    information) is tried first each iteration and accepted under the same
    feasibility/ascent test, which cuts the iteration count by orders of
    magnitude on heavy-tailed layers.

    Raises ConvergenceError when the relative residual does not reach
    config.tol within config.max_iter iterations.
    """
    config = config or SolverConfig()
    w = check_layer(layer)
    n = w.shape[0]
    if n < 2:
        raise ValidationError("WRCM needs at least 2 nodes")
    w_int, scale = integerize(w, config.rescale_target)
    w_right, _, w_mutual = decompose_dyads(w_int)
    s_out = w_right.sum(axis=1)
    s_in = w_right.sum(axis=0)
    s_mut = w_mutual.sum(axis=1)

    upper = np.triu(np.ones((n, n), dtype=bool), 1)
    masks = (upper, upper | upper.T)

    x, y, z = _initial_multipliers(s_out, s_in, s_mut)
    active_x, active_y, active_z = s_out > 0, s_in > 0, s_mut > 0

    ll = _log_likelihood(x, y, z, w_right, w_mutual, masks)
    history = [ll]
    e_right, e_mut = _expected_matrices(x, y, z)
    res = _residuals(e_right, e_mut, s_out, s_in, s_mut)
    converged = False
    it = 0
    for it in range(1, config.max_iter + 1):
        res_max = res.max(initial=0.0)
        if res_max < config.tol:
            converged = True
            break

        def try_ratios(rx, ry, rz, lam_floor=1e-12):
            # Backtrack until the iterate is feasible and shows strict
            # likelihood ascent, or residual descent at (numerically)
            # equal likelihood; the second clause breaks the
            # overshoot/undershoot cycles of the pure fixed point.
            lam = 1.0
            while lam >= lam_floor:
                xt = x * rx**lam
                yt = y * ry**lam
                zt = z * rz**lam
                if _feasible(xt, yt, zt):
                    er_t, em_t = _expected_matrices(xt, yt, zt)
                    res_t = _residuals(er_t, em_t, s_out, s_in, s_mut)
                    ll_t = _log_likelihood(xt, yt, zt, w_right, w_mutual, masks)
                    slack = 1e-12 * (1.0 + abs(ll))
                    if ll_t > ll + slack or (res_t.max(initial=0.0) < res_max
                                             and ll_t >= ll - slack):
                        return xt, yt, zt, er_t, em_t, res_t, ll_t
                lam *= config.damping
            return None

        accepted = None
        if it > 3:
            # Newton step once the warm-up has moved into the basin;
            # only a few backtracks before falling back to the fixed point.
            rx, ry, rz = _newton_proposal(
                x, y, z, e_right, e_mut, s_out, s_in, s_mut,
                active_x, active_y, active_z)
            accepted = try_ratios(rx, ry, rz, lam_floor=0.05)
        if accepted is None:
            # Fixed-point proposal: multiply each active multiplier by the
            # ratio of observed to currently expected strength. In log
            # space every component shares its sign with the likelihood
            # gradient, so a small enough step along it is an ascent step.
            est_out = e_right.sum(axis=1)
            est_in = e_right.sum(axis=0)
            est_mut = e_mut.sum(axis=1)
            rx = np.where(active_x, s_out / np.where(est_out > 0, est_out, 1.0), 1.0)
            ry = np.where(active_y, s_in / np.where(est_in > 0, est_in, 1.0), 1.0)
            rz = np.where(active_z, s_mut / np.where(est_mut > 0, est_mut, 1.0), 1.0)
            accepted = try_ratios(rx, ry, rz)
        if accepted is None:
            break
        x, y, z, e_right, e_mut, res, ll = accepted
        history.append(ll)

    if not converged:
        if res.max(initial=0.0) >= config.tol:
            raise ConvergenceError(
                f"WRCM fit stalled after {it} iterations "
                f"(best residual {res.max(initial=0.0):.3e})",
                residuals=res, iterations=it)
        converged = True
    p = np.outer(x, y)
    zz = np.outer(z, z)
    dyad_z = (1.0 - p * p.T) / ((1.0 - p) * (1.0 - p.T) * (1.0 - zz))
    np.fill_diagonal(dyad_z, 1.0)
    return WrcmFit(
        x=x, y=y, z=z,
        expected_right=e_right * scale,
        expected_left=e_right.T * scale,
        expected_mutual=e_mut * scale,
        residuals=res,
        log_likelihood=ll,
        dyad_partition=dyad_z,
        iterations=it,
        converged=converged,
        scale=scale,
        loglik_history=history,
    )


def _initial_multipliers(s_out, s_in, s_mut):
    """Strength-proportional warm start, scaled into the feasible region."""
    n = len(s_out)
    off = ~np.eye(n, dtype=bool)
    tot = s_out.sum()
    if tot > 0:
        u = s_out / tot
        v = s_in / tot
        m = np.outer(u, v)[off].max(initial=0.0)
        c = np.sqrt(0.1 / m) if m > 0 else 1.0
        x = c * u
        y = c * v
    else:
        x = np.zeros(n)
        y = np.zeros(n)
    w_mut_tot = s_mut.sum() / 2.0
    z = np.sqrt(s_mut / (w_mut_tot + 1.0)) if w_mut_tot > 0 else np.zeros(n)
    zm = np.outer(z, z)[off].max(initial=0.0)
    if zm >= 0.9:
        z *= np.sqrt(0.9 / zm)
    return x, y, z


def expected_cross_stats(fit_a, fit_b):
    """Expected cross-product reciprocity and multiplexity of two fits.

    Uses the ratio-of-expectations approximation <n/d> ~ <n>/<d> with
    expected dyad weights <w_ij> = <w_right_ij> + <w_mut_ij>.
    """
    ea = fit_a.expected_total
    eb = fit_b.expected_total
    if ea.shape != eb.shape:
        raise ValidationError("fits have different node counts")
    tot_a = float(ea.sum())
    tot_b = float(eb.sum())
    if tot_a == 0 or tot_b == 0:
        raise UndefinedStatisticError("expected cross stats undefined: zero expected total")
    expected_r = float((ea * eb.T).sum() / (tot_a * tot_b))
    expected_m = float((ea * eb).sum() / (tot_a * tot_b))
    return expected_r, expected_m


def expected_min_reciprocity(fit):
    """Expected min-based reciprocity <W_mutual> / <W> under the fit.

    Because the WRCM constrains all mutual and non-reciprocated strengths,
    this equals the observed min-based reciprocity up to the solver
    residual, making the single-layer self correction identically zero.
    """
    tot = float(fit.expected_total.sum())
    if tot == 0:
        raise UndefinedStatisticError("expected reciprocity undefined: zero expected total")
    return float(fit.expected_mutual.sum() / tot)


def wrcm_self_rho(layer, fit):
    """Single-layer reciprocity correction (r - <r>) / (1 - <r>) with the
    min-based measure; ~0 for a converged fit of the same layer."""
    r_obs = weighted_reciprocity_min(layer)
    r_exp = expected_min_reciprocity(fit)
    if r_exp >= 1.0:
        return float("nan")
    return (r_obs - r_exp) / (1.0 - r_exp)


@dataclass
class NullEnhanced:
    """Null-model-corrected cross-layer statistics.

    Global: rho = (r - <r>) / (1 - <r>), mu likewise from m.
    Local: per-dyad corrections with a significance mask that is True
    exactly where the corrected value is positive (negative values are
    biased by the null model and never flagged significant).
    """

    layer_a: str
    layer_b: str
    rho: float = float("nan")
    mu: float = float("nan")
    observed_r: float = float("nan")
    observed_m: float = float("nan")
    expected_r: float = float("nan")
    expected_m: float = float("nan")
    local_rho: np.ndarray | None = None
    local_mu: np.ndarray | None = None
    rho_significant: np.ndarray | None = None
    mu_significant: np.ndarray | None = None


def null_enhanced_global(layer_a, layer_b, fit_a, fit_b,
                         layer_a_id="A", layer_b_id="B"):
    """Global rho and mu for a layer pair under the two WRCM fits."""
    obs = cross_product_stats(layer_a, layer_b, layer_a_id, layer_b_id)
    exp_r, exp_m = expected_cross_stats(fit_a, fit_b)
    rho = (obs.r - exp_r) / (1.0 - exp_r) if exp_r < 1.0 else float("nan")
    mu = (obs.m - exp_m) / (1.0 - exp_m) if exp_m < 1.0 else float("nan")
    return NullEnhanced(layer_a=layer_a_id, layer_b=layer_b_id,
                        rho=rho, mu=mu,
                        observed_r=obs.r, observed_m=obs.m,
                        expected_r=exp_r, expected_m=exp_m)


def null_enhanced_local(layer_a, layer_b, fit_a, fit_b,
                        layer_a_id="A", layer_b_id="B"):
    """Local (dyadic) rho and mu matrices with significance masks.

    Expected local values apply the same dyad formulas to the expected
    weight matrices. Undefined entries (zero strengths on either side, or
    an expected value of 1) are NaN and masked not-significant.
    """
    result = NullEnhanced(layer_a=layer_a_id, layer_b=layer_b_id)
    ea = fit_a.expected_total
    eb = fit_b.expected_total
    for kind, attr, mask_attr in (
        ("local_reciprocity", "local_rho", "rho_significant"),
        ("local_multiplexity", "local_mu", "mu_significant"),
    ):
        obs = local_stats(layer_a, layer_b, kind).values
        exp = local_stats(ea, eb, kind).values
        with np.errstate(invalid="ignore", divide="ignore"):
            corrected = np.where(exp < 1.0, (obs - exp) / (1.0 - exp), np.nan)
        with np.errstate(invalid="ignore"):
            significant = np.nan_to_num(corrected, nan=-1.0) > 0
        setattr(result, attr, corrected)
        setattr(result, mask_attr, significant)
    return result
