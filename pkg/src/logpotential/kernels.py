"""Pointwise and profile evaluation of G_s, G^lam_alpha and K^lam_{s+ln}.

Two independent representations are implemented for every kernel:

* the *heat* route, integrating the Gamma-weighted Gaussian mixture
  (1/Gamma(alpha)) int_0^inf e^{-lam t} t^{alpha-1} p_t(x) dt over a
  log-spaced trapezoid grid (the integrand is analytic and decays doubly
  exponentially in log t, so the trapezoid converges spectrally and the
  evaluation vectorizes over whole radius arrays);
* the *hankel* route, a radial Fourier-Bessel quadrature partitioned at
  Bessel zeros with Euler tail acceleration.

For the logarithmic kernel the heat route folds the outer order-integral
into the weight W_s(t) = t^s H_s(t), H_s(t) = int_0^inf t^p / Gamma(s+p) dp,
so that a single t-integral produces K at every radius at once.  The
alternative integration order (alpha outermost, as in the defining
representation) is kept for cross-checks.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .quadrature import (
    AccelerationError,
    QuadratureSpec,
    QuadResult,
    integrate,
    integrate_oscillatory_hankel,
)
from .special import gamma, gammaln, sphere_surface

__all__ = [
    "KernelParams",
    "RadialProfile",
    "SingularityError",
    "bessel_kernel_Gs",
    "shifted_kernel",
    "log_bessel_kernel",
    "log_kernel_origin_value",
    "laplace_approx_shifted",
    "tabulate_profile",
    "shifted_kernel_mass",
    "log_kernel_mass",
    "inhomogeneous_symbol",
    "homogeneous_symbol",
]

# Smallest order parameter for which the oscillatory route is supported.
HANKEL_MIN_S = 0.05
# Beyond this radius the alternating-tail cancellation exhausts double
# precision and the oscillatory route loses all relative accuracy.
HANKEL_MAX_RADIUS = 25.0


class SingularityError(ValueError):
    """Kernel evaluated at r = 0 inside a singular regime."""


@dataclass(frozen=True)
class KernelParams:
    """Dimension, order and mass shift (n, s, lambda) of a kernel family."""

    n: int
    s: float
    lam: float

    def __post_init__(self):
        if self.n < 1 or self.n != int(self.n):
            raise ValueError("dimension n must be a positive integer")
        if not self.s > 0.0:
            raise ValueError("order s must be positive")
        if not self.lam > 1.0:
            raise ValueError("lambda must exceed 1")

    @property
    def regime(self) -> str:
        if self.n > 2.0 * self.s:
            return "singular"
        if self.n == 2.0 * self.s:
            return "critical"
        return "continuous"


def inhomogeneous_symbol(params: KernelParams, xi_norm):
    """(lam + 4 pi^2 |xi|^2)^s ln(lam + 4 pi^2 |xi|^2)."""
    u = params.lam + 4.0 * math.pi**2 * np.asarray(xi_norm, dtype=float) ** 2
    return u**params.s * np.log(u)


def homogeneous_symbol(params: KernelParams, xi_norm):
    """(4 pi^2 |xi|^2)^s ln(4 pi^2 |xi|^2), continuously 0 at xi = 0."""
    u = 4.0 * math.pi**2 * np.asarray(xi_norm, dtype=float) ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(u > 0.0, u**params.s * np.log(np.where(u > 0, u, 1.0)), 0.0)
    return float(out) if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# H_s(t) = int_0^inf t^p / Gamma(s+p) dp  (log values, cached on a lattice)
# ---------------------------------------------------------------------------

_H_SPEC = QuadratureSpec(rel_tol=1e-11, abs_tol=1e-300, max_levels=24)
_H_CACHE: dict = {}
_H_LATTICE = 0.0125  # finest trapezoid spacing; all grids live on it


def _h_log_raw(s: float, t: float) -> float:
    """ln H_s(t) with internal scaling; valid for any t in (0, ~e^700)."""
    lt = math.log(t)
    p_star = max(1.0, t)
    shift = max(0.0, p_star * lt - float(gammaln(s + p_star)))

    def f(p):
        return np.exp(p * lt - gammaln(s + p) - shift)

    if t <= 1.2:
        res = integrate(f, 0.0, math.inf, _H_SPEC)
        total = res.value
    else:
        left = integrate(f, 0.0, p_star, _H_SPEC)
        right = integrate(f, p_star, math.inf, _H_SPEC)
        total = left.value + right.value
    return math.log(total) + shift


def _h_log(s: float, v: float) -> float:
    key = (s, int(round(v / _H_LATTICE)))
    val = _H_CACHE.get(key)
    if val is None:
        val = _h_log_raw(s, math.exp(v))
        _H_CACHE[key] = val
    return val


# ---------------------------------------------------------------------------
# Vectorized heat-route evaluator on a log-spaced t grid
# ---------------------------------------------------------------------------


def _snap(v: float) -> float:
    return _H_LATTICE * 8 * math.floor(v / (_H_LATTICE * 8))


class _HeatEvaluator:
    """Trapezoid-in-log(t) integrator for heat-kernel mixtures.

    ``log_weight`` maps an array of t values to the log of the positive
    mixture weight w(t); the evaluator returns
    int_0^inf w(t) (4 pi t)^{-n/2} e^{-r^2/(4 t)} dt for whole arrays of
    radii, with an embedded h-refinement error estimate.
    """

    _H0 = 0.1

    def __init__(self, n, log_weight, v_lo, v_hi, rel_tol=1e-10):
        self.n = n
        self.log_weight = log_weight
        self.rel_tol = rel_tol
        self.v_lo = _snap(v_lo)
        self.v_hi = _snap(v_hi) + _H_LATTICE * 8
        self._depth = 0
        self._build()

    def _ln_w_full(self, v):
        t = np.exp(v)
        return self.log_weight(t) + v - 0.5 * self.n * np.log(4.0 * math.pi * t)

    def _build(self):
        v = np.arange(self.v_lo, self.v_hi + 0.5 * self._H0, self._H0)
        self._groups = [(v, self._ln_w_full(v))]
        for _ in range(self._depth):
            self._add_midpoints()

    @property
    def _h(self):
        return self._H0 / 2 ** (len(self._groups) - 1)

    def _add_midpoints(self):
        # midpoints of the current uniform grid of spacing h
        h = self._h
        mids = np.arange(self.v_lo + 0.5 * h, self.v_hi, h)
        self._groups.append((mids, self._ln_w_full(mids)))

    def _refine(self):
        self._add_midpoints()
        self._depth = len(self._groups) - 1

    def _part_sums(self, r, m):
        parts = []
        for v, lnw in self._groups:
            args = lnw[None, :] - (r * r)[:, None] / (4.0 * np.exp(v))[None, :]
            parts.append(np.exp(args - m[:, None]).sum(axis=1))
        return parts

    def __call__(self, r):
        r = np.atleast_1d(np.asarray(r, dtype=float))
        if np.any(r <= 0.0):
            raise ValueError("heat evaluator requires r > 0")
        for _ in range(8):
            v0, lnw0 = self._groups[0]
            args0 = lnw0[None, :] - (r * r)[:, None] / (4.0 * np.exp(v0))[None, :]
            m = np.max(args0, axis=1)
            lo_bad = np.max(np.exp(args0[:, 0] - m)) > 1e-18
            hi_bad = np.max(np.exp(args0[:, -1] - m)) > 1e-18
            if not (lo_bad or hi_bad):
                break
            if lo_bad:
                # jump straight to the Gaussian cutoff of the smallest radius
                needed = 2.0 * math.log(float(np.min(r))) - math.log(300.0)
                self.v_lo = _snap(min(self.v_lo - 6.0, needed))
            if hi_bad:
                self.v_hi += 6.0
            self._build()
        else:
            raise RuntimeError("heat grid failed to cover the integrand support")

        while True:
            parts = self._part_sums(r, m)
            if len(parts) == 1:
                self._refine()
                continue
            h = self._h
            fine = h * sum(parts)
            coarse = 2.0 * h * sum(parts[:-1])  # embedded grid of spacing 2h
            values = np.exp(m) * fine
            errs = np.exp(m) * np.abs(fine - coarse)
            rel = np.max(errs / np.maximum(np.abs(values), 1e-300))
            if rel <= self.rel_tol or h <= _H_LATTICE + 1e-12:
                return values, errs
            self._refine()


def _shifted_log_weight(lam: float, alpha: float):
    lg = float(gammaln(alpha))

    def f(t):
        return -lam * t + (alpha - 1.0) * np.log(t) - lg

    return f


def _log_kernel_log_weight(s: float, lam: float):
    def f(t):
        v = np.log(t)
        h = np.array([_h_log(s, vi) for vi in np.atleast_1d(v)])
        return -lam * t + (s - 1.0) * np.atleast_1d(v) + h

    return f


def _heat_bounds(n, s_or_alpha, lam, r_lo, r_hi, has_h):
    decay = lam - 1.0 if has_h else lam
    t_hi = (math.sqrt(decay) * r_hi + 60.0) / decay
    t_lo = r_lo * r_lo / 300.0
    v_lo = min(math.log(t_lo), -3.0)
    v_hi = min(max(math.log(t_hi), 3.0), 10.0)
    return v_lo, v_hi


@lru_cache(maxsize=64)
def _cached_shifted_evaluator(n, lam, alpha, v_lo, v_hi, rel_tol):
    return _HeatEvaluator(n, _shifted_log_weight(lam, alpha), v_lo, v_hi, rel_tol)


@lru_cache(maxsize=64)
def _cached_log_evaluator(n, s, lam, v_lo, v_hi, rel_tol):
    return _HeatEvaluator(n, _log_kernel_log_weight(s, lam), v_lo, v_hi, rel_tol)


def _shifted_evaluator(n, lam, alpha, r_lo, r_hi, rel_tol=1e-10):
    v_lo, v_hi = _heat_bounds(n, alpha, lam, r_lo, r_hi, has_h=False)
    return _cached_shifted_evaluator(n, lam, alpha, _snap(v_lo), _snap(v_hi), rel_tol)


def _log_evaluator(params: KernelParams, r_lo, r_hi, rel_tol=1e-9):
    v_lo, v_hi = _heat_bounds(params.n, params.s, params.lam, r_lo, r_hi, has_h=True)
    return _cached_log_evaluator(
        params.n, params.s, params.lam, _snap(v_lo), _snap(v_hi), rel_tol
    )


# ---------------------------------------------------------------------------
# Public kernel evaluations
# ---------------------------------------------------------------------------


def bessel_kernel_Gs(n: int, s: float, r, rel_tol: float = 1e-9):
    """Classical Bessel kernel G_s = (1/Gamma(s)) int e^{-t} t^{s-1} p_t dt."""
    if s <= 0.0:
        raise ValueError("order s must be positive")
    r_arr = np.atleast_1d(np.asarray(r, dtype=float))
    scalar = np.asarray(r).ndim == 0
    if np.any(r_arr < 0.0):
        raise ValueError("radius must be >= 0")
    if np.any(r_arr == 0.0):
        if n >= 2.0 * s:
            raise SingularityError("G_s is singular at r = 0 when n >= 2s")
    out = np.empty_like(r_arr)
    zero = r_arr == 0.0
    if np.any(zero):
        out[zero] = math.exp(
            gammaln(s - 0.5 * n) - gammaln(s) - 0.5 * n * math.log(4.0 * math.pi)
        )
    if np.any(~zero):
        rp = r_arr[~zero]
        ev = _HeatEvaluator(
            n,
            _shifted_log_weight(1.0, s),
            *_heat_bounds(n, s, 1.0, float(np.min(rp)), float(np.max(rp)), False),
            rel_tol=rel_tol,
        )
        out[~zero] = ev(rp)[0]
    return float(out[0]) if scalar else out


def shifted_kernel(
    n: int,
    lam: float,
    alpha: float,
    r,
    route: str = "auto",
    rel_tol: float = 1e-9,
):
    """Shifted Bessel kernel G^lam_alpha at radius r.

    ``route`` is one of ``heat``, ``hankel`` or ``auto`` (heat for r <= 1,
    oscillatory beyond).  If the oscillatory tail acceleration fails the heat
    route is used instead and a warning is emitted.
    """
    if alpha <= 0.0:
        raise ValueError("alpha must be positive")
    if lam <= 1.0:
        raise ValueError("lambda must exceed 1")
    r_arr = np.atleast_1d(np.asarray(r, dtype=float))
    scalar = np.asarray(r).ndim == 0
    if np.any(r_arr < 0.0):
        raise ValueError("radius must be >= 0")
    if np.any((r_arr == 0.0) & (alpha <= 0.5 * n)):
        raise SingularityError("G^lam_alpha is singular at r = 0 when alpha <= n/2")
    out = np.empty_like(r_arr)
    zero = r_arr == 0.0
    if np.any(zero):
        out[zero] = math.exp(
            gammaln(alpha - 0.5 * n)
            - gammaln(alpha)
            + (0.5 * n - alpha) * math.log(lam)
            - 0.5 * n * math.log(4.0 * math.pi)
        )
    pos = ~zero
    if np.any(pos):
        rp = r_arr[pos]
        if route not in ("auto", "heat", "hankel"):
            raise ValueError(f"unknown route {route!r}")
        vals = np.empty_like(rp)
        if route == "hankel":
            hankel_mask = np.ones(rp.shape, dtype=bool)
        elif route == "heat":
            hankel_mask = np.zeros(rp.shape, dtype=bool)
        else:
            hankel_mask = (rp > 1.0) & (rp <= HANKEL_MAX_RADIUS)
        if np.any(~hankel_mask):
            sub = rp[~hankel_mask]
            ev = _shifted_evaluator(
                n, lam, alpha, float(np.min(sub)), float(np.max(sub)), rel_tol
            )
            vals[~hankel_mask] = ev(sub)[0]
        for idx in np.nonzero(hankel_mask)[0]:
            vals[idx] = _shifted_hankel(n, lam, alpha, rp[idx], rel_tol)
        out[pos] = vals
    return float(out[0]) if scalar else out


def _far_field_scale(n, lam, r):
    if r <= 3.0:
        return 1.0
    rate = math.sqrt(lam - 1.0)
    pref = (lam - 1.0) ** (0.25 * (n - 3.0)) / (
        2.0 ** (0.5 * (n + 1.0)) * math.pi ** (0.5 * (n - 1.0))
    )
    return pref * r ** (-0.5 * (n - 1.0)) * math.exp(-rate * r)


def _hankel_spec(n, lam, r, rel_tol):
    scale = _far_field_scale(n, lam, r)
    return QuadratureSpec(
        rel_tol=min(rel_tol, 1e-10),
        abs_tol=max(scale * rel_tol * 0.05, 1e-280),
        max_levels=16,
    )


def _shifted_hankel(n, lam, alpha, r, rel_tol):
    def g(rho):
        return (lam + 4.0 * math.pi**2 * rho * rho) ** (-alpha)

    try:
        res = integrate_oscillatory_hankel(
            g, 0.5 * n - 1.0, 2.0 * math.pi * r, _hankel_spec(n, lam, r, rel_tol)
        )
        return res.value
    except AccelerationError:
        warnings.warn(
            "oscillatory route failed to converge; falling back to heat route",
            RuntimeWarning,
            stacklevel=2,
        )
        ev = _shifted_evaluator(n, lam, alpha, r, r, rel_tol)
        return float(ev(np.array([r]))[0][0])


def log_kernel_origin_value(params: KernelParams) -> float:
    """K^lam_{s+ln}(0) in the continuous regime n < 2s (explicit p-integral)."""
    if params.regime != "continuous":
        raise SingularityError(
            "K^lam_{s+ln}(0) is finite only in the continuous regime n < 2s"
        )
    n, s, lam = params.n, params.s, params.lam
    ln_lam = math.log(lam)

    def f(p):
        return np.exp(
            gammaln(s + p - 0.5 * n) - gammaln(s + p) + (0.5 * n - s - p) * ln_lam
        )

    res = integrate(f, 0.0, math.inf, QuadratureSpec(rel_tol=1e-11, abs_tol=1e-300))
    return (4.0 * math.pi) ** (-0.5 * n) * res.value


def log_bessel_kernel(
    params: KernelParams,
    r,
    route: str = "auto",
    rel_tol: float = 1e-8,
    order: str = "t_first",
):
    """Logarithmic Bessel kernel K^lam_{s+ln} at radius r.

    ``order`` selects the integration order of the heat route: ``t_first``
    (default, vectorized) or ``alpha_first`` (the defining representation
    int_s^A G^lam_alpha dalpha, kept as a cross-check; the order-integral is
    truncated at A = s + max(50, ln(1/abs_tol)/ln lam) whose tail is bounded
    by lam^{-A}/ln lam).
    """
    r_arr = np.atleast_1d(np.asarray(r, dtype=float))
    scalar = np.asarray(r).ndim == 0
    if np.any(r_arr < 0.0):
        raise ValueError("radius must be >= 0")
    if np.any(r_arr == 0.0) and params.regime != "continuous":
        raise SingularityError(
            f"K^lam_{{s+ln}} is singular at r = 0 in the {params.regime} regime"
        )
    if route == "hankel" and params.s < HANKEL_MIN_S:
        raise ValueError(f"oscillatory route supports s >= {HANKEL_MIN_S}")
    out = np.empty_like(r_arr)
    zero = r_arr == 0.0
    if np.any(zero):
        out[zero] = log_kernel_origin_value(params)
    pos = ~zero
    if np.any(pos):
        rp = r_arr[pos]
        if order == "alpha_first":
            out[pos] = [_log_kernel_alpha_first(params, rr, rel_tol) for rr in rp]
        else:
            if route not in ("auto", "heat", "hankel", "laplace"):
                raise ValueError(f"unknown route {route!r}")
            vals = np.empty_like(rp)
            if route == "hankel":
                mask = np.ones(rp.shape, dtype=bool)
            elif route in ("heat", "laplace"):
                mask = np.zeros(rp.shape, dtype=bool)
            else:
                mask = (rp > 1.0) & (rp <= HANKEL_MAX_RADIUS) & (params.s >= HANKEL_MIN_S)
            if route == "laplace":
                vals[:] = [_log_kernel_laplace(params, rr, rel_tol) for rr in rp]
            else:
                if np.any(~mask):
                    sub = rp[~mask]
                    ev = _log_evaluator(
                        params, float(np.min(sub)), float(np.max(sub)), rel_tol
                    )
                    vals[~mask] = ev(sub)[0]
                for idx in np.nonzero(mask)[0]:
                    vals[idx] = _log_kernel_hankel(params, rp[idx], rel_tol)
            out[pos] = vals
    return float(out[0]) if scalar else out


def _log_kernel_hankel(params: KernelParams, r: float, rel_tol: float) -> float:
    n, s, lam = params.n, params.s, params.lam

    def g(rho):
        u = lam + 4.0 * math.pi**2 * rho * rho
        return u ** (-s) / np.log(u)

    try:
        res = integrate_oscillatory_hankel(
            g, 0.5 * n - 1.0, 2.0 * math.pi * r, _hankel_spec(n, lam, r, rel_tol)
        )
        return res.value
    except AccelerationError:
        warnings.warn(
            "oscillatory route failed to converge; falling back to heat route",
            RuntimeWarning,
            stacklevel=2,
        )
        ev = _log_evaluator(params, r, r, rel_tol)
        return float(ev(np.array([r]))[0][0])


def _alpha_cut(params: KernelParams, abs_tol: float) -> float:
    return params.s + max(50.0, math.log(1.0 / abs_tol) / math.log(params.lam))


def _log_kernel_alpha_first(params: KernelParams, r: float, rel_tol: float) -> float:
    n, s, lam = params.n, params.s, params.lam
    a_hi = _alpha_cut(params, 1e-16)

    def g(alpha):
        return shifted_kernel(n, lam, float(alpha), r, route="heat", rel_tol=1e-10)

    spec = QuadratureSpec(rel_tol=max(rel_tol, 1e-9), abs_tol=1e-300, max_levels=14)
    res = integrate(g, s, a_hi, spec)
    return res.value


def _log_kernel_laplace(params: KernelParams, r: float, rel_tol: float) -> float:
    """Concentration approximation int_s^A lam^{-a} p_{a/lam}(r) da.

    Diagnostic route only: accurate to O(1/alpha) per the large-order
    Gaussian approximation, so the error is O(1/s) near the lower limit.
    """
    n, s, lam = params.n, params.s, params.lam
    a_hi = _alpha_cut(params, 1e-16)
    ln_lam = math.log(lam)

    def g(a):
        t = a / lam
        return np.exp(-a * ln_lam) * (4.0 * math.pi * t) ** (-0.5 * n) * np.exp(
            -(r * r) / (4.0 * t)
        )

    res = integrate(g, s, a_hi, QuadratureSpec(rel_tol=1e-10, abs_tol=1e-300))
    return res.value


def laplace_approx_shifted(n: int, lam: float, alpha: float, r) -> float:
    """Large-order Gaussian approximation lam^{-alpha} p_{alpha/lam}(r)."""
    if alpha < 10.0:
        raise ValueError("laplace approximation requires alpha >= 10")
    t = alpha / lam
    r = np.asarray(r, dtype=float)
    out = lam ** (-alpha) * (4.0 * math.pi * t) ** (-0.5 * n) * np.exp(
        -(r * r) / (4.0 * t)
    )
    return float(out) if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# Profiles
# ---------------------------------------------------------------------------


@dataclass
class RadialProfile:
    """Tabulated kernel values on a log-spaced radius grid."""

    params: KernelParams
    radii: np.ndarray
    values: np.ndarray
    errs: np.ndarray
    route: str

    def __post_init__(self):
        if np.any(np.diff(self.radii) <= 0.0):
            raise ValueError("radii must be strictly increasing")

    @property
    def complete(self) -> bool:
        return bool(np.all(np.isfinite(self.values)))

    def write_csv(self, path, header_comment: str | None = None) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            if header_comment:
                fh.write(header_comment.rstrip("\n") + "\n")
            fh.write("r,value,err,route\n")
            for r, v, e in zip(self.radii, self.values, self.errs):
                fh.write(f"{r:.17g},{v:.17g},{e:.17g},{self.route}\n")

    @classmethod
    def read_csv(cls, path, params: KernelParams) -> "RadialProfile":
        radii, values, errs, route = [], [], [], "heat"
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#") or line.startswith("r,"):
                    continue
                r, v, e, route = line.split(",")
                radii.append(float(r))
                values.append(float(v))
                errs.append(float(e))
        return cls(params, np.array(radii), np.array(values), np.array(errs), route)


def tabulate_profile(
    params: KernelParams,
    r_min: float,
    r_max: float,
    points: int,
    route: str = "auto",
) -> RadialProfile:
    """Tabulate K^lam_{s+ln} on a log-spaced grid of ``points`` radii."""
    if not (0.0 < r_min < r_max):
        raise ValueError("need 0 < r_min < r_max")
    if points < 2:
        raise ValueError("points must be >= 2")
    radii = np.geomspace(r_min, r_max, points)
    values = np.full(points, np.nan)
    errs = np.full(points, np.inf)
    if route in ("heat", "auto", "hankel", "laplace"):
        if route in ("heat", "auto"):
            if route == "auto":
                mask = radii <= 1.0
            else:
                mask = np.ones(points, dtype=bool)
            far = (radii > HANKEL_MAX_RADIUS) | (params.s < HANKEL_MIN_S)
            mask = mask | (far & (route == "auto"))
            if np.any(mask):
                ev = _log_evaluator(
                    params, float(radii[mask].min()), float(radii[mask].max())
                )
                values[mask], errs[mask] = ev(radii[mask])
        for i, r in enumerate(radii):
            if np.isfinite(values[i]):
                continue
            try:
                if route == "laplace":
                    values[i] = _log_kernel_laplace(params, r, 1e-8)
                    errs[i] = abs(values[i]) / max(params.s, 1.0) * 0.5
                else:
                    spec = _hankel_spec(params.n, params.lam, r, 1e-8)
                    res = integrate_oscillatory_hankel(
                        _log_kernel_g(params), 0.5 * params.n - 1.0,
                        2.0 * math.pi * r, spec,
                    )
                    values[i], errs[i] = res.value, res.err_estimate
            except (AccelerationError, ValueError) as exc:  # partial profile
                warnings.warn(f"profile point r={r:g} failed: {exc}", RuntimeWarning)
    else:
        raise ValueError(f"unknown route {route!r}")
    return RadialProfile(params, radii, values, errs, route)


def _log_kernel_g(params: KernelParams):
    s, lam = params.s, params.lam

    def g(rho):
        u = lam + 4.0 * math.pi**2 * rho * rho
        return u ** (-s) / np.log(u)

    return g


# ---------------------------------------------------------------------------
# Mass identities
# ---------------------------------------------------------------------------


def _radial_mass(kernel_vec, n, lam, rel_tol, split=0.25) -> QuadResult:
    surf = sphere_surface(n)

    def f(rho):
        return surf * kernel_vec(rho) * rho ** (n - 1.0)

    near = integrate(
        f, 0.0, split,
        QuadratureSpec(rel_tol=rel_tol, abs_tol=1e-300, max_levels=18,
                       transform="double_exponential"),
    )
    r_end = 30.0 / math.sqrt(lam - 1.0) + 25.0
    tail = integrate(
        f, split, r_end,
        QuadratureSpec(rel_tol=rel_tol, abs_tol=1e-300, max_levels=18),
    )
    return QuadResult(
        near.value + tail.value,
        near.err_estimate + tail.err_estimate,
        near.evaluations + tail.evaluations,
    )


def shifted_kernel_mass(n: int, lam: float, alpha: float, rel_tol=1e-8) -> QuadResult:
    """Numerical int_{R^n} G^lam_alpha, to be compared with lam^{-alpha}."""
    r_end = 30.0 / math.sqrt(lam - 1.0) + 25.0
    ev = _shifted_evaluator(n, lam, alpha, 1e-40, r_end, rel_tol=min(rel_tol, 1e-9))
    return _radial_mass(lambda rho: ev(rho)[0], n, lam, rel_tol)


def log_kernel_mass(params: KernelParams, rel_tol=1e-8) -> QuadResult:
    """Numerical int_{R^n} K^lam_{s+ln}, to compare with lam^{-s}/ln(lam)."""
    r_end = 30.0 / math.sqrt(params.lam - 1.0) + 25.0
    ev = _log_evaluator(params, 1e-40, r_end, rel_tol=min(rel_tol, 1e-9))
    return _radial_mass(lambda rho: ev(rho)[0], params.n, params.lam, rel_tol)
