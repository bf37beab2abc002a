"""High-precision propagation of the radial equation and its integral.

The solver carries the complex 3-state (H, H', I) leftward from a series
bootstrap point near the origin, where I is the running value of
int_r^0 dr / (sqrt(-r) H).  Steps are taken with an adaptive embedded
Taylor pair: each step builds the local Taylor polynomial of the solution
from the equation's own recurrence, uses the last terms of the order-p
and order-(p-2) truncations as the error estimate, and evaluates dense
output from the same polynomial.  Error is controlled per unit step, so
halving the requested tolerance roughly halves the endpoint error.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace

import mpmath as mp

from .series import ZeroA0Error, eval_H, radius_bound, taylor_coeffs
from .specfun import ComplexHP, hp

_GUARD = 15
_MAX_ORDER = 64
_MIN_ORDER = 16


class OdeintError(ValueError):
    pass


class RadiusError(OdeintError):
    """Bootstrap point outside the certified series disc."""


class SingularityApproachError(OdeintError):
    """H ran into a movable zero or pole."""


class StepUnderflowError(OdeintError):
    pass


class ChartDomainError(OdeintError):
    pass


@dataclass(frozen=True)
class SolveConfig:
    digits: int = 30
    r1: float = -1e-8
    series_order: int = 8
    rel_tol: float = 1e-12
    abs_tol: float = 1e-14
    max_step: float | None = None
    sample_count: int = 1837

    def __post_init__(self):
        if self.digits < 12:
            raise OdeintError("need at least 12 digits")
        if not self.r1 < 0:
            raise OdeintError("bootstrap point must be negative")
        if self.series_order < 2:
            raise OdeintError("bootstrap series order must be >= 2")
        if self.sample_count < 2:
            raise OdeintError("need at least two samples")
        floor = 10.0 ** (8 - self.digits)
        if self.rel_tol < floor or self.abs_tol < floor:
            raise OdeintError(
                f"tolerances below the 10^(8-digits) floor {floor:.1e}"
            )
        if self.max_step is not None and self.max_step <= 0:
            raise OdeintError("max_step must be positive")


@dataclass(frozen=True)
class Trajectory:
    """Samples (r, H, H', I) on a uniform grid, r strictly decreasing."""

    samples: tuple
    config: SolveConfig
    H0: ComplexHP


def bootstrap(H0, cfg: SolveConfig = SolveConfig()):
    """Series values (H, H', I) at the bootstrap point cfg.r1.

    I comes from the termwise integral of the truncated reciprocal
    series against (-r)^(-1/2), which is exact for the truncation.
    """
    h0 = hp(H0, cfg.digits)
    if h0.is_zero():
        raise ZeroA0Error("H(0) = 0 is outside the family")
    with mp.workdps(cfg.digits + _GUARD):
        a0 = hp(-h0.mpc, cfg.digits)
        _, rad = radius_bound(a0)
        r1 = mp.mpf(cfg.r1)
        if abs(r1) >= 1 / (2 * rad):
            raise RadiusError(
                f"|r1| = {mp.nstr(abs(r1))} outside the certified disc"
            )
        table = taylor_coeffs("numeric", cfg.series_order, a0=a0, digits=cfg.digits)
        hval, hder = eval_H(table, r1, derivative=True)
        coeff = [-table.a[0].mpc] + [table.a[k].mpc for k in range(1, cfg.series_order + 1)]
        beta = _recip(coeff, cfg.series_order)
        s = mp.sqrt(-r1)
        ival = mp.mpc(0)
        for k in range(cfg.series_order + 1):
            ival += beta[k] * (-1) ** k * s ** (2 * k + 1) / (k + mp.mpf(1) / 2)
        out = (
            ComplexHP.make(hval, cfg.digits),
            ComplexHP.make(hder, cfg.digits),
            ComplexHP.make(ival, cfg.digits),
        )
    return out


def _recip(c, p):
    w = [1 / c[0]]
    for k in range(1, p + 1):
        acc = mp.mpc(0)
        for i in range(1, k + 1):
            acc += c[i] * w[k - i]
        w.append(-w[0] * acc)
    return w


def _local_coeffs(r0, hval, hder, p):
    # Taylor coefficients of H at r0 from the multiplied-through equation
    #   r H H'' - r (H')^2 + H H' - H^3 + 1 = 0
    # order K balance is linear in h_{K+2} with factor r0 h0 (K+1)(K+2)
    h = [hval, hder]
    hh = []
    hhh = []
    aprev = mp.mpc(0)
    acur = mp.mpc(0)
    for K in range(p - 1):
        if K >= 1:
            aprev = acur
            acur = mp.mpc(0)
            for i in range(K):
                j = K - 1 - i
                acur += h[i] * ((j + 1) * (j + 2) * h[j + 2])
                acur -= ((i + 1) * h[i + 1]) * ((j + 1) * h[j + 1])
        hh.append(mp.fsum(h[i] * h[K - i] for i in range(K + 1)))
        hhh.append(mp.fsum(hh[i] * h[K - i] for i in range(K + 1)))
        bterm = mp.fsum(h[i] * ((K - i + 1) * h[K - i + 1]) for i in range(K + 1))
        partial = mp.mpc(0)
        for i in range(1, K + 1):
            j = K - i
            partial += h[i] * ((j + 1) * (j + 2) * h[j + 2])
        for i in range(K + 1):
            partial -= ((i + 1) * h[i + 1]) * ((K - i + 1) * h[K - i + 1])
        rhs = -(r0 * partial + acur + bterm - hhh[K])
        if K == 0:
            rhs -= 1
        h.append(rhs / (r0 * h[0] * (K + 1) * (K + 2)))
    return h


def _integral_coeffs(r0, h, p, i0):
    # I' = -1/(sqrt(-r) H); binomial series of (-r0 - x)^(-1/2) times 1/H
    w = _recip(h, p)
    c = [1 / mp.sqrt(-r0)]
    for k in range(1, p + 1):
        c.append(c[k - 1] * (1 - 2 * k) / (2 * k * r0))
    out = [i0]
    for k in range(p):
        g = mp.fsum(c[i] * w[k - i] for i in range(k + 1))
        out.append(-g / (k + 1))
    return out


def _peval(c, x):
    acc = c[-1]
    for k in range(len(c) - 2, -1, -1):
        acc = acc * x + c[k]
    return acc


def _peval_d(c, x):
    acc = c[-1] * (len(c) - 1)
    for k in range(len(c) - 2, 0, -1):
        acc = acc * x + c[k] * k
    return acc


def _taylor_order(cfg: SolveConfig) -> int:
    tol = min(cfg.rel_tol, cfg.abs_tol)
    return min(_MAX_ORDER, max(_MIN_ORDER, int(-1.15 * mp.log(tol)) + 2))


def integrate(H0, r_end, cfg: SolveConfig = SolveConfig()) -> Trajectory:
    """Propagate (H, H', I) from cfg.r1 down to r_end with dense samples."""
    h0c = hp(H0, cfg.digits)
    hval, hder, ival = bootstrap(H0, cfg)
    p = _taylor_order(cfg)
    with mp.workdps(cfg.digits + _GUARD):
        r1 = mp.mpf(cfg.r1)
        rend = mp.mpf(r_end)
        if not rend < r1:
            raise OdeintError("r_end must lie left of the bootstrap point")
        H, dH, I = hval.mpc, hder.mpc, ival.mpc
        rel = mp.mpf(cfg.rel_tol)
        att = mp.mpf(cfg.abs_tol)
        span = r1 - rend
        m = cfg.sample_count
        targets = [r1 + (rend - r1) * j / (m - 1) for j in range(m)]
        eps_t = span * mp.mpf(10) ** (-cfg.digits - 5)
        samples = [(r1, hval, hder, ival)]
        idx = 1
        lo_gate = 10 * att
        hi_gate = 1 / att
        r0 = r1
        step = abs(r1) / 10
        hmax_user = mp.inf if cfg.max_step is None else mp.mpf(cfg.max_step)
        while r0 > rend + eps_t:
            step = min(step, mp.mpf("0.45") * (-r0), r0 - rend, hmax_user)
            if step < mp.mpf(10) ** (-cfg.digits) * max(1, -r0):
                raise StepUnderflowError(f"step collapsed near r = {mp.nstr(r0)}")
            c = _local_coeffs(r0, H, dH, p)
            ic = _integral_coeffs(r0, c, p, I)
            est_h = abs(c[p]) * step**p + abs(c[p - 1]) * step ** (p - 1)
            est_i = abs(ic[p]) * step**p + abs(ic[p - 1]) * step ** (p - 1)
            err = max(
                est_h / (att + rel * abs(H)),
                est_i / (att + rel * max(abs(I), mp.mpf(1))),
            )
            allowed = step / span
            if err > allowed:
                shrink = mp.mpf("0.8") * (allowed / err) ** (mp.mpf(1) / (p - 1))
                step *= max(mp.mpf("0.1"), shrink)
                continue
            while idx < m and targets[idx] >= r0 - step - eps_t:
                x = targets[idx] - r0
                sh = _peval(c, x)
                if abs(sh) < lo_gate or abs(sh) > hi_gate:
                    raise SingularityApproachError(
                        f"|H| = {mp.nstr(abs(sh))} at r = {mp.nstr(targets[idx])}"
                    )
                samples.append(
                    (
                        +targets[idx],
                        ComplexHP.make(sh, cfg.digits),
                        ComplexHP.make(_peval_d(c, x), cfg.digits),
                        ComplexHP.make(_peval(ic, x), cfg.digits),
                    )
                )
                idx += 1
            x = -step
            H, dH, I = _peval(c, x), _peval_d(c, x), _peval(ic, x)
            r0 = r0 - step
            if abs(H) < lo_gate or abs(H) > hi_gate:
                raise SingularityApproachError(
                    f"|H| = {mp.nstr(abs(H))} at r = {mp.nstr(r0)}"
                )
            if err == 0:
                step *= 4
            else:
                grow = mp.mpf("0.85") * (allowed / err) ** (mp.mpf(1) / (p - 1))
                step *= min(mp.mpf(4), max(mp.mpf("0.2"), grow))
        while idx < m:
            samples.append(
                (
                    +targets[idx],
                    ComplexHP.make(H, cfg.digits),
                    ComplexHP.make(dH, cfg.digits),
                    ComplexHP.make(I, cfg.digits),
                )
            )
            idx += 1
    return Trajectory(samples=tuple(samples), config=cfg, H0=h0c)


def transform(view: str, traj: Trajectory):
    """Samples in the u or y chart.

    to_u: tau real positive with r = -(3/2)^2 tau^(4/3), u = tau^(1/3) H / 2.
    to_y: t on the ray arg t = 3pi/4 so that r = (3/4)^2 t^(4/3) reproduces
    the sample's negative r under principal powers, y = t^(1/3) H.
    """
    if view not in ("to_u", "to_y"):
        raise OdeintError(f"unknown view {view!r}")
    digits = traj.config.digits
    out = []
    with mp.workdps(digits + _GUARD):
        for r, hval, _, _ in traj.samples:
            if not r < 0:
                raise ChartDomainError("chart needs r < 0")
            if view == "to_u":
                tau = ((-r) * mp.mpf(4) / 9) ** (mp.mpf(3) / 4)
                val = tau ** (mp.mpf(1) / 3) * hval.mpc / 2
                out.append((ComplexHP.make(tau, digits), ComplexHP.make(val, digits)))
            else:
                t = mp.exp(3j * mp.pi / 4) * (16 * (-r) / mp.mpf(9)) ** (mp.mpf(3) / 4)
                val = t ** (mp.mpf(1) / 3) * hval.mpc
                out.append((ComplexHP.make(t, digits), ComplexHP.make(val, digits)))
    return tuple(out)


def residual_check(traj: Trajectory, stride: int):
    """Maximum scaled equation residual by centered differences.

    Uses only the sampled H values, so it is independent of the stepper's
    own derivative bookkeeping; the estimate carries the usual O(h^2)
    finite-difference floor.
    """
    n = len(traj.samples)
    if stride < 1 or n < 3 * stride:
        raise OdeintError("need at least 3*stride samples")
    digits = traj.config.digits
    worst = mp.mpf(0)
    with mp.workdps(digits + _GUARD):
        for j in range(stride, n - stride):
            rm, hm = traj.samples[j - stride][0], traj.samples[j - stride][1].mpc
            r0, h0 = traj.samples[j][0], traj.samples[j][1].mpc
            rp, hpv = traj.samples[j + stride][0], traj.samples[j + stride][1].mpc
            dr = (rm - rp) / 2
            d1 = (hm - hpv) / (2 * dr)
            d2 = (hm - 2 * h0 + hpv) / dr**2
            t1 = d1 * d1 / h0
            t2 = d1 / r0
            t3 = (h0 * h0 - 1 / h0) / r0
            res = abs(d2 - t1 + t2 - t3)
            scale = 1 + abs(d2) + abs(t1) + abs(t2) + abs(t3)
            worst = max(worst, res / scale)
    return +worst


def trajectory_csv(traj: Trajectory) -> str:
    digits = traj.config.digits
    lines = ["r,re_H,im_H,re_dH,im_dH,re_I,im_I"]
    with mp.workdps(digits + 5):
        for r, hval, hder, ival in traj.samples:
            cells = [mp.nstr(r, digits)]
            for v in (hval, hder, ival):
                cells.append(mp.nstr(v.re, digits))
                cells.append(mp.nstr(v.im, digits))
            lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def trajectory_meta_json(traj: Trajectory) -> str:
    cfg = traj.config
    meta = {
        "H0": {"re": mp.nstr(traj.H0.re, cfg.digits), "im": mp.nstr(traj.H0.im, cfg.digits)},
        "config": {
            "digits": cfg.digits,
            "r1": repr(cfg.r1),
            "series_order": cfg.series_order,
            "rel_tol": repr(cfg.rel_tol),
            "abs_tol": repr(cfg.abs_tol),
            "max_step": None if cfg.max_step is None else repr(cfg.max_step),
            "sample_count": cfg.sample_count,
        },
        "samples": len(traj.samples),
        "r_end": mp.nstr(traj.samples[-1][0], cfg.digits),
    }
    return json.dumps(meta, indent=2, sort_keys=True)


def subsample(traj: Trajectory, lo: float, hi: float) -> Trajectory:
    """Restriction to samples with lo <= r <= hi."""
    kept = tuple(s for s in traj.samples if lo <= s[0] <= hi)
    if len(kept) < 2:
        raise OdeintError("window keeps fewer than two samples")
    return replace(traj, samples=kept)
