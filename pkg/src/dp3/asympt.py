"""Asymptotic charts for the radial Hazzidakis function and its integral.

Charts covered, with the family tags used by :class:`AsymptoticEval`:

``reg_H`` / ``reg_I``
    Oscillatory large-``|r|`` behaviour of solutions whose twist exponent
    ``nu1`` lies in the regular strip ``|Im nu1| < 1/6``::

        H(r)   = 1 - sqrt(6 nu1) cos(psi(r)) / (-3 r)^(1/4)
        psi(r) = 2 sqrt(-3 r) + (nu1/2) ln(-3 r) + nu1 ln 24 + 3 pi/4
                 - (3 pi i/2) nu1 - (i/2) ln(2 pi)
                 + i ln(g1 sqrt(nu1) Gamma(i nu1))
        I(r)   = 2 sqrt(-r) + 2 nu1 ln(2 + sqrt 3) + i ln C(H0) + E(r)
        E(r)   = (sqrt(6 nu1)/2) sin(psi(r)) / (-3 r)^(1/4)

    with ``C(H0) = (w H0 - wb)/(w - H0 wb)``, ``w = exp(2 pi i/3)``,
    ``wb = conj(w)``.  Evaluation is permitted up to ``|Im nu1| < 1/2``
    (integer shifts bring any value into that window); points beyond the
    proved strip are flagged, never rejected.

``sing_H`` / ``sing_I``
    Pole-bearing large-``|r|`` behaviour for ``Im nu1 in (-1, 0)``,
    ``Im nu1 != -1/2``::

        H(r)    = 1 - 3 / (2 sin^2(psi^(r)/2))
        psi^(r) = 2 sqrt(-3 r) + (nu1 + i/2) ln(24 sqrt(-3 r)) - pi/4
                  - (3 pi i/2) nu1 - (i/2) ln(2 pi) + i ln(g1 Gamma(i nu1))
        I(r)    = 2 sqrt(-r) + (2 nu1 + i) ln(2 + sqrt 3) + pi (2 k - 1)
                  + i ln C(H0) + EE(r)
        EE(r)   = -i ln( sin(psi^/2 + theta0) / sin(psi^/2 - theta0) )

    where ``theta0 = -pi/2 + (i/2) ln(2 + sqrt 3)`` and the logarithm in
    ``EE`` is continued along the sweep through a
    :class:`~dp3.specfun.BranchTracker`.  Because ``sin^2 theta0 = 3/2``
    the chart factors exactly::

        H = sin(psi^/2 - theta0) sin(psi^/2 + theta0) / sin^2(psi^/2)

``small_tau_u`` / ``small_tau_phi``
    Power-type behaviour of the self-similar pair ``(u, phi)`` as
    ``tau -> +0`` for general formal charge ``a``, built from the
    connection data ``g11..g22`` through the factors ``p_k``, ``chi_k``,
    ``varpi_k``.

``large_tau_u`` / ``large_tau_phi``
    Trigonometric large-``tau`` behaviour of ``(u, phi)`` for general
    ``a`` in the strip ``|Re(nu+ + 1... )| < 1/6`` of the exponent
    ``nu_plus = (i/2 pi) ln(g11 g22)`` (integer lattice shifts allowed),
    including the subleading ``sinh`` envelope of ``phi``.

``sing2010`` / ``re_half``
    The companion pole-bearing large-``tau`` charts: the ``sin^2`` form
    for ``Re nu_plus in (0,1) - {1/2}``, the pole/zero position ladders
    ``tau_m``, and the boundary family ``Re nu_plus = 1/2`` where
    ``g11 g22`` is negative real.

``tzitzeica``
    The self-dual reduction for real ``H(0) > 0``, whose exponential
    solution oscillates with amplitude exponent ``sqrt(ln g3 / 2 pi)``.

The module also generates the complete large-``tau`` correction series
``u ~ (eps_b^(2/3)/2) tau^(1/3) sum a_{k,j} tau^(-k/3) w^j`` to any order
by exact polynomial algebra over ``Q(omega)[kappa, alpha]`` with
``omega^2 = -3``, ``kappa = nu_plus``, ``alpha = 2 i sqrt(3) a``, and the
reciprocal series giving the ``b_{k,j}`` of ``b/u``.  Printed closed
forms for ``k <= 6`` are kept separately for cross-validation.

Landmark quantities of the singular chart (position of the last zero of
``Re H``, crest depth, stringer lines through maxima and through the
descending legs) are computed from the chart itself.  Blind sampling is
useless that far out: near the last zero the chart completes about
``0.7 sqrt(-3 r)`` oscillations per decade (10^12 of them) while the
negative spikes of ``Re H`` occupy a vanishing fraction of each period.
Instead the zero is pinned exactly.  Writing ``psi^/2 = x + i y``,

    Re 1/sin^2(x + i y) = 2 (1 - u A) / (A - u)^2,
    u = cos 2x,  A = cosh 2y,

whose maximum over ``u in [-1, 1]`` falls to the threshold ``2/3``
(where ``Re H`` can no longer reach zero) exactly when ``A = 2``, i.e.
``y = (1/2) ln(2 + sqrt 3) = Im theta0``.  Since ``y`` depends on ``r``
only through ``ln(24 sqrt(-3 r))`` this gives a closed-form envelope
edge; the last passage of ``x`` through ``pi/2 (mod pi)`` before that
edge brackets the last zero, and one bisection of ``Re H`` finishes the
job.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from mpmath import mp, workdps

from dp3.monodromy import ManifoldPoint, MonodromyPoint, Nu1, from_H0, lift, nu1
from dp3.specfun import (
    DEFAULT_DIGITS,
    BranchTracker,
    ComplexHP,
    continuous_log,
    gamma_complex,
    hp,
)

_GUARD = 15


class AsymptoticsError(ValueError):
    """Base class for failures of the asymptotic charts."""


class StripViolationError(AsymptoticsError):
    """Exponent sits on a strip boundary where no chart applies."""


class ParameterError(AsymptoticsError):
    """Input data violate the admissibility conditions of a chart."""


class WindowError(AsymptoticsError):
    """A fitting window contains too few usable samples."""


class RootSearchError(AsymptoticsError):
    """A landmark root does not exist or escapes the search horizon."""


# ---------------------------------------------------------------------------
# shared numeric helpers


def _to_mpc(value):
    if isinstance(value, ComplexHP):
        return value.mpc
    if isinstance(value, Nu1):
        return value.value.mpc
    if isinstance(value, Fraction):
        return mp.mpf(value.numerator) / value.denominator
    return mp.mpc(value)


def _digits_of(explicit, *values) -> int:
    if explicit is not None:
        return int(explicit)
    best = 0
    for v in values:
        if isinstance(v, ComplexHP):
            best = max(best, v.digits)
        elif isinstance(v, Nu1):
            best = max(best, v.value.digits)
    return best or DEFAULT_DIGITS


def _gamma(z, digits: int):
    return gamma_complex(hp(z, digits)).mpc


def _neg_real_r(r) -> mp.mpf:
    rm = _to_mpc(r)
    if abs(rm.imag) > 0:
        raise ParameterError("r must be real")
    rr = rm.real
    if rr >= 0:
        raise ParameterError("r must be negative")
    return rr


def _log_gold():
    return mp.log(2 + mp.sqrt(3))


def _log_C(h0m):
    w = mp.expjpi(mp.mpf(2) / 3)
    den = w - h0m * mp.conj(w)
    if den == 0:
        raise ParameterError("C(H0) has a pole at this H0")
    return mp.log((w * h0m - mp.conj(w)) / den)


def theta_zero(digits: int = DEFAULT_DIGITS) -> ComplexHP:
    """Corner phase ``theta0 = -pi/2 + (i/2) ln(2 + sqrt 3)``."""
    with workdps(digits + _GUARD):
        return hp(-mp.pi / 2 + mp.mpc(0, 1) / 2 * _log_gold(), digits)


def _strip_normalize(nu, family: str, digits: int):
    """Shift ``nu`` by an integer multiple of ``i`` into the chart strip.

    Regular chart: ``Im nu in (-1/2, 1/2]``, boundary ``|Im nu| = 1/2``
    rejected.  Singular chart: ``Im nu in (-1, 0)``, integer and
    half-integer imaginary parts rejected.
    """
    tol = mp.mpf(10) ** (-(digits - 6))
    flags = []
    im = nu.imag
    if family == "regular":
        n = int(mp.ceil(im - mp.mpf(1) / 2))
        if n:
            nu = mp.mpc(nu.real, im - n)
            flags.append("shifted-strip")
        if abs(abs(nu.imag) - mp.mpf(1) / 2) < tol:
            raise StripViolationError("Im nu1 = 1/2 sits between the charts")
        if abs(nu.imag) >= mp.mpf(1) / 6:
            flags.append("outside-validity-strip")
    elif family == "singular":
        n = -int(mp.ceil(im))
        if n:
            nu = mp.mpc(nu.real, im + n)
            flags.append("shifted-strip")
        if abs(nu.imag) < tol or abs(nu.imag + 1) < tol:
            raise StripViolationError("integer Im nu1: pole chart undefined")
        if abs(nu.imag + mp.mpf(1) / 2) < tol:
            raise StripViolationError("Im nu1 = -1/2 is excluded from the pole chart")
    else:
        raise AsymptoticsError(f"unknown family {family!r}")
    return nu, tuple(flags)


def _psi_regular(rr, nu, g1m, digits: int):
    # rr = -3 r > 0
    return (
        2 * mp.sqrt(rr)
        + nu / 2 * mp.log(rr)
        + nu * mp.log(24)
        + 3 * mp.pi / 4
        - 3 * mp.pi * mp.mpc(0, 1) / 2 * nu
        - mp.mpc(0, 1) / 2 * mp.log(2 * mp.pi)
        + mp.mpc(0, 1) * mp.log(g1m * mp.sqrt(nu) * _gamma(mp.mpc(0, 1) * nu, digits))
    )


def _psi_singular_const(nu, g1m, digits: int):
    return (
        -mp.pi / 4
        - 3 * mp.pi * mp.mpc(0, 1) / 2 * nu
        - mp.mpc(0, 1) / 2 * mp.log(2 * mp.pi)
        + mp.mpc(0, 1) * mp.log(g1m * _gamma(mp.mpc(0, 1) * nu, digits))
    )


def _psi_singular(rr, nu, g1m, digits: int):
    return (
        2 * mp.sqrt(rr)
        + (nu + mp.mpc(0, 1) / 2) * (mp.log(24) + mp.log(rr) / 2)
        + _psi_singular_const(nu, g1m, digits)
    )


# ---------------------------------------------------------------------------
# evaluation records


@dataclass(frozen=True)
class AsymptoticEval:
    """One chart evaluation.

    ``point`` is the abscissa (``r`` or ``tau``), ``value`` the chart
    value, ``phase`` the oscillation phase when the chart has one,
    ``family`` the chart tag, ``k`` the branch integer of the chart,
    ``branch_state`` the tracker continuing a logarithm along a sweep,
    and ``flags`` any advisory notes raised during evaluation.
    """

    point: ComplexHP
    value: ComplexHP
    phase: ComplexHP | None
    family: str
    k: int = 0
    branch_state: BranchTracker | None = None
    flags: tuple = ()


@dataclass(frozen=True)
class GeneralAParams:
    """Data of a general-charge chart: formal charge ``a``, power
    exponent ``rho``, lifted connection data, twist exponent
    ``nu_plus`` and the scale ``eps_b`` (the sign ``eps`` is fixed at
    ``+1``, so ``eps_b`` doubles as ``b``)."""

    a: ComplexHP
    rho: ComplexHP
    monodromy: ManifoldPoint
    nu_plus: ComplexHP
    eps_b: ComplexHP

    def violations(self, digits: int | None = None) -> tuple:
        d = _digits_of(digits, self.a, self.rho, self.nu_plus, self.eps_b)
        out = []
        with workdps(d + _GUARD):
            am = self.a.mpc
            rhom = self.rho.mpc
            tol = mp.mpf(10) ** (-(d - 8))
            g11 = self.monodromy.g11.mpc
            g12 = self.monodromy.g12.mpc
            g21 = self.monodromy.g21.mpc
            g22 = self.monodromy.g22.mpc
            if abs(am.imag) >= 1:
                out.append("|Im a| must be < 1")
            if abs(rhom) < tol:
                out.append("rho must be nonzero")
            elif abs(rhom.real) >= mp.mpf(1) / 2:
                out.append("|Re rho| must be < 1/2")
            if abs(g11 * g22) < tol:
                out.append("g11 g22 must be nonzero")
            if abs(self.eps_b.mpc) < tol:
                out.append("eps_b must be nonzero")
            s00 = self.monodromy.s00.mpc
            lhs = mp.cos(2 * mp.pi * rhom)
            if abs(lhs + mp.mpc(0, 1) * s00 / 2) > tol:
                out.append("rho incompatible with s00")
            s0i = self.monodromy.s0inf.mpc
            s1i = self.monodromy.s1inf.mpc
            rhs = mp.cosh(mp.pi * am) + s0i * s1i * mp.exp(mp.pi * am) / 2
            if abs(lhs - rhs) > tol:
                out.append("rho and a incompatible with the Stokes data")
            if abs(g11 * g22 - mp.exp(-2 * mp.pi * mp.mpc(0, 1) * self.nu_plus.mpc)) > tol * (
                1 + abs(g11 * g22)
            ):
                out.append("nu_plus incompatible with g11 g22")
        return tuple(out)

    def validate(self, digits: int | None = None) -> None:
        bad = self.violations(digits)
        if bad:
            raise ParameterError("; ".join(bad))


def nu_plus_from_point(point, digits: int | None = None) -> ComplexHP:
    """Lattice representative of ``(i/2 pi) ln(g11 g22)`` with real part
    in ``(0, 1)``; raises when the real part is forced onto the lattice
    itself (``g11 g22`` positive real)."""
    if isinstance(point, ManifoldPoint):
        d = _digits_of(digits, point.g11)
        with workdps(d + _GUARD):
            prod = point.g11.mpc * point.g22.mpc
    elif isinstance(point, MonodromyPoint):
        d = _digits_of(digits, point.g3)
        with workdps(d + _GUARD):
            prod = point.g3.mpc
    else:
        d = _digits_of(digits)
        prod = None
    with workdps(d + _GUARD):
        if prod is None:
            prod = _to_mpc(point)
        if prod == 0:
            raise ParameterError("g11 g22 must be nonzero")
        base = mp.mpc(0, 1) / (2 * mp.pi) * mp.log(prod)
        shift = -int(mp.floor(base.real))
        val = base + shift
        tol = mp.mpf(10) ** (-(d - 6))
        if val.real < tol or val.real > 1 - tol:
            raise StripViolationError(
                "Re nu_plus falls on the lattice boundary (g11 g22 positive real)"
            )
        return hp(val, d)


def params_from_H0(H0, digits: int | None = None, convention: str = "regular") -> GeneralAParams:
    """Chart data of the zero-charge family attached to ``H(0) = H0``."""
    d = _digits_of(digits, H0 if isinstance(H0, ComplexHP) else None)
    base = from_H0(H0, digits=d)
    mani = lift(base)
    with workdps(d + _GUARD):
        if convention in ("regular", "singular"):
            nup = nu1(H0, convention=convention, digits=d).kappa
        elif convention == "lattice":
            nup = nu_plus_from_point(mani, digits=d)
        else:
            raise AsymptoticsError(f"unknown convention {convention!r}")
        third = mp.mpf(1) / 6
        return GeneralAParams(
            a=hp(0, d),
            rho=hp(third, d),
            monodromy=mani,
            nu_plus=nup,
            eps_b=hp(1, d),
        )


# ---------------------------------------------------------------------------
# oscillatory charts in r


def H_large(r, nu1_value, g1, family: str, digits: int | None = None) -> AsymptoticEval:
    """Large-``|r|`` chart for ``H`` itself.

    ``family`` selects the regular (cosine) or singular (``1/sin^2``)
    form; ``nu1_value`` may be a :class:`~dp3.monodromy.Nu1`, а
    :class:`~dp3.specfun.ComplexHP` or a plain complex number, and is
    shifted into the chart strip if needed.
    """
    d = _digits_of(digits, nu1_value, g1)
    rr_in = _neg_real_r(r)
    with workdps(d + _GUARD):
        nu = mp.mpc(_to_mpc(nu1_value))
        g1m = _to_mpc(g1)
        rr = -3 * rr_in
        nu, flags = _strip_normalize(nu, family, d)
        if family == "regular":
            if abs(nu) < mp.mpf(10) ** (-(d - 4)):
                return AsymptoticEval(
                    point=hp(rr_in, d),
                    value=hp(1, d),
                    phase=None,
                    family="reg_H",
                    flags=flags + ("zero-nu",),
                )
            psi = _psi_regular(rr, nu, g1m, d)
            val = 1 - mp.sqrt(6) * mp.sqrt(nu) * mp.cos(psi) / rr ** mp.mpf("0.25")
            return AsymptoticEval(
                point=hp(rr_in, d), value=hp(val, d), phase=hp(psi, d),
                family="reg_H", flags=flags,
            )
        psi = _psi_singular(rr, nu, g1m, d)
        s = mp.sin(psi / 2)
        if s == 0:
            raise AsymptoticsError("pole of the singular chart at this r")
        if abs(s) < mp.mpf(10) ** (-mp.mpf(d) / 2):
            flags = flags + ("near-pole",)
        val = 1 - 3 / (2 * s * s)
        return AsymptoticEval(
            point=hp(rr_in, d), value=hp(val, d), phase=hp(psi, d),
            family="sing_H", flags=flags,
        )


def I_large(
    r,
    nu1_value,
    H0,
    family: str,
    k: int = 0,
    tracker: BranchTracker | None = None,
    digits: int | None = None,
) -> AsymptoticEval:
    """Large-``|r|`` chart for the weighted integral ``I(r)``.

    The singular family carries a logarithm that must be continued along
    the sweep: pass back ``branch_state`` from the previous evaluation
    when walking ``r`` monotonically.  With no tracker the principal
    branch starts the continuation.
    """
    d = _digits_of(digits, nu1_value)
    rr_in = _neg_real_r(r)
    point = from_H0(H0, digits=d)
    with workdps(d + _GUARD):
        nu = mp.mpc(_to_mpc(nu1_value))
        g1m = point.g1.mpc
        h0m = _to_mpc(H0)
        rr = -3 * rr_in
        nu, flags = _strip_normalize(nu, family, d)
        logc = _log_C(h0m)
        lg = _log_gold()
        if family == "regular":
            base = 2 * mp.sqrt(-rr_in) + 2 * nu * lg + mp.mpc(0, 1) * logc
            if abs(nu) < mp.mpf(10) ** (-(d - 4)):
                return AsymptoticEval(
                    point=hp(rr_in, d), value=hp(base, d), phase=None,
                    family="reg_I", k=k, flags=flags + ("zero-nu",),
                )
            psi = _psi_regular(rr, nu, g1m, d)
            env = mp.sqrt(6) * mp.sqrt(nu) / 2 * mp.sin(psi) / rr ** mp.mpf("0.25")
            return AsymptoticEval(
                point=hp(rr_in, d), value=hp(base + env, d), phase=hp(psi, d),
                family="reg_I", k=k, flags=flags,
            )
        psi = _psi_singular(rr, nu, g1m, d)
        th0 = -mp.pi / 2 + mp.mpc(0, 1) / 2 * lg
        q = mp.sin(psi / 2 + th0) / mp.sin(psi / 2 - th0)
        if tracker is None:
            state = BranchTracker.start(hp(q, d))
            acc = mp.log(q)
        else:
            state, logged = continuous_log(tracker, hp(q, d))
            acc = logged.mpc
        val = (
            2 * mp.sqrt(-rr_in)
            + (2 * nu + mp.mpc(0, 1)) * lg
            + mp.pi * (2 * k - 1)
            + mp.mpc(0, 1) * logc
            - mp.mpc(0, 1) * acc
        )
        return AsymptoticEval(
            point=hp(rr_in, d), value=hp(val, d), phase=hp(psi, d),
            family="sing_I", k=k, branch_state=state, flags=flags,
        )


def fit_k(traj, family: str, window, digits: int | None = None) -> dict:
    """Fit the branch integer ``k`` of the ``I`` chart to a trajectory.

    ``window = (lo, hi)`` restricts to samples with ``lo <= r <= hi``.
    Returns the rounded ``k`` together with the median residual after
    removing ``2 pi k`` and the sample count used.
    """
    lo, hi = window
    if lo > hi:
        lo, hi = hi, lo
    d = digits if digits is not None else traj.config.digits
    rows = [s for s in traj.samples if lo <= s[0] <= hi]
    if len(rows) < 5:
        raise WindowError(f"window [{lo}, {hi}] holds {len(rows)} samples, need 5")
    nu = nu1(traj.H0, convention=family, digits=d)
    tracker = None
    diffs = []
    with workdps(d + _GUARD):
        for rv, _hv, _dv, iv in rows:
            ev = I_large(rv, nu, traj.H0, family, k=0, tracker=tracker, digits=d)
            tracker = ev.branch_state
            diffs.append(iv.re - ev.value.re)
        diffs.sort()
        n = len(diffs)
        med = diffs[n // 2] if n % 2 else (diffs[n // 2 - 1] + diffs[n // 2]) / 2
        kfit = int(mp.nint(med / (2 * mp.pi)))
        resid = sorted(abs(x - 2 * mp.pi * kfit) for x in diffs)
        mis = resid[n // 2] if n % 2 else (resid[n // 2 - 1] + resid[n // 2]) / 2
        return {"k": kfit, "misfit": hp(mis, d), "samples": n, "nu1": nu}


# ---------------------------------------------------------------------------
# landmarks of the singular chart


def landmarks(nu1_value, g1, H0, k: int = 1, digits: int | None = None) -> dict:
    """Landmark data of the singular chart: last zero of ``Re H``, crest
    depth there, and the two stringer lines.

    The last zero is found from the chart alone (see the module
    docstring for the envelope argument): the imaginary half-phase
    ``y(r)`` crosses ``Im theta0 = (1/2) ln(2 + sqrt 3)`` at a
    closed-form envelope edge beyond which ``Re H > 0`` everywhere, and
    the preceding passage of the real half-phase through ``pi/2 (mod
    pi)`` brackets the zero for bisection.
    """
    d = _digits_of(digits, nu1_value, g1)
    horizon = mp.mpf(10) ** 30
    with workdps(d + _GUARD):
        nu = mp.mpc(_to_mpc(nu1_value))
        g1m = _to_mpc(g1)
        h0m = _to_mpc(H0)
        nu, flags = _strip_normalize(nu, "singular", d)
        const = _psi_singular_const(nu, g1m, d)
        ln24 = mp.log(24)
        # psi^(-R)/2 = x(R) + i y(R),  L = ln(24 sqrt(3 R)):
        #   x = sqrt(3R) + (Re nu / 2) L + Re const / 2
        #   y = ((Im nu + 1/2) / 2) L + Im const / 2
        a_y = (nu.imag + mp.mpf(1) / 2) / 2
        b_y = const.imag / 2
        c_x = nu.real / 2
        d_x = const.real / 2
        y_thr = _log_gold() / 2
        if a_y <= 0:
            raise RootSearchError(
                "Im nu1 <= -1/2: the envelope never decays, zeros of Re H persist"
            )
        lstar = (y_thr - b_y) / a_y
        r_env = mp.exp(2 * lstar) / 1728
        if r_env > horizon:
            raise RootSearchError(f"envelope edge beyond the search horizon |r| = {horizon}")
        if r_env < 2:
            raise RootSearchError("no oscillations below the envelope edge")

        def x_of_s(s):
            return s + c_x * (ln24 + mp.log(s)) + d_x

        def s_for(xt):
            s = xt - c_x * (ln24 + mp.log(max(xt, mp.mpf(2)))) - d_x
            if s <= 0:
                s = mp.mpf("0.5")
            for _ in range(80):
                step = (x_of_s(s) - xt) / (1 + c_x / s)
                s -= step
                if abs(step) <= abs(s) * mp.mpf(10) ** (-(d + 5)):
                    break
            return s

        def re_h(bigr):
            psi = 2 * mp.sqrt(3 * bigr) + (nu + mp.mpc(0, 1) / 2) * (
                ln24 + mp.log(3 * bigr) / 2
            ) + const
            s = mp.sin(psi / 2)
            return (1 - 3 / (2 * s * s)).real

        s_env = mp.sqrt(3 * r_env)
        nstar = int(mp.floor((x_of_s(s_env) - mp.pi / 2) / mp.pi))
        if nstar < 1:
            raise RootSearchError("no complete oscillation before the envelope edge")
        r_center = None
        for _ in range(4):
            cand = s_for(mp.pi / 2 + mp.pi * nstar) ** 2 / 3
            if re_h(cand) < 0:
                r_center = cand
                break
            nstar -= 1
            if nstar < 1:
                break
        if r_center is None:
            raise RootSearchError("no negative excursion of Re H below the envelope edge")
        r_right = s_for(mp.pi * (nstar + 1)) ** 2 / 3
        if re_h(r_right) <= 0:
            raise RootSearchError("bracketing failed on the right passage edge")
        lo, hi = r_center, r_right
        tol = mp.mpf(10) ** (-(d - 2))
        while (hi - lo) > tol * hi:
            mid = (lo + hi) / 2
            if re_h(mid) < 0:
                lo = mid
            else:
                hi = mid
        rstar = (lo + hi) / 2
        last_zero = hp(-rstar, d)
        depth = hp(-2 * (mp.sqrt(3) - 1) * mp.sqrt(rstar), d)

        logc = _log_C(h0m)
        lg = _log_gold()
        gam = mp.mpc(0, 1) * mp.log(g1m * _gamma(mp.mpc(0, 1) * nu, d))
        left_const = 2 * nu.real * lg + 2 * mp.pi * k - logc.imag
        right_const = (
            nu.real * mp.log((2 + mp.sqrt(3)) ** 2 / (2 * mp.sqrt(3)) ** 3)
            - 3 * mp.pi / 2 * nu.imag
            + mp.pi / 4
            + 2 * mp.pi * (k - 1)
            - logc.imag
            + gam.imag
        )
        slope = -nu.real

        def stringer_left(rv, _c=+left_const, _d=d):
            rm = _neg_real_r(rv)
            with workdps(_d + _GUARD):
                return hp(2 * mp.sqrt(-rm) + _c, _d)

        def stringer_right(rv, _c=+right_const, _s=+slope, _d=d):
            rm = _neg_real_r(rv)
            with workdps(_d + _GUARD):
                val = -2 * (mp.sqrt(3) - 1) * mp.sqrt(-rm) + _s * mp.log(mp.sqrt(-rm)) + _c
                return hp(val, _d)

        return {
            "last_zero": last_zero,
            "depth": depth,
            "envelope_edge": hp(-r_env, d),
            "stringer_left": stringer_left,
            "stringer_right": stringer_right,
            "left_constant": hp(left_const, d),
            "right_constant": hp(right_const, d),
            "right_slope": hp(slope, d),
            "k": k,
            "flags": flags,
        }


# ---------------------------------------------------------------------------
# small-tau chart for general charge


def p_factor(k: int, lam, params: GeneralAParams, digits: int | None = None) -> ComplexHP:
    """Gamma-quotient factor ``p_k(lambda)`` of the small-``tau`` chart."""
    if k not in (1, 2):
        raise AsymptoticsError("k must be 1 or 2")
    d = _digits_of(digits, params.a, params.eps_b)
    with workdps(d + _GUARD):
        lm = _to_mpc(lam)
        if lm == 0:
            raise ParameterError("lambda must be nonzero")
        am = params.a.mpc
        sgn = -1 if k == 1 else 1  # (-1)^k
        val = (
            mp.exp(-sgn * mp.mpc(0, 1) * mp.pi / 2 * lm)
            * (params.eps_b.mpc / 2) ** lm
            * _gamma(1 - 2 * lm, d)
            / _gamma(1 + 2 * lm, d)
            * _gamma(1 + lm - sgn * mp.mpc(0, 1) * am / 2, d)
            / lm
        )
        return hp(val, d)


def chi_factor(k: int, lam, point: ManifoldPoint, digits: int | None = None) -> ComplexHP:
    """Connection combination ``chi_k = g_1k e^(i pi (lambda + 1/4)) +
    g_2k e^(-i pi (lambda + 1/4))``."""
    if k not in (1, 2):
        raise AsymptoticsError("k must be 1 or 2")
    d = _digits_of(digits, point.g11)
    with workdps(d + _GUARD):
        lm = _to_mpc(lam)
        top = point.g11.mpc if k == 1 else point.g12.mpc
        bot = point.g21.mpc if k == 1 else point.g22.mpc
        ph = mp.exp(mp.mpc(0, 1) * mp.pi * (lm + mp.mpf(1) / 4))
        return hp(top * ph + bot / ph, d)


def varpi(k: int, lam, params: GeneralAParams, digits: int | None = None) -> ComplexHP:
    """Product ``varpi_k = p_k chi_k``."""
    d = _digits_of(digits, params.a, params.eps_b)
    with workdps(d + _GUARD):
        return hp(
            p_factor(k, lam, params, d).mpc * chi_factor(k, lam, params.monodromy, d).mpc,
            d,
        )


def small_tau(tau, params: GeneralAParams, which: str = "u", digits: int | None = None) -> AsymptoticEval:
    """Leading small-``tau`` behaviour of ``u`` or of ``e^(i phi)``.

    ``u(tau) = (tau b e^(pi a/2) / 16 pi) (varpi_1(rho) tau^(2 rho) +
    varpi_1(-rho) tau^(-2 rho)) (varpi_2(rho) tau^(2 rho) +
    varpi_2(-rho) tau^(-2 rho))`` and ``e^(i phi)`` is ``e^(i pi) 2^(i a)
    tau^(2 i a)`` times the ratio of the two brackets.
    """
    if which not in ("u", "exp_phi"):
        raise AsymptoticsError(f"unknown selector {which!r}")
    params.validate(digits)
    d = _digits_of(digits, params.a, params.eps_b)
    with workdps(d + _GUARD):
        tm = _to_mpc(tau)
        rhom = params.rho.mpc
        am = params.a.mpc
        tp = tm ** (2 * rhom)
        br1 = varpi(1, params.rho, params, d).mpc * tp + varpi(1, -rhom, params, d).mpc / tp
        br2 = varpi(2, params.rho, params, d).mpc * tp + varpi(2, -rhom, params, d).mpc / tp
        if which == "u":
            val = tm * params.eps_b.mpc * mp.exp(mp.pi * am / 2) / (16 * mp.pi) * br1 * br2
            fam = "small_tau_u"
        else:
            if br1 == 0:
                raise AsymptoticsError("phase bracket vanishes at this tau")
            val = mp.exp(mp.mpc(0, 1) * mp.pi) * 2 ** (mp.mpc(0, 1) * am) * tm ** (
                2 * mp.mpc(0, 1) * am
            ) * br2 / br1
            fam = "small_tau_phi"
        return AsymptoticEval(point=hp(tm, d), value=hp(val, d), phase=None, family=fam)


# ---------------------------------------------------------------------------
# trigonometric large-tau chart for general charge


def _theta_of(tau_m, beta):
    return 3 * mp.sqrt(3) * beta * tau_m ** (mp.mpf(2) / 3)


def _z_const(params: GeneralAParams, d: int):
    kap = params.nu_plus.mpc
    am = params.a.mpc
    g11 = params.monodromy.g11.mpc
    g12 = params.monodromy.g12.mpc
    if g11 * g12 == 0:
        raise ParameterError("g11 g12 must be nonzero for the trigonometric chart")
    return (
        mp.log(2 * mp.pi) / 2
        + mp.pi * mp.mpc(0, 1) / 2
        - 3 * mp.pi * mp.mpc(0, 1) / 2 * kap
        + mp.mpc(0, 1) * am * _log_gold()
        + kap * mp.log(12)
        - mp.log(g11 * g12 * mp.sqrt(kap) * gamma_complex(hp(kap, d)).mpc)
    )


def large_tau_general(
    tau,
    params: GeneralAParams,
    which: str = "u",
    branch: int = 0,
    include_envelope: bool = True,
    digits: int | None = None,
) -> AsymptoticEval:
    """Trigonometric large-``tau`` chart for general charge.

    With ``theta = 3 sqrt(3) beta tau^(2/3)``, ``beta = eps_b^(1/3)``,
    ``kappa = nu_plus`` and ``X = i theta + kappa ln theta + z``::

        u   = (beta^2/2) tau^(1/3) (1 + (2 sqrt(kappa) e^(3 pi i/4) /
              (3^(1/4) beta^(1/2) tau^(1/3))) cosh X)
        phi = 3 beta tau^(2/3) + 2 a ln(tau^(2/3)) - a ln(beta/4) + pi
              - 2 pi kappa + i ln(g11^2) - 2 i kappa ln(2 + sqrt 3) + E_phi
        E_phi = (2 sqrt(kappa) e^(-3 pi i/4) / (3^(3/4) beta^(1/2)
                tau^(1/3))) sinh X

    ``branch`` picks the branch of ``ln(g11^2)`` by ``2 pi i`` steps;
    ``include_envelope`` toggles ``E_phi``.  Points with ``|Re kappa| >=
    1/6`` are flagged, not rejected.
    """
    if which not in ("u", "phi"):
        raise AsymptoticsError(f"unknown selector {which!r}")
    d = _digits_of(digits, params.nu_plus, params.a)
    with workdps(d + _GUARD):
        tm = _to_mpc(tau)
        kap = params.nu_plus.mpc
        am = params.a.mpc
        beta = params.eps_b.mpc ** (mp.mpf(1) / 3)
        theta = _theta_of(tm, beta)
        z = _z_const(params, d)
        x = mp.mpc(0, 1) * theta + kap * mp.log(theta) + z
        flags = ()
        if abs(kap.real) >= mp.mpf(1) / 6:
            flags = ("outside-validity-strip",)
        if which == "u":
            amp = 2 * mp.sqrt(kap) * mp.expjpi(mp.mpf(3) / 4) / (
                3 ** mp.mpf("0.25") * mp.sqrt(beta) * tm ** (mp.mpf(1) / 3)
            )
            val = beta**2 / 2 * tm ** (mp.mpf(1) / 3) * (1 + amp * mp.cosh(x))
            return AsymptoticEval(
                point=hp(tm, d), value=hp(val, d), phase=hp(x, d),
                family="large_tau_u", k=branch, flags=flags,
            )
        g11 = params.monodromy.g11.mpc
        val = (
            3 * beta * tm ** (mp.mpf(2) / 3)
            + 2 * am * mp.log(tm ** (mp.mpf(2) / 3))
            - am * mp.log(beta / 4)
            + mp.pi
            - 2 * mp.pi * kap
            + mp.mpc(0, 1) * (mp.log(g11**2) + 2 * mp.pi * mp.mpc(0, 1) * branch)
            - 2 * mp.mpc(0, 1) * kap * _log_gold()
        )
        if include_envelope:
            val += 2 * mp.sqrt(kap) * mp.expjpi(-mp.mpf(3) / 4) / (
                3 ** mp.mpf("0.75") * mp.sqrt(beta) * tm ** (mp.mpf(1) / 3)
            ) * mp.sinh(x)
        return AsymptoticEval(
            point=hp(tm, d), value=hp(val, d), phase=hp(x, d),
            family="large_tau_phi", k=branch, flags=flags,
        )


# ---------------------------------------------------------------------------
# pole-bearing large-tau charts for general charge


def _rho1_of(params: GeneralAParams, d: int):
    g11 = params.monodromy.g11.mpc
    g22 = params.monodromy.g22.mpc
    prod = g11 * g22
    if prod == 0:
        raise ParameterError("g11 g22 must be nonzero")
    tol = mp.mpf(10) ** (-(d - 8))
    if prod.real >= 0 or abs(prod.imag) > tol * abs(prod):
        raise ParameterError("g11 g22 must be negative real on this boundary family")
    return mp.log(-prod).real / (2 * mp.pi)


def rho2_forms(params: GeneralAParams, digits: int | None = None) -> tuple:
    """Both printed forms of the second pole-ladder coefficient
    ``rho2``.

    Form one takes the principal logarithm of ``g11 g12 Gamma(1/2 + i
    rho1)``; form two rewrites it through moduli and arguments with the
    two square roots chosen so that their product is positive.  The
    imaginary parts agree exactly, the real parts modulo ``2 pi``.
    """
    d = _digits_of(digits, params.a, params.nu_plus)
    with workdps(d + _GUARD):
        am = params.a.mpc
        rho1 = _rho1_of(params, d)
        g11 = params.monodromy.g11.mpc
        g12 = params.monodromy.g12.mpc
        g21 = params.monodromy.g21.mpc
        g22 = params.monodromy.g22.mpc
        if g11 * g12 == 0 or g21 * g22 == 0:
            raise ParameterError("all four connection entries must be nonzero")
        gam = _gamma(mp.mpf(1) / 2 + mp.mpc(0, 1) * rho1, d)
        head = rho1 * mp.log(24 * mp.pi) - 3 * mp.pi / 2 + am * _log_gold()
        form1 = head - 3 * mp.pi * mp.mpc(0, 1) / 2 * rho1 - mp.mpc(0, 1) / 2 * mp.log(
            2 * mp.pi
        ) + mp.mpc(0, 1) * mp.log(g11 * g12 * gam)
        s1 = mp.sqrt(g11 * g12)
        w = g11 * g12 * g21 * g22
        s2 = mp.sqrt(w) / s1
        form2 = head - mp.arg(gam * s1 / s2) + mp.mpc(0, 1) / 2 * mp.log(
            abs(g11 * g12 / (g21 * g22))
        )
        return hp(form1, d), hp(form2, d)


def singular_tau_suite(
    arg,
    params: GeneralAParams,
    which: str,
    m: int | None = None,
    k: int = 0,
    branch: int = 0,
    form: int = 1,
    tracker: BranchTracker | None = None,
    digits: int | None = None,
):
    """Pole-bearing large-``tau`` charts and their ladders.

    ``which`` selects the quantity:

    ``"u2010"``
        ``u = (beta^2/2) tau^(1/3) (1 - 3/(2 sin^2(vt/2)))`` with phase
        ``vt = theta - i (kappa - 1/2) ln theta - 3 pi/4 - (3 pi/2)
        kappa - i (kappa - 1/2) ln 12 - (i/2) ln 2 pi + a ln(2 + sqrt 3)
        + i ln(g11 g12 Gamma(kappa))``; ``arg`` is ``tau``.
    ``"phi2010"``
        The matching phase function ``phi`` with its continued-log
        envelope ``-i Ln(sin(vt/2 + vt0)/sin(vt/2 - vt0))``; pass
        ``tracker`` along a sweep as for :func:`I_large`.
    ``"poles"`` / ``"zeros"``
        Ladder positions ``tau_m`` on the boundary family where ``g11
        g22`` is negative real; ``arg`` is ignored and ``m`` indexes the
        rung.  ``"zeros"`` returns the pair ``(tau_m^+, tau_m^-)``.
    ``"re_half_u"`` / ``"re_half_expphi"``
        The boundary-family chart itself, phase ``Theta = theta + rho1
        ln theta - 3 pi/2 + rho1 ln 12 + a ln(2 + sqrt 3) - (3 pi i/2)
        rho1 - (i/2) ln 2 pi + i ln(g11 g12 Gamma(1/2 + i rho1))``.
    """
    d = _digits_of(digits, params.nu_plus, params.a)
    with workdps(d + _GUARD):
        am = params.a.mpc
        kap = params.nu_plus.mpc
        beta = params.eps_b.mpc ** (mp.mpf(1) / 3)
        g11 = params.monodromy.g11.mpc
        g12 = params.monodromy.g12.mpc
        lg = _log_gold()
        vt0 = -mp.pi / 2 + mp.mpc(0, 1) / 2 * lg

        if which in ("u2010", "phi2010"):
            if g11 * g12 == 0:
                raise ParameterError("g11 g12 must be nonzero")
            tm = _to_mpc(arg)
            theta = _theta_of(tm, beta)
            flags = ()
            if kap.real <= 0 or kap.real >= 1:
                flags = ("outside-validity-strip",)
            elif abs(kap.real - mp.mpf(1) / 2) < mp.mpf(10) ** (-(d - 6)):
                flags = ("outside-validity-strip",)
            vt = (
                theta
                - mp.mpc(0, 1) * (kap - mp.mpf(1) / 2) * mp.log(theta)
                - 3 * mp.pi / 4
                - 3 * mp.pi / 2 * kap
                - mp.mpc(0, 1) * (kap - mp.mpf(1) / 2) * mp.log(12)
                - mp.mpc(0, 1) / 2 * mp.log(2 * mp.pi)
                + am * lg
                + mp.mpc(0, 1) * mp.log(g11 * g12 * gamma_complex(hp(kap, d)).mpc)
            )
            if which == "u2010":
                s = mp.sin(vt / 2)
                if s == 0:
                    raise AsymptoticsError("pole of the chart at this tau")
                val = beta**2 / 2 * tm ** (mp.mpf(1) / 3) * (1 - 3 / (2 * s * s))
                return AsymptoticEval(
                    point=hp(tm, d), value=hp(val, d), phase=hp(vt, d),
                    family="sing2010", k=branch, flags=flags,
                )
            q = mp.sin(vt / 2 + vt0) / mp.sin(vt / 2 - vt0)
            if tracker is None:
                state = BranchTracker.start(hp(q, d))
                acc = mp.log(q)
            else:
                state, logged = continuous_log(tracker, hp(q, d))
                acc = logged.mpc
            val = (
                3 * beta * tm ** (mp.mpf(2) / 3)
                + 2 * am * mp.log(tm ** (mp.mpf(2) / 3))
                - am * mp.log(beta / 4)
                + mp.pi
                - 2 * mp.pi * (kap - mp.mpf(1) / 2)
                + mp.mpc(0, 1) * (mp.log(g11**2) + 2 * mp.pi * mp.mpc(0, 1) * branch)
                - 2 * mp.mpc(0, 1) * (kap - mp.mpf(1) / 2) * lg
                - mp.mpc(0, 1) * acc
            )
            return AsymptoticEval(
                point=hp(tm, d), value=hp(val, d), phase=hp(vt, d),
                family="sing2010", k=branch, branch_state=state, flags=flags,
            )

        if which in ("poles", "zeros"):
            if m is None or m < 1:
                raise AsymptoticsError("ladder index m must be a positive integer")
            rho1 = _rho1_of(params, d)
            rho2 = rho2_forms(params, d)[form - 1].mpc
            flags = ("small-index",) if m < 10 else ()
            scale = (2 * mp.pi * m / (3 * mp.sqrt(3) * beta)) ** (mp.mpf(3) / 2)

            def rung(r2):
                return scale * (
                    1
                    - 3 * rho1 / (4 * mp.pi) * mp.log(m) / m
                    - 3 * r2 / (4 * mp.pi) / m
                )

            if which == "poles":
                return AsymptoticEval(
                    point=hp(m, d), value=hp(rung(rho2), d), phase=None,
                    family="re_half", k=m, flags=flags,
                )
            plus = AsymptoticEval(
                point=hp(m, d), value=hp(rung(rho2 + 2 * vt0), d), phase=None,
                family="re_half", k=m, flags=flags,
            )
            minus = AsymptoticEval(
                point=hp(m, d), value=hp(rung(rho2 - 2 * vt0), d), phase=None,
                family="re_half", k=m, flags=flags,
            )
            return plus, minus

        if which in ("re_half_u", "re_half_expphi"):
            if g11 * g12 == 0:
                raise ParameterError("g11 g12 must be nonzero")
            rho1 = _rho1_of(params, d)
            tm = _to_mpc(arg)
            theta = _theta_of(tm, beta)
            big = (
                theta
                + rho1 * mp.log(theta)
                - 3 * mp.pi / 2
                + rho1 * mp.log(12)
                + am * lg
                - 3 * mp.pi * mp.mpc(0, 1) / 2 * rho1
                - mp.mpc(0, 1) / 2 * mp.log(2 * mp.pi)
                + mp.mpc(0, 1)
                * mp.log(g11 * g12 * _gamma(mp.mpf(1) / 2 + mp.mpc(0, 1) * rho1, d))
            )
            if which == "re_half_u":
                s = mp.sin(big / 2)
                if s == 0:
                    raise AsymptoticsError("pole of the chart at this tau")
                val = beta**2 / 2 * tm ** (mp.mpf(1) / 3) * (1 - 3 / (2 * s * s))
            else:
                phs = (
                    theta / mp.sqrt(3)
                    + 4 * am / 3 * mp.log(tm)
                    - 2 * mp.mpc(0, 1) * mp.pi * rho1
                    + mp.pi
                    + 2 * rho1 * lg
                    - am * mp.log(beta / 4)
                )
                den = mp.sin(big / 2 - vt0)
                if den == 0:
                    raise AsymptoticsError("zero of the chart denominator at this tau")
                val = mp.exp(mp.mpc(0, 1) * phs) / g11**2 * mp.sin(big / 2 + vt0) / den
            return AsymptoticEval(
                point=hp(tm, d), value=hp(val, d), phase=hp(big, d), family="re_half",
            )

        raise AsymptoticsError(f"unknown selector {which!r}")


# ---------------------------------------------------------------------------
# exact correction series over Q(omega)[kappa, alpha]
#
# Coefficients are pairs (x, y) of Fractions meaning x + y omega with
# omega^2 = -3; polynomials are dicts {(deg_kappa, deg_alpha): pair}
# with zero entries removed.  The scale beta = eps_b^(1/3) never
# appears: the substitution u = (beta^2/2) tau^(1/3) S(tau), S = sum
# a^_{k,j} tau^(-k/3) W^j, W = tau^(2 kappa/3) e^(i theta), makes every
# normalized coefficient a^_{k,j} homogeneous of weight -(k - j)/2 in
# beta, so the numeric table reinstates beta at the end.

_F0 = (Fraction(0), Fraction(0))
_F1 = (Fraction(1), Fraction(0))


def _f2add(a, b):
    return (a[0] + b[0], a[1] + b[1])


def _f2mul(a, b):
    return (a[0] * b[0] - 3 * a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _f2inv(a):
    den = a[0] * a[0] + 3 * a[1] * a[1]
    if den == 0:
        raise ZeroDivisionError("inverse of zero in Q(omega)")
    return (a[0] / den, -a[1] / den)


def _padd_into(dst, src, scale=_F1):
    for key, c in src.items():
        v = _f2add(dst.get(key, _F0), _f2mul(c, scale))
        if v[0] or v[1]:
            dst[key] = v
        else:
            dst.pop(key, None)


def _pmul(p, q):
    out = {}
    for (i1, j1), c1 in p.items():
        for (i2, j2), c2 in q.items():
            key = (i1 + i2, j1 + j2)
            v = _f2add(out.get(key, _F0), _f2mul(c1, c2))
            if v[0] or v[1]:
                out[key] = v
            else:
                out.pop(key, None)
    return out


def _pscale(p, c):
    out = {}
    for key, v in p.items():
        w = _f2mul(v, c)
        if w[0] or w[1]:
            out[key] = w
    return out


def _pdiv_exact(num, den):
    """Exact bivariate division in graded-lex order; raises when the
    quotient is not a polynomial."""
    if not den:
        raise ZeroDivisionError("division by the zero polynomial")
    num = dict(num)
    order = lambda key: (key[0] + key[1], key)
    dkey = max(den, key=order)
    dinv = _f2inv(den[dkey])
    quo = {}
    while num:
        nkey = max(num, key=order)
        shift = (nkey[0] - dkey[0], nkey[1] - dkey[1])
        if shift[0] < 0 or shift[1] < 0:
            raise AsymptoticsError("inexact polynomial division in the series solver")
        c = _f2mul(num[nkey], dinv)
        quo[shift] = c
        neg = (-c[0], -c[1])
        for key, v in den.items():
            kk = (key[0] + shift[0], key[1] + shift[1])
            w = _f2add(num.get(kk, _F0), _f2mul(v, neg))
            if w[0] or w[1]:
                num[kk] = w
            else:
                num.pop(kk, None)
    return quo


def _d_slot(n, j, poly):
    """Normalized tau-derivative of ``poly`` at slot ``(n, j)``: a list
    of (slot, poly) contributions."""
    out = []
    c1 = {}
    if n:
        c1[(0, 0)] = (Fraction(-n, 3), Fraction(0))
    if j:
        c1[(1, 0)] = (Fraction(2 * j, 3), Fraction(0))
    if c1:
        out.append(((n + 3, j), _pmul(poly, c1)))
    if j:
        out.append(((n + 1, j), _pscale(poly, (Fraction(0), Fraction(2 * j)))))
    return out


def _d_items(items):
    out = {}
    for (n, j), poly in items:
        for slot, contrib in _d_slot(n, j, poly):
            cur = out.setdefault(slot, {})
            _padd_into(cur, contrib)
    return [(slot, poly) for slot, poly in out.items() if poly]


class _Grid:
    """Incrementally maintained series data: S and its derivative and
    product combinations, each a dict slot -> polynomial."""

    def __init__(self):
        one = {(0, 0): _F1}
        self.S = {(0, 0): dict(one)}
        self.S1 = {}
        self.S2 = {}
        self.SS2 = {}
        self.S1S1 = {}
        self.SS1 = {}
        self.Ssq = {(0, 0): dict(one)}
        self.Scb = {(0, 0): dict(one)}

    @staticmethod
    def _acc(table, slot, poly, scale=_F1):
        cur = table.setdefault(slot, {})
        _padd_into(cur, poly, scale)
        if not cur:
            del table[slot]

    def _conv_into(self, table, a_items, b_items, scale=_F1):
        for (n1, j1), p1 in a_items:
            for (n2, j2), p2 in b_items:
                prod = _pmul(p1, p2)
                if prod:
                    self._acc(table, (n1 + n2, j1 + j2), prod, scale)

    def assign(self, k, j, poly):
        if not poly:
            return
        ds = [((k, j), poly)]
        ds1 = _d_items(ds)
        ds2 = _d_items(ds1)
        s_old = list(self.S.items())
        s1_old = list(self.S1.items())
        s2_old = list(self.S2.items())
        ssq_old = list(self.Ssq.items())
        two = (Fraction(2), Fraction(0))
        three = (Fraction(3), Fraction(0))
        self._conv_into(self.SS2, s_old, ds2)
        self._conv_into(self.SS2, ds, s2_old)
        self._conv_into(self.SS2, ds, ds2)
        self._conv_into(self.S1S1, s1_old, ds1, two)
        self._conv_into(self.S1S1, ds1, ds1)
        self._conv_into(self.SS1, s_old, ds1)
        self._conv_into(self.SS1, ds, s1_old)
        self._conv_into(self.SS1, ds, ds1)
        dsq = {}
        self._conv_into(dsq, ds, ds)
        dsq_items = list(dsq.items())
        self._conv_into(self.Ssq, s_old, ds, two)
        for slot, p in dsq_items:
            self._acc(self.Ssq, slot, p)
        self._conv_into(self.Scb, ssq_old, ds, three)
        self._conv_into(self.Scb, s_old, dsq_items, three)
        self._conv_into(self.Scb, dsq_items, ds)
        for slot, p in ds:
            self._acc(self.S, slot, p)
        for slot, p in ds1:
            self._acc(self.S1, slot, p)
        for slot, p in ds2:
            self._acc(self.S2, slot, p)

    def eq_slot(self, n, j):
        """Residual coefficient of the equation at tau^(-n/3) w^j with
        every currently assigned coefficient substituted."""
        out = {}
        _padd_into(out, self.SS2.get((n + 5, j), {}))
        neg = (Fraction(-1), Fraction(0))
        _padd_into(out, self.S1S1.get((n + 5, j), {}), neg)
        _padd_into(out, self.SS1.get((n + 2, j), {}))
        _padd_into(out, self.Scb.get((n + 3, j), {}), (Fraction(4), Fraction(0)))
        sv = self.S.get((n + 1, j))
        if sv:
            _padd_into(out, _pmul(sv, {(0, 1): (Fraction(0), Fraction(2, 3))}))
        if n == -3 and j == 0:
            _padd_into(out, {(0, 0): (Fraction(-4), Fraction(0))})
        return out

    def lin_coeff(self, l, q, n, j):
        """Coefficient polynomial of the unassigned a^_{l,q} in the
        equation slot (n, j), against the current grid."""
        out = {}
        unit = {(0, 0): _F1}
        dd = _d_slot(l, q, unit)
        dd2 = _d_items(dd)
        # tau^(5/3) (S S'' - S' S') at (n + 5, j)
        for (nd, jd), pd in dd2:
            sv = self.S.get((n + 5 - nd, j - jd))
            if sv:
                _padd_into(out, _pmul(pd, sv))
        sv = self.S2.get((n + 5 - l, j - q))
        if sv:
            _padd_into(out, sv)
        for (nd, jd), pd in dd:
            sv = self.S1.get((n + 5 - nd, j - jd))
            if sv:
                _padd_into(out, _pmul(pd, sv), (Fraction(-2), Fraction(0)))
        # tau^(2/3) S S' at (n + 2, j)
        for (nd, jd), pd in dd:
            sv = self.S.get((n + 2 - nd, j - jd))
            if sv:
                _padd_into(out, _pmul(pd, sv))
        sv = self.S1.get((n + 2 - l, j - q))
        if sv:
            _padd_into(out, sv)
        # 4 beta^2 tau S^3 at (n + 3, j)
        sv = self.Ssq.get((n + 3 - l, j - q))
        if sv:
            _padd_into(out, sv, (Fraction(12), Fraction(0)))
        # (2/3) omega alpha beta tau^(1/3) S at (n + 1, j)
        if n + 1 == l and j == q:
            _padd_into(out, {(0, 1): (Fraction(0), Fraction(2, 3))})
        return out


@lru_cache(maxsize=8)
def _solve_levels(kmax: int):
    """Exact table {(k, j): polynomial in (kappa, alpha)} of normalized
    coefficients a^_{k,j} for k <= kmax."""
    if kmax < 2:
        raise AsymptoticsError("the series solver needs order >= 2")
    grid = _Grid()
    table = {(0, 0): {(0, 0): _F1}}
    seed_p = {(0, 0): _F1}
    seed_m = {(1, 0): (Fraction(0), Fraction(-1, 3))}
    grid.assign(1, 1, seed_p)
    grid.assign(1, -1, seed_m)
    table[(1, 1)] = seed_p
    table[(1, -1)] = seed_m
    # stage 1: a^_{1,0} from slot (-2, 0), the level-2 non-resonant trio
    # straight from slots (-1, j) where the seeds are already known.
    rhs = grid.eq_slot(-2, 0)
    poly = _pscale(rhs, (Fraction(-1, 12), Fraction(0)))
    grid.assign(1, 0, poly)
    table[(1, 0)] = poly
    for jq in (0, 2, -2):
        rhs = grid.eq_slot(-1, jq)
        poly = _pscale(rhs, (Fraction(-1, 12 * (1 - jq * jq)), Fraction(0)))
        grid.assign(2, jq, poly)
        table[(2, jq)] = poly
    for m in range(2, kmax + 1):
        for j in range(-m, m + 1):
            if abs(j) == 1 or (m, j) in table:
                continue
            rhs = grid.eq_slot(m - 3, j)
            lead = Fraction(12 * (1 - j * j))
            poly = _pscale(rhs, (-1 / lead, Fraction(0)))
            grid.assign(m, j, poly)
            table[(m, j)] = poly
        chk_p = grid.eq_slot(m - 2, 1)
        chk_m = grid.eq_slot(m - 2, -1)
        if chk_p or chk_m:
            raise AsymptoticsError("series recurrence inconsistency")
        unknowns = [(m, 1), (m, -1), (m + 1, 0), (m + 1, 2), (m + 1, -2)]
        eqs = [(m - 1, 1), (m - 1, -1), (m - 2, 0), (m - 2, 2), (m - 2, -2)]
        rhs = {e: grid.eq_slot(*e) for e in eqs}
        lin = {e: {u: grid.lin_coeff(u[0], u[1], e[0], e[1]) for u in unknowns} for e in eqs}
        # rows (m-2, j') fix the level-(m+1) unknowns up to the (m, +-1)
        # pair; substitute into the resonant rows and Cramer the pair.
        red = {}
        for jq in (0, 2, -2):
            e = (m - 2, jq)
            u = (m + 1, jq)
            lead = lin[e][u]
            if len(lead) != 1 or (0, 0) not in lead:
                raise AsymptoticsError("series solver lost its leading structure")
            inv = _f2inv(lead[(0, 0)])
            red[jq] = (
                _pscale(rhs[e], (-inv[0], -inv[1])),
                _pscale(lin[e][(m, 1)], (-inv[0], -inv[1])),
                _pscale(lin[e][(m, -1)], (-inv[0], -inv[1])),
            )
        rowa, rowb = {}, {}
        cons_a = dict(rhs[(m - 1, 1)])
        cons_b = dict(rhs[(m - 1, -1)])
        a11 = dict(lin[(m - 1, 1)][(m, 1)])
        a12 = dict(lin[(m - 1, 1)][(m, -1)])
        a21 = dict(lin[(m - 1, -1)][(m, 1)])
        a22 = dict(lin[(m - 1, -1)][(m, -1)])
        for jq in (0, 2, -2):
            base, cp, cm = red[jq]
            up = lin[(m - 1, 1)].get((m + 1, jq), {})
            um = lin[(m - 1, -1)].get((m + 1, jq), {})
            _padd_into(cons_a, _pmul(up, base))
            _padd_into(a11, _pmul(up, cp))
            _padd_into(a12, _pmul(up, cm))
            _padd_into(cons_b, _pmul(um, base))
            _padd_into(a21, _pmul(um, cp))
            _padd_into(a22, _pmul(um, cm))
        det = _pmul(a11, a22)
        _padd_into(det, _pmul(a12, a21), (Fraction(-1), Fraction(0)))
        num1 = _pmul(cons_b, a12)
        _padd_into(num1, _pmul(cons_a, a22), (Fraction(-1), Fraction(0)))
        num2 = _pmul(cons_a, a21)
        _padd_into(num2, _pmul(cons_b, a11), (Fraction(-1), Fraction(0)))
        xp = _pdiv_exact(num1, det)
        xm = _pdiv_exact(num2, det)
        grid.assign(m, 1, xp)
        grid.assign(m, -1, xm)
        table[(m, 1)] = xp
        table[(m, -1)] = xm
        for jq in (0, 2, -2):
            base, cp, cm = red[jq]
            val = dict(base)
            _padd_into(val, _pmul(cp, xp))
            _padd_into(val, _pmul(cm, xm))
            grid.assign(m + 1, jq, val)
            table[(m + 1, jq)] = val
    for n in range(-3, kmax - 1):
        for j in range(-(n + 6), n + 7):
            if grid.eq_slot(n, j):
                raise AsymptoticsError("series residual fails to vanish symbolically")
    return {key: val for key, val in table.items() if key[0] <= kmax}


def expansion_polys(kmax: int = 10) -> dict:
    """Normalized series coefficients as exact polynomials.

    Returns ``{(k, j): {(dk, da): (x, y)}}`` where the inner pair means
    ``x + y omega`` (``omega^2 = -3``) on the monomial ``kappa^dk
    alpha^da``, for ``0 <= k <= kmax`` and ``|j| <= k``.  The actual
    coefficient is ``a_{k,j} = P_{k,j}(kappa, alpha) beta^(-(k - j)/2)
    A+^j`` with ``A+ = a_{1,1}``.  Treat the result as read-only.
    """
    if not 0 <= kmax <= 12:
        raise AsymptoticsError("series order must lie in 0..12")
    return _solve_levels(kmax)


@lru_cache(maxsize=4)
def inverse_polys(kmax: int = 5) -> dict:
    """Normalized coefficients of 1/S, same encoding and grading as
    :func:`expansion_polys`; drives the ``b_{k,j}`` table of ``b/u``."""
    fwd = _solve_levels(max(kmax, 2))
    inv = {(0, 0): {(0, 0): _F1}}
    for k in range(1, kmax + 1):
        for j in range(-k, k + 1):
            acc = {}
            for k1 in range(1, k + 1):
                for j1 in range(-k1, k1 + 1):
                    s = fwd.get((k1, j1))
                    if not s:
                        continue
                    r = inv.get((k - k1, j - j1))
                    if not r:
                        continue
                    _padd_into(acc, _pmul(s, r))
            if acc:
                inv[(k, j)] = _pscale(acc, (Fraction(-1), Fraction(0)))
    return inv


def _poly_sum(scale, terms):
    out = {}
    for key, pair in terms.items():
        out[key] = _f2mul(pair, scale)
    return out


def _printed_quad():
    # alpha^2 + 8 kappa alpha + 10 kappa^2
    return {
        (0, 2): (Fraction(1), Fraction(0)),
        (1, 1): (Fraction(8), Fraction(0)),
        (2, 0): (Fraction(10), Fraction(0)),
    }


def printed_expansion_polys() -> dict:
    """Transcription of the printed closed forms for ``k <= 6`` into
    the normalized encoding of :func:`expansion_polys`, for
    cross-checking the generated table against the published one."""
    x = lambda *pairs: {k: (Fraction(a), Fraction(b)) for k, a, b in pairs}
    quad = _printed_quad()
    out = {
        (0, 0): x(((0, 0), 1, 0)),
        (1, 1): x(((0, 0), 1, 0)),
        (1, -1): x(((1, 0), 0, Fraction(-1, 3))),
        (1, 0): {},
        (2, 2): x(((0, 0), Fraction(1, 3), 0)),
        (2, -2): x(((2, 0), Fraction(-1, 9), 0)),
        (2, 1): {},
        (2, -1): {},
        (2, 0): x(((0, 1), 0, Fraction(-1, 18)), ((1, 0), 0, Fraction(-2, 3))),
        (3, 3): x(((0, 0), Fraction(1, 12), 0)),
        (3, -3): x(((3, 0), 0, Fraction(1, 108))),
        (3, 2): {},
        (3, -2): {},
        (3, 0): {},
        (4, 4): x(((0, 0), Fraction(1, 54), 0)),
        (4, -4): x(((4, 0), Fraction(1, 486), 0)),
        (4, 3): {},
        (4, -3): {},
        (4, 1): {},
        (4, -1): {},
        (4, 0): {},
        (5, 5): x(((0, 0), Fraction(5, 1296), 0)),
        (5, -5): x(((5, 0), 0, Fraction(-5, 3888))),
        (5, 4): {},
        (5, -4): {},
        (5, 2): {},
        (5, -2): {},
        (5, 0): {},
        (6, 6): x(((0, 0), Fraction(1, 1296), 0)),
        (6, -6): x(((6, 0), Fraction(-1, 3888), 0)),
        (6, 5): {},
        (6, -5): {},
        (6, 3): {},
        (6, -3): {},
        (6, 1): {},
        (6, -1): {},
    }
    # a_{3,+-1} = +-(omega a1^{+-1} / 216 beta)(3 quad - 3 -+ 12 alpha -+ 80 kappa)
    q3p = _poly_sum((Fraction(3), Fraction(0)), quad)
    _padd_into(q3p, x(((0, 0), -3, 0), ((0, 1), -12, 0), ((1, 0), -80, 0)))
    out[(3, 1)] = _pscale(q3p, (Fraction(0), Fraction(1, 216)))
    q3m = _poly_sum((Fraction(3), Fraction(0)), quad)
    _padd_into(q3m, x(((0, 0), -3, 0), ((0, 1), 12, 0), ((1, 0), 80, 0)))
    out[(3, -1)] = _pscale(_pmul(q3m, x(((1, 0), 1, 0))), (Fraction(-1, 648), Fraction(0)))
    # a_{4,+-2} = +-(omega a1^{+-2} / 324 beta)(3 alpha^2 + 24 ka + 30 k^2 + 1 -+ 12 alpha -+ 54 kappa)
    q4p = _poly_sum((Fraction(3), Fraction(0)), quad)
    _padd_into(q4p, x(((0, 0), 1, 0), ((0, 1), -12, 0), ((1, 0), -54, 0)))
    out[(4, 2)] = _pscale(q4p, (Fraction(0), Fraction(1, 324)))
    q4m = _poly_sum((Fraction(3), Fraction(0)), quad)
    _padd_into(q4m, x(((0, 0), 1, 0), ((0, 1), 12, 0), ((1, 0), 54, 0)))
    out[(4, -2)] = _pscale(_pmul(q4m, x(((2, 0), 1, 0))), (Fraction(0), Fraction(1, 972)))
    # a_{5,+-3} = +-(omega a1^{+-3} / (2^5 3^4 beta))(9 quad + 1 -+ 36 alpha -+ 138 kappa)
    q5p = _poly_sum((Fraction(9), Fraction(0)), quad)
    _padd_into(q5p, x(((0, 0), 1, 0), ((0, 1), -36, 0), ((1, 0), -138, 0)))
    out[(5, 3)] = _pscale(q5p, (Fraction(0), Fraction(1, 2592)))
    q5m = _poly_sum((Fraction(9), Fraction(0)), quad)
    _padd_into(q5m, x(((0, 0), 1, 0), ((0, 1), 36, 0), ((1, 0), 138, 0)))
    out[(5, -3)] = _pscale(_pmul(q5m, x(((3, 0), 1, 0))), (Fraction(1, 23328), Fraction(0)))
    # a_{5,+-1} = -(a1^{+-1} / (2^7 3^5 beta^2)) (9 quad^2 -+ (24 a^3 + 48 a^2 k
    #   - 912 a k^2 - 3440 k^3) - 90 a^2 - 1296 k a - 4168 k^2 +- (216 a + 240 k) + 81)
    quad2 = _pmul(quad, quad)
    cubic = x(((0, 3), 24, 0), ((1, 2), 48, 0), ((2, 1), -912, 0), ((3, 0), -3440, 0))
    tail = x(((0, 2), -90, 0), ((1, 1), -1296, 0), ((2, 0), -4168, 0), ((0, 0), 81, 0))
    lin = x(((0, 1), 216, 0), ((1, 0), 240, 0))
    q5c = _poly_sum((Fraction(9), Fraction(0)), quad2)
    _padd_into(q5c, cubic, (Fraction(-1), Fraction(0)))
    _padd_into(q5c, tail)
    _padd_into(q5c, lin)
    out[(5, 1)] = _pscale(q5c, (Fraction(-1, 31104), Fraction(0)))
    q5d = _poly_sum((Fraction(9), Fraction(0)), quad2)
    _padd_into(q5d, cubic)
    _padd_into(q5d, tail)
    _padd_into(q5d, lin, (Fraction(-1), Fraction(0)))
    out[(5, -1)] = _pscale(
        _pmul(q5d, x(((1, 0), 1, 0))), (Fraction(0), Fraction(1, 93312))
    )
    # a_{6,0} = -(omega / (2^3 3^6 eps_b))(a^3 + 18 a^2 k + 72 a k^2 + 60 k^3 - 12 a - 90 k)
    q60 = x(
        ((0, 3), 1, 0), ((1, 2), 18, 0), ((2, 1), 72, 0), ((3, 0), 60, 0),
        ((0, 1), -12, 0), ((1, 0), -90, 0),
    )
    out[(6, 0)] = _pscale(q60, (Fraction(0), Fraction(-1, 5832)))
    # a_{6,+-4} = +-(omega a1^{+-4} / (2^3 3^6 beta))(6 quad - 1 -+ 24 alpha -+ 84 kappa)
    q6p = _poly_sum((Fraction(6), Fraction(0)), quad)
    _padd_into(q6p, x(((0, 0), -1, 0), ((0, 1), -24, 0), ((1, 0), -84, 0)))
    out[(6, 4)] = _pscale(q6p, (Fraction(0), Fraction(1, 5832)))
    q6m = _poly_sum((Fraction(6), Fraction(0)), quad)
    _padd_into(q6m, x(((0, 0), -1, 0), ((0, 1), 24, 0), ((1, 0), 84, 0)))
    out[(6, -4)] = _pscale(_pmul(q6m, x(((4, 0), 1, 0))), (Fraction(0), Fraction(1, 52488)))
    # a_{6,+-2} = -(a1^{+-2} / (2^5 3^6 beta^2))(9 quad^2 - 171 -+ (48 a^3 + 396 a^2 k
    #   + 576 a k^2 - 880 k^3) - 30 a^2 - 816 k a - 2770 k^2 +- (384 a + 1408 k))
    cubic6 = x(((0, 3), 48, 0), ((1, 2), 396, 0), ((2, 1), 576, 0), ((3, 0), -880, 0))
    tail6 = x(((0, 0), -171, 0), ((0, 2), -30, 0), ((1, 1), -816, 0), ((2, 0), -2770, 0))
    lin6 = x(((0, 1), 384, 0), ((1, 0), 1408, 0))
    q6c = _poly_sum((Fraction(9), Fraction(0)), quad2)
    _padd_into(q6c, cubic6, (Fraction(-1), Fraction(0)))
    _padd_into(q6c, tail6)
    _padd_into(q6c, lin6)
    out[(6, 2)] = _pscale(q6c, (Fraction(-1, 23328), Fraction(0)))
    q6d = _poly_sum((Fraction(9), Fraction(0)), quad2)
    _padd_into(q6d, cubic6)
    _padd_into(q6d, tail6)
    _padd_into(q6d, lin6, (Fraction(-1), Fraction(0)))
    out[(6, -2)] = _pscale(
        _pmul(q6d, x(((2, 0), 1, 0))), (Fraction(1, 69984), Fraction(0))
    )
    return out


def conjectured_poly(k: int, j: int) -> dict:
    """Closed-form conjectures for the extreme and subextreme diagonals
    in the normalized encoding: ``a_{k,+-k}`` for ``k >= 1`` and
    ``a_{k,+-(k-2)}`` for ``k >= 4``."""
    if abs(j) == k and k >= 1:
        # a_{k,+-k} = k a_{1,+-1}^k / (2^(k-1) 3^(k-1))
        c = Fraction(k, 6 ** (k - 1))
        if j > 0:
            return {(0, 0): (c, Fraction(0))}
        base = {(1, 0): (Fraction(0), Fraction(-1, 3))}
        acc = {(0, 0): _F1}
        for _ in range(k):
            acc = _pmul(acc, base)
        return _pscale(acc, (c, Fraction(0)))
    if abs(j) == k - 2 and k >= 4:
        n = k - 2
        quad = _poly_sum((Fraction(3 * n * n), Fraction(0)), _printed_quad())
        const = Fraction(-5 * n * n + 24 * n - 24)
        _padd_into(quad, {(0, 0): (const, Fraction(0))})
        sign = 1 if j > 0 else -1
        _padd_into(quad, {(0, 1): (Fraction(-sign * 12 * n * n), Fraction(0))})
        _padd_into(quad, {(1, 0): (Fraction(-sign * (5 * n * n + 8 * n) * 6), Fraction(0))})
        scale = (Fraction(0), Fraction(sign, 2**k * 3**k))
        poly = _pscale(quad, scale)
        if j > 0:
            return poly
        base = {(1, 0): (Fraction(0), Fraction(-1, 3))}
        acc = {(0, 0): _F1}
        for _ in range(n):
            acc = _pmul(acc, base)
        return _pmul(poly, acc)
    raise AsymptoticsError("no conjectured closed form at this (k, j)")


@dataclass(frozen=True)
class ExpansionTable:
    """Numeric correction-series table: ``coeffs`` holds ``((k, j),
    value)`` pairs for the ``u`` series, ``b4`` the ``k = 4`` row of the
    reciprocal ``b/u`` series."""

    coeffs: tuple
    b4: tuple
    nu_plus: ComplexHP
    alpha: ComplexHP
    eps_b: ComplexHP
    order: int
    flags: tuple = ()

    def coeff(self, k: int, j: int) -> ComplexHP:
        for key, val in self.coeffs:
            if key == (k, j):
                return val
        raise AsymptoticsError(f"no entry ({k}, {j}) in the table")

    def b_coeff(self, k: int, j: int) -> ComplexHP:
        for key, val in self.b4:
            if key == (k, j):
                return val
        raise AsymptoticsError(f"no b entry ({k}, {j}) in the table")


@lru_cache(maxsize=2)
def _conjecture_flags(kmax: int) -> tuple:
    polys = _solve_levels(kmax)
    flags = []
    for k in range(1, kmax + 1):
        for j in (k, -k):
            if polys.get((k, j), {}) != conjectured_poly(k, j):
                flags.append(f"diagonal-conjecture-fails-({k},{j})")
        if k >= 4:
            for j in (k - 2, -(k - 2)):
                if polys.get((k, j), {}) != conjectured_poly(k, j):
                    flags.append(f"subdiagonal-conjecture-fails-({k},{j})")
    parity = [
        f"parity-fails-({k},{j})"
        for (k, j), poly in polys.items()
        if poly and (k - j) % 2
    ]
    return tuple(flags + parity)


def _poly_eval(poly, kap, alf, omega):
    total = mp.mpc(0)
    for (dk, da), (xr, xw) in poly.items():
        c = mp.mpf(xr.numerator) / xr.denominator + omega * mp.mpf(xw.numerator) / xw.denominator
        total += c * kap**dk * alf**da
    return total


def _amp_plus(params: GeneralAParams, d: int):
    kap = params.nu_plus.mpc
    beta = params.eps_b.mpc ** (mp.mpf(1) / 3)
    z = _z_const(params, d)
    return (
        mp.sqrt(kap)
        * mp.expjpi(mp.mpf(3) / 4)
        / (3 ** mp.mpf("0.25") * mp.sqrt(beta))
        * mp.exp(z + kap * mp.log(3 * mp.sqrt(3) * beta))
    )


def expansion_coeffs(kmax: int, params: GeneralAParams, digits: int | None = None) -> ExpansionTable:
    """Numeric series table up to order ``kmax <= 10`` for the given
    chart data, including the ``k = 4`` reciprocal row; conjecture or
    parity failures of the underlying exact table surface as flags."""
    if not 1 <= kmax <= 10:
        raise AsymptoticsError("table order must lie in 1..10")
    d = _digits_of(digits, params.nu_plus, params.a)
    polys = _solve_levels(kmax)
    ipolys = inverse_polys(max(4, min(kmax, 5)))
    with workdps(d + _GUARD):
        omega = mp.mpc(0, 1) * mp.sqrt(3)
        kap = params.nu_plus.mpc
        alf = 2 * omega * params.a.mpc
        beta = params.eps_b.mpc ** (mp.mpf(1) / 3)
        aplus = _amp_plus(params, d)
        coeffs = []
        for k in range(kmax + 1):
            for j in range(-k, k + 1):
                poly = polys.get((k, j))
                base = _poly_eval(poly, kap, alf, omega) if poly else mp.mpc(0)
                val = base * beta ** (-(mp.mpf(k - j) / 2)) * aplus**j
                coeffs.append(((k, j), hp(val, d)))
        brow = []
        for j in range(-3, 4):
            poly = ipolys.get((3, j))
            base = _poly_eval(poly, kap, alf, omega) if poly else mp.mpc(0)
            val = 2 * base * beta ** (1 - mp.mpf(3 - j) / 2) * aplus**j
            brow.append(((4, j), hp(val, d)))
        return ExpansionTable(
            coeffs=tuple(coeffs),
            b4=tuple(brow),
            nu_plus=hp(kap, d),
            alpha=hp(alf, d),
            eps_b=hp(params.eps_b.mpc, d),
            order=kmax,
            flags=_conjecture_flags(kmax),
        )


def eval_expansion(
    kmax: int,
    tau,
    nu_plus,
    a=0,
    eps_b=1,
    amplitude=1,
    digits: int | None = None,
) -> tuple:
    """Truncated series value of ``u`` and its first two derivatives at
    ``tau``, with a caller-chosen oscillation amplitude replacing
    ``A+`` (the equation is satisfied for any nonzero choice)."""
    d = _digits_of(digits, nu_plus if isinstance(nu_plus, ComplexHP) else None)
    polys = _solve_levels(kmax)
    with workdps(d + _GUARD):
        omega = mp.mpc(0, 1) * mp.sqrt(3)
        kap = _to_mpc(nu_plus)
        am = _to_mpc(a)
        alf = 2 * omega * am
        ebm = _to_mpc(eps_b)
        beta = ebm ** (mp.mpf(1) / 3)
        ampl = _to_mpc(amplitude)
        tm = _to_mpc(tau)
        theta = _theta_of(tm, beta)
        ph = mp.exp(mp.mpc(0, 1) * theta)
        u = mp.mpc(0)
        du = mp.mpc(0)
        d2u = mp.mpc(0)
        for (k, j), poly in polys.items():
            if k > kmax:
                continue
            base = _poly_eval(poly, kap, alf, omega)
            if base == 0:
                continue
            coef = base * beta ** (-(mp.mpf(k - j) / 2)) * ampl**j
            p = (1 - mp.mpf(k)) / 3 + mp.mpf(2 * j) / 3 * kap
            term = coef * tm**p * ph**j
            rate = p / tm + mp.mpc(0, 1) * j * 2 * mp.sqrt(3) * beta * tm ** (-mp.mpf(1) / 3)
            curv = -p / tm**2 - mp.mpc(0, 1) * j * 2 * mp.sqrt(3) / 3 * beta * tm ** (
                -mp.mpf(4) / 3
            )
            u += term
            du += term * rate
            d2u += term * (rate * rate + curv)
        scale = ebm ** (mp.mpf(2) / 3) / 2
        return hp(scale * u, d), hp(scale * du, d), hp(scale * d2u, d)


# ---------------------------------------------------------------------------
# real self-dual reduction


def tzitzeica_real(r, H0, digits: int | None = None) -> AsymptoticEval:
    """Oscillatory chart of the exponential solution for real
    ``H(0) > 0``::

        e^u(r) - 1 = -(a sqrt 6 / (-3 r)^(1/4))
                     cos(2 sqrt(-3 r) + a^2 ln sqrt(-3 r) + phi - pi/4)
        a    = sqrt(ln g3 / 2 pi)
        phi  = a^2 ln 24 + arg Gamma(-i a^2) + arg g2

    with ``(g1, g2, g3)`` the contracted connection data of ``H0``.
    This coincides exactly with the ``reg_H`` chart at ``nu1 = a^2``.
    """
    d = _digits_of(digits, H0 if isinstance(H0, ComplexHP) else None)
    rr_in = _neg_real_r(r)
    with workdps(d + _GUARD):
        h0m = _to_mpc(H0)
        if abs(h0m.imag) > 0 or h0m.real <= 0:
            raise ParameterError("the real reduction needs real H0 > 0")
        h0r = h0m.real
        point = from_H0(h0r, digits=d)
        nu = mp.log(point.g3.mpc.real) / (2 * mp.pi)
        if nu < mp.mpf(10) ** (-(d - 4)):
            return AsymptoticEval(
                point=hp(rr_in, d), value=hp(1, d), phase=None,
                family="tzitzeica", flags=("zero-nu",),
            )
        amp = mp.sqrt(nu)
        rr = -3 * rr_in
        phi = (
            nu * mp.log(24)
            + mp.arg(_gamma(-mp.mpc(0, 1) * nu, d))
            + mp.arg(point.g2.mpc)
        )
        psi = 2 * mp.sqrt(rr) + nu * mp.log(mp.sqrt(rr)) + phi - mp.pi / 4
        val = 1 - amp * mp.sqrt(6) / rr ** mp.mpf("0.25") * mp.cos(psi)
        return AsymptoticEval(
            point=hp(rr_in, d), value=hp(val, d), phase=hp(psi, d), family="tzitzeica",
        )


def tzitzeica_first_min(H0, digits: int | None = None) -> AsymptoticEval:
    """Innermost oscillation-scale minimum of the real reduction chart.

    Extrema satisfy ``tan psi = -1/(4 x + 2 a^2)`` in ``x =
    sqrt(-3 r)``; the first minimum is the unique root of ``psi(x) +
    atan(1/(4 x + 2 a^2)) = 2 pi``, found by bisection.
    """
    d = _digits_of(digits, H0 if isinstance(H0, ComplexHP) else None)
    with workdps(d + _GUARD):
        h0m = _to_mpc(H0)
        if abs(h0m.imag) > 0 or h0m.real <= 0:
            raise ParameterError("the real reduction needs real H0 > 0")
        point = from_H0(h0m.real, digits=d)
        nu = mp.log(point.g3.mpc.real) / (2 * mp.pi)
        if nu < mp.mpf(10) ** (-(d - 4)):
            raise ParameterError("H0 = 1 has no oscillation to minimize")
        phi = (
            nu * mp.log(24)
            + mp.arg(_gamma(-mp.mpc(0, 1) * nu, d))
            + mp.arg(point.g2.mpc)
        )

        def goal(x):
            psi = 2 * x + nu * mp.log(x) + phi - mp.pi / 4
            return psi + mp.atan(1 / (4 * x + 2 * nu)) - 2 * mp.pi

        lo, hi = mp.mpf("1e-6"), mp.mpf(100)
        if goal(lo) >= 0 or goal(hi) <= 0:
            raise RootSearchError("first-minimum bracket failed")
        for _ in range(12 + int(mp.ceil(mp.mpf(10) / 3 * (d + 6)))):
            mid = (lo + hi) / 2
            if goal(mid) < 0:
                lo = mid
            else:
                hi = mid
        xs = (lo + hi) / 2
        psi = 2 * xs + nu * mp.log(xs) + phi - mp.pi / 4
        val = 1 - mp.sqrt(6 * nu) / mp.sqrt(xs) * mp.cos(psi)
        return AsymptoticEval(
            point=hp(-xs * xs / 3, d), value=hp(val, d), phase=hp(psi, d),
            family="tzitzeica",
        )


# ---------------------------------------------------------------------------
# serialization


def comparison_csv(rows, digits: int = DEFAULT_DIGITS) -> str:
    """CSV of (r, numeric, asymptotic) triples with absolute error."""
    lines = ["r,re_num,im_num,re_asym,im_asym,abs_err"]
    with workdps(digits + 5):
        for rv, num, asym in rows:
            nm = _to_mpc(num)
            am = _to_mpc(asym)
            cells = [
                mp.nstr(_to_mpc(rv).real, digits),
                mp.nstr(nm.real, digits),
                mp.nstr(nm.imag, digits),
                mp.nstr(am.real, digits),
                mp.nstr(am.imag, digits),
                mp.nstr(abs(nm - am), digits),
            ]
            lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def landmark_report_json(marks: dict, digits: int = DEFAULT_DIGITS) -> str:
    """Deterministic JSON report of a :func:`landmarks` result."""
    with workdps(digits + 5):
        body = {
            "last_zero": mp.nstr(marks["last_zero"].re, digits),
            "depth": mp.nstr(marks["depth"].re, digits),
            "envelope_edge": mp.nstr(marks["envelope_edge"].re, digits),
            "left_constant": mp.nstr(marks["left_constant"].re, digits),
            "right_constant": mp.nstr(marks["right_constant"].re, digits),
            "right_slope": mp.nstr(marks["right_slope"].re, digits),
            "k": marks["k"],
            "digits": digits,
        }
    return json.dumps(body, indent=2, sort_keys=True)
