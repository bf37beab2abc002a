"""Monodromy data attached to the tau-scale solutions with zero formal charge.

Solutions are labelled by points of an affine cubic surface.  The raw data
live in ``C^7`` with coordinates ``(s00, s0inf, s1inf, g11, g12, g21, g22)``
subject to five polynomial relations; a quadratic contraction

    ``g1 = i*g12*g11,  g2 = i*g21*g22,  g3 = g11*g22,  g4 = g12*g21,
    s = 1 + i*s00``

maps that manifold onto the surface

    ``g1 - g2 + g3*(1 - s) = 1,      g3*(g3 - 1) = -g2*g1``

in ``C^4``, with ``g3 - g4 = 1`` and ``g3*g4 = -g1*g2`` following from the
definitions.  The contracted point is the first-class object here: it is what
initial data map onto and what the large-argument asymptotics consume.  Lifts
back to ``C^7`` are a gauge choice and are provided only as a convenience.

``from_H0`` sends an initial value ``H(0)`` of the radial chart to its
contracted point (always with ``s = 0``).  ``nu1`` extracts the branch
exponent ``ln(g3)/(2*pi)`` normalized into one of two strips: the ``regular``
convention demands ``|Im| < 1/6``, the ``singular`` one ``Im in (-1, 0)``
with ``-1/2`` excluded.  The three initial values fixed by cube roots of
unity are excluded from the generic map and carried as explicit records by
``algebraic_cases``.  ``map_variants`` moves contracted points onto the
companion surface ``g1 + g2*(1 - s) + g3 = 1``, ``g2*(g2 - 1) = g1*g3`` used
by the real reductions, and produces the data of the associated 3x3 linear
problem in the ``s = 0`` case.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from mpmath import mp, workdps

from dp3.series import _hp_from, _hp_obj
from dp3.specfun import DEFAULT_DIGITS, ComplexHP, hp

_GUARD = 12

_CONVENTIONS = ("regular", "singular")


class MonodromyError(ValueError):
    """Base class for errors raised by this module."""


class ExcludedValueError(MonodromyError):
    """The initial value falls on a cube root of unity (or zero)."""


class ConventionUnreachableError(MonodromyError):
    """No branch shift lands the exponent inside the requested strip."""


class BoundaryValueError(MonodromyError):
    """The trace parameter sits on a logarithmic boundary case."""


def _to_mpc(value):
    if isinstance(value, ComplexHP):
        return value.mpc
    return mp.mpc(value)


@dataclass(frozen=True)
class MonodromyPoint:
    """Contracted data ``(s, g1, g2, g3, g4)`` on the cubic surface."""

    s: ComplexHP
    g1: ComplexHP
    g2: ComplexHP
    g3: ComplexHP
    g4: ComplexHP

    @property
    def digits(self) -> int:
        return min(f.digits for f in (self.s, self.g1, self.g2, self.g3, self.g4))


@dataclass(frozen=True)
class ManifoldPoint:
    """Raw seven-coordinate data, one gauge lift above a contracted point."""

    s00: ComplexHP
    s0inf: ComplexHP
    s1inf: ComplexHP
    g11: ComplexHP
    g12: ComplexHP
    g21: ComplexHP
    g22: ComplexHP

    @property
    def digits(self) -> int:
        fields = (self.s00, self.s0inf, self.s1inf,
                  self.g11, self.g12, self.g21, self.g22)
        return min(f.digits for f in fields)


@dataclass(frozen=True)
class RealFormPoint:
    """A point ``(g1, g2, g3, s)`` of the companion real-reduction surface."""

    g1: ComplexHP
    g2: ComplexHP
    g3: ComplexHP
    s: ComplexHP

    @property
    def digits(self) -> int:
        return min(f.digits for f in (self.g1, self.g2, self.g3, self.s))


@dataclass(frozen=True)
class Nu1:
    """Branch exponent ``ln(g3)/(2*pi)`` pinned to one strip convention.

    ``regular`` keeps ``|Im| < 1/6``; ``singular`` keeps ``Im in (-1, 0)``
    and refuses the half-line ``Im = -1/2``.  The two values of the same
    point differ by an integer multiple of ``i`` whenever both exist.
    """

    value: ComplexHP
    convention: str

    @property
    def kappa(self) -> ComplexHP:
        """``i`` times the exponent, the shift seen by the plane-wave tables."""
        with workdps(self.value.digits + _GUARD):
            v = self.value.mpc
            return hp(mp.mpc(-mp.im(v), mp.re(v)), self.value.digits)


@dataclass(frozen=True)
class AlgebraicCase:
    """One constant-solution record: initial value, point, and raw relations.

    ``relations`` lists the constraints satisfied by every gauge lift as
    ``(label, value)`` pairs, e.g. ``("g12*g21", -1)``.
    """

    label: str
    H0: ComplexHP
    point: MonodromyPoint
    s00: ComplexHP
    relations: tuple


def _cube_root():
    return mp.exp(2j * mp.pi / 3)


def _excluded_index(h, tol):
    if mp.fabs(h) < tol:
        return 0, "0"
    w = _cube_root()
    for idx, val, name in ((1, mp.mpc(1), "1"),
                           (2, w, "exp(2*pi*i/3)"),
                           (3, mp.conj(w), "exp(-2*pi*i/3)")):
        if mp.fabs(h - val) < tol:
            return idx, name
    return None, None


def from_H0(H0, digits: int = DEFAULT_DIGITS) -> MonodromyPoint:
    """Map an initial value ``H(0)`` to its contracted point.

    The assignment (always with ``s = 0``) reads

        ``g4 = (H0-1)**2 / (3*H0)``,
        ``g3 = (H0-w)*(H0-conj(w)) / (3*H0)``  with ``w = exp(2*pi*i/3)``,
        ``g2 = -conj(w)/(3*H0) * (H0-1)*(H0-conj(w))``,
        ``g1 = w/(3*H0) * (H0-1)*(H0-w)``.

    The cube roots of unity (and zero) are refused: the formulas degenerate
    into the constant solutions, which ``algebraic_cases`` carries exactly.
    """
    with workdps(digits + _GUARD):
        h = _to_mpc(H0)
        tol = mp.mpf(10) ** (4 - digits)
        idx, name = _excluded_index(h, tol)
        if idx == 0:
            raise ExcludedValueError("H(0) = 0 admits no solution data")
        if idx is not None:
            raise ExcludedValueError(
                f"H(0) = {name} is a constant solution; "
                f"use algebraic_cases()[{idx - 1}]")
        w = _cube_root()
        wb = mp.conj(w)
        g4 = (h - 1) ** 2 / (3 * h)
        g3 = (h - w) * (h - wb) / (3 * h)
        g2 = -(wb / (3 * h)) * (h - 1) * (h - wb)
        g1 = (w / (3 * h)) * (h - 1) * (h - w)
        return MonodromyPoint(
            s=hp(0, digits),
            g1=hp(g1, digits),
            g2=hp(g2, digits),
            g3=hp(g3, digits),
            g4=hp(g4, digits),
        )


def manifold_residuals(point) -> tuple:
    """Absolute residuals of the defining equations at ``point``.

    For a :class:`MonodromyPoint` the five entries are the two surface
    equations, the two contraction identities ``g3 - g4 = 1`` and
    ``g3*g4 = -g1*g2``, and the single-equation form
    ``g1**2 + g1*g3*(1-s) + g3**2 = g1 + g3``.

    For a :class:`ManifoldPoint` the six entries are the five raw relations
    followed by the product of the two quadratic ones against ``2 + i*s00``;
    that last combination is implied by the rest (the manifold has dimension
    three), so it vanishes exactly when the others do.
    """
    if isinstance(point, MonodromyPoint):
        with workdps(point.digits + _GUARD):
            s = point.s.mpc
            g1 = point.g1.mpc
            g2 = point.g2.mpc
            g3 = point.g3.mpc
            g4 = point.g4.mpc
            return (
                mp.fabs(g1 - g2 + g3 * (1 - s) - 1),
                mp.fabs(g3 * (g3 - 1) + g2 * g1),
                mp.fabs(g3 - g4 - 1),
                mp.fabs(g3 * g4 + g1 * g2),
                mp.fabs(g1 ** 2 + g1 * g3 * (1 - s) + g3 ** 2 - g1 - g3),
            )
    if isinstance(point, ManifoldPoint):
        with workdps(point.digits + _GUARD):
            s00 = point.s00.mpc
            s0 = point.s0inf.mpc
            s1 = point.s1inf.mpc
            g11 = point.g11.mpc
            g12 = point.g12.mpc
            g21 = point.g21.mpc
            g22 = point.g22.mpc
            lhs4 = g11 ** 2 - g21 ** 2 - s00 * g11 * g21
            lhs5 = g22 ** 2 - g12 ** 2 + s00 * g12 * g22
            return (
                mp.fabs(s0 * s1 + 2 + 1j * s00),
                mp.fabs(g21 * g22 - g11 * g12 + s00 * g11 * g22 - 1j),
                mp.fabs(lhs4 - 1j * s0),
                mp.fabs(lhs5 - 1j * s1),
                mp.fabs(g11 * g22 - g12 * g21 - 1),
                mp.fabs(lhs4 * lhs5 - (2 + 1j * s00)),
            )
    raise MonodromyError(f"no residuals defined for {type(point).__name__}")


def nu1(H0, convention: str, digits: int = DEFAULT_DIGITS) -> Nu1:
    """Branch exponent of ``g3`` at ``H(0)``, shifted into the chosen strip.

    ``exp(2*pi*nu1) = g3`` in either convention; the shift between reachable
    conventions is an integer multiple of ``i``.  Raises when ``g3``
    vanishes (cube-root initial values) or when no shift lands inside the
    strip: ``regular`` needs ``|arg g3| < pi/3``, ``singular`` refuses real
    positive and real negative ``g3``.
    """
    if convention not in _CONVENTIONS:
        raise MonodromyError(f"unknown convention {convention!r}")
    with workdps(digits + _GUARD):
        h = _to_mpc(H0)
        tol = mp.mpf(10) ** (4 - digits)
        if mp.fabs(h) < tol:
            raise ExcludedValueError("H(0) = 0 admits no solution data")
        g3 = (h * h + h + 1) / (3 * h)
        if mp.fabs(g3) < tol:
            raise ExcludedValueError(
                "g3 vanishes at the cube-root initial values; "
                "the exponent is undefined there")
        base = mp.log(g3) / (2 * mp.pi)
        re = mp.re(base)
        im = mp.im(base)
        sixth = mp.mpf(1) / 6
        if convention == "regular":
            if mp.fabs(im) < sixth:
                return Nu1(hp(mp.mpc(re, im), digits), convention)
            raise ConventionUnreachableError(
                "regular strip |Im nu1| < 1/6 unreachable: "
                f"Im = {mp.nstr(im, 8)} mod i")
        for shift in (0, -1, 1):
            cand = im + shift
            if -1 < cand < 0:
                if cand == mp.mpf(-1) / 2:
                    raise ConventionUnreachableError(
                        "singular strip excludes Im nu1 = -1/2 "
                        "(real negative g3)")
                return Nu1(hp(mp.mpc(re, cand), digits), convention)
        raise ConventionUnreachableError(
            "singular strip Im nu1 in (-1, 0) unreachable: "
            f"Im = {mp.nstr(im, 8)} mod i (real positive g3)")


def algebraic_cases(digits: int = DEFAULT_DIGITS) -> tuple:
    """The three constant-solution records, with exact contracted points.

    Case data (the raw relations hold in every gauge lift):

    * ``H0 = 1``:              ``g3 = 1``, others zero;
      ``g12 = g21 = 0``, ``g11*g22 = 1``.
    * ``H0 = exp(2*pi*i/3)``:  ``g2 = -1``, ``g4 = -1``, ``g1 = g3 = 0``;
      ``g11 = 0``, ``g12*g21 = -1``, ``g21*g22 = i``.
    * ``H0 = exp(-2*pi*i/3)``: ``g1 = 1``, ``g4 = -1``, ``g2 = g3 = 0``;
      ``g22 = 0``, ``g12*g21 = -1``, ``g11*g12 = -i``.

    ``g4 = g3 - 1`` throughout; the determinant relation forces ``g4 = -1``
    in the last two cases.
    """
    with workdps(digits + _GUARD):
        w = hp(_cube_root(), digits)
        wb = hp(mp.conj(_cube_root()), digits)
    zero = hp(0, digits)
    one = hp(1, digits)
    mone = hp(-1, digits)
    eye = hp(1j, digits)
    meye = hp(-1j, digits)
    case1 = AlgebraicCase(
        label="H0=1",
        H0=one,
        point=MonodromyPoint(s=zero, g1=zero, g2=zero, g3=one, g4=zero),
        s00=eye,
        relations=(("g12", zero), ("g21", zero), ("g11*g22", one)),
    )
    case2 = AlgebraicCase(
        label="H0=exp(2*pi*i/3)",
        H0=w,
        point=MonodromyPoint(s=zero, g1=zero, g2=mone, g3=zero, g4=mone),
        s00=eye,
        relations=(("g11", zero), ("g12*g21", mone), ("g21*g22", eye)),
    )
    case3 = AlgebraicCase(
        label="H0=exp(-2*pi*i/3)",
        H0=wb,
        point=MonodromyPoint(s=zero, g1=one, g2=zero, g3=zero, g4=mone),
        s00=eye,
        relations=(("g22", zero), ("g12*g21", mone), ("g11*g12", meye)),
    )
    return (case1, case2, case3)


def lift(point: MonodromyPoint, g11=1) -> ManifoldPoint:
    """One gauge lift of a contracted point back to seven coordinates.

    The free gauge parameter scales one matrix column; the default keeps
    ``g11 = 1`` (or, when ``g3 = 0`` forces ``g11 = 0`` or ``g22 = 0``, the
    surviving free entry is set from it instead).  All raw relations then
    hold automatically for surface points, with ``s0inf`` and ``s1inf``
    read off from the two quadratic relations.
    """
    d = point.digits
    with workdps(d + _GUARD):
        t = _to_mpc(g11)
        if t == 0:
            raise MonodromyError("the gauge parameter must be nonzero")
        s = point.s.mpc
        g1 = point.g1.mpc
        g2 = point.g2.mpc
        g3 = point.g3.mpc
        g4 = point.g4.mpc
        s00 = -1j * (s - 1)
        tiny = mp.mpf(10) ** (4 - d)
        if mp.fabs(g3) > tiny:
            G11 = t
            G22 = g3 / t
            G12 = -1j * g1 / t
            G21 = -1j * g2 * t / g3
        elif mp.fabs(g2) > tiny:
            G11 = mp.mpc(0)
            G21 = t
            G22 = -1j * g2 / t
            G12 = g4 / t
        else:
            if mp.fabs(g1) < tiny:
                raise MonodromyError(
                    "no lift: g1 = g2 = g3 = 0 is off the surface")
            G11 = t
            G12 = -1j * g1 / t
            G22 = mp.mpc(0)
            G21 = g4 / G12
        s0inf = -1j * (G11 ** 2 - G21 ** 2 - s00 * G11 * G21)
        s1inf = -1j * (G22 ** 2 - G12 ** 2 + s00 * G12 * G22)
        return ManifoldPoint(
            s00=hp(s00, d), s0inf=hp(s0inf, d), s1inf=hp(s1inf, d),
            g11=hp(G11, d), g12=hp(G12, d), g21=hp(G21, d), g22=hp(G22, d),
        )


def real_form_residuals(point: RealFormPoint) -> tuple:
    """Residuals of the companion-surface equations at ``point``."""
    with workdps(point.digits + _GUARD):
        g1 = point.g1.mpc
        g2 = point.g2.mpc
        g3 = point.g3.mpc
        s = point.s.mpc
        return (
            mp.fabs(g1 + g2 * (1 - s) + g3 - 1),
            mp.fabs(g2 * (g2 - 1) - g1 * g3),
        )


_WHICH = ("sym_g2neg", "sym_g2g1", "tz3x3")


def map_variants(point, which: str, H0=None):
    """Move a point between the two surfaces along one named identification.

    With a :class:`MonodromyPoint` input the result is the matching
    :class:`RealFormPoint`:

    * ``sym_g2neg``: ``(g1 - s*(g2 + g3), -g2, g3, s)``;
    * ``sym_g2g1``:  ``(-g2 + s*(g1 - g3), g1, g3, s)``;
    * ``tz3x3``:     the 3x3-problem data for the given ``H0`` (requires
      ``s = 0`` and checks it agrees with ``point`` through
      ``g1 -> g1, g2 -> -g2, g3 -> g3``).

    A :class:`RealFormPoint` input applies the same identification solved
    the other way, so mapping twice returns to the start.
    """
    if which not in _WHICH:
        raise MonodromyError(f"unknown map {which!r}")
    if not isinstance(point, (MonodromyPoint, RealFormPoint)):
        raise MonodromyError(f"cannot map {type(point).__name__}")
    d = point.digits
    if isinstance(point, MonodromyPoint):
        with workdps(d + _GUARD):
            s = point.s.mpc
            g1 = point.g1.mpc
            g2 = point.g2.mpc
            g3 = point.g3.mpc
            if which == "sym_g2neg":
                out = (g1 - s * (g2 + g3), -g2, g3, s)
            elif which == "sym_g2g1":
                out = (-g2 + s * (g1 - g3), g1, g3, s)
            else:
                if H0 is None:
                    raise MonodromyError("tz3x3 needs the initial value H0")
                tol = mp.mpf(10) ** (8 - d)
                if mp.fabs(s) > tol:
                    raise MonodromyError("tz3x3 data exists only at s = 0")
                h = _to_mpc(H0)
                if mp.fabs(h) < mp.mpf(10) ** (4 - d):
                    raise ExcludedValueError("H(0) = 0 admits no solution data")
                w = _cube_root()
                wb = mp.conj(w)
                G1 = (w / (3 * h)) * (h - w) * (h - 1)
                G2 = (wb / (3 * h)) * (h - wb) * (h - 1)
                G3 = (h + 1 + 1 / h) / 3
                scale = 1 + max(mp.fabs(G1), mp.fabs(G2), mp.fabs(G3))
                if (mp.fabs(G1 - g1) > tol * scale
                        or mp.fabs(G2 + g2) > tol * scale
                        or mp.fabs(G3 - g3) > tol * scale):
                    raise MonodromyError(
                        "H0 does not reproduce the given point under "
                        "g1 -> g1, g2 -> -g2, g3 -> g3")
                out = (G1, G2, G3, mp.mpc(0))
            return RealFormPoint(
                g1=hp(out[0], d), g2=hp(out[1], d),
                g3=hp(out[2], d), s=hp(out[3], d),
            )
    if isinstance(point, RealFormPoint):
        with workdps(d + _GUARD):
            s = point.s.mpc
            r1 = point.g1.mpc
            r2 = point.g2.mpc
            r3 = point.g3.mpc
            if which == "sym_g2neg":
                t2 = -r2
                t3 = r3
                t1 = r1 + s * (t2 + t3)
            elif which == "sym_g2g1":
                t1 = r2
                t3 = r3
                t2 = -r1 + s * (t1 - t3)
            else:
                tol = mp.mpf(10) ** (8 - d)
                if mp.fabs(s) > tol:
                    raise MonodromyError("tz3x3 data exists only at s = 0")
                t1, t2, t3 = r1, -r2, r3
            return MonodromyPoint(
                s=hp(s, d), g1=hp(t1, d), g2=hp(t2, d),
                g3=hp(t3, d), g4=hp(t3 - 1, d),
            )


def rho_from_s(s, digits: int = DEFAULT_DIGITS) -> tuple:
    """Solve ``cos(2*pi*rho) = (1 - s)/2`` on the principal branch.

    Returns ``(rho, rho1)`` with ``rho1 = 1/2 - rho``; for real ``s``
    strictly between the boundary values ``-1`` and ``3`` this pins
    ``2*rho`` inside ``(0, 1)``.  The boundary values themselves are
    logarithmic degenerations and raise.
    """
    with workdps(digits + _GUARD):
        sv = _to_mpc(s)
        tol = mp.mpf(10) ** (4 - digits)
        for excl in (-1, 3):
            if mp.fabs(sv - excl) < tol:
                raise BoundaryValueError(
                    f"s = {excl} is a logarithmic boundary case")
        rho = mp.acos((1 - sv) / 2) / (2 * mp.pi)
        rho1 = mp.mpf(1) / 2 - rho
        return (hp(rho, digits), hp(rho1, digits))


def point_to_json(point) -> str:
    """Serialize a contracted or raw point, tagged by kind."""
    if isinstance(point, MonodromyPoint):
        obj = {"kind": "contracted",
               "s": _hp_obj(point.s),
               "g1": _hp_obj(point.g1), "g2": _hp_obj(point.g2),
               "g3": _hp_obj(point.g3), "g4": _hp_obj(point.g4)}
    elif isinstance(point, ManifoldPoint):
        obj = {"kind": "raw",
               "s00": _hp_obj(point.s00),
               "s0inf": _hp_obj(point.s0inf), "s1inf": _hp_obj(point.s1inf),
               "g11": _hp_obj(point.g11), "g12": _hp_obj(point.g12),
               "g21": _hp_obj(point.g21), "g22": _hp_obj(point.g22)}
    elif isinstance(point, RealFormPoint):
        obj = {"kind": "real_form",
               "g1": _hp_obj(point.g1), "g2": _hp_obj(point.g2),
               "g3": _hp_obj(point.g3), "s": _hp_obj(point.s)}
    else:
        raise MonodromyError(f"cannot serialize {type(point).__name__}")
    return json.dumps(obj, sort_keys=True)


def point_from_json(text: str):
    """Inverse of :func:`point_to_json`."""
    obj = json.loads(text)
    kind = obj.get("kind")
    if kind == "contracted":
        return MonodromyPoint(
            s=_hp_from(obj["s"]),
            g1=_hp_from(obj["g1"]), g2=_hp_from(obj["g2"]),
            g3=_hp_from(obj["g3"]), g4=_hp_from(obj["g4"]))
    if kind == "raw":
        return ManifoldPoint(
            s00=_hp_from(obj["s00"]),
            s0inf=_hp_from(obj["s0inf"]), s1inf=_hp_from(obj["s1inf"]),
            g11=_hp_from(obj["g11"]), g12=_hp_from(obj["g12"]),
            g21=_hp_from(obj["g21"]), g22=_hp_from(obj["g22"]))
    if kind == "real_form":
        return RealFormPoint(
            g1=_hp_from(obj["g1"]), g2=_hp_from(obj["g2"]),
            g3=_hp_from(obj["g3"]), s=_hp_from(obj["s"]))
    raise MonodromyError(f"unknown point kind {kind!r}")


def nu1_to_json(val: Nu1) -> str:
    """Serialize an exponent together with its strip convention."""
    return json.dumps({"value": _hp_obj(val.value),
                       "convention": val.convention}, sort_keys=True)


def nu1_from_json(text: str) -> Nu1:
    """Inverse of :func:`nu1_to_json`."""
    obj = json.loads(text)
    conv = obj["convention"]
    if conv not in _CONVENTIONS:
        raise MonodromyError(f"unknown convention {conv!r}")
    return Nu1(value=_hp_from(obj["value"]), convention=conv)
