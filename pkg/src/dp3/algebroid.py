"""Algebroid solution families: charts, branch vectors, and polynomial relations.

One integer label ``p`` selects a family of solutions of the scaled equation
``(t y'/y)' = y - t/y**2`` that are algebroid at the origin:

* ``p = n >= 1`` picks the family with ``t*y = c**2 * W(z)``,
  ``z = ((2n+3)/4)**6 * t**4`` and ``c**2 = (4/(2n+3))**2``;
* ``p = 0`` picks the base family (Taylor coefficients from :mod:`dp3.series`),
  ``z = (9/16)**3 * t**4`` and ``c**2 = 16/9``;
* ``p = -m <= -1`` picks the family with ``c**2 = 2*(4/(m+3))**2`` and a chart
  ``z = scale * t**k`` whose degree ``k`` in ``{4, 2, 1}`` depends on
  ``(m+3) mod 4``.

In every chart the branch sum ``W(z) = sum_q z**(q/nu) * fhat_q(z)`` has
``nu`` branches, the ``fhat_q`` are ordinary power series built from one
coefficient sequence, and ``W`` satisfies the master relation
``W d2W - (dW)**2 = F*(W**3 - z)`` with ``d = z d/dz`` and a rational family
constant ``F``.  Fractional powers follow the principal rule
``z**(q/nu) = |z|**(q/nu) * exp(i*(q/nu)*arg z)`` with the chart argument
``arg z = chart_exp * arg t`` carried without reduction.

The module computes the coefficient sequences by a mechanical recurrence,
assembles branch vectors and the ``nu x nu`` power matrices, extracts the
degree-``nu`` polynomial equation satisfied by ``t*y``, evaluates the graded
quadratic-cubic system residuals, and checks the rotation symmetries and the
exponent group law.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp, workdps

from dp3 import series
from dp3.series import (
    CoeffTable,
    LaurentRatPoly,
    ZeroA0Error,
    _frac_from,
    _frac_obj,
    _hp_from,
    _hp_obj,
    _laurent_obj,
)
from dp3.specfun import DEFAULT_DIGITS, ComplexHP, hp

_GUARD = 12
_FNU_SYMBOLIC_CAP = 8
_FNU_NUMERIC_CAP = 12


class AlgebroidError(ValueError):
    """Base class for errors raised by this module."""


class UnsupportedFamilyError(AlgebroidError):
    """The requested family label has no chart of the supported shape."""


class OrderTooShortError(AlgebroidError):
    """A supplied coefficient table is too short for the requested order."""


class CapExceededError(AlgebroidError):
    """The requested branch count exceeds what the matrix routines allow."""


class SingularTruncationError(AlgebroidError):
    """The truncated determinant has no usable leading coefficient."""


class StructureMismatchError(AlgebroidError):
    """Computed coefficients violate the asserted structural form."""


class AnomalyWarning(UserWarning):
    """A structurally allowed coefficient vanished identically."""


# ---------------------------------------------------------------------------
# Family charts

@dataclass(frozen=True)
class AlgebroidFamily:
    """Chart data for one family label.

    ``alpha`` is the ramification exponent of the underlying substitution,
    ``two_rho`` the decay exponent of ``y`` at the origin; both are pinned
    by the pair ``(n, m)`` encoded in ``p`` and validated on construction.
    """

    p: int
    alpha: Fraction
    two_rho: Fraction

    def __post_init__(self) -> None:
        n, m = self.n, self.m
        if self.alpha != Fraction(m + 2 * n + 3, 4):
            raise AlgebroidError("alpha inconsistent with the label")
        if self.two_rho != Fraction(m + 1, m + 3 + 2 * n):
            raise AlgebroidError("two_rho inconsistent with the label")
        if not 0 < self.two_rho < 1:
            raise AlgebroidError("two_rho must lie in (0, 1)")

    @classmethod
    def from_label(cls, p: int) -> "AlgebroidFamily":
        n, m = (p, 0) if p >= 1 else (0, -p)
        return cls(p, Fraction(m + 2 * n + 3, 4), Fraction(m + 1, m + 3 + 2 * n))

    @property
    def n(self) -> int:
        return self.p if self.p >= 1 else 0

    @property
    def m(self) -> int:
        return -self.p if self.p <= 0 else 0

    @property
    def chart_exp(self) -> int:
        """Degree ``k`` of ``t`` in the chart variable ``z = scale * t**k``."""
        if self.p >= 0:
            return 4
        r = (self.m + 3) % 4
        if r % 2 == 1:
            return 4
        return 2 if r == 2 else 1

    @property
    def nu(self) -> int:
        """Branch count of ``t*y`` over the ``z``-chart."""
        if self.p >= 0:
            return 2 * self.n + 3
        return ((self.m + 3) * self.chart_exp) // 4

    @property
    def prefactor(self) -> Fraction:
        """Rational ``c**2`` in ``t*y = c**2 * W(z)``."""
        if self.p >= 1:
            return Fraction(16, (2 * self.n + 3) ** 2)
        if self.p == 0:
            return Fraction(16, 9)
        return Fraction(32, (self.m + 3) ** 2)

    @property
    def scale_base(self) -> Fraction:
        """Rational ``scale**(4/chart_exp)`` of the chart ``z = scale * t**k``."""
        if self.p >= 0:
            return Fraction((2 * self.n + 3) ** 6, 4**6)
        return Fraction((self.m + 3) ** 6, 2**15)

    @property
    def master_constant(self) -> Fraction:
        """Constant ``F`` in ``W d2W - (dW)**2 = F*(W**3 - z)``."""
        if self.p >= 0:
            return Fraction(1, (2 * self.n + 3) ** 2)
        if self.m % 2 == 1:
            raise UnsupportedFamilyError(
                "odd m charts carry z**2 or z**4 on the cubic side; "
                "no single master constant exists"
            )
        return Fraction(2, (self.m + 3) ** 2)

    def z_scale(self, digits: int = DEFAULT_DIGITS):
        """Chart scale as an mpf, ``z = z_scale * t**chart_exp``."""
        with workdps(digits + _GUARD):
            base = mp.mpf(self.scale_base.numerator) / self.scale_base.denominator
            return base ** (mp.mpf(self.chart_exp) / 4)


# ---------------------------------------------------------------------------
# Ring-agnostic series helpers (entries: LaurentRatPoly, Fraction, or mpc)

def _is_zero(x) -> bool:
    if isinstance(x, LaurentRatPoly):
        return x.is_zero()
    return x == 0


def _one_like(x):
    if isinstance(x, LaurentRatPoly):
        return LaurentRatPoly.const(1)
    if isinstance(x, Fraction):
        return Fraction(1)
    return x * 0 + 1


def _ser_add(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, bi in enumerate(b):
        out[i] = out[i] + bi
    return out


def _ser_mul(a, b, top, zero):
    out = [zero] * (top + 1)
    for i, ai in enumerate(a):
        if i > top or _is_zero(ai):
            continue
        stop = min(top - i, len(b) - 1)
        for j in range(stop + 1):
            bj = b[j]
            if not _is_zero(bj):
                out[i + j] = out[i + j] + ai * bj
    return out


def _ser_shift(a, s, top, zero):
    return ([zero] * s + list(a))[: top + 1]


def _ser_delta(a):
    return [c * l for l, c in enumerate(a)]


def _ser_eval(a, z):
    tot = z * 0
    for c in reversed(a):
        tot = tot * z + c
    return tot


def _to_mpc_list(entry):
    out = []
    for c in entry:
        if isinstance(c, ComplexHP):
            out.append(c.mpc)
        elif isinstance(c, Fraction):
            out.append(mp.mpc(mp.mpf(c.numerator) / c.denominator))
        elif isinstance(c, LaurentRatPoly):
            raise AlgebroidError("symbolic entries have no numeric value")
        else:
            out.append(mp.mpc(c))
    return out


# ---------------------------------------------------------------------------
# Chart coefficients

def hp_ode_residual(p: int, b: list, through: int) -> list:
    """Residual coefficients of the multiplied-through chart equation.

    ``b`` holds the series coefficients of ``H(x) = b_0 + b_1 x + ...`` in
    the ``p``-chart, in any ring supporting ``+``, ``*`` and multiplication
    by int (Laurent monomials, Fractions, or mpc values).  Returns the
    coefficients of orders ``0 .. through`` of

    * ``x H H'' - x (H')**2 + H H' - x**n H**3 + 1``       for ``p = n >= 0``,
    * ``x H H'' - x (H')**2 + H H' - 2 H**3 + 2 x**m``     for ``p = -m <= -1``,

    all of which vanish when ``b`` solves the chart equation.  The order-K
    coefficient is linear in ``b[K+1]`` with factor ``(K+1)**2 * b[0]``; the
    solver exploits exactly this, so the routine doubles as its witness.
    """
    if through + 2 > len(b):
        raise OrderTooShortError("need coefficients through order through+1")
    n, m = (p, 0) if p >= 0 else (0, -p)
    zero = b[0] * 0
    one = _one_like(b[0])
    sq = []
    cube = []
    for i in range(through + 1):
        acc = zero
        for l in range(i + 1):
            acc = acc + b[l] * b[i - l]
        sq.append(acc)
        acc = zero
        for l in range(i + 1):
            acc = acc + b[l] * sq[i - l]
        cube.append(acc)
    out = []
    for K in range(through + 1):
        acc = zero
        for j in range(1, K + 2):
            acc = acc + (b[j] * b[K + 1 - j]) * (j * j)
        for i in range(1, K + 1):
            acc = acc - (b[i] * b[K + 1 - i]) * (i * (K + 1 - i))
        if p >= 0:
            if K >= n:
                acc = acc - cube[K - n]
            if K == 0:
                acc = acc + one
        else:
            acc = acc - cube[K] * 2
            if K == m:
                acc = acc + one * 2
        out.append(acc)
    return out


def _allowed_exponents(p: int, k: int) -> set:
    """Supported a0-exponents of the k-th chart coefficient (exact mode)."""
    if p >= 1:
        pairs, _ = partition_set(k, p)
        return {mj + 1 - 2 * lj for mj, lj in pairs}
    m = -p
    lmax = (k + 1) // (m + 2)
    return {k + 1 - (m + 3) * l for l in range(lmax + 1)}


def hp_coeffs(
    p: int,
    mode: str,
    N: int,
    a0=None,
    digits: int = DEFAULT_DIGITS,
) -> CoeffTable:
    """Chart coefficients ``a_1 .. a_N`` of the family ``p``.

    The series is ``H(x) = -a_0 + sum_{k>=1} a_k x**k`` in the family chart;
    as in :func:`dp3.series.taylor_coeffs`, slot 0 of the returned table
    stores ``a_0`` itself.  Exact mode is symbolic in ``a_0`` (``a0`` is
    ignored) and verifies the asserted support structure of every
    coefficient; numeric mode evaluates at the given ``a0``.  ``p = 0`` is
    the base chart owned by :func:`dp3.series.taylor_coeffs`.
    """
    if p == 0:
        raise UnsupportedFamilyError(
            "p = 0 coefficients come from dp3.series.taylor_coeffs"
        )
    AlgebroidFamily.from_label(p)
    if N < 1:
        raise AlgebroidError("N must be >= 1")
    exact = mode == "exact"
    if not exact and mode != "numeric":
        raise AlgebroidError(f"unknown mode {mode!r}")

    if exact:
        b = [LaurentRatPoly({1: Fraction(-1)})]
        one = LaurentRatPoly.const(1)
        zero = LaurentRatPoly({})
    else:
        if a0 is None:
            raise AlgebroidError("numeric mode needs a0")
        a0 = hp(a0, digits)
        if a0.is_zero():
            raise ZeroA0Error("a0 must be nonzero")

    with workdps(digits + _GUARD):
        if not exact:
            b = [-a0.mpc]
            one = mp.mpc(1)
            zero = mp.mpc(0)
        sq = [b[0] * b[0]]
        cube = [sq[0] * b[0]]
        for K in range(N):
            acc = zero
            for j in range(1, K + 1):
                acc = acc + (b[j] * b[K + 1 - j]) * (j * j)
            for i in range(1, K + 1):
                acc = acc - (b[i] * b[K + 1 - i]) * (i * (K + 1 - i))
            if p >= 1:
                if K >= p:
                    acc = acc - cube[K - p]
                if K == 0:
                    acc = acc + one
            else:
                acc = acc - cube[K] * 2
                if K == -p:
                    acc = acc + one * 2
            # residual_K = acc + (K+1)^2 b_0 b_{K+1} = 0
            if exact:
                nxt = acc.shift(-1) * Fraction(1, (K + 1) ** 2)
            else:
                nxt = -acc / b[0] / ((K + 1) ** 2)
            b.append(nxt)
            sq.append(_conv_at(b, b, K + 1, zero))
            cube.append(_conv_at(b, sq, K + 1, zero))

    if exact:
        for k in range(1, N + 1):
            allowed = _allowed_exponents(p, k)
            got = set(b[k].coeffs)
            if not got <= allowed:
                raise StructureMismatchError(
                    f"coefficient {k} of family {p} has exponents "
                    f"{sorted(got - allowed)} outside the asserted support"
                )
            for e in sorted(allowed - got):
                warnings.warn(
                    f"family {p}: structurally allowed a0**{e} term of "
                    f"coefficient {k} vanishes",
                    AnomalyWarning,
                    stacklevel=2,
                )
            if p <= -1:
                lead = Fraction((-1) ** (k + 1) * (k + 1))
                if b[k].coeffs.get(k + 1) != lead:
                    raise StructureMismatchError(
                        f"family {p}: leading a0**{k + 1} term of "
                        f"coefficient {k} is not {lead}"
                    )
        if p >= 1 and b[1] != LaurentRatPoly({-1: Fraction(1)}):
            raise StructureMismatchError("first coefficient must be 1/a0")
        a = (LaurentRatPoly.a0_power(1),) + tuple(b[1:])
        return CoeffTable(mode="exact", order=N, a=a, a0=None)

    a = (a0,) + tuple(ComplexHP.make(x, digits) for x in b[1:])
    return CoeffTable(mode="numeric", order=N, a=a, a0=a0)


def _conv_at(u, v, i, zero):
    acc = zero
    for l in range(i + 1):
        acc = acc + u[l] * v[i - l]
    return acc


def partition_set(k: int, n: int):
    """Decompositions ``k = (n+1)*m_j + l_j`` with ``0 <= l_j <= m_j + 1``.

    Returns the pairs in descending ``m_j`` order together with their count;
    the count always equals ``floor((k+2n+2)/(n+1)) - floor((k+2n+2)/(n+2))``.
    """
    if k < 1 or n < 1:
        raise AlgebroidError("need k >= 1 and n >= 1")
    pairs = []
    for mj in range(k // (n + 1), -1, -1):
        lj = k - (n + 1) * mj
        if 0 <= lj <= mj + 1:
            pairs.append((mj, lj))
    card = (k + 2 * n + 2) // (n + 1) - (k + 2 * n + 2) // (n + 2)
    if card != len(pairs):
        raise AlgebroidError("cardinality formula mismatch")
    return tuple(pairs), card


# ---------------------------------------------------------------------------
# Branch vectors

@dataclass(frozen=True)
class BranchVector:
    """Truncated branch components ``fhat_0 .. fhat_{p-1}`` of one family.

    ``p`` is the branch count, ``label`` the family label, each component a
    tuple of series coefficients through order ``L`` (ComplexHP in numeric
    mode, Laurent monomials or Fractions in exact mode), and
    ``t*y = prefactor * sum_q z**(q/p) * fhat_q(z)`` in the chart
    ``z = scale * t**chart_exp``.
    """

    label: int
    p: int
    L: int
    mode: str
    fhat: tuple
    a0: object
    prefactor: Fraction
    chart_exp: int


def _branch_layout(fam: AlgebroidFamily, f: list) -> list:
    """Arrange plain components ``f_q`` into the hatted layout."""
    nu = fam.nu
    if fam.p >= 1:
        n = fam.n
        hats = [("z", f[q + n + 2]) for q in range(n + 1)]
        hats += [("", f[q - n - 1]) for q in range(n + 1, nu)]
        return hats
    return [("z", f[nu - 1])] + [("", f[q - 1]) for q in range(1, nu)]


def _expected_nonzero(fam: AlgebroidFamily) -> set:
    if fam.p >= 1:
        n = fam.n
        return {n + 1, n + 2, 2 * n + 2}
    return set(range(1, fam.nu))


def branch_series(
    p: int,
    a0,
    L: int,
    mode: str = "numeric",
    digits: int = DEFAULT_DIGITS,
    table: CoeffTable | None = None,
) -> BranchVector:
    """Branch components of the family ``p`` through order ``L``.

    Exact mode keeps monomials in ``a0`` when ``a0`` is None and evaluates
    at ``a0`` when it is a Fraction.  A supplied ``table`` must hold at
    least ``L*nu + nu`` coefficients.  The zero/nonzero pattern of the
    components at ``z = 0`` is asserted; it fails for the degenerate values
    of ``a0`` at which a structurally nonzero coefficient vanishes.
    """
    fam = AlgebroidFamily.from_label(p)
    nu = fam.nu
    if L < 1:
        raise AlgebroidError("L must be >= 1")
    need = L * nu + nu
    if table is not None and table.order < need:
        raise OrderTooShortError(
            f"table holds {table.order} coefficients, need {need}"
        )
    if table is None:
        if p == 0:
            table = series.taylor_coeffs(
                mode, need, a0=a0 if mode == "numeric" else None, digits=digits
            )
        else:
            table = hp_coeffs(p, mode, need, a0=a0, digits=digits)

    if mode == "exact":
        if a0 is not None and not isinstance(a0, Fraction):
            raise AlgebroidError("exact mode takes a0 as Fraction or None")
        if a0 == 0:
            raise ZeroA0Error("a0 must be nonzero")
        if a0 is None:
            b = [-table.a[0]] + [table.a[k] for k in range(1, need + 1)]
        else:
            b = [-table.a[0].eval(a0)] + [
                table.a[k].eval(a0) for k in range(1, need + 1)
            ]
        zero = b[0] * 0
        a0_out = a0
    elif mode == "numeric":
        digits = table.a[0].digits
        with workdps(digits + _GUARD):
            b = [-table.a[0].mpc] + [
                table.a[k].mpc for k in range(1, need + 1)
            ]
        zero = mp.mpc(0)
        a0_out = table.a[0]
    else:
        raise AlgebroidError(f"unknown mode {mode!r}")

    f = [[b[l * nu + q] for l in range(L + 1)] for q in range(nu)]
    hats = []
    for kind, comp in _branch_layout(fam, f):
        hats.append([zero] + comp[:L] if kind == "z" else list(comp))
    nonzero = _expected_nonzero(fam)
    for q, h in enumerate(hats):
        if (q in nonzero) == _is_zero(h[0]):
            raise StructureMismatchError(
                f"component {q} of family {p} violates the z=0 pattern"
            )
    if mode == "numeric":
        hats = [tuple(ComplexHP.make(c, digits) for c in h) for h in hats]
    else:
        hats = [tuple(h) for h in hats]
    return BranchVector(
        label=p,
        p=nu,
        L=L,
        mode=mode,
        fhat=tuple(hats),
        a0=a0_out,
        prefactor=fam.prefactor,
        chart_exp=fam.chart_exp,
    )


def _raw_components(bv: BranchVector):
    """Unwrap branch components to plain ring elements plus a ring zero.

    Numeric unwrapping happens at the vector's own precision; the mpc
    values stay exact afterwards, but any arithmetic on them must run
    inside a matching ``workdps`` block.
    """
    if bv.mode == "numeric":
        with workdps(bv.fhat[0][0].digits + _GUARD):
            return [[c.mpc for c in h] for h in bv.fhat], mp.mpc(0)
    comps = [list(h) for h in bv.fhat]
    return comps, comps[0][0] * 0


def _bv_digits(bv: BranchVector) -> int:
    if bv.mode == "numeric":
        return bv.fhat[0][0].digits
    return DEFAULT_DIGITS


def _ring_one(bv: BranchVector):
    if bv.mode == "numeric":
        return mp.mpc(1)
    return _one_like(bv.fhat[0][0])


# ---------------------------------------------------------------------------
# Power matrices and determinants

@dataclass(frozen=True)
class FnuMatrix:
    """Power matrix of the branch sum.

    ``entries[k-1][q]`` is the coefficient series of ``w**q`` in ``g**k``
    where ``g = sum_q w**q fhat_q(z)`` and ``w**nu = z``; series are plain
    ring elements (mpc in numeric mode), truncated at order ``L``.
    """

    nu: int
    L: int
    mode: str
    entries: tuple


def _omega_mul(u, comps, nu, top, zero):
    out = [[zero] * (top + 1) for _ in range(nu)]
    for q1 in range(nu):
        if all(_is_zero(c) for c in u[q1]):
            continue
        for q2 in range(nu):
            carry, rem = divmod(q1 + q2, nu)
            prod = _ser_mul(u[q1], comps[q2], top - carry, zero)
            out[rem] = _ser_add(out[rem], _ser_shift(prod, carry, top, zero))
    return out


def fnu_matrix(bv: BranchVector, nu: int | None = None) -> FnuMatrix:
    """Assemble the ``nu x nu`` matrix of powers of the branch sum."""
    nu = bv.p if nu is None else nu
    if nu != bv.p:
        raise AlgebroidError("matrix size must match the branch count")
    with workdps(_bv_digits(bv) + _GUARD):
        comps, zero = _raw_components(bv)
        top = bv.L
        rows = [comps]
        cur = comps
        for _ in range(nu - 1):
            cur = _omega_mul(cur, comps, nu, top, zero)
            rows.append(cur)
    ent = tuple(tuple(tuple(sr) for sr in row) for row in rows)
    return FnuMatrix(nu=nu, L=top, mode=bv.mode, entries=ent)


def _det_series(rows, top, zero, one):
    """Determinant of a matrix of truncated series by column-subset DP."""
    nu = len(rows)
    dp = {0: [one] + [zero] * top}
    for r in range(nu):
        ndp = {}
        for mask, val in dp.items():
            for c in range(nu):
                bit = 1 << c
                if mask & bit:
                    continue
                entry = rows[r][c]
                if all(_is_zero(x) for x in entry):
                    continue
                sign = (-1) ** bin(mask >> (c + 1)).count("1")
                term = _ser_mul(entry, val, top, zero)
                if sign < 0:
                    term = [-x for x in term]
                key = mask | bit
                ndp[key] = _ser_add(ndp[key], term) if key in ndp else term
        dp = ndp
    full = (1 << nu) - 1
    return dp.get(full, [zero] * (top + 1))


def _det_numeric(matrix, digits):
    """Gaussian elimination with partial pivoting over mpc."""
    with workdps(digits + _GUARD):
        a = [row[:] for row in matrix]
        n = len(a)
        det = mp.mpc(1)
        for col in range(n):
            piv = max(range(col, n), key=lambda r: abs(a[r][col]))
            if a[piv][col] == 0:
                return mp.mpc(0)
            if piv != col:
                a[col], a[piv] = a[piv], a[col]
                det = -det
            det *= a[col][col]
            inv = 1 / a[col][col]
            for r in range(col + 1, n):
                fac = a[r][col] * inv
                if fac == 0:
                    continue
                for c in range(col, n):
                    a[r][c] -= fac * a[col][c]
        return det


def fnu_det(
    bv: BranchVector,
    nu: int | None = None,
    z_mode: str = "truncated_poly",
    z=None,
    digits: int | None = None,
):
    """Determinant of the power matrix, symbolically or at a point.

    ``truncated_poly`` returns the series coefficients of ``det`` through
    order ``bv.L`` in the ring of the branch vector; ``numeric`` evaluates
    every entry at ``z`` first and eliminates.  Branch counts above 8
    (symbolic) or 12 (numeric) are refused.
    """
    nu = bv.p if nu is None else nu
    if z_mode == "truncated_poly":
        if nu > _FNU_SYMBOLIC_CAP:
            raise CapExceededError("symbolic determinants stop at 8 branches")
        mat = fnu_matrix(bv, nu)
        with workdps(_bv_digits(bv) + _GUARD):
            zero = mp.mpc(0) if bv.mode == "numeric" else bv.fhat[0][0] * 0
            rows = [[list(e) for e in row] for row in mat.entries]
            return tuple(_det_series(rows, bv.L, zero, _ring_one(bv)))
    if z_mode == "numeric":
        if nu > _FNU_NUMERIC_CAP:
            raise CapExceededError("numeric determinants stop at 12 branches")
        if z is None:
            raise AlgebroidError("numeric mode needs z")
        digits = digits or _bv_digits(bv)
        mat = fnu_matrix(bv, nu)
        with workdps(digits + _GUARD):
            zv = hp(z, digits).mpc
            rows = [
                [_ser_eval(_to_mpc_list(e), zv) for e in row]
                for row in mat.entries
            ]
            det = _det_numeric(rows, digits)
        return ComplexHP.make(det, digits)
    raise AlgebroidError(f"unknown z_mode {z_mode!r}")


# ---------------------------------------------------------------------------
# The polynomial equation

@dataclass(frozen=True)
class LaurentSeries:
    """Truncated Laurent series ``sum_i coeffs[i] * z**(lo+i)``."""

    lo: int
    coeffs: tuple


@dataclass(frozen=True)
class EquationReport:
    """Resubstitution diagnostics for one polynomial equation."""

    label: int
    nu: int
    L: int
    pole_order: int
    surviving_orders: tuple
    max_residual: float


def _minor_del_row(rows, drop, top, zero, one):
    """Determinant with row ``drop`` and column 0 removed."""
    sub = [
        [rows[r][c] for c in range(1, len(rows))]
        for r in range(len(rows))
        if r != drop
    ]
    return _det_series(sub, top, zero, one)


def _series_recip(d, top, digits):
    """Reciprocal of an mpc series with nonzero constant term."""
    with workdps(digits + _GUARD):
        inv0 = 1 / d[0]
        r = [inv0]
        for l in range(1, top + 1):
            acc = mp.mpc(0)
            for i in range(1, min(l, len(d) - 1) + 1):
                acc += d[i] * r[l - i]
            r.append(-acc * inv0)
        return r


def algebraic_equation(p: int, a0, L: int, digits: int = DEFAULT_DIGITS):
    """Polynomial equation ``sum_k g_k(z) * (t*y)**k = 1`` of the family.

    Returns Laurent coefficients ``g_1 .. g_nu`` in the family chart
    variable (pole order at most ``(n+1)**2`` for ``p = n >= 1``, at most 1
    otherwise) and a resubstitution report whose residual is complete
    through order ``L``.  For the degenerate values with ``a0**3 = -1`` the
    single surviving relation ``(t*y)**3 = const * z`` is returned directly.
    """
    fam = AlgebroidFamily.from_label(p)
    nu = fam.nu
    a0 = hp(a0, digits)
    if a0.is_zero():
        raise ZeroA0Error("a0 must be nonzero")
    with workdps(digits + _GUARD):
        gap = abs(a0.mpc**3 + 1)
        degenerate = gap < abs(a0.mpc) ** 3 * mp.mpf(10) ** (4 - digits)
    if degenerate:
        if p != 0:
            raise UnsupportedFamilyError(
                "the constant-chart solution lives in the p = 0 family"
            )
        gk = 1 / fam.prefactor**3
        zero_s = LaurentSeries(0, (hp(0, digits),))
        g = (zero_s, zero_s, LaurentSeries(-1, (hp(gk, digits),)))
        return g, EquationReport(p, nu, L, 1, (None,) * nu, 0.0)

    pole = (fam.n + 1) ** 2 if p >= 1 else 1
    Lw = L + 2 * pole + 2
    bv = branch_series(p, a0, Lw, "numeric", digits)
    mat = fnu_matrix(bv)

    with workdps(digits + _GUARD):
        rows = [[_to_mpc_list(e) for e in row] for row in mat.entries]
        zero, one = mp.mpc(0), mp.mpc(1)
        det = _det_series(rows, Lw, zero, one)
        mag = [abs(c) for c in det]
        top_mag = max(mag)
        if top_mag == 0:
            raise SingularTruncationError("determinant vanishes to truncation")
        thresh = top_mag * mp.mpf(10) ** (-(digits // 2))
        lead = next((i for i, v in enumerate(mag) if v > thresh), None)
        if lead is None or lead > Lw - pole:
            raise SingularTruncationError(
                "no usable determinant leading term; raise L"
            )
        recip = _series_recip(det[lead:], Lw - lead, digits)

        ghat = []
        gmax = mp.mpf(0)
        for k in range(nu):
            minor = _minor_del_row(rows, k, Lw, zero, one)
            num = _ser_mul(minor, recip, Lw - lead, zero)
            sign = (-1) ** k
            coeffs = [c * sign for c in num]
            gmax = max(gmax, max(abs(c) for c in coeffs))
            ghat.append(coeffs)

        # residual of sum_k ghat_k * g**k - 1, per branch component
        fmax = max(abs(c) for h in rows[0] for c in h)
        res = [{e: mp.mpc(0) for e in range(-lead, L + 1)} for _ in range(nu)]
        res[0][0] -= 1
        for k in range(nu):
            gc = ghat[k]
            for q in range(nu):
                comp = rows[k][q]
                for i, gi in enumerate(gc):
                    if gi == 0:
                        continue
                    for j, cj in enumerate(comp):
                        e = -lead + i + j
                        if e > L:
                            break
                        res[q][e] += gi * cj
        atol = (1 + gmax) * (1 + fmax) * mp.mpf(10) ** (6 - digits)
        surv = []
        worst = mp.mpf(0)
        for q in range(nu):
            hit = None
            for e in sorted(res[q]):
                v = abs(res[q][e])
                worst = max(worst, v)
                if v > atol and hit is None:
                    hit = e
            surv.append(hit)

        c2 = fam.prefactor
        out = []
        for k in range(nu):
            fac = mp.mpf(c2.denominator) ** (k + 1) / mp.mpf(c2.numerator) ** (k + 1)
            keep = ghat[k][: L + pole + 1]
            out.append(
                LaurentSeries(
                    -lead, tuple(ComplexHP.make(c * fac, digits) for c in keep)
                )
            )
        report = EquationReport(p, nu, L, lead, tuple(surv), float(worst))
    return tuple(out), report


def _solve_linear(a, b, digits):
    with workdps(digits + _GUARD):
        n = len(a)
        m = [row[:] + [b[i]] for i, row in enumerate(a)]
        for col in range(n):
            piv = max(range(col, n), key=lambda r: abs(m[r][col]))
            if m[piv][col] == 0:
                raise SingularTruncationError("singular linear system")
            m[col], m[piv] = m[piv], m[col]
            inv = 1 / m[col][col]
            for r in range(n):
                if r == col:
                    continue
                fac = m[r][col] * inv
                if fac == 0:
                    continue
                for c in range(col, n + 1):
                    m[r][c] -= fac * m[col][c]
        return [m[r][n] / m[r][r] for r in range(n)]


def omega_vector(
    p: int,
    a0,
    t_abs,
    t_arg,
    L: int,
    digits: int = DEFAULT_DIGITS,
) -> tuple:
    """Solve the power matrix against ``((t*y), ..., (t*y)**nu)`` at ``t``.

    The solved vector reproduces ``(1, w, w**2, ...)`` with ``w = z**(1/nu)``
    on the sheet selected by ``t_arg`` when the machinery is consistent.
    """
    fam = AlgebroidFamily.from_label(p)
    nu = fam.nu
    bv = branch_series(p, a0, L, "numeric", digits)
    mat = fnu_matrix(bv)
    with workdps(digits + _GUARD):
        scale = fam.z_scale(digits)
        z_abs = scale * mp.mpf(t_abs) ** fam.chart_exp
        z_arg = fam.chart_exp * mp.mpf(t_arg)
        zv = z_abs * mp.exp(1j * z_arg)
        w = z_abs ** (mp.mpf(1) / nu) * mp.exp(1j * z_arg / nu)
        rows = [
            [_ser_eval(_to_mpc_list(e), zv) for e in row] for row in mat.entries
        ]
        gval = mp.mpc(0)
        for q in range(nu):
            gval += w**q * _ser_eval(_to_mpc_list(bv.fhat[q]), zv)
        rhs = [gval ** (k + 1) for k in range(nu)]
        sol = _solve_linear(rows, rhs, digits)
    return tuple(ComplexHP.make(x, digits) for x in sol)


# ---------------------------------------------------------------------------
# The graded quadratic-cubic system

@dataclass(frozen=True)
class EpReport:
    """Per-component residual orders of the graded quadratic-cubic system."""

    label: int
    nu: int
    L: int
    surviving_orders: tuple
    max_abs: tuple
    tol: float


def family_scaling(p: int, digits: int = DEFAULT_DIGITS) -> tuple:
    """Scaling pair ``(c1, c2)`` normalizing the graded system of family ``p``.

    ``c1**4 * c2**2`` and ``1/c1**6`` both equal the family master constant;
    odd ``m = -p`` has no such pair and is refused.
    """
    fam = AlgebroidFamily.from_label(p)
    F = fam.master_constant
    with workdps(digits + _GUARD):
        Fv = mp.mpf(F.numerator) / F.denominator
        c1 = Fv ** (-mp.mpf(1) / 6)
        c2 = Fv ** (mp.mpf(5) / 6)
    return ComplexHP.make(c1, digits), ComplexHP.make(c2, digits)


def _multiplicity(qi, qj, qk):
    if qi == qj == qk:
        return 1
    if qi == qj or qj == qk or qi == qk:
        return 3
    return 6


def ep_residual(
    p: int,
    bv: BranchVector,
    scaling: tuple | None = None,
    digits: int | None = None,
) -> EpReport:
    """Residuals of the graded system satisfied by the branch components.

    For each residue class ``q`` the quadratic side
    ``sum f_i (d2 f_j) - (d f_i)(d f_j)`` (fractional-exponent corrections
    folded in, ``d = z d/dz`` acting on ``z**(q/nu) f_q``) is compared with
    the cubic side ``F1 * sum f f f - F2 * z * delta_{q,0}`` through order
    ``bv.L``.  ``scaling = (c1, c2)`` sets ``F1 = c1**4 c2**2`` and
    ``F2 = c1**-6``; by default both equal the family master constant, kept
    exact when the branch vector is exact.
    """
    fam = AlgebroidFamily.from_label(p)
    nu = fam.nu
    if bv.p != nu:
        raise AlgebroidError("branch vector does not match the family")
    comps, zero = _raw_components(bv)
    L = bv.L
    digits = digits or _bv_digits(bv)
    exact = bv.mode == "exact" and scaling is None

    if scaling is None:
        F = fam.master_constant
        if exact:
            F1 = F2 = F
        else:
            with workdps(digits + _GUARD):
                F1 = F2 = mp.mpf(F.numerator) / F.denominator
    else:
        if bv.mode == "exact" and isinstance(comps[0][0], LaurentRatPoly):
            raise AlgebroidError(
                "numeric scaling cannot act on symbolic branch components"
            )
        with workdps(digits + _GUARD):
            c1 = hp(scaling[0], digits).mpc
            c2 = hp(scaling[1], digits).mpc
            F1 = c1**4 * c2**2
            F2 = 1 / c1**6
            if bv.mode == "exact":
                comps = [_to_mpc_list(h) for h in comps]
                zero = mp.mpc(0)

    with workdps(digits + _GUARD):
        d1 = [_ser_delta(c) for c in comps]
        d2 = [_ser_delta(c) for c in d1]
        A = []
        C = []
        for q in range(nu):
            fq = Fraction(q, nu)
            A.append(_ser_add([c * fq for c in comps[q]], d1[q]))
            C.append(
                _ser_add(
                    _ser_add(
                        [c * (fq * fq) for c in comps[q]],
                        [c * (2 * fq) for c in d1[q]],
                    ),
                    d2[q],
                )
            )
        res = [[zero] * (L + 1) for _ in range(nu)]
        for qi in range(nu):
            for qj in range(nu):
                carry, q = divmod(qi + qj, nu)
                term = _ser_add(
                    _ser_mul(comps[qi], C[qj], L, zero),
                    [-x for x in _ser_mul(A[qi], A[qj], L, zero)],
                )
                res[q] = _ser_add(res[q], _ser_shift(term, carry, L, zero))
        for qi in range(nu):
            for qj in range(qi, nu):
                base = _ser_mul(comps[qi], comps[qj], L, zero)
                for qk in range(qj, nu):
                    mult = _multiplicity(qi, qj, qk)
                    carry, q = divmod(qi + qj + qk, nu)
                    term = _ser_mul(base, comps[qk], L, zero)
                    term = [-(x * mult * F1) for x in term]
                    res[q] = _ser_add(res[q], _ser_shift(term, carry, L, zero))
        if L >= 1:
            f2_add = (
                LaurentRatPoly.const(F2)
                if isinstance(zero, LaurentRatPoly)
                else F2
            )
            res[0][1] = res[0][1] + f2_add

        surv = []
        maxes = []
        if exact:
            tolv = 0.0
            for q in range(nu):
                hit = next(
                    (i for i, c in enumerate(res[q]) if not _is_zero(c)), None
                )
                surv.append(hit)
                maxes.append(0.0 if hit is None else 1.0)
        else:
            fmax = max((abs(c) for h in comps for c in h), default=mp.mpf(1))
            tol = max(mp.mpf(1), fmax) ** 3 * mp.mpf(10) ** (6 - digits)
            tolv = float(tol)
            for q in range(nu):
                mags = [abs(c) for c in res[q]]
                hit = next((i for i, v in enumerate(mags) if v > tol), None)
                surv.append(hit)
                maxes.append(float(max(mags)) if mags else 0.0)
    return EpReport(
        label=p,
        nu=nu,
        L=L,
        surviving_orders=tuple(surv),
        max_abs=tuple(maxes),
        tol=tolv,
    )


# ---------------------------------------------------------------------------
# Point evaluation, symmetries, group law

def yp_eval(
    p: int,
    a0,
    t_abs,
    t_arg,
    L: int,
    digits: int = DEFAULT_DIGITS,
    bv: BranchVector | None = None,
) -> ComplexHP:
    """Value ``y(t)`` of the family ``p`` at ``t = t_abs * exp(i*t_arg)``.

    Every fractional power uses the chart argument ``chart_exp * t_arg``
    without reduction, so sheets are selected by feeding ``t_arg + 2*pi*k``.
    """
    fam = AlgebroidFamily.from_label(p)
    nu = fam.nu
    if bv is None:
        bv = branch_series(p, a0, L, "numeric", digits)
    with workdps(digits + _GUARD):
        ta, tg = mp.mpf(t_abs), mp.mpf(t_arg)
        if ta <= 0:
            raise AlgebroidError("t_abs must be positive")
        scale = fam.z_scale(digits)
        z_abs = scale * ta**fam.chart_exp
        z_arg = fam.chart_exp * tg
        zv = z_abs * mp.exp(1j * z_arg)
        w = z_abs ** (mp.mpf(1) / nu) * mp.exp(1j * z_arg / nu)
        ty = mp.mpc(0)
        for q in range(nu):
            ty += w**q * _ser_eval(_to_mpc_list(bv.fhat[q]), zv)
        c2 = mp.mpf(fam.prefactor.numerator) / fam.prefactor.denominator
        t = ta * mp.exp(1j * tg)
        y = c2 * ty / t
    return ComplexHP.make(y, digits)


def symmetry_and_group(
    check: str,
    q: int | None = None,
    l: int | None = None,
    p: int | None = None,
    a0=None,
    L: int = 12,
    digits: int = DEFAULT_DIGITS,
    rho1: Fraction | None = None,
    rho2: Fraction | None = None,
):
    """Rotation symmetry checks and the exponent group law.

    ``check = "group_law"`` composes two decay exponents through
    ``1/(2 rho3) - 1 = (1/(2 rho1) - 1)(1/(2 rho2) - 1)/2`` and returns
    ``rho3``.  ``check = "sym_m"`` or ``"sym_n"`` verifies, for the family
    of ``p`` and integers ``(q, l)``, the coefficient-level rotation
    covariance of the chart series together with the phase relation
    ``y(t; a0) = exp(i*phi) * y(t*exp(i*phi); a0*zeta)`` at sample points;
    returns True or False.
    """
    if check == "group_law":
        if rho1 is None or rho2 is None:
            raise AlgebroidError("group_law needs rho1 and rho2")
        for r in (rho1, rho2):
            if not 0 < 2 * r < 1:
                raise AlgebroidError("exponents must satisfy 0 < 2*rho < 1")
        u = (1 / (2 * rho1) - 1) * (1 / (2 * rho2) - 1) / 2
        return 1 / (2 * (u + 1))

    if check not in ("sym_m", "sym_n"):
        raise AlgebroidError(f"unknown check {check!r}")
    if q is None or l is None or p is None or a0 is None:
        raise AlgebroidError("symmetry checks need q, l, p, a0")
    fam = AlgebroidFamily.from_label(p)
    if check == "sym_n" and p < 1:
        raise AlgebroidError("sym_n needs p >= 1")
    if check == "sym_m" and p > 0:
        raise AlgebroidError("sym_m needs p <= 0")
    period = (2 * fam.n + 3) if check == "sym_n" else (fam.m + 3)

    with workdps(digits + _GUARD):
        zeta = mp.exp(2j * mp.pi * q / period)
        a0v = hp(a0, digits).mpc
        if check == "sym_n":
            phi = mp.pi * q + mp.pi * l * (2 * fam.n + 3) / 2
            power = lambda k: 1 - 2 * k
        else:
            phi = mp.pi * (l * (fam.m + 3) - q) / 2
            power = lambda k: k + 1

        N = max(L, 8)
        wrap = lambda v: ComplexHP.make(v, digits)
        if p == 0:
            t1 = series.taylor_coeffs("numeric", N, a0=wrap(a0v), digits=digits)
            t2 = series.taylor_coeffs(
                "numeric", N, a0=wrap(zeta * a0v), digits=digits
            )
        else:
            t1 = hp_coeffs(p, "numeric", N, a0=wrap(a0v), digits=digits)
            t2 = hp_coeffs(p, "numeric", N, a0=wrap(zeta * a0v), digits=digits)
        b1 = [-t1.a[0].mpc] + [t1.a[k].mpc for k in range(1, N + 1)]
        b2 = [-t2.a[0].mpc] + [t2.a[k].mpc for k in range(1, N + 1)]
        scale = max(max(abs(x) for x in b1), mp.mpf(1))
        tol = scale * mp.mpf(10) ** (8 - digits)
        for k in range(N + 1):
            if abs(b2[k] - zeta ** power(k) * b1[k]) > tol:
                return False

        Lb = max(4, L // 2)
        samples = ((mp.mpf(1) / 16, mp.mpf(3) / 10), (mp.mpf(1) / 32, -mp.mpf(1) / 5))
        for ta, tg in samples:
            lhs = yp_eval(p, wrap(a0v), ta, tg, Lb, digits).mpc
            rhs = yp_eval(p, wrap(zeta * a0v), ta, tg + phi, Lb, digits).mpc
            rhs *= mp.exp(1j * phi)
            if abs(lhs - rhs) > tol * (1 + abs(lhs)):
                return False
    return True


# ---------------------------------------------------------------------------
# Serialization

def branch_to_json(bv: BranchVector) -> str:
    """Serialize a branch vector; numbers are encoded as in the series module."""
    if bv.mode == "numeric":
        comp = [[_hp_obj(c) for c in h] for h in bv.fhat]
        a0 = _hp_obj(bv.a0)
        kind = "hp"
    elif isinstance(bv.fhat[0][0], LaurentRatPoly):
        comp = [[_laurent_obj(c) for c in h] for h in bv.fhat]
        a0 = None
        kind = "laurent"
    else:
        comp = [[_frac_obj(c) for c in h] for h in bv.fhat]
        a0 = None if bv.a0 is None else _frac_obj(bv.a0)
        kind = "frac"
    return json.dumps(
        {
            "label": bv.label,
            "p": bv.p,
            "L": bv.L,
            "mode": bv.mode,
            "kind": kind,
            "a0": a0,
            "prefactor": _frac_obj(bv.prefactor),
            "chart_exp": bv.chart_exp,
            "fhat": comp,
        }
    )


def branch_from_json(text: str) -> BranchVector:
    obj = json.loads(text)
    kind = obj["kind"]
    if kind == "hp":
        fhat = tuple(tuple(_hp_from(c) for c in h) for h in obj["fhat"])
        a0 = _hp_from(obj["a0"])
    elif kind == "laurent":
        fhat = tuple(
            tuple(
                LaurentRatPoly({int(e): _frac_from(v) for e, v in c.items()})
                for c in h
            )
            for h in obj["fhat"]
        )
        a0 = None
    else:
        fhat = tuple(tuple(_frac_from(c) for c in h) for h in obj["fhat"])
        a0 = None if obj["a0"] is None else _frac_from(obj["a0"])
    return BranchVector(
        label=obj["label"],
        p=obj["p"],
        L=obj["L"],
        mode=obj["mode"],
        fhat=fhat,
        a0=a0,
        prefactor=_frac_from(obj["prefactor"]),
        chart_exp=obj["chart_exp"],
    )


def report_to_json(report) -> str:
    """Serialize an equation or graded-system report."""
    from dataclasses import asdict

    return json.dumps(asdict(report))
