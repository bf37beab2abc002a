"""Configurable-precision special functions shared by every other module.

All quantities are carried as ComplexHP values: a pair of arbitrary-precision
reals tagged with a decimal working precision. Arithmetic between two values
rounds to the minimum of the two precisions, so precision never silently
inflates. The functions here are the only transcendental primitives the rest
of the package is allowed to call: a Spouge gamma, the modified Bessel
functions I0/I1/K0, Chebyshev polynomials of the first kind, and a
branch-continuous logarithm for phase tracking along sampled paths.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath as mp

DEFAULT_DIGITS = 50

_GUARD = 15  # extra decimal digits used internally by every routine


class SpecfunError(ValueError):
    pass


class PoleOfGammaError(SpecfunError):
    pass


class BranchCutError(SpecfunError):
    pass


class PrecisionUnreachableError(SpecfunError):
    pass


class StepTooLargeError(SpecfunError):
    pass


def _to_mpc(value) -> mp.mpc:
    if isinstance(value, ComplexHP):
        return mp.mpc(value.re, value.im)
    if isinstance(value, Fraction):
        return mp.mpc(mp.mpf(value.numerator) / mp.mpf(value.denominator))
    if isinstance(value, str):
        return mp.mpc(mp.mpmathify(value))
    return mp.mpc(value)


@dataclass(frozen=True)
class ComplexHP:
    """Complex number with an explicit decimal working precision."""

    re: mp.mpf
    im: mp.mpf
    digits: int = DEFAULT_DIGITS

    def __post_init__(self):
        if self.digits < 16:
            raise SpecfunError(f"digits must be >= 16, got {self.digits}")
        for part in (self.re, self.im):
            if mp.isnan(part) or mp.isinf(part):
                raise SpecfunError("non-finite component in ComplexHP")

    @classmethod
    def make(cls, value, digits: int = DEFAULT_DIGITS) -> "ComplexHP":
        """Round `value` (number, string, Fraction, mpc, ComplexHP) to `digits`."""
        if isinstance(value, ComplexHP) and value.digits == digits:
            return value
        with mp.workdps(digits):
            z = _to_mpc(value)
            return cls(+z.real, +z.imag, digits)

    @property
    def mpc(self) -> mp.mpc:
        return mp.mpc(self.re, self.im)

    def magnitude(self) -> mp.mpf:
        with mp.workdps(self.digits):
            return mp.fabs(self.mpc)

    def conjugate(self) -> "ComplexHP":
        return ComplexHP(self.re, -self.im, self.digits)

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def _binary(self, other, op) -> "ComplexHP":
        if not isinstance(other, ComplexHP):
            other = ComplexHP.make(other, self.digits)
        digits = min(self.digits, other.digits)
        with mp.workdps(digits):
            return ComplexHP.make(op(self.mpc, other.mpc), digits)

    def __add__(self, other):
        return self._binary(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return ComplexHP.make(other, self.digits) - self

    def __mul__(self, other):
        return self._binary(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._binary(other, lambda a, b: a / b)

    def __rtruediv__(self, other):
        return ComplexHP.make(other, self.digits) / self

    def __neg__(self):
        return ComplexHP(-self.re, -self.im, self.digits)

    def __repr__(self):
        return f"ComplexHP({self.re}, {self.im}, digits={self.digits})"


def hp(value, digits: int = DEFAULT_DIGITS) -> ComplexHP:
    return ComplexHP.make(value, digits)


# ---------------------------------------------------------------------------
# Gamma function (Spouge approximation, reflection for the left half-plane)

_spouge_cache: dict = {}


def _spouge_coeffs(a: int, dps: int):
    key = (a, dps)
    if key not in _spouge_cache:
        with mp.workdps(dps):
            coeffs = [mp.sqrt(2 * mp.pi)]
            fac = mp.mpf(1)
            for k in range(1, a):
                coeffs.append(
                    ((-1) ** (k - 1)) / fac * mp.power(a - k, k - mp.mpf("0.5")) * mp.exp(a - k)
                )
                fac *= k
        _spouge_cache[key] = coeffs
    return _spouge_cache[key]


def _gamma_raw(z: mp.mpc, digits: int) -> mp.mpc:
    # Spouge with parameter a: relative error ~ a^(-1/2) (2*pi)^(-(a+1/2)),
    # so a ~ 1.26*digits reaches 10^(-digits); take a margin on top.
    a = int(1.3 * digits) + 6
    c = _spouge_coeffs(a, mp.mp.dps)
    if z.real < mp.mpf("0.5"):
        # reflection keeps the Spouge argument well inside the right half-plane
        return mp.pi / (mp.sin(mp.pi * z) * _gamma_raw(1 - z, digits))
    w = z + 1  # evaluate Gamma(z+2) = Gamma((w)+1), then divide by z(z+1)
    s = c[0]
    for k in range(1, len(c)):
        s += c[k] / (w + k)
    g = mp.power(w + a, w + mp.mpf("0.5")) * mp.exp(-(w + a)) * s
    return g / (z * (z + 1))


def gamma_complex(z: ComplexHP) -> ComplexHP:
    """Gamma(z) for complex z, relative error below 10**(5 - digits)."""
    if z.im == 0 and z.re <= 0 and z.re == mp.floor(z.re):
        raise PoleOfGammaError(f"gamma pole at z = {z.re}")
    with mp.workdps(z.digits + _GUARD):
        value = _gamma_raw(z.mpc, z.digits)
    return ComplexHP.make(value, z.digits)


# ---------------------------------------------------------------------------
# Modified Bessel functions

_SERIES_RADIUS = 30


def _bessel_series(kind: str, x: mp.mpc, digits: int) -> mp.mpc:
    quarter = x * x / 4
    tol = mp.mpf(10) ** (-(digits + 5))
    if kind == "I0":
        term = mp.mpc(1)
        total = term
        n = 0
        while True:
            n += 1
            term *= quarter / (n * n)
            total += term
            if mp.fabs(term) <= tol * (1 + mp.fabs(total)):
                return total
    if kind == "I1":
        term = x / 2
        total = term
        n = 0
        while True:
            n += 1
            term *= quarter / (n * (n + 1))
            total += term
            if mp.fabs(term) <= tol * (1 + mp.fabs(total)):
                return total
    # K0(x) = -(ln(x/2) + euler) I0(x) + sum_{n>=1} (x^2/4)^n H_n / (n!)^2
    i0 = _bessel_series("I0", x, digits)
    term = mp.mpc(1)
    harmonic = mp.mpf(0)
    total = mp.mpc(0)
    n = 0
    while True:
        n += 1
        term *= quarter / (n * n)
        harmonic += mp.mpf(1) / n
        piece = term * harmonic
        total += piece
        if mp.fabs(piece) <= tol * (1 + mp.fabs(total)):
            break
    return -(mp.log(x / 2) + mp.euler) * i0 + total


def _bessel_asymptotic(kind: str, x: mp.mpc, digits: int) -> mp.mpc:
    # c_k(nu) = prod_{j<=k} (4 nu^2 - (2j-1)^2) / (k! 8^k); optimal truncation,
    # smallest term estimates the tail.
    nu2 = 0 if kind != "I1" else 1
    tol = mp.mpf(10) ** (-(digits - 5))

    def tail_sum(sign):
        # sign=+1 sums c_k/x^k, sign=-1 sums (-1)^k c_k/x^k
        term = mp.mpc(1)
        total = term
        best = mp.fabs(term)
        k = 0
        while True:
            k += 1
            term *= (4 * nu2 - (2 * k - 1) ** 2) / (8 * k * x) * sign
            mag = mp.fabs(term)
            if mag >= best:
                return total, best
            best = mag
            total += term
            if mag <= tol / 10:
                return total, mag

    if kind == "K0":
        total, tail = tail_sum(-1)
        value = mp.sqrt(mp.pi / (2 * x)) * mp.exp(-x) * total
    else:
        grow, tail_g = tail_sum(-1)
        decay, tail_d = tail_sum(1)
        rotate = mp.expjpi(mp.mpf(2 * nu2 + 1) / 2 * (1 if x.imag >= 0 else -1))
        value = (mp.exp(x) * grow + rotate * mp.exp(-x) * decay) / mp.sqrt(2 * mp.pi * x)
        tail = max(tail_g, tail_d)
    if tail > tol:
        raise PrecisionUnreachableError(
            f"{kind} asymptotics at |x|={mp.nstr(mp.fabs(x), 5)} reaches only "
            f"{mp.nstr(tail, 3)} relative accuracy, below the requested 10^{5 - digits}"
        )
    return value


def bessel_modified(kind: str, x: ComplexHP) -> ComplexHP:
    """I0, I1 or K0 at complex x (K0: principal branch, cut on the negative reals)."""
    if kind not in ("I0", "I1", "K0"):
        raise SpecfunError(f"unknown Bessel kind {kind!r}")
    if kind == "K0" and x.im == 0 and x.re <= 0:
        raise BranchCutError("K0 evaluated on its branch cut (x <= 0)")
    if x.is_zero():
        return ComplexHP.make(1 if kind == "I0" else 0, x.digits)
    absx = x.magnitude()
    guard = _GUARD + 5 + int(mp.mpf("0.45") * absx)
    with mp.workdps(x.digits + guard):
        if absx <= _SERIES_RADIUS:
            value = _bessel_series(kind, x.mpc, x.digits)
        else:
            value = _bessel_asymptotic(kind, x.mpc, x.digits)
    return ComplexHP.make(value, x.digits)


# ---------------------------------------------------------------------------
# Chebyshev polynomials of the first kind

def chebyshev_T(n: int, x: ComplexHP | None = None):
    """T_n as exact integer coefficients (x=None) or evaluated at x.

    Coefficient tuples are ascending in powers; the three-term recurrence
    T_{n+1} = 2x T_n - T_{n-1} keeps everything over the integers.
    """
    if n < 0:
        raise SpecfunError("Chebyshev index must be nonnegative")
    if x is None:
        prev, cur = (1,), (0, 1)
        if n == 0:
            return prev
        for _ in range(n - 1):
            nxt = [0] + [2 * c for c in cur]
            for i, c in enumerate(prev):
                nxt[i] -= c
            prev, cur = cur, tuple(nxt)
        return cur
    digits = x.digits
    with mp.workdps(digits + _GUARD):
        xv = x.mpc
        prev, cur = mp.mpc(1), xv
        if n == 0:
            return ComplexHP.make(prev, digits)
        for _ in range(n - 1):
            prev, cur = cur, 2 * xv * cur - prev
        return ComplexHP.make(cur, digits)


# ---------------------------------------------------------------------------
# Branch-continuous logarithm

@dataclass(frozen=True)
class BranchTracker:
    """Accumulated logarithm along a sampled path, with a winding counter.

    `winding` changes only when consecutive arguments cross the negative real
    ray; a tie (argument exactly pi) counts as no crossing.
    """

    current_value: ComplexHP
    last_argument: ComplexHP
    winding: int = 0

    @classmethod
    def start(cls, z: ComplexHP) -> "BranchTracker":
        if z.is_zero():
            raise SpecfunError("cannot start a branch tracker at 0")
        with mp.workdps(z.digits + _GUARD):
            return cls(ComplexHP.make(mp.log(z.mpc), z.digits), z, 0)


def continuous_log(tracker: BranchTracker, nxt: ComplexHP):
    """Continue log analytically from tracker.last_argument to nxt.

    Returns (new tracker, accumulated log). The step must rotate the argument
    by less than pi; larger steps are a sampling error, not a branch choice.
    """
    if nxt.is_zero():
        raise SpecfunError("continuous_log through 0")
    digits = min(tracker.last_argument.digits, nxt.digits)
    with mp.workdps(digits + _GUARD):
        last = tracker.last_argument.mpc
        cur = nxt.mpc
        step = mp.log(cur / last)
        if mp.fabs(step.imag) >= mp.pi * (1 - mp.mpf("1e-9")):
            raise StepTooLargeError(
                "argument rotated by >= pi between consecutive samples"
            )
        raw = tracker.current_value.mpc + step
        # Sheet index of the continued argument against the principal one.
        # Counts signed crossings of the negative real ray; a sample landing
        # exactly on the ray (argument pi) keeps the previous winding.
        winding = int(mp.nint((raw.imag - mp.arg(cur)) / (2 * mp.pi)))
        new_value = ComplexHP.make(raw, digits)
    out = BranchTracker(new_value, nxt, winding)
    return out, new_value
