"""Exact and adaptive-precision real numbers with decidable fractional distances.

Everything downstream reduces to deciding inequalities of the form
``||m*x|| <= theta`` where ``||t||`` is the distance from t to the nearest
integer.  Four kinds of reals are supported:

* ``Rational`` and ``QuadraticSurd`` decide everything exactly, via integer
  arithmetic and integer square roots (never floating point: witness checks at
  N ~ 10^6 need far more than double precision).
* ``CFStream`` refines on demand through the convergent sandwich
  p_{2k}/q_{2k} <= x <= p_{2k+1}/q_{2k+1}.
* ``DecimalLiteral`` refines up to its stated precision and then fails loudly.

Intervals carry dyadic endpoints so halving and comparison never blow up
denominators.  All values are immutable; digit caches are lock-protected.
"""

from __future__ import annotations

import re
import threading
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import gcd, isqrt
from typing import Callable, Iterable, Optional, Sequence, Union

from .errors import PrecisionExhausted, Undecidable

__all__ = [
    "Ordering",
    "IntervalValue",
    "RealDescriptor",
    "Rational",
    "QuadraticSurd",
    "CFStream",
    "DecimalLiteral",
    "surd",
    "rational",
    "to_interval",
    "fractional_distance",
    "FracDistance",
    "cmp_threshold",
    "exact_linear_combo",
    "combo_interval",
    "scaled_stream",
    "parse_real",
    "format_real",
    "register_cf_generator",
]

# Refinement ceiling for semi-decidable comparisons on digit streams.  A clean
# comparison against a rational threshold always terminates for irrational
# streams; the cap only guards against pathological inputs.
DEFAULT_MAX_BITS = 1 << 16

HALF = Fraction(1, 2)


class Ordering(Enum):
    BELOW = -1
    EQUAL = 0
    ABOVE = 1


# ---------------------------------------------------------------------------
# dyadic intervals
# ---------------------------------------------------------------------------


def _is_dyadic(x: Fraction) -> bool:
    d = x.denominator
    return d & (d - 1) == 0


def _dyadic_floor(x: Fraction, bits: int) -> Fraction:
    """Largest multiple of 2^-bits that is <= x."""
    n = x.numerator << bits
    return Fraction(n // x.denominator, 1 << bits)


def _dyadic_ceil(x: Fraction, bits: int) -> Fraction:
    n = x.numerator << bits
    return Fraction(-((-n) // x.denominator), 1 << bits)


@dataclass(frozen=True)
class IntervalValue:
    """Closed interval [lo, hi] with dyadic rational endpoints."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"interval endpoints out of order: {self.lo} > {self.hi}")
        if not (_is_dyadic(self.lo) and _is_dyadic(self.hi)):
            raise ValueError("interval endpoints must be dyadic rationals")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, x: Fraction) -> bool:
        return self.lo <= x <= self.hi

    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __contains__(self, x) -> bool:
        return self.contains(Fraction(x))


def _outward(lo: Fraction, hi: Fraction, bits: int) -> IntervalValue:
    return IntervalValue(_dyadic_floor(lo, bits), _dyadic_ceil(hi, bits))


def frac_dist_interval(iv: IntervalValue) -> IntervalValue:
    """Image of t -> ||t|| over an interval (endpoints stay dyadic)."""
    lo, hi = iv.lo, iv.hi
    if hi - lo >= 1:
        return IntervalValue(Fraction(0), HALF)
    shift = lo.numerator // lo.denominator
    lo -= shift
    hi -= shift  # lo in [0,1), hi in [0,2)

    def dist(x: Fraction) -> Fraction:
        fl = x.numerator // x.denominator
        return min(x - fl, fl + 1 - x)

    vals = sorted((dist(lo), dist(hi)))
    mn, mx = vals[0], vals[1]
    # interior extrema: an integer forces min 0, a half-integer forces max 1/2
    if lo < 1 < hi or lo == 0:
        mn = Fraction(0)
    for half_pt in (HALF, Fraction(3, 2)):
        if lo <= half_pt <= hi:
            mx = HALF
            break
    return IntervalValue(mn, min(mx, HALF))


# ---------------------------------------------------------------------------
# squarefree kernels (surd normalization)
# ---------------------------------------------------------------------------

_SMALL_PRIMES = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]


def squarefree_decompose(d: int) -> tuple[int, int]:
    """Write d = s^2 * d0 with d0 squarefree; returns (d0, s).

    Complete for moderate d (trial division up to isqrt); callers pass surd
    discriminants which are small in practice.
    """
    if d <= 0:
        raise ValueError("d must be positive")
    s = 1
    p = 2
    while p * p <= d:
        while d % (p * p) == 0:
            d //= p * p
            s *= p
        p += 1 if p == 2 else 2
    return d, s


# ---------------------------------------------------------------------------
# sign and floor primitives for a + b*sqrt(d)
# ---------------------------------------------------------------------------


def _surd_sign(a: int, b: int, d: int) -> int:
    """Sign of a + b*sqrt(d) for squarefree d >= 2 (never zero unless a=b=0)."""
    if b == 0:
        return (a > 0) - (a < 0)
    if a == 0:
        return (b > 0) - (b < 0)
    if a > 0 and b > 0:
        return 1
    if a < 0 and b < 0:
        return -1
    # opposite signs: compare a^2 against b^2 d (equality impossible, d squarefree)
    if a * a > b * b * d:
        return (a > 0) - (a < 0)
    return (b > 0) - (b < 0)


def _floor_surd(a: int, b: int, c: int, d: int) -> int:
    """floor((a + b*sqrt(d)) / c) with c > 0, computed exactly."""
    t = b * b * d
    s = isqrt(t)
    sb = s if b >= 0 else -s - 1  # sb <= b*sqrt(d) < sb+1
    f = (a + sb) // c
    # candidate may be off by one; fix with exact sign tests
    while _surd_sign(a - (f + 1) * c, b, d) >= 0:
        f += 1
    while _surd_sign(a - f * c, b, d) < 0:
        f -= 1
    return f


# ---------------------------------------------------------------------------
# descriptors
# ---------------------------------------------------------------------------


class RealDescriptor:
    """Common interface: a real number that can bound itself in an interval."""

    def interval(self, bits: int) -> IntervalValue:
        raise NotImplementedError

    @property
    def is_exact(self) -> bool:
        return False


@dataclass(frozen=True)
class Rational(RealDescriptor):
    num: int
    den: int

    def __post_init__(self):
        if self.den <= 0:
            raise ValueError("denominator must be positive")
        if gcd(self.num, self.den) != 1:
            raise ValueError("rational must be in lowest terms (use rational())")

    @property
    def is_exact(self) -> bool:
        return True

    def as_fraction(self) -> Fraction:
        return Fraction(self.num, self.den)

    def interval(self, bits: int) -> IntervalValue:
        x = Fraction(self.num, self.den)
        return _outward(x, x, bits + 1)

    def __str__(self):
        return format_real(self)


def rational(num: int, den: int = 1) -> Rational:
    if den == 0:
        raise ValueError("zero denominator")
    if den < 0:
        num, den = -num, -den
    g = gcd(num, den)
    return Rational(num // g, den // g)


@dataclass(frozen=True)
class QuadraticSurd(RealDescriptor):
    """(a + b*sqrt(d)) / c with d squarefree >= 2, b != 0, c > 0, gcd(a,b,c)=1."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.c <= 0:
            raise ValueError("c must be positive")
        if self.b == 0:
            raise ValueError("b = 0 is a rational, not a surd (use surd())")
        if self.d < 2:
            raise ValueError("d must be >= 2")
        d0, s = squarefree_decompose(self.d)
        if s != 1:
            raise ValueError(f"d = {self.d} is not squarefree (use surd())")
        if gcd(gcd(abs(self.a), abs(self.b)), self.c) != 1:
            raise ValueError("a, b, c must have no common factor (use surd())")

    @property
    def is_exact(self) -> bool:
        return True

    def conjugate(self) -> "QuadraticSurd":
        return QuadraticSurd(self.a, -self.b, self.c, self.d)

    def floor(self) -> int:
        return _floor_surd(self.a, self.b, self.c, self.d)

    def sign(self) -> int:
        return _surd_sign(self.a, self.b, self.d)

    def cmp_fraction(self, x: Fraction) -> int:
        """Sign of self - x, exact."""
        # (a + b sqrt d)/c - p/q = ((aq - pc) + bq sqrt d) / (cq)
        p, q = x.numerator, x.denominator
        return _surd_sign(self.a * q - p * self.c, self.b * q, self.d)

    def interval(self, bits: int) -> IntervalValue:
        work = bits + 2
        t = self.b * self.b * self.d << (2 * work)
        s = isqrt(t)
        if self.b >= 0:
            lo_num, hi_num = s, s + 1
        else:
            lo_num, hi_num = -s - 1, -s
        base = self.a << work
        lo = Fraction(base + lo_num, self.c << work)
        hi = Fraction(base + hi_num, self.c << work)
        return _outward(lo, hi, work)

    def _dist_le(self, m: int, num: int, den: int) -> bool:
        """Is ||m * self|| <= num/den?  Hot path for membership loops."""
        if m == 0:
            return num >= 0
        a, b, c, d = m * self.a, m * self.b, self.c, self.d
        f = _floor_surd(a, b, c, d)
        # frac = (a - f c + b sqrt d)/c in (0,1); compare frac and 1-frac to num/den
        if _surd_sign((a - f * c) * den - num * c, b * den, d) <= 0:
            return True
        return _surd_sign((a - (f + 1) * c) * den + num * c, b * den, d) >= 0

    def __str__(self):
        return format_real(self)


def surd(a: int, b: int, c: int, d: int) -> Union[Rational, QuadraticSurd]:
    """Normalized (a + b*sqrt(d))/c; collapses to Rational when possible."""
    if c == 0:
        raise ValueError("zero denominator")
    if d <= 0:
        raise ValueError("d must be positive")
    d0, s = squarefree_decompose(d)
    b *= s
    if d0 == 1:
        return rational(a + b, c)
    if b == 0:
        return rational(a, c)
    if c < 0:
        a, b, c = -a, -b, -c
    g = gcd(gcd(abs(a), abs(b)), c)
    return QuadraticSurd(a // g, b // g, c // g, d0)


class _MemoDigits:
    """Thread-safe memoizing wrapper around a digit source (1-based index)."""

    def __init__(self, source: Callable[[int], int]):
        self._source = source
        self._cache: list[int] = []
        self._lock = threading.Lock()

    def get(self, i: int) -> int:
        if i <= len(self._cache):
            return self._cache[i - 1]
        with self._lock:
            while len(self._cache) < i:
                nxt = self._source(len(self._cache) + 1)
                if nxt < 1:
                    raise ValueError(f"continued fraction digit a_{len(self._cache)+1} = {nxt} < 1")
                self._cache.append(nxt)
        return self._cache[i - 1]


@dataclass(frozen=True)
class CFStream(RealDescriptor):
    """Irrational defined by its continued fraction digit stream.

    ``digits(i)`` must return a_i >= 1 for i >= 1 and must be a pure function
    of the index (it is memoized behind a lock).  ``name`` is a generator id
    used by the text serialization.
    """

    a0: int
    digits: Callable[[int], int]
    name: str = "anonymous"
    _memo: _MemoDigits = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_memo", _MemoDigits(self.digits))

    def digit(self, i: int) -> int:
        if i == 0:
            return self.a0
        return self._memo.get(i)

    def convergents_upto(self, n: int) -> list[tuple[int, int]]:
        """(p_i, q_i) for i = 0..n."""
        out = []
        pm1, qm1 = 1, 0
        p, q = self.a0, 1
        out.append((p, q))
        for i in range(1, n + 1):
            a = self.digit(i)
            p, pm1 = a * p + pm1, p
            q, qm1 = a * q + qm1, q
            out.append((p, q))
        return out

    def interval(self, bits: int) -> IntervalValue:
        work = bits + 2
        target = 1 << work
        pm1, qm1 = 1, 0
        p, q = self.a0, 1
        i = 0
        while q * max(qm1, 1) < target or i < 1:
            i += 1
            a = self.digit(i)
            p, pm1 = a * p + pm1, p
            q, qm1 = a * q + qm1, q
        lo = Fraction(pm1, qm1)
        hi = Fraction(p, q)
        if lo > hi:
            lo, hi = hi, lo
        return _outward(lo, hi, work)

    def __str__(self):
        return format_real(self)


@dataclass(frozen=True)
class DecimalLiteral(RealDescriptor):
    """Decimal digits known to a stated precision (a ball of radius 2^-bits).

    Comparisons that need more than the stated precision raise instead of
    silently rounding.
    """

    digits: str
    precision_bits: int

    def __post_init__(self):
        if self.precision_bits < 1:
            raise ValueError("stated precision must be >= 1 bit")
        _parse_decimal(self.digits)  # validates

    def center(self) -> Fraction:
        return _parse_decimal(self.digits)

    def interval(self, bits: int) -> IntervalValue:
        if bits + 2 > self.precision_bits:
            raise PrecisionExhausted(
                f"decimal literal holds {self.precision_bits} bits; "
                f"cannot produce width 2^-{bits}"
            )
        r = self.center()
        ball = Fraction(1, 1 << self.precision_bits)
        return _outward(r - ball, r + ball, bits + 2)

    def __str__(self):
        return format_real(self)


def _parse_decimal(text: str) -> Fraction:
    m = re.fullmatch(r"([+-]?)(\d+)(?:\.(\d*))?", text)
    if not m:
        raise ValueError(f"bad decimal literal: {text!r}")
    sign, ipart, fpart = m.group(1), m.group(2), m.group(3) or ""
    val = Fraction(int(ipart + fpart) if ipart + fpart else 0, 10 ** len(fpart))
    return -val if sign == "-" else val


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------


def to_interval(x: RealDescriptor, precision_bits: int) -> IntervalValue:
    """Interval of width <= 2^-precision_bits containing x."""
    if precision_bits < 1:
        raise ValueError("precision_bits must be >= 1")
    return x.interval(precision_bits)


@dataclass
class FracDistance:
    """||m*x||: exact value + nearest integer when decidable, else refinable."""

    x: RealDescriptor
    m: int
    exact: Optional[RealDescriptor] = None
    nearest: Optional[int] = None

    def interval(self, bits: int) -> IntervalValue:
        if self.exact is not None:
            return self.exact.interval(bits)
        mb = max(abs(self.m), 1)
        work = bits + mb.bit_length() + 2
        base = self.x.interval(work)
        lo = self.m * base.lo
        hi = self.m * base.hi
        if lo > hi:
            lo, hi = hi, lo
        return frac_dist_interval(IntervalValue(lo, hi))

    def as_fraction(self, bits: int = 80) -> Fraction:
        """Dyadic upper bound at the given precision (exact if rational)."""
        if isinstance(self.exact, Rational):
            return self.exact.as_fraction()
        return self.interval(bits).hi

    def cmp(self, theta: Fraction, max_bits: int = DEFAULT_MAX_BITS) -> Ordering:
        return _cmp_dist(self, theta, max_bits)


def fractional_distance(x: RealDescriptor, m: int) -> FracDistance:
    """Distance from m*x to the nearest integer; exact for exact descriptors."""
    if m == 0 or (isinstance(x, Rational) and x.num == 0):
        return FracDistance(x, m, exact=rational(0), nearest=0)
    if isinstance(x, Rational):
        num, den = m * x.num, x.den
        r = num % den  # in [0, den)
        if 2 * r <= den:
            near = num // den
            dist = rational(r, den)
        else:
            near = num // den + 1
            dist = rational(den - r, den)
        return FracDistance(x, m, exact=dist, nearest=near)
    if isinstance(x, QuadraticSurd):
        a, b, c, d = m * x.a, m * x.b, x.c, x.d
        f = _floor_surd(a, b, c, d)
        # nearest is f or f+1: compare 2*frac against 1
        if _surd_sign(2 * (a - f * c) - c, 2 * b, d) < 0:
            near = f
            val = surd(a - f * c, b, c, d)
        else:
            near = f + 1
            val = surd((f + 1) * c - a, -b, c, d)
        return FracDistance(x, m, exact=val, nearest=near)
    return FracDistance(x, m)


def _cmp_exact_vs_fraction(v: RealDescriptor, theta: Fraction) -> Ordering:
    if isinstance(v, Rational):
        f = v.as_fraction()
        if f < theta:
            return Ordering.BELOW
        if f > theta:
            return Ordering.ABOVE
        return Ordering.EQUAL
    assert isinstance(v, QuadraticSurd)
    s = v.cmp_fraction(theta)
    return Ordering.BELOW if s < 0 else Ordering.ABOVE  # surd never equals a rational


def _cmp_dist(dist: FracDistance, theta: Fraction, max_bits: int) -> Ordering:
    if dist.exact is not None:
        return _cmp_exact_vs_fraction(dist.exact, theta)
    bits = 48
    while bits <= max_bits:
        try:
            iv = dist.interval(bits)
        except PrecisionExhausted:
            if isinstance(dist.x, DecimalLiteral):
                raise Undecidable(dist.x.precision_bits)
            raise
        if iv.hi < theta:
            return Ordering.BELOW
        if iv.lo > theta:
            return Ordering.ABOVE
        bits *= 2
    if isinstance(dist.x, DecimalLiteral):
        raise Undecidable(dist.x.precision_bits)
    raise PrecisionExhausted(f"comparison undecided at {max_bits} bits")


def cmp_threshold(
    x: RealDescriptor, m: int, theta: Fraction, max_bits: int = DEFAULT_MAX_BITS
) -> Ordering:
    """Decide ||m*x|| versus theta in [0, 1/2]."""
    theta = Fraction(theta)
    if not 0 <= theta <= HALF:
        raise ValueError("theta must lie in [0, 1/2]")
    return fractional_distance(x, m).cmp(theta, max_bits)


# ---------------------------------------------------------------------------
# integer linear combinations of descriptors
# ---------------------------------------------------------------------------


def exact_linear_combo(
    terms: Sequence[tuple[int, RealDescriptor]]
) -> Optional[Union[Rational, QuadraticSurd]]:
    """Sum of coeff*x over terms, when it stays inside one quadratic field.

    Returns None if any term is inexact or two distinct square roots mix.
    """
    rat = Fraction(0)
    surd_b = Fraction(0)
    surd_d: Optional[int] = None
    for coeff, x in terms:
        if coeff == 0:
            continue
        if isinstance(x, Rational):
            rat += coeff * x.as_fraction()
        elif isinstance(x, QuadraticSurd):
            if surd_d is None:
                surd_d = x.d
            elif surd_d != x.d:
                return None
            rat += Fraction(coeff * x.a, x.c)
            surd_b += Fraction(coeff * x.b, x.c)
        else:
            return None
    if surd_d is None or surd_b == 0:
        return rational(rat.numerator, rat.denominator)
    # (p/q) + (u/v) sqrt(d)  ->  (p v + u q sqrt(d)) / (q v)
    p, q = rat.numerator, rat.denominator
    u, v = surd_b.numerator, surd_b.denominator
    return surd(p * v, u * q, q * v, surd_d)


def combo_interval(
    terms: Sequence[tuple[int, RealDescriptor]], bits: int
) -> IntervalValue:
    """Enclosure of sum coeff*x at the requested width, any descriptors."""
    live = [(c, x) for c, x in terms if c != 0]
    if not live:
        z = Fraction(0)
        return IntervalValue(z, z)
    budget = bits + len(live).bit_length() + 2
    lo = Fraction(0)
    hi = Fraction(0)
    for coeff, x in live:
        iv = x.interval(budget + abs(coeff).bit_length())
        a, b = coeff * iv.lo, coeff * iv.hi
        if a > b:
            a, b = b, a
        lo += a
        hi += b
    return _outward(lo, hi, bits + 1)


def scaled_stream(x: RealDescriptor, mul: int, div: int = 1, name: str = "") -> RealDescriptor:
    """(mul/div) * x as a descriptor; exact types stay exact.

    For digit streams the result is a derived ``CFStream`` whose digits are
    extracted from verified enclosures (the continued fraction of a rational
    multiple of an irrational has no closed form in general).
    """
    if div == 0:
        raise ValueError("zero divisor")
    if div < 0:
        mul, div = -mul, -div
    if isinstance(x, Rational):
        return rational(x.num * mul, x.den * div)
    if isinstance(x, QuadraticSurd):
        return surd(x.a * mul, x.b * mul, x.c * div, x.d)
    from .contfrac import stream_from_enclosures  # local import: avoids a cycle

    def encl(bits: int) -> IntervalValue:
        work = bits + abs(mul).bit_length() + 2
        iv = x.interval(work)
        lo, hi = Fraction(mul * iv.lo, div), Fraction(mul * iv.hi, div)
        if lo > hi:
            lo, hi = hi, lo
        return IntervalValue(_dyadic_floor(lo, work + div.bit_length()),
                             _dyadic_ceil(hi, work + div.bit_length()))

    label = name or f"{mul}/{div}*{getattr(x, 'name', 'real')}"
    return stream_from_enclosures(encl, name=label)


# ---------------------------------------------------------------------------
# text serialization
# ---------------------------------------------------------------------------

_CF_GENERATORS: dict[str, Callable[[list[int]], RealDescriptor]] = {}


def register_cf_generator(name: str, builder: Callable[[list[int]], RealDescriptor]) -> None:
    """Register a named builder for ``cf:[...]@name`` descriptors.

    The builder receives the bracketed digit list [a0, a1, ...].
    """
    _CF_GENERATORS[name] = builder


def format_real(x: RealDescriptor, cf_prefix: int = 12) -> str:
    if isinstance(x, Rational):
        return f"rat:{x.num}/{x.den}"
    if isinstance(x, QuadraticSurd):
        return f"surd:({x.a}+{x.b}*sqrt({x.d}))/{x.c}"
    if isinstance(x, CFStream):
        digs = ",".join(str(x.digit(i)) for i in range(1, cf_prefix + 1))
        return f"cf:[{x.a0};{digs}]@{x.name}"
    if isinstance(x, DecimalLiteral):
        return f"dec:{x.digits}~bits={x.precision_bits}"
    raise TypeError(f"cannot serialize {type(x).__name__}")


_SURD_RE = re.compile(
    r"\(\s*(-?\d+)\s*([+-])\s*(\d+)\s*\*\s*sqrt\(\s*(\d+)\s*\)\s*\)\s*/\s*(-?\d+)"
)


def parse_real(text: str) -> RealDescriptor:
    """Inverse of format_real for the parseable families."""
    text = text.strip()
    if text.startswith("rat:"):
        body = text[4:]
        if "/" in body:
            n, d = body.split("/", 1)
            return rational(int(n), int(d))
        return rational(int(body))
    if text.startswith("surd:"):
        m = _SURD_RE.fullmatch(text[5:].strip())
        if not m:
            raise ValueError(f"bad surd syntax: {text!r}")
        a, sign, b, d, c = m.groups()
        bval = int(b) if sign == "+" else -int(b)
        return surd(int(a), bval, int(c), int(d))
    if text.startswith("cf:"):
        body = text[3:]
        gen = None
        if "@" in body:
            body, gen = body.split("@", 1)
        m = re.fullmatch(r"\[(-?\d+)(?:;([\d,]*))?\]", body.strip())
        if not m:
            raise ValueError(f"bad continued fraction syntax: {text!r}")
        a0 = int(m.group(1))
        tail = [int(t) for t in m.group(2).split(",")] if m.group(2) else []
        if any(t < 1 for t in tail):
            raise ValueError("continued fraction digits must be >= 1")
        digits = [a0] + tail
        if gen is None or gen == "exact":
            # finite expansion: a rational
            val = Fraction(digits[-1])
            for a in reversed(digits[:-1]):
                val = a + 1 / val
            return rational(val.numerator, val.denominator)
        if gen == "periodic":
            if not tail:
                raise ValueError("periodic form needs at least one repeating digit")
            from .contfrac import surd_from_periodic_cf

            return surd_from_periodic_cf([a0], tail)
        if gen in _CF_GENERATORS:
            return _CF_GENERATORS[gen](digits)
        raise ValueError(f"unknown continued fraction generator {gen!r}")
    if text.startswith("dec:"):
        body = text[4:]
        if "~bits=" not in body:
            raise ValueError("decimal literal needs ~bits=<precision>")
        digs, bits = body.rsplit("~bits=", 1)
        return DecimalLiteral(digs, int(bits))
    raise ValueError(f"unrecognized real descriptor: {text!r}")
