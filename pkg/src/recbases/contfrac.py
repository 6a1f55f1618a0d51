"""Continued fractions: expansion, convergents, error terms, best approximations.

Expansion is exact for rationals (Euclid) and quadratic surds (integer state
machine with period detection), and enclosure-verified for everything else.
The error term delta_n is defined by  x = p_n/q_n + delta_n / q_n^2  and obeys
|delta_n| < q_n/q_{n+1} < 1/a_{n+1}.
"""

from __future__ import annotations

import csv
import threading
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from typing import Callable, Iterable, Optional, Sequence, Union

from .errors import PrecisionExhausted, RationalTerminated, Undecidable
from .realkernel import (
    CFStream,
    DecimalLiteral,
    IntervalValue,
    Ordering,
    QuadraticSurd,
    Rational,
    RealDescriptor,
    _surd_sign,
    fractional_distance,
    rational,
    surd,
)

__all__ = [
    "CFExpansion",
    "Convergent",
    "ErrorTerm",
    "expand",
    "convergents",
    "error_term",
    "delta_estimate",
    "legendre_check",
    "is_best_approx",
    "pattern_density",
    "cf_eval",
    "surd_from_periodic_cf",
    "stream_from_enclosures",
    "convergent_table_csv",
]

_STREAM_MAX_BITS = 1 << 20


@dataclass(frozen=True)
class Convergent:
    n: int
    p: int
    q: int

    def as_fraction(self) -> Fraction:
        return Fraction(self.p, self.q)


@dataclass
class ErrorTerm:
    """delta_n with  x = p_n/q_n + delta_n/q_n^2; exact when x is."""

    n: int
    delta: Union[Rational, QuadraticSurd, IntervalValue]
    convergent: Convergent

    def bounds(self, bits: int = 80) -> IntervalValue:
        if isinstance(self.delta, IntervalValue):
            return self.delta
        return self.delta.interval(bits)


def cf_eval(digits: Sequence[int]) -> Fraction:
    """Value of the finite continued fraction [d0; d1, ..., dk]."""
    if not digits:
        raise ValueError("empty continued fraction")
    val = Fraction(digits[-1])
    for a in reversed(digits[:-1]):
        val = a + 1 / val
    return val


# ---------------------------------------------------------------------------
# expansion engines
# ---------------------------------------------------------------------------


class _Engine:
    """Produces digits one at a time; may report a detected period."""

    finite = False
    period: Optional[tuple[int, int]] = None  # (start index, length)

    def next_digit(self) -> Optional[int]:
        raise NotImplementedError


class _RationalEngine(_Engine):
    finite = True

    def __init__(self, num: int, den: int):
        self._num, self._den = num, den

    def next_digit(self) -> Optional[int]:
        if self._den == 0:
            return None
        a, r = divmod(self._num, self._den)
        self._num, self._den = self._den, r
        return a


class _SurdEngine(_Engine):
    """Integer (P, Q, D) walk: x_i = (P_i + sqrt(D))/Q_i, a_i = floor(x_i).

    States eventually repeat; the first repeat pins the period.
    """

    def __init__(self, x: QuadraticSurd):
        a, b, c, d = x.a, x.b, x.c, x.d
        if b < 0:
            # (a + b sqrt d)/c = (-a + |b| sqrt d)/(-c)
            P, Q = -a, -c
        else:
            P, Q = a, c
        D = b * b * d
        if (D - P * P) % Q != 0:
            P, D, Q = P * abs(Q), D * Q * Q, Q * abs(Q)
        self._P, self._Q, self._D = P, Q, D
        self._index = 0
        self._seen: dict[tuple[int, int], int] = {}

    def next_digit(self) -> Optional[int]:
        P, Q, D = self._P, self._Q, self._D
        if self.period is None:
            key = (P, Q)
            if key in self._seen:
                self.period = (self._seen[key], self._index - self._seen[key])
            else:
                self._seen[key] = self._index
        a = _floor_P_sqrtD_over_Q(P, D, Q)
        P1 = a * Q - P
        Q1 = (D - P1 * P1) // Q
        self._P, self._Q = P1, Q1
        self._index += 1
        return a


def _floor_P_sqrtD_over_Q(P: int, D: int, Q: int) -> int:
    """floor((P + sqrt(D))/Q) for non-square D, Q != 0, exact."""
    s = isqrt(D)  # s <= sqrt(D) < s+1, strict (D non-square)
    if Q > 0:
        return (P + s) // Q
    # floor of a negative-denominator quotient: -ceil((P + sqrt D)/|Q|)
    return -((P + s) // -Q) - 1


class _StreamEngine(_Engine):
    def __init__(self, x: CFStream):
        self._x = x
        self._i = 0

    def next_digit(self) -> Optional[int]:
        a = self._x.digit(self._i)
        self._i += 1
        return a


class _EnclosureEngine(_Engine):
    """Digits verified against a shrinking enclosure of the value.

    Restarts from scratch at doubled precision whenever a floor is ambiguous;
    ``cap`` bounds how much precision the enclosure can supply (a decimal
    literal cannot go past its stated bits).
    """

    def __init__(self, encl: Callable[[int], IntervalValue], start_bits: int = 96,
                 cap: int = _STREAM_MAX_BITS):
        if cap < 8:
            raise PrecisionExhausted(f"cannot expand: only {cap} usable bits")
        self._encl = encl
        self._bits = min(start_bits, cap)
        self._cap = cap
        self._digits: list[int] = []
        self._emitted = 0

    def next_digit(self) -> Optional[int]:
        while self._emitted >= len(self._digits):
            req = min(self._bits, self._cap)
            iv = self._encl(req)
            digs = _gauss_digits(iv.lo, iv.hi, self._emitted + 1)
            if len(digs) > len(self._digits):
                self._digits = digs
            if len(self._digits) <= self._emitted:
                if req >= self._cap:
                    raise PrecisionExhausted(
                        f"digit {self._emitted} not determined within {self._cap} bits"
                    )
                self._bits *= 2
        a = self._digits[self._emitted]
        self._emitted += 1
        return a


def _gauss_digits(lo: Fraction, hi: Fraction, want: int) -> list[int]:
    """Digits certain for every value in [lo, hi]; stops at the first ambiguity."""
    digs: list[int] = []
    while len(digs) < want:
        fl_lo = lo.numerator // lo.denominator
        fl_hi = hi.numerator // hi.denominator
        if fl_lo != fl_hi:
            break
        digs.append(fl_lo)
        flo, fhi = lo - fl_lo, hi - fl_hi
        if flo == 0:
            break
        lo, hi = 1 / fhi, 1 / flo
    return digs


class CFExpansion:
    """Lazily extendable digit sequence [a0; a1, a2, ...] of a real source.

    Extension mutates an internal cache under a lock; reads of already
    computed prefixes are safe concurrently.
    """

    def __init__(self, source: RealDescriptor, engine: _Engine):
        self.source = source
        self._engine = engine
        self._digits: list[int] = []
        self._done = False
        self._lock = threading.Lock()

    @property
    def finite(self) -> bool:
        return self._done

    @property
    def period(self) -> Optional[tuple[int, int]]:
        return self._engine.period

    def __len__(self) -> int:
        return len(self._digits)

    def extend_to(self, count: int) -> int:
        """Ensure `count` total digits (a0 included); returns the available count."""
        with self._lock:
            while len(self._digits) < count and not self._done:
                a = self._engine.next_digit()
                if a is None:
                    self._done = True
                    break
                if len(self._digits) >= 1 and a < 1:
                    raise ValueError(f"digit a_{len(self._digits)} = {a} < 1")
                self._digits.append(a)
        return len(self._digits)

    def digit(self, i: int) -> int:
        """a_i (i = 0 is the integer part)."""
        if self.extend_to(i + 1) <= i:
            raise RationalTerminated(len(self._digits))
        return self._digits[i]

    def digits(self, count: int) -> list[int]:
        """First `count` digits, shorter only if the expansion terminates."""
        n = self.extend_to(count)
        return list(self._digits[:n])

    @property
    def a0(self) -> int:
        return self.digit(0)

    def detect_period(self, max_digits: int = 100000) -> Optional[tuple[int, int]]:
        """Extend a surd expansion until its period is known."""
        step = max(len(self._digits), 16)
        while self.period is None and step <= max_digits:
            step *= 2
            if self.extend_to(step) < step:
                return None
        return self.period

    def __str__(self):
        shown = ",".join(str(d) for d in self._digits[1:13])
        tail = "" if self._done and len(self._digits) <= 13 else ",..."
        return f"[{self._digits[0] if self._digits else '?'};{shown}{tail}]"


def expand(x: RealDescriptor, count: int) -> CFExpansion:
    """First `count` digits of x's continued fraction (a0 counts as one).

    Rationals terminate early without error; reading past the end raises
    RationalTerminated.  Surds are exact with period detection; streams and
    decimal literals are enclosure-verified.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    if isinstance(x, Rational):
        engine: _Engine = _RationalEngine(x.num, x.den)
    elif isinstance(x, QuadraticSurd):
        engine = _SurdEngine(x)
    elif isinstance(x, CFStream):
        engine = _StreamEngine(x)
    elif isinstance(x, DecimalLiteral):
        engine = _EnclosureEngine(x.interval, cap=x.precision_bits - 2)
    else:
        engine = _EnclosureEngine(x.interval)
    exp = CFExpansion(x, engine)
    exp.extend_to(count)
    return exp


def convergents(cf: CFExpansion, upto: int) -> list[Convergent]:
    """Convergents p_n/q_n for n = 0..upto (recursion seeded at p_-1/q_-1)."""
    if cf.extend_to(upto + 1) < upto + 1:
        raise RationalTerminated(len(cf))
    out: list[Convergent] = []
    pm1, qm1 = 1, 0
    p, q = cf.digit(0), 1
    out.append(Convergent(0, p, q))
    for n in range(1, upto + 1):
        a = cf.digit(n)
        p, pm1 = a * p + pm1, p
        q, qm1 = a * q + qm1, q
        out.append(Convergent(n, p, q))
    return out


def error_term(x: RealDescriptor, n: int, bits: int = 128) -> ErrorTerm:
    """delta_n = q_n^2 (x - p_n/q_n); exact for rationals and surds."""
    cf = expand(x, n + 1)
    conv = convergents(cf, n)[n]
    p, q = conv.p, conv.q
    if isinstance(x, Rational):
        delta = Fraction(q * q * x.num, x.den) - p * q
        return ErrorTerm(n, rational(delta.numerator, delta.denominator), conv)
    if isinstance(x, QuadraticSurd):
        # q^2 (a + b sqrt d)/c - p q  ->  ((q^2 a - p q c) + q^2 b sqrt d)/c
        val = surd(q * q * x.a - p * q * x.c, q * q * x.b, x.c, x.d)
        return ErrorTerm(n, val, conv)
    work = bits + 2 * q.bit_length() + 4
    iv = x.interval(work)
    lo = q * q * iv.lo - p * q
    hi = q * q * iv.hi - p * q
    return ErrorTerm(n, IntervalValue(min(lo, hi), max(lo, hi)), conv)


def delta_estimate(window: Sequence[int], n_parity: int, l: int) -> Fraction:
    """Estimate of delta_n from the digit window a_{n-l}..a_{n+l}.

    Uses rho = [a_n; a_{n+1}, ..., a_{n+l}], lam = [0; a_{n-1}, ..., a_{n-l}]
    and returns (-1)^n_parity * (rho - a_n)(a_n + lam)/(rho + lam); the true
    delta_n differs by O(2^{-l/2}).
    """
    if l < 1:
        raise ValueError("l must be >= 1")
    if len(window) != 2 * l + 1:
        raise ValueError(f"window must hold 2l+1 = {2*l+1} digits, got {len(window)}")
    if any(a < 1 for a in window):
        raise ValueError("window digits must be >= 1")
    center = window[l]
    rho = cf_eval(list(window[l:]))
    lam = cf_eval([0] + list(reversed(window[:l])))
    est = (rho - center) * (center + lam) / (rho + lam)
    return est if n_parity % 2 == 0 else -est


def legendre_check(p: int, q: int, x: RealDescriptor, max_bits: int = _STREAM_MAX_BITS) -> bool:
    """True iff |x - p/q| < 1/(2 q^2) (then p/q must be a convergent)."""
    if q < 1:
        raise ValueError("q must be >= 1")
    target = Fraction(p, q)
    eps = Fraction(1, 2 * q * q)
    if isinstance(x, Rational):
        return abs(x.as_fraction() - target) < eps
    if isinstance(x, QuadraticSurd):
        return x.cmp_fraction(target - eps) > 0 and x.cmp_fraction(target + eps) < 0
    bits = 64
    while bits <= max_bits:
        try:
            iv = x.interval(bits)
        except PrecisionExhausted:
            if isinstance(x, DecimalLiteral):
                raise Undecidable(x.precision_bits)
            raise
        if iv.lo > target - eps and iv.hi < target + eps:
            return True
        if iv.hi < target - eps or iv.lo > target + eps:
            return False
        bits *= 2
    raise PrecisionExhausted(f"legendre check undecided at {max_bits} bits")


def _abs_cmp_surd(A1: int, B1: int, A2: int, B2: int, d: int) -> int:
    """Sign of |A1 + B1 sqrt d| - |A2 + B2 sqrt d|."""
    # |u| - |v| has the sign of (u-v)(u+v) when u,v share... compare squares:
    # u^2 - v^2 = (A1^2 + B1^2 d - A2^2 - B2^2 d) + 2 (A1 B1 - A2 B2) sqrt d
    return _surd_sign(
        A1 * A1 + B1 * B1 * d - A2 * A2 - B2 * B2 * d,
        2 * (A1 * B1 - A2 * B2),
        d,
    )


def _abs_linear_cmp(x: RealDescriptor, q1: int, p1: int, q2: int, p2: int,
                    max_bits: int = _STREAM_MAX_BITS) -> int:
    """Sign of |q1 x - p1| - |q2 x - p2|, exact where possible."""
    if isinstance(x, Rational):
        v1 = abs(q1 * x.as_fraction() - p1)
        v2 = abs(q2 * x.as_fraction() - p2)
        return (v1 > v2) - (v1 < v2)
    if isinstance(x, QuadraticSurd):
        # qi x - pi = ((qi a - pi c) + qi b sqrt d)/c ; common denominator cancels
        return _abs_cmp_surd(
            q1 * x.a - p1 * x.c, q1 * x.b, q2 * x.a - p2 * x.c, q2 * x.b, x.d
        )
    bits = 64
    while bits <= max_bits:
        iv = x.interval(bits + max(abs(q1), abs(q2)).bit_length() + 2)
        c1 = sorted((q1 * iv.lo - p1, q1 * iv.hi - p1))
        c2 = sorted((q2 * iv.lo - p2, q2 * iv.hi - p2))
        lo1, hi1 = _abs_bounds(*c1)
        lo2, hi2 = _abs_bounds(*c2)
        if hi1 < lo2:
            return -1
        if lo1 > hi2:
            return 1
        bits *= 2
    raise PrecisionExhausted("absolute-value comparison undecided")


def _abs_bounds(lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
    if lo >= 0:
        return lo, hi
    if hi <= 0:
        return -hi, -lo
    return Fraction(0), max(-lo, hi)


def is_best_approx(p: int, q: int, x: RealDescriptor, max_bits: int = _STREAM_MAX_BITS) -> bool:
    """Best rational approximation test: |q x - p| < |q' x - p'| for all
    p'/q' != p/q with q' <= q.

    Decided through the convergent characterization (brute force only for
    small rational x, where tie cases are real); validated against exhaustive
    search in the test suite.
    """
    if q < 1:
        raise ValueError("q must be >= 1")
    if gcd(p, q) != 1:
        raise ValueError("p/q must be in lowest terms")
    if isinstance(x, Rational) and q <= 10_000:
        return _best_approx_brute(p, q, x.as_fraction())
    if q == 1:
        # the only competitors are other integers; nearest integer wins
        return _abs_linear_cmp(x, 1, p, 1, p - 1) < 0 and _abs_linear_cmp(x, 1, p, 1, p + 1) < 0
    cf = expand(x, 2)
    n = 0
    pm1, qm1 = 1, 0
    pc, qc = cf.digit(0), 1
    while qc <= q:
        if qc == q and n >= 1:
            return pc == p
        n += 1
        try:
            a = cf.digit(n)
        except RationalTerminated:
            return False
        pc, pm1 = a * pc + pm1, pc
        qc, qm1 = a * qc + qm1, qc
    return False


def _best_approx_brute(p: int, q: int, x: Fraction) -> bool:
    best = abs(q * x - p)
    for q2 in range(1, q + 1):
        p2 = round(q2 * x)
        for cand in (p2 - 1, p2, p2 + 1):
            if (cand, q2) == (p, q) or (q2 == q and cand == p):
                continue
            if Fraction(cand, q2) == Fraction(p, q):
                continue
            if abs(q2 * x - cand) <= best:
                return False
    return True


def pattern_density(cf: CFExpansion, pattern: Sequence[int], N: int) -> Fraction:
    """Empirical frequency of the digit pattern among start offsets 1..N.

    Counts offsets j in [0, N) with a_{j+t} = pattern[t-1] for t = 1..len;
    a purely diagnostic statistic.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    if not pattern:
        raise ValueError("pattern must be nonempty")
    want = N + len(pattern)
    got = cf.extend_to(want + 1)
    if got < want + 1:
        raise RationalTerminated(got)
    pat = list(pattern)
    hits = 0
    for j in range(N):
        if all(cf.digit(j + t + 1) == pat[t] for t in range(len(pat))):
            hits += 1
    return Fraction(hits, N)


# ---------------------------------------------------------------------------
# construction helpers
# ---------------------------------------------------------------------------


class _SurdField:
    """Arithmetic in Q(sqrt(d)) on (u, v) = u + v*sqrt(d), u, v Fractions."""

    def __init__(self, d: int):
        self.d = d

    def inv(self, t: tuple[Fraction, Fraction]) -> tuple[Fraction, Fraction]:
        u, v = t
        den = u * u - v * v * self.d
        if den == 0:
            raise ZeroDivisionError("zero element in Q(sqrt d)")
        return (u / den, -v / den)

    def add_int(self, t: tuple[Fraction, Fraction], a: int) -> tuple[Fraction, Fraction]:
        return (t[0] + a, t[1])


def surd_from_periodic_cf(prefix: Sequence[int], period: Sequence[int]) -> QuadraticSurd:
    """Exact value of [prefix; period, period, ...].

    The purely periodic tail solves a quadratic; the prefix is folded on top
    with field arithmetic.  All digits after the leading one must be >= 1.
    """
    if not period:
        raise ValueError("period must be nonempty")
    if any(a < 1 for a in period) or any(a < 1 for a in list(prefix)[1:]):
        raise ValueError("continued fraction digits must be >= 1")
    # tail t = [b1; b2..bL, t] = (p t + p')/(q t + q')
    pm1, qm1 = 1, 0
    p, q = period[0], 1
    for a in period[1:]:
        p, pm1 = a * p + pm1, p
        q, qm1 = a * q + qm1, q
    # q t^2 + (q' - p) t - p' = 0
    A, B, C = q, qm1 - p, -pm1
    disc = B * B - 4 * A * C
    from .realkernel import squarefree_decompose

    d0, s = squarefree_decompose(disc)
    if d0 == 1:
        raise ValueError("period does not define an irrational")
    field = _SurdField(d0)
    t = (Fraction(-B, 2 * A), Fraction(s, 2 * A))  # positive root
    for a in reversed(list(prefix)):
        t = field.add_int(field.inv(t), a)  # [.., a, tail] -> a + 1/tail
    u, v = t
    num_den = u.denominator * v.denominator // gcd(u.denominator, v.denominator)
    a_int = u.numerator * (num_den // u.denominator)
    b_int = v.numerator * (num_den // v.denominator)
    val = surd(a_int, b_int, num_den, d0)
    if not isinstance(val, QuadraticSurd):
        raise ValueError("period does not define an irrational")
    return val


def stream_from_enclosures(
    encl: Callable[[int], IntervalValue],
    name: str = "derived",
    start_bits: int = 128,
    max_bits: int = _STREAM_MAX_BITS,
) -> CFStream:
    """CFStream whose digits are extracted from a refinable enclosure.

    ``encl(bits)`` must return an interval of width <= 2^-bits around a fixed
    irrational value.  Digits are re-derived from scratch at doubled precision
    whenever the current enclosure leaves the next floor ambiguous.
    """
    state: dict = {"bits": start_bits, "digits": []}
    lock = threading.Lock()

    def ensure(k: int) -> None:
        if len(state["digits"]) > k:
            return
        with lock:
            while len(state["digits"]) <= k:
                if state["bits"] > max_bits:
                    raise PrecisionExhausted(
                        f"digit {k} of {name} not determined within {max_bits} bits"
                    )
                iv = encl(state["bits"])
                digs = _gauss_digits(iv.lo, iv.hi, k + 2)
                if len(digs) > len(state["digits"]):
                    state["digits"] = digs
                if len(state["digits"]) <= k:
                    state["bits"] *= 2

    ensure(0)
    a0 = state["digits"][0]

    def digit(i: int) -> int:
        ensure(i)
        return state["digits"][i]

    return CFStream(a0=a0, digits=digit, name=name)


def convergent_table_csv(x: RealDescriptor, upto: int, out) -> None:
    """Write n, a_n, p_n, q_n, delta_n_lo, delta_n_hi rows to a file object."""
    cf = expand(x, upto + 1)
    convs = convergents(cf, upto)
    writer = csv.writer(out)
    writer.writerow(["n", "a_n", "p_n", "q_n", "delta_n_lo", "delta_n_hi"])
    for conv in convs:
        et = error_term(x, conv.n)
        b = et.bounds(80)
        writer.writerow([
            conv.n,
            cf.digit(conv.n),
            conv.p,
            conv.q,
            f"{float(b.lo):.15g}",
            f"{float(b.hi):.15g}",
        ])
