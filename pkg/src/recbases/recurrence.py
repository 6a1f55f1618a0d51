"""Membership sets A = {n : ||p(n)|| <= eps(n)} with exact decisions.

Schedules are rational-valued *by definition*: the log and power forms are
fixed-precision deterministic evaluations (64-bit mpmath ln, 96-bit truncated
roots), so membership is exactly decidable and runs are reproducible across
platforms.  Membership uses closed <= uniformly; the boundary can only matter
for rational data, never for surd coefficients.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

import mpmath

from .errors import PrecisionExhausted, Undecidable
from .realkernel import (
    Ordering,
    QuadraticSurd,
    Rational,
    RealDescriptor,
    combo_interval,
    exact_linear_combo,
    format_real,
    frac_dist_interval,
    fractional_distance,
    parse_real,
)

__all__ = [
    "ConstantEps",
    "InverseLogEps",
    "InversePowerEps",
    "TableEps",
    "EpsilonSchedule",
    "RecurrenceSetSpec",
    "contains",
    "enumerate_members",
    "density",
    "parse_schedule",
    "format_schedule",
    "bitset_to_list",
    "write_members_file",
    "read_members_file",
]

HALF = Fraction(1, 2)
_POWER_BITS = 96  # truncation precision for n^{-delta} schedules


def _ln_rational(n: int) -> Fraction:
    """Deterministic 64-bit rational approximation of ln(n)."""
    with mpmath.workprec(64):
        v = mpmath.ln(n)
        num, den = mpmath.nint(v * 2**60), 2**60
    return Fraction(int(num), den)


def _int_kth_root(x: int, k: int) -> int:
    """floor(x^(1/k)) for x >= 0, k >= 1 (Newton on integers)."""
    if x < 0:
        raise ValueError("negative radicand")
    if x == 0 or k == 1:
        return x
    r = 1 << (x.bit_length() // k + 1)
    while True:
        nr = ((k - 1) * r + x // r ** (k - 1)) // k
        if nr >= r:
            break
        r = nr
    while r**k > x:
        r -= 1
    return r


@dataclass(frozen=True)
class ConstantEps:
    eps0: Fraction

    def __post_init__(self):
        if not 0 < self.eps0 <= HALF:
            raise ValueError("eps0 must lie in (0, 1/2]")

    def value(self, n: int) -> Fraction:
        return self.eps0


@dataclass(frozen=True)
class InverseLogEps:
    """min(1/2, c/ln n) with floor as a lower clamp; 1/2 for n <= 1."""

    c: Fraction
    floor: Fraction = Fraction(0)

    def __post_init__(self):
        if self.c <= 0:
            raise ValueError("c must be positive")
        if not 0 <= self.floor <= HALF:
            raise ValueError("floor must lie in [0, 1/2]")

    def value(self, n: int) -> Fraction:
        if n <= 1:
            return HALF
        v = max(self.floor, self.c / _ln_rational(n))
        return min(HALF, v)


@dataclass(frozen=True)
class InversePowerEps:
    """n^{-delta}, evaluated as a 96-bit truncation (monotone, deterministic)."""

    delta: Fraction

    def __post_init__(self):
        if self.delta <= 0:
            raise ValueError("delta must be positive")

    def value(self, n: int) -> Fraction:
        if n <= 1:
            return HALF
        u, v = self.delta.numerator, self.delta.denominator
        # floor(2^96 * n^{-u/v}) = floor((2^{96v} / n^u)^{1/v})
        t = _int_kth_root((1 << (_POWER_BITS * v)) // n**u, v)
        if t == 0:
            t = 1  # keep eps > 0; far below anything desk-scale can resolve
        return min(HALF, Fraction(t, 1 << _POWER_BITS))


@dataclass(frozen=True)
class TableEps:
    """Explicit (n, eps) breakpoints; the last value extends to infinity."""

    entries: tuple[tuple[int, Fraction], ...]

    def __post_init__(self):
        if not self.entries:
            raise ValueError("table must be nonempty")
        ns = [n for n, _ in self.entries]
        if ns != sorted(ns) or len(set(ns)) != len(ns):
            raise ValueError("table breakpoints must be strictly increasing")
        for n, e in self.entries:
            if not 0 < e <= HALF:
                raise ValueError("table values must lie in (0, 1/2]")
        vals = [e for n, e in self.entries if n >= 2]
        if any(b > a for a, b in zip(vals, vals[1:])):
            raise ValueError("table must be non-increasing for n >= 2")

    def value(self, n: int) -> Fraction:
        out = self.entries[0][1]
        for bp, e in self.entries:
            if n >= bp:
                out = e
            else:
                break
        return out


EpsilonSchedule = Union[ConstantEps, InverseLogEps, InversePowerEps, TableEps]


def format_schedule(s: EpsilonSchedule) -> str:
    if isinstance(s, ConstantEps):
        return f"const:{s.eps0}"
    if isinstance(s, InverseLogEps):
        return f"invlog:c={s.c},floor={s.floor}"
    if isinstance(s, InversePowerEps):
        return f"invpow:{s.delta}"
    if isinstance(s, TableEps):
        body = ";".join(f"{n}:{e}" for n, e in s.entries)
        return f"table:{body}"
    raise TypeError(f"unknown schedule {type(s).__name__}")


def parse_schedule(text: str) -> EpsilonSchedule:
    text = text.strip()
    kind, _, body = text.partition(":")
    if kind == "const":
        return ConstantEps(Fraction(body))
    if kind == "invlog":
        c, floor = Fraction(1), Fraction(0)
        for part in body.split(","):
            k, _, v = part.partition("=")
            if k == "c":
                c = Fraction(v)
            elif k == "floor":
                floor = Fraction(v)
            else:
                raise ValueError(f"unknown invlog field {k!r}")
        return InverseLogEps(c, floor)
    if kind == "invpow":
        return InversePowerEps(Fraction(body))
    if kind == "table":
        entries = []
        for part in body.split(";"):
            n, _, e = part.partition(":")
            entries.append((int(n), Fraction(e)))
        return TableEps(tuple(entries))
    raise ValueError(f"unrecognized schedule: {text!r}")


@dataclass(frozen=True)
class RecurrenceSetSpec:
    """Polynomial p (as (degree, coefficient) terms) plus an eps schedule."""

    poly: tuple[tuple[int, RealDescriptor], ...]
    schedule: EpsilonSchedule

    def __post_init__(self):
        degs = [d for d, _ in self.poly]
        if not degs:
            raise ValueError("polynomial needs at least one term")
        if len(set(degs)) != len(degs):
            raise ValueError("degrees must be distinct")
        if any(d < 0 for d in degs):
            raise ValueError("degrees must be >= 0")
        if all(isinstance(c, Rational) for _, c in self.poly):
            warnings.warn("all coefficients rational: the set is periodic, "
                          "nontrivial experiments need an irrational coefficient",
                          stacklevel=3)

    def eps(self, n: int) -> Fraction:
        return self.schedule.value(n)

    def serialize(self) -> str:
        terms = ",".join(f"{d}:{format_real(c)}" for d, c in self.poly)
        return f"{terms}|{format_schedule(self.schedule)}"

    @classmethod
    def deserialize(cls, text: str) -> "RecurrenceSetSpec":
        terms_s, _, sched_s = text.rpartition("|")
        poly = []
        for part in terms_s.split(","):
            d, _, c = part.partition(":")
            poly.append((int(d), parse_real(c)))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            return cls(tuple(poly), parse_schedule(sched_s))

    @classmethod
    def monomial(cls, degree: int, alpha: RealDescriptor,
                 schedule: EpsilonSchedule) -> "RecurrenceSetSpec":
        return cls(((degree, alpha),), schedule)


def _poly_terms(spec: RecurrenceSetSpec, n: int) -> list[tuple[int, RealDescriptor]]:
    return [(n**deg, coeff) for deg, coeff in spec.poly]


def contains(spec: RecurrenceSetSpec, n: int, max_bits: int = 1 << 16) -> bool:
    """Exact decision of ||p(n)|| <= eps(n)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    eps = spec.eps(n)
    terms = _poly_terms(spec, n)
    value = exact_linear_combo(terms)
    if value is not None:
        return fractional_distance(value, 1).cmp(eps) != Ordering.ABOVE
    bits = 64
    while bits <= max_bits:
        iv = frac_dist_interval(combo_interval(terms, bits))
        if iv.hi <= eps:
            return True
        if iv.lo > eps:
            return False
        bits *= 2
    raise PrecisionExhausted(f"membership of n={n} undecided at {max_bits} bits")


def enumerate_members(spec: RecurrenceSetSpec, T: int) -> int:
    """Bitset over [0, T]: bit n set iff n is a member.  Deterministic.

    Single-monomial specs with exact coefficients take a tight integer path;
    everything else goes through the generic exact/interval decision.
    """
    if T < 0:
        raise ValueError("T must be >= 0")
    bits = 0
    if len(spec.poly) == 1:
        deg, coeff = spec.poly[0]
        if isinstance(coeff, QuadraticSurd):
            for n in range(T + 1):
                e = spec.eps(n)
                if coeff._dist_le(n**deg, e.numerator, e.denominator):
                    bits |= 1 << n
            return bits
        if isinstance(coeff, Rational):
            for n in range(T + 1):
                e = spec.eps(n)
                r = (n**deg * coeff.num) % coeff.den
                if min(r, coeff.den - r) * e.denominator <= e.numerator * coeff.den:
                    bits |= 1 << n
            return bits
    for n in range(T + 1):
        if contains(spec, n):
            bits |= 1 << n
    return bits


def density(spec: RecurrenceSetSpec, T: int) -> Fraction:
    """|A ∩ {1..T}| / T."""
    if T < 1:
        raise ValueError("T must be >= 1")
    members = enumerate_members(spec, T)
    count = (members >> 1).bit_count()  # n = 1..T
    return Fraction(count, T)


def bitset_to_list(bits: int, T: Optional[int] = None) -> list[int]:
    out = []
    n = 0
    while bits:
        if bits & 1:
            out.append(n)
        bits >>= 1
        n += 1
    return out if T is None else [v for v in out if v <= T]


# ---------------------------------------------------------------------------
# bitset persistence: one JSON header line, then the raw little-endian bitmap
# ---------------------------------------------------------------------------


def write_members_file(path: str, spec: RecurrenceSetSpec, T: int, bits: int) -> None:
    header = {"spec": spec.serialize(), "T": T, "format": "recbases-bitset-v1"}
    payload = bits.to_bytes((T + 8) // 8, "little")
    with open(path, "wb") as fh:
        fh.write(json.dumps(header, sort_keys=True).encode())
        fh.write(b"\n")
        fh.write(payload)


def read_members_file(path: str) -> tuple[RecurrenceSetSpec, int, int]:
    with open(path, "rb") as fh:
        header = json.loads(fh.readline().decode())
        payload = fh.read()
    if header.get("format") != "recbases-bitset-v1":
        raise ValueError("not a recbases bitset file")
    spec = RecurrenceSetSpec.deserialize(header["spec"])
    return spec, header["T"], int.from_bytes(payload, "little")
