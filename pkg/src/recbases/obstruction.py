"""Diophantine certificates that exclude odd N from the 2-fold sumset.

A certificate (N, k, m, gamma, delta) with N, m odd, k even, gcd(m,k)=1 and
N*alpha = m/k + gamma/(kN), |gamma| < 1 - delta, proves N not in 2A for every
schedule bounded by eps0 = delta/(2k): along any split N = n1 + n2 the values
n1^2 alpha and n2^2 alpha sit at fractional distance > 2 eps0 from each other.

The converse diagnostics (scan / exact_form) recover such data from a complement
element; the constants of the underlying equidistribution input are inexplicit,
so scans take explicit caps instead.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence, Union

from .errors import InvalidParity, PrecisionExhausted
from .realkernel import (
    IntervalValue,
    Ordering,
    QuadraticSurd,
    Rational,
    RealDescriptor,
    exact_linear_combo,
    combo_interval,
    fractional_distance,
    format_real,
    rational,
)
from .recurrence import ConstantEps, RecurrenceSetSpec, bitset_to_list, enumerate_members

__all__ = [
    "ObstructionCertificate",
    "VerificationOutcome",
    "VerificationResult",
    "LimitObstruction",
    "Degenerate",
    "ExactFormResult",
    "GapDiagnostic",
    "certify",
    "build_certificate",
    "verify_certificate",
    "rational_obstruction_scan",
    "exact_form",
    "limit_obstruction_check",
    "gap_bound_diagnostic",
    "least_denominator",
]

_GAMMA_BITS = 80
_ULP = Fraction(1, 1 << _GAMMA_BITS)
_RELIABILITY_FLOOR = 10  # empirical: below this the exact-form conclusion is unreliable


class VerificationOutcome(Enum):
    ALGEBRA_ONLY = "algebra"
    ALGEBRA_AND_BRUTE_FORCE = "brute"
    REFUTED = "refuted"


@dataclass
class ObstructionCertificate:
    alpha: RealDescriptor
    N: int
    k: int
    m: int
    gamma_lo: Fraction
    gamma_hi: Fraction
    gamma_exact: Optional[RealDescriptor]
    delta: Fraction
    eps0_max: Fraction

    def gamma_abs_upper(self) -> Fraction:
        return max(abs(self.gamma_lo), abs(self.gamma_hi))

    def to_json(self) -> dict:
        return {
            "alpha": format_real(self.alpha),
            "N": self.N,
            "k": self.k,
            "m": self.m,
            "gamma_lo": str(self.gamma_lo),
            "gamma_hi": str(self.gamma_hi),
            "gamma": float((self.gamma_lo + self.gamma_hi) / 2),
            "delta": str(self.delta),
            "eps0_max": str(self.eps0_max),
            "eps0_max_float": float(self.eps0_max),
        }

    @classmethod
    def from_json(cls, data: dict) -> "ObstructionCertificate":
        from .realkernel import parse_real

        return cls(
            alpha=parse_real(data["alpha"]),
            N=int(data["N"]),
            k=int(data["k"]),
            m=int(data["m"]),
            gamma_lo=Fraction(data["gamma_lo"]),
            gamma_hi=Fraction(data["gamma_hi"]),
            gamma_exact=None,
            delta=Fraction(data["delta"]),
            eps0_max=Fraction(data["eps0_max"]),
        )


def _gamma_value(alpha: RealDescriptor, N: int, k: int, m: int):
    """gamma = (k N alpha - m) * N, exact descriptor or None."""
    return exact_linear_combo([(k * N * N, alpha), (-m * N, rational(1))])


def _gamma_bounds(alpha: RealDescriptor, N: int, k: int, m: int,
                  bits: int = _GAMMA_BITS) -> tuple[Fraction, Fraction]:
    exact = _gamma_value(alpha, N, k, m)
    if exact is not None:
        iv = exact.interval(bits)
    else:
        iv = combo_interval([(k * N * N, alpha), (-m * N, rational(1))], bits)
    return iv.lo, iv.hi


def nearest_integer(alpha: RealDescriptor, mult: int, max_bits: int = 1 << 16) -> int:
    """Nearest integer to mult*alpha (ties cannot occur for irrationals)."""
    fd = fractional_distance(alpha, mult)
    if fd.nearest is not None:
        return fd.nearest
    bits = 64
    while bits <= max_bits:
        iv = alpha.interval(bits + abs(mult).bit_length() + 2)
        lo = mult * iv.lo + Fraction(1, 2)
        hi = mult * iv.hi + Fraction(1, 2)
        if lo > hi:
            lo, hi = hi, lo
        f_lo = lo.numerator // lo.denominator
        f_hi = hi.numerator // hi.denominator
        if f_lo == f_hi:
            return f_lo
        bits *= 2
    raise PrecisionExhausted("nearest integer undecided")


def build_certificate(alpha: RealDescriptor, N: int, k: int, m: int,
                      require_margin: bool = True) -> Optional[ObstructionCertificate]:
    """Certificate for explicitly given (k, m); None when |gamma| >= 1.

    delta is derived a posteriori as 1 - (upper bound of |gamma| plus one ulp),
    so the recorded inequality is strict and sound by construction.
    """
    if N < 1 or N % 2 == 0:
        raise InvalidParity(f"N must be a positive odd integer, got {N}")
    if k < 2 or k % 2 != 0:
        raise InvalidParity(f"k must be a positive even integer, got {k}")
    if m % 2 == 0 or gcd(m, k) != 1:
        return None
    lo, hi = _gamma_bounds(alpha, N, k, m)
    abs_hi = max(abs(lo), abs(hi)) + _ULP
    delta = 1 - abs_hi
    if require_margin and delta <= 0:
        return None
    gamma_exact = _gamma_value(alpha, N, k, m)
    return ObstructionCertificate(
        alpha=alpha, N=N, k=k, m=m,
        gamma_lo=lo, gamma_hi=hi, gamma_exact=gamma_exact,
        delta=delta, eps0_max=delta / (2 * k),
    )


def certify(alpha: RealDescriptor, N: int, k_max: int) -> Optional[ObstructionCertificate]:
    """Best certificate (max eps0_max) over even k <= k_max, or None.

    For each even k the only viable m is the nearest integer to k*N*alpha
    (any other odd m puts |gamma| >= 1 once N >= 3); pairs with gcd(m,k) > 1
    are covered by the divisor k' < k and skipped here.
    """
    if N % 2 == 0:
        raise InvalidParity(f"N must be odd, got {N}")
    if N < 1:
        raise ValueError("N must be >= 1")
    best: Optional[ObstructionCertificate] = None
    for k in range(2, k_max + 1, 2):
        m = nearest_integer(alpha, k * N)
        if m % 2 == 0 or gcd(m, k) != 1:
            continue
        cert = build_certificate(alpha, N, k, m)
        if cert is None:
            continue
        if best is None or cert.eps0_max > best.eps0_max:
            best = cert
    return best


@dataclass
class VerificationResult:
    outcome: VerificationOutcome
    notes: str = ""
    eps_checked: Optional[Fraction] = None


def verify_certificate(cert: ObstructionCertificate, T_check: int = 0,
                       slack: Fraction = Fraction(0)) -> VerificationResult:
    """Re-derive the certificate inequality exactly, then optionally brute-force.

    Brute force runs when N <= T_check: the membership set is enumerated up to
    N at eps0 = eps0_max*(1-slack) and every split N = n1 + n2 is checked.
    """
    c = cert
    if c.N < 1 or c.N % 2 == 0 or c.k % 2 != 0 or c.k < 2:
        return VerificationResult(VerificationOutcome.REFUTED, "parity/structure violation")
    if c.m % 2 == 0 or gcd(c.m, c.k) != 1:
        return VerificationResult(VerificationOutcome.REFUTED, "m must be odd and coprime to k")
    if not 0 < c.delta < 1 or c.eps0_max != c.delta / (2 * c.k):
        return VerificationResult(VerificationOutcome.REFUTED, "bad delta/eps0 bookkeeping")
    # |gamma| < 1 - delta, from scratch at higher precision
    lo, hi = _gamma_bounds(c.alpha, c.N, c.k, c.m, bits=_GAMMA_BITS * 2)
    if max(abs(lo), abs(hi)) >= 1 - c.delta + _ULP:
        return VerificationResult(VerificationOutcome.REFUTED,
                                  f"|gamma| bound fails: [{float(lo)}, {float(hi)}]")
    if c.N > T_check:
        return VerificationResult(VerificationOutcome.ALGEBRA_ONLY, "N above brute-force window")
    eps = c.eps0_max * (1 - slack)
    spec = RecurrenceSetSpec.monomial(2, c.alpha, ConstantEps(eps))
    members = enumerate_members(spec, c.N)
    mlist = bitset_to_list(members)
    mset = set(mlist)
    for n in mlist:
        if c.N - n in mset:
            return VerificationResult(
                VerificationOutcome.REFUTED,
                f"decomposition {n} + {c.N - n} found at eps0 = {eps}",
                eps_checked=eps,
            )
    return VerificationResult(VerificationOutcome.ALGEBRA_AND_BRUTE_FORCE,
                              "no decomposition exists", eps_checked=eps)


def rational_obstruction_scan(
    alpha: RealDescriptor, N: int, k_max: int, bound_scale: Union[int, Fraction]
) -> list[tuple[int, Fraction]]:
    """All k <= k_max with ||k N alpha|| <= bound_scale/N, best first.

    Sorting key is ||kN alpha||*k ascending (cheap approximations of the
    obstruction quality); every genuine complement element should light up
    here for moderate caps.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    bound = Fraction(bound_scale) / N
    hits: list[tuple[int, Fraction]] = []
    for k in range(1, k_max + 1):
        fd = fractional_distance(alpha, k * N)
        if fd.cmp(min(bound, Fraction(1, 2))) != Ordering.ABOVE:
            hits.append((k, fd.as_fraction(_GAMMA_BITS)))
    hits.sort(key=lambda kv: (kv[1] * kv[0], kv[0]))
    return hits


@dataclass
class ExactFormResult:
    k: int
    m: int
    gamma_lo: Fraction
    gamma_hi: Fraction
    eps_bound: Fraction  # certified lower bound of (1 - |gamma|)/(2k)
    below_reliability_floor: bool


def exact_form(alpha: RealDescriptor, N: int, eps1: Fraction,
               k_cap: Optional[int] = None) -> Optional[ExactFormResult]:
    """Even-k decomposition N*alpha = m/k + gamma/(kN) with (1-|gamma|)/(2k) > eps1.

    Returns the best such k (max certified bound) within the cap, or None.
    Even N never qualifies.  N below the reliability floor is flagged, not
    rejected.
    """
    eps1 = Fraction(eps1)
    if N < 1:
        raise ValueError("N must be >= 1")
    if N % 2 == 0:
        return None
    if k_cap is None:
        k_cap = max(2, int(1 / (2 * eps1)))
    best: Optional[ExactFormResult] = None
    for k in range(2, k_cap + 1, 2):
        m = nearest_integer(alpha, k * N)
        if gcd(m, k) != 1:
            continue
        lo, hi = _gamma_bounds(alpha, N, k, m)
        bound = (1 - (max(abs(lo), abs(hi)) + _ULP)) / (2 * k)
        if bound > eps1 and (best is None or bound > best.eps_bound):
            best = ExactFormResult(k, m, lo, hi, bound, N < _RELIABILITY_FLOOR)
    return best


@dataclass
class LimitObstruction:
    certificates: list[ObstructionCertificate]
    k: int
    gamma_lo: Fraction
    gamma_hi: Fraction
    irrationality_checked_to: Optional[int]  # None: excluded for ALL n by algebra


@dataclass
class Degenerate:
    n: int


def limit_obstruction_check(
    alpha: RealDescriptor,
    certs: Sequence[ObstructionCertificate],
    k: int,
    n_bound: int,
    gamma_exact: Optional[RealDescriptor] = None,
    tol: Fraction = Fraction(1, 100),
) -> Union[LimitObstruction, Degenerate]:
    """Estimate the limit of the certificate gammas and test degeneracy.

    Degeneracy means gamma + k n^2 alpha is an integer for some n >= 0.  With
    an exact surd limit this reduces to one rational identity (decided for all
    n at once); otherwise each n <= n_bound is excluded by interval arithmetic.
    """
    if not certs:
        raise ValueError("need at least one certificate")
    if any(c.k != k for c in certs):
        raise ValueError("certificates must share k")
    mids = [(c.gamma_lo + c.gamma_hi) / 2 for c in certs]
    if len(mids) >= 2 and abs(mids[-1] - mids[-2]) > tol:
        raise ValueError(f"gamma sequence not settled within tolerance {tol}")
    spread = abs(mids[-1] - mids[-2]) if len(mids) >= 2 else Fraction(0)
    pad = spread + (certs[-1].gamma_hi - certs[-1].gamma_lo) + tol / 4
    glo, ghi = mids[-1] - pad, mids[-1] + pad

    if gamma_exact is not None:
        return _degeneracy_algebraic(alpha, gamma_exact, k, certs, glo, ghi)

    # interval route: can only certify non-degeneracy up to n_bound
    bits = 160
    for n in range(0, n_bound + 1):
        coeff = k * n * n
        exact = exact_linear_combo([(coeff, alpha)]) if coeff else rational(0)
        if exact is not None:
            iv = exact.interval(bits)
        else:
            iv = combo_interval([(coeff, alpha)], bits)
        lo, hi = glo + iv.lo, ghi + iv.hi
        if _contains_integer(lo, hi):
            raise PrecisionExhausted(
                f"cannot exclude integrality of gamma + k*{n}^2*alpha "
                "(supply gamma_exact for an algebraic decision)"
            )
    return LimitObstruction(list(certs), k, glo, ghi, irrationality_checked_to=n_bound)


def _contains_integer(lo: Fraction, hi: Fraction) -> bool:
    ceil_lo = -((-lo.numerator) // lo.denominator)
    floor_hi = hi.numerator // hi.denominator
    return floor_hi >= ceil_lo


def _degeneracy_algebraic(alpha, gamma, k, certs, glo, ghi) -> Union[LimitObstruction, Degenerate]:
    """Exact test of gamma + k n^2 alpha in Z over all n, via field coordinates."""
    a_rat, a_surd, a_d = _field_coords(alpha)
    g_rat, g_surd, g_d = _field_coords(gamma)
    if a_surd == 0:
        raise ValueError("alpha must be irrational for the degeneracy test")
    if g_surd != 0 and g_d != a_d:
        # independent square roots never combine to an integer
        return LimitObstruction(list(certs), k, glo, ghi, irrationality_checked_to=None)
    # surd part: g_surd + k n^2 a_surd = 0
    target = -g_surd / (k * a_surd)
    if target < 0 or target.denominator != 1:
        return LimitObstruction(list(certs), k, glo, ghi, irrationality_checked_to=None)
    from math import isqrt

    t = isqrt(target.numerator)
    if t * t != target.numerator:
        return LimitObstruction(list(certs), k, glo, ghi, irrationality_checked_to=None)
    if (g_rat + k * t * t * a_rat).denominator == 1:
        return Degenerate(t)
    return LimitObstruction(list(certs), k, glo, ghi, irrationality_checked_to=None)


def _field_coords(x: RealDescriptor) -> tuple[Fraction, Fraction, Optional[int]]:
    """(rational part, sqrt coefficient, d) of a Rational or QuadraticSurd."""
    if isinstance(x, Rational):
        return x.as_fraction(), Fraction(0), None
    if isinstance(x, QuadraticSurd):
        return Fraction(x.a, x.c), Fraction(x.b, x.c), x.d
    raise ValueError("exact descriptor required")


@dataclass
class GapDiagnostic:
    L: int
    m: int
    dist: Fraction       # upper bound of ||m L alpha||
    rhs_bound: Fraction  # k ||k' N' alpha|| + k' ||k N alpha|| (upper)
    q0: int              # least q with ||q alpha|| <= dist


def gap_bound_diagnostic(alpha: RealDescriptor, N: int, N_next: int,
                         k: int, k_next: int) -> GapDiagnostic:
    """Mechanism behind the gap lower bound: ||k k' (N'-N) alpha|| is small.

    The triangle bound ||mL a|| <= k ||k'N' a|| + k' ||k N a|| is asserted, and
    the least denominator achieving the observed distance is reported (the gap
    L must carry the whole of it divided by m).
    """
    if not N < N_next:
        raise ValueError("need N < N_next")
    L = N_next - N
    m = k * k_next
    d_main = fractional_distance(alpha, m * L).as_fraction(_GAMMA_BITS)
    d1 = fractional_distance(alpha, k_next * N_next).as_fraction(_GAMMA_BITS)
    d2 = fractional_distance(alpha, k * N).as_fraction(_GAMMA_BITS)
    rhs = k * d1 + k_next * d2
    lo = fractional_distance(alpha, m * L).interval(_GAMMA_BITS).lo
    if lo > rhs:
        raise AssertionError("triangle inequality violated (arithmetic bug)")
    q0 = least_denominator(alpha, d_main)
    return GapDiagnostic(L, m, d_main, rhs, q0)


def least_denominator(alpha: RealDescriptor, delta: Fraction, max_index: int = 5000) -> int:
    """Least q >= 1 with ||q alpha|| <= delta (first qualifying convergent)."""
    from .contfrac import expand

    if delta <= 0:
        raise ValueError("delta must be positive")
    if delta >= Fraction(1, 2):
        return 1
    cf = expand(alpha, 2)
    pm1, qm1 = 1, 0
    p, q = cf.digit(0), 1
    for n in range(max_index):
        fd = fractional_distance(alpha, q)
        if fd.cmp(delta) != Ordering.ABOVE:
            return q
        a = cf.digit(n + 1)
        p, pm1 = a * p + pm1, p
        q, qm1 = a * q + qm1, q
    raise PrecisionExhausted(f"no denominator within the first {max_index} convergents")
