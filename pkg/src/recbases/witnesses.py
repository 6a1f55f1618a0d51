"""Explicit complement-witness generators.

Three families of odd N guaranteed (given small enough constant eps0) to miss
the 2-fold sumset:

* Pell-powered sequences for sqrt(2) and general quadratic surds (a+b sqrt d)/c,
* convergent-index selections for numbers whose doubled expansion has bounded
  digits,
* triple-repeat digit patterns for anything whose doubled expansion contains
  (A, A, A) with A odd.

The digit-based generators always expand 2*alpha, never alpha: keeping the
factor of two in one place avoids a silent convention mismatch.  Every emitted
record carries an algebra-verified certificate; N below ``n_floor`` (default
10) is dropped since the exclusion lemmas only bite for large N.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence, Union

from .contfrac import CFExpansion, Convergent, convergents, error_term, expand
from .errors import (
    DegenerateAlpha,
    InvalidParity,
    PatternNotFound,
    UnboundedDigits,
)
from .obstruction import (
    ObstructionCertificate,
    VerificationOutcome,
    build_certificate,
    verify_certificate,
)
from .realkernel import (
    QuadraticSurd,
    Rational,
    RealDescriptor,
    rational,
    scaled_stream,
    surd,
)

__all__ = [
    "PellSequence",
    "WitnessRecord",
    "pell_fundamental",
    "pell_witnesses_sqrt2",
    "pell_witnesses_surd",
    "badapprox_witnesses",
    "generic_witnesses",
]

DEFAULT_N_FLOOR = 10


@dataclass(frozen=True)
class WitnessRecord:
    N: int
    provenance: tuple
    certificate: ObstructionCertificate

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "provenance": list(self.provenance),
            "certificate": self.certificate.to_json(),
        }


@dataclass
class PellSequence:
    """x_i + y_i sqrt(d) = phi^i for the fundamental unit phi (norm +1)."""

    d: int
    fundamental: tuple[int, int]
    mu: int  # 2-adic valuation of y
    period_mod: int = 0  # modulus used for valuation-stability detection
    L: int = 0  # index period: i = 1 (mod L) keeps the 2-adic shape

    def powers(self, count: int) -> list[tuple[int, int]]:
        x1, y1 = self.fundamental
        out = [(1, 0)]
        x, y = 1, 0
        for _ in range(count):
            x, y = x * x1 + self.d * y * y1, x * y1 + y * x1
            out.append((x, y))
        return out


def pell_fundamental(d: int) -> tuple[int, int]:
    """Least (x, y) with x^2 - d y^2 = 1, via the expansion of sqrt(d)."""
    root = surd(0, 1, 1, d)
    if isinstance(root, Rational):
        raise ValueError(f"d = {d} is a perfect square")
    cf = expand(root, 2)
    pm1, qm1 = 1, 0
    p, q = cf.digit(0), 1
    for n in range(1, 10_000):
        v = p * p - d * q * q
        if v == 1:
            return p, q
        if v == -1:
            return p * p + d * q * q, 2 * p * q
        a = cf.digit(n)
        p, pm1 = a * p + pm1, p
        q, qm1 = a * q + qm1, q
    raise RuntimeError(f"no fundamental solution found for d={d} (absurd)")


def _nu2(x: int) -> int:
    if x == 0:
        raise ValueError("nu_2(0) undefined here")
    return (x & -x).bit_length() - 1


def _emit(alpha: RealDescriptor, N: int, k: int, m: int,
          provenance: tuple) -> Optional[WitnessRecord]:
    cert = build_certificate(alpha, N, k, m)
    if cert is None:
        return None
    res = verify_certificate(cert)
    if res.outcome == VerificationOutcome.REFUTED:
        raise AssertionError(f"generator produced a refuted certificate at N={N}: {res.notes}")
    return WitnessRecord(N, provenance, cert)


def pell_witnesses_sqrt2(count: int, n_floor: int = DEFAULT_N_FLOOR) -> list[WitnessRecord]:
    """N_i = b_i/2 for odd i, where a_i + b_i sqrt(2) = (3 + 2 sqrt 2)^i.

    Each carries a k=2 certificate with m = a_i; the gamma values approach
    -1/(4 sqrt 2), so eps0_max approaches (1 - 1/(4 sqrt 2))/4.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    alpha = surd(0, 1, 1, 2)
    out: list[WitnessRecord] = []
    a, b = 1, 0  # phi^0
    i = 0
    while len(out) < count:
        a, b = 3 * a + 4 * b, 2 * a + 3 * b
        i += 1
        if i % 2 == 0:
            continue
        N = b // 2
        if N < n_floor:
            continue
        rec = _emit(alpha, N, 2, a, ("pell-sqrt2", i))
        if rec is None:
            raise AssertionError(f"pell witness N={N} failed certification (absurd)")
        out.append(rec)
    return out


def pell_witnesses_surd(alpha: Union[QuadraticSurd, RealDescriptor], count: int,
                        n_floor: int = DEFAULT_N_FLOOR,
                        max_steps: int = 512) -> tuple[PellSequence, list[WitnessRecord]]:
    """Witnesses for alpha = (a + b sqrt d)/c via powers of the Pell unit.

    The unit is squared until mu = nu_2(y) exceeds nu_2(b) and 2^mu > |b| c;
    then with a_i = a y_i + b x_i and b_i = c y_i the sequence
    N_i = b_i / 2^(nu_2(c)+mu), m_i = a_i / 2^(nu_2(b)), k = 2^(nu_2(c)-nu_2(b)+mu)
    is integral with the right parities along i = 1 (mod L), L the valuation
    period.  Gammas are computed exactly per index, not from the limit formula.
    """
    if isinstance(alpha, Rational) or not isinstance(alpha, QuadraticSurd):
        raise DegenerateAlpha("alpha must be a quadratic surd (b != 0)")
    a, b, c, d = alpha.a, alpha.b, alpha.c, alpha.d
    x, y = pell_fundamental(d)
    nb, nc = _nu2(abs(b)), _nu2(c)
    while not (_nu2(y) > nb and (1 << _nu2(y)) > abs(b) * c):
        x, y = x * x + d * y * y, 2 * x * y
    mu = _nu2(y)
    a1, b1 = a * y + b * x, c * y
    if _nu2(a1) != nb or _nu2(b1) != nc + mu:
        raise AssertionError("valuation bookkeeping failed (arithmetic bug)")
    k = 1 << (nc - nb + mu)
    # least L >= 1 with (x_{1+L}, y_{1+L}) = (x_1, y_1) mod 2^M; M pins both valuations
    M = max(_nu2(a1), _nu2(b1)) + 1
    mod = 1 << M
    xr, yr = x % mod, y % mod
    xi, yi = xr, yr
    L = 0
    for step in range(1, max_steps + 1):
        xi, yi = (xi * x + d * yi * y) % mod, (xi * y + yi * x) % mod
        if (xi, yi) == (xr, yr):
            L = step
            break
    if L == 0:
        raise RuntimeError(f"no valuation period within {max_steps} steps")
    seq = PellSequence(d, (x, y), mu, period_mod=mod, L=L)

    out: list[WitnessRecord] = []
    xi, yi = x, y
    i = 1
    while len(out) < count:
        if (i - 1) % L == 0:
            ai, bi = a * yi + b * xi, c * yi
            if bi % (1 << (nc + mu)) == 0 and ai % (1 << nb) == 0:
                N = bi >> (nc + mu)
                m = ai >> nb
                if N >= n_floor and N % 2 == 1 and m % 2 == 1 and gcd(m, k) == 1:
                    rec = _emit(alpha, N, k, m, ("pell-surd", i, d))
                    if rec is not None:
                        out.append(rec)
        xi, yi = xi * x + d * yi * y, xi * y + yi * x
        i += 1
        if i > max_steps * max(L, 1):
            raise RuntimeError("witness emission stalled; increase max_steps")
    return seq, out


def _doubled_expansion(alpha: RealDescriptor, need: int) -> CFExpansion:
    doubled = scaled_stream(alpha, 2)
    if isinstance(doubled, Rational):
        raise DegenerateAlpha("alpha is rational")
    return expand(doubled, need)


def badapprox_witnesses(alpha: RealDescriptor, count: int, digit_bound: int,
                        n_floor: int = DEFAULT_N_FLOOR,
                        scan_limit: int = 4000) -> list[WitnessRecord]:
    """Witnesses from the expansion of 2*alpha when its digits stay bounded.

    kappa is the least power with 2^kappa > digit_bound, so 2^kappa divides no
    digit.  Among any 4 consecutive convergent indices there is one with p_i
    odd and nu_2(q_i) < kappa; it yields N = 2 q_i / k_i with k_i = 2^(nu_2(q_i)+1)
    and gamma = 2 delta_i / k_i.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    if digit_bound < 1:
        raise ValueError("digit_bound must be >= 1")
    cf = _doubled_expansion(alpha, 8)
    doubled = cf.source
    kappa = 1
    while (1 << kappa) <= digit_bound:
        kappa += 1
    out: list[WitnessRecord] = []
    seen: set[int] = set()
    pm1, qm1 = 1, 0
    p, q = cf.digit(0), 1
    convs: list[tuple[int, int]] = []  # (p_i, q_i) for i >= 1
    i = 0
    window_start = 1
    while len(out) < count:
        # extend convergents to cover the next window of 4 indices
        while i < window_start + 3:
            i += 1
            if i > scan_limit:
                raise PatternNotFound(
                    f"ran out of scan budget ({scan_limit} digits) before {count} witnesses"
                )
            a = cf.digit(i)
            if a > digit_bound:
                raise UnboundedDigits(i, a, digit_bound)
            p, pm1 = a * p + pm1, p
            q, qm1 = a * q + qm1, q
            convs.append((p, q))
        pick = None
        for j in range(window_start, window_start + 4):
            pj, qj = convs[j - 1]
            if pj % 2 == 1 and _nu2(qj) < kappa:
                pick = (j, pj, qj)
                break
        if pick is None:
            raise AssertionError("parity argument violated (arithmetic bug)")
        j, pj, qj = pick
        k_i = 1 << (_nu2(qj) + 1)
        N = 2 * qj // k_i
        if N >= n_floor and N not in seen:
            rec = _emit(alpha, N, k_i, pj, ("bad-approx", j, kappa, k_i))
            if rec is not None:
                seen.add(N)
                out.append(rec)
        window_start += 4
    return out


def generic_witnesses(alpha: RealDescriptor, A: int, count: int,
                      scan_limit: int = 2000,
                      n_floor: int = DEFAULT_N_FLOOR) -> list[WitnessRecord]:
    """Witnesses at triple repeats (A, A, A) in the expansion of 2*alpha.

    A must be odd and >= 3.  At a repeat starting at digit j+1, one of the
    convergent indices j, j+1, j+2 has p_i and q_i both odd (parity case
    analysis on the recursion); N = q_i gets a k = 2 certificate with
    |gamma| < 1/A, hence eps0_max > 1/4 - 1/(4A).
    """
    if A % 2 == 0 or A < 3:
        raise ValueError("A must be an odd integer >= 3")
    if count < 1:
        raise ValueError("count must be >= 1")
    cf = _doubled_expansion(alpha, 8)
    out: list[WitnessRecord] = []
    seen: set[int] = set()
    pm1, qm1 = 1, 0
    p, q = cf.digit(0), 1
    convs: list[tuple[int, int]] = []
    digs: list[int] = []
    i = 0
    j = 0
    while len(out) < count:
        j += 1
        if j + 3 > scan_limit:
            raise PatternNotFound(
                f"no further (A,A,A) = ({A},{A},{A}) run within {scan_limit} digits"
            )
        while i < j + 3:
            i += 1
            a = cf.digit(i)
            digs.append(a)
            p, pm1 = a * p + pm1, p
            q, qm1 = a * q + qm1, q
            convs.append((p, q))
        if not (digs[j] == digs[j + 1] == digs[j + 2] == A):
            continue
        pick = None
        for idx in (j, j + 1, j + 2):
            pi, qi = convs[idx - 1]
            if pi % 2 == 1 and qi % 2 == 1:
                pick = (idx, pi, qi)
                break
        if pick is None:
            raise AssertionError("parity case analysis violated (arithmetic bug)")
        idx, pi, qi = pick
        N = qi
        if N >= n_floor and N not in seen:
            rec = _emit(alpha, N, 2, pi, ("generic", j, A))
            if rec is not None:
                seen.add(N)
                out.append(rec)
    return out
