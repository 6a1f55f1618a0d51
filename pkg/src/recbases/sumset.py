"""Brute-force k-fold sumsets, complements, and gap/count statistics.

Bitsets are plain Python ints; the k-fold sumset is an iterated shifted-OR
over member offsets.  Truncation at T is lossless for complements because all
members are non-negative.  ``RECBASES_MAX_MEM`` (bytes) caps allocations.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .recurrence import RecurrenceSetSpec, bitset_to_list, enumerate_members

__all__ = [
    "SumsetReport",
    "GapEntry",
    "sumset_bitmap",
    "complement",
    "gap_stats",
    "check_bitset_budget",
    "report_to_json",
    "report_to_csv",
]

_DEFAULT_VERIFY_CAP = 200_000


def check_bitset_budget(T: int) -> None:
    """Refuse allocations beyond the RECBASES_MAX_MEM env cap (bytes)."""
    cap = os.environ.get("RECBASES_MAX_MEM")
    if cap is None:
        return
    limit = int(cap)
    need = (T + 8) // 8
    if need > limit:
        raise MemoryError(f"bitset of {need} bytes exceeds RECBASES_MAX_MEM={limit}")


def sumset_bitmap(members: int, k: int, T: Optional[int] = None) -> int:
    """Bitset of {n_1 + ... + n_k : n_i members}, truncated to [0, T].

    k = 1 is the identity.  With T given, the result is exact for all N <= T
    since summands are non-negative.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if members < 0:
        raise ValueError("members bitset must be non-negative")
    if T is None:
        T = members.bit_length() * k  # no truncation needed beyond this
    check_bitset_budget(T)
    mask = (1 << (T + 1)) - 1
    members &= mask
    out = members
    offsets = bitset_to_list(members)
    for _ in range(k - 1):
        acc = 0
        for n in offsets:
            acc |= out << n
        out = acc & mask
    return out


@dataclass(frozen=True)
class GapEntry:
    n: int
    n_next: int

    @property
    def gap(self) -> int:
        return self.n_next - self.n

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.n_next, self.n)


@dataclass
class SumsetReport:
    spec: RecurrenceSetSpec
    k: int
    T: int
    complement: list[int]
    counts_at: dict[int, int]
    gaps: list[GapEntry] = field(default_factory=list)
    verified: bool = False

    def largest(self) -> Optional[int]:
        return self.complement[-1] if self.complement else None

    def tail_empty_from(self) -> int:
        """Least N0 such that [N0, T] contains no complement element."""
        return self.complement[-1] + 1 if self.complement else 0


def gap_stats(complement_or_report) -> list[GapEntry]:
    """Consecutive-element statistics of a complement list.

    Empty when fewer than two elements exist.  ``ratio`` is N'/N (the
    multiplicative gap); the additive gap N'-N is the ``gap`` field.
    """
    if isinstance(complement_or_report, SumsetReport):
        elems = complement_or_report.complement
    else:
        elems = list(complement_or_report)
    elems = [e for e in elems if e > 0]
    return [GapEntry(a, b) for a, b in zip(elems, elems[1:])]


def complement(
    spec: RecurrenceSetSpec,
    k: int,
    T: int,
    verify: bool = False,
    verify_cap: int = _DEFAULT_VERIFY_CAP,
    members: Optional[int] = None,
) -> SumsetReport:
    """All N in [1, T] with N not in kA, plus decade counts and gap stats.

    With ``verify=True`` every reported element is re-confirmed by a direct
    decomposition search over member lists (an independent path from the
    bitmap convolution).
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if T < 1:
        raise ValueError("T must be >= 1")
    check_bitset_budget(T)
    if members is None:
        members = enumerate_members(spec, T)
    smap = sumset_bitmap(members, k, T)
    comp = [N for N in range(1, T + 1) if not (smap >> N) & 1]
    counts: dict[int, int] = {}
    decade = 10
    while decade < T:
        counts[decade] = sum(1 for c in comp if c <= decade)
        decade *= 10
    counts[T] = len(comp)
    verified = False
    if verify:
        member_list = bitset_to_list(members)
        member_set = set(member_list)
        for N in comp:
            if N > verify_cap:
                break
            if _has_decomposition(N, k, member_list, member_set):
                raise AssertionError(
                    f"bitmap says {N} not in {k}A but a decomposition exists"
                )
        verified = True
    report = SumsetReport(spec, k, T, comp, counts, verified=verified)
    report.gaps = gap_stats(comp)
    return report


def _has_decomposition(N: int, k: int, member_list: Sequence[int], member_set) -> bool:
    if k == 1:
        return N in member_set
    if k == 2:
        return any(N - n in member_set for n in member_list if n <= N)
    for n in member_list:
        if n > N:
            break
        if _has_decomposition(N - n, k - 1, member_list, member_set):
            return True
    return False


def membership(spec: RecurrenceSetSpec, k: int, N: int) -> bool:
    """Is N in kA?  Convenience wrapper (enumerates up to N)."""
    members = enumerate_members(spec, N)
    return bool((sumset_bitmap(members, k, N) >> N) & 1)


# ---------------------------------------------------------------------------
# report emission
# ---------------------------------------------------------------------------


def report_to_json(report: SumsetReport) -> dict:
    return {
        "spec": report.spec.serialize(),
        "k": report.k,
        "T": report.T,
        "complement": report.complement,
        "counts_at": {str(t): c for t, c in sorted(report.counts_at.items())},
        "gaps": [
            {"n": g.n, "n_next": g.n_next, "gap": g.gap, "ratio": float(g.ratio)}
            for g in report.gaps
        ],
        "tail_empty_from": report.tail_empty_from(),
        "verified": report.verified,
    }


def report_to_csv(report: SumsetReport, out) -> None:
    import csv

    writer = csv.writer(out)
    writer.writerow(["N", "next", "gap", "ratio"])
    nexts = {g.n: g for g in report.gaps}
    for N in report.complement:
        g = nexts.get(N)
        if g is None:
            writer.writerow([N, "", "", ""])
        else:
            writer.writerow([N, g.n_next, g.gap, f"{float(g.ratio):.6g}"])
