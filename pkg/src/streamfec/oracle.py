"""Brute-force verifiers for the optimality and decodability claims.

Two independent instruments: a cumulative-symbol lower bound computed by a
counting recursion (no codec involved), and an exhaustive decode check that
replays every enumerated loss pattern through a codec and its decoder. The
codecs under test never feed the oracle side, so agreement is evidence.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .channel import enumerate_patterns, apply_pattern, erased_runs
from .model import (
    CodeParams,
    SizeSequence,
    Transcript,
    build_transcript,
    check_delays,
    require_valid,
)
from .vgms import DecodeFailure


def cumulative_profile(n_sizes: Sequence[int]) -> list[int]:
    out = []
    acc = 0
    for n in n_sizes:
        acc += n
        out.append(acc)
    return out


def lower_bound_profile(seq: SizeSequence, p: CodeParams) -> list[int]:
    """Minimum cumulative channel symbols through each slot for any scheme
    that satisfies both deadlines with zero lossless delay.

    Base case: each of the first tau slots must carry at least its own
    message. Inductive case: either the slot carries just its message, or
    some burst window ending tau slots back pins the whole span; the bound
    takes the worst (largest) requirement over all such windows:

        lb[i] = max(lb[i-1] + k_i,
                    max_{j in [max(0, i-tau-b+1), i-tau]}
                        lb[j+b-1] + sum(k[j..i-tau]) + sum(k[j+b..i]))
    """
    require_valid(p)
    if p.tau_l != 0:
        raise ValueError("the lower bound applies to zero-lossless-delay schemes")
    t = seq.t
    k = [seq.size(i) for i in range(t + 1)]
    lb: list[int] = []
    for i in range(t + 1):
        prev = lb[i - 1] if i else 0
        best = prev + k[i]
        if i >= p.tau:
            for j in range(max(0, i - p.tau - p.b + 1), i - p.tau + 1):
                cand = lb[j + p.b - 1] + sum(k[j : i - p.tau + 1]) + sum(k[j + p.b : i + 1])
                if cand > best:
                    best = cand
        lb.append(best)
    return lb


@dataclass
class ProfileGap:
    slot: int
    have: int
    want: int


def check_minimality(
    profile: Sequence[int], lb: Sequence[int], exact: bool
) -> ProfileGap | None:
    """First slot where the profile misses the bound (exact mode: differs)."""
    if len(profile) != len(lb):
        raise ValueError("profiles must cover the same slots")
    for i, (have, want) in enumerate(zip(profile, lb)):
        if have < want or (exact and have != want):
            return ProfileGap(i, have, want)
    return None


@dataclass
class Counterexample:
    pattern: tuple[int, ...]
    slot: int | None
    reason: str


def exhaustive_decode_check(
    codec,
    payload: Sequence[Sequence[int]],
    mode: str,
) -> Counterexample | None:
    """Encode once, replay every enumerated pattern, decode, check:
    recovered symbols match, lossy deadlines hold, and the empty pattern
    additionally meets the codec's lossless deadline.

    Returns the first failing (pattern, slot, reason), else None.
    """
    p: CodeParams = codec.params
    seq: SizeSequence = codec.seq
    packets = codec.encode(payload)
    originals = [list(pkt) for pkt in payload]
    for pattern in enumerate_patterns(p, mode):
        received = apply_pattern(pattern, packets)
        try:
            result = codec.decode(received)
        except DecodeFailure as exc:
            return Counterexample(pattern, None, f"decode failure: {exc}")
        for i in range(seq.t + 1):
            if result.messages[i] != originals[i]:
                return Counterexample(pattern, i, "recovered symbols differ")
        tr = build_transcript(p, seq, codec.n_sizes, pattern, result.decode_times)
        bad = check_delays(tr, lossless=False)
        if bad is not None:
            return Counterexample(
                pattern, bad.slot, f"worst-case deadline missed ({bad.decode_time} > {bad.deadline})"
            )
        if not pattern:
            lossless_tr = Transcript(
                CodeParams(p.tau, p.b, codec.tau_l, p.w, p.m, p.t), tr.records
            )
            bad = check_delays(lossless_tr, lossless=True)
            if bad is not None:
                return Counterexample(
                    pattern,
                    bad.slot,
                    f"lossless deadline missed ({bad.decode_time} > {bad.deadline})",
                )
    return None


def decoded_before_burst(
    decode_times: Sequence[int | None], pattern: Sequence[int]
) -> bool:
    """With a single burst starting at j: is everything before slot j
    already decoded by slot j-1? Vacuously true for the empty pattern."""
    runs = erased_runs(pattern)
    if not runs:
        return True
    if len(runs) > 1:
        raise ValueError("expected a single-burst pattern")
    start = runs[0][0]
    return all(
        decode_times[i] is not None and decode_times[i] <= start - 1
        for i in range(start)
    )
