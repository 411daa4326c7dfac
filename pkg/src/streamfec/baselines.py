"""Baseline codecs: diagonal interleaving, a verified short block code, and
the six offline reference schemes used by the rate-gap experiments.

All of these are linear, so they share one representation: a LinearStream
lists, for every channel symbol, its expansion over the flat message symbol
vector. Encoding is evaluating the rows; decoding is incremental Gaussian
elimination (see linear.IncrementalDecoder), which certifies exactly the
information-theoretic decodability the schemes promise.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .cauchy import build_cauchy
from .gf import GF
from .linear import in_rowspace
from .model import CodeParams, SizeSequence, require_valid, symbol_offsets, terminate_sizes

Row = dict[int, int]  # flat message symbol index -> coefficient


def row_add(fld: GF, a: Row, b: Row) -> Row:
    out = dict(a)
    for idx, c in b.items():
        v = out.get(idx, 0) ^ c
        if v:
            out[idx] = v
        else:
            out.pop(idx, None)
    return out


def row_scale(fld: GF, a: Row, c: int) -> Row:
    if c == 0:
        return {}
    return {idx: fld.mul(v, c) for idx, v in a.items()}


@dataclass
class LinearStream:
    """Channel packets given as linear combinations of message symbols."""

    seq: SizeSequence
    tau_l: int  # the lossless deadline this scheme promises
    slot_rows: list[list[Row]]

    @property
    def n_sizes(self) -> list[int]:
        return [len(rows) for rows in self.slot_rows]

    def packet_values(self, flat_payload: list[int], fld: GF) -> list[list[int]]:
        packets = []
        for rows in self.slot_rows:
            packets.append(
                [
                    _eval_row(fld, row, flat_payload)
                    for row in rows
                ]
            )
        return packets


def _eval_row(fld: GF, row: Row, flat: list[int]) -> int:
    acc = 0
    for idx, c in row.items():
        acc ^= fld.mul(c, flat[idx])
    return acc


# ---------------------------------------------------------------------------
# Diagonal interleaving (requires b | tau, lossless deadline tau - b)
# ---------------------------------------------------------------------------


def diagonal_stream(p: CodeParams, seq: SizeSequence) -> LinearStream:
    """Each message is split evenly into tau/b pieces sent at offsets
    0, b, .., tau-b, with the piecewise sum at offset tau.

    Messages are zero-padded up to a multiple of tau/b; padding symbols are
    transmitted (as constant zeros) and counted in the rate. Contributions
    landing on one slot are concatenated in source-slot order. At most one
    scheduled slot per message can be erased by an admissible pattern, so
    the sum packet always completes the message within delay tau.
    """
    require_valid(p)
    if p.tau % p.b != 0:
        raise ValueError(f"diagonal scheme needs b | tau, got tau={p.tau}, b={p.b}")
    if p.tau_l != p.tau - p.b:
        raise ValueError(
            f"diagonal scheme has lossless delay tau - b = {p.tau - p.b}, "
            f"params say {p.tau_l}"
        )
    if seq.t != p.t:
        raise ValueError("sequence/params length mismatch")
    q = p.tau // p.b
    off = symbol_offsets(seq)
    contributions: list[list[tuple[int, list[Row]]]] = [[] for _ in range(seq.t + 1)]
    for i in range(seq.t + 1):
        k = seq.size(i)
        if k == 0:
            continue
        if i + p.tau > seq.t:
            raise ValueError(
                f"nonzero message at slot {i} cannot be flushed by slot t={seq.t}; "
                "terminate the sequence first"
            )
        comp = -(-k // q)  # ceil: piece length after zero padding
        for z in range(q):
            rows = [
                {off[i] + z * comp + r: 1} if z * comp + r < k else {}
                for r in range(comp)
            ]
            contributions[i + z * p.b].append((i, rows))
        sum_rows: list[Row] = []
        for r in range(comp):
            row: Row = {}
            for z in range(q):
                if z * comp + r < k:
                    row[off[i] + z * comp + r] = 1
            sum_rows.append(row)
        contributions[i + p.tau].append((i, sum_rows))
    slot_rows: list[list[Row]] = []
    for per_slot in contributions:
        rows: list[Row] = []
        for _, item in sorted(per_slot, key=lambda sr: sr[0]):
            rows.extend(item)
        slot_rows.append(rows)
    return LinearStream(seq, p.tau - p.b, slot_rows)


# ---------------------------------------------------------------------------
# Systematic block code with per-symbol decoding deadlines
# ---------------------------------------------------------------------------


class BlockCodeSearchError(Exception):
    """No verified coefficient draw within the retry budget."""


@dataclass
class BlockCode:
    """[tau+b, tau] systematic code where symbol j survives any burst of up
    to b codeword erasures using only parities p_0..p_{min(b-1, j)}.

    That prefix restriction is the delay guarantee: parity p_l sits at
    codeword position tau + l, so symbol j is back within tau positions.
    """

    tau: int
    b: int
    field: GF
    coeffs: list[list[int]]  # b rows x tau cols; parity l = sum coeffs[l][j]*s_j
    verified: bool

    def encode(self, word: list[int]) -> list[int]:
        if len(word) != self.tau:
            raise ValueError(f"block code takes {self.tau} symbols")
        f = self.field
        parities = [
            _eval_row(f, {j: c for j, c in enumerate(row) if c}, word)
            for row in self.coeffs
        ]
        return list(word) + parities


def block_delay_violations(code: BlockCode) -> list[tuple[int, int, int]]:
    """Exhaustive check of the per-symbol deadline property.

    Returns (burst_start, burst_len, j) triples where symbol j is NOT
    determined by the non-erased symbols among (s_0..s_{tau-1},
    p_0..p_{min(b-1,j)}) under that burst. Empty list means verified.
    """
    tau, b, fld = code.tau, code.b, code.field
    bad = []
    n = tau + b
    for start in range(n):
        for length in range(1, b + 1):
            erased = set(range(start, min(start + length, n)))
            msg_erased = sorted(e for e in erased if e < tau)
            if not msg_erased:
                continue
            for j in msg_erased:
                allowed = [
                    l
                    for l in range(min(b - 1, j) + 1)
                    if tau + l not in erased
                ]
                rows = [
                    [code.coeffs[l][e] for e in msg_erased]
                    for l in allowed
                ]
                target = [1 if e == j else 0 for e in msg_erased]
                if not in_rowspace(fld, rows, target):
                    bad.append((start, length, j))
    return bad


def build_block_code(
    tau: int, b: int, fld: GF, seed: int = 0, max_tries: int = 64
) -> BlockCode:
    """Draw parity coefficients from a Cauchy pool and verify exhaustively.

    Entries above the diagonal in the first b columns are forced to zero:
    symbol j < b may only lean on parities 0..j, so parity l must not mix
    in message symbols j in (l, b). Redraws with an incremented seed until
    verification passes.
    """
    if fld.order < 2 * tau:
        raise ValueError("field too small to draw distinct Cauchy points")
    for attempt in range(max_tries):
        pool = build_cauchy(tau, fld, seed + attempt)
        coeffs = [
            [
                0 if (j <= b - 1 and j > l) else pool.entry(l % tau, j)
                for j in range(tau)
            ]
            for l in range(b)
        ]
        code = BlockCode(tau, b, fld, coeffs, verified=False)
        if not block_delay_violations(code):
            code.verified = True
            return code
    raise BlockCodeSearchError(
        f"no verified draw for tau={tau}, b={b} in {max_tries} tries"
    )


# ---------------------------------------------------------------------------
# Offline reference schemes (three lemma families, two size sequences each)
# ---------------------------------------------------------------------------

SCHEME_IDS = (
    "lemma1_seq1",
    "lemma1_seq2",
    "lemma2_seq1",
    "lemma2_seq2",
    "lemma3_seq1",
    "lemma3_seq2",
)


@dataclass(frozen=True)
class OfflineScheme:
    """One of the six reference schemes, fixed to its prescribed sequence."""

    scheme_id: str
    tau: int
    b: int
    tau_l: int
    d: int

    @property
    def lemma(self) -> str:
        return {"lemma1": "conv1", "lemma2": "conv2", "lemma3": "conv3"}[
            self.scheme_id.split("_")[0]
        ]

    @property
    def variant(self) -> int:
        return int(self.scheme_id[-1])

    @property
    def a(self) -> int:
        return self.tau_l // self.b

    @property
    def e(self) -> int:
        return self.tau_l % self.b


def check_lemma_params(lemma: str, tau: int, b: int, tau_l: int) -> None:
    if not 1 <= b <= tau or not 0 <= tau_l <= tau - b:
        raise ValueError("invalid (tau, b, tau_l)")
    if lemma == "conv1":
        if tau_l != tau - b or tau_l < b or tau % b == 0:
            raise ValueError("conv1 needs tau_l = tau - b >= b and b not dividing tau")
    elif lemma == "conv2":
        if tau_l != tau - b or not 1 <= tau_l < b:
            raise ValueError("conv2 needs 1 <= tau_l = tau - b < b")
    elif lemma == "conv3":
        if not 1 <= tau_l < tau - b:
            raise ValueError("conv3 needs 1 <= tau_l < tau - b")
    else:
        raise ValueError(f"unknown lemma {lemma!r}")


def make_scheme(scheme_id: str, tau: int, b: int, tau_l: int, d: int) -> OfflineScheme:
    if scheme_id not in SCHEME_IDS:
        raise ValueError(f"unknown scheme {scheme_id!r}")
    sch = OfflineScheme(scheme_id, tau, b, tau_l, d)
    check_lemma_params(sch.lemma, tau, b, tau_l)
    if d < 1:
        raise ValueError("d must be >= 1")
    if sch.lemma == "conv1" and d % (sch.a + 1) != 0:
        raise ValueError(f"conv1 needs d divisible by a+1 = {sch.a + 1}")
    if sch.lemma == "conv2" and d % 2 != 0:
        raise ValueError("conv2 needs even d")
    if sch.lemma == "conv3" and sch.variant == 1 and d % 2 != 0:
        raise ValueError("conv3 scheme 1 needs even d")
    return sch


def scheme_raw_sizes(sch: OfflineScheme) -> list[int]:
    tau, b, tau_l, d = sch.tau, sch.b, sch.tau_l, sch.d
    if sch.lemma == "conv1":
        if sch.variant == 1:
            return [d] * sch.e
        return [d] * (b - 1) + [d * (tau_l + 1)]
    if sch.lemma == "conv2":
        if sch.variant == 1:
            return [d] * (b - tau_l + 1)
        return [d] * (b - tau_l + 1) + [0] * (tau_l - 1) + [d]
    if sch.variant == 1:
        return [d] * b
    return [d] * (tau - tau_l - 1) + [d * (tau_l + 1)]


def lemma_sequences(
    lemma: str, tau: int, b: int, tau_l: int, d: int
) -> tuple[SizeSequence, SizeSequence]:
    """The prescribed pair of (terminated) size sequences for one lemma."""
    check_lemma_params(lemma, tau, b, tau_l)
    if d < 1:
        raise ValueError("d must be >= 1")
    prefix = {"conv1": "lemma1", "conv2": "lemma2", "conv3": "lemma3"}[lemma]
    out = []
    for variant in (1, 2):
        sch = OfflineScheme(f"{prefix}_seq{variant}", tau, b, tau_l, d)
        raw = scheme_raw_sizes(sch)
        out.append(terminate_sizes(raw, tau, max(raw)))
    return out[0], out[1]


def _split_then_block_stream(
    sch: OfflineScheme, seq: SizeSequence, fld: GF, seed: int
) -> LinearStream:
    """Shared shape of lemma1_seq2 and lemma3_seq2: d symbols in each of
    X[0..tau-1] (the last message spread over tau_l + 1 slots), then d block
    code instances contribute one parity column per slot tau..tau+b-1."""
    tau, b, tau_l, d = sch.tau, sch.b, sch.tau_l, sch.d
    off = symbol_offsets(seq)
    split_slot = len(scheme_raw_sizes(sch)) - 1
    base_rows: list[list[Row]] = []
    for i in range(tau):
        if i < split_slot:
            base_rows.append([{off[i] + z: 1} for z in range(d)])
        else:
            part = i - split_slot
            base_rows.append([{off[split_slot] + part * d + z: 1} for z in range(d)])
    code = build_block_code(tau, b, fld, seed)
    slot_rows: list[list[Row]] = [[] for _ in range(seq.t + 1)]
    for i in range(tau):
        slot_rows[i] = base_rows[i]
    for pj in range(b):
        rows = []
        for z in range(d):
            row: Row = {}
            for i in range(tau):
                row = row_add(fld, row, row_scale(fld, base_rows[i][z], code.coeffs[pj][i]))
            rows.append(row)
        slot_rows[tau + pj] = rows
    return LinearStream(seq, tau_l, slot_rows)


def _halved_chain_stream(sch: OfflineScheme, seq: SizeSequence, fld: GF) -> LinearStream:
    """Shared shape of lemma2_seq1 and lemma3_seq1: the last nonzero message
    (slot P) is sent in halves at slots P and b, a running-sum chain covers
    slots 0..P-1, and a parity of the two halves lands at slot 2b."""
    b, tau_l, d = sch.b, sch.tau_l, sch.d
    h = d // 2
    pivot = b - tau_l if sch.lemma == "conv2" else b - 1
    off = symbol_offsets(seq)
    slot_rows: list[list[Row]] = [[] for _ in range(seq.t + 1)]
    if b == 1:
        # conv3 only: the chain and the mixed packet degenerate; send the
        # two halves and their parity sum.
        slot_rows[0] = [{off[0] + r: 1} for r in range(h)]
        slot_rows[1] = [{off[0] + h + r: 1} for r in range(h)]
        slot_rows[2] = [{off[0] + r: 1, off[0] + h + r: 1} for r in range(h)]
        return LinearStream(seq, tau_l, slot_rows)
    for i in range(pivot):
        slot_rows[i] = [{off[i] + r: 1} for r in range(d)]
    slot_rows[pivot] = [{off[pivot] + r: 1} for r in range(h)]
    slot_rows[b] = [{off[pivot] + h + r: 1} for r in range(h)]
    slot_rows[b + 1] = [{off[0] + r: 1} for r in range(h)] + [
        {off[0] + h + r: 1, off[pivot] + h + r: 1} for r in range(h)
    ]
    for i in range(1, pivot):
        slot_rows[i + b + 1] = [
            row_add(fld, slot_rows[i + b][r], {off[i] + r: 1}) for r in range(d)
        ]
    slot_rows[2 * b] = [{off[pivot] + r: 1, off[pivot] + h + r: 1} for r in range(h)]
    return LinearStream(seq, tau_l, slot_rows)


def offline_stream(
    sch: OfflineScheme, seq: SizeSequence, fld: GF, seed: int = 0
) -> LinearStream:
    """Channel packet expansions for one offline scheme on its sequence."""
    expected = terminate_sizes(scheme_raw_sizes(sch), sch.tau, max(scheme_raw_sizes(sch)))
    if seq != expected:
        raise ValueError(
            f"{sch.scheme_id} is defined only for its prescribed sequence "
            f"{list(expected)}, got {list(seq)}"
        )
    tau, b, tau_l, d = sch.tau, sch.b, sch.tau_l, sch.d
    off = symbol_offsets(seq)
    if sch.scheme_id == "lemma1_seq1":
        a, e = sch.a, sch.e
        comp = d // (a + 1)
        slot_rows: list[list[Row]] = [[] for _ in range(seq.t + 1)]
        for i in range(e):
            for z in range(a + 1):
                slot_rows[i + z * b] = [
                    {off[i] + z * comp + r: 1} for r in range(comp)
                ]
            slot_rows[i + (a + 1) * b] = [
                {off[i] + z * comp + r: 1 for z in range(a + 1)} for r in range(comp)
            ]
        return LinearStream(seq, tau_l, slot_rows)
    if sch.scheme_id in ("lemma1_seq2", "lemma3_seq2"):
        return _split_then_block_stream(sch, seq, fld, seed)
    if sch.scheme_id in ("lemma2_seq1", "lemma3_seq1"):
        return _halved_chain_stream(sch, seq, fld)
    # lemma2_seq2: every message goes out whole; a running-sum chain plus a
    # final cross parity cover the two vulnerable packets.
    pivot = b - tau_l
    slot_rows = [[] for _ in range(seq.t + 1)]
    for i in list(range(pivot + 1)) + [b]:
        slot_rows[i] = [{off[i] + r: 1} for r in range(d)]
    slot_rows[b + 1] = [{off[0] + r: 1, off[b] + r: 1} for r in range(d)]
    for i in range(1, pivot):
        slot_rows[i + b + 1] = [
            row_add(fld, slot_rows[i + b][r], {off[i] + r: 1}) for r in range(d)
        ]
    slot_rows[2 * b] = [{off[b] + r: 1, off[pivot] + r: 1} for r in range(d)]
    return LinearStream(seq, tau_l, slot_rows)


def scheme_stated_rate(sch: OfflineScheme) -> Fraction:
    """The exact rate each scheme is built to achieve on its sequence."""
    tau, b, tau_l, d = sch.tau, sch.b, sch.tau_l, sch.d
    if sch.scheme_id == "lemma1_seq1":
        return Fraction(sch.a + 1, sch.a + 2)
    if sch.scheme_id in ("lemma1_seq2", "lemma3_seq2"):
        return Fraction(tau, tau + b)
    if sch.scheme_id == "lemma2_seq1":
        return Fraction(2 * (b - tau_l + 1), 2 * (2 * b - 2 * tau_l) + 3)
    if sch.scheme_id == "lemma2_seq2":
        return Fraction(b - tau_l + 2, 2 * b - 2 * tau_l + 3)
    return Fraction(2 * b, 4 * b - 1)  # lemma3_seq1
