"""The online codec: golden layout, burst recovery, invariants, and an
independent linear-algebra cross-check of the encoder and decoder."""

import random

import pytest

from streamfec.cauchy import build_cauchy
from streamfec.channel import all_patterns, apply_pattern, single_burst_patterns
from streamfec.gf import GF
from streamfec.linear import IncrementalDecoder
from streamfec.model import (
    make_params,
    random_payload,
    random_sizes,
    symbol_offsets,
    terminate_sizes,
)
from streamfec.vgms import (
    VgmsEncoder,
    decode_stream,
    encode_stream,
    packet_layout,
)

REF_SIZES = [3, 2, 1, 2, 1]  # the worked reference stream, tau=4 b=2


def ref_setup(fld=None, seed=0):
    fld = fld or GF(8)
    seq = terminate_sizes(REF_SIZES, 4, 3)
    p = make_params(4, 2, m=3, t=seq.t)
    matrix = build_cauchy(p.tau * p.m, fld, seed)
    return p, fld, seq, matrix


def test_reference_layout_golden():
    p, fld, seq, _ = ref_setup()
    layout = packet_layout(seq, p)
    assert layout.tail_sizes == [3, 2, 0, 0, 1, 0, 0, 0, 0]
    assert layout.head_sizes == [0, 0, 1, 2, 0, 0, 0, 0, 0]
    assert layout.parity_sizes[4:9] == [3, 2, 0, 0, 1]
    assert layout.parity_sizes[0:4] == [0, 0, 0, 0]


def test_reference_budgets_golden():
    p, fld, seq, _ = ref_setup()
    layout = packet_layout(seq, p)
    # min over burst windows of allocated-parity minus queued-message symbols
    assert layout.budgets[2] == 3
    assert layout.budgets[3] == 2
    assert layout.budgets[4] == 0


def test_budgets_never_negative_on_random_streams():
    fld = GF(8)
    for seed in range(40):
        tau = random.Random(seed).randint(2, 5)
        b = random.Random(seed + 1).randint(1, tau)
        seq = terminate_sizes(random_sizes(8, 3, seed), tau, 3)
        p = make_params(tau, b, m=3, t=seq.t)
        layout = packet_layout(seq, p)
        assert all(z is None or z >= 0 for z in layout.budgets), (tau, b, seed)


def test_zero_size_packet_splits_empty():
    p, fld, seq, _ = ref_setup()
    layout = packet_layout(seq, p)
    for i in (5, 6, 7, 8):
        assert layout.head_sizes[i] == 0 and layout.tail_sizes[i] == 0
        assert layout.parity_sizes[i + 4] == 0


def test_encode_sizes_and_systematic_prefix():
    p, fld, seq, matrix = ref_setup()
    payload = random_payload(seq, fld, 3)
    stream = encode_stream(p, fld, matrix, seq, payload)
    assert [len(x) for x in stream.packets] == [3, 2, 1, 2, 4, 2, 0, 0, 1]
    for i in range(4):  # before tau, the packet is exactly the message
        assert stream.packets[i] == payload[i]
    for i in range(seq.t + 1):  # systematic prefix everywhere
        assert stream.packets[i][: seq.size(i)] == payload[i]


def test_parity_equals_tail_when_heads_are_zero():
    p, fld, seq, matrix = ref_setup()
    layout = packet_layout(seq, p)
    payload = random_payload(seq, fld, 9)
    for i in range(seq.t + 1):  # zero the head symbols, keep the tails
        for r in range(layout.head_sizes[i]):
            payload[i][r] = 0
    stream = encode_stream(p, fld, matrix, seq, payload)
    for i in range(4, seq.t + 1):
        psz = layout.parity_sizes[i]
        if psz:
            tail = payload[i - 4][layout.head_sizes[i - 4] :]
            assert stream.packets[i][seq.size(i) :] == tail


def test_encoder_rejects_oversized_packet():
    p, fld, seq, matrix = ref_setup()
    enc = VgmsEncoder(p, fld, matrix)
    with pytest.raises(ValueError):
        enc.encode_slot([1, 2, 3, 4])


def test_lossless_decode_times_are_immediate():
    p, fld, seq, matrix = ref_setup()
    payload = random_payload(seq, fld, 1)
    stream = encode_stream(p, fld, matrix, seq, payload)
    res = decode_stream(p, fld, matrix, stream.packets, seq)
    assert res.messages == payload
    assert res.decode_times == list(range(seq.t + 1))


def test_burst_over_head_slots_recovered_early():
    p, fld, seq, matrix = ref_setup()
    payload = random_payload(seq, fld, 2)
    stream = encode_stream(p, fld, matrix, seq, payload)
    res = decode_stream(p, fld, matrix, apply_pattern((2, 3), stream.packets), seq)
    assert res.messages == payload
    assert res.decode_times[2] <= 5 and res.decode_times[3] <= 5


def test_burst_over_tail_slots_recovered_at_exact_deadline():
    p, fld, seq, matrix = ref_setup()
    payload = random_payload(seq, fld, 2)
    stream = encode_stream(p, fld, matrix, seq, payload)
    res = decode_stream(p, fld, matrix, apply_pattern((0, 1), stream.packets), seq)
    assert res.messages == payload
    assert res.decode_times[0] == 4  # tail symbols only appear tau slots later
    assert res.decode_times[1] == 5


def test_inadmissible_pattern_rejected():
    p, fld, seq, matrix = ref_setup()
    payload = random_payload(seq, fld, 2)
    stream = encode_stream(p, fld, matrix, seq, payload)
    with pytest.raises(ValueError):
        decode_stream(p, fld, matrix, apply_pattern((0, 1, 2), stream.packets), seq)


def test_round_trip_all_patterns_reference_stream():
    p, fld, seq, matrix = ref_setup()
    payload = random_payload(seq, fld, 5)
    stream = encode_stream(p, fld, matrix, seq, payload)
    for pattern in all_patterns(p):
        res = decode_stream(p, fld, matrix, apply_pattern(pattern, stream.packets), seq)
        assert res.messages == payload, pattern
        for i in range(seq.t + 1):
            if seq.size(i):
                assert res.decode_times[i] <= i + p.tau, (pattern, i)


def test_round_trip_random_grid_single_bursts():
    fld = GF(8)
    for tau in (2, 3, 5):
        for b in range(1, tau + 1):
            for seed in range(3):
                seq = terminate_sizes(random_sizes(7, 4, 100 * tau + 10 * b + seed), tau, 4)
                p = make_params(tau, b, m=4, t=seq.t)
                matrix = build_cauchy(p.tau * p.m, fld, seed)
                payload = random_payload(seq, fld, seed)
                stream = encode_stream(p, fld, matrix, seq, payload)
                for pattern in single_burst_patterns(p):
                    res = decode_stream(
                        p, fld, matrix, apply_pattern(pattern, stream.packets), seq
                    )
                    assert res.messages == payload, (tau, b, seed, pattern)


def test_parity_exactly_matches_some_window():
    # every nonzero parity block is exactly accounted for by one burst window
    fld = GF(8)
    for seed in range(25):
        tau = 2 + seed % 4
        b = 1 + seed % tau
        seq = terminate_sizes(random_sizes(8, 3, seed), tau, 3)
        p = make_params(tau, b, m=3, t=seq.t)
        layout = packet_layout(seq, p)
        for i in range(tau, seq.t + 1):
            if layout.parity_sizes[i] == 0:
                continue
            hits = []
            for j in range(max(0, i - tau - b + 1), i - tau + 1):
                need = sum(seq.size(l) for l in range(j, i - tau + 1))
                have = sum(layout.parity_sizes[l] for l in range(j + b, i + 1))
                if need == have:
                    hits.append(j)
            assert hits, (seed, i)


def test_every_burst_window_is_budgeted():
    fld = GF(8)
    for seed in range(25):
        tau = 2 + seed % 4
        b = 1 + (seed // 2) % tau
        seq = terminate_sizes(random_sizes(8, 3, seed + 50), tau, 3)
        p = make_params(tau, b, m=3, t=seq.t)
        layout = packet_layout(seq, p)
        for i in range(seq.t + 1):
            for j in range(max(0, i - b + 1), i + 1):
                need = sum(seq.size(l) for l in range(j, i + 1))
                have = sum(
                    layout.parity_sizes[l]
                    for l in range(j + b, min(i + tau, seq.t) + 1)
                )
                assert have >= need, (seed, i, j)


def test_packet_never_smaller_than_message():
    fld = GF(8)
    for seed in range(25):
        tau = 2 + seed % 4
        b = 1 + seed % tau
        seq = terminate_sizes(random_sizes(8, 3, seed), tau, 3)
        p = make_params(tau, b, m=3, t=seq.t)
        layout = packet_layout(seq, p)
        for i in range(seq.t + 1):
            assert layout.n_size(seq, i) >= seq.size(i)


def test_rate_stays_under_channel_capacity_bound():
    from fractions import Fraction

    fld = GF(8)
    for seed in range(25):
        tau = 2 + seed % 4
        b = 1 + seed % tau
        seq = terminate_sizes(random_sizes(8, 3, seed + 7), tau, 3)
        if seq.total == 0:
            continue
        p = make_params(tau, b, m=3, t=seq.t)
        layout = packet_layout(seq, p)
        sent = sum(layout.n_size(seq, i) for i in range(seq.t + 1))
        assert Fraction(seq.total, sent) <= Fraction(tau, tau + b), (tau, b, seed)


def vgms_linear_rows(p, matrix, seq, layout):
    """Independent linear expansion of every channel symbol, built from the
    documented layout: systematic prefix, then parity = one tail symbol plus
    a Cauchy combination of the head symbols in the trailing window."""
    off = symbol_offsets(seq)
    slot_rows = []
    for i in range(seq.t + 1):
        rows = [{off[i] + r: 1} for r in range(seq.size(i))]
        psz = layout.parity_sizes[i]
        for c_off in range(psz):
            col = (i % p.tau) * p.m + c_off
            row = {off[i - p.tau] + layout.head_sizes[i - p.tau] + c_off: 1}
            for j in range(i - p.tau, i):
                if j < 0:
                    continue
                for r_off in range(layout.head_sizes[j]):
                    coeff = matrix.entry((j % p.tau) * p.m + r_off, col)
                    row[off[j] + r_off] = coeff
            rows.append(row)
        slot_rows.append(rows)
    return slot_rows


def test_encoder_matches_independent_linear_expansion():
    p, fld, seq, matrix = ref_setup(seed=2)
    payload = random_payload(seq, fld, 13)
    flat = [s for pkt in payload for s in pkt]
    stream = encode_stream(p, fld, matrix, seq, payload)
    rows = vgms_linear_rows(p, matrix, seq, stream.layout)
    for i, pkt in enumerate(stream.packets):
        for sym, row in zip(pkt, rows[i]):
            want = 0
            for idx, c in row.items():
                want ^= fld.mul(c, flat[idx])
            assert sym == want, i


def test_decoder_agrees_with_incremental_elimination():
    # the structured decoder and a generic rank-based receiver recover the
    # same symbols on every admissible pattern of a small stream
    fld = GF(8)
    seq = terminate_sizes([2, 1, 2, 1], 3, 2)
    p = make_params(3, 2, m=2, t=seq.t)
    matrix = build_cauchy(p.tau * p.m, fld, 4)
    payload = random_payload(seq, fld, 21)
    flat = [s for pkt in payload for s in pkt]
    stream = encode_stream(p, fld, matrix, seq, payload)
    rows = vgms_linear_rows(p, matrix, seq, stream.layout)
    off = symbol_offsets(seq)
    for pattern in all_patterns(p):
        received = apply_pattern(pattern, stream.packets)
        res = decode_stream(p, fld, matrix, received, seq)
        assert res.messages == payload, pattern
        dec = IncrementalDecoder(fld, off[-1])
        for s, pkt in enumerate(received):
            if pkt is None:
                continue
            for sym, row in zip(pkt, rows[s]):
                dense = [0] * off[-1]
                for idx, c in row.items():
                    dense[idx] = c
                dec.add_equation(dense, sym)
        values = dec.determined()
        assert len(values) == off[-1], pattern
        assert [values[i] for i in range(off[-1])] == flat, pattern


def test_wider_window_round_trips():
    # a looser window admits sparser patterns; the codec must still clear them
    fld = GF(8)
    seq = terminate_sizes([2, 1, 2, 1, 2], 3, 2)
    p = make_params(3, 2, w=5, m=2, t=seq.t)
    matrix = build_cauchy(p.tau * p.m, fld, 8)
    payload = random_payload(seq, fld, 30)
    stream = encode_stream(p, fld, matrix, seq, payload)
    for pattern in all_patterns(p):
        res = decode_stream(p, fld, matrix, apply_pattern(pattern, stream.packets), seq)
        assert res.messages == payload, pattern


def test_burst_equal_to_delay_degenerates_to_repetition():
    # with b = tau no head symbols ever fit the budget; every parity block
    # echoes a whole earlier message
    fld = GF(8)
    seq = terminate_sizes([2, 3, 1], 3, 3)
    p = make_params(3, 3, m=3, t=seq.t)
    layout = packet_layout(seq, p)
    assert layout.head_sizes == [0] * len(seq)
    assert [layout.n_size(seq, i) for i in range(seq.t + 1)] == [
        seq.size(i) + seq.size(i - p.tau) for i in range(seq.t + 1)
    ]


def test_online_encoder_never_needs_future_sizes():
    # feeding slots one by one gives byte-identical packets to batch encode
    p, fld, seq, matrix = ref_setup(seed=6)
    payload = random_payload(seq, fld, 4)
    stream = encode_stream(p, fld, matrix, seq, payload)
    enc = VgmsEncoder(p, fld, matrix)
    incremental = [enc.encode_slot(payload[i]) for i in range(seq.t + 1)]
    assert incremental == stream.packets
