from fractions import Fraction
from functools import reduce

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import reference
from codec.decoder import BallStatus, Decoder, decode_latency
from codec.edges import derive_edge_set, derive_edge_sets, tle_bin
from codec.encoder import CodedSymbol, Encoder
from codec.errors import PayloadSizeError, SequencingError, StreamIncompleteError
from codec.gf2 import build_system, ge_solve
from codec.params import CodeParams


def encode(params: CodeParams, k: int, seed: int = 0):
	payloads = reference.payloads(k, params.symbol_size, seed)
	return payloads, list(Encoder(params).encode_stream(payloads))


def decode(params: CodeParams, k: int, symbols, erased=frozenset(), check=None):
	decoder = Decoder(params, k)
	decoded = {}
	for sym in symbols:
		if sym.bin_index in erased:
			decoder.mark_erased(sym.bin_index)
		else:
			for d in decoder.push(sym):
				decoded[d.position] = (d, sym.bin_index)
		if check is not None:
			check(decoder)
	return decoder, decoded, decoder.finalize_report(k)


def xor(chunks) -> bytes:
	return reduce(lambda a, b: bytes(x ^ y for x, y in zip(a, b)), chunks)


@given(
	c=st.sampled_from([Fraction(1, 20), Fraction(1, 10), Fraction(1, 5), Fraction(1, 3), Fraction(1, 2)]),
	w=st.integers(min_value=50, max_value=600),
	l=st.sampled_from([3, 4, 5]),
	k=st.sampled_from([1000, 10_000]),
	seed=st.integers(min_value=0, max_value=2 ** 64 - 1),
)
@pytest.mark.slow
@settings(max_examples=50, deadline=None)
def test_lossless_round_trip(c, w, l, k, seed):
	params = CodeParams(c=c, w=w, l=l, seed=seed, symbol_size=8)
	payloads, symbols = encode(params, k, seed % 1000)
	_, decoded, report = decode(params, k, symbols)
	assert report.decoded == k and not report.stall_occurred
	assert report.avg_latency == 0 and report.p95_latency == 0
	for x, (d, z) in decoded.items():
		assert z == tle_bin(x, params)
		assert d.latency == 0
		assert d.payload == payloads[x]


def test_lossless_report(small_params):
	_, symbols = encode(small_params, 10)
	_, _, report = decode(small_params, 10, symbols)
	assert (report.decoded, report.error_floor_balls, report.stalled_balls) == (10, 0, 0)
	assert report.bins_sent == report.bins_received == len(symbols)
	assert report.avg_latency == 0


@given(
	c=st.sampled_from(['1/5', '1/2', '1']),
	w=st.integers(min_value=3, max_value=8),
	l=st.integers(min_value=2, max_value=4),
	k=st.integers(min_value=1, max_value=64),
	seed=st.integers(min_value=0, max_value=2 ** 32),
	epsilon=st.sampled_from([0.05, 0.1, 0.2, 0.3, 0.5]),
)
@settings(max_examples=1000, deadline=None)
def test_peeling_is_within_elimination(c, w, l, k, seed, epsilon):
	params = CodeParams(c=c, w=w, l=l, seed=seed, symbol_size=4)
	payloads, symbols = encode(params, k, seed)
	mask = np.random.default_rng(seed).random(len(symbols)) < epsilon
	erased = {s.bin_index for s, gone in zip(symbols, mask) if gone}
	_, decoded, report = decode(params, k, symbols, erased)

	edge_sets = [derive_edge_set(x, params).bins for x in range(k)]
	solved = ge_solve(build_system(edge_sets, [s for s in symbols if s.bin_index not in erased]))
	assert set(decoded) <= set(solved)
	for x, (d, z) in decoded.items():
		assert d.payload == solved[x] == payloads[x]
		assert z >= tle_bin(x, params)
		assert d.latency == float(decode_latency(z, x, params))
	assert report.decoded + report.error_floor_balls + report.stalled_balls == k


def test_residuals_hold_undecoded_xor():
	params = CodeParams(c='1/5', w=10, l=3, seed=99, symbol_size=4)
	k = 40
	payloads, symbols = encode(params, k, seed=4)
	edges = {x: derive_edge_set(x, params).bins for x in range(k)}
	erased = {s.bin_index for s in symbols if s.bin_index % 3 == 1}

	def check(decoder: Decoder):
		for b, residual in decoder.residual_payload.items():
			members = {x for x in range(decoder.next_ball)
			           if b in edges[x] and decoder.ball_status[x] is not BallStatus.DECODED}
			assert decoder.bin_members[b] == members
			assert decoder.residual_degree[b] == len(members)
			assert residual.tobytes() == xor(payloads[x] for x in members)

	decode(params, k, symbols, erased, check)


def test_latency_in_source_symbol_units():
	params = CodeParams(c='1/5', w=600, l=4)
	assert decode_latency(132, 100, params) == 10
	assert decode_latency(tle_bin(7, params), 7, params) == 0
	assert decode_latency(10, 7, CodeParams(c='1/2', w=4, l=3)) == 0
	assert decode_latency(11, 7, CodeParams(c='1/2', w=4, l=3)) == Fraction(1, 3)


def test_erase_everything(small_params):
	_, symbols = encode(small_params, 10)
	_, decoded, report = decode(small_params, 10, symbols, {s.bin_index for s in symbols})
	assert not decoded
	assert report.decoded == 0 and report.error_floor_balls == 10
	assert not report.stall_occurred
	assert np.isnan(report.avg_latency)


def test_ball_with_all_bins_erased_is_error_floor(small_params):
	_, symbols = encode(small_params, 10)
	decoder, _, report = decode(small_params, 10, symbols, set(derive_edge_set(4, small_params).bins))
	assert decoder.ball_status[4] is BallStatus.ERROR_FLOOR
	assert report.error_floor_balls >= 1


def test_manufactured_stall(small_params):
	k = 10
	_, symbols = encode(small_params, k)
	edges = [derive_edge_set(x, small_params).bins for x in range(k)]
	shared = next(b for b in range(len(symbols)) if sum(b in e for e in edges) >= 2)
	trapped = [x for x in range(k) if shared in edges[x]]
	erased = {b for x in trapped for b in edges[x]} - {shared}

	decoder, decoded, report = decode(small_params, k, symbols, erased)
	assert report.stall_occurred
	assert report.stalled_balls >= len(trapped)
	for x in trapped:
		assert x not in decoded
		assert decoder.ball_status[x] is BallStatus.STALLED

	received = [s for s in symbols if s.bin_index not in erased]
	solved = ge_solve(build_system(edges, received))
	assert not set(trapped) & set(solved)


def test_gaps_count_as_erasures(small_params):
	_, symbols = encode(small_params, 10, seed=2)
	erased = {3, 4, 9}
	_, marked, explicit = decode(small_params, 10, symbols, erased)

	decoder = Decoder(small_params, 10)
	inferred = {}
	for sym in symbols:
		if sym.bin_index not in erased:
			for d in decoder.push(sym):
				inferred[d.position] = d
	decoder.drain()
	report = decoder.finalize_report(10)
	assert report.model_dump(exclude={'decode_seconds'}) == explicit.model_dump(exclude={'decode_seconds'})
	assert {x: d for x, (d, _) in marked.items()} == inferred


def test_drain_marks_the_tail(small_params):
	_, symbols = encode(small_params, 10)
	decoder = Decoder(small_params, 10)
	for sym in symbols[:-3]:
		decoder.push(sym)
	assert not decoder.complete
	decoder.drain()
	assert decoder.complete
	assert decoder.finalize_report(10).bins_received == len(symbols) - 3


def test_sequencing_errors(small_params):
	_, symbols = encode(small_params, 10)
	decoder = Decoder(small_params, 10)
	decoder.push(symbols[0])
	with pytest.raises(SequencingError):
		decoder.push(symbols[0])
	decoder.mark_erased(1)
	with pytest.raises(SequencingError):
		decoder.mark_erased(1)
	with pytest.raises(SequencingError):
		decoder.push(symbols[1])
	with pytest.raises(PayloadSizeError):
		decoder.push(CodedSymbol(2, bytes(3)))


def test_rejects_bins_past_the_end(small_params):
	_, symbols = encode(small_params, 10)
	decoder = Decoder(small_params, 10)
	for sym in symbols:
		decoder.push(sym)
	with pytest.raises(SequencingError):
		decoder.push(CodedSymbol(symbols[-1].bin_index + 1, bytes(8)))

	fresh = Decoder(small_params, 10)
	with pytest.raises(SequencingError):
		fresh.push(CodedSymbol(symbols[-1].bin_index + 50, bytes(8)))


def test_finalize_checks(small_params):
	_, symbols = encode(small_params, 10)
	decoder = Decoder(small_params, 10)
	decoder.push(symbols[0])
	with pytest.raises(StreamIncompleteError):
		decoder.finalize_report(10)
	decoder.drain()
	with pytest.raises(ValueError):
		decoder.finalize_report(11)


def twin_balls(params: CodeParams, balls: int):
	table = derive_edge_sets(0, balls, params)
	seen = {}
	for x, row in enumerate(table.tolist()):
		rest = tuple(sorted(row[1:]))
		if rest in seen:
			return seen[rest], x
		seen[rest] = x
	return None


def test_twin_balls_stall_when_both_leading_edges_are_lost():
	for seed in range(20):
		params = CodeParams(c='1/4', w=30, l=4, seed=seed, symbol_size=4)
		pair = twin_balls(params, 3000)
		if pair is not None:
			break
	x, y = pair
	k = y + 1
	_, symbols = encode(params, k)
	erased = {tle_bin(x, params), tle_bin(y, params)}
	decoder, decoded, report = decode(params, k, symbols, erased)
	assert x not in decoded and y not in decoded
	assert decoder.ball_status[x] is decoder.ball_status[y] is BallStatus.STALLED
	assert report.stall_occurred

	# no received bin tells the two apart, so elimination cannot either
	edges = [set(derive_edge_set(b, params).bins) for b in range(k)]
	for sym in symbols:
		if sym.bin_index not in erased:
			assert (sym.bin_index in edges[x]) == (sym.bin_index in edges[y])
