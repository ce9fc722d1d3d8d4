from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from pydantic import ValidationError

import reference
from codec.edges import EdgeCache, derive_edge_set, derive_edge_sets, tle_bin, window_end
from codec.errors import ConfigError
from codec.keyed import sample_eta, sample_etas
from codec.params import CodeParams, parse_ratio


@pytest.mark.parametrize('text, expected', [
	('1/5', Fraction(1, 5)),
	('0.055', Fraction(11, 200)),
	('5.5%', Fraction(11, 200)),
	(Fraction(3, 7), Fraction(3, 7)),
	(2, Fraction(2)),
	(0.25, Fraction(1, 4)),
])
def test_parse_ratio(text, expected):
	assert parse_ratio(text) == expected


def test_parse_ratio_rejects_garbage():
	with pytest.raises(ConfigError):
		parse_ratio('a lot')


@pytest.mark.parametrize('fields', [
	{'c': 0},
	{'c': '-1/5'},
	{'w': 0},
	{'l': 1},
	{'l': 17},
	{'seed': -1},
	{'seed': 2 ** 64},
	{'symbol_size': 0},
	{'c': '1/10', 'w': 1, 'l': 4},
])
def test_code_params_rejects(fields):
	with pytest.raises(ValidationError):
		CodeParams(**fields)


def test_code_params_defaults():
	params = CodeParams()
	assert (params.c, params.w, params.l, params.symbol_size) == (Fraction(1, 5), 600, 4, 1500)
	assert params.window_bins == 720
	assert params.bins_for(100_000) == 120_000


@pytest.mark.parametrize('x, c, expected', [(0, '1/5', 0), (10, '1/5', 12), (7, '1/2', 10)])
def test_tle_bin(x, c, expected):
	assert tle_bin(x, CodeParams(c=c, w=10, l=3)) == expected


@pytest.mark.parametrize('c', ['1/5', '11/200', '1/3', '1/100', '7/4'])
def test_tle_injective(c):
	params = CodeParams(c=c, w=600, l=4)
	xs = np.arange(1_000_000, dtype=np.int64)
	leading = (xs * params.rate_num) // params.rate_den
	assert (np.diff(leading) >= 1).all()
	assert leading[-1] == tle_bin(999_999, params)


@given(st.integers(min_value=0, max_value=10 ** 6), st.integers(min_value=2, max_value=6),
       st.integers(min_value=0, max_value=3))
@settings(max_examples=60, deadline=None)
def test_sampler_matches_plain_int_reference(x, edge, attempt):
	params = CodeParams(c='1/5', w=40, l=6, seed=123456789)
	assert sample_eta(x, edge, params, attempt) == reference.eta(params, x, edge, attempt)


def test_sample_eta_edge_range():
	params = CodeParams(l=4)
	for edge in (1, 5):
		with pytest.raises(ValueError):
			sample_eta(0, edge, params)


@pytest.mark.slow
@pytest.mark.parametrize('edge, mean', [(2, 360), (3, 180)])
def test_eta_mean(edge, mean):
	params = CodeParams(c='1/5', w=600, l=4, seed=1)
	etas = np.concatenate([
		sample_etas(np.arange(start, start + 100_000), edge, params) for start in range(0, 1_000_000, 100_000)
	])
	assert etas.min() >= 0 and etas.max() <= 720
	assert abs(etas.mean() - mean) < 1


def test_edge_set_for_first_ball():
	params = CodeParams(c='1/5', w=600, l=4, seed=1)
	es = derive_edge_set(0, params)
	assert es.ball == 0 and es.bins[0] == 0
	assert all(0 <= b <= 720 for b in es.bins)
	assert len(set(es.bins)) == 4


def test_edge_set_matches_reference(small_params):
	params = CodeParams(c='1/2', w=4, l=3, seed=42)
	assert derive_edge_set(5, params).bins == reference.edge_set(params, 5)
	for x in range(10):
		assert derive_edge_set(x, small_params).bins == reference.edge_set(small_params, x)


edge_params = st.builds(
	CodeParams,
	c=st.sampled_from(['1/20', '1/5', '1/2', '1', '3/7']),
	w=st.integers(min_value=8, max_value=40),
	l=st.integers(min_value=2, max_value=5),
	seed=st.integers(min_value=0, max_value=2 ** 64 - 1),
	symbol_size=st.just(4),
)


@given(edge_params, st.integers(min_value=0, max_value=10 ** 9))
@settings(max_examples=200, deadline=None)
def test_edge_set_invariants(params, x):
	bins = derive_edge_set(x, params).bins
	assert len(bins) == params.l
	assert bins[0] == tle_bin(x, params)
	assert len(set(bins)) == params.l
	assert all(tle_bin(x, params) <= b <= window_end(x, params) for b in bins)


@given(edge_params, st.integers(min_value=0, max_value=10 ** 6))
@settings(max_examples=50, deadline=None)
def test_vectorised_rows_match_scalar(params, start):
	table = derive_edge_sets(start, start + 64, params)
	assert table.shape == (64, params.l)
	for row, x in zip(table.tolist(), range(start, start + 64)):
		assert tuple(row) == derive_edge_set(x, params).bins


def test_narrow_window_stays_distinct():
	# two edges into a window of two bins collide often
	params = CodeParams(c='1/2', w=1, l=2, seed=3)
	for x in range(200):
		bins = derive_edge_set(x, params).bins
		assert len(set(bins)) == 2
		assert bins == reference.edge_set(params, x)


def test_edge_cache_serves_any_order():
	params = CodeParams(c='1/5', w=30, l=4, seed=9)
	cache = EdgeCache(params, chunk=16)
	for x in [0, 5, 40, 17, 3, 100]:
		assert tuple(cache.get(x)) == derive_edge_set(x, params).bins


def test_determinism_over_many_balls():
	params = CodeParams(c='1/5', w=600, l=4, seed=2024)
	assert np.array_equal(derive_edge_sets(0, 100_000, params), derive_edge_sets(0, 100_000, params))
	cache = EdgeCache(params)
	table = derive_edge_sets(0, 10_000, params)
	assert all(cache.get(x) == table[x].tolist() for x in range(10_000))
