import numpy as np

from codec.params import CodeParams

GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MUL1 = np.uint64(0xBF58476D1CE4E5B9)
_MUL2 = np.uint64(0x94D049BB133111EB)
_S30, _S27, _S31 = np.uint64(30), np.uint64(27), np.uint64(31)


def mix64(z: np.ndarray) -> np.ndarray:
	z = z + GOLDEN
	z = (z ^ (z >> _S30)) * _MUL1
	z = (z ^ (z >> _S27)) * _MUL2
	return z ^ (z >> _S31)


def stream_keys(seed: int, xs: np.ndarray, edge: int, attempt: int) -> np.ndarray:
	xs = np.atleast_1d(np.asarray(xs)).astype(np.uint64)
	base = mix64(np.full(xs.shape, seed, dtype=np.uint64))
	tag = np.uint64((edge << 32) | attempt)
	return mix64(mix64(base ^ xs) ^ tag)


def stream_words(keys: np.ndarray, n_words: int) -> np.ndarray:
	offsets = np.arange(n_words, dtype=np.uint64) * GOLDEN
	return mix64(keys[:, None] + offsets[None, :])


def _field_masks(n_fields: int, width: int) -> tuple[np.ndarray, int]:
	per_word = 64 // width
	n_words = -(-n_fields // per_word)
	full = sum(1 << (width * j) for j in range(per_word))
	tail = n_fields - (n_words - 1) * per_word
	last = sum(1 << (width * j) for j in range(tail))
	masks = np.array([full] * (n_words - 1) + [last], dtype=np.uint64)
	return masks, n_words


def binomial_zero_fields(keys: np.ndarray, n_trials: int, width: int) -> np.ndarray:
	"""Binomial(n_trials, 2^-width) per key: count width-bit fields that are all zero.

	Fields never straddle a word; each word holds 64 // width of them.
	"""
	if n_trials == 0:
		return np.zeros(len(keys), dtype=np.int64)
	masks, n_words = _field_masks(n_trials, width)
	inverted = ~stream_words(keys, n_words)
	hits = inverted.copy()
	for shift in range(1, width):
		hits &= inverted >> np.uint64(shift)
	hits &= masks[None, :]
	return np.bitwise_count(hits).sum(axis=1, dtype=np.int64)


def sample_etas(xs: np.ndarray, edge: int, params: CodeParams, attempt: int = 0) -> np.ndarray:
	"""eta_edge ~ Binomial(floor((1+c)w), 2^-(edge-1)) for every ball in xs."""
	keys = stream_keys(params.seed, xs, edge, attempt)
	return binomial_zero_fields(keys, params.window_bins, edge - 1)


def sample_eta(x: int, edge: int, params: CodeParams, attempt: int = 0) -> int:
	if not 2 <= edge <= params.l:
		raise ValueError(f'edge index {edge} outside 2..{params.l}')
	return int(sample_etas(np.array([x]), edge, params, attempt)[0])
