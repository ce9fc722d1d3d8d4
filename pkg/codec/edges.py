from typing import NamedTuple

import numpy as np

import constants
from codec.keyed import sample_eta, sample_etas
from codec.params import CodeParams


class EdgeSet(NamedTuple):
	ball: int
	bins: tuple[int, ...]


def tle_bin(x: int, params: CodeParams) -> int:
	"""Leading-edge bin floor((1+c)x); injective because 1+c > 1."""
	return params.scale(x)


def window_end(x: int, params: CodeParams) -> int:
	"""floor((1+c)(x+w)), the highest bin ball x can land in."""
	return params.scale(x + params.w)


def _land(x: int, edge: int, params: CodeParams, taken: list[int], lo: int, hi: int) -> int:
	for attempt in range(constants.MAX_RESAMPLE_ATTEMPTS):
		b = hi - sample_eta(x, edge, params, attempt)
		if b not in taken:
			return b
	# linear probe downward from the last collision, wrapping to the window top
	while b in taken:
		b = b - 1 if b > lo else hi
	return b


def derive_edge_set(x: int, params: CodeParams) -> EdgeSet:
	lo, hi = tle_bin(x, params), window_end(x, params)
	bins = [lo]
	for edge in range(2, params.l + 1):
		bins.append(_land(x, edge, params, bins, lo, hi))
	return EdgeSet(x, tuple(bins))


def derive_edge_sets(start: int, stop: int, params: CodeParams) -> np.ndarray:
	"""Edge sets of balls start..stop-1 as an (n, l) table, row-identical to derive_edge_set.

	Rows whose first draws collide are recomputed through the scalar path.
	"""
	xs = np.arange(start, stop, dtype=np.int64)
	if len(xs) == 0:
		return np.empty((0, params.l), dtype=np.int64)
	hi = ((xs + params.w) * params.rate_num) // params.rate_den
	columns = [(xs * params.rate_num) // params.rate_den]
	for edge in range(2, params.l + 1):
		columns.append(hi - sample_etas(xs, edge, params))
	table = np.stack(columns, axis=1)
	ordered = np.sort(table, axis=1)
	collided = np.flatnonzero((ordered[:, 1:] == ordered[:, :-1]).any(axis=1))
	for row in collided:
		table[row] = derive_edge_set(start + int(row), params).bins
	return table


class EdgeCache:
	def __init__(self, params: CodeParams, chunk: int = constants.EDGE_CHUNK):
		self.params = params
		self.chunk = chunk
		self._start = 0
		self._rows: list[list[int]] = []

	def get(self, x: int) -> list[int]:
		if not self._start <= x < self._start + len(self._rows):
			self._start = x - x % self.chunk
			self._rows = derive_edge_sets(self._start, self._start + self.chunk, self.params).tolist()
		return self._rows[x - self._start]
