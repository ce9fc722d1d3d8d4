from typing import Iterable, Iterator, NamedTuple

import numpy as np

import constants
from codec.edges import EdgeCache
from codec.errors import PayloadSizeError, SequencingError
from codec.params import CodeParams


class SourceSymbol(NamedTuple):
	position: int
	payload: bytes


class CodedSymbol(NamedTuple):
	bin_index: int
	payload: bytes


class Encoder:
	"""Streaming encoder: throws each ball into its l bins and releases finalized bins.

	After ball t every bin below floor((1+c)(t+1)) is final, since later balls
	only land at or above their own leading-edge bin.
	"""

	def __init__(self, params: CodeParams):
		self.params = params
		self.next_ball = 0
		self.active_bins: dict[int, np.ndarray] = {}
		self.released_watermark = 0
		self.max_bin = -1
		self._edges = EdgeCache(params)
		self._zero = bytes(params.symbol_size)

	def push(self, symbol: SourceSymbol) -> list[CodedSymbol]:
		if symbol.position != self.next_ball:
			raise SequencingError(constants.OUT_OF_ORDER.format(got=symbol.position, expected=self.next_ball))
		if len(symbol.payload) != self.params.symbol_size:
			raise PayloadSizeError(constants.WRONG_PAYLOAD_SIZE.format(
				got=len(symbol.payload), expected=self.params.symbol_size))

		data = np.frombuffer(symbol.payload, dtype=np.uint8)
		for b in self._edges.get(symbol.position):
			acc = self.active_bins.get(b)
			if acc is None:
				self.active_bins[b] = data.copy()
			else:
				acc ^= data
			if b > self.max_bin:
				self.max_bin = b

		self.next_ball += 1
		return self._release(self.params.scale(self.next_ball))

	def flush(self) -> list[CodedSymbol]:
		"""Plain termination: release every bin up to the highest one any ball reached."""
		return self._release(self.max_bin + 1)

	def encode_stream(self, payloads: Iterable[bytes]) -> Iterator[CodedSymbol]:
		for payload in payloads:
			yield from self.push(SourceSymbol(self.next_ball, payload))
		yield from self.flush()

	def _release(self, end: int) -> list[CodedSymbol]:
		released = []
		for b in range(self.released_watermark, end):
			acc = self.active_bins.pop(b, None)
			# untouched bins still go out so indices on the wire have no gaps
			released.append(CodedSymbol(b, self._zero if acc is None else acc.tobytes()))
		self.released_watermark = max(self.released_watermark, end)
		return released
