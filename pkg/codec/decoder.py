import time
from collections import deque
from enum import Enum
from fractions import Fraction
from typing import NamedTuple

import numpy as np

import constants
from codec.edges import EdgeCache, window_end
from codec.encoder import CodedSymbol
from codec.errors import PayloadSizeError, SequencingError, StreamIncompleteError
from codec.params import CodeParams
from codec.report import TrialReport, latency_stats


class BallStatus(str, Enum):
	UNDECODED = 'undecoded'
	DECODED = 'decoded'
	ERROR_FLOOR = 'error_floor'
	STALLED = 'stalled'


class DecodedSymbol(NamedTuple):
	position: int
	payload: bytes
	latency: float


def decode_latency(z: int, x: int, params: CodeParams) -> Fraction:
	"""z/(1+c) - x in source-symbol units, clamped at zero for balls freed by their own leading edge."""
	return max(Fraction(0), Fraction(z * params.rate_den, params.rate_num) - x)


class Decoder:
	"""Sliding-window peeling decoder with per-ball latency accounting.

	Bins are processed in strictly ascending index order. A ball enters scope
	when the cursor reaches its leading-edge bin, which is the lowest bin it
	touches, so every contributor of a bin is known before that bin arrives.
	Only received bins carry residual degrees.
	"""

	def __init__(self, params: CodeParams, total_balls: int):
		self.params = params
		self.total_balls = total_balls
		self.cursor = -1
		self.next_ball = 0
		self.last_bin = -1

		self.residual_payload: dict[int, np.ndarray] = {}
		self.residual_degree: dict[int, int] = {}
		self.bin_members: dict[int, set[int]] = {}
		self.incident_received: dict[int, list[int]] = {}
		self.ball_status: dict[int, BallStatus] = {}
		self.peel_queue: deque[int] = deque()

		self.latencies: list[float] = []
		self.peel_ops = 0
		self.bins_received = 0
		self.decode_seconds = 0.0

		# contributors of bins not processed yet
		self._pending: dict[int, list[int]] = {}
		# decoded payloads kept until the ball's window has passed
		self._recovered: dict[int, np.ndarray] = {}
		self._expiry: deque[tuple[int, int]] = deque()
		self._edges = EdgeCache(params)

	@property
	def complete(self) -> bool:
		return self.next_ball == self.total_balls and self.cursor >= self.last_bin

	def push(self, sym: CodedSymbol) -> list[DecodedSymbol]:
		if len(sym.payload) != self.params.symbol_size:
			raise PayloadSizeError(constants.WRONG_PAYLOAD_SIZE.format(
				got=len(sym.payload), expected=self.params.symbol_size))
		started = time.perf_counter()
		z = sym.bin_index
		self._advance(z)

		acc = np.frombuffer(sym.payload, dtype=np.uint8).copy()
		members = set()
		for x in self._pending.pop(z, ()):
			recovered = self._recovered.get(x)
			if recovered is not None:
				acc ^= recovered
				self.peel_ops += 1
			else:
				members.add(x)
				self.incident_received[x].append(z)
		self.bins_received += 1
		self.cursor = z

		if members:
			self.residual_payload[z] = acc
			self.residual_degree[z] = len(members)
			self.bin_members[z] = members
			if len(members) == 1:
				self.peel_queue.append(z)

		decoded = self._peel(z)
		self._evict()
		self.decode_seconds += time.perf_counter() - started
		return decoded

	def mark_erased(self, bin_index: int) -> None:
		self._advance(bin_index)
		self._pending.pop(bin_index, None)
		self.cursor = bin_index
		self._evict()

	def drain(self) -> None:
		"""Treat every bin not seen yet, up to the end of the stream, as erased."""
		while not self.complete:
			self.mark_erased(self.cursor + 1)

	def finalize_report(self, total_balls: int | None = None, bins_sent: int | None = None) -> TrialReport:
		if total_balls is not None and total_balls != self.total_balls:
			raise ValueError(constants.BALL_COUNT_MISMATCH.format(expected=self.total_balls, got=total_balls))
		if not self.complete:
			raise StreamIncompleteError(constants.STREAM_INCOMPLETE.format(cursor=self.cursor))

		error_floor = stalled = 0
		for x, status in self.ball_status.items():
			if status is BallStatus.DECODED:
				continue
			# undecoded balls sat in every received bin they touch
			if self.incident_received.get(x):
				self.ball_status[x] = BallStatus.STALLED
				stalled += 1
			else:
				self.ball_status[x] = BallStatus.ERROR_FLOOR
				error_floor += 1

		avg, p95 = latency_stats(self.latencies)
		return TrialReport(
			total_balls=self.total_balls,
			decoded=len(self.latencies),
			error_floor_balls=error_floor,
			stalled_balls=stalled,
			stall_occurred=stalled > 0,
			latencies=self.latencies,
			avg_latency=avg,
			p95_latency=p95,
			bins_sent=self.last_bin + 1 if bins_sent is None else bins_sent,
			bins_received=self.bins_received,
			peel_ops=self.peel_ops,
			decode_seconds=self.decode_seconds,
		)

	def _advance(self, z: int) -> None:
		if z <= self.cursor:
			raise SequencingError(constants.NOT_ASCENDING.format(got=z, last=self.cursor))
		# a ball touches no bin below its leading edge
		self._admit(z)
		if self.next_ball == self.total_balls and z > self.last_bin:
			raise SequencingError(constants.PAST_STREAM_END.format(got=z, last=self.last_bin))
		# skipped indices are erasures
		for gap in range(self.cursor + 1, z):
			self._pending.pop(gap, None)

	def _admit(self, z: int) -> None:
		params = self.params
		while self.next_ball < self.total_balls and params.scale(self.next_ball) <= z:
			x = self.next_ball
			for b in self._edges.get(x):
				self._pending.setdefault(b, []).append(x)
				if b > self.last_bin:
					self.last_bin = b
			self.ball_status[x] = BallStatus.UNDECODED
			self.incident_received[x] = []
			self._expiry.append((window_end(x, params), x))
			self.next_ball += 1

	def _peel(self, z: int) -> list[DecodedSymbol]:
		decoded = []
		while self.peel_queue:
			b = self.peel_queue.popleft()
			if self.residual_degree.get(b) != 1:
				continue
			x = self.bin_members.pop(b).pop()
			payload = self.residual_payload.pop(b)
			del self.residual_degree[b]

			latency = decode_latency(z, x, self.params)
			self.ball_status[x] = BallStatus.DECODED
			self.latencies.append(float(latency))
			self._recovered[x] = payload
			decoded.append(DecodedSymbol(x, payload.tobytes(), float(latency)))

			for other in self.incident_received.pop(x):
				if other == b:
					continue
				self.residual_payload[other] ^= payload
				self.peel_ops += 1
				members = self.bin_members[other]
				members.discard(x)
				degree = self.residual_degree[other] - 1
				if degree == 0:
					del self.residual_degree[other], self.residual_payload[other], self.bin_members[other]
				else:
					self.residual_degree[other] = degree
					if degree == 1:
						self.peel_queue.append(other)
		return decoded

	def _evict(self) -> None:
		while self._expiry and self._expiry[0][0] <= self.cursor:
			_, x = self._expiry.popleft()
			self._recovered.pop(x, None)
