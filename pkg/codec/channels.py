import math
from enum import Enum
from typing import Annotated, Iterable, Iterator, NamedTuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

import constants
from codec.encoder import CodedSymbol
from codec.errors import ChannelConfigError

Probability = Annotated[float, Field(ge=0.0, le=1.0)]


class BecParams(BaseModel):
	model_config = ConfigDict(frozen=True)

	epsilon: Probability


class GeParams(BaseModel):
	model_config = ConfigDict(frozen=True)

	p_g2b: Probability
	p_b2g: Probability
	eps_g: Probability
	eps_b: Probability

	@model_validator(mode='after')
	def _chain_moves(self):
		if self.p_g2b + self.p_b2g <= 0:
			raise ValueError(constants.DEGENERATE_GE)
		return self


class GeMode(str, Enum):
	GOOD = 'good'
	BAD = 'bad'


class UniformStream:
	def __init__(self, seed: int, block: int = constants.UNIFORM_BLOCK):
		self.rng = np.random.default_rng(seed)
		self.block = block
		self._buffer = np.empty(0)
		self._pos = 0

	def next(self) -> float:
		if self._pos == len(self._buffer):
			self._buffer = self.rng.random(self.block)
			self._pos = 0
		u = self._buffer[self._pos]
		self._pos += 1
		return float(u)

	def take(self, n: int) -> np.ndarray:
		out = np.empty(n)
		filled = 0
		while filled < n:
			if self._pos == len(self._buffer):
				self._buffer = self.rng.random(self.block)
				self._pos = 0
			count = min(n - filled, len(self._buffer) - self._pos)
			out[filled:filled + count] = self._buffer[self._pos:self._pos + count]
			self._pos += count
			filled += count
		return out


class GeState:
	def __init__(self, rng: UniformStream, current: GeMode = GeMode.GOOD):
		self.current = current
		self.rng = rng


def bec_step(params: BecParams, rng: UniformStream) -> bool:
	"""True when the symbol is erased."""
	return rng.next() < params.epsilon


def ge_step(state: GeState, params: GeParams) -> bool:
	"""Erase with the current state's probability, then move the chain."""
	if state.current is GeMode.GOOD:
		erased = state.rng.next() < params.eps_g
		if state.rng.next() < params.p_g2b:
			state.current = GeMode.BAD
	else:
		erased = state.rng.next() < params.eps_b
		if state.rng.next() < params.p_b2g:
			state.current = GeMode.GOOD
	return erased


def ge_avg_rate(params: GeParams) -> float:
	total = params.p_g2b + params.p_b2g
	if total <= 0:
		raise ChannelConfigError(constants.DEGENERATE_GE)
	return (params.eps_b * params.p_g2b + params.eps_g * params.p_b2g) / total


def ge_rate_std_error(params: GeParams, steps: int) -> float:
	"""Asymptotic standard error of the empirical erasure rate over `steps` symbols."""
	total = params.p_g2b + params.p_b2g
	pi_b = params.p_g2b / total
	pi_g = 1.0 - pi_b
	memory = 1.0 - total
	per_symbol = pi_g * params.eps_g * (1 - params.eps_g) + pi_b * params.eps_b * (1 - params.eps_b)
	if memory >= 1.0:
		occupancy = 0.0
	else:
		occupancy = pi_g * pi_b * (1 + memory) / (1 - memory)
	variance = per_symbol + (params.eps_b - params.eps_g) ** 2 * occupancy
	return math.sqrt(variance / steps)


class BecChannel:
	def __init__(self, params: BecParams, seed: int):
		self.params = params
		self.rng = UniformStream(seed)

	def step(self) -> bool:
		return bec_step(self.params, self.rng)

	def erasure_mask(self, n: int) -> np.ndarray:
		return self.rng.take(n) < self.params.epsilon


class GeChannel:
	def __init__(self, params: GeParams, seed: int, stationary: bool = False):
		self.params = params
		self.state = GeState(UniformStream(seed))
		if stationary:
			pi_b = params.p_g2b / (params.p_g2b + params.p_b2g)
			if self.state.rng.next() < pi_b:
				self.state.current = GeMode.BAD

	def step(self) -> bool:
		return ge_step(self.state, self.params)

	def run(self, n: int) -> tuple[np.ndarray, np.ndarray]:
		"""(erasure mask, bad-state flags) for the next n symbols, state taken before each step."""
		erased = np.empty(n, dtype=bool)
		bad = np.empty(n, dtype=bool)
		for start in range(0, n, constants.GE_RUN_BLOCK):
			stop = min(start + constants.GE_RUN_BLOCK, n)
			erased[start:stop], bad[start:stop] = self._run_block(stop - start)
		return erased, bad

	def _run_block(self, n: int) -> tuple[list[bool], list[bool]]:
		p = self.params
		draws = self.state.rng.take(2 * n).tolist()
		erased = [False] * n
		bad = [False] * n
		in_bad = self.state.current is GeMode.BAD
		for t in range(n):
			bad[t] = in_bad
			if in_bad:
				erased[t] = draws[2 * t] < p.eps_b
				in_bad = not draws[2 * t + 1] < p.p_b2g
			else:
				erased[t] = draws[2 * t] < p.eps_g
				in_bad = draws[2 * t + 1] < p.p_g2b
		self.state.current = GeMode.BAD if in_bad else GeMode.GOOD
		return erased, bad

	def erasure_mask(self, n: int) -> np.ndarray:
		return self.run(n)[0]


Channel = Union[BecChannel, GeChannel]


def bad_sojourns(bad: np.ndarray) -> np.ndarray:
	if len(bad) == 0:
		return np.empty(0, dtype=np.int64)
	edges = np.diff(np.concatenate(([0], bad.astype(np.int8), [0])))
	starts = np.flatnonzero(edges == 1)
	ends = np.flatnonzero(edges == -1)
	lengths = ends - starts
	# drop runs cut by the observation window
	if bad[0]:
		lengths = lengths[1:]
	if len(bad) and bad[-1] and len(lengths):
		lengths = lengths[:-1]
	return lengths


class ErasedBin(NamedTuple):
	bin_index: int


def apply_channel(symbols: Iterable[CodedSymbol], channel: Channel) -> Iterator[Union[CodedSymbol, ErasedBin]]:
	for sym in symbols:
		yield ErasedBin(sym.bin_index) if channel.step() else sym


class ChannelSpec(BaseModel):
	model_config = ConfigDict(frozen=True)

	text: str
	bec: BecParams | None = None
	ge: GeParams | None = None

	def build(self, seed: int, stationary: bool = False) -> Channel:
		if self.bec is not None:
			return BecChannel(self.bec, seed)
		return GeChannel(self.ge, seed, stationary)

	@property
	def expected_rate(self) -> float:
		return self.bec.epsilon if self.bec is not None else ge_avg_rate(self.ge)


def parse_channel(spec: str) -> ChannelSpec:
	"""bec:<epsilon> | ge:<p_g2b>,<p_b2g>,<eps_g>,<eps_b> | ge1..ge5."""
	text = spec.strip().lower()
	try:
		if text in constants.GE_CHANNELS:
			_, p_g2b, p_b2g, eps_g, eps_b = constants.GE_CHANNELS[text]
			return ChannelSpec(text=text, ge=GeParams(p_g2b=p_g2b, p_b2g=p_b2g, eps_g=eps_g, eps_b=eps_b))
		kind, _, rest = text.partition(':')
		if kind == 'bec':
			return ChannelSpec(text=text, bec=BecParams(epsilon=float(rest)))
		if kind == 'ge':
			p_g2b, p_b2g, eps_g, eps_b = (float(v) for v in rest.split(','))
			return ChannelSpec(text=text, ge=GeParams(p_g2b=p_g2b, p_b2g=p_b2g, eps_g=eps_g, eps_b=eps_b))
	except ValueError as e:
		raise ChannelConfigError(constants.BAD_CHANNEL.format(spec=spec) + f' ({e})')
	raise ChannelConfigError(constants.BAD_CHANNEL.format(spec=spec))
