import math
from collections import deque
from functools import lru_cache
from typing import NamedTuple, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

import constants
from codec.encoder import CodedSymbol


class LtParams(BaseModel):
	model_config = ConfigDict(frozen=True)

	k: int = Field(default=constants.LT_K, ge=1)
	soliton_c: float = Field(default=constants.SOLITON_C, gt=0)
	soliton_delta: float = Field(default=constants.SOLITON_DELTA, gt=0, lt=1)
	seed: int = Field(default=constants.DEFAULT_SEED, ge=0, lt=2 ** 64)


@lru_cache(maxsize=64)
def robust_soliton_pmf(params: LtParams) -> np.ndarray:
	"""Probabilities indexed by degree; entry 0 is always zero."""
	k = params.k
	mu = np.zeros(k + 1)
	if k == 1:
		mu[1] = 1.0
		return mu

	degrees = np.arange(2, k + 1, dtype=np.float64)
	mu[1] = 1.0 / k
	mu[2:] = 1.0 / (degrees * (degrees - 1))

	ripple = params.soliton_c * math.log(k / params.soliton_delta) * math.sqrt(k)
	spike = min(max(int(k / ripple), 1), k)
	tau = np.zeros(k + 1)
	tau[1:spike] = ripple / (np.arange(1, spike) * k)
	tau[spike] = max(ripple * math.log(ripple / params.soliton_delta) / k, 0.0)

	mu += tau
	return mu / mu.sum()


@lru_cache(maxsize=64)
def _soliton_cdf(params: LtParams) -> np.ndarray:
	return np.cumsum(robust_soliton_pmf(params))


def lt_neighbors(index: int, params: LtParams) -> tuple[int, ...]:
	rng = np.random.default_rng([params.seed, index])
	cdf = _soliton_cdf(params)
	degree = int(np.searchsorted(cdf, rng.random() * cdf[-1], side='right'))
	degree = min(max(degree, 1), params.k)
	return tuple(sorted(rng.choice(params.k, size=degree, replace=False).tolist()))


def lt_encode_symbol(block: Sequence[bytes], index: int, params: LtParams) -> CodedSymbol:
	if len(block) != params.k:
		raise ValueError(f'block holds {len(block)} symbols, expected {params.k}')
	neighbors = lt_neighbors(index, params)
	acc = np.frombuffer(block[neighbors[0]], dtype=np.uint8).copy()
	for i in neighbors[1:]:
		acc ^= np.frombuffer(block[i], dtype=np.uint8)
	return CodedSymbol(index, acc.tobytes())


class LtDecodeResult(NamedTuple):
	decoded: dict[int, bytes]
	success: bool
	peel_ops: int


def lt_decode(received: Sequence[CodedSymbol], params: LtParams) -> LtDecodeResult:
	payloads: dict[int, np.ndarray] = {}
	members: dict[int, set[int]] = {}
	holders: dict[int, list[int]] = {}
	ripple: deque[int] = deque()
	for sym in received:
		payloads[sym.bin_index] = np.frombuffer(sym.payload, dtype=np.uint8).copy()
		neighbors = set(lt_neighbors(sym.bin_index, params))
		members[sym.bin_index] = neighbors
		for i in neighbors:
			holders.setdefault(i, []).append(sym.bin_index)
		if len(neighbors) == 1:
			ripple.append(sym.bin_index)

	decoded: dict[int, np.ndarray] = {}
	peel_ops = 0
	while ripple:
		s = ripple.popleft()
		if len(members[s]) != 1:
			continue
		i = members[s].pop()
		value = payloads[s]
		decoded[i] = value
		for other in holders.pop(i, ()):
			if other == s or i not in members[other]:
				continue
			payloads[other] ^= value
			peel_ops += 1
			members[other].discard(i)
			if len(members[other]) == 1:
				ripple.append(other)

	return LtDecodeResult(
		{i: v.tobytes() for i, v in decoded.items()},
		len(decoded) == params.k,
		peel_ops,
	)


def lt_block_latency(k: int, i: int) -> int:
	if not 0 <= i < k:
		raise ValueError(f'position {i} outside block of {k}')
	return k - i
