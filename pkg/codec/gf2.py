from typing import Iterable, NamedTuple, Sequence

import constants
from codec.encoder import CodedSymbol
from codec.errors import InstanceTooLargeError


class Row(NamedTuple):
	bin_index: int
	balls: frozenset[int]
	payload: bytes


class LinearSystem(NamedTuple):
	rows: list[Row]
	num_balls: int
	symbol_size: int


def build_system(edge_sets: Sequence[Iterable[int]], received: Iterable[CodedSymbol],
                 max_balls: int = constants.ORACLE_MAX_BALLS) -> LinearSystem:
	"""One row per received bin; edge_sets[x] lists the bins ball x lands in."""
	if len(edge_sets) > max_balls:
		raise InstanceTooLargeError(constants.TOO_MANY_BALLS.format(got=len(edge_sets), bound=max_balls))
	members: dict[int, set[int]] = {}
	for x, bins in enumerate(edge_sets):
		for b in bins:
			members.setdefault(b, set()).add(x)
	rows = []
	symbol_size = 0
	for sym in received:
		symbol_size = len(sym.payload)
		rows.append(Row(sym.bin_index, frozenset(members.get(sym.bin_index, ())), sym.payload))
	return LinearSystem(rows, len(edge_sets), symbol_size)


def ge_solve(system: LinearSystem) -> dict[int, bytes]:
	work = [
		(sum(1 << x for x in row.balls), int.from_bytes(row.payload, 'little'))
		for row in system.rows if row.balls
	]
	pivots: list[tuple[int, int]] = []
	rank = 0
	for col in range(system.num_balls):
		bit = 1 << col
		pivot = next((r for r in range(rank, len(work)) if work[r][0] & bit), None)
		if pivot is None:
			continue
		work[rank], work[pivot] = work[pivot], work[rank]
		mask, value = work[rank]
		for r in range(len(work)):
			if r != rank and work[r][0] & bit:
				work[r] = (work[r][0] ^ mask, work[r][1] ^ value)
		pivots.append((col, rank))
		rank += 1

	solved = {}
	for col, r in pivots:
		mask, value = work[r]
		# fully reduced: a lone pivot bit means no free column feeds this ball
		if mask == 1 << col:
			solved[col] = value.to_bytes(system.symbol_size, 'little')
	return solved
