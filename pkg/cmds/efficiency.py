import math
import sys
from fractions import Fraction
from typing import Optional

from pydantic import BaseModel, ConfigDict
from tqdm import tqdm

import constants
from cmds.experiment import ExperimentConfig, write_csv
from cmds.trials import run_trials


class GridPoint(BaseModel):
	model_config = ConfigDict(arbitrary_types_allowed=True)

	c: Fraction
	trials: int
	failures: int
	failure_rate: float
	upper_95: float
	passed: bool


class EfficiencyResult(BaseModel):
	model_config = ConfigDict(arbitrary_types_allowed=True)

	code: str
	channel: str
	target: float
	c: Optional[Fraction]
	points: list[GridPoint]
	note: str


def wilson_upper(failures: int, trials: int, z: float = 1.96) -> float:
	if trials == 0:
		return 1.0
	p = failures / trials
	centre = p + z * z / (2 * trials)
	spread = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials))
	return min(1.0, (centre + spread) / (1 + z * z / trials))


def estimate_failure(cfg: ExperimentConfig, c: Fraction, target: float, budget: int, store=None) -> GridPoint:
	"""Failure rate at c over up to `budget` trials, stopping once the point can no longer pass."""
	at_c = cfg.model_copy(update={'c': c})
	allowed = math.floor(target * budget)
	batch = max(8, 4 * cfg.jobs)
	failures = done = 0
	while done < budget and failures <= allowed:
		chunk = range(done, min(done + batch, budget))
		reports = run_trials(at_c, chunk, store, desc=f'c={float(c):.3f}')
		failures += sum(1 for r in reports if not r.success)
		done += len(chunk)
	tqdm.write(f'c={float(c):.2%}: {failures}/{done} failures', file=sys.stderr)
	return GridPoint(c=c, trials=done, failures=failures, failure_rate=failures / done,
	                 upper_95=wilson_upper(failures, done), passed=failures <= allowed)


def run_efficiency_search(cfg: ExperimentConfig, target: float = constants.TARGET_FAILURE,
                          budget: int = constants.SEARCH_TRIALS, store=None) -> EfficiencyResult:
	c_max = constants.GRID_MAX_LT if cfg.code == 'lt' else constants.GRID_MAX_METTLE
	step = constants.GRID_STEP
	grid = [step * j for j in range(1, int(c_max / step) + 1)]
	evaluated: dict[int, GridPoint] = {}

	def point(i: int) -> GridPoint:
		if i not in evaluated:
			evaluated[i] = estimate_failure(cfg, grid[i], target, budget, store)
		return evaluated[i]

	lo, hi = 0, len(grid) - 1
	while lo < hi:
		mid = (lo + hi) // 2
		if point(mid).passed:
			hi = mid
		else:
			lo = mid + 1

	accepted = point(hi)
	points = sorted(evaluated.values(), key=lambda p: p.c)
	if not accepted.passed:
		best = min(points, key=lambda p: p.failure_rate)
		note = constants.TARGET_UNREACHABLE.format(c_max=c_max, target=target, best=best.c, rate=best.failure_rate)
		return EfficiencyResult(code=cfg.code, channel=cfg.channel, target=target, c=None, points=points, note=note)
	note = (f'{accepted.failures}/{accepted.trials} failures at c={float(accepted.c):.2%}, '
	        f'Wilson 95% upper bound {accepted.upper_95:.2e}')
	return EfficiencyResult(code=cfg.code, channel=cfg.channel, target=target, c=accepted.c, points=points, note=note)


def handle_efficiency_command(cfg: ExperimentConfig, target: float, budget: int, store=None) -> str:
	result = run_efficiency_search(cfg, target, budget, store)
	rows = [[str(p.c), p.trials, p.failures, p.failure_rate, p.upper_95, p.passed] for p in result.points]
	write_csv(cfg.out, constants.SEARCH_COLUMNS, rows)
	if result.c is None:
		return result.note
	lines = [f'{cfg.code} {cfg.channel}: c = {float(result.c):.2%} ({result.note})']
	if cfg.code == 'mettle' and cfg.channel in constants.REFERENCE_CHANNELS:
		lines.append(f'reference c = {float(constants.REFERENCE_CHANNELS[cfg.channel][2]):.2%}')
	if cfg.code == 'lt' and cfg.channel in constants.REFERENCE_LT_OVERHEAD:
		lines.append(f'reference LT c = {constants.REFERENCE_LT_OVERHEAD[cfg.channel]:.0%} '
		             f'(soliton c={cfg.soliton_c}, delta={cfg.soliton_delta})')
	if cfg.channel in constants.REFERENCE_RAPTORQ_OVERHEAD:
		overhead, k = constants.REFERENCE_RAPTORQ_OVERHEAD[cfg.channel]
		lines.append(f'cited RaptorQ c = {overhead:.2%} at k={k}')
	return '\n'.join(lines)
