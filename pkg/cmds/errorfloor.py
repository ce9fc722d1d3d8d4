from pydantic import BaseModel

import constants
from codec.edges import derive_edge_sets
from codec.errors import ConfigError
from cmds.experiment import ExperimentConfig, write_csv
from cmds.trials import trial_seeds

CHUNK = 65536


class ErrorFloorResult(BaseModel):
	channel: str
	l: int
	balls: int
	error_floor_balls: int
	error_floor_rate: float
	expected_rate: float


def run_errorfloor_experiment(cfg: ExperimentConfig, balls: int = constants.ERRORFLOOR_BALLS) -> ErrorFloorResult:
	spec = cfg.channel_spec()
	if spec.bec is None:
		raise ConfigError(constants.ERRORFLOOR_NEEDS_BEC)
	params = cfg.code_params(0)
	channel_seed, _ = trial_seeds(cfg.seed, 0)
	last_bin = params.scale(balls - 1 + params.w)
	erased = spec.build(channel_seed).erasure_mask(last_bin + 1)

	hits = 0
	for start in range(0, balls, CHUNK):
		table = derive_edge_sets(start, min(start + CHUNK, balls), params)
		hits += int(erased[table].all(axis=1).sum())
	return ErrorFloorResult(
		channel=cfg.channel, l=params.l, balls=balls, error_floor_balls=hits,
		error_floor_rate=hits / balls if balls else 0.0,
		expected_rate=spec.bec.epsilon ** params.l,
	)


def handle_errorfloor_command(cfg: ExperimentConfig, balls: int) -> str:
	result = run_errorfloor_experiment(cfg, balls)
	write_csv(cfg.out, constants.ERRORFLOOR_COLUMNS, [[
		result.channel, result.l, result.balls, result.error_floor_balls,
		result.error_floor_rate, result.expected_rate,
	]])
	return (f'{result.error_floor_balls} of {result.balls} balls had all {result.l} bins erased: '
	        f'rate {result.error_floor_rate:.3e}, expected {result.expected_rate:.3e}')
