import constants
from codec.errors import ConfigError
from cmds.experiment import ExperimentConfig, ExperimentResult, reference_note, summarize, write_result
from cmds.trials import run_trials


def run_latency_experiment(cfg: ExperimentConfig, store=None) -> ExperimentResult:
	if cfg.code != 'mettle':
		raise ConfigError(constants.LATENCY_NEEDS_METTLE)
	return summarize(cfg, run_trials(cfg, range(cfg.trials), store, desc=f'latency {cfg.channel}'))


def handle_latency_command(cfg: ExperimentConfig, store=None) -> str:
	result = run_latency_experiment(cfg, store)
	write_result(result)
	stalled = round(result.failure_rate * len(result.reports))
	lines = [
		f'{cfg.channel} c={cfg.c} w={cfg.w} l={cfg.l} k={cfg.k}: {len(result.reports) - stalled}/{len(result.reports)} trials decoded',
		reference_note(cfg.channel, result.avg_latency, 0, 'average latency'),
		reference_note(cfg.channel, result.p95_latency, 1, '95th percentile latency'),
	]
	return '\n'.join(lines)
