from pydantic import BaseModel

import constants
from cmds.experiment import ExperimentConfig, summarize, write_csv
from cmds.trials import run_trials


class BenchRow(BaseModel):
	k: int
	trials: int
	payload_size: int
	decode_us_per_symbol: float
	peel_ops_per_symbol: float
	failures: int


def run_bench(cfg: ExperimentConfig) -> list[BenchRow]:
	sizes = sorted({min(constants.BENCH_SMALL_K, cfg.k), cfg.k})
	rows = []
	for k in sizes:
		at_k = cfg.model_copy(update={'k': k})
		# never cached: the point is timing this machine
		result = summarize(at_k, run_trials(at_k, range(cfg.trials), desc=f'bench k={k}'))
		rows.append(BenchRow(
			k=k, trials=cfg.trials, payload_size=cfg.payload_size,
			decode_us_per_symbol=result.decode_us_per_symbol,
			peel_ops_per_symbol=result.peel_ops_per_symbol,
			failures=round(result.failure_rate * cfg.trials),
		))
	return rows


def handle_bench_command(cfg: ExperimentConfig) -> str:
	rows = run_bench(cfg)
	write_csv(cfg.out, constants.BENCH_COLUMNS, [
		[r.k, r.trials, r.payload_size, r.decode_us_per_symbol, r.peel_ops_per_symbol, r.failures] for r in rows
	])
	lines = [f'k={r.k}: {r.decode_us_per_symbol:.2f} us/symbol, {r.peel_ops_per_symbol:.3f} peel ops/symbol'
	         for r in rows]
	if len(rows) == 2 and rows[0].decode_us_per_symbol > 0:
		lines.append(f'scaling k={rows[0].k} -> k={rows[1].k}: '
		             f'{rows[1].decode_us_per_symbol / rows[0].decode_us_per_symbol:.2f}x per symbol')
	lines.append(f'(reference C++ decoder: {constants.REFERENCE_DECODE_US} us/packet; not comparable across languages)')
	cited = ', '.join(f'k={k}: {us}' for k, us in constants.REFERENCE_RAPTORQ_DECODE_US.items())
	lines.append(f'(cited RaptorQ decode us/packet, {cited})')
	return '\n'.join(lines)
