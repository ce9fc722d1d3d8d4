import sys
import time
from typing import Iterable, Optional

import numpy as np
from joblib import Parallel, delayed
from tqdm import tqdm

from codec.channels import ErasedBin, apply_channel
from codec.decoder import Decoder
from codec.encoder import Encoder, SourceSymbol
from codec.lt import lt_block_latency, lt_decode, lt_encode_symbol
from codec.report import TrialReport, latency_stats


def trial_seeds(seed: int, trial: int) -> tuple[np.random.SeedSequence, np.random.SeedSequence]:
	"""(channel, payload) seed sequences for trial; the code seed is seed + trial."""
	channel, payload = np.random.SeedSequence(seed + trial).spawn(2)
	return channel, payload


def run_mettle_trial(cfg, trial: int, keep_latencies: bool = False) -> TrialReport:
	params = cfg.code_params(trial)
	channel_seed, payload_seed = trial_seeds(cfg.seed, trial)
	channel = cfg.channel_spec().build(channel_seed, cfg.stationary)
	payloads = np.random.default_rng(payload_seed)

	encoder = Encoder(params)
	decoder = Decoder(params, cfg.k)
	sent = 0

	def deliver(symbols):
		for item in apply_channel(symbols, channel):
			if isinstance(item, ErasedBin):
				decoder.mark_erased(item.bin_index)
			else:
				decoder.push(item)

	for x in range(cfg.k):
		released = encoder.push(SourceSymbol(x, payloads.bytes(params.symbol_size)))
		sent += len(released)
		deliver(released)
	tail = encoder.flush()
	sent += len(tail)
	deliver(tail)
	decoder.drain()

	report = decoder.finalize_report(cfg.k, bins_sent=sent)
	return report if keep_latencies else report.without_latencies()


def run_lt_trial(cfg, trial: int, keep_latencies: bool = False) -> TrialReport:
	params = cfg.lt_params(trial)
	channel_seed, payload_seed = trial_seeds(cfg.seed, trial)
	channel = cfg.channel_spec().build(channel_seed, cfg.stationary)
	payloads = np.random.default_rng(payload_seed)

	k = params.k
	block = [payloads.bytes(cfg.payload_size) for _ in range(k)]
	n = -((-k * (cfg.c.numerator + cfg.c.denominator)) // cfg.c.denominator)
	received = [lt_encode_symbol(block, i, params) for i in range(n) if not channel.step()]

	started = time.perf_counter()
	result = lt_decode(received, params)
	elapsed = time.perf_counter() - started

	latencies = [float(lt_block_latency(k, i)) for i in sorted(result.decoded)]
	avg, p95 = latency_stats(latencies)
	stalled = k - len(result.decoded)
	report = TrialReport(
		total_balls=k, decoded=len(result.decoded), error_floor_balls=0, stalled_balls=stalled,
		stall_occurred=stalled > 0, latencies=latencies, avg_latency=avg, p95_latency=p95,
		bins_sent=n, bins_received=len(received), peel_ops=result.peel_ops, decode_seconds=elapsed,
	)
	return report if keep_latencies else report.without_latencies()


def run_trial(cfg, trial: int, keep_latencies: bool = False) -> TrialReport:
	if cfg.code == 'lt':
		return run_lt_trial(cfg, trial, keep_latencies)
	return run_mettle_trial(cfg, trial, keep_latencies)


def run_trials(cfg, trials: Iterable[int], store=None, desc: Optional[str] = None) -> list[TrialReport]:
	trials = list(trials)
	key = cfg.fingerprint()
	results: dict[int, TrialReport] = {}
	todo = []
	for t in trials:
		cached = store.get_trial(key, t) if store is not None else None
		if cached is not None:
			results[t] = cached
		else:
			todo.append(t)

	if todo:
		jobs = Parallel(n_jobs=cfg.jobs, return_as='generator')(delayed(run_trial)(cfg, t) for t in todo)
		bar = tqdm(zip(todo, jobs), total=len(todo), desc=desc or cfg.channel, file=sys.stderr,
		           leave=False, disable=len(todo) < 2)
		for t, report in bar:
			results[t] = report
			if store is not None:
				store.store_trial(key, t, report)
	return [results[t] for t in trials]
