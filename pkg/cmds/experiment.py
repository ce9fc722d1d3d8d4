import csv
import hashlib
import math
import sys
from fractions import Fraction
from typing import Iterable, Literal, Optional

from pydantic import BaseModel, ConfigDict, field_validator, model_validator

import constants
from codec.channels import ChannelSpec, parse_channel
from codec.lt import LtParams
from codec.params import CodeParams, parse_ratio
from codec.report import TrialReport


class ExperimentConfig(BaseModel):
	model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

	code: Literal['mettle', 'lt'] = 'mettle'
	c: Fraction = constants.DEFAULT_C
	w: int = constants.DEFAULT_W
	l: int = constants.DEFAULT_L
	k: int = constants.MEGA_K
	trials: int = constants.DEFAULT_TRIALS
	seed: int = constants.DEFAULT_SEED
	channel: str = 'bec:0.01'
	payload_size: int = constants.DEFAULT_SYMBOL_SIZE
	soliton_c: float = constants.SOLITON_C
	soliton_delta: float = constants.SOLITON_DELTA
	stationary: bool = False
	jobs: int = 1
	out: Optional[str] = None

	@field_validator('c', mode='before')
	@classmethod
	def _parse_c(cls, value):
		return parse_ratio(value)

	@field_validator('trials', 'jobs', 'payload_size')
	@classmethod
	def _at_least_one(cls, value: int) -> int:
		if value < 1:
			raise ValueError('must be at least 1')
		return value

	@field_validator('channel')
	@classmethod
	def _channel_parses(cls, value: str) -> str:
		return parse_channel(value).text

	@model_validator(mode='before')
	@classmethod
	def _default_k(cls, data):
		if isinstance(data, dict) and data.get('k') is None:
			data = {**data, 'k': constants.MEGA_K if data.get('code', 'mettle') == 'mettle' else constants.LT_K}
		return data

	@model_validator(mode='after')
	def _params_valid(self):
		if self.k < 1:
			raise ValueError('k must be at least 1')
		if self.code == 'mettle':
			self.code_params(0)
		else:
			self.lt_params(0)
		return self

	def code_params(self, trial: int) -> CodeParams:
		return CodeParams(c=self.c, w=self.w, l=self.l, seed=(self.seed + trial) % 2 ** 64,
		                  symbol_size=self.payload_size)

	def lt_params(self, trial: int) -> LtParams:
		return LtParams(k=self.k, soliton_c=self.soliton_c, soliton_delta=self.soliton_delta,
		                seed=(self.seed + trial) % 2 ** 64)

	def channel_spec(self) -> ChannelSpec:
		return parse_channel(self.channel)

	def fingerprint(self) -> str:
		"""Stable key over every field that changes a trial's outcome."""
		fields = [self.code, str(self.c), self.w, self.l, self.k, self.channel, self.payload_size,
		          self.soliton_c, self.soliton_delta, self.stationary, self.seed]
		return hashlib.sha256(repr(fields).encode()).hexdigest()[:16]


class ExperimentResult(BaseModel):
	model_config = ConfigDict(arbitrary_types_allowed=True)

	config: ExperimentConfig
	reports: list[TrialReport]
	failure_rate: float
	avg_latency: float
	p95_latency: float
	overhead_used: float
	error_floor_rate: float
	peel_ops_per_symbol: float
	decode_us_per_symbol: float

	def trial_rows(self) -> list[list]:
		return [
			[i] + [getattr(r, col) for col in constants.TRIAL_COLUMNS[1:]]
			for i, r in enumerate(self.reports)
		]

	def summary_row(self) -> list:
		cfg = self.config
		return [cfg.code, cfg.channel, str(cfg.c), cfg.w, cfg.l, cfg.k, len(self.reports), cfg.seed,
		        self.failure_rate, self.avg_latency, self.p95_latency, self.overhead_used,
		        self.error_floor_rate, self.peel_ops_per_symbol]


def summarize(cfg: ExperimentConfig, reports: list[TrialReport]) -> ExperimentResult:
	"""Aggregates that can all be recomputed from the per-trial rows."""
	n = len(reports)
	ok = [r for r in reports if r.success]
	with_latency = [r for r in ok if r.decoded > 0]
	decoded = sum(r.decoded for r in with_latency)
	balls = sum(r.total_balls for r in reports)
	cost_pool = ok or reports
	cost_balls = sum(r.total_balls for r in cost_pool)
	return ExperimentResult(
		config=cfg,
		reports=reports,
		failure_rate=(n - len(ok)) / n if n else math.nan,
		avg_latency=sum(r.avg_latency * r.decoded for r in with_latency) / decoded if decoded else math.nan,
		p95_latency=sum(r.p95_latency for r in with_latency) / len(with_latency) if with_latency else math.nan,
		overhead_used=sum(r.bins_sent for r in reports) / balls - 1 if balls else math.nan,
		error_floor_rate=sum(r.error_floor_balls for r in reports) / balls if balls else math.nan,
		peel_ops_per_symbol=sum(r.peel_ops for r in cost_pool) / cost_balls if cost_balls else math.nan,
		decode_us_per_symbol=1e6 * sum(r.decode_seconds for r in cost_pool) / cost_balls if cost_balls else math.nan,
	)


def _cell(value) -> str:
	if isinstance(value, float):
		return 'nan' if math.isnan(value) else f'{value:.6g}'
	return str(value)


def write_csv(path: Optional[str], columns: list[str], rows: Iterable[list]) -> None:
	f = sys.stdout if path is None else open(path, 'w', newline='', encoding='utf-8')
	try:
		writer = csv.writer(f)
		writer.writerow(columns)
		writer.writerows([_cell(v) for v in row] for row in rows)
	finally:
		if path is not None:
			f.close()


def summary_path(out: str) -> str:
	stem, dot, ext = out.rpartition('.')
	return f'{stem}.summary.{ext}' if dot else f'{out}.summary'


def write_result(result: ExperimentResult) -> None:
	out = result.config.out
	if out is not None:
		write_csv(out, constants.TRIAL_COLUMNS, result.trial_rows())
		write_csv(summary_path(out), constants.SUMMARY_COLUMNS, [result.summary_row()])
	else:
		write_csv(None, constants.SUMMARY_COLUMNS, [result.summary_row()])


def reference_note(channel: str, measured: float, column: int, label: str) -> str:
	ref = constants.REFERENCE_CHANNELS.get(channel)
	if ref is None or math.isnan(measured):
		return f'{label}: {measured:.4g}'
	expected = float(ref[column])
	return f'{label}: {measured:.4g} (reference {expected:.4g}, {100 * (measured / expected - 1):+.1f}%)'
