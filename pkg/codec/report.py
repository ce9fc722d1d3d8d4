import math

import numpy as np
from pydantic import BaseModel, model_validator


def latency_stats(latencies: list[float]) -> tuple[float, float]:
	"""(mean, 95th percentile); NaN for an empty list."""
	if not latencies:
		return math.nan, math.nan
	values = np.asarray(latencies, dtype=np.float64)
	return float(values.mean()), float(np.percentile(values, 95))


class TrialReport(BaseModel):
	total_balls: int
	decoded: int
	error_floor_balls: int
	stalled_balls: int
	stall_occurred: bool
	latencies: list[float] = []
	avg_latency: float = math.nan
	p95_latency: float = math.nan
	bins_sent: int = 0
	bins_received: int = 0
	peel_ops: int = 0
	decode_seconds: float = 0.0

	@model_validator(mode='after')
	def _balls_add_up(self):
		if self.decoded + self.error_floor_balls + self.stalled_balls != self.total_balls:
			raise ValueError('decoded, error-floor and stalled balls must sum to total_balls')
		if self.stall_occurred != (self.stalled_balls > 0):
			raise ValueError('stall_occurred must match stalled_balls > 0')
		return self

	@property
	def success(self) -> bool:
		return not self.stall_occurred

	def without_latencies(self) -> 'TrialReport':
		return self.model_copy(update={'latencies': []})
