from fractions import Fraction
from typing import Any

from pydantic import BaseModel, ConfigDict, field_validator, model_validator

import constants
from codec.errors import ConfigError


def parse_ratio(value: Any) -> Fraction:
	"""Turn "p/q", "0.055", "5.5%", an int or a Fraction into an exact Fraction."""
	if isinstance(value, Fraction):
		return value
	if isinstance(value, int):
		return Fraction(value)
	if isinstance(value, float):
		# floats only reach here from code, never from the CLI
		return Fraction(str(value))
	text = str(value).strip()
	try:
		if text.endswith('%'):
			return Fraction(text[:-1].strip()) / 100
		return Fraction(text)
	except (ValueError, ZeroDivisionError):
		raise ConfigError(constants.BAD_RATIO.format(value=value))


class CodeParams(BaseModel):
	model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

	c: Fraction = constants.DEFAULT_C
	w: int = constants.DEFAULT_W
	l: int = constants.DEFAULT_L
	seed: int = constants.DEFAULT_SEED
	symbol_size: int = constants.DEFAULT_SYMBOL_SIZE

	@field_validator('c', mode='before')
	@classmethod
	def _parse_c(cls, value):
		return parse_ratio(value)

	@field_validator('c')
	@classmethod
	def _positive_c(cls, value: Fraction) -> Fraction:
		if value <= 0:
			raise ValueError('overhead ratio c must be positive')
		return value

	@field_validator('w', 'symbol_size')
	@classmethod
	def _positive(cls, value: int) -> int:
		if value < 1:
			raise ValueError('must be a positive integer')
		return value

	@field_validator('seed')
	@classmethod
	def _seed_range(cls, value: int) -> int:
		if not 0 <= value < 2 ** 64:
			raise ValueError('seed must fit in 64 unsigned bits')
		return value

	@model_validator(mode='after')
	def _window_fits_edges(self):
		if not 2 <= self.l <= constants.MAX_L:
			raise ValueError(f'l must lie in [2, {constants.MAX_L}]')
		# the window must hold l distinct bins
		if self.window_bins + 1 < self.l:
			raise ValueError('coupling window too small for l distinct bins')
		return self

	@property
	def rate_num(self) -> int:
		return self.c.numerator + self.c.denominator

	@property
	def rate_den(self) -> int:
		return self.c.denominator

	@property
	def window_bins(self) -> int:
		"""floor((1+c)w), the trial count of every MET binomial."""
		return self.scale(self.w)

	def scale(self, x: int) -> int:
		return (x * self.rate_num) // self.rate_den

	def bins_for(self, balls: int) -> int:
		"""ceil((1+c)k), coded symbols a block code sends for k sources."""
		return -((-balls * self.rate_num) // self.rate_den)
