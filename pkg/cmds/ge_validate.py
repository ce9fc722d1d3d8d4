import math

import numpy as np
from pydantic import BaseModel

import constants
from codec.channels import ChannelSpec, GeChannel, bad_sojourns, ge_avg_rate, ge_rate_std_error
from codec.errors import ConfigError
from cmds.experiment import write_csv


class GeValidation(BaseModel):
	channel: str
	steps: int
	empirical_rate: float
	expected_rate: float
	relative_error: float
	std_error: float
	z_score: float
	mean_bad_sojourn: float
	expected_bad_sojourn: float
	within_tolerance: bool


def ge_validate(spec: ChannelSpec, steps: int = constants.GE_VALIDATE_STEPS, seed: int = 0,
                stationary: bool = True) -> GeValidation:
	if spec.ge is None:
		raise ConfigError(constants.GE_VALIDATE_NEEDS_GE)
	params = spec.ge
	erased, bad = GeChannel(params, seed, stationary).run(steps)
	empirical = float(erased.mean())
	expected = ge_avg_rate(params)
	relative = abs(empirical - expected) / expected if expected > 0 else abs(empirical)
	std_error = ge_rate_std_error(params, steps)
	sojourns = bad_sojourns(bad)
	return GeValidation(
		channel=spec.text,
		steps=steps,
		empirical_rate=empirical,
		expected_rate=expected,
		relative_error=relative,
		std_error=std_error,
		z_score=(empirical - expected) / std_error if std_error > 0 else 0.0,
		mean_bad_sojourn=float(np.mean(sojourns)) if len(sojourns) else math.nan,
		expected_bad_sojourn=1 / params.p_b2g if params.p_b2g > 0 else math.inf,
		within_tolerance=relative <= constants.GE_RELATIVE_TOLERANCE,
	)


def handle_ge_validate_command(spec: ChannelSpec, steps: int, seed: int, out=None, stationary: bool = True) -> str:
	v = ge_validate(spec, steps, seed, stationary)
	write_csv(out, constants.GE_COLUMNS, [[
		v.channel, v.steps, v.empirical_rate, v.expected_rate, v.relative_error, v.std_error, v.z_score,
		v.mean_bad_sojourn, v.expected_bad_sojourn, v.within_tolerance,
	]])
	return (f'{v.channel}: empirical {v.empirical_rate:.4%} vs closed form {v.expected_rate:.4%} '
	        f'({v.relative_error:.2%} relative, z={v.z_score:+.2f}); '
	        f'bad sojourn {v.mean_bad_sojourn:.2f} vs {v.expected_bad_sojourn:.2f}')
