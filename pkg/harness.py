import argparse
import sys
from typing import Callable, Optional

from dotenv import dotenv_values
from pydantic import ValidationError
from sqlitedict import SqliteDict

import constants
from cmds import *
from cmds.experiment import ExperimentConfig
from codec.channels import parse_channel
from codec.errors import CodecError, ConfigError
from codec.params import CodeParams
from codec.report import TrialReport


class ResultStore:
	def __init__(self, db_name: str):
		self.db = SqliteDict(db_name, autocommit=True)

	def get_trial(self, fingerprint: str, trial: int) -> Optional[TrialReport]:
		raw = self.db.get(f'{fingerprint}/{trial}')
		return None if raw is None else TrialReport.model_validate(raw)

	def store_trial(self, fingerprint: str, trial: int, report: TrialReport) -> None:
		self.db[f'{fingerprint}/{trial}'] = report.without_latencies().model_dump()

	def close(self):
		self.db.close()


class CommandHandler:
	def __init__(self, store: Optional[ResultStore] = None):
		self.store = store
		self.commands: dict[str, Callable[[argparse.Namespace], str]] = {
			'latency': lambda a: latency.handle_latency_command(self._config(a, constants.DEFAULT_TRIALS), self.store),
			'efficiency': lambda a: efficiency.handle_efficiency_command(
				self._config(a, constants.SEARCH_TRIALS), a.target, a.trials or constants.SEARCH_TRIALS, self.store),
			'errorfloor': lambda a: errorfloor.handle_errorfloor_command(self._config(a, 1), a.balls),
			'bench': lambda a: bench.handle_bench_command(self._config(a, constants.DEFAULT_TRIALS)),
			'ge-validate': lambda a: ge_validate.handle_ge_validate_command(
				parse_channel(a.channel or 'ge1'), a.steps, a.seed or 0, a.out, a.stationary is not False),
			'encode': lambda a: self._handle_encode(a),
			'decode': lambda a: self._handle_decode(a),
			'help': lambda a: constants.HELP_TEXT,
		}

	def handle_command(self, args: argparse.Namespace) -> str:
		handler = self.commands.get(args.command)
		if handler is None:
			return constants.UNKNOWN_COMMAND.format(cmd=args.command, available=', '.join(self.commands))
		return handler(args)

	def _config(self, args: argparse.Namespace, trials: int) -> ExperimentConfig:
		fields = {
			name: value for name, value in vars(args).items()
			if name in ExperimentConfig.model_fields and value is not None
		}
		fields.setdefault('trials', trials)
		return ExperimentConfig(**fields)

	def _code_params(self, args: argparse.Namespace) -> CodeParams:
		fields = {'c': args.c, 'w': args.w, 'l': args.l, 'seed': args.seed, 'symbol_size': args.payload_size}
		return CodeParams(**{name: value for name, value in fields.items() if value is not None})

	def _handle_encode(self, args: argparse.Namespace) -> str:
		channel = parse_channel(args.channel) if args.channel else None
		return encode.handle_encode_command(self._code_params(args), args.input, args.out, channel)

	def _handle_decode(self, args: argparse.Namespace) -> str:
		if args.k is None:
			raise ConfigError(constants.DECODE_NEEDS_K)
		return decode.handle_decode_command(self._code_params(args), args.k, args.input, args.out, args.length)


def build_parser() -> argparse.ArgumentParser:
	parser = argparse.ArgumentParser(
		prog='harness', description='Streaming erasure code experiments.',
		epilog=constants.HELP_TEXT, formatter_class=argparse.RawDescriptionHelpFormatter)
	parser.add_argument('command', help='one of the commands listed below')
	parser.add_argument('--config', help='flat key=value file; flags given on the command line win')
	parser.add_argument('--code', choices=['mettle', 'lt'])
	parser.add_argument('--c', help='overhead ratio as p/q, a decimal or a percentage')
	parser.add_argument('--w', type=int)
	parser.add_argument('--l', type=int)
	parser.add_argument('--k', type=int)
	parser.add_argument('--trials', type=int)
	parser.add_argument('--seed', type=int)
	parser.add_argument('--channel', help='bec:<epsilon>, ge:<p_g2b>,<p_b2g>,<eps_g>,<eps_b> or ge1..ge5')
	parser.add_argument('--payload-size', type=int)
	parser.add_argument('--soliton-c', type=float)
	parser.add_argument('--soliton-delta', type=float)
	parser.add_argument('--stationary', action='store_true', default=None,
	                    help='start Gilbert-Elliott channels in their stationary distribution')
	parser.add_argument('--jobs', type=int)
	parser.add_argument('--out', help='CSV or output file; stdout when omitted')
	parser.add_argument('--db', help='sqlite file caching per-trial reports')
	parser.add_argument('--target', type=float, default=constants.TARGET_FAILURE)
	parser.add_argument('--balls', type=int, default=constants.ERRORFLOOR_BALLS)
	parser.add_argument('--steps', type=int, default=constants.GE_VALIDATE_STEPS)
	parser.add_argument('--input', help='input file for encode/decode; stdin when omitted')
	parser.add_argument('--length', type=int, help='truncate decoded output to this many bytes')
	return parser


def load_config_defaults(parser: argparse.ArgumentParser, path: str) -> None:
	known = set(vars(parser.parse_args(['help'])))
	defaults = {}
	for key, value in dotenv_values(path).items():
		dest = key.strip().lower().replace('-', '_')
		if dest not in known or dest in ('command', 'config', 'help'):
			raise ConfigError(constants.UNKNOWN_CONFIG_KEY.format(key=key))
		if dest == 'stationary':
			flag = (value or '').strip().lower()
			if flag not in ('1', 'true', 'yes', '0', 'false', 'no'):
				raise ConfigError(constants.BAD_FLAG_VALUE.format(key=key, value=value))
			defaults[dest] = flag in ('1', 'true', 'yes')
		else:
			# string defaults go through each flag's type conversion
			defaults[dest] = value
	parser.set_defaults(**defaults)


def parse_args(argv: Optional[list[str]] = None) -> argparse.Namespace:
	parser = build_parser()
	pre = argparse.ArgumentParser(add_help=False)
	pre.add_argument('--config')
	known, _ = pre.parse_known_args(argv)
	if known.config:
		load_config_defaults(parser, known.config)
	return parser.parse_args(argv)


def main(argv: Optional[list[str]] = None) -> int:
	store = None
	try:
		args = parse_args(argv)
		store = ResultStore(args.db) if args.db else None
		message = CommandHandler(store).handle_command(args)
	except (CodecError, ValidationError, OSError, EOFError) as e:
		print(e, file=sys.stderr)
		return 2
	finally:
		if store is not None:
			store.close()
	if message:
		print(message, file=sys.stderr)
	return 0


if __name__ == '__main__':
	sys.exit(main())
