import sys
from typing import BinaryIO, Optional

import constants
from codec.decoder import Decoder
from codec.params import CodeParams
from codec.report import TrialReport
from codec.wire import read_symbols


def decode_stream(src: BinaryIO, params: CodeParams, k: int) -> tuple[bytes, TrialReport]:
	"""Source bytes (undecoded symbols left as zeros) and the decoder's report.

	Index gaps between records are taken as erasures; the tail up to the
	stream end is drained the same way.
	"""
	size = params.symbol_size
	out = bytearray(k * size)
	decoder = Decoder(params, k)
	for sym in read_symbols(src):
		for position, payload, _ in decoder.push(sym):
			out[position * size:(position + 1) * size] = payload
	decoder.drain()
	return bytes(out), decoder.finalize_report(k)


def handle_decode_command(params: CodeParams, k: int, src: Optional[str], out: Optional[str],
                          length: Optional[int] = None) -> str:
	if src is None:
		data, report = decode_stream(sys.stdin.buffer, params, k)
	else:
		with open(src, 'rb') as f:
			data, report = decode_stream(f, params, k)
	if length is not None:
		data = data[:length]

	if out is None:
		sys.stdout.buffer.write(data)
		sys.stdout.buffer.flush()
	else:
		with open(out, 'wb') as f:
			f.write(data)

	missing = report.total_balls - report.decoded
	if missing:
		return constants.DECODE_MISSING.format(missing=missing, total=report.total_balls,
		                                       stalled=report.stalled_balls, error_floor=report.error_floor_balls)
	return f'all {k} source symbols decoded from {report.bins_received} records'
