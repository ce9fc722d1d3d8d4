import sys
from typing import BinaryIO, Iterator, Optional

from codec.channels import ChannelSpec, ErasedBin, apply_channel
from codec.encoder import Encoder
from codec.params import CodeParams
from codec.wire import write_symbols


def split_payloads(data: bytes, symbol_size: int) -> Iterator[bytes]:
	for start in range(0, len(data), symbol_size):
		chunk = data[start:start + symbol_size]
		yield chunk.ljust(symbol_size, b'\0')


def encode_bytes(data: bytes, params: CodeParams, dst: BinaryIO,
                 channel: Optional[ChannelSpec] = None, channel_seed: int = 0) -> tuple[int, int, int]:
	"""Encode data onto dst as wire records; returns (source symbols, bins sent, bins written)."""
	encoder = Encoder(params)
	sent = 0

	def counted():
		nonlocal sent
		for sym in encoder.encode_stream(split_payloads(data, params.symbol_size)):
			sent += 1
			yield sym

	symbols = counted()
	if channel is not None:
		live = channel.build(channel_seed)
		symbols = (s for s in apply_channel(symbols, live) if not isinstance(s, ErasedBin))
	written = write_symbols(dst, symbols)
	return encoder.next_ball, sent, written


def handle_encode_command(params: CodeParams, src: Optional[str], out: Optional[str],
                          channel: Optional[ChannelSpec] = None) -> str:
	if src is None:
		data = sys.stdin.buffer.read()
	else:
		with open(src, 'rb') as f:
			data = f.read()

	if out is None:
		k, sent, written = encode_bytes(data, params, sys.stdout.buffer, channel, params.seed)
		sys.stdout.buffer.flush()
	else:
		with open(out, 'wb') as f:
			k, sent, written = encode_bytes(data, params, f, channel, params.seed)

	return (f'{k} source symbols, {written} of {sent} records written; '
	        f'decode with --k {k} --length {len(data)}')
