import struct
from typing import BinaryIO, Iterable, Iterator

from codec.encoder import CodedSymbol

# little-endian u64 bin index, u32 payload length
HEADER = struct.Struct('<QI')


def pack_symbol(sym: CodedSymbol) -> bytes:
	return HEADER.pack(sym.bin_index, len(sym.payload)) + sym.payload


def write_symbols(fp: BinaryIO, symbols: Iterable[CodedSymbol]) -> int:
	count = 0
	for sym in symbols:
		fp.write(pack_symbol(sym))
		count += 1
	return count


def read_symbols(fp: BinaryIO) -> Iterator[CodedSymbol]:
	while True:
		header = fp.read(HEADER.size)
		if not header:
			return
		if len(header) < HEADER.size:
			raise EOFError('truncated record header')
		bin_index, length = HEADER.unpack(header)
		payload = fp.read(length)
		if len(payload) < length:
			raise EOFError(f'truncated payload for bin {bin_index}')
		yield CodedSymbol(bin_index, payload)
