class CodecError(Exception):
	pass

class SequencingError(CodecError):
	pass


class PayloadSizeError(CodecError):
	pass


class StreamIncompleteError(CodecError):
	pass


class InstanceTooLargeError(CodecError):
	pass


class ChannelConfigError(CodecError):
	pass


class ConfigError(CodecError):
	pass
