__all__ = ['bench', 'decode', 'efficiency', 'encode', 'errorfloor', 'experiment', 'ge_validate', 'latency', 'trials']
