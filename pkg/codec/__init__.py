__all__ = ['channels', 'decoder', 'edges', 'encoder', 'errors', 'gf2', 'keyed', 'lt', 'params', 'report', 'wire']
