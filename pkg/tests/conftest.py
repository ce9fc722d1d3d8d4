import pytest

from codec.params import CodeParams


def pytest_addoption(parser):
	parser.addoption('--nightly', action='store_true', default=False,
	                 help='run the full-size reproduction suite')


def pytest_collection_modifyitems(config, items):
	if config.getoption('--nightly'):
		return
	skip = pytest.mark.skip(reason='needs --nightly')
	for item in items:
		if 'nightly' in item.keywords:
			item.add_marker(skip)


@pytest.fixture
def small_params():
	return CodeParams(c='1/2', w=3, l=3, seed=7, symbol_size=8)
