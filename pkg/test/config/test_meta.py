import pytest
from packaging.version import Version

from acdckit.config.meta import __TITLE__, __VERSION__, __DESCRIPTION__


@pytest.mark.unittest
class TestConfigMeta:
    def test_title(self):
        assert __TITLE__ == 'acdckit'

    def test_version(self):
        assert Version(__VERSION__).base_version == __VERSION__
        assert 'thresholding' in __DESCRIPTION__
