from .config.meta import __VERSION__ as __version__
