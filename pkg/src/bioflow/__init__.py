"""bioflow: multi-period LP planning for a national bio-energy supply chain."""

__version__ = "0.1.0"
