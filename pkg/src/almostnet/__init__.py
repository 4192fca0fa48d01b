"""Almost nets in base q built from translates of polynomial fibers."""

__version__ = "0.1.0"
