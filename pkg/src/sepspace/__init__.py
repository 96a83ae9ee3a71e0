"""Space-bounded reachability through balanced separators."""

__version__ = "0.1.0"
