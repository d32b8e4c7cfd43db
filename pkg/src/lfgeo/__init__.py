"""Exact geometry and simulation toolkit for local-friendliness analysis:
correlation polytopes (LHV, LF, NS), extended Wigner's-friend simulation,
classical causal models, and principle-implication reasoning."""

__version__ = "0.1.0"
