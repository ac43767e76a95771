"""Greedy weighted lobbying, Dodgson heuristics and junta distributions.

Every approximation or frequency guarantee implemented here is paired with
an exact oracle so that the guarantee can be checked on concrete inputs.
"""

__version__ = "0.1.0"
