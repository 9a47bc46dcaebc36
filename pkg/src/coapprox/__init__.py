"""Lazy coinductive structures evaluated by fuel-indexed finite approximation.

The package provides three lazy shapes — streams (`colist`), symbol tries
(`cotrie`), and binary choice trees (`cotree`) — together with an
approximation core (`order`) that evaluates functions on them as chains of
values over finite truncations.  Applications: an unbounded prime sieve,
a derivative-based extended-regex engine, and random-bit-model distribution
samplers with exact expectation bounds.
"""

import sys as _sys

# Forcing deeply layered lazy cells (e.g. the k-th prime sits under k nested
# filters) nests one interpreter call per layer.  The conservative default
# recursion limit cuts that off around 200 layers; 10k frames stays well
# inside the default 8 MiB C stack while leaving real headroom.
if _sys.getrecursionlimit() < 10_000:
    _sys.setrecursionlimit(10_000)

__version__ = "0.1.0"
