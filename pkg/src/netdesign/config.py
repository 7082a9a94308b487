"""Runtime limits."""

import os

DEFAULT_MAX_N = 20
MAX_N_ENV = "NETDESIGN_MAX_N"


def exhaustive_limit() -> int:
    """Largest vertex count for which full cut enumeration is permitted.

    Enumeration walks all 2^(n-1) - 1 vertex bipartitions, so this is a hard
    guard rather than a tuning knob.  Override with NETDESIGN_MAX_N.
    """
    raw = os.environ.get(MAX_N_ENV)
    if raw is None:
        return DEFAULT_MAX_N
    return int(raw)
