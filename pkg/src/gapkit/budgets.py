"""Enumeration caps.

Every exhaustive loop in the package refuses to start when its input would
make the loop astronomically large.  Caps are expressed in the natural unit
of each loop (lattice rank, variable count, gadget dimension).  Setting the
environment variable GAPKIT_BUDGET to an integer overrides all of these
exponent-style caps at once; the gadget-search work cap is a plain count
and is only adjustable per call.
"""

from __future__ import annotations

import os

LATTICE_ORACLE_RANK_CAP = 26
SAT_ORACLE_VAR_CAP = 26
MITM_RANK_CAP = 30
GADGET_DIM_CAP = 12

# assignments^2 * pair evaluations for exhaustive gadget search
GADGET_SEARCH_WORK_CAP = 1 << 25

_ENV_VAR = "GAPKIT_BUDGET"


def cap(default: int, override: int | None = None) -> int:
    """Resolve a cap: explicit override, then GAPKIT_BUDGET, then default."""
    if override is not None:
        return override
    raw = os.environ.get(_ENV_VAR)
    if raw:
        return int(raw)
    return default
