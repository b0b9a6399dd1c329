"""Hot numeric loops: compiled extension when available, numpy fallback otherwise.

Set ``ORBITSIEVE_KERNEL=python`` to force the fallback; ``BACKEND`` reports
which implementation is live.  Both backends expose the same four entry
points with identical contracts.
"""

import os

from . import _pykern

if os.environ.get("ORBITSIEVE_KERNEL", "").lower() == "python":
    _impl = _pykern
    BACKEND = "python"
else:
    try:
        from . import _ckern as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        _impl = _pykern
        BACKEND = "python"

sieve_mu_lambda = _impl.sieve_mu_lambda
weighted_partial_sums = _impl.weighted_partial_sums
sl2_orbit_heights = _impl.sl2_orbit_heights
heis_orbit_coords = _impl.heis_orbit_coords

__all__ = [
    "BACKEND",
    "sieve_mu_lambda",
    "weighted_partial_sums",
    "sl2_orbit_heights",
    "heis_orbit_coords",
]
