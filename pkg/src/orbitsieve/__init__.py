"""orbitsieve: sieve tables, unipotent orbits on model homogeneous spaces,
and the prime-pair correlation experiments that probe their disjointness
from the Möbius function at desk scale.
"""

from ._kernels import BACKEND as KERNEL_BACKEND
from .arith import MobiusTable, chowla_sum, mertens, primes_below, sieve
from .criterion import BoundedSequence, CriterionReport, pair_matrix, verdict
from .correlator import (
    CorrelationSeries,
    birkhoff,
    convergence_diagnostic,
    mobius_correlation,
    pair_correlation,
    pq_sweep,
)
from .dynsys import (
    HeisenbergPoint,
    Observable,
    SL2Point,
    SystemSpec,
    TorusPoint,
    heisenberg_system,
    observe,
    product_system,
    sl2_system,
    step,
    torus_system,
)
from .harmonic import (
    DecayEnvelope,
    FourierSpectrum,
    decay_fit,
    green_ergodicity,
    pq_coefficient_bound,
    torus_fourier,
    vertical_project,
)

__version__ = "0.1.0"

__all__ = [
    "KERNEL_BACKEND",
    "MobiusTable",
    "sieve",
    "mertens",
    "primes_below",
    "chowla_sum",
    "BoundedSequence",
    "CriterionReport",
    "pair_matrix",
    "verdict",
    "CorrelationSeries",
    "birkhoff",
    "mobius_correlation",
    "pair_correlation",
    "pq_sweep",
    "convergence_diagnostic",
    "TorusPoint",
    "HeisenbergPoint",
    "SL2Point",
    "SystemSpec",
    "Observable",
    "torus_system",
    "heisenberg_system",
    "sl2_system",
    "product_system",
    "step",
    "observe",
    "FourierSpectrum",
    "DecayEnvelope",
    "torus_fourier",
    "decay_fit",
    "pq_coefficient_bound",
    "vertical_project",
    "green_ergodicity",
    "__version__",
]
