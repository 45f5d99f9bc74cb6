# Core package
from .lattice import (
    LatticePoint,
    Direction,
    BiasParams,
    directions,
    first_visit_distribution,
    uniform_step_distribution,
    cumulative_masses,
    sample_direction,
)
from .rng import RngStream

__all__ = [
    'LatticePoint', 'Direction', 'BiasParams', 'directions',
    'first_visit_distribution', 'uniform_step_distribution',
    'cumulative_masses', 'sample_direction', 'RngStream',
]
