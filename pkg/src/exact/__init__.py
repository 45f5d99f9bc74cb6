from .slit_counts import slit_walk_counts, enumerate_slit_walks, count_ratio, exact_table
from .mass_grid import MassGrid, TanBracket, exact_tan_probability, slit_hitting_bracket, tan_bracket_table

__all__ = [
    'slit_walk_counts', 'enumerate_slit_walks', 'count_ratio', 'exact_table',
    'MassGrid', 'TanBracket', 'exact_tan_probability', 'slit_hitting_bracket',
    'tan_bracket_table',
]
