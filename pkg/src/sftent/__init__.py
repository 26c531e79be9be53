"""Entropy bounds for multidimensional shifts of finite type, substitution
systems, and a desk-scale pipeline realizing target densities and entropies."""

__version__ = "0.1.0"

from .core import (  # noqa: F401
    Alphabet,
    BlockMap,
    BudgetExceeded,
    Pattern,
    Shape,
    SFTError,
    Syntax,
    apply_block_map,
    builtin,
    full_shift,
    golden_mean,
    hard_squares,
    is_locally_admissible,
    lift_dimension,
    load_syntax,
    product,
    recode_one_step,
)
from .counting import (  # noqa: F401
    count_rect,
    enumerate_locally_admissible,
    sofic_image_count,
    spectral_entropy_1d,
    upper_entropy_terms,
)
from .numerics import Interval  # noqa: F401
