"""Canonical embedded resolution of quasi-ordinary surface singularities.

The resolution of a quasi-ordinary surface germ depends only on its
characteristic exponent pairs, so it can be executed symbolically: this
package computes the canonical sequence of blow-up centers, the per-chart
desingularization invariant, and the full chart tree with exact rational
arithmetic, and cross-validates every transition against literal polynomial
substitution for binomial surfaces.
"""

from .divisors import (
    Divisor,
    DivisorConfig,
    Kind,
    is_general_configuration,
    order_divisor_subsets,
    transform_divisors,
)
from .driver import (
    Center,
    ChartState,
    ResolutionTree,
    blow_up_chart,
    format_trace,
    initial_state,
    is_resolved,
    relevant_charts,
    resolve,
    select_center,
)
from .invariant import (
    INF,
    Invariant,
    WeightedMonomial,
    build_coefficient_collection,
    compare_invariants,
    compute_invariant,
    invariant_of,
    partition_ages,
)
from .oracle import (
    BinomialSurface,
    cross_validate,
    oracle_blow_up,
    oracle_discriminant_check,
    oracle_pairs,
)
from .pairs import (
    CharPair,
    GhostMonomial,
    Move,
    PairList,
    Shape,
    classify,
    drop_integral_first,
    is_normalized,
    multiplicity,
    normalize,
    pair,
    pair_list,
    transform_pairs,
    validate_pairs,
)

__version__ = "0.1.0"
