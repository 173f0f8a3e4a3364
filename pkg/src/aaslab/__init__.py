"""aaslab: exact decisions about finite group actions on surfaces.

Builds small finite groups as concrete multiplication structures, tests
the almost-all-signatures property with witnesses, and decides individual
branching signatures by exact counting, explicit construction, or
exhaustive search.
"""

from .aas import AasBounds, AasReport, classify, compute_bounds, is_aas
from .genvec import (
    DecisionOutcome,
    GeneratingVector,
    build_context,
    count_generating_tuples,
    count_tuples,
    decide,
    non_signature_set,
    search,
    verify,
)
from .group_core import (
    Group,
    GroupSpec,
    Subgroup,
    build_group,
    direct_product,
    parse_group_spec,
)
from .signatures import (
    AbbreviatedSignature,
    ExclusionReason,
    Signature,
    abbreviate,
    enumerate_potential_by_genus,
    exclusion_reason,
    is_potential,
    rh_genus,
)

__version__ = "0.1.0"

__all__ = [
    "AasBounds", "AasReport", "AbbreviatedSignature", "DecisionOutcome",
    "ExclusionReason", "GeneratingVector", "Group", "GroupSpec", "Signature",
    "Subgroup", "abbreviate", "build_context", "build_group", "classify",
    "compute_bounds", "count_generating_tuples", "count_tuples", "decide",
    "direct_product", "enumerate_potential_by_genus", "exclusion_reason",
    "is_aas", "is_potential", "non_signature_set", "parse_group_spec",
    "rh_genus", "search", "verify",
]
