"""Alpha-undominated committees and Condorcet winning sets for ranked elections."""

from .core import (Committee, CommitteeDistribution, Election, Ordering, as_threshold,
                   compare_committees, condorcet_dimension, dominator_count,
                   is_alpha_undominated, max_domination, prefers, rank_candidate,
                   rank_committee, stability_constant)
from .errors import BudgetExceeded, InputError, NotConverged, ProfileError, SamplingExhausted

__all__ = [
    "BudgetExceeded", "Committee", "CommitteeDistribution", "Election", "InputError",
    "NotConverged", "Ordering", "ProfileError", "SamplingExhausted", "as_threshold",
    "compare_committees", "condorcet_dimension", "dominator_count", "is_alpha_undominated",
    "max_domination", "prefers", "rank_candidate", "rank_committee", "stability_constant",
]
__version__ = "0.1.0"
