"""Precedential-constraint reasoning over factor hierarchies.

Validate factor hierarchies and case bases, check priority-ordering
consistency, compute which precedents constrain a new case concern by
concern, derive the forced verdict and the admissible rule sets for it, and
resolve precedent conflicts through court hierarchy and time.
"""

from .authority import (
    CourtSystem,
    StatusEntry,
    binding_without_exceptions,
    decide_with_authority,
    precedent_statuses,
    status,
)
from .casebase import (
    Case,
    CaseBase,
    ConsistencyReport,
    Decision,
    InconsistencyWitness,
    Opinion,
    PriorityFact,
    PriorityOrdering,
    build_opinion,
    consistent,
    merge,
    priority_orderings,
    replay_chooser,
)
from .classifier import (
    UNDECIDED,
    ClassifierModel,
    State,
    case_from_state,
    casebase_from_model,
    validate_model,
)
from .dsl import LoadedModel, ModelDocument, document_of, load_model, parse, serialize
from .hierarchy import (
    Concern,
    FOR_DEFENDANT,
    FOR_PLAINTIFF,
    Hierarchy,
    concern_of,
    opposite,
    validate_hierarchy,
)
from .reasoning import (
    AMBIGUOUS,
    DecisionTrace,
    NONE_POSSIBLE,
    StateView,
    UNAMBIGUOUS,
    classify_ambiguity,
    conflict_equivalence_check,
    conflict_free_partitions,
    decide,
    negligible,
    relevance,
    synthesize_solutions,
)
from .rules import (
    Rule,
    Solution,
    is_admissible,
    is_applicable,
    is_minimal_for,
    is_obtainable,
    related_concern,
    validate_solution,
)

__version__ = "0.1.0"

__all__ = [
    "AMBIGUOUS",
    "Case",
    "CaseBase",
    "ClassifierModel",
    "Concern",
    "ConsistencyReport",
    "CourtSystem",
    "Decision",
    "DecisionTrace",
    "FOR_DEFENDANT",
    "FOR_PLAINTIFF",
    "Hierarchy",
    "InconsistencyWitness",
    "LoadedModel",
    "ModelDocument",
    "NONE_POSSIBLE",
    "Opinion",
    "PriorityFact",
    "PriorityOrdering",
    "Rule",
    "Solution",
    "State",
    "StateView",
    "StatusEntry",
    "UNAMBIGUOUS",
    "UNDECIDED",
    "binding_without_exceptions",
    "build_opinion",
    "case_from_state",
    "casebase_from_model",
    "classify_ambiguity",
    "concern_of",
    "conflict_equivalence_check",
    "conflict_free_partitions",
    "consistent",
    "decide",
    "decide_with_authority",
    "document_of",
    "is_admissible",
    "is_applicable",
    "is_minimal_for",
    "is_obtainable",
    "load_model",
    "merge",
    "negligible",
    "opposite",
    "parse",
    "precedent_statuses",
    "priority_orderings",
    "related_concern",
    "relevance",
    "replay_chooser",
    "serialize",
    "status",
    "synthesize_solutions",
    "validate_hierarchy",
    "validate_model",
    "validate_solution",
]
