"""Exception taxonomy for the engine.

Every failure raised by validation or reasoning carries a stable ``code``
string so the CLI can emit machine-readable diagnostics without matching on
exception class names.
"""

from __future__ import annotations


class CaseboundError(Exception):
    """Base class for all errors raised by this package."""

    code = "error"


# -- hierarchy validation ----------------------------------------------------

class HierarchyError(CaseboundError):
    code = "hierarchy"


class CycleError(HierarchyError):
    """The favoring structure is not well-founded (degrees would not exist)."""

    code = "cycle"


class ConflictingLinks(HierarchyError):
    """A factor and its opposite favor the same target, or one factor favors
    both sides of a concern."""

    code = "conflicting-links"


class DanglingFactor(HierarchyError):
    """A link or query names a factor that was never declared."""

    code = "dangling-factor"


class OrphanConcern(HierarchyError):
    """An intermediate pair that nothing favors on either side; its degree
    would be undefined."""

    code = "orphan-concern"


class NotAFavoredTarget(HierarchyError):
    """Favoring sets exist only for intermediate factors and outcomes."""

    code = "not-a-favored-target"


# -- rules and solutions -----------------------------------------------------

class RuleError(CaseboundError):
    code = "rule"


class EmptyAntecedent(RuleError):
    """Rules with empty antecedents would be unconditionally applicable."""

    code = "empty-antecedent"


class InadmissibleRule(RuleError):
    """The antecedent is not contained in the favoring set of the conclusion."""

    code = "inadmissible-rule"


class SolutionError(CaseboundError):
    code = "solution"


class UngroundedRule(SolutionError):
    """A rule whose antecedent is not covered by the base facts plus the
    other conclusions of the rule set."""

    code = "ungrounded-rule"


class MissingConcernRule(SolutionError):
    """A raised concern has no rule resolving it."""

    code = "missing-concern-rule"


class DuplicateConcernRule(SolutionError):
    """Two rules resolve the same concern."""

    code = "duplicate-concern-rule"


class ConflictingRules(DuplicateConcernRule):
    """Two rules conclude opposite sides of the same concern."""

    code = "conflicting-rules"


class NonBaseFact(CaseboundError):
    """A fact situation that must consist of base factors contains something
    else."""

    code = "nonbase-fact"


# -- opinions, cases, case bases ---------------------------------------------

class OpinionError(CaseboundError):
    code = "opinion"


class ChooserIncomplete(OpinionError):
    """The resolution policy offered no rule for a raised concern."""

    code = "chooser-incomplete"


class InadmissibleChoice(OpinionError):
    """The resolution policy offered a rule that is inadmissible, inapplicable
    at the current stage, or unrelated to the concern."""

    code = "inadmissible-choice"


class MissingTopDecision(OpinionError):
    """The opinion never resolves the outcome concern, so the case has no
    defined outcome."""

    code = "missing-top-decision"


class OutcomeMismatch(CaseboundError):
    """The recorded outcome disagrees with the outcome rule of the solution
    or opinion."""

    code = "outcome-mismatch"


class MixedHierarchy(CaseboundError):
    """A case base mixes cases that were not built against its hierarchy."""

    code = "mixed-hierarchy"


# -- classifier models ---------------------------------------------------------

class ModelError(CaseboundError):
    code = "model"


class DuplicateStateId(ModelError):
    code = "duplicate-state-id"


class UnknownStateId(ModelError):
    code = "unknown-state"


class UndecidedStateWithRules(ModelError):
    """Undecided states must carry an empty rule set."""

    code = "undecided-with-rules"


class Undecided(ModelError):
    """The operation requires a decided state."""

    code = "undecided"


class AlreadyDecided(ModelError):
    """The operation requires an undecided state."""

    code = "already-decided"


# -- reasoning over precedents -------------------------------------------------

class ReasoningError(CaseboundError):
    code = "reasoning"


class UndecidedPrecedent(ReasoningError):
    """Relevance is only defined for precedents decided on the concern."""

    code = "undecided-precedent"


class EmptyEstablishedSet(ReasoningError):
    """Conflict-free partitions of an empty established set are undefined."""

    code = "empty-established-set"


class AmbiguousVerdict(ReasoningError):
    """Solution synthesis requires an unambiguous top-level verdict."""

    code = "ambiguous-verdict"


# -- courts and time -----------------------------------------------------------

class AuthorityError(CaseboundError):
    code = "authority"


class MissingMetadata(AuthorityError):
    """Authority filtering needs court and timestamp metadata."""

    code = "missing-metadata"


class DuplicateTimestamp(AuthorityError):
    """Decided states must carry pairwise distinct timestamps."""

    code = "duplicate-timestamp"


class InvalidCourtOrder(AuthorityError):
    """The declared court order is not a strict partial order."""

    code = "court-order"


class UnknownOption(CaseboundError):
    """A courts block sets an option the engine does not know."""

    code = "unknown-option"


# -- oracle scale guards --------------------------------------------------------

class ScaleGuardExceeded(CaseboundError):
    """Brute-force enumeration would exceed the configured budget."""

    code = "scale-guard"


# -- DSL front-end ---------------------------------------------------------------

class DslError(CaseboundError):
    """Parse-level failure, located at a line and column of the source."""

    code = "dsl"

    def __init__(self, message: str, line: int = 0, column: int = 0):
        super().__init__(message)
        self.line = line
        self.column = column

    def located(self) -> str:
        return f"{self.line}:{self.column}: {self}"


class LexError(DslError):
    code = "lex"


class DslSyntaxError(DslError):
    code = "syntax"


class DuplicateDeclaration(DslError):
    code = "duplicate-declaration"


class UnknownReference(DslError):
    code = "unknown-reference"
