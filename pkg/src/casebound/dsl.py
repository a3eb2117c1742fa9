"""The declarative model format.

One document describes one experiment: a factor hierarchy, optionally a
court system, and any number of decided states and undecided queries.

::

    # dsl-version: 1
    hierarchy {
      base f1 f2 f3 f4 f5 f6;
      intermediate p q r;
      link f1 -> p;
      link r' -> 0;
    }
    courts {
      order k0 > k1;
      order k1 > k2;
      selfbound k2;
      option strict-incuriam = true;
    }
    state s1 court k1 time 1 outcome 1 {
      facts f2 f3 f4 f5;
      rule {f2} -> p;
    }
    query s3 {
      facts f1 f2 f3;
    }

Line comments start with ``#``.  Declaring ``intermediate p`` introduces both
``p`` and its opposite ``p'``; the apostrophe is valid only as that negation
suffix.  A query is a state with no outcome and no rules.  ``serialize``
emits the canonical form (declarations sorted by id, one statement per line,
two-space indent), and ``parse`` of canonical text reproduces the document,
so canonical text is a fixpoint.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple, Union

from .authority import CourtSystem
from .classifier import ClassifierModel, State, UNDECIDED
from .errors import (
    DslSyntaxError,
    DuplicateDeclaration,
    LexError,
    UnknownOption,
    UnknownReference,
)
from .hierarchy import Hierarchy
from .rules import Rule, rule_sort_key

KEYWORDS = frozenset(
    "hierarchy courts state query base intermediate link order selfbound "
    "option outcome facts rule court time".split()
)

DSL_VERSION = 1


# -- document structure ------------------------------------------------------

@dataclass(frozen=True)
class HierarchyBlock:
    bases: Tuple[str, ...]
    intermediates: Tuple[str, ...]
    links: Tuple[Tuple[str, str], ...]


@dataclass(frozen=True)
class CourtsBlock:
    orders: Tuple[Tuple[str, str], ...]
    selfbound: Tuple[str, ...]
    options: Tuple[Tuple[str, str], ...]


@dataclass(frozen=True)
class RuleDecl:
    antecedent: Tuple[str, ...]
    conclusion: str


@dataclass(frozen=True)
class StateBlock:
    id: str
    outcome: str
    facts: Tuple[str, ...]
    rules: Tuple[RuleDecl, ...]
    court: Optional[str] = None
    time: Optional[int] = None
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class QueryBlock:
    id: str
    facts: Tuple[str, ...]
    court: Optional[str] = None
    time: Optional[int] = None
    line: int = field(default=0, compare=False)


Block = Union[StateBlock, QueryBlock]


@dataclass(frozen=True)
class ModelDocument:
    hierarchy: HierarchyBlock
    courts: Optional[CourtsBlock]
    blocks: Tuple[Block, ...]


# -- lexer ----------------------------------------------------------------------

@dataclass(frozen=True)
class Token:
    kind: str  # ident, int, punct, eof
    value: str
    line: int
    column: int

    def __str__(self) -> str:
        return "end of input" if self.kind == "eof" else repr(self.value)


_PUNCT = {"{", "}", ";", ",", ">", "=", "-", "->", "?"}


def _lex(text: str) -> List[Token]:
    tokens: List[Token] = []
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        start_col = col
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            if j < n and text[j] == "'":
                j += 1
            tokens.append(Token("ident", text[i:j], line, start_col))
            col += j - i
            i = j
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(Token("int", text[i:j], line, start_col))
            col += j - i
            i = j
            continue
        if ch == "-" and i + 1 < n and text[i + 1] == ">":
            tokens.append(Token("punct", "->", line, start_col))
            i += 2
            col += 2
            continue
        if ch in _PUNCT:
            tokens.append(Token("punct", ch, line, start_col))
            i += 1
            col += 1
            continue
        raise LexError(f"unexpected character {ch!r}", line, start_col)
    tokens.append(Token("eof", "", line, col))
    return tokens


# -- parser ----------------------------------------------------------------------

class _Parser:
    def __init__(self, tokens: List[Token]):
        self.tokens = tokens
        self.pos = 0

    @property
    def here(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        token = self.here
        self.pos += 1
        return token

    def fail(self, *expected: str):
        token = self.here
        wanted = " or ".join(expected)
        raise DslSyntaxError(
            f"expected {wanted}, found {token}", token.line, token.column
        )

    def eat_punct(self, value: str) -> Token:
        if self.here.kind == "punct" and self.here.value == value:
            return self.advance()
        self.fail(repr(value))

    def eat_keyword(self, word: str) -> Token:
        if self.here.kind == "ident" and self.here.value == word:
            return self.advance()
        self.fail(repr(word))

    def at_keyword(self, word: str) -> bool:
        return self.here.kind == "ident" and self.here.value == word

    def eat_name(self, what: str) -> Token:
        token = self.here
        if token.kind != "ident":
            self.fail(what)
        if token.value in KEYWORDS:
            raise DslSyntaxError(
                f"{token.value!r} is a keyword and cannot name a {what}",
                token.line,
                token.column,
            )
        if token.value.endswith("'"):
            raise DslSyntaxError(
                f"{what} {token.value!r} cannot carry the negation suffix",
                token.line,
                token.column,
            )
        return self.advance()

    def eat_factor(self, declared: Set[str], allow_outcome: bool) -> Token:
        token = self.here
        if token.kind == "int" and allow_outcome:
            if token.value in ("0", "1"):
                return self.advance()
            self.fail("'0'", "'1'")
        if token.kind != "ident" or token.value in KEYWORDS:
            self.fail("a factor name")
        if token.value not in declared:
            raise UnknownReference(
                f"factor {token.value!r} was never declared", token.line, token.column
            )
        return self.advance()


def parse(text: str) -> ModelDocument:
    """Parse a document, checking declarations and references."""
    parser = _Parser(_lex(text))
    hierarchy = _parse_hierarchy(parser)

    declared: Set[str] = set(hierarchy.bases)
    for name in hierarchy.intermediates:
        declared.add(name)
        declared.add(name + "'")

    courts = None
    if parser.at_keyword("courts"):
        courts = _parse_courts(parser)
    court_names: Optional[Set[str]] = None
    if courts is not None:
        court_names = {c for pair in courts.orders for c in pair}
        court_names |= set(courts.selfbound)

    blocks: List[Block] = []
    ids: Dict[str, int] = {}
    while not parser.here.kind == "eof":
        if parser.at_keyword("state"):
            block = _parse_state(parser, declared, court_names)
        elif parser.at_keyword("query"):
            block = _parse_query(parser, declared, court_names)
        else:
            parser.fail("'state'", "'query'")
        if block.id in ids:
            raise DuplicateDeclaration(
                f"id {block.id!r} already names a block", block.line, 1
            )
        ids[block.id] = 1
        blocks.append(block)
    return ModelDocument(hierarchy=hierarchy, courts=courts, blocks=tuple(blocks))


def _parse_hierarchy(p: _Parser) -> HierarchyBlock:
    p.eat_keyword("hierarchy")
    p.eat_punct("{")
    bases: List[str] = []
    seen: Set[str] = set()

    def declare(token: Token) -> str:
        if token.value in seen:
            raise DuplicateDeclaration(
                f"factor {token.value!r} declared twice", token.line, token.column
            )
        seen.add(token.value)
        return token.value

    if not p.at_keyword("base"):
        p.fail("'base'")
    while p.at_keyword("base"):
        p.advance()
        group = [declare(p.eat_name("base factor"))]
        while p.here.kind == "ident" and p.here.value not in KEYWORDS:
            group.append(declare(p.eat_name("base factor")))
        p.eat_punct(";")
        bases.extend(group)

    intermediates: List[str] = []
    if p.at_keyword("intermediate"):
        p.advance()
        intermediates.append(declare(p.eat_name("intermediate factor")))
        while p.here.kind == "ident" and p.here.value not in KEYWORDS:
            intermediates.append(declare(p.eat_name("intermediate factor")))
        p.eat_punct(";")

    declared = set(bases)
    for name in intermediates:
        declared.add(name)
        declared.add(name + "'")

    links: List[Tuple[str, str]] = []
    while p.at_keyword("link"):
        p.advance()
        source = p.eat_factor(declared, allow_outcome=False)
        p.eat_punct("->")
        target = p.eat_factor(declared, allow_outcome=True)
        p.eat_punct(";")
        links.append((source.value, target.value))
    p.eat_punct("}")
    return HierarchyBlock(
        bases=tuple(bases), intermediates=tuple(intermediates), links=tuple(links)
    )


def _parse_courts(p: _Parser) -> CourtsBlock:
    p.eat_keyword("courts")
    p.eat_punct("{")
    orders: List[Tuple[str, str]] = []
    while p.at_keyword("order"):
        p.advance()
        chain = [p.eat_name("court").value]
        p.eat_punct(">")
        chain.append(p.eat_name("court").value)
        while p.here.kind == "punct" and p.here.value == ">":
            p.advance()
            chain.append(p.eat_name("court").value)
        p.eat_punct(";")
        orders.extend((chain[i], chain[i + 1]) for i in range(len(chain) - 1))

    selfbound: List[str] = []
    if p.at_keyword("selfbound"):
        p.advance()
        selfbound.append(p.eat_name("court").value)
        while p.here.kind == "ident" and p.here.value not in KEYWORDS:
            selfbound.append(p.eat_name("court").value)
        p.eat_punct(";")

    options: List[Tuple[str, str]] = []
    keys: Set[str] = set()
    while p.at_keyword("option"):
        p.advance()
        key_parts = [p.eat_name("option key").value]
        while p.here.kind == "punct" and p.here.value == "-":
            p.advance()
            key_parts.append(p.eat_name("option key").value)
        key = "-".join(key_parts)
        token = p.here
        if key in keys:
            raise DuplicateDeclaration(
                f"option {key!r} set twice", token.line, token.column
            )
        keys.add(key)
        p.eat_punct("=")
        if p.here.kind in ("ident", "int"):
            value = p.advance().value
        else:
            p.fail("an option value")
        p.eat_punct(";")
        options.append((key, value))
    p.eat_punct("}")
    return CourtsBlock(
        orders=tuple(orders), selfbound=tuple(selfbound), options=tuple(options)
    )


def _parse_meta(p: _Parser, court_names: Optional[Set[str]]):
    court = None
    time = None
    if p.at_keyword("court"):
        p.advance()
        token = p.eat_name("court")
        if court_names is not None and token.value not in court_names:
            raise UnknownReference(
                f"court {token.value!r} was never declared", token.line, token.column
            )
        court = token.value
    if p.at_keyword("time"):
        p.advance()
        if p.here.kind != "int":
            p.fail("a timestamp")
        time = int(p.advance().value)
    return court, time


def _parse_state(
    p: _Parser, declared: Set[str], court_names: Optional[Set[str]]
) -> StateBlock:
    keyword = p.eat_keyword("state")
    name = p.eat_name("state").value
    court, time = _parse_meta(p, court_names)
    p.eat_keyword("outcome")
    token = p.here
    if token.kind == "int" and token.value in ("0", "1"):
        outcome = p.advance().value
    elif token.kind == "punct" and token.value == "?":
        outcome = p.advance().value
    else:
        p.fail("'0'", "'1'", "'?'")
    p.eat_punct("{")
    facts = _parse_facts(p, declared)
    rules: List[RuleDecl] = []
    while p.at_keyword("rule"):
        p.advance()
        p.eat_punct("{")
        members = [p.eat_factor(declared, allow_outcome=False).value]
        while p.here.kind == "punct" and p.here.value == ",":
            p.advance()
            members.append(p.eat_factor(declared, allow_outcome=False).value)
        p.eat_punct("}")
        p.eat_punct("->")
        conclusion = p.eat_factor(declared, allow_outcome=True).value
        p.eat_punct(";")
        rules.append(RuleDecl(antecedent=tuple(members), conclusion=conclusion))
    p.eat_punct("}")
    return StateBlock(
        id=name,
        outcome=outcome,
        facts=facts,
        rules=tuple(rules),
        court=court,
        time=time,
        line=keyword.line,
    )


def _parse_query(
    p: _Parser, declared: Set[str], court_names: Optional[Set[str]]
) -> QueryBlock:
    keyword = p.eat_keyword("query")
    name = p.eat_name("query").value
    court, time = _parse_meta(p, court_names)
    p.eat_punct("{")
    facts = _parse_facts(p, declared)
    p.eat_punct("}")
    return QueryBlock(id=name, facts=facts, court=court, time=time, line=keyword.line)


def _parse_facts(p: _Parser, declared: Set[str]) -> Tuple[str, ...]:
    p.eat_keyword("facts")
    facts = [p.eat_factor(declared, allow_outcome=False).value]
    while p.here.kind == "ident" and p.here.value not in KEYWORDS:
        facts.append(p.eat_factor(declared, allow_outcome=False).value)
    p.eat_punct(";")
    return tuple(facts)

# -- canonical serialization ------------------------------------------------------

def serialize(doc: ModelDocument) -> str:
    """Render the canonical form: header comment, sorted declarations, one
    statement per line, two-space indent."""
    out: List[str] = [f"# dsl-version: {DSL_VERSION}"]
    out.append("hierarchy {")
    out.append("  base %s;" % " ".join(sorted(doc.hierarchy.bases)))
    if doc.hierarchy.intermediates:
        out.append("  intermediate %s;" % " ".join(sorted(doc.hierarchy.intermediates)))
    for source, target in sorted(set(doc.hierarchy.links)):
        out.append(f"  link {source} -> {target};")
    out.append("}")

    if doc.courts is not None:
        out.append("courts {")
        for higher, lower in sorted(set(doc.courts.orders)):
            out.append(f"  order {higher} > {lower};")
        if doc.courts.selfbound:
            out.append("  selfbound %s;" % " ".join(sorted(set(doc.courts.selfbound))))
        for key, value in sorted(doc.courts.options):
            out.append(f"  option {key} = {value};")
        out.append("}")

    for block in sorted(doc.blocks, key=lambda b: b.id):
        meta = ""
        if block.court is not None:
            meta += f" court {block.court}"
        if block.time is not None:
            meta += f" time {block.time}"
        if isinstance(block, QueryBlock):
            out.append(f"query {block.id}{meta} {{")
            out.append("  facts %s;" % " ".join(sorted(set(block.facts))))
            out.append("}")
        else:
            out.append(f"state {block.id}{meta} outcome {block.outcome} {{")
            out.append("  facts %s;" % " ".join(sorted(set(block.facts))))
            for rule in sorted(
                set(block.rules),
                key=lambda r: (r.conclusion, tuple(sorted(r.antecedent))),
            ):
                members = ", ".join(sorted(set(rule.antecedent)))
                out.append(f"  rule {{{members}}} -> {rule.conclusion};")
            out.append("}")
    return "\n".join(out) + "\n"


# -- elaboration into engine objects ------------------------------------------------

@dataclass(frozen=True)
class LoadedModel:
    """A parsed document elaborated into validated engine objects."""

    document: ModelDocument
    hierarchy: Hierarchy
    model: ClassifierModel
    courts: Optional[CourtSystem]


def elaborate(doc: ModelDocument) -> LoadedModel:
    """Build and validate the hierarchy, court system, and classifier model."""
    h = Hierarchy.build(
        base=doc.hierarchy.bases,
        intermediate=doc.hierarchy.intermediates,
        links=doc.hierarchy.links,
    )
    courts = None
    if doc.courts is not None:
        strict = True
        for key, value in doc.courts.options:
            if key == "strict-incuriam":
                if value not in ("true", "false"):
                    raise UnknownOption(
                        f"option strict-incuriam takes true or false, got {value!r}"
                    )
                strict = value == "true"
            else:
                raise UnknownOption(f"unknown option {key!r}")
        courts = CourtSystem.build(
            order=doc.courts.orders,
            selfbound=doc.courts.selfbound,
            strict_incuriam=strict,
        )
    states: List[State] = []
    for block in doc.blocks:
        if isinstance(block, QueryBlock):
            states.append(
                State.make(
                    block.id, block.facts, court=block.court, time=block.time
                )
            )
        else:
            rules = [
                Rule.make(decl.antecedent, decl.conclusion) for decl in block.rules
            ]
            states.append(
                State.make(
                    block.id,
                    block.facts,
                    rules,
                    block.outcome,
                    court=block.court,
                    time=block.time,
                )
            )
    model = ClassifierModel.build(h, states)
    return LoadedModel(document=doc, hierarchy=h, model=model, courts=courts)


def load_model(text: str) -> LoadedModel:
    """Parse and elaborate in one step."""
    return elaborate(parse(text))


def document_of(
    model: ClassifierModel, courts: Optional[CourtSystem] = None
) -> ModelDocument:
    """Rebuild a document from engine objects, e.g. for generated models."""
    h = model.hierarchy
    hierarchy = HierarchyBlock(
        bases=tuple(sorted(h.base)),
        intermediates=tuple(sorted(t for t in h.intermediate if not t.endswith("'"))),
        links=tuple(sorted(h.links)),
    )
    courts_block = None
    if courts is not None:
        options = ()
        if not courts.strict_incuriam:
            options = (("strict-incuriam", "false"),)
        courts_block = CourtsBlock(
            orders=tuple(sorted(set(courts.order))),
            selfbound=tuple(sorted(courts.selfbound)),
            options=options,
        )
    blocks: List[Block] = []
    for state in model.states:
        if state.decided:
            blocks.append(
                StateBlock(
                    id=state.id,
                    outcome=state.outcome,
                    facts=tuple(sorted(state.facts)),
                    rules=tuple(
                        RuleDecl(
                            antecedent=tuple(sorted(r.antecedent)),
                            conclusion=r.conclusion,
                        )
                        for r in sorted(state.rules, key=rule_sort_key)
                    ),
                    court=state.court,
                    time=state.time,
                )
            )
        else:
            blocks.append(
                QueryBlock(
                    id=state.id,
                    facts=tuple(sorted(state.facts)),
                    court=state.court,
                    time=state.time,
                )
            )
    return ModelDocument(
        hierarchy=hierarchy, courts=courts_block, blocks=tuple(blocks)
    )
