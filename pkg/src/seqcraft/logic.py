"""Logic specifications: the declaration DSL, rules, freshening.

A logic is declared in a line-oriented file:

    logic <name>
    sort <Name>
    op <name> : <Sort>* -> <Sort> [infix "<sym>" <prec> <left|right> [spaced]]
                                  [display "<template>" <prec>]
    judgment <name> : <argspec>, ...  [display "<template>" ...]
    section <title>
    rule <Name> : <judgment> ==> <judgment> ==> ... <judgment>

An argspec is a sort name, optionally prefixed with ``multiset``.  Rules are
written premises first; the judgment after the last ``==>`` is the
conclusion.  Identifiers without a declaration parse as schematic variables
inside rule statements and as free variables inside goals.  ``section``
lines group the rules that follow them (used by rule palettes).
"""

from __future__ import annotations

import re
import shlex
from dataclasses import dataclass
from typing import Iterable

from .errors import ParseError, SignatureError, SortError
from .multiset import normalize, normalize_judgment
from .syntax import Syntax, free_kinds, schematic_kinds
from .terms import (
    SCHEMATIC,
    InfixInfo,
    Judgment,
    JudgmentDecl,
    OpDecl,
    Signature,
    Sort,
    Substitution,
    TemplateInfo,
    Term,
    Var,
    apply_subst_judgment,
    fresh_var,
    judgment_vars,
    make_signature,
    multiset_of,
)


@dataclass(frozen=True)
class Rule:
    name: str
    premises: tuple[Judgment, ...]
    conclusion: Judgment
    section: str = ""

    def judgments(self) -> Iterable[Judgment]:
        yield from self.premises
        yield self.conclusion

    def schematic_vars(self) -> list[Var]:
        out: list[Var] = []
        for j in self.judgments():
            for v in judgment_vars(j):
                if v.kind == SCHEMATIC and v not in out:
                    out.append(v)
        return out


class LogicSpec:
    """An immutable logic: signature, concrete syntax and named rules."""

    def __init__(self, name: str, signature: Signature, rules: Iterable[Rule]):
        self.name = name
        self.signature = signature
        self.syntax = Syntax(signature)
        self.rules: dict[str, Rule] = {}
        for r in rules:
            if r.name in self.rules:
                raise SignatureError(f"duplicate rule {r.name!r}")
            self.rules[r.name] = r

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LogicSpec)
            and self.name == other.name
            and self.signature == other.signature
            and self.rules == other.rules
        )

    def rule(self, name: str) -> Rule:
        try:
            return self.rules[name]
        except KeyError:
            raise SignatureError(f"unknown rule {name!r}") from None

    # -- syntax helpers -----------------------------------------------------

    def parse_goal(self, text: str) -> Judgment:
        """Parse with free variables; contexts come out in canonical form."""
        return normalize_judgment(self.signature, self.syntax.parse_judgment(text, free_kinds))

    def parse_rule_judgment(self, text: str) -> Judgment:
        """Parse with schematic variables, keeping the written structure."""
        return self.syntax.parse_judgment(text, schematic_kinds)

    def parse_term(self, text: str, sort: Sort, schematic: bool = False) -> Term:
        kinds = schematic_kinds if schematic else free_kinds
        t = self.syntax.parse_term(text, sort, kinds)
        if sort.is_multiset and not schematic:
            t = normalize(self.signature, t)
        return t

    def print_term(self, t: Term) -> str:
        return self.syntax.print_term(t)

    def print_judgment(self, j: Judgment) -> str:
        return self.syntax.print_judgment(j)


# ---------------------------------------------------------------------------
# DSL parsing
# ---------------------------------------------------------------------------

_RULE_RE = re.compile(r"^rule\s+(\S+)\s*:\s*(.*)$")


def parse_logic(text: str) -> LogicSpec:
    name = None
    sorts: list[Sort] = []
    ops: list[OpDecl] = []
    judgments: list[JudgmentDecl] = []
    rule_lines: list[tuple[int, str, str, str]] = []
    section = ""

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head = line.split(None, 1)[0]
        try:
            if head == "logic":
                name = line.split(None, 1)[1].strip()
            elif head == "sort":
                sorts.append(Sort(line.split(None, 1)[1].strip()))
            elif head == "op":
                ops.append(_parse_op_line(line, sorts))
            elif head == "judgment":
                judgments.append(_parse_judgment_line(line, sorts))
            elif head == "section":
                section = line.split(None, 1)[1].strip()
            elif head == "rule":
                m = _RULE_RE.match(line)
                if not m:
                    raise ParseError("malformed rule line")
                rule_lines.append((lineno, m.group(1), m.group(2), section))
            else:
                raise ParseError(f"unknown declaration {head!r}")
        except (ParseError, SignatureError, SortError) as e:
            raise ParseError(f"{e} (line {lineno}: {line})") from e
        except IndexError:
            raise ParseError(f"incomplete declaration (line {lineno}: {line})") from None

    if name is None:
        raise ParseError("missing 'logic <name>' declaration")
    sig = make_signature(name, sorts, ops, judgments)
    spec_rules = []
    spec = LogicSpec(name, sig, [])
    for lineno, rname, body, rsection in rule_lines:
        parts = [p.strip() for p in body.split("==>")]
        try:
            judgs = [spec.parse_rule_judgment(p) for p in parts]
        except (ParseError, SignatureError, SortError) as e:
            raise ParseError(f"in rule {rname!r}: {e} (line {lineno})") from e
        spec_rules.append(
            Rule(rname, tuple(judgs[:-1]), judgs[-1], rsection)
        )
    return LogicSpec(name, sig, spec_rules)


def _sort_by_name(sorts: list[Sort], name: str) -> Sort:
    for s in sorts:
        if s.name == name:
            return s
    raise SignatureError(f"undeclared sort {name!r}")


def _parse_op_line(line: str, sorts: list[Sort]) -> OpDecl:
    words = shlex.split(line)
    # op <name> : <argsorts>* -> <result> [display...]
    if len(words) < 3 or words[2] != ":":
        raise ParseError("malformed op line")
    opname = words[1]
    try:
        arrow = words.index("->")
    except ValueError:
        raise ParseError("op line needs '->'") from None
    arg_sorts = tuple(_sort_by_name(sorts, w) for w in words[3:arrow])
    rest = words[arrow + 1:]
    if not rest:
        raise ParseError("op line needs a result sort")
    result = _sort_by_name(sorts, rest[0])
    rest = rest[1:]
    display = None
    if rest:
        if rest[0] == "infix":
            if len(rest) < 4:
                raise ParseError("infix clause needs symbol, precedence and associativity")
            spaced = len(rest) > 4 and rest[4] == "spaced"
            display = InfixInfo(rest[1], int(rest[2]), rest[3], spaced=spaced)
        elif rest[0] == "display":
            if len(rest) < 3:
                raise ParseError("display clause needs template and precedence")
            display = TemplateInfo(rest[1], int(rest[2]))
        else:
            raise ParseError(f"unknown op clause {rest[0]!r}")
    return OpDecl(opname, arg_sorts, result, display)


def _parse_judgment_line(line: str, sorts: list[Sort]) -> JudgmentDecl:
    words = shlex.split(line)
    if len(words) < 3 or words[2] != ":":
        raise ParseError("malformed judgment line")
    jname = words[1]
    if "display" in words:
        cut = words.index("display")
        argwords, templates = words[3:cut], tuple(words[cut + 1:])
        if not templates:
            raise ParseError("display clause needs at least one template")
    else:
        argwords, templates = words[3:], ()
    specs = [s.strip() for s in " ".join(argwords).split(",") if s.strip()]
    arg_sorts = []
    for s in specs:
        ws = s.split()
        if len(ws) == 2 and ws[0] == "multiset":
            arg_sorts.append(multiset_of(_sort_by_name(sorts, ws[1])))
        elif len(ws) == 1:
            arg_sorts.append(_sort_by_name(sorts, ws[0]))
        else:
            raise ParseError(f"bad judgment argument {s!r}")
    return JudgmentDecl(jname, tuple(arg_sorts), templates)


# ---------------------------------------------------------------------------
# DSL printing (round-trips through parse_logic)
# ---------------------------------------------------------------------------

def print_logic(spec: LogicSpec) -> str:
    lines = [f"logic {spec.name}"]
    for s in spec.signature.sorts:
        lines.append(f"sort {s.name}")
    for op in spec.signature.operators.values():
        if "." in op.name and (
            spec.signature.is_empty_op(op.name)
            or spec.signature.is_singleton_op(op.name)
            or spec.signature.is_union_op(op.name)
        ):
            continue
        args = " ".join(s.name for s in op.arg_sorts)
        head = f"op {op.name} : {args + ' ' if args else ''}-> {op.result.name}"
        d = op.display
        if isinstance(d, InfixInfo):
            head += f' infix "{d.symbol}" {d.precedence} {d.assoc}'
            if d.spaced:
                head += " spaced"
        elif isinstance(d, TemplateInfo):
            head += f' display "{d.template}" {d.precedence}'
        lines.append(head)
    for j in spec.signature.judgments.values():
        args = ", ".join(
            f"multiset {s.is_multiset_of.name}" if s.is_multiset else s.name
            for s in j.arg_sorts
        )
        head = f"judgment {j.name} : {args}"
        if j.templates:
            head += " display " + " ".join(f'"{t}"' for t in j.templates)
        lines.append(head)
    section = ""
    for r in spec.rules.values():
        if r.section != section:
            section = r.section
            lines.append(f"section {section}")
        stmt = " ==> ".join(spec.print_judgment(j) for j in r.judgments())
        lines.append(f"rule {r.name} : {stmt}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Rule freshening and instantiation
# ---------------------------------------------------------------------------

def freshen_rule(rule: Rule, counter: int) -> tuple[Rule, int]:
    """Consistently rename every schematic variable to a fresh name."""
    renaming: dict[Var, Term] = {}
    for v in rule.schematic_vars():
        fresh, counter = fresh_var(counter, v.name, SCHEMATIC, v.sort)
        renaming[v] = fresh
    s = Substitution(renaming)
    return (
        Rule(
            rule.name,
            tuple(apply_subst_judgment(s, p) for p in rule.premises),
            apply_subst_judgment(s, rule.conclusion),
            rule.section,
        ),
        counter,
    )


def instantiate_rule(rule: Rule, bindings: list[tuple[str, Term]]) -> Rule:
    """Partially instantiate named schematic variables before application."""
    by_name: dict[str, Var] = {}
    for v in rule.schematic_vars():
        if v.name in by_name and by_name[v.name] != v:
            raise SignatureError(
                f"rule {rule.name!r} has two schematic variables named {v.name!r}"
            )
        by_name[v.name] = v
    mapping: dict[Var, Term] = {}
    for name, t in bindings:
        v = by_name.get(name)
        if v is None:
            raise SignatureError(f"rule {rule.name!r} has no schematic variable {name!r}")
        if v.sort != t.sort:
            raise SortError(
                f"binding for {name!r} has sort {t.sort.name!r}, expected {v.sort.name!r}"
            )
        mapping[v] = t
    s = Substitution(mapping)
    return Rule(
        rule.name,
        tuple(apply_subst_judgment(s, p) for p in rule.premises),
        apply_subst_judgment(s, rule.conclusion),
        rule.section,
    )
