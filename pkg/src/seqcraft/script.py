"""Proof scripts: a line-oriented batch format over the tactic layer.

    logic <shipped-name-or-path.logic>

    theorem <Name> : <judgment>
    exists <var> ...
    <tactic line>*
    qed

Tactic lines apply to subgoal 0, so scripts discharge subgoals leftmost
first.  Supported tactic lines:

    ruleseq <rule>
    rule_seqtac [<var> := <term>, ...] <rule>
    erule_seq <rule>
    erule_seqtac [<var> := <term>, ...] <rule>
    drule_seq <k> <rule>
    frule_seq <k> <rule>
    auto_ll <depth>
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from .errors import EngineError, ScriptError
from .kernel import GoalState, Theorem, qed, set_goal
from .logic import LogicSpec, parse_logic
from .logics import auto_ll, cll_cp, curry_howard, ill, simple_prop
from .tactics import (
    Etactic,
    drule_seq,
    erule_seqtac,
    frule_seq,
    meta_exists,
    rule_seqtac,
    ruleseq,
)
from .terms import Term

SHIPPED = {
    "simple_prop": simple_prop,
    "curry_howard": curry_howard,
    "ill": ill,
    "cll_cp": cll_cp,
}


def load_logic(name: str) -> LogicSpec:
    """A shipped logic by name, or any .logic file by path."""
    if name in SHIPPED:
        return SHIPPED[name]()
    path = Path(name)
    if path.suffix == ".logic" and path.exists():
        return parse_logic(path.read_text(encoding="utf-8"))
    raise ScriptError(
        f"unknown logic {name!r}: expected one of {sorted(SHIPPED)} or a .logic file"
    )


def parse_binding(spec: LogicSpec, rule_name: str, clause: str) -> tuple[str, Term]:
    """One ``var := term`` clause; the term parses at the variable's sort."""
    if ":=" not in clause:
        raise ScriptError(f"malformed binding {clause!r}, expected 'var := term'")
    vname, text = (s.strip() for s in clause.split(":=", 1))
    rule = spec.rule(rule_name)
    found = [v for v in rule.schematic_vars() if v.name == vname]
    if not found:
        raise ScriptError(f"rule {rule_name} has no variable {vname!r}")
    if len(found) > 1:
        raise ScriptError(f"variable {vname!r} is ambiguous in rule {rule_name}")
    return vname, spec.parse_term(text, found[0].sort)


_BINDING_FORM = re.compile(r"^(\w+)\s*\[(.*)\]\s*(\S+)$")


def parse_tactic_line(spec: LogicSpec, line: str) -> Etactic:
    m = _BINDING_FORM.match(line)
    if m:
        head, inner, rule = m.groups()
        bindings = [
            parse_binding(spec, rule, clause)
            for clause in inner.split(",")
            if clause.strip()
        ]
        if head == "rule_seqtac":
            return rule_seqtac(bindings, rule)
        if head == "erule_seqtac":
            return erule_seqtac(bindings, rule)
        raise ScriptError(f"unknown tactic {head!r}")
    parts = line.split()
    head = parts[0]
    if head == "ruleseq" and len(parts) == 2:
        return ruleseq(parts[1])
    if head == "erule_seq" and len(parts) == 2:
        return erule_seqtac((), parts[1])
    if head in ("drule_seq", "frule_seq") and len(parts) == 3:
        try:
            k = int(parts[1])
        except ValueError:
            raise ScriptError(f"{head} expects a hypothesis index, got {parts[1]!r}") from None
        return drule_seq(k, parts[2]) if head == "drule_seq" else frule_seq(k, parts[2])
    if head == "auto_ll" and len(parts) == 2:
        try:
            return auto_ll(int(parts[1]))
        except ValueError:
            raise ScriptError(f"auto_ll expects a depth, got {parts[1]!r}") from None
    raise ScriptError(f"unknown tactic line {line!r}")


@dataclass(frozen=True)
class ScriptResult:
    logic: LogicSpec
    theorems: tuple[tuple[str, Theorem], ...]


_THEOREM_RE = re.compile(r"^theorem\s+(\S+)\s*:\s*(.*)$")


def run_script(
    text: str,
    logic: LogicSpec | None = None,
    watch: Callable[[str, GoalState], None] | None = None,
) -> ScriptResult:
    """Run every theorem block; any failure aborts with its line number.

    ``watch(theorem_name, state)`` is called after the goal is set and after
    every successful step, so runners can show the proof as it unfolds.
    """
    spec = logic
    theorems: list[tuple[str, Theorem]] = []
    name: str | None = None
    state: GoalState | None = None

    def note(st: GoalState) -> None:
        if watch is not None:
            watch(name, st)

    for lineno, rawline in enumerate(text.splitlines(), start=1):
        line = rawline.strip()
        if not line or line.startswith("#"):
            continue

        def fail(msg: str) -> ScriptError:
            return ScriptError(f"line {lineno}: {msg}", step=lineno)

        try:
            if line.startswith("logic "):
                if spec is not None and logic is None:
                    raise fail("logic declared twice")
                if logic is None:
                    spec = load_logic(line.split(None, 1)[1].strip())
                continue
            if spec is None:
                raise fail("a 'logic' line must come first")
            m = _THEOREM_RE.match(line)
            if m:
                if state is not None:
                    raise fail(f"theorem {name!r} not closed with qed")
                name = m.group(1)
                state = set_goal(spec, [], spec.parse_goal(m.group(2)))
                note(state)
                continue
            if state is None:
                raise fail("tactic line outside a theorem block")
            if line.startswith("exists "):
                names = tuple(line.split()[1:])
                if state.trace:
                    raise fail("exists must come right after the theorem line")
                state = set_goal(spec, [], state.original, witnesses=names)
                state = meta_exists(names)(state, 0)
                note(state)
                continue
            if line == "qed":
                theorems.append((name, qed(state)))
                name, state = None, None
                continue
            state = parse_tactic_line(spec, line)(state, 0)
            note(state)
        except ScriptError:
            raise
        except EngineError as e:
            raise ScriptError(f"line {lineno}: {e}", step=lineno) from e
    if state is not None:
        raise ScriptError(f"theorem {name!r} not closed with qed")
    if spec is None:
        raise ScriptError("script has no 'logic' line")
    return ScriptResult(spec, tuple(theorems))


def run_script_file(
    path: str | Path,
    logic: LogicSpec | None = None,
    watch: Callable[[str, GoalState], None] | None = None,
) -> ScriptResult:
    return run_script(Path(path).read_text(encoding="utf-8"), logic, watch)
