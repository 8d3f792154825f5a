"""Deterministic text rendering of goal states and theorems.

Every front end (REPL, script runner, service clients) goes through these
functions so the same state always renders to the same characters.
"""

from __future__ import annotations

from .kernel import GoalState, Theorem
from .logic import LogicSpec
from .terms import term_key


def render_state(spec: LogicSpec, state: GoalState) -> str:
    lines: list[str] = []
    if state.done:
        lines.append("no subgoals")
    for i, g in enumerate(state.subgoals):
        lines.append(f"subgoal {i}: {spec.print_judgment(g.target)}")
        for k, h in enumerate(g.hyps):
            lines.append(f"  hyp {k}: {spec.print_judgment(h)}")
    if state.metas:
        names = ", ".join(f"?{m.name}" for m in state.metas)
        lines.append(f"metas: {names}")
    for v, t in sorted(state.inst.items(), key=lambda it: it[0].name):
        lines.append(f"  ?{v.name} := {spec.print_term(t)}")
    return "\n".join(lines)


def render_witnesses(spec: LogicSpec, thm: Theorem) -> list[str]:
    return [f"{v.name} := {spec.print_term(t)}" for v, t in thm.witness_bindings]


def render_theorem(spec: LogicSpec, thm: Theorem) -> str:
    lines = [f"theorem: {spec.print_judgment(thm.statement)}"]
    for h in thm.hyps:
        lines.append(f"  given: {spec.print_judgment(h)}")
    lines.extend(render_witnesses(spec, thm))
    for n, step in enumerate(thm.trace, start=1):
        if step.tag == "meta_exists":
            lines.append(
                f"{n}. meta_exists {' '.join(step.meta_names)} at {step.index}"
            )
            continue
        binds = ", ".join(
            f"{spec.print_term(t)}/{v.name}"
            for v, t in sorted(step.subst.items(), key=lambda it: term_key(it[0]))
        )
        where = f" from hyp {step.hyp_index}" if step.hyp_index is not None else ""
        lines.append(
            f"{n}. {step.tag} {step.rule_name} at {step.index}{where} "
            f"-> {step.produced} subgoal(s) {{{binds}}}"
        )
    return "\n".join(lines)
