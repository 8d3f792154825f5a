"""Backward and forward tactics, tacticals, and proof drivers.

An ``Etactic`` maps ``(state, subgoal_index)`` to a new state or raises
``TacticFailure``.  Failure is the only recoverable condition; misuse
(unknown rules, bad indices, arity mismatches) raises hard errors.

Rule application matches the rule's conclusion against the chosen subgoal.
On states without metavariables this is one-way matching and never binds
goal variables; once metavariables are present it switches to unification
so that rule applications can instantiate them.  Rule variables left
unbound by the conclusion become fresh metavariables in the premises.
"""

from __future__ import annotations

from typing import Callable, Iterator, Sequence

from .errors import KernelError, SignatureError, TacticFailure
from .kernel import Goal, GoalState, ProofStep, Theorem, activate_metas, qed, set_goal
from .kernel import refine
from .logic import LogicSpec, Rule, freshen_rule
from .terms import (
    EMPTY_SUBST,
    META,
    Judgment,
    Substitution,
    Term,
    Var,
    apply_subst_judgment,
)
from .unify import extend, match_judgment, unify_judgment

Etactic = Callable[[GoalState, int], GoalState]

Bindings = Sequence[tuple[str, Term]]


def _promote_unbound(fresh: Rule, s: Substitution) -> Substitution:
    """Unbound schematic variables of the rule become metavariables."""
    for v in fresh.schematic_vars():
        if s.get(v) is None:
            s = extend(s, v, Var(v.name, META, v.sort))
    return s


def _prepared(
    state: GoalState, name: str, bindings: Bindings
) -> tuple[Rule, int, Substitution]:
    """Freshen the rule; pre-instantiations become initial bindings so the
    recorded rule stays the logic's own rule."""
    base = state.logic.rule(name)
    fresh, counter = freshen_rule(base, state.counter)
    renamed = dict(zip(base.schematic_vars(), fresh.schematic_vars()))
    s = EMPTY_SUBST
    for bname, value in bindings:
        found = [v for v in renamed if v.name == bname]
        if not found:
            raise SignatureError(f"rule {name} has no variable {bname!r}")
        if len(found) > 1:
            raise SignatureError(f"variable {bname!r} is ambiguous in rule {name}")
        s = extend(s, renamed[found[0]], value)
    return fresh, counter, s


def _solver(state: GoalState):
    return unify_judgment if state.metas else match_judgment


def rule_applications(
    state: GoalState, i: int, name: str, bindings: Bindings = ()
) -> Iterator[GoalState]:
    """Every state reachable by applying the rule backward at subgoal ``i``."""
    goal = state.subgoal(i)
    fresh, counter, init = _prepared(state, name, bindings)
    fn = _solver(state)
    for s0 in fn(state.logic.signature, fresh.conclusion, goal.target, init):
        s = _promote_unbound(fresh, s0)
        children = [Goal(goal.hyps, p) for p in fresh.premises]
        step = ProofStep(i, name, fresh, s, len(children), "ruleseq")
        yield refine(state, i, s, children, step, counter=counter)


def ruleseq(name: str, bindings: Bindings = ()) -> Etactic:
    """Apply a named rule backward, first match wins."""

    def tac(state: GoalState, i: int) -> GoalState:
        for result in rule_applications(state, i, name, bindings):
            return result
        goal = state.subgoal(i)
        rule = state.logic.rule(name)
        raise TacticFailure(
            f"rule {name} does not apply: conclusion "
            f"{state.logic.print_judgment(rule.conclusion)} "
            f"vs goal {state.logic.print_judgment(goal.target)}"
        )

    return tac


def rule_seqtac(bindings: Bindings, name: str) -> Etactic:
    """``ruleseq`` with some rule variables pre-instantiated."""
    return ruleseq(name, tuple(bindings))


def erule_seqtac(bindings: Bindings, name: str) -> Etactic:
    """Elimination: conclusion against the goal, first premise against the
    first hypothesis it matches; that hypothesis is consumed."""

    def tac(state: GoalState, i: int) -> GoalState:
        goal = state.subgoal(i)
        fresh, counter, init = _prepared(state, name, bindings)
        if not fresh.premises:
            raise SignatureError(f"erule needs a rule with premises: {name}")
        fn = _solver(state)
        sig = state.logic.signature
        for s0 in fn(sig, fresh.conclusion, goal.target, init):
            for h, hyp in enumerate(goal.hyps):
                for s1 in fn(sig, fresh.premises[0], hyp, s0):
                    s = _promote_unbound(fresh, s1)
                    kept = tuple(x for k, x in enumerate(goal.hyps) if k != h)
                    children = [Goal(kept, p) for p in fresh.premises[1:]]
                    step = ProofStep(
                        i, name, fresh, s, len(children), "erule", hyp_index=h
                    )
                    return refine(state, i, s, children, step, counter=counter)
        raise TacticFailure(
            f"erule {name}: no hypothesis matches the first premise under a "
            f"conclusion match"
        )

    return tac


def erule_seq(name: str) -> Etactic:
    return erule_seqtac((), name)


def _forward(k: int, name: str, consume: bool, tag: str) -> Etactic:
    def tac(state: GoalState, i: int) -> GoalState:
        goal = state.subgoal(i)
        if not 0 <= k < len(goal.hyps):
            raise KernelError(
                f"hypothesis index {k} out of range (0..{len(goal.hyps) - 1})"
            )
        fresh, counter, _ = _prepared(state, name, ())
        if not fresh.premises:
            raise SignatureError(f"{tag} needs a rule with premises: {name}")
        fn = _solver(state)
        sig = state.logic.signature
        for s0 in fn(sig, fresh.premises[0], goal.hyps[k], EMPTY_SUBST):
            s = _promote_unbound(fresh, s0)
            base = (
                goal.hyps
                if not consume
                else tuple(x for j, x in enumerate(goal.hyps) if j != k)
            )
            concl = apply_subst_judgment(s, fresh.conclusion)
            main = Goal(base + (concl,), goal.target)
            extras = [Goal(base, p) for p in fresh.premises[1:]]
            step = ProofStep(i, name, fresh, s, 1 + len(extras), tag, hyp_index=k)
            return refine(state, i, s, [main] + extras, step, counter=counter)
        raise TacticFailure(
            f"{tag} {name}: first premise does not match hypothesis {k}"
        )

    return tac


def drule_seq(k: int, name: str) -> Etactic:
    """Forward from hypothesis ``k``; the hypothesis is consumed."""
    return _forward(k, name, consume=True, tag="drule")


def frule_seq(k: int, name: str) -> Etactic:
    """Forward from hypothesis ``k``; the hypothesis is kept."""
    return _forward(k, name, consume=False, tag="frule")


def meta_exists(names: Sequence[str]) -> Etactic:
    """Activate declared existential witnesses as metavariables."""

    def tac(state: GoalState, i: int) -> GoalState:
        return activate_metas(state, i, tuple(names))

    return tac


# ---------------------------------------------------------------------------
# Tacticals
# ---------------------------------------------------------------------------

def IDTAC(state: GoalState, i: int) -> GoalState:
    state.subgoal(i)
    return state


def _apply_block(state: GoalState, i: int, tactics: list[Etactic]) -> GoalState:
    """Apply one tactic per produced subgoal, tracking index shifts."""
    pos = i
    for t in tactics:
        before = len(state.subgoals)
        state = t(state, pos)
        pos += 1 + len(state.subgoals) - before
    return state


def ETHEN(t1: Etactic, t2: Etactic) -> Etactic:
    """Run ``t1``, then ``t2`` on every subgoal it produced."""

    def tac(state: GoalState, i: int) -> GoalState:
        before = len(state.subgoals)
        s2 = t1(state, i)
        produced = len(s2.subgoals) - before + 1
        return _apply_block(s2, i, [t2] * produced)

    return tac


def ETHENL(t: Etactic, tactics: Sequence[Etactic]) -> Etactic:
    """Run ``t``, then one listed tactic per produced subgoal, in order."""

    def tac(state: GoalState, i: int) -> GoalState:
        before = len(state.subgoals)
        s2 = t(state, i)
        produced = len(s2.subgoals) - before + 1
        if produced != len(tactics):
            raise KernelError(
                f"ETHENL arity mismatch: {produced} subgoals, "
                f"{len(tactics)} tactics"
            )
        return _apply_block(s2, i, list(tactics))

    return tac


def EORELSE(t1: Etactic, t2: Etactic) -> Etactic:
    """Try ``t1``; on tactic failure run ``t2`` on the unchanged state."""

    def tac(state: GoalState, i: int) -> GoalState:
        try:
            return t1(state, i)
        except TacticFailure:
            return t2(state, i)

    return tac


def EEVERY(tactics: Sequence[Etactic]) -> Etactic:
    """Chain tactics with ETHEN; the empty chain is IDTAC."""
    out: Etactic = IDTAC
    for t in tactics:
        out = ETHEN(out, t)
    return out


def EREPEAT(t: Etactic) -> Etactic:
    """Apply ``t`` until it fails, recursing into produced subgoals."""

    def tac(state: GoalState, i: int) -> GoalState:
        try:
            s2 = t(state, i)
        except TacticFailure:
            return state
        produced = len(s2.subgoals) - len(state.subgoals) + 1
        return _apply_block(s2, i, [tac] * produced)

    return tac


# ---------------------------------------------------------------------------
# Proof drivers
# ---------------------------------------------------------------------------

def _as_judgment(logic: LogicSpec, j: Judgment | str) -> Judgment:
    return logic.parse_goal(j) if isinstance(j, str) else j


def prove_seq(
    logic: LogicSpec,
    goal: Judgment | str,
    tactic: Etactic,
    hyps: Sequence[Judgment | str] = (),
) -> Theorem:
    """Prove a goal outright with one (usually composite) tactic."""
    state = set_goal(logic, [_as_judgment(logic, h) for h in hyps], _as_judgment(logic, goal))
    return qed(tactic(state, 0))


def constr_prove(
    logic: LogicSpec,
    goal: Judgment | str,
    witnesses: Sequence[str],
    tactic: Etactic,
) -> Theorem:
    """Prove an existential goal, synthesizing witnesses by unification."""
    state = set_goal(
        logic, [], _as_judgment(logic, goal), witnesses=tuple(witnesses)
    )
    state = meta_exists(tuple(witnesses))(state, 0)
    return qed(tactic(state, 0))
