"""Proof kernel: goal states, the refine primitive, theorems and replay.

A ``GoalState`` is an immutable snapshot.  All tactics change it through
``refine``, which applies a substitution to *every* subgoal (metavariables
are shared), replaces one subgoal by its children, extends the accumulated
metavariable instantiation and records a ``ProofStep``.  ``qed`` packages a
finished state into a ``Theorem``.

``replay`` re-validates a theorem without running any matching: it walks
the recorded steps, checks each step's instantiated rule against the
simulated goal list using substitution application and normalize-equality
only, and finally compares the reconstructed statement.  A corrupted step
makes it return False rather than raise.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .errors import KernelError, SortError
from .logic import LogicSpec, Rule
from .multiset import judgment_equal, normalize_judgment
from .terms import (
    FREE,
    META,
    SCHEMATIC,
    Judgment,
    Op,
    Substitution,
    Term,
    Var,
    apply_subst_judgment,
    check_judgment,
    compose_subst,
    judgment_vars,
    max_suffix,
    term_key,
    term_vars,
)


@dataclass(frozen=True)
class Goal:
    """One subgoal: local hypotheses (object-level lemmas) and a target."""

    hyps: tuple[Judgment, ...]
    target: Judgment


@dataclass(frozen=True)
class ProofStep:
    """A recorded, replayable proof event."""

    index: int
    rule_name: str
    rule: Rule | None
    subst: Substitution
    produced: int
    tag: str  # ruleseq | erule | drule | frule | meta_exists
    hyp_index: int | None = None
    meta_names: tuple[str, ...] = ()


@dataclass(frozen=True)
class GoalState:
    logic: LogicSpec
    subgoals: tuple[Goal, ...]
    metas: tuple[Var, ...]
    inst: Substitution
    counter: int
    trace: tuple[ProofStep, ...]
    original: Judgment
    hyps: tuple[Judgment, ...]
    witnesses: tuple[Var, ...]

    @property
    def done(self) -> bool:
        return not self.subgoals

    def subgoal(self, i: int) -> Goal:
        if not 0 <= i < len(self.subgoals):
            raise KernelError(
                f"subgoal index {i} out of range (0..{len(self.subgoals) - 1})"
            )
        return self.subgoals[i]


@dataclass(frozen=True)
class Theorem:
    """A proven statement; constructible only by ``qed``."""

    statement: Judgment
    logic_name: str
    original: Judgment
    hyps: tuple[Judgment, ...]
    witness_bindings: tuple[tuple[Var, Term], ...]
    trace: tuple[ProofStep, ...]


def _no_bound_kinds(j: Judgment) -> None:
    for v in judgment_vars(j):
        if v.kind != FREE:
            raise SortError(f"goal contains a {v.kind} variable {v.name!r}")


def set_goal(
    logic: LogicSpec,
    hyps: list[Judgment],
    target: Judgment,
    witnesses: tuple[str, ...] = (),
) -> GoalState:
    """A fresh single-subgoal state; all judgments must be ground and sorted."""
    for j in list(hyps) + [target]:
        if not check_judgment(logic.signature, j):
            raise SortError(f"ill-sorted judgment {j}")
        _no_bound_kinds(j)
    sig = logic.signature
    target_n = normalize_judgment(sig, target)
    hyps_n = tuple(normalize_judgment(sig, h) for h in hyps)
    names = [v.name for j in list(hyps_n) + [target_n] for v in judgment_vars(j)]
    witness_vars = []
    for name in witnesses:
        found = [
            v for v in judgment_vars(target_n) if v.name == name and v.kind == FREE
        ]
        if not found:
            raise KernelError(f"declared witness {name!r} does not occur in the goal")
        witness_vars.append(found[0])
    return GoalState(
        logic=logic,
        subgoals=(Goal(hyps_n, target_n),),
        metas=(),
        inst=Substitution(),
        counter=max_suffix(names) + 1,
        trace=(),
        original=target_n,
        hyps=hyps_n,
        witnesses=tuple(witness_vars),
    )


def _apply_goal(sig, s: Substitution, g: Goal) -> Goal:
    return Goal(
        tuple(normalize_judgment(sig, apply_subst_judgment(s, h)) for h in g.hyps),
        normalize_judgment(sig, apply_subst_judgment(s, g.target)),
    )


def _collect_metas(subgoals) -> list[Var]:
    out = []
    for g in subgoals:
        for j in list(g.hyps) + [g.target]:
            for v in judgment_vars(j):
                if v.kind == META and v not in out:
                    out.append(v)
    return out


def refine(
    state: GoalState,
    i: int,
    subst: Substitution,
    new_subgoals: list[Goal],
    step: ProofStep,
    counter: int | None = None,
) -> GoalState:
    """The single mutation primitive: substitute everywhere, split subgoal i."""
    state.subgoal(i)
    known = set(state.metas)
    for v in subst.domain():
        if v.kind == META and v not in known:
            raise KernelError(f"substitution binds unknown metavariable {v.name!r}")
    sig = state.logic.signature
    updated = [_apply_goal(sig, subst, g) for g in state.subgoals]
    children = [_apply_goal(sig, subst, g) for g in new_subgoals]
    subgoals = tuple(updated[:i] + children + updated[i + 1:])
    bound = {v for v in subst.domain() if v.kind == META}
    survivors = [m for m in state.metas if m not in bound]
    for m in _collect_metas(subgoals):
        if m not in survivors:
            survivors.append(m)
    meta_part = subst.restrict(lambda v: v.kind == META)
    return GoalState(
        logic=state.logic,
        subgoals=subgoals,
        metas=tuple(sorted(survivors, key=term_key)),
        inst=compose_subst(state.inst, meta_part),
        counter=state.counter if counter is None else counter,
        trace=state.trace + (step,),
        original=state.original,
        hyps=state.hyps,
        witnesses=state.witnesses,
    )


def _flip_kind(j: Judgment, names: set[str], to_kind: str) -> Judgment:
    def go(t: Term) -> Term:
        if isinstance(t, Var):
            return Var(t.name, to_kind, t.sort) if t.name in names else t
        return Op(t.op, tuple(go(a) for a in t.args), t.sort)

    return Judgment(j.name, tuple(go(a) for a in j.args))


def activate_metas(state: GoalState, i: int, names: tuple[str, ...]) -> GoalState:
    """Turn declared witness variables of subgoal ``i`` into metavariables."""
    declared = {v.name for v in state.witnesses}
    for n in names:
        if n not in declared:
            raise KernelError(f"{n!r} is not a declared existential witness")
    g = state.subgoal(i)
    names_set = set(names)
    g2 = Goal(
        tuple(_flip_kind(h, names_set, META) for h in g.hyps),
        _flip_kind(g.target, names_set, META),
    )
    step = ProofStep(i, "", None, Substitution(), 1, "meta_exists", meta_names=names)
    new_metas = list(state.metas)
    for v in state.witnesses:
        if v.name in names_set:
            mv = Var(v.name, META, v.sort)
            if mv not in new_metas:
                new_metas.append(mv)
    return replace(
        state,
        subgoals=state.subgoals[:i] + (g2,) + state.subgoals[i + 1:],
        metas=tuple(sorted(new_metas, key=term_key)),
        trace=state.trace + (step,),
    )


def _strip_suffix(name: str) -> str:
    stem = name.rstrip("0123456789")
    return stem or name


def _finalize_witness_values(
    values: list[Term], taken: set[str]
) -> list[Term]:
    """Metas that survive to the end become free variables; where the digit
    suffix added by freshening can be dropped without a clash, it is."""
    metas: list[Var] = []
    for t in values:
        for v in term_vars(t):
            if v.kind == META and v not in metas:
                metas.append(v)
    used = set(taken)
    for t in values:
        used.update(v.name for v in term_vars(t))
    renaming: dict[Var, Var] = {}
    for v in sorted(metas, key=term_key):
        stem = _strip_suffix(v.name)
        fresh = stem if stem not in used else v.name
        used.add(fresh)
        renaming[v] = Var(fresh, FREE, v.sort)

    def go(t: Term) -> Term:
        if isinstance(t, Var):
            return renaming.get(t, t)
        return Op(t.op, tuple(go(a) for a in t.args), t.sort)

    return [go(t) for t in values]


def qed(state: GoalState) -> Theorem:
    if state.subgoals:
        shown = "; ".join(
            state.logic.print_judgment(g.target) for g in state.subgoals
        )
        raise KernelError(f"proof unfinished, {len(state.subgoals)} subgoal(s) remain: {shown}")
    witness_names = {v.name for v in state.witnesses}
    statement = state.original
    raw = []
    for v in state.witnesses:
        mv = Var(v.name, META, v.sort)
        value = state.inst.get(mv)
        raw.append(value if value is not None else mv)
    taken = {w.name for w in judgment_vars(state.original)}
    bindings = list(zip(state.witnesses, _finalize_witness_values(raw, taken)))
    if bindings:
        statement = _flip_kind(state.original, witness_names, SCHEMATIC)
        statement = apply_subst_judgment(
            Substitution({Var(v.name, SCHEMATIC, v.sort): t for v, t in bindings}),
            statement,
        )
    return Theorem(
        statement=normalize_judgment(state.logic.signature, statement),
        logic_name=state.logic.name,
        original=state.original,
        hyps=state.hyps,
        witness_bindings=tuple(bindings),
        trace=state.trace,
    )


def undo(history: list[GoalState]) -> list[GoalState]:
    """Drop the most recent snapshot."""
    if not history:
        raise KernelError("nothing to undo")
    return history[:-1]


# ---------------------------------------------------------------------------
# Replay
# ---------------------------------------------------------------------------

def _alpha_canonical(rule: Rule) -> Rule:
    from .logic import freshen_rule

    fresh, _ = freshen_rule(rule, 0)
    return fresh


def _rules_alpha_equal(r1: Rule, r2: Rule) -> bool:
    a, b = _alpha_canonical(r1), _alpha_canonical(r2)
    return a.premises == b.premises and a.conclusion == b.conclusion


def replay(logic: LogicSpec, thm: Theorem) -> bool:
    ok, _ = replay_report(logic, thm)
    return ok


def replay_report(logic: LogicSpec, thm: Theorem) -> tuple[bool, str]:
    """Re-validate every recorded step; on failure, name the first bad step."""
    sig = logic.signature
    subgoals: list[Goal] = [
        Goal(
            tuple(normalize_judgment(sig, h) for h in thm.hyps),
            normalize_judgment(sig, thm.original),
        )
    ]
    statement = thm.original
    for n, step in enumerate(thm.trace, start=1):
        fail = lambda why: (False, f"step {n} ({step.tag} {step.rule_name}): {why}")
        if not 0 <= step.index < len(subgoals):
            return fail(f"subgoal index {step.index} out of range")
        parent = subgoals[step.index]
        s = step.subst

        if step.tag == "meta_exists":
            names = set(step.meta_names)
            child = Goal(
                tuple(_flip_kind(h, names, META) for h in parent.hyps),
                _flip_kind(parent.target, names, META),
            )
            if step.produced != 1:
                return fail("meta_exists must produce exactly one subgoal")
            subgoals[step.index] = child
            statement = _flip_kind(statement, names, META)
            continue

        rule = step.rule
        if rule is None:
            return fail("missing rule")
        if step.rule_name not in logic.rules:
            return fail(f"unknown rule {step.rule_name!r}")
        if not _rules_alpha_equal(rule, logic.rules[step.rule_name]):
            return fail("recorded rule is not the logic's rule")
        conclusion = apply_subst_judgment(s, rule.conclusion)
        premises = [apply_subst_judgment(s, p) for p in rule.premises]
        target = apply_subst_judgment(s, parent.target)
        hyps = tuple(
            normalize_judgment(sig, apply_subst_judgment(s, h)) for h in parent.hyps
        )

        if step.tag == "ruleseq":
            if not judgment_equal(sig, conclusion, target):
                return fail("instantiated conclusion does not reproduce the goal")
            children = [Goal(hyps, p) for p in premises]
        elif step.tag in ("erule", "drule", "frule"):
            if not premises:
                return fail("forward step on a rule without premises")
            h = step.hyp_index
            if h is None or not 0 <= h < len(parent.hyps):
                return fail(f"hypothesis index {h} out of range")
            if not judgment_equal(sig, premises[0], hyps[h]):
                return fail("first premise does not reproduce the hypothesis")
            kept = tuple(x for k, x in enumerate(hyps) if k != h)
            if step.tag == "erule":
                if not judgment_equal(sig, conclusion, target):
                    return fail("instantiated conclusion does not reproduce the goal")
                children = [Goal(kept, p) for p in premises[1:]]
            else:
                base = hyps if step.tag == "frule" else kept
                main = Goal(base + (normalize_judgment(sig, conclusion),), target)
                children = [main] + [Goal(base, p) for p in premises[1:]]
        else:
            return fail(f"unknown tag {step.tag!r}")

        if step.produced != len(children):
            return fail(
                f"step claims {step.produced} subgoals, reconstruction gives {len(children)}"
            )
        updated = [_apply_goal(sig, s, g) for g in subgoals]
        children = [_apply_goal(sig, s, g) for g in children]
        subgoals = updated[: step.index] + children + updated[step.index + 1:]
        statement = apply_subst_judgment(s, statement)

    if subgoals:
        return False, f"{len(subgoals)} subgoal(s) left after the last step"
    taken = {w.name for w in judgment_vars(thm.original)}
    final_args = _finalize_witness_values(list(statement.args), taken)
    final = normalize_judgment(sig, Judgment(statement.name, tuple(final_args)))
    if not judgment_equal(sig, final, normalize_judgment(sig, thm.statement)):
        return False, "final statement does not match the theorem"
    return True, "ok"
