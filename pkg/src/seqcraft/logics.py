"""Shipped logics, bounded proof search, and witness post-processing.

``auto_ll`` is a depth-first, depth-bounded search driven by backward rule
application.  For rules whose conclusion mentions two context variables the
deterministic context split tried by plain rule application is not the only
relevant one, so the search additionally enumerates explicit splits: every
sub-multiset of the goal context is offered as the value of the rule's
first context variable.  The candidate order is fixed, so equal inputs
yield equal traces.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .errors import KernelError, TacticFailure
from .kernel import GoalState
from .logic import LogicSpec, parse_logic
from .multiset import MultisetView, view, view_to_term
from .tactics import Etactic, rule_applications
from .terms import SCHEMATIC, Op, Term, Var, judgment_vars, term_key


def _load(name: str) -> LogicSpec:
    text = (
        resources.files("seqcraft").joinpath(f"data/{name}.logic").read_text("utf-8")
    )
    return parse_logic(text)


@lru_cache(maxsize=None)
def simple_prop() -> LogicSpec:
    """Conjunction and implication with explicit Weakening and Contraction."""
    return _load("simple_prop")


@lru_cache(maxsize=None)
def curry_howard() -> LogicSpec:
    """The simple_prop rules decorated with lambda-terms."""
    return _load("curry_howard")


@lru_cache(maxsize=None)
def ill() -> LogicSpec:
    """Intuitionistic linear logic."""
    return _load("ill")


@lru_cache(maxsize=None)
def cll_cp() -> LogicSpec:
    """Classical linear logic with process annotations."""
    return _load("cll_cp")


# ---------------------------------------------------------------------------
# Bounded search
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SearchConfig:
    """Search parameters: a per-path depth bound and the rule order.

    An empty ``rule_order`` means every rule except Cut, premise-free rules
    first, in declaration order otherwise.
    """

    max_depth: int = 8
    rule_order: tuple[str, ...] = ()

    def __post_init__(self):
        if self.max_depth < 1:
            raise KernelError("search depth must be at least 1")


def default_rule_order(logic: LogicSpec) -> tuple[str, ...]:
    names = [n for n in logic.rules if n != "Cut"]
    axioms = [n for n in names if not logic.rules[n].premises]
    rest = [n for n in names if logic.rules[n].premises]
    return tuple(axioms + rest)


def _order(logic: LogicSpec, cfg: SearchConfig) -> tuple[str, ...]:
    if not cfg.rule_order:
        return default_rule_order(logic)
    for n in cfg.rule_order:
        logic.rule(n)
    return cfg.rule_order


def _conclusion_msvars(logic: LogicSpec, name: str) -> list[Var]:
    out = []
    for v in judgment_vars(logic.rule(name).conclusion):
        if v.kind == SCHEMATIC and v.sort.is_multiset and v not in out:
            out.append(v)
    return sorted(out, key=term_key)


def _split_bindings(state: GoalState, i: int, name: str):
    """Explicit context splits: each sub-multiset of the goal context as a
    value for the rule's first context variable."""
    msvars = _conclusion_msvars(state.logic, name)
    if len(msvars) < 2:
        return
    goal = state.subgoal(i)
    sig = state.logic.signature
    ms_args = [a for a in goal.target.args if a.sort.is_multiset]
    if len(ms_args) != 1:
        return
    elems = view(sig, ms_args[0]).elements
    first = msvars[0]
    if first.sort.is_multiset_of != ms_args[0].sort.is_multiset_of:
        return
    seen = set()
    for mask in range(2 ** len(elems)):
        chosen = tuple(e for k, e in enumerate(elems) if mask >> k & 1)
        key = tuple(sorted(map(term_key, chosen)))
        if key in seen:
            continue
        seen.add(key)
        value = view_to_term(sig, MultisetView(first.sort.is_multiset_of, chosen, ()))
        yield [(first.name, value)]


def _candidates(state: GoalState, i: int, name: str):
    yield from rule_applications(state, i, name)
    for bindings in _split_bindings(state, i, name):
        yield from rule_applications(state, i, name, bindings)


def _close(state: GoalState, i: int, depth: int, order) -> GoalState | None:
    if depth <= 0:
        return None
    before = len(state.subgoals)
    for name in order:
        for s2 in _candidates(state, i, name):
            produced = len(s2.subgoals) - before + 1
            s3 = _close_block(s2, i, produced, depth - 1, order)
            if s3 is not None:
                return s3
    return None


def _close_block(state, i, count, depth, order):
    for _ in range(count):
        state = _close(state, i, depth, order)
        if state is None:
            return None
    return state


def auto_ll(config: SearchConfig | int = SearchConfig()) -> Etactic:
    """Close the subgoal by bounded depth-first search, or fail."""
    cfg = SearchConfig(max_depth=config) if isinstance(config, int) else config

    def tac(state: GoalState, i: int) -> GoalState:
        result = _close(state, i, cfg.max_depth, _order(state.logic, cfg))
        if result is None:
            raise TacticFailure(f"auto_ll found no proof within depth {cfg.max_depth}")
        return result

    return tac


# ---------------------------------------------------------------------------
# Witness post-processing
# ---------------------------------------------------------------------------

def reduce_projections(t: Term) -> Term:
    """Rewrite fst/snd of explicit pairs to the component, innermost first."""
    if isinstance(t, Var):
        return t
    args = tuple(reduce_projections(a) for a in t.args)
    if len(args) == 1 and isinstance(args[0], Op) and args[0].op == "pair":
        if t.op == "fst":
            return args[0].args[0]
        if t.op == "snd":
            return args[0].args[1]
    return Op(t.op, args, t.sort)
