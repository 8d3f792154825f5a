"""seqcraft: an engine for user-encoded sequent-calculus logics.

Declare a logic (sorts, operators, judgment forms, inference rules) in a
small text format, then prove sequents with backward and forward tactics.
Contexts are multisets, so rules apply up to associativity, commutativity
and unit of context join.  Proofs carry a replayable trace, and logics whose
rules bind term-level witnesses support synthesis through metavariables.
"""

from .errors import (
    EngineError,
    KernelError,
    ParseError,
    ScriptError,
    SignatureError,
    SortError,
    TacticFailure,
    UnknownOperatorError,
)
from .kernel import (
    Goal,
    GoalState,
    ProofStep,
    Theorem,
    qed,
    replay,
    replay_report,
    set_goal,
    undo,
)
from .logic import LogicSpec, Rule, parse_logic, print_logic
from .logics import (
    SearchConfig,
    auto_ll,
    cll_cp,
    curry_howard,
    default_rule_order,
    ill,
    reduce_projections,
    simple_prop,
)
from .render import render_state, render_theorem, render_witnesses
from .script import (
    ScriptResult,
    load_logic,
    parse_tactic_line,
    run_script,
    run_script_file,
)
from .tactics import (
    EEVERY,
    EORELSE,
    EREPEAT,
    ETHEN,
    ETHENL,
    IDTAC,
    Etactic,
    constr_prove,
    drule_seq,
    erule_seq,
    erule_seqtac,
    frule_seq,
    meta_exists,
    prove_seq,
    rule_seqtac,
    ruleseq,
)

__version__ = "0.1.0"

__all__ = [
    "EEVERY",
    "EORELSE",
    "EREPEAT",
    "ETHEN",
    "ETHENL",
    "EngineError",
    "Etactic",
    "Goal",
    "GoalState",
    "IDTAC",
    "KernelError",
    "LogicSpec",
    "ParseError",
    "ProofStep",
    "Rule",
    "ScriptError",
    "ScriptResult",
    "SearchConfig",
    "SignatureError",
    "SortError",
    "TacticFailure",
    "Theorem",
    "UnknownOperatorError",
    "__version__",
    "auto_ll",
    "cll_cp",
    "constr_prove",
    "curry_howard",
    "default_rule_order",
    "drule_seq",
    "erule_seq",
    "erule_seqtac",
    "frule_seq",
    "ill",
    "load_logic",
    "meta_exists",
    "parse_logic",
    "parse_tactic_line",
    "print_logic",
    "prove_seq",
    "qed",
    "reduce_projections",
    "render_state",
    "render_theorem",
    "render_witnesses",
    "replay",
    "replay_report",
    "rule_seqtac",
    "ruleseq",
    "run_script",
    "run_script_file",
    "set_goal",
    "simple_prop",
    "undo",
]
