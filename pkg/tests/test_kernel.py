"""Goal states, refine discipline, theorems and replay."""

import pytest

from seqcraft.errors import KernelError, SortError
from seqcraft.kernel import (
    Goal,
    ProofStep,
    qed,
    replay,
    replay_report,
    set_goal,
    undo,
)
from seqcraft.logics import curry_howard, simple_prop
from seqcraft.tactics import (
    EEVERY,
    ETHENL,
    constr_prove,
    meta_exists,
    prove_seq,
    ruleseq,
)
from seqcraft.terms import META, Substitution, Var, judgment_vars


def golden_tactic():
    return EEVERY(
        [
            ruleseq("R→"),
            ruleseq("C"),
            ETHENL(
                ruleseq("R×"),
                [
                    EEVERY([ruleseq("L2×"), ruleseq("Ax")]),
                    EEVERY([ruleseq("L1×"), ruleseq("Ax")]),
                ],
            ),
        ]
    )


def test_set_goal_counter_clears_suffixes():
    spec = simple_prop()
    st = set_goal(spec, [], spec.parse_goal("{X3} ⊢ X3"))
    assert st.counter == 4


def test_set_goal_rejects_rule_variables():
    spec = simple_prop()
    j = spec.parse_rule_judgment("{A} ⊢ A")
    with pytest.raises(SortError):
        set_goal(spec, [], j)


def test_set_goal_normalizes_context():
    spec = simple_prop()
    st = set_goal(spec, [], spec.syntax.parse_judgment("∅ ⊎ {X} ⊢ X", lambda n: "free"))
    assert spec.print_judgment(st.subgoals[0].target) == "{X} ⊢ X"


def test_subgoal_index_out_of_range():
    spec = simple_prop()
    st = set_goal(spec, [], spec.parse_goal("{X} ⊢ X"))
    with pytest.raises(KernelError):
        st.subgoal(1)


def test_counter_monotone_and_trace_grows():
    spec = simple_prop()
    st = set_goal(spec, [], spec.parse_goal("∅ ⊢ X×Y→Y×X"))
    seen = [st.counter]
    for name in ["R→", "C"]:
        st = ruleseq(name)(st, 0)
        assert st.counter >= seen[-1]
        seen.append(st.counter)
    assert len(st.trace) == 2
    assert [s.rule_name for s in st.trace] == ["R→", "C"]


def test_refine_rejects_unknown_meta():
    from seqcraft.kernel import refine

    spec = simple_prop()
    st = set_goal(spec, [], spec.parse_goal("{X} ⊢ X"))
    prop = spec.signature.sort("Prop")
    rogue = Substitution({Var("m9", META, prop): Var("X", "free", prop)})
    step = ProofStep(0, "Ax", spec.rules["Ax"], rogue, 0, "ruleseq")
    with pytest.raises(KernelError):
        refine(st, 0, rogue, [], step)


def test_qed_requires_no_subgoals():
    spec = simple_prop()
    st = set_goal(spec, [], spec.parse_goal("{X} ⊢ X"))
    with pytest.raises(KernelError):
        qed(st)
    st = ruleseq("Ax")(st, 0)
    thm = qed(st)
    assert spec.print_judgment(thm.statement) == "{X} ⊢ X"


def test_undo_drops_last_snapshot():
    spec = simple_prop()
    st = set_goal(spec, [], spec.parse_goal("{X} ⊢ X"))
    st2 = ruleseq("Ax")(st, 0)
    history = [st, st2]
    assert undo(history) == [st]
    with pytest.raises(KernelError):
        undo([])


def test_metas_shared_across_subgoals():
    # Cut introduces a metavariable for the cut formula in both premises;
    # solving one subgoal instantiates it in the other.
    spec = simple_prop()
    st = set_goal(spec, [], spec.parse_goal("{X} ⊢ X"))
    st = ruleseq("Cut", ())(st, 0)
    assert len(st.subgoals) == 2
    assert st.metas
    cut_meta = st.metas[0]
    assert any(cut_meta in judgment_vars(g.target) for g in st.subgoals)
    before = len(st.metas)
    st = ruleseq("Ax")(st, 0)
    assert all(
        cut_meta not in judgment_vars(g.target) for g in st.subgoals
    )
    assert len(st.metas) < before + 2  # instantiated metas are dropped


def test_inst_accumulates_only_metas():
    spec = simple_prop()
    st = set_goal(spec, [], spec.parse_goal("{X} ⊢ X"))
    st = ruleseq("Cut")(st, 0)
    st = ruleseq("Ax")(st, 0)
    for v in st.inst.domain():
        assert v.kind == META


def test_witness_statement_substituted():
    spec = curry_howard()
    thm = constr_prove(
        spec, "∅ ⊢ f : X×Y→Y×X", ["f"], golden_tactic()
    )
    (v, t), = thm.witness_bindings
    assert v.name == "f"
    assert t.op == "lam"
    assert "f" not in {w.name for w in judgment_vars(thm.statement)}


def test_meta_exists_unknown_witness_errors():
    spec = curry_howard()
    st = set_goal(spec, [], spec.parse_goal("∅ ⊢ f : X×Y→Y×X"), witnesses=("f",))
    with pytest.raises(KernelError):
        meta_exists(["g"])(st, 0)


# ---------------------------------------------------------------------------
# Replay
# ---------------------------------------------------------------------------

def proved_golden():
    spec = simple_prop()
    return spec, prove_seq(spec, "∅ ⊢ X×Y→Y×X", golden_tactic())


def test_replay_accepts_honest_theorem():
    spec, thm = proved_golden()
    ok, why = replay_report(spec, thm)
    assert ok, why


def test_replay_rejects_swapped_bindings():
    spec, thm = proved_golden()
    step = thm.trace[2]  # R× application binding A and B
    swapped = {}
    for v, t in step.subst.items():
        swapped[v] = t
    keys = [v for v in swapped if v.name.startswith(("A", "B"))]
    assert len(keys) == 2
    swapped[keys[0]], swapped[keys[1]] = swapped[keys[1]], swapped[keys[0]]
    bad_step = ProofStep(
        step.index, step.rule_name, step.rule, Substitution(swapped),
        step.produced, step.tag, step.hyp_index, step.meta_names,
    )
    bad = thm.__class__(
        thm.statement, thm.logic_name, thm.original, thm.hyps,
        thm.witness_bindings, thm.trace[:2] + (bad_step,) + thm.trace[3:],
    )
    assert not replay(spec, bad)


def test_replay_rejects_wrong_index():
    spec, thm = proved_golden()
    step = thm.trace[3]
    bad_step = ProofStep(
        step.index + 1, step.rule_name, step.rule, step.subst,
        step.produced, step.tag, step.hyp_index, step.meta_names,
    )
    bad = thm.__class__(
        thm.statement, thm.logic_name, thm.original, thm.hyps,
        thm.witness_bindings, thm.trace[:3] + (bad_step,) + thm.trace[4:],
    )
    assert not replay(spec, bad)


def test_replay_rejects_foreign_rule():
    spec, thm = proved_golden()
    step = thm.trace[0]
    bad_step = ProofStep(
        step.index, "W", step.rule, step.subst,
        step.produced, step.tag, step.hyp_index, step.meta_names,
    )
    bad = thm.__class__(
        thm.statement, thm.logic_name, thm.original, thm.hyps,
        thm.witness_bindings, (bad_step,) + thm.trace[1:],
    )
    assert not replay(spec, bad)


def test_replay_rejects_dropped_step():
    spec, thm = proved_golden()
    bad = thm.__class__(
        thm.statement, thm.logic_name, thm.original, thm.hyps,
        thm.witness_bindings, thm.trace[:-1],
    )
    assert not replay(spec, bad)


def test_replay_rejects_tampered_statement():
    spec, thm = proved_golden()
    other = spec.parse_goal("∅ ⊢ X×Y→X×Y")
    bad = thm.__class__(
        other, thm.logic_name, other, thm.hyps,
        thm.witness_bindings, thm.trace,
    )
    assert not replay(spec, bad)
