"""Tactic behavior: rule application, forward steps, tacticals."""

import pytest

from seqcraft.errors import KernelError, SignatureError, TacticFailure
from seqcraft.kernel import qed, set_goal
from seqcraft.logics import curry_howard, ill, simple_prop
from seqcraft.tactics import (
    EEVERY,
    EORELSE,
    EREPEAT,
    ETHEN,
    ETHENL,
    IDTAC,
    constr_prove,
    drule_seq,
    erule_seq,
    frule_seq,
    prove_seq,
    rule_seqtac,
    ruleseq,
)
from seqcraft.terms import META, judgment_vars


def targets(spec, st):
    return [spec.print_judgment(g.target) for g in st.subgoals]


def test_golden_goal_sequence_exact():
    spec = simple_prop()
    st = set_goal(spec, [], spec.parse_goal("∅ ⊢ X×Y→Y×X"))
    expected = [
        ["∅ ⊢ X×Y→Y×X"],
        ["{X×Y} ⊢ Y×X"],
        ["{X×Y} ⊎ {X×Y} ⊢ Y×X"],
        ["{X×Y} ⊢ Y", "{X×Y} ⊢ X"],
        ["{Y} ⊢ Y", "{X×Y} ⊢ X"],
        ["{X×Y} ⊢ X"],
        ["{X} ⊢ X"],
        [],
    ]
    assert targets(spec, st) == expected[0]
    script = [
        ruleseq("R→"), ruleseq("C"), ruleseq("R×"),
        ruleseq("L2×"), ruleseq("Ax"), ruleseq("L1×"), ruleseq("Ax"),
    ]
    for tac, want in zip(script, expected[1:]):
        st = tac(st, 0)
        assert targets(spec, st) == want
    qed(st)


def test_tactic_failure_reports_both_sides():
    spec = simple_prop()
    st = set_goal(spec, [], spec.parse_goal("∅ ⊢ X×Y→Y×X"))
    with pytest.raises(TacticFailure) as e:
        ruleseq("Ax")(st, 0)
    assert "Ax" in str(e.value)
    assert "⊢" in str(e.value)


def test_failed_tactic_leaves_state_usable():
    spec = simple_prop()
    st = set_goal(spec, [], spec.parse_goal("∅ ⊢ X×Y→Y×X"))
    with pytest.raises(TacticFailure):
        ruleseq("Ax")(st, 0)
    st2 = ruleseq("R→")(st, 0)
    assert targets(spec, st2) == ["{X×Y} ⊢ Y×X"]


def test_unknown_rule_is_hard_error():
    spec = simple_prop()
    st = set_goal(spec, [], spec.parse_goal("{X} ⊢ X"))
    with pytest.raises(SignatureError):
        ruleseq("NoSuchRule")(st, 0)


def test_rule_seqtac_forces_context_split():
    spec = simple_prop()
    prop = spec.signature.sort("Prop")
    from seqcraft.terms import multiset_of

    st = set_goal(spec, [], spec.parse_goal("{X} ⊎ {Y} ⊢ X×Y"))
    ctx = spec.parse_term("{Y}", multiset_of(prop))
    st = rule_seqtac([("Γ", ctx)], "R×")(st, 0)
    assert targets(spec, st) == ["{Y} ⊢ X", "{X} ⊢ Y"]


def test_rule_seqtac_unknown_variable():
    spec = simple_prop()
    st = set_goal(spec, [], spec.parse_goal("{X} ⊢ X"))
    prop = spec.signature.sort("Prop")
    with pytest.raises(SignatureError):
        rule_seqtac([("Nope", spec.parse_term("X", prop))], "Ax")(st, 0)


def test_erule_consumes_first_matching_hypothesis():
    spec = simple_prop()
    # the deterministic context split gives Cut's Γ the element {Q}
    st = set_goal(
        spec,
        [spec.parse_goal("{W} ⊢ Z"), spec.parse_goal("{Q} ⊢ Y")],
        spec.parse_goal("{X} ⊎ {Q} ⊢ Q"),
    )
    st = erule_seq("Cut")(st, 0)
    g = st.subgoals[0]
    assert [spec.print_judgment(h) for h in g.hyps] == ["{W} ⊢ Z"]
    assert spec.print_judgment(g.target) == "{X} ⊎ {Y} ⊢ Q"


def test_erule_requires_premise():
    spec = simple_prop()
    st = set_goal(spec, [], spec.parse_goal("{X} ⊢ X"))
    with pytest.raises(SignatureError):
        erule_seq("Ax")(st, 0)


def test_erule_fails_without_matching_hyp():
    spec = simple_prop()
    st = set_goal(spec, [], spec.parse_goal("{X} ⊢ X"))
    with pytest.raises(TacticFailure):
        erule_seq("Cut")(st, 0)


def test_frule_keeps_hypothesis_and_introduces_meta():
    spec = simple_prop()
    st = set_goal(spec, [spec.parse_goal("{X} ⊢ Y")], spec.parse_goal("{X} ⊢ Z"))
    st = frule_seq(0, "W")(st, 0)
    g = st.subgoals[0]
    hyps = [spec.print_judgment(h) for h in g.hyps]
    assert hyps[0] == "{X} ⊢ Y"
    assert len(hyps) == 2
    assert st.metas  # the weakened-in formula is undetermined
    assert any(v.kind == META for h in g.hyps for v in judgment_vars(h))


def test_drule_consumes_hypothesis():
    spec = simple_prop()
    st = set_goal(spec, [spec.parse_goal("{X} ⊢ Y")], spec.parse_goal("{X} ⊢ Z"))
    st = drule_seq(0, "W")(st, 0)
    g = st.subgoals[0]
    assert len(g.hyps) == 1
    assert spec.print_judgment(g.target) == "{X} ⊢ Z"


def test_drule_bad_index():
    spec = simple_prop()
    st = set_goal(spec, [], spec.parse_goal("{X} ⊢ X"))
    with pytest.raises(KernelError):
        drule_seq(0, "W")(st, 0)


# ---------------------------------------------------------------------------
# Tacticals
# ---------------------------------------------------------------------------

def test_ethen_covers_all_produced_subgoals():
    spec = ill()
    from seqcraft.terms import multiset_of

    ctx = spec.parse_term("{a}", multiset_of(spec.signature.sort("LProp")))
    thm = prove_seq(
        spec,
        "{a} ⊎ {b} ⊢ a⊗b",
        ETHEN(rule_seqtac([("Γ", ctx)], "⊗R"), ruleseq("Ax")),
    )
    assert spec.print_judgment(thm.statement) == "{a} ⊎ {b} ⊢ a⊗b"


def test_ethenl_arity_mismatch():
    spec = simple_prop()
    st = set_goal(spec, [], spec.parse_goal("{X} ⊎ {Y} ⊢ X×Y"))
    with pytest.raises(KernelError):
        ETHENL(ruleseq("R×"), [ruleseq("Ax")])(st, 0)


def test_eorelse_recovers_from_failure():
    spec = simple_prop()
    st = set_goal(spec, [], spec.parse_goal("∅ ⊢ X×Y→Y×X"))
    st = EORELSE(ruleseq("Ax"), ruleseq("R→"))(st, 0)
    assert targets(spec, st) == ["{X×Y} ⊢ Y×X"]


def test_erepeat_runs_to_fixpoint():
    spec = simple_prop()
    st = set_goal(spec, [], spec.parse_goal("∅ ⊢ X→Y→Z→Z"))
    st = EREPEAT(ruleseq("R→"))(st, 0)
    assert targets(spec, st) == ["{X} ⊎ {Y} ⊎ {Z} ⊢ Z"]


def test_erepeat_never_fails():
    spec = simple_prop()
    st = set_goal(spec, [], spec.parse_goal("{X} ⊢ X"))
    st2 = EREPEAT(ruleseq("R→"))(st, 0)
    assert st2 == st


def test_eevery_empty_is_identity():
    spec = simple_prop()
    st = set_goal(spec, [], spec.parse_goal("{X} ⊢ X"))
    assert EEVERY([])(st, 0) == st
    assert IDTAC(st, 0) == st


# ---------------------------------------------------------------------------
# Witness invariance
# ---------------------------------------------------------------------------

def _ch_script():
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


def test_same_script_proves_plain_annotated_and_existential():
    ch = curry_howard()
    sp = simple_prop()
    plain = prove_seq(sp, "∅ ⊢ X×Y→Y×X", _ch_script())
    annotated = prove_seq(
        ch, "∅ ⊢ λx.(snd(Var x), fst(Var x)) : X×Y→Y×X", _ch_script()
    )
    existential = constr_prove(ch, "∅ ⊢ f : X×Y→Y×X", ["f"], _ch_script())
    assert len(plain.trace) == len(annotated.trace) == 7
    assert len(existential.trace) == 8  # meta_exists first
    (v, t), = existential.witness_bindings
    rendered = ch.print_term(t)
    assert rendered.startswith("λ")
    assert "(snd(Var " in rendered and "fst(Var " in rendered


def test_witness_binds_by_unification_on_axiom():
    ch = curry_howard()
    st = set_goal(
        ch, [], ch.parse_goal("{Var v : X} ⊢ w : X"), witnesses=("w",)
    )
    from seqcraft.tactics import meta_exists

    st = meta_exists(["w"])(st, 0)
    st = ruleseq("Ax")(st, 0)
    thm = qed(st)
    (v, t), = thm.witness_bindings
    assert ch.print_term(t) == "Var v"
