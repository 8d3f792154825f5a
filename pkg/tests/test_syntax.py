"""Printer/parser round-trips and lexer corner cases."""

import random

import pytest

from seqcraft.errors import ParseError
from seqcraft.logics import cll_cp, curry_howard, ill, simple_prop
from term_gen import random_judgment, random_term

ALL_LOGICS = [simple_prop, curry_howard, ill, cll_cp]


@pytest.mark.parametrize("loader", ALL_LOGICS)
def test_parse_print_identity_random_terms(loader):
    spec = loader()
    rng = random.Random(20260825)
    sorts = [s for s in spec.signature.sorts]
    for _ in range(200):
        sort = rng.choice(sorts)
        t = random_term(rng, spec.signature, sort, depth=4)
        text = spec.print_term(t)
        assert spec.parse_term(text, sort) == t, text


@pytest.mark.parametrize("loader", ALL_LOGICS)
def test_parse_print_identity_random_judgments(loader):
    spec = loader()
    rng = random.Random(9172)
    for _ in range(200):
        j = random_judgment(rng, spec)
        text = spec.print_judgment(j)
        assert spec.parse_goal(text) == j, text


def test_long_names_not_split_by_word_symbols():
    spec = curry_howard()
    lam = spec.signature.sort("Lam")
    t = spec.parse_term("Variable", lam)
    assert t.name == "Variable"


def test_lambda_binder_splits_from_name():
    spec = curry_howard()
    lam = spec.signature.sort("Lam")
    t = spec.parse_term("λquux.Var quux", lam)
    assert t.op == "lam"
    assert t.args[0].name == "quux"


def test_numeric_suffix_names():
    spec = simple_prop()
    prop = spec.signature.sort("Prop")
    t = spec.parse_term("X1×X2", prop)
    assert {a.name for a in t.args} == {"X1", "X2"}


def test_unbalanced_parens_error_with_position():
    spec = simple_prop()
    prop = spec.signature.sort("Prop")
    with pytest.raises(ParseError):
        spec.parse_term("(X×Y", prop)


def test_garbage_after_term_rejected():
    spec = simple_prop()
    prop = spec.signature.sort("Prop")
    with pytest.raises(ParseError):
        spec.parse_term("X×Y Z", prop)


def test_empty_context_only_prints_alone():
    spec = simple_prop()
    j = spec.parse_goal("∅ ⊎ {X} ⊢ X")
    assert spec.print_judgment(j) == "{X} ⊢ X"
    k = spec.parse_goal("∅ ⊎ ∅ ⊢ X")
    assert spec.print_judgment(k) == "∅ ⊢ X"


def test_multiset_chain_is_right_nested():
    spec = simple_prop()
    j = spec.parse_goal("{A} ⊎ {B} ⊎ {C} ⊢ A")
    ctx = j.args[0]
    assert ctx.op.endswith(".union")
    assert ctx.args[1].op.endswith(".union")


def test_bang_template_binds_tight():
    spec = ill()
    lp = spec.signature.sort("LProp")
    t = spec.parse_term("!a⊗b", lp)
    assert t.op == "tensor" and t.args[0].op == "bang"
    assert spec.print_term(t) == "!a⊗b"
    u = spec.parse_term("!(a⊗b)", lp)
    assert u.op == "bang"
    assert spec.print_term(u) == "!(a⊗b)"
