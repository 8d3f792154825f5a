"""Random well-sorted term and judgment generators for round-trip tests."""

import random

from seqcraft.logic import LogicSpec
from seqcraft.multiset import MultisetView, view_to_term
from seqcraft.terms import FREE, Judgment, Signature, Sort, Term, Var, mk_op

NAME_POOL = ["a", "b", "c", "u", "w", "x", "y", "z", "X", "Y", "Z", "Q"]


def _var_names(sig: Signature) -> list[str]:
    return [n for n in NAME_POOL if n not in sig.operators]


def random_term(
    rng: random.Random, sig: Signature, sort: Sort, depth: int
) -> Term:
    """A ground term of the sort; multiset sorts get canonical structure."""
    if sort.is_multiset:
        k = rng.randint(0, 3)
        elems = tuple(
            random_term(rng, sig, sort.is_multiset_of, depth - 1) for _ in range(k)
        )
        return view_to_term(sig, MultisetView(sort.is_multiset_of, elems, ()))
    ops = [
        o
        for o in sig.operators.values()
        if o.result == sort and not o.name.split(".")[-1] in ("empty", "single", "union")
    ]
    nullary = [o for o in ops if not o.arg_sorts]
    compound = [o for o in ops if o.arg_sorts]
    names = _var_names(sig)
    if depth <= 0 or not compound or rng.random() < 0.3:
        if nullary and rng.random() < 0.4:
            return mk_op(sig, rng.choice(nullary).name, [])
        return Var(rng.choice(names), FREE, sort)
    op = rng.choice(compound)
    args = [random_term(rng, sig, s, depth - 1) for s in op.arg_sorts]
    return mk_op(sig, op.name, args)


def random_judgment(rng: random.Random, spec: LogicSpec, depth: int = 3) -> Judgment:
    sig = spec.signature
    decl = rng.choice(list(sig.judgments.values()))
    args = tuple(random_term(rng, sig, s, depth) for s in decl.arg_sorts)
    return Judgment(decl.name, args)
