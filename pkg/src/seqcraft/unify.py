"""First-order matching and unification over sorted terms and judgments.

Matching is one-way: only pattern variables (schematic or meta) are bound,
everything in the target is rigid.  Unification binds variables on both
sides and performs the occurs check.  Free variables are rigid constants in
both modes.

Substitutions are kept idempotent: every new binding is applied to the
ranges of the existing ones, so a single application pass fully
instantiates a term.

Judgment-level matching processes term-sorted argument pairs before
multiset-sorted ones, so ordinary arguments pin down schematic variables
before the context matcher runs.  Multiset arguments go through ``ac_match``
and may yield several solutions.
"""

from __future__ import annotations

from typing import Iterator

from .multiset import ac_match
from .terms import (
    FREE,
    META,
    SCHEMATIC,
    Judgment,
    Op,
    Signature,
    Substitution,
    Term,
    Var,
    apply_subst,
    term_vars,
)


def extend(s: Substitution, v: Var, t: Term) -> Substitution:
    """Add ``v -> t`` keeping the substitution idempotent."""
    one = Substitution({v: t})
    updated = {w: apply_subst(one, u) for w, u in s.items()}
    updated[v] = t
    return Substitution(updated)


def occurs_in(v: Var, t: Term) -> bool:
    return any(w == v for w in term_vars(t))


# ---------------------------------------------------------------------------
# Matching
# ---------------------------------------------------------------------------

def match_term(
    sig: Signature, pattern: Term, target: Term, subst: Substitution
) -> Substitution | None:
    """Extend ``subst`` so the pattern becomes the target, or None."""
    p = apply_subst(subst, pattern)
    return _match(sig, p, target, subst)


def _match(sig, p: Term, t: Term, s: Substitution) -> Substitution | None:
    if isinstance(p, Var):
        if p.kind == FREE:
            return s if p == t else None
        bound = s.get(p)
        if bound is not None:
            return s if apply_subst(s, bound) == t else None
        if p.sort != t.sort:
            return None
        return extend(s, p, t)
    if isinstance(t, Var):
        return None
    if p.op != t.op or len(p.args) != len(t.args):
        return None
    for pa, ta in zip(p.args, t.args):
        s = _match(sig, apply_subst(s, pa), ta, s)
        if s is None:
            return None
    return s


# ---------------------------------------------------------------------------
# Unification
# ---------------------------------------------------------------------------

def unify(
    sig: Signature, t1: Term, t2: Term, subst: Substitution
) -> Substitution | None:
    """Extend ``subst`` to a unifier of the two terms, or None."""
    a = apply_subst(subst, t1)
    b = apply_subst(subst, t2)
    return _unify(sig, a, b, subst)


def _unify(sig, a: Term, b: Term, s: Substitution) -> Substitution | None:
    if a == b:
        return s
    if isinstance(a, Var) and a.kind != FREE:
        if isinstance(b, Var) and b.kind != FREE:
            # prefer keeping metavariables alive: a schematic meeting a meta
            # is the one that gets bound
            if a.kind == META and b.kind == SCHEMATIC:
                return extend(s, b, a)
            return extend(s, a, b)
        return None if occurs_in(a, b) else extend(s, a, b)
    if isinstance(b, Var) and b.kind != FREE:
        return None if occurs_in(b, a) else extend(s, b, a)
    if isinstance(a, Var) or isinstance(b, Var):
        return None
    if a.op != b.op or len(a.args) != len(b.args):
        return None
    for xa, xb in zip(a.args, b.args):
        s = _unify(sig, apply_subst(s, xa), apply_subst(s, xb), s)
        if s is None:
            return None
    return s


# ---------------------------------------------------------------------------
# Judgment-level entry points
# ---------------------------------------------------------------------------

def _match_elems(sig) -> "callable":
    def f(p: Term, t: Term, s: Substitution) -> Iterator[Substitution]:
        s2 = match_term(sig, p, t, s)
        if s2 is not None:
            yield s2
    return f


def _unify_elems(sig) -> "callable":
    def f(p: Term, t: Term, s: Substitution) -> Iterator[Substitution]:
        s2 = unify(sig, p, t, s)
        if s2 is not None:
            yield s2
    return f


def _judgment_pairs(pat: Judgment, tgt: Judgment):
    """Argument pairs, term-sorted ones first."""
    terms, multisets = [], []
    for p, t in zip(pat.args, tgt.args):
        (multisets if p.sort.is_multiset else terms).append((p, t))
    return terms, multisets


def match_judgment(
    sig: Signature, pattern: Judgment, target: Judgment, subst: Substitution
) -> Iterator[Substitution]:
    """All matches of a judgment pattern against a rigid target judgment."""
    if pattern.name != target.name or len(pattern.args) != len(target.args):
        return
    terms, multisets = _judgment_pairs(pattern, target)
    s: Substitution | None = subst
    for p, t in terms:
        s = match_term(sig, p, t, s)
        if s is None:
            return
    yield from _over_multisets(sig, multisets, s, _match_elems(sig))


def unify_judgment(
    sig: Signature, pattern: Judgment, target: Judgment, subst: Substitution
) -> Iterator[Substitution]:
    """All unifiers of two judgments; both sides may contain metavariables."""
    if pattern.name != target.name or len(pattern.args) != len(target.args):
        return
    terms, multisets = _judgment_pairs(pattern, target)
    s: Substitution | None = subst
    for p, t in terms:
        s = unify(sig, p, t, s)
        if s is None:
            return
    yield from _over_multisets(sig, multisets, s, _unify_elems(sig))


def _over_multisets(sig, pairs, subst, elem_match) -> Iterator[Substitution]:
    if not pairs:
        yield subst
        return
    (p, t), rest = pairs[0], pairs[1:]
    for s2 in ac_match(sig, p, t, subst, elem_match):
        yield from _over_multisets(sig, rest, s2, elem_match)
