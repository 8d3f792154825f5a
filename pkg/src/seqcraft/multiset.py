"""Multiset views, normalization and associative-commutative matching.

A multiset-sorted term is built from empty, singleton and union operators
plus multiset-sorted variables.  ``view`` flattens such a term; flattening
absorbs the unit law (the empty multiset disappears) and associativity,
while commutativity is handled by the matcher itself.

``ac_match`` matches one multiset against another in three phases:

1. pattern elements that are ground under the current substitution are
   cancelled against syntactically equal target elements (identical
   multiset variables cancel too);
2. the remaining pattern elements are matched one-to-one against remaining
   target elements, backtracking over the choice of target element;
3. the pattern's multiset variables soak up whatever is left, assigned
   deterministically in canonical order: each variable takes one remaining
   part and the last variable takes all the rest (variables beyond the
   number of parts become empty).

Phase 3 never backtracks, so a pattern with two context variables yields a
single split per phase-2 choice.  Tactics that need other splits say so
explicitly by pre-binding the context variables.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Callable, Iterator

from .errors import SortError
from .terms import (
    Judgment,
    Op,
    Signature,
    Sort,
    Substitution,
    Term,
    Var,
    apply_subst,
    mk_empty,
    mk_singleton,
    mk_union,
    term_key,
    term_vars,
)

ElemMatcher = Callable[[Term, Term, Substitution], Iterator[Substitution]]


@dataclass(frozen=True)
class MultisetView:
    """Flattened multiset: base-sorted elements plus multiset variables."""

    base: Sort
    elements: tuple[Term, ...]
    msvars: tuple[Var, ...]

    def is_concrete(self) -> bool:
        return not self.msvars


def view(sig: Signature, t: Term) -> MultisetView:
    base = t.sort.is_multiset_of
    if base is None:
        raise SortError(f"expected a multiset-sorted term, got sort {t.sort.name!r}")
    elems: list[Term] = []
    msvars: list[Var] = []

    def go(u: Term) -> None:
        if isinstance(u, Var):
            msvars.append(u)
        elif sig.is_empty_op(u.op):
            pass
        elif sig.is_singleton_op(u.op):
            elems.append(u.args[0])
        elif sig.is_union_op(u.op):
            go(u.args[0])
            go(u.args[1])
        else:
            raise SortError(f"operator {u.op!r} is not a multiset constructor")

    go(t)
    return MultisetView(base, tuple(elems), tuple(msvars))


def view_to_term(sig: Signature, v: MultisetView) -> Term:
    """Rebuild a term: singletons in element order, then variables, unions
    nested to the right.  The empty view becomes the empty multiset."""
    parts: list[Term] = [mk_singleton(sig, e) for e in v.elements]
    parts.extend(v.msvars)
    if not parts:
        return mk_empty(sig, v.base)
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = mk_union(sig, p, out)
    return out


def normalize(sig: Signature, t: Term) -> Term:
    """Flatten and rebuild, dropping empty parts: the unit law as a function."""
    return view_to_term(sig, view(sig, t))


def normalize_judgment(sig: Signature, j: Judgment) -> Judgment:
    args = tuple(
        normalize(sig, a) if a.sort.is_multiset else a for a in j.args
    )
    return Judgment(j.name, args)


def multiset_equal(sig: Signature, t1: Term, t2: Term) -> bool:
    """Equality as bags, ignoring element order and unit laws."""
    v1, v2 = view(sig, t1), view(sig, t2)
    if Counter(map(term_key, v1.elements)) != Counter(map(term_key, v2.elements)):
        return False
    return Counter(map(term_key, v1.msvars)) == Counter(map(term_key, v2.msvars))


def judgment_equal(sig: Signature, j1: Judgment, j2: Judgment) -> bool:
    """Structural equality with multiset arguments compared as bags."""
    if j1.name != j2.name or len(j1.args) != len(j2.args):
        return False
    for a, b in zip(j1.args, j2.args):
        if a.sort != b.sort:
            return False
        if a.sort.is_multiset:
            if not multiset_equal(sig, a, b):
                return False
        elif a != b:
            return False
    return True


def _is_ground(t: Term) -> bool:
    return all(v.kind == "free" for v in term_vars(t))


def ac_match(
    sig: Signature,
    pattern: Term,
    target: Term,
    subst: Substitution,
    elem_match: ElemMatcher,
) -> Iterator[Substitution]:
    """Yield extensions of ``subst`` matching multiset ``pattern`` to ``target``.

    ``elem_match(p, t, s)`` yields substitutions matching one base-sorted
    element pair; it decides whether this is one-way matching or unification.
    """
    pv = view(sig, apply_subst(subst, pattern))
    tv = view(sig, apply_subst(subst, target))

    # Phase 1: cancel ground pattern elements against equal target elements.
    # A ground element without a twin stays for phase 2, where it may still
    # match a target element containing metavariables.
    tgt_elems = list(tv.elements)
    pending: list[Term] = []
    for p in pv.elements:
        if _is_ground(p) and p in tgt_elems:
            tgt_elems.remove(p)
        else:
            pending.append(p)

    tgt_vars = list(tv.msvars)
    pat_vars: list[Var] = []
    for v in pv.msvars:
        if v in tgt_vars:
            tgt_vars.remove(v)
        else:
            pat_vars.append(v)

    if len(pending) > len(tgt_elems):
        return

    yield from _phase2(sig, pending, tgt_elems, tgt_vars, pat_vars, subst, elem_match)


def _phase2(
    sig: Signature,
    pending: list[Term],
    tgt_elems: list[Term],
    tgt_vars: list[Var],
    pat_vars: list[Var],
    subst: Substitution,
    elem_match: ElemMatcher,
) -> Iterator[Substitution]:
    if not pending:
        yield from _phase3(sig, tgt_elems, tgt_vars, pat_vars, subst)
        return
    p, rest = pending[0], pending[1:]
    seen: set[str] = set()
    for i, t in enumerate(tgt_elems):
        t_now = apply_subst(subst, t)
        key = term_key(t_now)
        if key in seen:
            continue
        seen.add(key)
        for s2 in elem_match(apply_subst(subst, p), t_now, subst):
            remaining = tgt_elems[:i] + tgt_elems[i + 1:]
            yield from _phase2(sig, rest, remaining, tgt_vars, pat_vars, s2, elem_match)


def _phase3(
    sig: Signature,
    tgt_elems: list[Term],
    tgt_vars: list[Var],
    pat_vars: list[Var],
    subst: Substitution,
) -> Iterator[Substitution]:
    parts: list[Term] = [
        mk_singleton(sig, apply_subst(subst, e))
        for e in sorted(tgt_elems, key=term_key)
    ]
    parts.extend(sorted(tgt_vars, key=term_key))

    ordered: list[Var] = []
    counts = Counter(pat_vars)
    for v in sorted(counts, key=term_key):
        ordered.append(v)
    if any(n > 1 for n in counts.values()):
        # a repeated context variable can only absorb nothing
        if parts:
            return
        s = subst
        for v in ordered:
            s = _assign(sig, s, v, mk_empty(sig, v.sort.is_multiset_of))
            if s is None:
                return
        yield s
        return

    if not ordered:
        if parts:
            return
        yield subst
        return

    s = subst
    k, m = len(ordered), len(parts)
    if m == 0:
        pieces = [mk_empty(sig, v.sort.is_multiset_of) for v in ordered]
    elif k <= m:
        pieces = parts[: k - 1] + [_union_all(sig, parts[k - 1:])]
    else:
        pieces = parts + [mk_empty(sig, v.sort.is_multiset_of) for v in ordered[m:]]
    for v, piece in zip(ordered, pieces):
        s = _assign(sig, s, v, piece)
        if s is None:
            return
    yield s


def _union_all(sig: Signature, parts: list[Term]) -> Term:
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = mk_union(sig, p, out)
    return out


def _assign(sig, s: Substitution, v: Var, t: Term) -> Substitution | None:
    bound = s.get(v)
    if bound is not None:
        return s if multiset_equal(sig, apply_subst(s, bound), t) else None
    return s.bind(v, t)
