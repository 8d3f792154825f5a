"""Sorted first-order terms, signatures, substitutions and fresh names.

Terms live in a user-declared signature.  A variable carries one of three
kinds:

* ``free``      -- ordinary object-level variables appearing in goals;
* ``schematic`` -- rule-side placeholders, instantiated per application;
* ``meta``      -- goal-side placeholders shared across subgoals and
                   instantiated gradually (construction proofs).

Multiset sorts are derived from base sorts (one level deep, never nested)
and come with three built-in operators: empty, singleton and union.  Users
never declare those; they are generated when a judgment mentions a multiset
sort.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Union

from .errors import SignatureError, SortError, UnknownOperatorError

FREE = "free"
SCHEMATIC = "schematic"
META = "meta"
KINDS = (FREE, SCHEMATIC, META)


@dataclass(frozen=True)
class Sort:
    """A sort; multiset sorts point at their base sort."""

    name: str
    is_multiset_of: Optional["Sort"] = None

    def __post_init__(self):
        if self.is_multiset_of is not None and self.is_multiset_of.is_multiset_of is not None:
            raise SortError(f"multiset sorts cannot be nested: {self.name}")

    @property
    def is_multiset(self) -> bool:
        return self.is_multiset_of is not None

    def __str__(self) -> str:
        return self.name


def multiset_of(base: Sort) -> Sort:
    """The multiset sort over ``base``."""
    if base.is_multiset:
        raise SortError(f"cannot form a multiset of multiset sort {base.name}")
    return Sort(f"multiset {base.name}", is_multiset_of=base)


# ---------------------------------------------------------------------------
# Display information attached to operators and judgments
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class InfixInfo:
    """Binary operator displayed infix: ``a<symbol>b``, or with spaces when
    ``spaced`` is set."""

    symbol: str
    precedence: int
    assoc: str  # "left" or "right"
    aliases: tuple[str, ...] = ()
    spaced: bool = False

    def __post_init__(self):
        if self.assoc not in ("left", "right"):
            raise SignatureError(f"infix associativity must be left/right, got {self.assoc!r}")


@dataclass(frozen=True)
class TemplateInfo:
    """Operator displayed through a template such as ``λ%1. %2`` or ``(%1, %2)``.

    Placeholders ``%i`` refer to the i-th argument (1-based) and may appear in
    any order.  Literal pieces become atomic tokens of the term lexer.
    """

    template: str
    precedence: int = 50
    aliases: tuple[str, ...] = ()


Display = Union[InfixInfo, TemplateInfo, None]


@dataclass(frozen=True)
class OpDecl:
    name: str
    arg_sorts: tuple[Sort, ...]
    result: Sort
    display: Display = None


@dataclass(frozen=True)
class JudgmentDecl:
    """A judgment symbol with its argument sorts and display templates.

    The first template is the canonical rendering; all of them parse.
    Without a template the judgment is written ``name(arg, ...)``.
    """

    name: str
    arg_sorts: tuple[Sort, ...]
    templates: tuple[str, ...] = ()


def _builtin_ops(ms: Sort) -> list[OpDecl]:
    base = ms.is_multiset_of
    assert base is not None
    return [
        OpDecl(empty_name(base), (), ms),
        OpDecl(singleton_name(base), (base,), ms),
        OpDecl(union_name(base), (ms, ms), ms),
    ]


def empty_name(base: Sort) -> str:
    return f"{base.name}.empty"


def singleton_name(base: Sort) -> str:
    return f"{base.name}.single"


def union_name(base: Sort) -> str:
    return f"{base.name}.union"


@dataclass(frozen=True)
class Signature:
    """Sorts, operators and judgment symbols of a logic.

    ``operators`` includes the generated multiset built-ins.  Multiset sorts
    are those referenced by judgment argument sorts.
    """

    name: str
    sorts: tuple[Sort, ...]
    operators: dict[str, OpDecl]
    judgments: dict[str, JudgmentDecl]

    def operator(self, name: str) -> OpDecl:
        try:
            return self.operators[name]
        except KeyError:
            raise UnknownOperatorError(f"unknown operator {name!r}") from None

    def judgment(self, name: str) -> JudgmentDecl:
        try:
            return self.judgments[name]
        except KeyError:
            raise SignatureError(f"unknown judgment {name!r}") from None

    def sort(self, name: str) -> Sort:
        for s in self.sorts:
            if s.name == name:
                return s
        raise SignatureError(f"unknown sort {name!r}")

    def multiset_sorts(self) -> list[Sort]:
        out = []
        for j in self.judgments.values():
            for s in j.arg_sorts:
                if s.is_multiset and s not in out:
                    out.append(s)
        return out

    def is_empty_op(self, name: str) -> bool:
        return name.endswith(".empty") and name in self.operators

    def is_singleton_op(self, name: str) -> bool:
        return name.endswith(".single") and name in self.operators

    def is_union_op(self, name: str) -> bool:
        return name.endswith(".union") and name in self.operators


def make_signature(
    name: str,
    sorts: Iterable[Sort],
    operators: Iterable[OpDecl],
    judgments: Iterable[JudgmentDecl],
) -> Signature:
    """Validate and assemble a signature, generating multiset built-ins."""
    sort_list = list(sorts)
    names = [s.name for s in sort_list]
    if len(set(names)) != len(names):
        raise SignatureError(f"duplicate sort names in {names}")

    judg_map: dict[str, JudgmentDecl] = {}
    ms_sorts: list[Sort] = []
    for j in judgments:
        if j.name in judg_map:
            raise SignatureError(f"duplicate judgment {j.name!r}")
        for s in j.arg_sorts:
            base = s.is_multiset_of if s.is_multiset else s
            if base not in sort_list:
                raise SignatureError(f"judgment {j.name!r} uses undeclared sort {base.name!r}")
            if s.is_multiset and s not in ms_sorts:
                ms_sorts.append(s)
        judg_map[j.name] = j

    op_map: dict[str, OpDecl] = {}
    symbols: dict[str, str] = {}
    for op in operators:
        if op.name in op_map:
            raise SignatureError(f"duplicate operator {op.name!r}")
        for s in op.arg_sorts + (op.result,):
            if s.is_multiset:
                raise SignatureError(
                    f"operator {op.name!r} uses multiset sort {s.name!r}; "
                    "multiset arguments are reserved for judgments"
                )
            if s not in sort_list:
                raise SignatureError(f"operator {op.name!r} uses undeclared sort {s.name!r}")
        if isinstance(op.display, InfixInfo):
            if len(op.arg_sorts) != 2:
                raise SignatureError(f"infix operator {op.name!r} must be binary")
            for sym in (op.display.symbol,) + op.display.aliases:
                if sym in symbols:
                    raise SignatureError(f"infix symbol {sym!r} declared twice")
                symbols[sym] = op.name
        op_map[op.name] = op

    for ms in ms_sorts:
        for op in _builtin_ops(ms):
            op_map[op.name] = op

    return Signature(name, tuple(sort_list), op_map, judg_map)


# ---------------------------------------------------------------------------
# Terms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Var:
    name: str
    kind: str
    sort: Sort

    def __post_init__(self):
        if self.kind not in KINDS:
            raise SortError(f"bad variable kind {self.kind!r}")

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Op:
    op: str
    args: tuple["Term", ...]
    sort: Sort


Term = Union[Var, Op]


def mk_op(sig: Signature, name: str, args: Iterable[Term]) -> Op:
    """Build a well-sorted operator application, checking arity and sorts."""
    decl = sig.operator(name)
    args = tuple(args)
    if len(args) != len(decl.arg_sorts):
        raise SortError(
            f"operator {name!r} expects {len(decl.arg_sorts)} arguments, got {len(args)}"
        )
    for a, want in zip(args, decl.arg_sorts):
        if a.sort != want:
            raise SortError(
                f"argument of {name!r} has sort {a.sort.name!r}, expected {want.name!r}"
            )
    return Op(name, args, decl.result)


def mk_empty(sig: Signature, base: Sort) -> Op:
    return mk_op(sig, empty_name(base), ())


def mk_singleton(sig: Signature, elem: Term) -> Op:
    return mk_op(sig, singleton_name(elem.sort), (elem,))


def mk_union(sig: Signature, left: Term, right: Term) -> Op:
    base = left.sort.is_multiset_of
    if base is None:
        raise SortError(f"union operands must be multiset-sorted, got {left.sort.name!r}")
    return mk_op(sig, union_name(base), (left, right))


def check_sorted(sig: Signature, t: Term) -> bool:
    """True iff ``t`` is well-sorted under ``sig``.

    Raises UnknownOperatorError for operators the signature does not declare
    (a distinct condition from a sort mismatch, which just yields False).
    """
    if isinstance(t, Var):
        return True
    decl = sig.operator(t.op)  # raises UnknownOperatorError
    if len(t.args) != len(decl.arg_sorts):
        return False
    if t.sort != decl.result:
        return False
    return all(a.sort == want and check_sorted(sig, a)
               for a, want in zip(t.args, decl.arg_sorts))


@dataclass(frozen=True)
class Judgment:
    """An instance of a judgment symbol applied to argument terms."""

    name: str
    args: tuple[Term, ...]


def check_judgment(sig: Signature, j: Judgment) -> bool:
    decl = sig.judgment(j.name)
    if len(j.args) != len(decl.arg_sorts):
        return False
    return all(a.sort == want and check_sorted(sig, a)
               for a, want in zip(j.args, decl.arg_sorts))


def term_vars(t: Term) -> Iterator[Var]:
    """All variable occurrences in ``t`` (with repetitions)."""
    if isinstance(t, Var):
        yield t
    else:
        for a in t.args:
            yield from term_vars(a)


def judgment_vars(j: Judgment) -> Iterator[Var]:
    for a in j.args:
        yield from term_vars(a)


def term_key(t: Term) -> str:
    """A stable, injective key used wherever a canonical term order is needed."""
    if isinstance(t, Var):
        return f"v:{t.kind}:{t.name}:{t.sort.name}"
    return f"o:{t.op}({','.join(term_key(a) for a in t.args)})"


# ---------------------------------------------------------------------------
# Substitutions
# ---------------------------------------------------------------------------

class Substitution:
    """A finite, sort-preserving map from schematic/meta variables to terms."""

    __slots__ = ("_map",)

    def __init__(self, mapping: dict[Var, Term] | None = None):
        m: dict[Var, Term] = {}
        if mapping:
            for v, t in mapping.items():
                if v.kind == FREE:
                    raise SortError(f"cannot bind free variable {v.name!r}")
                if v.sort != t.sort:
                    raise SortError(
                        f"binding for {v.name!r} has sort {t.sort.name!r}, "
                        f"expected {v.sort.name!r}"
                    )
                m[v] = t
        self._map = m

    def __bool__(self) -> bool:
        return bool(self._map)

    def __eq__(self, other) -> bool:
        return isinstance(other, Substitution) and self._map == other._map

    def __len__(self) -> int:
        return len(self._map)

    def __contains__(self, v: Var) -> bool:
        return v in self._map

    def get(self, v: Var) -> Term | None:
        return self._map.get(v)

    def domain(self) -> list[Var]:
        return list(self._map)

    def items(self) -> list[tuple[Var, Term]]:
        return list(self._map.items())

    def bind(self, v: Var, t: Term) -> "Substitution":
        """A new substitution extended with ``v -> t``."""
        new = dict(self._map)
        new[v] = t
        return Substitution(new)

    def restrict(self, keep) -> "Substitution":
        return Substitution({v: t for v, t in self._map.items() if keep(v)})

    def __repr__(self) -> str:
        inner = ", ".join(
            f"{term_key(t)}/{v.name}" for v, t in sorted(self._map.items(), key=lambda it: it[0].name)
        )
        return "{" + inner + "}"


EMPTY_SUBST = Substitution()


def apply_subst(s: Substitution, t: Term) -> Term:
    """Replace every bound variable of ``t``; unbound variables unchanged."""
    if isinstance(t, Var):
        bound = s.get(t)
        return bound if bound is not None else t
    if not s:
        return t
    return Op(t.op, tuple(apply_subst(s, a) for a in t.args), t.sort)


def apply_subst_judgment(s: Substitution, j: Judgment) -> Judgment:
    return Judgment(j.name, tuple(apply_subst(s, a) for a in j.args))


def compose_subst(s1: Substitution, s2: Substitution) -> Substitution:
    """The substitution with ``apply(compose(s1, s2), t) = apply(s2, apply(s1, t))``."""
    for v1 in s1.domain():
        for v2 in s2.domain():
            if v1.name == v2.name and v1.kind == v2.kind and v1.sort != v2.sort:
                raise SortError(
                    f"conflicting sorts for {v1.name!r}: "
                    f"{v1.sort.name!r} vs {v2.sort.name!r}"
                )
    new: dict[Var, Term] = {v: apply_subst(s2, t) for v, t in s1.items()}
    for v, t in s2.items():
        if v not in s1:
            new[v] = t
    return Substitution(new)


# ---------------------------------------------------------------------------
# Fresh names
# ---------------------------------------------------------------------------

def fresh_var(counter: int, base: str, kind: str, sort: Sort) -> tuple[Var, int]:
    """A variable named ``base + counter`` (trailing digits of ``base`` stripped
    so the name determines the counter) and the advanced counter."""
    stem = base.rstrip("0123456789") or "v"
    return Var(f"{stem}{counter}", kind, sort), counter + 1


def max_suffix(names: Iterable[str]) -> int:
    """The largest numeric suffix among ``names``, or -1."""
    best = -1
    for n in names:
        i = len(n)
        while i > 0 and n[i - 1].isdigit():
            i -= 1
        if i < len(n):
            best = max(best, int(n[i:]))
    return best
