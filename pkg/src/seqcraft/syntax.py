"""Concrete syntax driven by a signature's display declarations.

A ``Syntax`` object bundles the lexer symbol table, the Pratt parser tables
and the printer for one signature.  Display declarations come in two forms:

* infix operators with a precedence and associativity;
* templates such as ``λ%1.%2``, ``Var %1``, ``(%1, %2)`` or ``%1⊥``, whose
  literal pieces become lexer symbols.

Multisets have fixed structural notation: ``∅`` (ASCII ``{}m``), ``{t}``
(ASCII ``'t'``), ``⊎`` (ASCII ``+m``) and ``{t1, t2}`` as a shorthand for a
union of singletons.  Union chains parse right-nested, matching the
canonical form the normalizer produces.

Parsing is sort-directed: the parser first builds an untyped tree, then
resolves it top-down against expected sorts.  Unknown identifiers become
variables of the expected sort; the caller decides their kind (free in
goals, schematic in rule files).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Optional

from .errors import ParseError, SignatureError, SortError
from .terms import (
    FREE,
    SCHEMATIC,
    InfixInfo,
    Judgment,
    JudgmentDecl,
    OpDecl,
    Signature,
    Sort,
    TemplateInfo,
    Term,
    Var,
    mk_empty,
    mk_op,
    mk_singleton,
    mk_union,
)

ATOM_BP = 1000

STRUCTURAL = ("==>", ":=", "{}m", "+m", "(", ")", ",", "{", "}", "[", "]", "⊎", "∅", "'")

KindFn = Callable[[str], str]


def _is_name_char(c: str) -> bool:
    return c.isalnum() or c == "_"


def _is_word_symbol(sym: str) -> bool:
    """ASCII identifier-shaped symbols ("Var") need word boundaries; other
    letter-valued symbols such as λ act as plain punctuation."""
    return all(c.isascii() and _is_name_char(c) for c in sym)


def _template_pieces(template: str) -> list:
    """Split ``λ%1.%2`` into [("lit","λ"), ("ph",1), ("lit","."), ("ph",2)]."""
    out = []
    for i, chunk in enumerate(re.split(r"%(\d+)", template)):
        if i % 2 == 1:
            out.append(("ph", int(chunk)))
        else:
            for word in chunk.split():
                out.append(("lit", word))
    return out


@dataclass(frozen=True)
class Token:
    kind: str  # "name" | "symbol" | "end"
    text: str
    pos: int


class Lexer:
    def __init__(self, symbols: set[str]):
        self.symbols = sorted(symbols, key=len, reverse=True)
        # letter-valued punctuation (λ, ⊥ is not alnum but λ is) must also
        # terminate names, or "λx" would lex as one identifier
        self.breakers = {
            c
            for sym in symbols
            if not _is_word_symbol(sym)
            for c in sym
            if _is_name_char(c)
        }

    def tokenize(self, text: str) -> list[Token]:
        out = []
        i, n = 0, len(text)
        while i < n:
            c = text[i]
            if c.isspace():
                i += 1
                continue
            sym = self._symbol_at(text, i)
            if sym is not None:
                out.append(Token("symbol", sym, i))
                i += len(sym)
                continue
            if _is_name_char(c) and not c.isdigit():
                j = i
                while j < n and _is_name_char(text[j]) and text[j] not in self.breakers:
                    j += 1
                out.append(Token("name", text[i:j], i))
                i = j
                continue
            raise ParseError(f"unexpected character {c!r}", col=i)
        out.append(Token("end", "", n))
        return out

    def _symbol_at(self, text: str, i: int) -> Optional[str]:
        for sym in self.symbols:
            if not text.startswith(sym, i):
                continue
            # identifier-shaped symbols such as "Var" need a word boundary
            if _is_word_symbol(sym):
                j = i + len(sym)
                if j < len(text) and _is_name_char(text[j]):
                    continue
            return sym
        return None


# ---------------------------------------------------------------------------
# Untyped parse trees: ("var", name) | ("call", op, [tree]) |
# ("empty",) | ("single", tree) | ("union", tree, tree)
# ---------------------------------------------------------------------------


class Syntax:
    """Lexer, parser and printer for one signature."""

    def __init__(self, sig: Signature):
        self.sig = sig
        self.infix: dict[str, OpDecl] = {}
        self.nud_templates: dict[str, tuple[OpDecl, list]] = {}
        self.led_templates: dict[str, tuple[OpDecl, list]] = {}
        self.paren_pair: Optional[OpDecl] = None
        self.judgment_templates: list[tuple[JudgmentDecl, list]] = []
        symbols = set(STRUCTURAL)

        for op in sig.operators.values():
            d = op.display
            if isinstance(d, InfixInfo):
                for sym in (d.symbol,) + d.aliases:
                    self.infix[sym] = op
                    symbols.add(sym)
            elif isinstance(d, TemplateInfo):
                pieces = _template_pieces(d.template)
                for kind, val in pieces:
                    if kind == "lit":
                        symbols.add(val)
                self._register_template(op, pieces)
                for alias in d.aliases:
                    alias_pieces = _template_pieces(alias)
                    for kind, val in alias_pieces:
                        if kind == "lit":
                            symbols.add(val)
                    self._register_template(op, alias_pieces)

        for j in sig.judgments.values():
            templates = j.templates or (
                j.name + "(" + ", ".join(f"%{i+1}" for i in range(len(j.arg_sorts))) + ")",
            )
            for tpl in templates:
                pieces = _template_pieces(tpl)
                for kind, val in pieces:
                    if kind == "lit":
                        symbols.add(val)
                self.judgment_templates.append((j, pieces))

        self.lexer = Lexer(symbols)

    def _register_template(self, op: OpDecl, pieces: list) -> None:
        if not pieces:
            raise SignatureError(f"empty display template for {op.name!r}")
        kind, val = pieces[0]
        if kind == "lit":
            if val == "(" and len(pieces) == 5 and pieces[2] == ("lit", ","):
                # the paren-comma form (a, b) shares "(" with grouping
                if self.paren_pair is not None:
                    raise SignatureError("only one (%1, %2) display is supported")
                self.paren_pair = op
            else:
                if val in self.nud_templates or val in self.infix:
                    raise SignatureError(f"display token {val!r} declared twice")
                self.nud_templates[val] = (op, pieces)
        else:
            if len(pieces) < 2 or pieces[1][0] != "lit":
                raise SignatureError(
                    f"template for {op.name!r} must have a literal after the placeholder"
                )
            lead = pieces[1][1]
            if lead in self.led_templates or lead in self.infix:
                raise SignatureError(f"display token {lead!r} declared twice")
            self.led_templates[lead] = (op, pieces)

    # -- parsing ------------------------------------------------------------

    def parse_term(self, text: str, expected: Sort, kind_fn: KindFn) -> Term:
        p = _Parser(self, self.lexer.tokenize(text))
        tree = p.parse_multiset() if expected.is_multiset else p.parse_expr(0)
        p.expect_end()
        return self.resolve(tree, expected, kind_fn)

    def parse_judgment(self, text: str, kind_fn: KindFn) -> Judgment:
        tokens = self.lexer.tokenize(text)
        errors = []
        for decl, pieces in self.judgment_templates:
            p = _Parser(self, tokens)
            try:
                args_raw = p.parse_judgment_pieces(decl, pieces)
                p.expect_end()
            except ParseError as e:
                errors.append(e)
                continue
            args = tuple(
                self.resolve(raw, sort, kind_fn)
                for raw, sort in zip(args_raw, decl.arg_sorts)
            )
            return Judgment(decl.name, args)
        if errors:
            raise errors[-1]
        raise ParseError("no judgment form matched")

    def resolve(self, tree, expected: Sort, kind_fn: KindFn) -> Term:
        tag = tree[0]
        if tag == "var":
            name = tree[1]
            decl = self.sig.operators.get(name)
            if decl is not None and not decl.arg_sorts:
                if decl.result != expected:
                    raise SortError(
                        f"{name!r} has sort {decl.result.name!r}, expected {expected.name!r}"
                    )
                return mk_op(self.sig, name, ())
            return Var(name, kind_fn(name), expected)
        if tag == "call":
            _, name, args_raw = tree
            decl = self.sig.operator(name)
            if decl.result != expected:
                raise SortError(
                    f"{name!r} has sort {decl.result.name!r}, expected {expected.name!r}"
                )
            if len(args_raw) != len(decl.arg_sorts):
                raise SortError(
                    f"{name!r} expects {len(decl.arg_sorts)} arguments, got {len(args_raw)}"
                )
            args = tuple(
                self.resolve(raw, sort, kind_fn)
                for raw, sort in zip(args_raw, decl.arg_sorts)
            )
            return mk_op(self.sig, name, args)
        base = expected.is_multiset_of
        if base is None:
            raise SortError(f"multiset syntax used where sort {expected.name!r} is expected")
        if tag == "empty":
            return mk_empty(self.sig, base)
        if tag == "single":
            return mk_singleton(self.sig, self.resolve(tree[1], base, kind_fn))
        if tag == "union":
            return mk_union(
                self.sig,
                self.resolve(tree[1], expected, kind_fn),
                self.resolve(tree[2], expected, kind_fn),
            )
        raise AssertionError(f"bad parse tree node {tag!r}")

    # -- printing -----------------------------------------------------------

    def print_term(self, t: Term, min_bp: int = 0) -> str:
        if t.sort.is_multiset:
            return self._print_multiset(t)
        if isinstance(t, Var):
            return t.name
        decl = self.sig.operator(t.op)
        d = decl.display
        if isinstance(d, InfixInfo):
            sp = " " if d.spaced else ""
            lbp = d.precedence + (0 if d.assoc == "left" else 1)
            rbp = d.precedence + (1 if d.assoc == "left" else 0)
            s = (
                self.print_term(t.args[0], lbp)
                + sp + d.symbol + sp
                + self.print_term(t.args[1], rbp)
            )
            return f"({s})" if d.precedence < min_bp else s
        if isinstance(d, TemplateInfo):
            pieces = _template_pieces(d.template)
            s = self._fill_template(d.template, pieces, d.precedence, t)
            if d.template.startswith("(") and d.template.endswith(")"):
                return s
            return f"({s})" if d.precedence < min_bp else s
        if not t.args:
            return t.op
        inner = ", ".join(self.print_term(a, 0) for a in t.args)
        return f"{t.op}({inner})"

    def _fill_template(self, template: str, pieces, prec: int, t: Term) -> str:
        subs = {}
        for idx, (kind, val) in enumerate(pieces):
            if kind != "ph":
                continue
            at_edge = idx == 0 or idx == len(pieces) - 1
            subs[val] = self.print_term(t.args[val - 1], prec if at_edge else 0)
        return re.sub(r"%(\d+)", lambda m: subs[int(m.group(1))], template)

    def _print_multiset(self, t: Term) -> str:
        parts = []

        def go(u: Term) -> None:
            if isinstance(u, Var):
                parts.append(u.name)
            elif self.sig.is_union_op(u.op):
                go(u.args[0])
                go(u.args[1])
            elif self.sig.is_singleton_op(u.op):
                parts.append("{" + self.print_term(u.args[0], 0) + "}")
            else:
                parts.append("∅")

        go(t)
        if not parts:
            return "∅"
        return " ⊎ ".join(parts)

    def print_judgment(self, j: Judgment) -> str:
        decl = self.sig.judgment(j.name)
        if not decl.templates:
            inner = ", ".join(self.print_term(a, 0) for a in j.args)
            return f"{j.name}({inner})"
        template = decl.templates[0]
        subs = {i + 1: self.print_term(a, 0) for i, a in enumerate(j.args)}
        return re.sub(r"%(\d+)", lambda m: subs[int(m.group(1))], template)


class _Parser:
    def __init__(self, syntax: Syntax, tokens: list[Token]):
        self.syn = syntax
        self.tokens = tokens
        self.i = 0

    def peek(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, text: str) -> None:
        tok = self.advance()
        if tok.text != text:
            raise ParseError(f"expected {text!r}, found {tok.text or 'end of input'!r}",
                             col=tok.pos)

    def expect_end(self) -> None:
        tok = self.peek()
        if tok.kind != "end":
            raise ParseError(f"unexpected trailing input {tok.text!r}", col=tok.pos)

    # -- terms --------------------------------------------------------------

    def parse_expr(self, rbp: int):
        left = self._nud()
        while True:
            tok = self.peek()
            if tok.kind != "symbol":
                break
            op = self.syn.infix.get(tok.text)
            if op is not None:
                if op.display.precedence <= rbp:
                    break
                self.advance()
                next_bp = (
                    op.display.precedence
                    if op.display.assoc == "left"
                    else op.display.precedence - 1
                )
                right = self.parse_expr(next_bp)
                left = ("call", op.name, [left, right])
                continue
            led = self.syn.led_templates.get(tok.text)
            if led is not None:
                op, pieces = led
                if op.display.precedence <= rbp:
                    break
                self.advance()
                left = self._finish_template(op, pieces, 2, {pieces[0][1]: left})
                continue
            break
        return left

    def _nud(self):
        tok = self.advance()
        if tok.kind == "end":
            raise ParseError("unexpected end of input", col=tok.pos)
        if tok.kind == "name":
            decl = self.syn.sig.operators.get(tok.text)
            if decl is not None and decl.arg_sorts:
                if self.peek().text != "(":
                    raise ParseError(
                        f"operator {tok.text!r} needs ({len(decl.arg_sorts)}) arguments",
                        col=tok.pos,
                    )
            if decl is not None and self.peek().text == "(":
                self.advance()
                args = [self.parse_expr(0)]
                while self.peek().text == ",":
                    self.advance()
                    args.append(self.parse_expr(0))
                self.expect(")")
                return ("call", tok.text, args)
            return ("var", tok.text)
        if tok.text == "(":
            inner = self.parse_expr(0)
            if self.peek().text == "," and self.syn.paren_pair is not None:
                self.advance()
                right = self.parse_expr(0)
                self.expect(")")
                return ("call", self.syn.paren_pair.name, [inner, right])
            self.expect(")")
            return inner
        nud = self.syn.nud_templates.get(tok.text)
        if nud is not None:
            op, pieces = nud
            return self._finish_template(op, pieces, 1, {})
        raise ParseError(f"unexpected {tok.text!r}", col=tok.pos)

    def _finish_template(self, op: OpDecl, pieces, start: int, args: dict):
        for idx in range(start, len(pieces)):
            kind, val = pieces[idx]
            if kind == "lit":
                self.expect(val)
            else:
                bp = op.display.precedence - 1 if idx == len(pieces) - 1 else 0
                args[val] = self.parse_expr(bp)
        ordered = [args[i + 1] for i in range(len(args))]
        return ("call", op.name, ordered)

    # -- multisets ----------------------------------------------------------

    def parse_multiset(self):
        parts = [self._ms_primary()]
        while self.peek().text in ("⊎", "+m"):
            self.advance()
            parts.append(self._ms_primary())
        out = parts[-1]
        for p in reversed(parts[:-1]):
            out = ("union", p, out)
        return out

    def _ms_primary(self):
        tok = self.advance()
        if tok.text in ("∅", "{}m"):
            return ("empty",)
        if tok.text == "(":
            inner = self.parse_multiset()
            self.expect(")")
            return inner
        if tok.text == "{":
            if self.peek().text == "}":
                self.advance()
                return ("empty",)
            elems = [self.parse_expr(0)]
            while self.peek().text == ",":
                self.advance()
                elems.append(self.parse_expr(0))
            self.expect("}")
            out = ("single", elems[-1])
            for e in reversed(elems[:-1]):
                out = ("union", ("single", e), out)
            return out
        if tok.text == "'":
            inner = self.parse_expr(0)
            self.expect("'")
            return ("single", inner)
        if tok.kind == "name":
            return ("var", tok.text)
        raise ParseError(f"unexpected {tok.text!r} in multiset", col=tok.pos)

    # -- judgments ----------------------------------------------------------

    def parse_judgment_pieces(self, decl: JudgmentDecl, pieces) -> list:
        args = {}
        for kind, val in pieces:
            if kind == "lit":
                self.expect(val)
            else:
                if val < 1 or val > len(decl.arg_sorts):
                    raise SignatureError(
                        f"judgment {decl.name!r} template refers to %{val}"
                    )
                sort = decl.arg_sorts[val - 1]
                args[val] = self.parse_multiset() if sort.is_multiset else self.parse_expr(0)
        if len(args) != len(decl.arg_sorts):
            raise SignatureError(f"judgment {decl.name!r} template misses arguments")
        return [args[i + 1] for i in range(len(decl.arg_sorts))]


def free_kinds(name: str) -> str:
    return FREE


def schematic_kinds(name: str) -> str:
    return SCHEMATIC
