"""Abstract syntax, parser and printer for PAL formulas with relativized
common knowledge.

Concrete syntax (ASCII, whitespace-insensitive), loosest to tightest::

    formula := iff
    iff     := imp ("<->" imp)*           left-assoc
    imp     := or ("->" imp)?             right-assoc
    or      := and ("|" and)*
    and     := unary ("&" unary)*
    unary   := "~" unary | "K" group1 unary | "E" group unary
             | "D" group unary | "C" group unary
             | "Cr" group "(" and "|" formula ")"
             | "[" "!" formula "]" unary | "(" formula ")"
             | "top" | IDENT | "?" IDENT
    group   := "{" IDENT ("," IDENT)* "}"

The antecedent of ``Cr`` is read at conjunction level, so a disjunctive or
implicational antecedent must be parenthesized: ``Cr{a}((p | q) | r)``.
Names starting with ``?`` are schematic variables; they stand for arbitrary
domain-and-world predicates and are only understood by the domain-passing
evaluator.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Union

from .errors import ParseError

__all__ = [
    "Formula", "Atom", "Schematic", "Top", "Neg", "And", "Or", "Imp", "Iff",
    "Know", "EvKnow", "DistKnow", "CommonKnow", "Rck", "Announce",
    "parse", "to_text", "subformulas", "size", "depth",
    "atoms_of", "agents_of", "schematics_of", "conj", "disj", "substitute",
    "KEYWORDS",
]

KEYWORDS = frozenset({"K", "E", "D", "C", "Cr", "top"})
_IDENT = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")


def _check_ident(name, what):
    if not isinstance(name, str) or not _IDENT.match(name) or name in KEYWORDS:
        raise ValueError(f"invalid {what} {name!r}")


def _check_group(group):
    if not isinstance(group, tuple) or not group:
        raise ValueError("agent group must be a non-empty tuple")
    if len(set(group)) != len(group):
        raise ValueError(f"duplicate agent in group {group!r}")
    for a in group:
        _check_ident(a, "agent name")


@dataclass(frozen=True)
class Atom:
    prop: str

    def __post_init__(self):
        _check_ident(self.prop, "proposition")


@dataclass(frozen=True)
class Schematic:
    name: str

    def __post_init__(self):
        _check_ident(self.name, "schematic name")


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Neg:
    sub: Formula


@dataclass(frozen=True)
class And:
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or:
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Imp:
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Iff:
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Know:
    agent: str
    sub: Formula

    def __post_init__(self):
        _check_ident(self.agent, "agent name")


@dataclass(frozen=True)
class EvKnow:
    group: tuple
    sub: Formula

    def __post_init__(self):
        _check_group(self.group)


@dataclass(frozen=True)
class DistKnow:
    group: tuple
    sub: Formula

    def __post_init__(self):
        _check_group(self.group)


@dataclass(frozen=True)
class CommonKnow:
    """Plain common knowledge; semantically ``Rck(group, Top(), sub)``."""

    group: tuple
    sub: Formula

    def __post_init__(self):
        _check_group(self.group)


@dataclass(frozen=True)
class Rck:
    """Relativized common knowledge: along every group path through
    ``antecedent`` worlds, ``consequent`` holds."""

    group: tuple
    antecedent: Formula
    consequent: Formula

    def __post_init__(self):
        _check_group(self.group)


@dataclass(frozen=True)
class Announce:
    """``[!announced] body``."""

    announced: Formula
    body: Formula


Formula = Union[Atom, Schematic, Top, Neg, And, Or, Imp, Iff, Know, EvKnow,
                DistKnow, CommonKnow, Rck, Announce]

_BINARY = (And, Or, Imp, Iff)
_GROUP_UNARY = (EvKnow, DistKnow, CommonKnow)


def children(f) -> tuple:
    if isinstance(f, (Atom, Schematic, Top)):
        return ()
    if isinstance(f, _BINARY):
        return (f.left, f.right)
    if isinstance(f, (Neg, Know) + _GROUP_UNARY):
        return (f.sub,)
    if isinstance(f, Rck):
        return (f.antecedent, f.consequent)
    if isinstance(f, Announce):
        return (f.announced, f.body)
    raise TypeError(f"not a formula: {f!r}")


def conj(*fs):
    """Left-nested conjunction; ``conj()`` is ``Top()``."""
    if not fs:
        return Top()
    out = fs[0]
    for g in fs[1:]:
        out = And(out, g)
    return out


def disj(*fs):
    if not fs:
        return Neg(Top())
    out = fs[0]
    for g in fs[1:]:
        out = Or(out, g)
    return out


# ---------------------------------------------------------------- traversal

def _walk(f) -> Iterator:
    for c in children(f):
        yield from _walk(c)
    yield f


def subformulas(f) -> list:
    """Post-order subformulas with duplicates removed; ``f`` comes last."""
    seen = set()
    out = []
    for g in _walk(f):
        if g not in seen:
            seen.add(g)
            out.append(g)
    return out


def size(f) -> int:
    return 1 + sum(size(c) for c in children(f))


def depth(f) -> int:
    cs = children(f)
    return 1 + max((depth(c) for c in cs), default=0)


def atoms_of(f) -> list:
    """Proposition names in order of first occurrence."""
    return list(dict.fromkeys(g.prop for g in _walk(f) if isinstance(g, Atom)))


def schematics_of(f) -> list:
    return list(dict.fromkeys(g.name for g in _walk(f) if isinstance(g, Schematic)))


def agents_of(f) -> list:
    out = {}
    for g in _walk(f):
        if isinstance(g, Know):
            out[g.agent] = None
        elif isinstance(g, _GROUP_UNARY + (Rck,)):
            out.update(dict.fromkeys(g.group))
    return list(out)


def substitute(f, mapping):
    """Replace atoms and schematic variables by formulas.

    Keys of ``mapping`` are prop names for atoms and ``"?name"`` for
    schematic variables.
    """
    if isinstance(f, Atom):
        return mapping.get(f.prop, f)
    if isinstance(f, Schematic):
        return mapping.get("?" + f.name, f)
    if isinstance(f, Top):
        return f
    if isinstance(f, Neg):
        return Neg(substitute(f.sub, mapping))
    if isinstance(f, _BINARY):
        return type(f)(substitute(f.left, mapping), substitute(f.right, mapping))
    if isinstance(f, Know):
        return Know(f.agent, substitute(f.sub, mapping))
    if isinstance(f, _GROUP_UNARY):
        return type(f)(f.group, substitute(f.sub, mapping))
    if isinstance(f, Rck):
        return Rck(f.group, substitute(f.antecedent, mapping), substitute(f.consequent, mapping))
    if isinstance(f, Announce):
        return Announce(substitute(f.announced, mapping), substitute(f.body, mapping))
    raise TypeError(f"not a formula: {f!r}")


# ------------------------------------------------------------------ printer

_IFF, _IMP, _OR, _AND, _UNARY = range(5)


def _group_text(g):
    return "{" + ",".join(g) + "}"


def _show(f, ctx) -> str:
    if isinstance(f, Iff):
        s, lvl = f"{_show(f.left, _IFF)} <-> {_show(f.right, _IMP)}", _IFF
    elif isinstance(f, Imp):
        s, lvl = f"{_show(f.left, _OR)} -> {_show(f.right, _IMP)}", _IMP
    elif isinstance(f, Or):
        s, lvl = f"{_show(f.left, _OR)} | {_show(f.right, _AND)}", _OR
    elif isinstance(f, And):
        s, lvl = f"{_show(f.left, _AND)} & {_show(f.right, _UNARY)}", _AND
    else:
        return _show_unary(f)
    return f"({s})" if ctx > lvl else s


def _show_unary(f) -> str:
    if isinstance(f, Atom):
        return f.prop
    if isinstance(f, Schematic):
        return "?" + f.name
    if isinstance(f, Top):
        return "top"
    if isinstance(f, Neg):
        return "~" + _show(f.sub, _UNARY)
    if isinstance(f, Know):
        return f"K{{{f.agent}}} {_show(f.sub, _UNARY)}"
    if isinstance(f, EvKnow):
        return f"E{_group_text(f.group)} {_show(f.sub, _UNARY)}"
    if isinstance(f, DistKnow):
        return f"D{_group_text(f.group)} {_show(f.sub, _UNARY)}"
    if isinstance(f, CommonKnow):
        return f"C{_group_text(f.group)} {_show(f.sub, _UNARY)}"
    if isinstance(f, Rck):
        return f"Cr{_group_text(f.group)}({_show(f.antecedent, _AND)} | {_show(f.consequent, _IFF)})"
    if isinstance(f, Announce):
        return f"[!{_show(f.announced, _IFF)}] {_show(f.body, _UNARY)}"
    raise TypeError(f"not a formula: {f!r}")


def to_text(f) -> str:
    """Render ``f`` with the fewest parentheses that parse back to ``f``."""
    return _show(f, _IFF)


# ------------------------------------------------------------------- lexer

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<op><->|->|[~&|(){}\[\]!,])
  | (?P<var>\?[A-Za-z][A-Za-z0-9_]*)
  | (?P<name>[A-Za-z][A-Za-z0-9_]*)
""", re.VERBOSE)

_EOF = "end of input"


class _Token:
    __slots__ = ("kind", "text", "pos")

    def __init__(self, kind, text, pos):
        self.kind, self.text, self.pos = kind, text, pos

    def describe(self):
        if self.kind == "eof":
            return _EOF
        return repr(self.text)


def _tokenize(text):
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(text, _byte_offset(text, pos),
                             {"formula token"}, repr(text[pos]))
        kind = m.lastgroup
        if kind != "ws":
            val = m.group()
            if kind == "name" and val in KEYWORDS:
                kind = "kw"
            toks.append(_Token(kind, val, pos))
        pos = m.end()
    toks.append(_Token("eof", "", len(text)))
    return toks


def _byte_offset(text, pos):
    return len(text[:pos].encode("utf-8")) + 1


_UNARY_START = {"'~'", "'K'", "'E'", "'D'", "'C'", "'Cr'", "'['", "'('",
                "'top'", "identifier", "schematic variable"}


class _Parser:
    def __init__(self, text):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.toks[self.i]

    def fail(self, expected):
        t = self.tok
        raise ParseError(self.text, _byte_offset(self.text, t.pos), expected, t.describe())

    def at(self, text):
        t = self.tok
        return t.kind in ("op", "kw") and t.text == text

    def expect(self, text):
        if not self.at(text):
            self.fail({repr(text)})
        self.i += 1

    def ident(self):
        t = self.tok
        if t.kind != "name":
            self.fail({"identifier"})
        self.i += 1
        return t.text

    def parse(self):
        f = self.iff()
        if self.tok.kind != "eof":
            self.fail({_EOF, "'<->'", "'->'", "'|'", "'&'"})
        return f

    def iff(self):
        f = self.imp()
        while self.at("<->"):
            self.i += 1
            f = Iff(f, self.imp())
        return f

    def imp(self):
        f = self.disj()
        if self.at("->"):
            self.i += 1
            return Imp(f, self.imp())
        return f

    def disj(self):
        f = self.conj()
        while self.at("|"):
            self.i += 1
            f = Or(f, self.conj())
        return f

    def conj(self):
        f = self.unary()
        while self.at("&"):
            self.i += 1
            f = And(f, self.unary())
        return f

    def group(self):
        self.expect("{")
        members = [self.ident()]
        while self.at(","):
            self.i += 1
            members.append(self.ident())
        self.expect("}")
        if len(set(members)) != len(members):
            self.i -= 1
            raise ParseError(self.text, _byte_offset(self.text, self.tok.pos),
                             {"distinct agent names"}, "duplicate agent")
        return tuple(members)

    def unary(self):
        t = self.tok
        if t.kind == "name":
            self.i += 1
            return Atom(t.text)
        if t.kind == "var":
            self.i += 1
            return Schematic(t.text[1:])
        if t.kind == "kw":
            self.i += 1
            word = t.text
            if word == "top":
                return Top()
            start = self.i
            g = self.group()
            if word == "K":
                if len(g) != 1:
                    self.i = start
                    raise ParseError(self.text, _byte_offset(self.text, self.tok.pos),
                                     {"single agent"}, f"group of {len(g)}")
                return Know(g[0], self.unary())
            if word == "E":
                return EvKnow(g, self.unary())
            if word == "D":
                return DistKnow(g, self.unary())
            if word == "C":
                return CommonKnow(g, self.unary())
            self.expect("(")
            ante = self.conj()
            self.expect("|")
            cons = self.iff()
            self.expect(")")
            return Rck(g, ante, cons)
        if self.at("~"):
            self.i += 1
            return Neg(self.unary())
        if self.at("["):
            self.i += 1
            self.expect("!")
            ann = self.iff()
            self.expect("]")
            return Announce(ann, self.unary())
        if self.at("("):
            self.i += 1
            f = self.iff()
            self.expect(")")
            return f
        self.fail(_UNARY_START)


def parse(text: str):
    """Parse formula text; raises :class:`ParseError` on malformed input."""
    return _Parser(text).parse()
