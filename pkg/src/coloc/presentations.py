"""A small line-oriented language for algebraic presentations.

Example::

    field Q
    bialgebra kc2 {
      basis 1 g
      mult 1*1 = 1; mult 1*g = g; mult g*1 = g; mult g*g = 1
      unit = 1
      comult 1 = 1(x)1; comult g = g(x)g
      counit 1 = 1; counit g = 1
    }
    coaction delta : kc2 -> kc2 (x) kc2 { rho 1 = 1(x)1; rho g = g(x)g }
    localize half of kc2 at { 1/2 1 + 1/2 g }

``parse`` checks syntax, names and shapes and returns a
:class:`PresentationBundle`; ``print_bundle`` is its inverse up to
formatting; ``elaborate`` builds the typed objects without checking axioms.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .exact import QQ, Field, FieldError, Matrix, field_from_name

# --------------------------------------------------------------------------
# errors and syntax tree
# --------------------------------------------------------------------------


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


class ElaborationError(ParseError):
    pass


Loc = tuple  # (line, column)

# A factor is a tuple of (generator or basis name, exponent); () is "1".
# A term is (coefficient, (factor, ...)); an expression is a tuple of terms.


@dataclass(frozen=True)
class FieldDecl:
    field_name: str
    loc: Loc = field(default=(0, 0), compare=False)
    name: str = field(default="", compare=False)


@dataclass(frozen=True)
class AlgebraDecl:
    kind: str  # algebra | coalgebra | bialgebra
    name: str
    basis: tuple
    mult: tuple = ()  # ((a, b), expr)
    unit: tuple | None = None
    comult: tuple = ()  # (a, expr)
    counit: tuple = ()  # (a, Fraction)
    loc: Loc = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class SkewDecl:
    name: str
    gens: tuple
    inv: tuple = ()
    q: tuple = ()  # ((x, y), Fraction)
    comult: tuple = ()
    counit: tuple = ()
    loc: Loc = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class CoactionDecl:
    name: str
    source: str
    bialgebra: str
    rho: tuple  # (a, expr)
    loc: Loc = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class ActionDecl:
    name: str
    bialgebra: str
    algebra: str
    act: tuple  # ((h, a), expr)
    loc: Loc = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class ModuleDecl:
    name: str
    algebra: str
    basis: tuple
    act: tuple  # ((a, m), expr)
    loc: Loc = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class LocalizeDecl:
    name: str
    algebra: str
    element: tuple | None = None
    gens: tuple = ()
    loc: Loc = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class EntwiningDecl:
    name: str
    algebra: str
    coalgebra: str
    psi: tuple  # ((a, c), expr)
    loc: Loc = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class ProbeDecl:
    name: str
    modules: tuple
    maps: tuple = ()  # (name, source, target, rows)
    loc: Loc = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class PresentationBundle:
    declarations: tuple = ()

    def names(self) -> list[str]:
        return [d.name for d in self.declarations if d.name]

    def get(self, name: str):
        for d in self.declarations:
            if d.name == name:
                return d
        raise KeyError(name)

    def __len__(self):
        return len(self.declarations)


# --------------------------------------------------------------------------
# tokens
# --------------------------------------------------------------------------

_TOKEN = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<comment>#[^\n]*)|(?P<nl>\n)|(?P<tensor>\(x\))|(?P<arrow>->)"
    r"|(?P<num>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_']*)|(?P<sym>[{};:,\[\]=+\-*/^])"
)

KEYWORDS = {"field", "algebra", "coalgebra", "bialgebra", "skew", "coaction", "action", "module", "localize",
            "entwining", "probe"}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    out = []
    line, start = 1, 0
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - start + 1)
        kind = m.lastgroup
        if kind == "nl":
            out.append(Token("nl", "\n", line, pos - start + 1))
            line += 1
            start = m.end()
        elif kind not in ("ws", "comment"):
            out.append(Token(kind, m.group(), line, pos - start + 1))
        pos = m.end()
    out.append(Token("eof", "", line, pos - start + 1))
    return out


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------


class _Syms:
    """What earlier declarations provide, for reference and shape checks."""

    def __init__(self):
        self.decls: dict = {}

    def kind(self, name):
        d = self.decls.get(name)
        if d is None:
            return None
        if isinstance(d, AlgebraDecl):
            return d.kind
        if isinstance(d, SkewDecl):
            return "skew-bialgebra" if d.comult else "skew"
        return type(d).__name__.replace("Decl", "").lower()


class Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0
        self.syms = _Syms()
        self.decls: list = []

    # -- token helpers --
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, msg: str, tok: Token | None = None):
        t = tok or self.tok
        raise ParseError(msg, t.line, t.col)

    def advance(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def at(self, kind: str, text: str | None = None) -> bool:
        t = self.tok
        return t.kind == kind and (text is None or t.text == text)

    def expect(self, kind: str, text: str | None = None) -> Token:
        if not self.at(kind, text):
            want = text or kind
            got = self.tok.text or self.tok.kind
            self.error(f"expected {want!r}, found {got!r}")
        return self.advance()

    def skip_nl(self):
        while self.at("nl") or self.at("sym", ";"):
            self.advance()

    def ident(self) -> Token:
        if not self.at("ident"):
            self.error(f"expected a name, found {self.tok.text or self.tok.kind!r}")
        return self.advance()

    def basis_name(self) -> Token:
        if self.at("ident"):
            return self.advance()
        if self.at("num", "1"):
            return self.advance()
        self.error(f"expected a basis element, found {self.tok.text or self.tok.kind!r}")

    def end_stmt(self):
        if self.at("nl") or self.at("sym", ";"):
            self.skip_nl()
        elif not self.at("sym", "}"):
            self.error(f"expected end of statement, found {self.tok.text or self.tok.kind!r}")

    # -- scalars and expressions --
    def scalar(self) -> Fraction:
        neg = False
        if self.at("sym", "-"):
            self.advance()
            neg = True
        t = self.expect("num")
        v = Fraction(int(t.text))
        if self.at("sym", "/"):
            self.advance()
            d = self.expect("num")
            if int(d.text) == 0:
                self.error("zero denominator", d)
            v = v / int(d.text)
        return -v if neg else v

    def _factor(self):
        """A monomial like x*y^-2, a basis name, or 1."""
        if self.at("num", "1"):
            self.advance()
            return ()
        parts = []
        while True:
            t = self.ident()
            e = 1
            if self.at("sym", "^"):
                self.advance()
                neg = False
                if self.at("sym", "-"):
                    self.advance()
                    neg = True
                e = int(self.expect("num").text)
                e = -e if neg else e
            parts.append((t.text, e))
            if self.at("sym", "*") and self.toks[self.i + 1].kind == "ident":
                self.advance()
                continue
            return tuple(parts)

    def _starts_atom(self) -> bool:
        return self.at("ident") or self.at("num", "1")

    def _atom(self):
        facs = [self._factor()]
        while self.at("tensor"):
            self.advance()
            facs.append(self._factor())
        return tuple(facs)

    def expr(self, arity: int) -> tuple:
        terms = []
        sign = Fraction(1)
        while True:
            start = self.tok
            if self.at("sym", "-"):
                self.advance()
                sign = -sign
            if self.at("num"):
                c = self.scalar()
                if self._starts_atom():
                    atom = self._atom()
                elif self.at("tensor"):
                    # "1(x)g": the leading 1 was the first factor
                    self.advance()
                    atom = ((),) + self._atom()
                else:
                    atom = ((),)
            elif self._starts_atom():
                c = Fraction(1)
                atom = self._atom()
            else:
                self.error(f"expected a term, found {self.tok.text or self.tok.kind!r}")
            if len(atom) != arity:
                self.error(f"expected {arity} tensor factor{'s' if arity > 1 else ''}, found {len(atom)}", start)
            terms.append((sign * c, atom))
            if self.at("sym", "+"):
                self.advance()
            elif not self.at("sym", "-"):
                return tuple(terms)
            sign = Fraction(1)

    # -- name checks --
    def fresh(self, t: Token):
        if t.text in self.syms.decls:
            self.error(f"duplicate name {t.text!r}", t)
        if t.text in KEYWORDS:
            self.error(f"{t.text!r} is a keyword", t)

    def ref(self, t: Token, kinds: Iterable[str]):
        k = self.syms.kind(t.text)
        if k is None:
            self.error(f"unresolved reference {t.text!r}", t)
        if k not in kinds:
            art = "an" if k[0] in "aeiou" else "a"
            self.error(f"{t.text!r} is {art} {k}, expected {' or '.join(kinds)}", t)
        return self.syms.decls[t.text]

    # -- top level --
    def parse(self) -> PresentationBundle:
        self.skip_nl()
        while not self.at("eof"):
            t = self.tok
            if t.kind != "ident" or t.text not in KEYWORDS:
                self.error(f"expected a declaration, found {t.text or t.kind!r}")
            d = getattr(self, f"p_{t.text}")()
            self.decls.append(d)
            if d.name:
                self.syms.decls[d.name] = d
            if not (self.at("eof") or self.at("nl") or self.at("sym", ";")):
                self.error(f"expected end of declaration, found {self.tok.text!r}")
            self.skip_nl()
        return PresentationBundle(tuple(self.decls))

    def block(self, handlers: dict):
        self.expect("sym", "{")
        self.skip_nl()
        while not self.at("sym", "}"):
            if self.at("eof"):
                self.error("unterminated block")
            t = self.tok
            if t.kind != "ident" or t.text not in handlers:
                self.error(f"unexpected {t.text or t.kind!r} in block; expected one of {', '.join(handlers)}")
            self.advance()
            handlers[t.text](t)
            self.end_stmt()
        self.advance()

    def p_field(self):
        t = self.advance()
        name = self.ident()
        try:
            field_from_name(name.text)
        except FieldError as exc:
            self.error(str(exc), name)
        return FieldDecl(name.text, (t.line, t.col))

    def _basis_list(self, seen: list, what: str = "basis element"):
        while self._starts_atom():
            b = self.basis_name()
            if b.text in seen:
                self.error(f"duplicate {what} {b.text!r}", b)
            seen.append(b.text)

    def _check_labels(self, expr, allowed_per_factor: Sequence[set], tok: Token):
        for _, atom in expr:
            for fac, allowed in zip(atom, allowed_per_factor):
                label = _factor_label(fac)
                if label not in allowed:
                    self.error(f"unknown basis element {label!r}", tok)

    def _check_monomials(self, expr, gens_per_factor: Sequence, tok: Token):
        for _, atom in expr:
            for fac, (gens, inv) in zip(atom, gens_per_factor):
                for g, e in fac:
                    if g not in gens:
                        self.error(f"unknown generator {g!r}", tok)
                    if e < 0 and g not in inv:
                        self.error(f"negative power of non-invertible generator {g!r}", tok)

    def p_algebra(self, kind="algebra"):
        t = self.advance()
        name = self.ident()
        self.fresh(name)
        basis: list = []
        mult: dict = {}
        unit = [None]
        comult: dict = {}
        counit: dict = {}

        def h_basis(tk):
            if basis:
                self.error("basis declared twice", tk)
            self._basis_list(basis)
            if not basis:
                self.error("empty basis", tk)

        def need_basis(tk):
            if not basis:
                self.error("basis must come first", tk)

        def h_mult(tk):
            need_basis(tk)
            a = self.basis_name()
            self.expect("sym", "*")
            b = self.basis_name()
            for x in (a, b):
                if x.text not in basis:
                    self.error(f"unknown basis element {x.text!r}", x)
            if (a.text, b.text) in mult:
                self.error(f"product {a.text}*{b.text} given twice", a)
            self.expect("sym", "=")
            e = self.expr(1)
            self._check_labels(e, [set(basis)], a)
            mult[(a.text, b.text)] = e

        def h_unit(tk):
            need_basis(tk)
            if unit[0] is not None:
                self.error("unit given twice", tk)
            self.expect("sym", "=")
            e = self.expr(1)
            self._check_labels(e, [set(basis)], tk)
            unit[0] = e

        def h_comult(tk):
            need_basis(tk)
            a = self.basis_name()
            if a.text not in basis:
                self.error(f"unknown basis element {a.text!r}", a)
            if a.text in comult:
                self.error(f"comultiplication of {a.text} given twice", a)
            self.expect("sym", "=")
            e = self.expr(2)
            self._check_labels(e, [set(basis)] * 2, a)
            comult[a.text] = e

        def h_counit(tk):
            need_basis(tk)
            a = self.basis_name()
            if a.text not in basis:
                self.error(f"unknown basis element {a.text!r}", a)
            if a.text in counit:
                self.error(f"counit of {a.text} given twice", a)
            self.expect("sym", "=")
            counit[a.text] = self.scalar()

        handlers = {"basis": h_basis}
        if kind in ("algebra", "bialgebra"):
            handlers.update(mult=h_mult, unit=h_unit)
        if kind in ("coalgebra", "bialgebra"):
            handlers.update(comult=h_comult, counit=h_counit)
        self.block(handlers)
        if not basis:
            self.error("incomplete declaration: no basis", t)
        if kind in ("algebra", "bialgebra") and unit[0] is None:
            self.error("incomplete declaration: no unit", t)
        if kind in ("coalgebra", "bialgebra"):
            missing = [b for b in basis if b not in comult] or [b for b in basis if b not in counit]
            if missing:
                self.error(f"incomplete declaration: comultiplication or counit missing for {missing[0]!r}", t)
        return AlgebraDecl(kind, name.text, tuple(basis), tuple(sorted(mult.items(), key=lambda kv: _pair_key(kv[0], basis))),
                           unit[0], tuple((b, comult[b]) for b in basis if b in comult),
                           tuple((b, counit[b]) for b in basis if b in counit), (t.line, t.col))

    def p_coalgebra(self):
        return self.p_algebra("coalgebra")

    def p_bialgebra(self):
        return self.p_algebra("bialgebra")

    def p_skew(self):
        t = self.advance()
        name = self.ident()
        self.fresh(name)
        gens: list = []
        inv: list = []
        q: dict = {}
        comult: dict = {}
        counit: dict = {}

        def h_gens(tk):
            if gens:
                self.error("generators declared twice", tk)
            while self.at("ident"):
                g = self.advance()
                if g.text in gens:
                    self.error(f"duplicate generator {g.text!r}", g)
                gens.append(g.text)

        def h_inv(tk):
            while self.at("ident"):
                g = self.advance()
                if g.text not in gens:
                    self.error(f"unknown generator {g.text!r}", g)
                if g.text not in inv:
                    inv.append(g.text)

        def h_q(tk):
            a, b = self.ident(), self.ident()
            for x in (a, b):
                if x.text not in gens:
                    self.error(f"unknown generator {x.text!r}", x)
            if gens.index(a.text) >= gens.index(b.text):
                self.error(f"q must be declared for generators in order; {a.text} comes after {b.text}", a)
            if (a.text, b.text) in q:
                self.error(f"q {a.text} {b.text} given twice", a)
            self.expect("sym", "=")
            v = self.scalar()
            if v == 0:
                self.error("q must be nonzero", a)
            q[(a.text, b.text)] = v

        def h_comult(tk):
            g = self.ident()
            if g.text not in gens:
                self.error(f"unknown generator {g.text!r}", g)
            if g.text in comult:
                self.error(f"comultiplication of {g.text} given twice", g)
            self.expect("sym", "=")
            e = self.expr(2)
            self._check_monomials(e, [(gens, inv)] * 2, g)
            comult[g.text] = e

        def h_counit(tk):
            g = self.ident()
            if g.text not in gens:
                self.error(f"unknown generator {g.text!r}", g)
            if g.text in counit:
                self.error(f"counit of {g.text} given twice", g)
            self.expect("sym", "=")
            counit[g.text] = self.scalar()

        self.block({"gens": h_gens, "inv": h_inv, "q": h_q, "comult": h_comult, "counit": h_counit})
        if not gens:
            self.error("incomplete declaration: no generators", t)
        if comult or counit:
            missing = [g for g in gens if g not in comult or g not in counit]
            if missing:
                self.error(f"incomplete declaration: comultiplication or counit missing for {missing[0]!r}", t)
        inv_sorted = tuple(g for g in gens if g in inv)
        return SkewDecl(name.text, tuple(gens), inv_sorted,
                        tuple(sorted(q.items(), key=lambda kv: (gens.index(kv[0][0]), gens.index(kv[0][1])))),
                        tuple((g, comult[g]) for g in gens if g in comult),
                        tuple((g, counit[g]) for g in gens if g in counit), (t.line, t.col))

    def _space(self, d):
        """(labels, is_skew, gens, inv) for an algebra-like declaration."""
        if isinstance(d, AlgebraDecl):
            return d.basis, False, None, None
        return None, True, d.gens, d.inv

    def p_coaction(self):
        t = self.advance()
        name = self.ident()
        self.fresh(name)
        self.expect("sym", ":")
        e1 = self.ident()
        E = self.ref(e1, ("algebra", "bialgebra", "skew", "skew-bialgebra"))
        self.expect("arrow")
        e2 = self.ident()
        if e2.text != e1.text:
            self.error(f"coaction target must be {e1.text} (x) B", e2)
        self.expect("tensor")
        bt = self.ident()
        B = self.ref(bt, ("bialgebra", "skew-bialgebra"))
        skewE, skewB = isinstance(E, SkewDecl), isinstance(B, SkewDecl)
        if skewE != skewB:
            self.error("coaction between different backends", bt)
        keys = E.gens if skewE else E.basis
        rho: dict = {}

        def h_rho(tk):
            a = self.basis_name()
            if a.text not in keys:
                self.error(f"unknown {'generator' if skewE else 'basis element'} {a.text!r}", a)
            if a.text in rho:
                self.error(f"ρ({a.text}) given twice", a)
            self.expect("sym", "=")
            e = self.expr(2)
            if skewE:
                self._check_monomials(e, [(E.gens, E.inv), (B.gens, B.inv)], a)
            else:
                self._check_labels(e, [set(E.basis), set(B.basis)], a)
            rho[a.text] = e

        self.block({"rho": h_rho})
        missing = [k for k in keys if k not in rho]
        if missing:
            self.error(f"incomplete declaration: ρ({missing[0]}) missing", t)
        return CoactionDecl(name.text, e1.text, bt.text, tuple((k, rho[k]) for k in keys), (t.line, t.col))

    def p_action(self):
        t = self.advance()
        name = self.ident()
        self.fresh(name)
        self.expect("sym", ":")
        ht = self.ident()
        H = self.ref(ht, ("bialgebra",))
        on = self.ident()
        if on.text != "on":
            self.error("expected 'on'", on)
        at = self.ident()
        A = self.ref(at, ("algebra", "bialgebra"))
        act: dict = {}

        def h_act(tk):
            h = self.basis_name()
            a = self.basis_name()
            if h.text not in H.basis:
                self.error(f"unknown basis element {h.text!r}", h)
            if a.text not in A.basis:
                self.error(f"unknown basis element {a.text!r}", a)
            if (h.text, a.text) in act:
                self.error(f"{h.text}▷{a.text} given twice", h)
            self.expect("sym", "=")
            e = self.expr(1)
            self._check_labels(e, [set(A.basis)], h)
            act[(h.text, a.text)] = e

        self.block({"act": h_act})
        items = sorted(act.items(), key=lambda kv: (H.basis.index(kv[0][0]), A.basis.index(kv[0][1])))
        return ActionDecl(name.text, ht.text, at.text, tuple(items), (t.line, t.col))

    def p_module(self):
        t = self.advance()
        name = self.ident()
        self.fresh(name)
        ov = self.ident()
        if ov.text != "over":
            self.error("expected 'over'", ov)
        at = self.ident()
        A = self.ref(at, ("algebra", "bialgebra"))
        basis: list = []
        act: dict = {}

        def h_basis(tk):
            if basis:
                self.error("basis declared twice", tk)
            self._basis_list(basis)

        def h_act(tk):
            a = self.basis_name()
            m = self.basis_name()
            if a.text not in A.basis:
                self.error(f"unknown basis element {a.text!r}", a)
            if m.text not in basis:
                self.error(f"unknown module basis element {m.text!r}", m)
            if (a.text, m.text) in act:
                self.error(f"{a.text}·{m.text} given twice", a)
            self.expect("sym", "=")
            e = self.expr(1)
            self._check_labels(e, [set(basis)], a)
            act[(a.text, m.text)] = e

        self.block({"basis": h_basis, "act": h_act})
        if not basis:
            self.error("incomplete declaration: no basis", t)
        items = sorted(act.items(), key=lambda kv: (A.basis.index(kv[0][0]), basis.index(kv[0][1])))
        return ModuleDecl(name.text, at.text, tuple(basis), tuple(items), (t.line, t.col))

    def p_localize(self):
        t = self.advance()
        name = self.ident()
        self.fresh(name)
        of = self.ident()
        if of.text != "of":
            self.error("expected 'of'", of)
        et = self.ident()
        E = self.ref(et, ("algebra", "bialgebra", "skew", "skew-bialgebra"))
        kw = self.ident()
        if kw.text != "at":
            self.error("expected 'at'", kw)
        self.expect("sym", "{")
        self.skip_nl()
        if isinstance(E, SkewDecl):
            gens = []
            while self.at("ident"):
                g = self.advance()
                if g.text not in E.gens:
                    self.error(f"unknown generator {g.text!r}", g)
                if g.text in gens:
                    self.error(f"generator {g.text!r} listed twice", g)
                gens.append(g.text)
                if self.at("sym", ","):
                    self.advance()
            if not gens:
                self.error("expected at least one generator")
            self.skip_nl()
            self.expect("sym", "}")
            return LocalizeDecl(name.text, et.text, None, tuple(gens), (t.line, t.col))
        first = self.tok
        e = self.expr(1)
        self._check_labels(e, [set(E.basis)], first)
        self.skip_nl()
        self.expect("sym", "}")
        return LocalizeDecl(name.text, et.text, e, (), (t.line, t.col))

    def p_entwining(self):
        t = self.advance()
        name = self.ident()
        self.fresh(name)
        self.expect("sym", ":")
        a1 = self.ident()
        A = self.ref(a1, ("algebra", "bialgebra", "skew", "skew-bialgebra"))
        self.expect("tensor")
        c1 = self.ident()
        C = self.ref(c1, ("coalgebra", "bialgebra"))
        self.expect("arrow")
        c2 = self.ident()
        self.expect("tensor")
        a2 = self.ident()
        if c2.text != c1.text or a2.text != a1.text:
            self.error(f"entwining must map {a1.text} (x) {c1.text} -> {c1.text} (x) {a1.text}", c2)
        skewA = isinstance(A, SkewDecl)
        keys = A.gens if skewA else A.basis
        psi: dict = {}

        def h_psi(tk):
            a = self.basis_name()
            c = self.basis_name()
            if a.text not in keys:
                self.error(f"unknown {'generator' if skewA else 'basis element'} {a.text!r}", a)
            if c.text not in C.basis:
                self.error(f"unknown basis element {c.text!r}", c)
            if (a.text, c.text) in psi:
                self.error(f"ψ({a.text}⊗{c.text}) given twice", a)
            self.expect("sym", "=")
            e = self.expr(2)
            if skewA:
                for _, atom in e:
                    if _factor_label(atom[0]) not in C.basis:
                        self.error(f"unknown basis element {_factor_label(atom[0])!r}", a)
                self._check_monomials([(1, (atom[1],)) for _, atom in e], [(A.gens, A.inv)], a)
            else:
                self._check_labels(e, [set(C.basis), set(A.basis)], a)
            psi[(a.text, c.text)] = e

        self.block({"psi": h_psi})
        items = sorted(psi.items(), key=lambda kv: (keys.index(kv[0][0]), C.basis.index(kv[0][1])))
        return EntwiningDecl(name.text, a1.text, c1.text, tuple(items), (t.line, t.col))

    def p_probe(self):
        t = self.advance()
        name = self.ident()
        self.fresh(name)
        mods: list = []
        maps: list = []

        def h_modules(tk):
            while self.at("ident"):
                m = self.advance()
                d = self.ref(m, ("module",))
                if mods and self.syms.decls[mods[0]].algebra != d.algebra:
                    self.error("probe modules over different algebras", m)
                if m.text in mods:
                    self.error(f"module {m.text!r} listed twice", m)
                mods.append(m.text)

        def h_maps(tk):
            while True:
                f = self.ident()
                if f.text in [x[0] for x in maps]:
                    self.error(f"duplicate map name {f.text!r}", f)
                self.expect("sym", ":")
                s = self.ident()
                self.expect("arrow")
                tg = self.ident()
                for x in (s, tg):
                    if x.text not in mods:
                        self.error(f"map endpoint {x.text!r} is not a probe module", x)
                self.expect("sym", "=")
                rows = self.matrix()
                ds = len(self.syms.decls[s.text].basis)
                dt = len(self.syms.decls[tg.text].basis)
                if len(rows) != dt or any(len(r) != ds for r in rows):
                    self.error(f"dimension mismatch: {f.text} must be a {dt}x{ds} matrix", f)
                maps.append((f.text, s.text, tg.text, rows))
                if self.at("sym", ","):
                    self.advance()
                    continue
                return

        self.block({"modules": h_modules, "maps": h_maps})
        if not mods:
            self.error("incomplete declaration: probe without modules", t)
        return ProbeDecl(name.text, tuple(mods), tuple(maps), (t.line, t.col))

    def matrix(self):
        self.expect("sym", "[")
        rows = []
        while True:
            self.expect("sym", "[")
            row = []
            if not self.at("sym", "]"):
                row.append(self.scalar())
                while self.at("sym", ","):
                    self.advance()
                    row.append(self.scalar())
            self.expect("sym", "]")
            rows.append(tuple(row))
            if self.at("sym", ","):
                self.advance()
                continue
            break
        self.expect("sym", "]")
        return tuple(rows)


def _factor_label(fac) -> str:
    if fac == ():
        return "1"
    if len(fac) == 1 and fac[0][1] == 1:
        return fac[0][0]
    return _fmt_factor(fac)


def _pair_key(pair, basis):
    return (basis.index(pair[0]), basis.index(pair[1]))


def parse(text: str) -> PresentationBundle:
    return Parser(text).parse()


# --------------------------------------------------------------------------
# printer
# --------------------------------------------------------------------------


def _fmt_scalar(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _fmt_factor(fac) -> str:
    if not fac:
        return "1"
    return "*".join(g if e == 1 else f"{g}^{e}" for g, e in fac)


def fmt_expr(expr) -> str:
    out = []
    for i, (c, atom) in enumerate(expr):
        a = "(x)".join(_fmt_factor(f) for f in atom)
        mag = abs(c)
        body = a if mag == 1 else f"{_fmt_scalar(mag)} {a}"
        if i == 0:
            out.append(f"-{body}" if c < 0 else body)
        else:
            out.append(f"- {body}" if c < 0 else f"+ {body}")
    return " ".join(out) if out else "0"


def print_bundle(b: PresentationBundle) -> str:
    chunks = [_print_decl(d) for d in b.declarations]
    return "\n".join(chunks) + ("\n" if chunks else "")


def _block(head: str, lines: list[str]) -> str:
    return head + " {\n" + "".join(f"  {ln}\n" for ln in lines) + "}"


def _print_decl(d) -> str:
    if isinstance(d, FieldDecl):
        return f"field {d.field_name}"
    if isinstance(d, AlgebraDecl):
        lines = ["basis " + " ".join(d.basis)]
        lines += [f"mult {a}*{b} = {fmt_expr(e)}" for (a, b), e in d.mult]
        if d.unit is not None:
            lines.append(f"unit = {fmt_expr(d.unit)}")
        lines += [f"comult {a} = {fmt_expr(e)}" for a, e in d.comult]
        lines += [f"counit {a} = {_fmt_scalar(c)}" for a, c in d.counit]
        return _block(f"{d.kind} {d.name}", lines)
    if isinstance(d, SkewDecl):
        lines = ["gens " + " ".join(d.gens)]
        if d.inv:
            lines.append("inv " + " ".join(d.inv))
        lines += [f"q {x} {y} = {_fmt_scalar(c)}" for (x, y), c in d.q]
        lines += [f"comult {g} = {fmt_expr(e)}" for g, e in d.comult]
        lines += [f"counit {g} = {_fmt_scalar(c)}" for g, c in d.counit]
        return _block(f"skew {d.name}", lines)
    if isinstance(d, CoactionDecl):
        return _block(f"coaction {d.name} : {d.source} -> {d.source} (x) {d.bialgebra}",
                      [f"rho {a} = {fmt_expr(e)}" for a, e in d.rho])
    if isinstance(d, ActionDecl):
        return _block(f"action {d.name} : {d.bialgebra} on {d.algebra}",
                      [f"act {h} {a} = {fmt_expr(e)}" for (h, a), e in d.act])
    if isinstance(d, ModuleDecl):
        lines = ["basis " + " ".join(d.basis)] + [f"act {a} {m} = {fmt_expr(e)}" for (a, m), e in d.act]
        return _block(f"module {d.name} over {d.algebra}", lines)
    if isinstance(d, LocalizeDecl):
        body = fmt_expr(d.element) if d.element is not None else ", ".join(d.gens)
        return f"localize {d.name} of {d.algebra} at {{ {body} }}"
    if isinstance(d, EntwiningDecl):
        return _block(f"entwining {d.name} : {d.algebra} (x) {d.coalgebra} -> {d.coalgebra} (x) {d.algebra}",
                      [f"psi {a} {c} = {fmt_expr(e)}" for (a, c), e in d.psi])
    if isinstance(d, ProbeDecl):
        lines = ["modules " + " ".join(d.modules)]
        for name, s, t, rows in d.maps:
            mat = "[" + ", ".join("[" + ", ".join(_fmt_scalar(x) for x in r) + "]" for r in rows) + "]"
            lines.append(f"maps {name} : {s} -> {t} = {mat}")
        return _block(f"probe {d.name}", lines)
    raise TypeError(f"cannot print {d!r}")


# --------------------------------------------------------------------------
# elaboration
# --------------------------------------------------------------------------


@dataclass
class Environment:
    objects: dict = field(default_factory=dict)
    kinds: dict = field(default_factory=dict)
    field: Field = QQ

    def __getitem__(self, name):
        return self.objects[name]

    def __contains__(self, name):
        return name in self.objects

    def of_kind(self, *kinds) -> list[str]:
        return [n for n, k in self.kinds.items() if k in kinds]


def elaborate(bundle: PresentationBundle) -> Environment:
    from .entwining import EntwiningData, SkewEntwining
    from .findim import Algebra, Bialgebra, CoactionData, Coalgebra, ModuleData, ModuleHom
    from .hopfcat import FunctorProbe, HopfAction
    from .localization import LocalizationError, localize_central_idempotent, localize_generators
    from .skew import (
        RelationError,
        SkewError,
        SkewLaurentAlgebra,
        make_bialgebra,
        make_coaction,
        tensor_skew,
    )

    env = Environment()
    fld = QQ

    def fail(d, msg):
        raise ElaborationError(msg, *d.loc)

    def sc(d, c: Fraction):
        try:
            return fld(c)
        except ZeroDivisionError as exc:
            fail(d, str(exc))

    def dense(d, expr, labels):
        pos = {b: i for i, b in enumerate(labels)}
        v = [fld.zero] * len(labels)
        for c, atom in expr:
            v[pos[_factor_label(atom[0])]] += sc(d, c)
        return tuple(v)

    def dense2(d, expr, l1, l2):
        p1 = {b: i for i, b in enumerate(l1)}
        p2 = {b: i for i, b in enumerate(l2)}
        v = [fld.zero] * (len(l1) * len(l2))
        for c, atom in expr:
            v[p1[_factor_label(atom[0])] * len(l2) + p2[_factor_label(atom[1])]] += sc(d, c)
        return tuple(v)

    def skew_elem(d, expr, parents, target):
        from .skew import pure_tensor

        out = target.zero()
        for c, atom in expr:
            parts = []
            for fac, P in zip(atom, parents):
                x = P.one()
                for g, e in fac:
                    x = x * (P.gen(g) ** e)
                parts.append(x)
            val = pure_tensor(target, *parts) if len(parts) > 1 else parts[0]
            out = out + val * sc(d, c)
        return out

    for d in bundle.declarations:
        try:
            if isinstance(d, FieldDecl):
                fld = field_from_name(d.field_name)
                env.field = fld
                continue
            if isinstance(d, AlgebraDecl):
                labels = d.basis
                n = len(labels)
                alg = coal = None
                if d.kind in ("algebra", "bialgebra"):
                    cols = [None] * (n * n)
                    zero = tuple([fld.zero] * n)
                    for i in range(n * n):
                        cols[i] = zero
                    pos = {b: i for i, b in enumerate(labels)}
                    for (a, b), e in d.mult:
                        cols[pos[a] * n + pos[b]] = dense(d, e, labels)
                    alg = Algebra(Matrix.from_columns(cols, n, fld), dense(d, d.unit, labels), labels, d.name)
                if d.kind in ("coalgebra", "bialgebra"):
                    cm = {a: e for a, e in d.comult}
                    cols = [dense2(d, cm[a], labels, labels) for a in labels]
                    cu = dict(d.counit)
                    eps = Matrix([[sc(d, cu[a]) for a in labels]], fld, cols=n)
                    coal = Coalgebra(Matrix.from_columns(cols, n * n, fld), eps, labels, d.name)
                obj = alg if d.kind == "algebra" else coal if d.kind == "coalgebra" else Bialgebra(alg, coal, d.name)
                env.objects[d.name], env.kinds[d.name] = obj, d.kind
            elif isinstance(d, SkewDecl):
                A = SkewLaurentAlgebra.create(d.gens, {k: sc(d, v) for k, v in d.q}, d.inv, fld, d.name)
                if d.comult:
                    AA = tensor_skew(A, A)
                    cm = {g: skew_elem(d, e, (A, A), AA) for g, e in d.comult}
                    obj = make_bialgebra(A, cm, {g: sc(d, v) for g, v in d.counit}, d.name, check=True)
                    env.objects[d.name], env.kinds[d.name] = obj, "skew-bialgebra"
                else:
                    env.objects[d.name], env.kinds[d.name] = A, "skew"
            elif isinstance(d, CoactionDecl):
                E, B = env[d.source], env[d.bialgebra]
                if env.kinds[d.source] == "bialgebra":
                    E = E.algebra
                if env.kinds[d.source] == "skew-bialgebra":
                    E = E.algebra
                if isinstance(B, Bialgebra):
                    cols = [dense2(d, e, E.labels, B.labels) for _, e in d.rho]
                    obj = CoactionData(E, B, Matrix.from_columns(cols, E.dim * B.dim, fld), d.name)
                else:
                    T = tensor_skew(E, B.algebra)
                    ims = {g: skew_elem(d, e, (E, B.algebra), T) for g, e in d.rho}
                    obj = make_coaction(E, B, ims, d.name, check=True)
                env.objects[d.name], env.kinds[d.name] = obj, "coaction"
            elif isinstance(d, ActionDecl):
                H = env[d.bialgebra]
                A = env[d.algebra]
                A = A.algebra if isinstance(A, Bialgebra) else A
                n, nH = A.dim, H.dim
                cols = [tuple([fld.zero] * n)] * (nH * n)
                hp = {b: i for i, b in enumerate(H.labels)}
                ap = {b: i for i, b in enumerate(A.labels)}
                for (h, a), e in d.act:
                    cols[hp[h] * n + ap[a]] = dense(d, e, A.labels)
                obj = HopfAction(H, A, Matrix.from_columns(cols, n, fld), d.name)
                env.objects[d.name], env.kinds[d.name] = obj, "action"
            elif isinstance(d, ModuleDecl):
                A = env[d.algebra]
                A = A.algebra if isinstance(A, Bialgebra) else A
                m = len(d.basis)
                cols = [tuple([fld.zero] * m)] * (A.dim * m)
                ap = {b: i for i, b in enumerate(A.labels)}
                mp = {b: i for i, b in enumerate(d.basis)}
                for (a, x), e in d.act:
                    cols[ap[a] * m + mp[x]] = dense(d, e, d.basis)
                obj = ModuleData(A, Matrix.from_columns(cols, m, fld), d.basis, d.name)
                env.objects[d.name], env.kinds[d.name] = obj, "module"
            elif isinstance(d, LocalizeDecl):
                E = env[d.algebra]
                if hasattr(E, "comult") and hasattr(E, "algebra"):
                    E = E.algebra
                if d.element is not None:
                    obj = localize_central_idempotent(E, dense(d, d.element, E.labels), d.name)
                else:
                    obj = localize_generators(E, d.gens, d.name)
                env.objects[d.name], env.kinds[d.name] = obj, "localization"
            elif isinstance(d, EntwiningDecl):
                A = env[d.algebra]
                C = env[d.coalgebra]
                C = C.coalgebra if isinstance(C, Bialgebra) else C
                if isinstance(A, Bialgebra) or (hasattr(A, "comult") and hasattr(A, "algebra")):
                    A = A.algebra
                if isinstance(A, Algebra):
                    n, m = A.dim, C.dim
                    cols = [tuple([fld.zero] * (n * m))] * (n * m)
                    ap = {b: i for i, b in enumerate(A.labels)}
                    cp = {b: i for i, b in enumerate(C.labels)}
                    for (a, c), e in d.psi:
                        cols[ap[a] * m + cp[c]] = dense2(d, e, C.labels, A.labels)
                    obj = EntwiningData(A, C, Matrix.from_columns(cols, n * m, fld), d.name)
                else:
                    m = C.dim
                    cp = {b: i for i, b in enumerate(C.labels)}
                    mats = {g: [[A.zero() for _ in range(m)] for _ in range(m)] for g in A.gens}
                    for (g, c), e in d.psi:
                        for coef, atom in e:
                            x = A.one()
                            for gg, ex in atom[1]:
                                x = x * (A.gen(gg) ** ex)
                            k = cp[_factor_label(atom[0])]
                            mats[g][k][cp[c]] = mats[g][k][cp[c]] + x * sc(d, coef)
                    obj = SkewEntwining(A, C, mats, d.name)
                env.objects[d.name], env.kinds[d.name] = obj, "entwining"
            elif isinstance(d, ProbeDecl):
                mods = [env[m] for m in d.modules]
                maps = []
                for name, s, t, rows in d.maps:
                    M = Matrix([[sc(d, x) for x in r] for r in rows], fld, cols=env[s].dim)
                    maps.append(ModuleHom(env[s], env[t], M, name))
                obj = FunctorProbe(tuple(mods), tuple(maps), d.name)
                env.objects[d.name], env.kinds[d.name] = obj, "probe"
        except ElaborationError:
            raise
        except (LocalizationError, RelationError, SkewError, FieldError, ValueError) as exc:
            fail(d, str(exc))
    return env


def load(path) -> tuple[PresentationBundle, Environment]:
    with open(path, encoding="utf-8") as fh:
        b = parse(fh.read())
    return b, elaborate(b)
