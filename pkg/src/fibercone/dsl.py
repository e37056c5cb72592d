"""Reader and printer for the input language.

    ring R = F32003[x,y,z] / (x^2 - y*z);
    ideal I = -x^2+y^2, x*y, 2y*z;
    ideal K = maxideal;
    option seed = 7;

``#`` starts a comment.  Coefficients may be integers or fractions
(``3/4 x``), ``*`` between factors is optional, ``^`` takes a
non-negative integer exponent.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import ParseError
from .field import Field, field_from_name
from .ideals import Ideal, RingContext
from .polynomial import PolyRing, Polynomial

MAXIDEAL = "maxideal"
# expansion guards: a bare monomial may carry a large exponent, a sum may not
MAX_EXPONENT = 10_000
MAX_SUM_EXPONENT = 64

# option name -> value kind
OPTIONS = {
    "seed": int,
    "kmax": int,
    "cap": int,
    "width": int,
    "pair_cap": int,
    "trunc": int,
    "retries": int,
}

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r]+|\#[^\n]*)
  | (?P<nl>\n)
  | (?P<num>\d+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[=\[\],;()/^*+\-])
    """,
    re.VERBOSE,
)


@dataclass
class Token:
    kind: str  # num, name, op, eof
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
            line += 1
            start = m.end()
        elif kind != "ws":
            out.append(Token(kind, m.group(), line, pos - start + 1))
        pos = m.end()
    out.append(Token("eof", "", line, pos - start + 1))
    return out


@dataclass
class InputDocument:
    field_name: str
    variables: tuple
    relations: tuple = ()
    ideals: dict = field(default_factory=dict)  # name -> tuple of Polynomial, or MAXIDEAL
    options: dict = field(default_factory=dict)
    ring_name: str = "R"

    def __post_init__(self):
        self._ctx = None

    @property
    def field(self) -> Field:
        return field_from_name(self.field_name)

    def context(self, pair_cap: int | None = None) -> RingContext:
        """The ring; raises HypothesisError when the relations are not a regular sequence."""
        if self._ctx is None:
            cap = pair_cap or self.options.get("pair_cap")
            kw = {"pair_cap": cap} if cap else {}
            self._ctx = RingContext(self.variables, self.field, self.relations, **kw)
        return self._ctx

    def ideal(self, name: str) -> Ideal | None:
        gens = self.ideals.get(name)
        if gens is None:
            return None
        ctx = self.context()
        if gens == MAXIDEAL:
            return ctx.maximal_ideal()
        return Ideal(ctx, list(gens))

    def __eq__(self, other):
        if not isinstance(other, InputDocument):
            return NotImplemented
        return (
            self.field == other.field
            and self.variables == other.variables
            and self.relations == other.relations
            and self.ideals == other.ideals
            and self.options == other.options
            and self.ring_name == other.ring_name
        )

    def to_text(self) -> str:
        lines = [f"ring {self.ring_name} = {self.field.name}[{','.join(self.variables)}]"]
        if self.relations:
            lines[0] += " / (" + ", ".join(r.to_str() for r in self.relations) + ")"
        lines[0] += ";"
        for name, gens in self.ideals.items():
            body = MAXIDEAL if gens == MAXIDEAL else ", ".join(g.to_str() for g in gens)
            lines.append(f"ideal {name} = {body};")
        for key, val in self.options.items():
            lines.append(f"option {key} = {val};")
        return "\n".join(lines) + "\n"

    __str__ = to_text


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0
        self.ring: PolyRing | None = None

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def fail(self, msg, expected=(), tok=None):
        tok = tok or self.tok
        raise ParseError(msg, tok.line, tok.col, expected)

    def advance(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def expect(self, text: str) -> Token:
        if self.tok.text != text or self.tok.kind == "eof":
            self.fail(f"unexpected {self._desc()}", (repr(text),))
        return self.advance()

    def expect_kind(self, kind: str, what: str) -> Token:
        if self.tok.kind != kind:
            self.fail(f"unexpected {self._desc()}", (what,))
        return self.advance()

    def _desc(self):
        return "end of input" if self.tok.kind == "eof" else repr(self.tok.text)

    # document

    def document(self) -> InputDocument:
        doc = None
        while self.tok.kind != "eof":
            t = self.tok
            if t.text == "ring" and t.kind == "name":
                if doc is not None:
                    self.fail("second ring declaration")
                doc = self.ring_decl()
            elif t.text in ("ideal", "option") and t.kind == "name":
                if doc is None:
                    self.fail("a ring declaration must come first", ("'ring'",))
                if t.text == "ideal":
                    self.ideal_decl(doc)
                else:
                    self.option_decl(doc)
            else:
                exp = ("'ideal'", "'option'") if doc else ("'ring'",)
                self.fail(f"unexpected {self._desc()}", exp)
        if doc is None:
            self.fail("empty document", ("'ring'",))
        if "I" not in doc.ideals:
            self.fail("ideal I is required", ("'ideal'",))
        return doc

    def ring_decl(self) -> InputDocument:
        self.advance()
        name = self.expect_kind("name", "ring name").text
        self.expect("=")
        ft = self.expect_kind("name", "field (QQ or F<prime>)")
        try:
            fld = field_from_name(ft.text)
        except ValueError as exc:
            self.fail(str(exc), ("QQ", "F<prime>"), tok=ft)
        self.expect("[")
        names = [self.expect_kind("name", "variable name").text]
        while self.tok.text == ",":
            self.advance()
            vt = self.expect_kind("name", "variable name")
            if vt.text in names:
                self.fail(f"duplicate variable {vt.text!r}", tok=vt)
            names.append(vt.text)
        self.expect("]")
        bad = [n for n in names if n in ("maxideal", "ring", "ideal", "option")]
        if bad:
            self.fail(f"{bad[0]!r} is a reserved word")
        self.ring = PolyRing(names, fld)
        rels = []
        if self.tok.text == "/":
            self.advance()
            self.expect("(")
            rels = self.poly_list(")")
            self.expect(")")
        self.expect(";")
        return InputDocument(fld.name, tuple(names), tuple(rels), {}, {}, name)

    def ideal_decl(self, doc: InputDocument):
        self.advance()
        nt = self.expect_kind("name", "ideal name")
        if nt.text in doc.ideals:
            self.fail(f"ideal {nt.text} declared twice", tok=nt)
        self.expect("=")
        if self.tok.kind == "name" and self.tok.text == MAXIDEAL:
            self.advance()
            doc.ideals[nt.text] = MAXIDEAL
        else:
            doc.ideals[nt.text] = tuple(self.poly_list(";"))
        self.expect(";")

    def option_decl(self, doc: InputDocument):
        self.advance()
        kt = self.expect_kind("name", "option name")
        if kt.text not in OPTIONS:
            self.fail(f"unknown option {kt.text!r}", tuple(OPTIONS), tok=kt)
        self.expect("=")
        vt = self.expect_kind("num", "non-negative integer")
        doc.options[kt.text] = int(vt.text)
        self.expect(";")

    # polynomials

    def poly_list(self, closer: str) -> list[Polynomial]:
        if self.tok.text == closer:
            self.fail(f"unexpected {self._desc()}", ("polynomial",))
        out = [self.poly()]
        while self.tok.text == ",":
            self.advance()
            out.append(self.poly())
        return out

    def poly(self) -> Polynomial:
        neg = False
        if self.tok.text in "+-" and self.tok.kind == "op":
            neg = self.advance().text == "-"
        acc = self.term()
        if neg:
            acc = -acc
        while self.tok.kind == "op" and self.tok.text in ("+", "-"):
            op = self.advance().text
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def _starts_factor(self) -> bool:
        t = self.tok
        return t.kind in ("num", "name") or t.text == "("

    def term(self) -> Polynomial:
        acc = self.factor()
        while True:
            if self.tok.text == "*" and self.tok.kind == "op":
                self.advance()
                acc = acc * self.factor()
            elif self._starts_factor() and not (self.tok.kind == "name" and self.tok.text == MAXIDEAL):
                acc = acc * self.factor()
            else:
                return acc

    def factor(self) -> Polynomial:
        base = self.atom()
        if self.tok.text == "^":
            self.advance()
            e = self.expect_kind("num", "exponent")
            k = int(e.text)
            if k > MAX_EXPONENT or (len(base.terms) > 1 and k > MAX_SUM_EXPONENT):
                self.fail(f"exponent {k} too large", (), e)
            base = base ** k
        return base

    def atom(self) -> Polynomial:
        ring = self.ring
        t = self.tok
        if t.kind == "num":
            self.advance()
            val = int(t.text)
            if self.tok.text == "/" and self.toks[self.i + 1].kind == "num":
                self.advance()
                den = self.advance()
                if int(den.text) == 0:
                    self.fail("division by zero", tok=den)
                try:
                    return ring.constant(val) * ring.constant(1).scale(ring.field.inv(ring.field.convert(int(den.text))))
                except ZeroDivisionError:
                    self.fail(f"denominator {den.text} is zero in {ring.field.name}", tok=den)
            return ring.constant(val)
        if t.kind == "name":
            if t.text not in ring.names:
                self.fail(f"unknown variable {t.text!r}", ring.names)
            self.advance()
            return ring.gen(ring.names.index(t.text))
        if t.text == "(":
            self.advance()
            p = self.poly()
            self.expect(")")
            return p
        self.fail(f"unexpected {self._desc()}", ("number", "variable", "'('", "'-'"))


def parse(text) -> InputDocument:
    """Parse a document; any failure is a ParseError carrying line and column."""
    if isinstance(text, (bytes, bytearray)):
        try:
            text = bytes(text).decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not UTF-8 (byte offset {exc.start})", 1, 1) from None
    return _Parser(text).document()


def parse_polynomial(text: str, ring: PolyRing) -> Polynomial:
    p = _Parser(text)
    p.ring = ring
    out = p.poly()
    if p.tok.kind != "eof":
        p.fail(f"unexpected {p._desc()}", ("end of input", "'+'", "'-'", "'*'"))
    return out


def print_document(doc: InputDocument) -> str:
    return doc.to_text()
