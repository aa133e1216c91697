"""Operator expression grammar: parser, printer, evaluator.

    expr   := term (('+'|'-') term)*
    term   := factor ('*' factor)*
    factor := atom ['^' nat]
    atom   := rational | 'xi' | 'x' | 'd' | gform | '(' expr ')' | '-' atom
    gform  := 'G' '{' 'r=' int (';' ('f[' nat ',' nat ']=' scalar
                                    | 'g[' nat ']=' scalar))* '}'

`d` denotes the derivative, `xi` the root of unity of the ambient
cyclotomic order (an error when no order is set), and rationals require an
explicit `/`. Whitespace is insignificant; errors carry line and column.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ParseError, PreconditionError
from .gform import Hcp
from .operators import GradedOp
from .scalars import CycloScalar, xi_pow


# -- AST ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Xi:
    pass


@dataclass(frozen=True)
class XSym:
    pass


@dataclass(frozen=True)
class DSym:
    pass


@dataclass(frozen=True)
class GFormLit:
    r: int
    fentries: tuple  # ((l, i, CycloScalar-free scalar AST), ...)
    gentries: tuple  # ((j, scalar AST), ...)


@dataclass(frozen=True)
class Add:
    left: object
    right: object


@dataclass(frozen=True)
class Sub:
    left: object
    right: object


@dataclass(frozen=True)
class Mul:
    left: object
    right: object


@dataclass(frozen=True)
class Pow:
    base: object
    exp: int


@dataclass(frozen=True)
class Neg:
    arg: object


# -- tokenizer ------------------------------------------------------------------------


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


_PUNCT = "+-*^(){}[],;="


def _tokenize(src: str) -> list[_Tok]:
    toks = []
    line, col = 1, 1
    i = 0
    while i < len(src):
        ch = src[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch.isspace():
            col += 1
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < len(src) and src[j].isdigit():
                j += 1
            toks.append(_Tok("nat", src[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch.isalpha():
            j = i
            while j < len(src) and src[j].isalpha():
                j += 1
            toks.append(_Tok("name", src[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch == "/":
            toks.append(_Tok("/", ch, line, col))
            col += 1
            i += 1
            continue
        if ch in _PUNCT:
            toks.append(_Tok(ch, ch, line, col))
            col += 1
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", line, col)
    toks.append(_Tok("eof", "", line, col))
    return toks


class _Parser:
    def __init__(self, src: str):
        self.toks = _tokenize(src)
        self.pos = 0

    def peek(self) -> _Tok:
        return self.toks[self.pos]

    def next(self) -> _Tok:
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def expect(self, kind: str, what: str | None = None) -> _Tok:
        t = self.peek()
        if t.kind != kind and t.text != kind:
            raise ParseError(f"expected {what or kind!r}, got {t.text or 'end of input'!r}",
                             t.line, t.col)
        return self.next()

    def parse(self):
        e = self.expr()
        t = self.peek()
        if t.kind != "eof":
            raise ParseError(f"trailing input {t.text!r}", t.line, t.col)
        return e

    def expr(self):
        node = self.term()
        while self.peek().kind in ("+", "-"):
            op = self.next().kind
            rhs = self.term()
            node = Add(node, rhs) if op == "+" else Sub(node, rhs)
        return node

    def term(self):
        node = self.factor()
        while self.peek().kind == "*":
            self.next()
            node = Mul(node, self.factor())
        return node

    def factor(self):
        node = self.atom()
        if self.peek().kind == "^":
            self.next()
            t = self.expect("nat", "a nonnegative integer exponent")
            node = Pow(node, int(t.text))
        return node

    def atom(self):
        t = self.peek()
        if t.kind == "-":
            self.next()
            return Neg(self.atom())
        if t.kind == "nat":
            self.next()
            if self.peek().kind == "/":
                self.next()
                den = self.expect("nat", "a denominator")
                if int(den.text) == 0:
                    raise ParseError("zero denominator", den.line, den.col)
                return Num(Fraction(int(t.text), int(den.text)))
            return Num(Fraction(int(t.text)))
        if t.kind == "(":
            self.next()
            node = self.expr()
            self.expect(")")
            return node
        if t.kind == "name":
            if t.text == "xi":
                self.next()
                return Xi()
            if t.text == "x":
                self.next()
                return XSym()
            if t.text == "d":
                self.next()
                return DSym()
            if t.text == "G":
                return self.gform()
            raise ParseError(f"unknown symbol {t.text!r}", t.line, t.col)
        raise ParseError(f"expected an atom, got {t.text or 'end of input'!r}",
                         t.line, t.col)

    def gform(self):
        self.expect("name")  # G
        self.expect("{")
        rtok = self.expect("name", "'r='")
        if rtok.text != "r":
            raise ParseError("G-form must start with 'r='", rtok.line, rtok.col)
        self.expect("=")
        neg = False
        if self.peek().kind == "-":
            self.next()
            neg = True
        rv = int(self.expect("nat", "an integer order").text)
        r = -rv if neg else rv
        fentries = []
        gentries = []
        while self.peek().kind == ";":
            self.next()
            name = self.expect("name", "'f' or 'g'")
            if name.text == "f":
                self.expect("[")
                l = int(self.expect("nat").text)
                self.expect(",")
                i = int(self.expect("nat").text)
                self.expect("]")
                self.expect("=")
                fentries.append((l, i, self.scalar_expr()))
            elif name.text == "g":
                self.expect("[")
                j = int(self.expect("nat").text)
                self.expect("]")
                self.expect("=")
                gentries.append((j, self.scalar_expr()))
            else:
                raise ParseError(f"expected 'f' or 'g', got {name.text!r}",
                                 name.line, name.col)
        self.expect("}")
        return GFormLit(r, tuple(fentries), tuple(gentries))

    def scalar_expr(self):
        """Additive scalar expression of rationals and xi powers."""
        node = self.scalar_term()
        while self.peek().kind in ("+", "-"):
            op = self.next().kind
            rhs = self.scalar_term()
            node = Add(node, rhs) if op == "+" else Sub(node, rhs)
        return node

    def scalar_term(self):
        node = self.scalar_atom()
        while self.peek().kind == "*":
            self.next()
            node = Mul(node, self.scalar_atom())
        return node

    def scalar_atom(self):
        t = self.peek()
        if t.kind == "-":
            self.next()
            return Neg(self.scalar_atom())
        if t.kind == "nat":
            return self.atom()
        if t.kind == "name" and t.text == "xi":
            self.next()
            if self.peek().kind == "^":
                self.next()
                e = int(self.expect("nat").text)
                return Pow(Xi(), e)
            return Xi()
        if t.kind == "(":
            self.next()
            node = self.scalar_expr()
            self.expect(")")
            return node
        raise ParseError(f"expected a scalar, got {t.text!r}", t.line, t.col)


def parse(src: str):
    """Parse an operator expression into an AST."""
    return _Parser(src).parse()


# -- printer ---------------------------------------------------------------------------


def to_text(node) -> str:
    return _print(node, 0)


def _print(node, level: int) -> str:
    # levels: 0 additive, 1 multiplicative, 2 power/atom
    if isinstance(node, Num):
        s = str(node.value)
        return f"({s})" if "/" in s and level >= 2 else s
    if isinstance(node, Xi):
        return "xi"
    if isinstance(node, XSym):
        return "x"
    if isinstance(node, DSym):
        return "d"
    if isinstance(node, GFormLit):
        parts = [f"r={node.r}"]
        for l, i, sc in node.fentries:
            parts.append(f"f[{l},{i}]={_print(sc, 0)}")
        for j, sc in node.gentries:
            parts.append(f"g[{j}]={_print(sc, 0)}")
        return "G{" + "; ".join(parts) + "}"
    if isinstance(node, Add):
        s = f"{_print(node.left, 0)} + {_print(node.right, 1)}"
        return f"({s})" if level > 0 else s
    if isinstance(node, Sub):
        s = f"{_print(node.left, 0)} - {_print(node.right, 1)}"
        return f"({s})" if level > 0 else s
    if isinstance(node, Mul):
        s = f"{_print(node.left, 1)}*{_print(node.right, 2)}"
        return f"({s})" if level > 1 else s
    if isinstance(node, Pow):
        return f"{_print(node.base, 2)}^{node.exp}"
    if isinstance(node, Neg):
        return f"-{_print(node.arg, 2)}"
    raise TypeError(f"not an AST node: {node!r}")


# -- evaluator ---------------------------------------------------------------------------


def evaluate(node, k: int | None = None, xcap: int = 16) -> GradedOp:
    """Evaluate the AST to a graded operator.

    ``k`` is the cyclotomic order; expressions mentioning xi (or G-form
    entries with i > 0) require it. G-form literals with infinite expansions
    are truncated at ``xcap``.
    """
    kk = 1 if k is None else k
    return _eval(node, k, kk, xcap)


def _eval(node, k_opt, k: int, xcap: int) -> GradedOp:
    if isinstance(node, Num):
        return GradedOp.from_scalar(k, node.value)
    if isinstance(node, Xi):
        if k_opt is None:
            raise PreconditionError("xi used without a cyclotomic order (--k)")
        return GradedOp.from_scalar(k, xi_pow(k, 1))
    if isinstance(node, XSym):
        return GradedOp.x_op(k)
    if isinstance(node, DSym):
        return GradedOp.d_op(k)
    if isinstance(node, GFormLit):
        gamma = {}
        for l, i, sc in node.fentries:
            if i > 0 and k_opt is None:
                raise PreconditionError("G-form A_i entry needs a cyclotomic order (--k)")
            if i >= k:
                raise PreconditionError(f"A index {i} is out of range for k={k}")
            gamma[(l, i)] = _eval_scalar(sc, k)
        bpart = {j: _eval_scalar(sc, k) for j, sc in node.gentries}
        if node.r < 0:
            raise PreconditionError("G-form orders r < 0 are out of scope")
        return Hcp(k, node.r, gamma, bpart).expand(xcap)
    if isinstance(node, Add):
        return _eval(node.left, k_opt, k, xcap) + _eval(node.right, k_opt, k, xcap)
    if isinstance(node, Sub):
        return _eval(node.left, k_opt, k, xcap) - _eval(node.right, k_opt, k, xcap)
    if isinstance(node, Mul):
        return _eval(node.left, k_opt, k, xcap) * _eval(node.right, k_opt, k, xcap)
    if isinstance(node, Pow):
        return _eval(node.base, k_opt, k, xcap) ** node.exp
    if isinstance(node, Neg):
        return -_eval(node.arg, k_opt, k, xcap)
    raise TypeError(f"not an AST node: {node!r}")


def _eval_scalar(node, k: int) -> CycloScalar:
    if isinstance(node, Num):
        return CycloScalar.from_rational(k, node.value)
    if isinstance(node, Xi):
        return xi_pow(k, 1)
    if isinstance(node, Add):
        return _eval_scalar(node.left, k) + _eval_scalar(node.right, k)
    if isinstance(node, Sub):
        return _eval_scalar(node.left, k) - _eval_scalar(node.right, k)
    if isinstance(node, Mul):
        return _eval_scalar(node.left, k) * _eval_scalar(node.right, k)
    if isinstance(node, Pow):
        return _eval_scalar(node.base, k) ** node.exp
    if isinstance(node, Neg):
        return -_eval_scalar(node.arg, k)
    raise PreconditionError("operator symbols are not allowed inside G-form scalars")


def parse_operator(src: str, k: int | None = None, xcap: int = 16) -> GradedOp:
    return evaluate(parse(src), k, xcap)
