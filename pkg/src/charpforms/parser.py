"""Expression language for the command line.

Grammar (whitespace insignificant)::

    expr   := term (('+'|'-') term)*
    term   := unary (('*'|'/') unary)*
    unary  := '-'? power
    power  := atom ('^' uint)?
    atom   := name | uint | 'w' | '(' expr ')'

`w` denotes the multiplicative generator of the constant field GF(p^e)
when it is not a declared variable.  Division is left-associative with the
same precedence as multiplication (the published grammar sketch leaves
`expr '/' expr` ambiguous; standard precedence is used).

Form literals are sums of `coeff * dlog(b1)^dlog(b2)^...` terms; a
multi-argument `dlog(b1, b2, ...)` is shorthand for the wedge of the
individual dlog factors.  Hypersurface polynomials use the same grammar
with the T-variables auto-detected by the `T<digits>` prefix.
"""

from __future__ import annotations

import re

from .errors import ParseError
from .forms import DifferentialForm, PureSymbol, dlog_symbol
from .hypersurface import HypersurfacePoly

_TOKEN = re.compile(
    r"\s*(?:(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<int>\d+)|(?P<op>[-+*/^(){},]))"
)


def tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            raise ParseError(
                f"unexpected character {stripped[0]!r}",
                len(text) - len(stripped),
            )
        if m.lastgroup is None and not m.group().strip():
            pos = m.end()
            continue
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    """Recursive-descent parser over the token list."""

    def __init__(self, text):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, text, pos = self.next()
        if text != value:
            raise ParseError(f"expected {value!r}, found {text or 'end'!r}", pos)

    def at_end(self):
        return self.peek()[0] == "end"

    def fail_here(self, message):
        raise ParseError(message, self.peek()[2])

    # -- expression AST ----------------------------------------------------

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.next()[1]
            node = (op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.peek()[1] in ("*", "/"):
            op = self.next()[1]
            node = (op, node, self.unary())
        return node

    def unary(self):
        if self.peek()[1] == "-":
            pos = self.next()[2]
            return ("neg", self.power(), pos)
        return self.power()

    def power(self):
        node = self.atom()
        if self.peek()[1] == "^":
            pos = self.next()[2]
            kind, text, npos = self.next()
            if kind != "int":
                raise ParseError("exponent must be a nonnegative integer", npos)
            node = ("pow", node, int(text), pos)
        return node

    def atom(self):
        kind, text, pos = self.next()
        if kind == "name":
            return ("name", text, pos)
        if kind == "int":
            return ("int", int(text), pos)
        if text == "(":
            node = self.expr()
            self.expect(")")
            return node
        raise ParseError(f"unexpected {text or 'end'!r}", pos)


class _TPoly:
    """A polynomial in the T-variables with field-element coefficients."""

    __slots__ = ("ctx", "ntvars", "terms")

    def __init__(self, ctx, ntvars, terms):
        self.ctx = ctx
        self.ntvars = ntvars
        self.terms = {e: c for e, c in terms.items() if not c.is_zero()}

    def is_scalar(self):
        zero = (0,) * self.ntvars
        return all(e == zero for e in self.terms)

    def scalar(self):
        return self.terms.get((0,) * self.ntvars, self.ctx.zero)

    def __add__(self, other):
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, self.ctx.zero) + c
        return _TPoly(self.ctx, self.ntvars, out)

    def __neg__(self):
        return _TPoly(self.ctx, self.ntvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, self.ctx.zero) + c1 * c2
        return _TPoly(self.ctx, self.ntvars, out)


def _tvar_names(text, ctx):
    names = set()
    for kind, tok, _pos in tokenize(text):
        if kind == "name" and re.fullmatch(r"T\d*", tok) and tok not in ctx.variables:
            names.add(tok)
    return tuple(sorted(names, key=lambda s: (len(s), s)))


def _eval(node, ctx, tvars):
    ntv = len(tvars)

    def scalar(a):
        return _TPoly(ctx, ntv, {(0,) * ntv: a})

    op = node[0]
    if op == "name":
        _kind, name, pos = "name", node[1], node[2]
        if name in tvars:
            exp = tuple(1 if t == name else 0 for t in tvars)
            return _TPoly(ctx, ntv, {exp: ctx.one})
        if name in ctx.variables:
            return scalar(ctx.var(name))
        if name == "w":
            if ctx.gf.e == 1:
                raise ParseError("'w' requires a non-prime constant field", pos)
            return scalar(ctx.element(ctx.poly_const(ctx.gf.gen)))
        raise ParseError(f"unknown name {name!r}", pos)
    if op == "int":
        return scalar(ctx.const(node[1]))
    if op == "neg":
        return -_eval(node[1], ctx, tvars)
    if op == "pow":
        base = _eval(node[1], ctx, tvars)
        out = scalar(ctx.one)
        for _ in range(node[2]):
            out = out * base
        return out
    left = _eval(node[1], ctx, tvars)
    right = _eval(node[2], ctx, tvars)
    if op == "+":
        return left + right
    if op == "-":
        return left - right
    if op == "*":
        return left * right
    if op == "/":
        if not right.is_scalar():
            raise ParseError("division by a T-polynomial is not supported", 0)
        d = right.scalar()
        if d.is_zero():
            raise ParseError("division by zero", 0)
        inv = d.inv()
        return left * _TPoly(ctx, len(tvars), {(0,) * len(tvars): inv})
    raise ParseError(f"unsupported operation {op!r}", 0)


def parse_element(text, ctx):
    """Parse an expression into a FieldElement of ctx."""
    parser = _Parser(text)
    node = parser.expr()
    if not parser.at_end():
        parser.fail_here("trailing input after expression")
    return _eval(node, ctx, ()).scalar()


def parse_symbol(text, ctx):
    """Parse `{e1, e2, ...}` (braces optional) into a PureSymbol."""
    parser = _Parser(text)
    braced = parser.peek()[1] == "{"
    if braced:
        parser.next()
    entries = [_eval(parser.expr(), ctx, ()).scalar()]
    while parser.peek()[1] == ",":
        parser.next()
        entries.append(_eval(parser.expr(), ctx, ()).scalar())
    if braced:
        parser.expect("}")
    if not parser.at_end():
        parser.fail_here("trailing input after symbol")
    return PureSymbol(tuple(entries))


def parse_form(text, frame):
    """Parse a form literal `c * dlog(b1)^dlog(b2) + ...` over a frame."""
    ctx = frame.ctx
    parser = _Parser(text)
    total = None

    def dlog_factor():
        kind, tok, pos = parser.next()
        if tok != "dlog":
            raise ParseError("expected dlog(...)", pos)
        parser.expect("(")
        if parser.peek()[1] == "{":
            parser.next()
            entries = [_eval(parser.expr(), ctx, ()).scalar()]
            while parser.peek()[1] == ",":
                parser.next()
                entries.append(_eval(parser.expr(), ctx, ()).scalar())
            parser.expect("}")
        else:
            entries = [_eval(parser.expr(), ctx, ()).scalar()]
            while parser.peek()[1] == ",":
                parser.next()
                entries.append(_eval(parser.expr(), ctx, ()).scalar())
        parser.expect(")")
        for e in entries:
            if e.is_zero():
                raise ParseError("dlog of zero", pos)
        return dlog_symbol(PureSymbol(tuple(entries)), frame)

    def form_term():
        # look ahead: a term is either dlog-chain, expr, or expr '*' chain
        if parser.peek()[1] == "dlog":
            form = dlog_factor()
        else:
            node = parser.expr_until_star_dlog()
            coeff = _eval(node, ctx, ()).scalar()
            if parser.peek()[1] == "*":
                parser.next()
                form = dlog_factor().scale(coeff)
            else:
                form = DifferentialForm(frame, 0, {(): coeff})
        while parser.peek()[1] == "^":
            parser.next()
            form = form.wedge(dlog_factor())
        return form

    # parse terms separated by '+' / '-'
    form = form_term()
    while parser.peek()[1] in ("+", "-"):
        op = parser.next()[1]
        nxt = form_term()
        form = form + (nxt if op == "+" else nxt.scale(ctx.const(-1)))
    if not parser.at_end():
        parser.fail_here("trailing input after form")
    return form


def _expr_stop_before_dlog(self):
    """Parse an expression but stop before a `* dlog(...)` continuation."""
    node = self.term_stop()
    while self.peek()[1] in ("+", "-"):
        op = self.next()[1]
        node = (op, node, self.term_stop())
    return node


def _term_stop(self):
    node = self.unary()
    while self.peek()[1] in ("*", "/"):
        if (
            self.peek()[1] == "*"
            and self.tokens[self.i + 1][1] == "dlog"
        ):
            break
        op = self.next()[1]
        node = (op, node, self.unary())
    return node


_Parser.expr_until_star_dlog = _expr_stop_before_dlog
_Parser.term_stop = _term_stop


def parse_hypersurface(text, ctx):
    """Parse a hypersurface polynomial, T-variables detected by prefix."""
    tvars = _tvar_names(text, ctx)
    if not tvars:
        raise ParseError("no T-variables found in hypersurface input", 0)
    parser = _Parser(text)
    node = parser.expr()
    if not parser.at_end():
        parser.fail_here("trailing input after hypersurface polynomial")
    poly = _eval(node, ctx, tvars)
    return HypersurfacePoly(ctx, tvars, poly.terms)


def format_element(a):
    """Render a FieldElement in re-parseable syntax."""
    num = _format_poly(a.num)
    if a.den.is_constant() and a.den.constant_value() == a.ctx.gf.one:
        return num
    return f"({num})/({_format_poly(a.den)})"


def _format_poly(poly):
    if poly.is_zero():
        return "0"
    parts = []
    gf = poly.ctx.gf
    for exp in sorted(poly.terms, reverse=True):
        c = poly.terms[exp]
        factors = []
        if c != gf.one or not any(exp):
            s = repr(c)
            factors.append(f"({s})" if "+" in s else s)
        for name, e in zip(poly.ctx.variables, exp):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        parts.append("*".join(factors))
    return " + ".join(parts)
