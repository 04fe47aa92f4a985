"""Sparse multivariate polynomials and rational functions over GF(p^e).

This is the scalar engine for everything else: exact arithmetic, partial
derivatives, p-th roots, and the decomposition of a rational function into
its p-residue classes (the coefficient-level direct-sum decomposition used
by the form layer).

Polynomials are dictionaries mapping exponent tuples to nonzero GFElements.
Rational functions are num/den pairs; equality is semantic, decided by
cross-multiplication.  Normalization removes monomial content and makes the
denominator's graded-lex leading coefficient 1; an optional GCD pass (on by
default, switchable per context) keeps degrees under control during the
repeated-squaring-heavy decomposition algorithms.
"""

from __future__ import annotations

import itertools

from .errors import (
    ContextMismatch,
    DegreeOverflow,
    UnknownVariable,
    ZeroPolynomial,
)
from .gf import GFElement


class MultiIndex(tuple):
    """A tuple of exponents in [0, p-1], indexing a p-residue class."""

    def __new__(cls, entries, p=None):
        entries = tuple(int(x) for x in entries)
        if p is not None and any(x < 0 or x >= p for x in entries):
            raise ValueError("multiindex entry out of [0, p-1]")
        return super().__new__(cls, entries)


class FieldContext:
    """The rational function field GF(q)(x_1, ..., x_v).

    `max_degree` bounds the total degree of any numerator or denominator;
    operations that would exceed it raise DegreeOverflow instead of
    thrashing.  `reduce_fractions` enables the GCD pass during
    normalization.
    """

    def __init__(self, gf, variables, max_degree=512, reduce_fractions=True):
        variables = tuple(variables)
        if not variables or len(set(variables)) != len(variables):
            raise ValueError("variables must be nonempty and distinct")
        self.gf = gf
        self.variables = variables
        self.nvars = len(variables)
        self.max_degree = max_degree
        self.reduce_fractions = reduce_fractions

    def var_index(self, name):
        try:
            return self.variables.index(name)
        except ValueError:
            raise UnknownVariable(f"unknown variable {name!r}") from None

    # -- constructors ------------------------------------------------------

    def poly(self, terms):
        return Polynomial(self, terms)

    def poly_const(self, c):
        if isinstance(c, int):
            c = self.gf(c)
        if not c:
            return Polynomial(self, {})
        return Polynomial(self, {(0,) * self.nvars: c})

    def poly_var(self, name):
        i = self.var_index(name)
        exp = tuple(1 if j == i else 0 for j in range(self.nvars))
        return Polynomial(self, {exp: self.gf.one})

    def element(self, num, den=None):
        return FieldElement(self, num, den)

    def const(self, c):
        return FieldElement(self, self.poly_const(c))

    def var(self, name):
        return FieldElement(self, self.poly_var(name))

    @property
    def zero(self):
        return self.const(0)

    @property
    def one(self):
        return self.const(1)

    def with_gf(self, gf):
        """Same variables and guards over a different constant field."""
        return FieldContext(gf, self.variables, self.max_degree, self.reduce_fractions)

    def __eq__(self, other):
        return (
            isinstance(other, FieldContext)
            and other.gf == self.gf
            and other.variables == self.variables
        )

    def __hash__(self):
        return hash((self.gf, self.variables))

    def __repr__(self):
        return f"{self.gf!r}({', '.join(self.variables)})"


def _check_ctx(a, b):
    if a.ctx != b.ctx:
        raise ContextMismatch("operands belong to different field contexts")


class Polynomial:
    """A sparse multivariate polynomial with GFElement coefficients."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx, terms):
        self.ctx = ctx
        clean = {}
        for exp, c in terms.items():
            if not isinstance(c, GFElement):
                c = ctx.gf(c)
            if c:
                exp = tuple(exp)
                if len(exp) != ctx.nvars:
                    raise ValueError("exponent vector has wrong length")
                clean[exp] = c
        self.terms = clean

    # -- basics ------------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def total_degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, i):
        return max((e[i] for e in self.terms), default=-1)

    def is_constant(self):
        return all(not any(e) for e in self.terms)

    def constant_value(self):
        return self.terms.get((0,) * self.ctx.nvars, self.ctx.gf.zero)

    def __eq__(self, other):
        return (
            isinstance(other, Polynomial)
            and other.ctx == self.ctx
            and other.terms == self.terms
        )

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def _guard(self):
        if self.total_degree() > self.ctx.max_degree:
            raise DegreeOverflow(
                f"polynomial degree {self.total_degree()} exceeds the "
                f"configured bound {self.ctx.max_degree}"
            )
        return self

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        _check_ctx(self, other)
        terms = dict(self.terms)
        for exp, c in other.terms.items():
            s = terms.get(exp)
            s = c if s is None else s + c
            if s:
                terms[exp] = s
            else:
                terms.pop(exp, None)
        return Polynomial(self.ctx, terms)

    def __neg__(self):
        return Polynomial(self.ctx, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, GFElement):
            return Polynomial(self.ctx, {e: c * other for e, c in self.terms.items()})
        _check_ctx(self, other)
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exp = tuple(a + b for a, b in zip(e1, e2))
                s = terms.get(exp)
                s = c1 * c2 if s is None else s + c1 * c2
                if s:
                    terms[exp] = s
                else:
                    terms.pop(exp, None)
        return Polynomial(self.ctx, terms)._guard()

    def __pow__(self, n):
        result = self.ctx.poly_const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def scale(self, c):
        return self * c

    def map_coeffs(self, fn, new_ctx=None):
        ctx = new_ctx if new_ctx is not None else self.ctx
        return Polynomial(ctx, {e: fn(c) for e, c in self.terms.items()})

    # -- leading term (graded lex) -------------------------------------------

    def lead(self):
        """(exponent, coefficient) of the graded-lex leading term."""
        if not self.terms:
            raise ZeroPolynomial("zero polynomial has no leading term")
        exp = max(self.terms, key=lambda e: (sum(e), e))
        return exp, self.terms[exp]

    def lead_coeff(self):
        return self.lead()[1]

    def monic(self):
        if not self.terms:
            return self
        return self * self.lead_coeff().inv()

    # -- calculus --------------------------------------------------------

    def partial(self, i):
        terms = {}
        p = self.ctx.gf.p
        for exp, c in self.terms.items():
            k = exp[i] % p
            if k == 0:
                continue
            nexp = exp[:i] + (exp[i] - 1,) + exp[i + 1 :]
            nc = c * self.ctx.gf(k)
            s = terms.get(nexp)
            s = nc if s is None else s + nc
            if s:
                terms[nexp] = s
            else:
                terms.pop(nexp, None)
        return Polynomial(self.ctx, terms)

    def pth_root(self):
        """The polynomial whose p-th power is self, or None."""
        p = self.ctx.gf.p
        terms = {}
        for exp, c in self.terms.items():
            if any(x % p for x in exp):
                return None
            terms[tuple(x // p for x in exp)] = c.pth_root()
        return Polynomial(self.ctx, terms)

    def frobenius(self):
        p = self.ctx.gf.p
        return Polynomial(
            self.ctx,
            {tuple(x * p for x in exp): c**p for exp, c in self.terms.items()},
        )

    # -- division ----------------------------------------------------------

    def divmod(self, other):
        """Multivariate division by graded-lex leading terms: self = q*other + r."""
        _check_ctx(self, other)
        if not other.terms:
            raise ZeroDivisionError("polynomial division by zero")
        dexp, dc = other.lead()
        dcinv = dc.inv()
        q = {}
        r = {}
        rem = dict(self.terms)
        while rem:
            exp = max(rem, key=lambda e: (sum(e), e))
            c = rem.pop(exp)
            if all(a >= b for a, b in zip(exp, dexp)):
                qexp = tuple(a - b for a, b in zip(exp, dexp))
                qc = c * dcinv
                q[qexp] = q.get(qexp, self.ctx.gf.zero) + qc
                if not q[qexp]:
                    del q[qexp]
                for e2, c2 in other.terms.items():
                    if e2 == dexp:
                        continue
                    sexp = tuple(a + b for a, b in zip(qexp, e2))
                    s = rem.get(sexp, self.ctx.gf.zero) - qc * c2
                    if s:
                        rem[sexp] = s
                    else:
                        rem.pop(sexp, None)
            else:
                r[exp] = c
        return Polynomial(self.ctx, q), Polynomial(self.ctx, r)

    def exact_div(self, other):
        q, r = self.divmod(other)
        if r.terms:
            raise ZeroPolynomial("inexact polynomial division")
        return q

    # -- misc --------------------------------------------------------------

    def monomial_content(self):
        """Per-variable minimum exponents across all terms."""
        if not self.terms:
            return (0,) * self.ctx.nvars
        mins = [None] * self.ctx.nvars
        for exp in self.terms:
            for i, x in enumerate(exp):
                if mins[i] is None or x < mins[i]:
                    mins[i] = x
        return tuple(mins)

    def shift_down(self, mono):
        return Polynomial(
            self.ctx,
            {tuple(a - b for a, b in zip(e, mono)): c for e, c in self.terms.items()},
        )

    def eval_subs(self, assignment):
        """Substitute FieldElements for variables; returns a FieldElement."""
        ctx = next(iter(assignment.values())).ctx
        acc = ctx.zero
        for exp, c in self.terms.items():
            term = ctx.const(c) if ctx.gf == self.ctx.gf else ctx.one
            for name, e in zip(self.ctx.variables, exp):
                if e:
                    term = term * assignment[name] ** e
            acc = acc + term
        return acc

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for exp in sorted(self.terms, key=lambda e: (sum(e), e), reverse=True):
            c = self.terms[exp]
            factors = []
            cs = repr(c)
            for name, e in zip(self.ctx.variables, exp):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            if not factors:
                parts.append(f"({cs})" if "+" in cs else cs)
            elif cs == "1":
                parts.append("*".join(factors))
            else:
                coef = f"({cs})" if "+" in cs else cs
                parts.append(coef + "*" + "*".join(factors))
        return " + ".join(parts)


# -- polynomial gcd (primitive pseudo-remainder sequence) --------------------


def _main_variable(a, b):
    for i in range(a.ctx.nvars):
        if a.degree_in(i) > 0 or b.degree_in(i) > 0:
            return i
    return None


def _to_univariate(a, i):
    """Dense coefficient list in variable i; entries are Polynomials."""
    deg = a.degree_in(i)
    coeffs = [dict() for _ in range(deg + 1)]
    for exp, c in a.terms.items():
        rest = exp[:i] + (0,) + exp[i + 1 :]
        coeffs[exp[i]][rest] = c
    return [Polynomial(a.ctx, t) for t in coeffs]


def _from_univariate(ctx, coeffs, i):
    terms = {}
    for d, poly in enumerate(coeffs):
        for exp, c in poly.terms.items():
            terms[exp[:i] + (d,) + exp[i + 1 :]] = c
    return Polynomial(ctx, terms)


def _uni_trim(coeffs):
    while coeffs and coeffs[-1].is_zero():
        coeffs.pop()
    return coeffs


def _uni_prem(f, g):
    """Pseudo-remainder of dense coefficient lists (entries Polynomial)."""
    f = list(f)
    lg = g[-1]
    while f and len(f) >= len(g):
        lf = f[-1]
        shift = len(f) - len(g)
        f = [c * lg for c in f]
        for j, gc in enumerate(g):
            f[shift + j] = f[shift + j] - lf * gc
        f = _uni_trim(f)
    return f


def poly_gcd(a, b):
    """A gcd via the primitive PRS algorithm; result is graded-lex monic."""
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()
    i = _main_variable(a, b)
    if i is None:
        return a.ctx.poly_const(1)
    fa, fb = _to_univariate(a, i), _to_univariate(b, i)

    def content(coeffs):
        g = a.ctx.poly_const(0)
        for c in coeffs:
            g = poly_gcd(g, c)
            if g.is_constant() and g:
                break
        return g

    ca, cb = content(fa), content(fb)
    pa = [c.exact_div(ca) for c in fa]
    pb = [c.exact_div(cb) for c in fb]
    cont = poly_gcd(ca, cb)
    f, g = (pa, pb) if len(pa) >= len(pb) else (pb, pa)
    while g:
        r = _uni_prem(f, g)
        if r:
            cr = content(r)
            r = [c.exact_div(cr) for c in r]
        f, g = g, r
    result = _from_univariate(a.ctx, [c * cont for c in f], i)
    return result.monic()


def poly_sqrt(a):
    """Exact square root of a polynomial in odd characteristic, or None."""
    if a.is_zero():
        return a
    if a.ctx.gf.p == 2:
        raise ValueError("poly_sqrt requires odd characteristic")
    if a.is_constant():
        r = a.constant_value().sqrt()
        return None if r is None else a.ctx.poly_const(r)
    i = _main_variable(a, a)
    fa = _to_univariate(a, i)
    if (len(fa) - 1) % 2:
        return None
    m = (len(fa) - 1) // 2
    lead = poly_sqrt(fa[-1])
    if lead is None:
        return None
    two_lead = lead * a.ctx.gf(2)
    q = [None] * (m + 1)
    q[m] = lead
    # Peel coefficients from the top: the x_i^(m+j) coefficient of the square
    # is 2*q_m*q_j plus products of already-known higher coefficients.
    for j in range(m - 1, -1, -1):
        acc = fa[m + j]
        for s in range(j + 1, m):
            t = m + j - s
            if t > s:
                continue
            prod = q[s] * q[t]
            if s != t:
                prod = prod * a.ctx.gf(2)
            acc = acc - prod
        try:
            q[j] = acc.exact_div(two_lead)
        except ZeroPolynomial:
            return None
    root = _from_univariate(a.ctx, _uni_trim(list(q)), i)
    return root if root * root == a else None


# -- rational functions ----------------------------------------------------


class FieldElement:
    """A rational function num/den, normalized but compared semantically."""

    __slots__ = ("ctx", "num", "den")

    def __init__(self, ctx, num, den=None):
        if den is None:
            den = ctx.poly_const(1)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            den = ctx.poly_const(1)
        else:
            if ctx.reduce_fractions and not den.is_constant():
                g = poly_gcd(num, den)
                if not g.is_constant():
                    num = num.exact_div(g)
                    den = den.exact_div(g)
            cn = num.monomial_content()
            cd = den.monomial_content()
            common = tuple(min(x, y) for x, y in zip(cn, cd))
            if any(common):
                num = num.shift_down(common)
                den = den.shift_down(common)
            lc = den.lead_coeff()
            if lc != ctx.gf.one:
                inv = lc.inv()
                num = num * inv
                den = den * inv
        num._guard()
        den._guard()
        self.ctx = ctx
        self.num = num
        self.den = den

    # -- predicates ----------------------------------------------------------

    def is_zero(self):
        return self.num.is_zero()

    def __bool__(self):
        return bool(self.num)

    def is_constant(self):
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self):
        return self.num.constant_value() / self.den.constant_value()

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ctx.const(other)
        if not isinstance(other, FieldElement) or other.ctx != self.ctx:
            return NotImplemented
        return (self.num * other.den) == (other.num * self.den)

    def __hash__(self):
        # Normalization is canonical when fraction reduction is enabled;
        # fall back to a weak hash otherwise.
        if self.ctx.reduce_fractions:
            return hash((self.num, self.den))
        return hash(self.ctx)

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, int):
            other = self.ctx.const(other)
        _check_ctx(self, other)
        if self.den == other.den:
            return FieldElement(self.ctx, self.num + other.num, self.den)
        return FieldElement(
            self.ctx,
            self.num * other.den + other.num * self.den,
            self.den * other.den,
        )

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.ctx, -self.num, self.den)

    def __sub__(self, other):
        if isinstance(other, int):
            other = self.ctx.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            other = self.ctx.const(other)
        if isinstance(other, GFElement):
            return FieldElement(self.ctx, self.num * other, self.den)
        _check_ctx(self, other)
        return FieldElement(self.ctx, self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inv(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        return FieldElement(self.ctx, self.den, self.num)

    def __truediv__(self, other):
        if isinstance(other, int):
            other = self.ctx.const(other)
        return self * other.inv()

    def __rtruediv__(self, other):
        return self.inv() * other

    def __pow__(self, n):
        if n < 0:
            return self.inv() ** (-n)
        result = self.ctx.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    # -- characteristic-p structure ----------------------------------------

    def partial(self, var):
        """Quotient-rule partial derivative with respect to a variable name."""
        i = self.ctx.var_index(var)
        dn = self.num.partial(i)
        dd = self.den.partial(i)
        return FieldElement(
            self.ctx, dn * self.den - self.num * dd, self.den * self.den
        )

    def _pfixed_numerator(self):
        """Rewrite self = N / den^p and return (N, den)."""
        p = self.ctx.gf.p
        return self.num * self.den ** (p - 1), self.den

    def pth_root(self):
        """The unique p-th root if self is a p-th power, else None."""
        n, d = self._pfixed_numerator()
        root = n.pth_root()
        if root is None:
            return None
        return FieldElement(self.ctx, root, d)

    def pclass_decompose(self):
        """Split into p-residue classes: self = sum over alpha of c_alpha * x^alpha.

        Returns {MultiIndex alpha: c_alpha} with every c_alpha a p-th power.
        """
        p = self.ctx.gf.p
        n, d = self._pfixed_numerator()
        dp = d**p
        buckets = {}
        for exp, c in n.terms.items():
            alpha = tuple(x % p for x in exp)
            buckets.setdefault(alpha, {})[tuple(x - a for x, a in zip(exp, alpha))] = c
        out = {}
        for alpha, terms in buckets.items():
            val = FieldElement(self.ctx, Polynomial(self.ctx, terms), dp)
            if val:
                out[MultiIndex(alpha, p)] = val
        return out

    def map_coeffs(self, fn, new_ctx):
        """Apply fn to every coefficient, moving to another constant field."""
        return FieldElement(
            new_ctx,
            self.num.map_coeffs(fn, new_ctx),
            self.den.map_coeffs(fn, new_ctx),
        )

    def subs(self, assignment):
        num = self.num.eval_subs(assignment)
        den = self.den.eval_subs(assignment)
        return num / den

    def __repr__(self):
        if self.den.is_constant() and self.den.constant_value() == self.ctx.gf.one:
            return repr(self.num)
        ns = repr(self.num)
        ds = repr(self.den)
        if " + " in ns:
            ns = f"({ns})"
        if " + " in ds or "*" in ds:
            ds = f"({ds})"
        return f"{ns}/{ds}"


# -- spec-level convenience wrappers ----------------------------------------


def rf_eq(a, b):
    """Semantic equality of rational functions (cross-multiplication)."""
    _check_ctx(a, b)
    return a == b


def rf_pth_root(a):
    """The p-th root of a, or None when a is not a p-th power."""
    return a.pth_root()


def rf_partial(a, var):
    """Partial derivative of a rational function by variable name."""
    return a.partial(var)


def pclass_decompose(a):
    """Decompose a into p-residue classes over the standard frame."""
    return a.pclass_decompose()


def random_polynomial(ctx, rng, max_degree=3, nterms=4):
    """A random sparse polynomial for tests: bounded degree, few terms."""
    terms = {}
    for _ in range(nterms):
        exp = tuple(rng.randrange(max_degree + 1) for _ in range(ctx.nvars))
        coeffs = tuple(rng.randrange(ctx.gf.p) for _ in range(ctx.gf.e))
        terms[exp] = ctx.gf(coeffs)
    return Polynomial(ctx, terms)


def random_element(ctx, rng, max_degree=3, nterms=3, denominator=True):
    """A random nonzero rational function for tests."""
    while True:
        num = random_polynomial(ctx, rng, max_degree, nterms)
        if num:
            break
    if not denominator:
        return FieldElement(ctx, num)
    while True:
        den = random_polynomial(ctx, rng, max_degree, nterms)
        if den:
            break
    return FieldElement(ctx, num, den)
