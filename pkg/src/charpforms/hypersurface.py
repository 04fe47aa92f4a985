"""Function fields of geometrically nonreduced hypersurfaces.

An affine hypersurface over F = GF(q)(x_1, ..., x_v) is given by a nonzero
polynomial f in auxiliary variables T_1, ..., T_k with coefficients in F.
It is geometrically nonreduced exactly when every T-exponent is divisible
by p.  The coefficient-ratio subfield N = F^p(ratios of nonzero
coefficients) then measures how far f is from being a p-th power; its
p-degree n controls which symbols die in the function field.

For the supported p-monic shape (some T_j appears only as a lone T_j^p
term with constant coefficient) the function field is constructed
explicitly as F(t_1, ..., t_{k-1})[s] / (s^p - g), forms over F can be
restricted to it exactly, and the kernel description can be verified on
randomized instances.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from .errors import (
    CharpError,
    FrameMismatch,
    MissingFunctionField,
    NotGeometricallyNonreduced,
    NotPMonic,
    Reducible,
    ZeroPolynomial,
)
from .forms import DifferentialForm, PureSymbol, dlog_symbol, standard_frame
from .pbasis import in_p_subfield, p_independent, reduce_to_p_independent
from .rational import FieldContext, random_element


@dataclass
class HypersurfacePoly:
    """A polynomial in T-variables with coefficients in a rational field.

    ``terms`` maps T-exponent tuples (length = len(tvars)) to nonzero
    coefficients; ``tvars`` must be disjoint from the base variables.
    """

    base: FieldContext
    tvars: tuple
    terms: dict

    def __post_init__(self):
        self.tvars = tuple(self.tvars)
        if set(self.tvars) & set(self.base.variables):
            raise ValueError("T-variables must be disjoint from base variables")
        clean = {}
        for exp, c in self.terms.items():
            exp = tuple(exp)
            if len(exp) != len(self.tvars):
                raise ValueError("exponent arity does not match tvars")
            if not c.is_zero():
                clean[exp] = c
        if not clean:
            raise ZeroPolynomial("hypersurface polynomial is zero")
        self.terms = clean


@dataclass
class HypersurfaceAnalysis:
    poly: HypersurfacePoly
    geom_nonreduced: bool
    coeff_ratios: list
    norm_gens: list
    n: int
    fx: object = None


def _is_geom_nonreduced(f):
    p = f.base.gf.p
    return all(e % p == 0 for exp in f.terms for e in exp)


def analyze_hypersurface(f):
    """Nonreducedness, coefficient-ratio subfield generators, and F(X)."""
    coeffs = list(f.terms.values())
    ratios = []
    for i, ci in enumerate(coeffs):
        for j, cj in enumerate(coeffs):
            if i == j:
                continue
            r = ci / cj
            if all(r != seen for seen in ratios):
                ratios.append(r)
    gens = reduce_to_p_independent(ratios)
    fx = None
    if _is_geom_nonreduced(f):
        try:
            fx = build_function_field(f)
        except CharpError:
            fx = None
    return HypersurfaceAnalysis(
        poly=f,
        geom_nonreduced=_is_geom_nonreduced(f),
        coeff_ratios=ratios,
        norm_gens=gens,
        n=len(gens),
        fx=fx,
    )


@dataclass
class QuotientField:
    """F(X) = F(t_1, ..., t_{k-1})[s] / (s^p - g) for a p-monic hypersurface.

    ``ctx`` is the rational field F(t) with the surviving T-variables
    appended to the base variables; ``svar`` names the inseparable
    generator s (the p-monic T-variable).  ``pivot`` is the base variable
    made p-dependent by the relation sum(t^(p alpha) * dc_alpha) = 0;
    the chosen p-basis of F(X) over F(X)^p is every other base variable,
    then the t's, then s.
    """

    poly: HypersurfacePoly
    ctx: FieldContext
    g: object
    svar: str
    pivot: str
    pbasis_names: tuple
    relation: dict  # base variable name -> coefficient of dx in the relation

    @property
    def p(self):
        return self.ctx.gf.p

    def element(self, coeffs):
        """The element sum(coeffs[i] * s^i) with coeffs in F(t)."""
        coeffs = list(coeffs)
        if len(coeffs) > self.p:
            raise ValueError("coefficient list longer than the s-degree")
        coeffs += [self.ctx.zero] * (self.p - len(coeffs))
        return QFElement(self, tuple(coeffs))

    def from_rational(self, a):
        return self.element([a])

    @property
    def s(self):
        return self.element([self.ctx.zero, self.ctx.one])

    @property
    def zero(self):
        return self.element([])

    @property
    def one(self):
        return self.element([self.ctx.one])


class QFElement:
    """An element of a QuotientField, as a polynomial in s of degree < p."""

    __slots__ = ("qf", "coeffs")

    def __init__(self, qf, coeffs):
        self.qf = qf
        self.coeffs = tuple(coeffs)

    def is_zero(self):
        return all(c.is_zero() for c in self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if not isinstance(other, QFElement) or other.qf is not self.qf:
            return NotImplemented
        return all(a == b for a, b in zip(self.coeffs, other.coeffs))

    def __add__(self, other):
        return QFElement(
            self.qf, tuple(a + b for a, b in zip(self.coeffs, other.coeffs))
        )

    def __neg__(self):
        return QFElement(self.qf, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        qf = self.qf
        p = qf.p
        prod = [qf.ctx.zero] * (2 * p - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                if b.is_zero():
                    continue
                prod[i + j] = prod[i + j] + a * b
        # reduce s^(p+i) = g * s^i
        for i in range(2 * p - 2, p - 1, -1):
            if not prod[i].is_zero():
                prod[i - p] = prod[i - p] + prod[i] * qf.g
                prod[i] = qf.ctx.zero
        return QFElement(qf, tuple(prod[:p]))

    def frobenius(self):
        """The p-th power, computed via s^p = g."""
        qf = self.qf
        p = qf.p
        out = qf.ctx.zero
        gp = qf.ctx.one
        for c in self.coeffs:
            out = out + c**p * gp
            gp = gp * qf.g
        return qf.from_rational(out)

    def inv(self):
        """Inverse via the extended Euclidean algorithm against s^p - g."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in the quotient field")
        qf = self.qf
        ctx = qf.ctx
        # dense univariate polynomials over F(t), lowest degree first
        modulus = [-qf.g] + [ctx.zero] * (qf.p - 1) + [ctx.one]
        a = _trim(list(self.coeffs))
        r0, r1 = modulus, a
        t0, t1 = [ctx.zero], [ctx.one]
        while len(r1) > 1:
            q, r = _polydivmod(r0, r1, ctx)
            r0, r1 = r1, r
            t0, t1 = t1, _polysub(t0, _polymul(q, t1, ctx), ctx)
        if not r1 or r1[0].is_zero():
            raise ZeroDivisionError("element is a zero divisor (reducible modulus)")
        lead = r1[0]
        inv = [c / lead for c in t1]
        return qf.element(inv)

    def __truediv__(self, other):
        return self * other.inv()

    def __repr__(self):
        return f"QFElement({self.coeffs!r})"


def _trim(poly):
    while poly and poly[-1].is_zero():
        poly.pop()
    return poly


def _polysub(a, b, ctx):
    out = [ctx.zero] * max(len(a), len(b))
    for i, c in enumerate(a):
        out[i] = out[i] + c
    for i, c in enumerate(b):
        out[i] = out[i] - c
    return _trim(out)


def _polymul(a, b, ctx):
    out = [ctx.zero] * (len(a) + len(b) - 1) if a and b else []
    for i, c in enumerate(a):
        if c.is_zero():
            continue
        for j, d in enumerate(b):
            out[i + j] = out[i + j] + c * d
    return _trim(out)


def _polydivmod(a, b, ctx):
    a = list(a)
    q = [ctx.zero] * max(len(a) - len(b) + 1, 0)
    inv_lead = b[-1].inv()
    for i in range(len(a) - len(b), -1, -1):
        c = a[i + len(b) - 1] * inv_lead
        if c.is_zero():
            continue
        q[i] = c
        for j, d in enumerate(b):
            a[i + j] = a[i + j] - c * d
    return _trim(q), _trim(a[: len(b) - 1])


def _embed(a, ext_ctx, base_nvars):
    """Move a base-field element into the extended context F(t)."""
    if a.ctx.nvars == ext_ctx.nvars:
        return ext_ctx.element(
            ext_ctx.poly(dict(a.num.terms)), ext_ctx.poly(dict(a.den.terms))
        )
    pad = (0,) * (ext_ctx.nvars - base_nvars)
    num = ext_ctx.poly({exp + pad: c for exp, c in a.num.terms.items()})
    den = ext_ctx.poly({exp + pad: c for exp, c in a.den.terms.items()})
    return ext_ctx.element(num, den)


def build_function_field(f):
    """Construct F(X) for a geometrically nonreduced p-monic hypersurface."""
    if not _is_geom_nonreduced(f):
        raise NotGeometricallyNonreduced(
            "hypersurface is not geometrically nonreduced"
        )
    base = f.base
    p = base.gf.p
    k = len(f.tvars)
    # find the p-monic variable: appears only as a lone T_j^p term with a
    # nonzero constant coefficient
    sj = None
    for j in range(k):
        lone = tuple(p if i == j else 0 for i in range(k))
        lead = f.terms.get(lone)
        if lead is None or not lead.is_constant():
            continue
        if any(exp[j] != 0 for exp in f.terms if exp != lone):
            continue
        sj = j
        break
    if sj is None:
        raise NotPMonic(
            "no T-variable appears as a lone p-th power with constant coefficient"
        )
    lead = f.terms[tuple(p if i == sj else 0 for i in range(k))]
    tnames = tuple(name for i, name in enumerate(f.tvars) if i != sj)
    if tnames:
        ext_ctx = FieldContext(
            base.gf,
            base.variables + tnames,
            max_degree=base.max_degree,
            reduce_fractions=base.reduce_fractions,
        )
    else:
        ext_ctx = base
    # g = -(other terms)/lead with T_i sent to t_i
    g = ext_ctx.zero
    c_alpha = {}  # t-exponent tuple -> coefficient in F (embedded)
    for exp, c in f.terms.items():
        if exp[sj] != 0:
            continue
        texp = tuple(e for i, e in enumerate(exp) if i != sj)
        coeff = _embed(-c / lead, ext_ctx, base.nvars)
        mono = ext_ctx.one
        for name, e in zip(tnames, texp):
            mono = mono * ext_ctx.var(name) ** e
        g = g + coeff * mono
        c_alpha[texp] = c_alpha.get(texp, ext_ctx.zero) + coeff
    if g.is_zero() or g.pth_root() is not None:
        raise Reducible("defining equation s^p = g has a rational p-th root")
    # dependency relation: sum over alpha of t^(p alpha) dc_alpha = 0;
    # the pivot is the first base variable with nonzero coefficient in the
    # lowest-alpha nonzero differential
    pivot = None
    for texp in sorted(c_alpha):
        c = c_alpha[texp]
        for name in base.variables:
            if not c.partial(name).is_zero():
                pivot = name
                break
        if pivot is not None:
            break
    if pivot is None:
        raise Reducible("all coefficients are p-th powers")
    relation = {name: g.partial(name) for name in base.variables}
    if relation[pivot].is_zero():
        raise CharpError("pivot lost its coefficient in the dependency relation")
    pbasis_names = tuple(
        name for name in base.variables if name != pivot
    ) + tnames + (f.tvars[sj],)
    return QuotientField(
        poly=f,
        ctx=ext_ctx,
        g=g,
        svar=f.tvars[sj],
        pivot=pivot,
        pbasis_names=pbasis_names,
        relation=relation,
    )


def restrict_form_to_FX(u, qf):
    """Restrict a form over F (standard frame) along F -> F(X).

    The image is expressed over the standard frame of F(t) using the
    p-basis of F(X) that drops the pivot variable: the pivot's dlog is
    rewritten through the dependency relation, and the s- and t-directions
    never occur for forms coming from F, so the representation is faithful
    and the zero-test is exact.
    """
    base = qf.poly.base
    frame = u.frame
    if (
        frame.ctx != base
        or frame.r != base.nvars
        or list(frame.basis) != [base.var(name) for name in base.variables]
    ):
        raise FrameMismatch("restriction requires the standard frame over F")
    ext = qf.ctx
    target = standard_frame(ext)
    piv = base.variables.index(qf.pivot)
    h = {name: qf.relation[name] for name in base.variables}
    hp = h[qf.pivot]
    xpiv = ext.var(qf.pivot)
    # dlog x_j for each base position, over the target frame
    images = []
    for j, name in enumerate(base.variables):
        if j != piv:
            images.append(
                DifferentialForm(target, 1, {(j,): ext.one})
            )
        else:
            coeffs = {}
            for i, other in enumerate(base.variables):
                if i == piv or h[other].is_zero():
                    continue
                coeffs[(i,)] = -(h[other] * ext.var(other)) / (hp * xpiv)
            images.append(DifferentialForm(target, 1, coeffs))
    out = target.zero_form(u.degree)
    for s, c in u.coeffs.items():
        term = DifferentialForm(
            target, 0, {(): _embed(c, ext, base.nvars)}
        )
        for j in s:
            term = term.wedge(images[j])
        out = out + term
    return out


def symbol_in_kernel_predicate(sigma, analysis):
    """True iff the symbol's entries generate a subfield containing N.

    Symbols shorter than n can never qualify (degree count).
    """
    entries = list(sigma.entries)
    if len(entries) < analysis.n:
        return False
    return all(in_p_subfield(a, entries) for a in analysis.norm_gens)


@dataclass
class KernelReport:
    m: int
    n: int
    trials: int
    predicate_true_zero: int = 0
    predicate_false_nonzero: int = 0
    predicate_false_skipped: int = 0
    wedge_zero: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.violations


def _random_nonzero(ctx, rng, **kw):
    while True:
        e = random_element(ctx, rng, **kw)
        if not e.is_zero():
            return e


def kernel_verify_instance(analysis, m, trials, seed=0):
    """Randomized check of the kernel description at symbol length m.

    Per trial: a symbol containing the subfield generators restricts to
    zero; a fully random symbol with a nonzero dlog restricts to nonzero
    unless the predicate holds; and any (m-n)-form wedged against the
    generators' dlogs restricts to zero.
    """
    if analysis.fx is None:
        raise MissingFunctionField("no function field available for this input")
    qf = analysis.fx
    base = qf.poly.base
    frame = standard_frame(base)
    n = analysis.n
    report = KernelReport(m=m, n=n, trials=trials)
    for trial in range(trials):
        rng = random.Random((seed << 20) ^ (trial * 1000003 + 17))
        if m >= n:
            # (i) symbols containing the generators die in F(X)
            heads = [
                _random_nonzero(base, rng, max_degree=1, nterms=2)
                for _ in range(m - n)
            ]
            sigma = PureSymbol(tuple(heads) + tuple(analysis.norm_gens))
            w = dlog_symbol(sigma, frame)
            img = restrict_form_to_FX(w, qf)
            report.predicate_true_zero += 1
            if not img.is_zero():
                report.violations.append(
                    ("predicate-true symbol restricted to a nonzero form", sigma)
                )
            # (iii) the wedge ideal of the generators dies in F(X)
            eta = dlog_symbol(PureSymbol(tuple(analysis.norm_gens)), frame)
            omega = frame.zero_form(m - n)
            for s in itertools.combinations(range(base.nvars), m - n):
                if rng.random() < 0.5:
                    omega = omega + DifferentialForm(
                        frame, m - n, {s: random_element(base, rng, max_degree=1)}
                    )
            wi = omega.wedge(eta)
            report.wedge_zero += 1
            if not restrict_form_to_FX(wi, qf).is_zero():
                report.violations.append(
                    ("wedge-ideal form restricted to a nonzero form", omega)
                )
        # (ii) random symbols outside the kernel description survive
        sigma = PureSymbol(
            tuple(
                _random_nonzero(base, rng, max_degree=1, nterms=2)
                for _ in range(m)
            )
        )
        w = dlog_symbol(sigma, frame)
        if symbol_in_kernel_predicate(sigma, analysis):
            report.predicate_true_zero += 1
            if not restrict_form_to_FX(w, qf).is_zero():
                report.violations.append(
                    ("predicate-true symbol restricted to a nonzero form", sigma)
                )
        elif w.is_zero():
            report.predicate_false_skipped += 1
        else:
            report.predicate_false_nonzero += 1
            if restrict_form_to_FX(w, qf).is_zero():
                report.violations.append(
                    ("predicate-false symbol restricted to zero", sigma)
                )
    return report
