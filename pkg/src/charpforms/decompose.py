"""Constructive decomposition of Artin-Schreier-kernel forms into symbols.

The machinery here turns a differential form in ν(i) (the kernel of the
Artin-Schreier operator) into an explicit sum of logarithmic pure symbols:

* ``cartier_preimage`` solves dy/y = ω for a 1-form over a degree-p line
  extension (surjectivity of dlog onto ν(1), Cartier's theorem).
* ``subspace_transporter`` finds a multiplier carrying one codimension-1
  subspace of a framed extension onto another.
* ``normalize_line_form`` rewrites a non-exact 1-form as u·dy/y with u in
  the lower field, extending the constant field when a (p-1)-th root is
  needed.
* ``power_annihilator`` produces c with g(c^i) = 0 for i in [1, p-1] for a
  linear functional g on a line extension.
* ``decompose_top_nu`` decomposes a top-degree ν-form over a framed
  extension into logarithmic pure symbols (recursion on the p-basis size).
* ``decompose_wedge_nu`` decomposes ν-forms of the shape ω ∧ dlog(a_1) ∧
  ... ∧ dlog(a_n) by a descent over the lexicographic order of log-basis
  tuples.
* ``kernel_decompose`` combines the above into symbol decompositions with
  subfield-containment certificates.

Prime-to-p base extensions are realized exclusively as constant-field
extensions GF(q) -> GF(q^d); when an algorithm needs one it raises an
internal signal and the public entry point restarts over the bigger field.
For p = 2 no extension is ever needed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import (
    BadCodimension,
    CharpError,
    IsExact,
    NotInNu,
    NotInWedgeIdeal,
    NotPIndependent,
    NotTopDegree,
    UnsupportedExtension,
)
from .forms import (
    DifferentialForm,
    FramedExtension,
    PureSymbol,
    change_pbasis,
    dlog_element,
    dlog_symbol,
    extend_frame_constants,
    is_exact,
    lift_element,
    nu_member,
    top_class_coordinate,
)
from .gf import project_constant
from .linalg import nullvector, rank
from .pbasis import extend_to_pbasis, in_p_subfield, p_independent
from .rational import poly_sqrt

_MAX_EXTENSION = 16


class _NeedExtension(Exception):
    """Internal: restart the computation over GF(q^degree)."""

    def __init__(self, degree):
        super().__init__(degree)
        self.degree = degree


@dataclass(frozen=True)
class ExtensionCertificate:
    """Degree and provenance of the constant-field extension used."""

    d: int
    description: str = ""


@dataclass
class SymbolDecomposition:
    """A list of pure symbols whose dlogs sum to the (restricted) input."""

    extension: ExtensionCertificate
    symbols: list
    scalars: list | None = None
    frame: FramedExtension | None = None

    def dlog_sum(self, frame=None):
        frame = frame if frame is not None else self.frame
        acc = frame.zero_form(len(self.symbols[0])) if self.symbols else None
        if acc is None:
            raise ValueError("empty decomposition has no inherent degree")
        acc = frame.zero_form(len(self.symbols[0]))
        for sigma in self.symbols:
            acc = acc + dlog_symbol(sigma, frame)
        return acc


@dataclass
class DecompositionContext:
    """Adapted-frame bookkeeping for the wedge decomposition."""

    frame: FramedExtension
    n: int

    @property
    def r(self):
        return self.frame.r - self.n

    @property
    def a_positions(self):
        return tuple(range(self.r, self.frame.r))

    def eta(self):
        return self.frame.log_basis_form(self.a_positions)


# -- line-extension primitives -----------------------------------------------


def _require_line_frame(frame):
    if frame.r != 1:
        raise BadCodimension("expected a frame with a single active element")
    return frame.basis[frame.active[0]]


def cartier_preimage(c, frame):
    """y with dy/y = c·db/b over the line extension E = k(b).

    Writes y = sum y_i b^i with unknowns in k; the condition b·y' = c·y is
    k-linear in the y_i and always has a nonzero solution when c·db/b lies
    in ν(1).
    """
    b = _require_line_frame(frame)
    ctx = frame.ctx
    p = ctx.gf.p
    form = DifferentialForm(frame, 1, {(0,): c})
    if not nu_member(form):
        raise NotInNu("the form is not in the kernel of Artin-Schreier")
    if c.is_zero():
        return ctx.one
    zero_alpha = (0,) * 1
    cols = []
    for i in range(p):
        buckets = frame.decompose(c * b**i)
        cols.append([buckets.get((j,), ctx.zero) for j in range(p)])
    matrix = []
    for j in range(p):
        row = []
        for i in range(p):
            entry = -cols[i][j]
            if i == j:
                entry = entry + ctx.const(j)
            row.append(entry)
        matrix.append(row)
    sol = nullvector(matrix)
    if sol is None:
        raise NotInNu("no multiplicative preimage exists")
    y = ctx.zero
    for i, yi in enumerate(sol):
        y = y + yi * b**i
    if y.is_zero():
        raise NotInNu("degenerate preimage")
    if dlog_element(y, frame) != form:
        raise CharpError("preimage verification failed")
    return y


def _coords_to_element(coords, b):
    acc = coords[0].ctx.zero
    for i, xi in enumerate(coords):
        acc = acc + xi * b**i
    return acc


def _element_to_coords(a, frame):
    p = frame.ctx.gf.p
    buckets = frame.decompose(a)
    return [buckets.get((j,), frame.ctx.zero) for j in range(p)]


def subspace_transporter(v_basis, w_basis, frame):
    """α ∈ E^* with α·V = W for codimension-1 k-subspaces V, W of E = k(b).

    Subspaces are given by spanning vectors of coordinates on the monomial
    basis 1, b, ..., b^(p-1).
    """
    b = _require_line_frame(frame)
    ctx = frame.ctx
    p = ctx.gf.p
    if len(v_basis) != p - 1 or len(w_basis) != p - 1:
        raise BadCodimension("subspaces must have codimension 1")
    if rank([list(v) for v in v_basis]) != p - 1 or rank(
        [list(w) for w in w_basis]
    ) != p - 1:
        raise BadCodimension("spanning vectors are linearly dependent")
    phi = nullvector([list(w) for w in w_basis])
    if phi is None:
        raise BadCodimension("could not build a functional vanishing on W")

    def functional(coords):
        acc = ctx.zero
        for f, x in zip(phi, coords):
            acc = acc + f * x
        return acc

    rows = []
    for v in v_basis:
        velt = _coords_to_element(v, b)
        row = [
            functional(_element_to_coords(velt * b**j, frame)) for j in range(p)
        ]
        rows.append(row)
    alpha_coords = nullvector(rows)
    if alpha_coords is None:
        raise BadCodimension("no transporter exists")
    alpha = _coords_to_element(alpha_coords, b)
    if alpha.is_zero():
        raise CharpError("transporter degenerated to zero")
    for v in v_basis:
        image = _element_to_coords(alpha * _coords_to_element(v, b), frame)
        if functional(image):
            raise CharpError("transporter verification failed")
    return alpha


def _element_sqrt(rho, ctx):
    """A square root of rho in the ambient field, possibly after extending
    the constants by degree 2; raises when no such root is reachable."""
    if rho.is_zero():
        return ctx.zero
    gf = ctx.gf
    target = rho.num * rho.den  # rho = target / den^2
    for c in gf.elements():
        if not c:
            continue
        quotient = target * c.inv()
        root = poly_sqrt(quotient)
        if root is None:
            continue
        s = c.sqrt()
        if s is None:
            # every constant becomes a square after a quadratic extension
            raise _NeedExtension(2)
        from .rational import FieldElement

        return FieldElement(ctx, root * s, rho.den)
    raise UnsupportedExtension(
        "square root not reachable by a constant-field extension"
    )


def _normalize_line(a, frame):
    """(u, y) with a·db/b = u·dy/y, u in the lower field; may signal
    a constant-field extension."""
    ctx = frame.ctx
    p = ctx.gf.p
    form = DifferentialForm(frame, 1, {(0,): a})
    if is_exact(form):
        raise IsExact("the form is exact; normalization needs a non-exact form")
    a0 = frame.decompose(a).get((0,), ctx.zero)
    rho = a**p / a0
    if p == 2:
        u = rho
    elif p == 3:
        u = _element_sqrt(rho, ctx)
    elif p == 5:
        u = _element_sqrt(_element_sqrt(rho, ctx), ctx)
    else:  # pragma: no cover - characteristic is restricted upstream
        raise UnsupportedExtension(f"characteristic {p} not supported")
    if not frame.in_lower_field(u):
        raise UnsupportedExtension(
            "the required root exists only outside the lower field"
        )
    y = cartier_preimage(a / u, frame)
    return u, y


def normalize_line_form(u_form):
    """Public wrapper: (certificate, u, y) with input = u·dy/y.

    The returned data live over the constant-field extension recorded in
    the certificate (degree 1 when none was needed, always for p = 2).
    """
    frame = u_form.frame
    _require_line_frame(frame)
    if u_form.degree != 1:
        raise NotTopDegree("expected a 1-form over a line extension")
    a = u_form.coeffs.get((0,), frame.ctx.zero)
    d_total = 1
    cur_frame, cur_a = frame, a
    while True:
        try:
            u, y = _normalize_line(cur_a, cur_frame)
            return ExtensionCertificate(d_total, "root of X^(p-1) - rho"), u, y
        except _NeedExtension as need:
            d_total *= need.degree
            if d_total > _MAX_EXTENSION:
                raise UnsupportedExtension(
                    "constant-field extension degree exceeds the supported bound"
                ) from need
            cur_frame = extend_frame_constants(frame, d_total)
            cur_a = lift_element(a, cur_frame)


def _annihilator(g, frame):
    """c ∈ E^* with g(c^i) = 0 for all i in [1, p-1]; g is given by its
    values on the monomial basis of E = k(b) over k."""
    b = _require_line_frame(frame)
    ctx = frame.ctx
    p = ctx.gf.p
    if not g[0]:
        return ctx.one
    # kernel of g as a codimension-1 subspace: e_i - (g_i/g_0) e_0
    v_basis = []
    for i in range(1, p):
        vec = [ctx.zero] * p
        vec[0] = -(g[i] / g[0])
        vec[i] = ctx.one
        v_basis.append(vec)
    # exact 1-forms correspond to coordinates with vanishing 0-component
    w_basis = []
    for i in range(1, p):
        vec = [ctx.zero] * p
        vec[i] = ctx.one
        w_basis.append(vec)
    alpha = subspace_transporter(v_basis, w_basis, frame)
    _, y = _normalize_line(alpha, frame)
    for i in range(1, p):
        coords = _element_to_coords(y**i, frame)
        value = ctx.zero
        for gj, xj in zip(g, coords):
            value = value + gj * xj
        if value:
            raise CharpError("annihilator verification failed")
    return y


def power_annihilator(g, frame):
    """Public wrapper around the annihilator construction.

    Returns (certificate, c) with g(c^i) = 0 for i in [1, p-1]; g and c are
    lifted to the recorded constant-field extension when one is needed.
    """
    _require_line_frame(frame)
    if len(g) != frame.ctx.gf.p:
        raise BadCodimension("g must be given on the full monomial basis")
    d_total = 1
    cur_frame, cur_g = frame, list(g)
    while True:
        try:
            c = _annihilator(cur_g, cur_frame)
            return ExtensionCertificate(d_total, "annihilator of a functional"), c
        except _NeedExtension as need:
            d_total *= need.degree
            if d_total > _MAX_EXTENSION:
                raise UnsupportedExtension(
                    "constant-field extension degree exceeds the supported bound"
                ) from need
            cur_frame = extend_frame_constants(frame, d_total)
            cur_g = [lift_element(x, cur_frame) for x in g]


# -- top-degree decomposition ------------------------------------------------


def _prop_top(u, frame):
    """Recursive decomposition of a top-degree ν-form into pure symbols.

    Returns a list of PureSymbols whose dlogs over `frame` sum to u
    exactly.  May signal a constant-field extension.
    """
    ctx = frame.ctx
    p = ctx.gf.p
    r = frame.r
    if u.is_zero():
        return []
    full = tuple(range(r))
    a = u.coeffs.get(full, ctx.zero)
    i0 = frame.active[0]
    b1 = frame.basis[i0]
    # the k-linear functional x -> class of x·u on k(b_1), on the monomial basis
    g = [top_class_coordinate(u.scale(b1**i)) for i in range(p)]
    line = frame.with_active((i0,), frame.lowered)
    c = _annihilator(g, line)
    if line.in_lower_field(c):
        raise NotInNu("annihilator lies in the lower field; input not in ν")
    frame2 = frame.replace_basis_element(i0, c)
    u2 = change_pbasis(u, frame2)
    if any(s != full for s in u2.coeffs):
        raise CharpError("basis replacement left stray components")
    a2 = u2.coeffs.get(full, ctx.zero)
    if r == 1:
        for j in range(p):
            if a2 == ctx.const(j):
                if j == 0:
                    return []
                return [PureSymbol((c**j,))]
        raise NotInNu("top coefficient is not an integer multiple of dlog")
    frame3 = frame2.with_active(frame2.active[1:], frame2.lowered | {i0})
    u3 = DifferentialForm(frame3, r - 1, {tuple(range(r - 1)): a2})
    if not nu_member(u3):
        raise NotInNu("peeled form left the Artin-Schreier kernel")
    tail = _prop_top(u3, frame3)
    symbols = [PureSymbol((c,) + tuple(sigma.entries)) for sigma in tail]
    return symbols


def decompose_top_nu(u):
    """Decompose a top-degree form in ν(r) into logarithmic pure symbols.

    The result is exact over the constant-field extension recorded in the
    certificate; for p = 2 the degree is always 1.
    """
    frame = u.frame
    if u.degree != frame.r:
        raise NotTopDegree("decomposition requires a top-degree form")
    if not nu_member(u):
        raise NotInNu("input is not in the kernel of Artin-Schreier")
    d_total = 1
    cur_frame, cur_u = frame, u
    while True:
        try:
            symbols = _prop_top(cur_u, cur_frame)
            total = cur_frame.zero_form(u.degree)
            for sigma in symbols:
                total = total + dlog_symbol(sigma, cur_frame)
            if total != cur_u:
                raise CharpError("decomposition failed the round-trip check")
            return SymbolDecomposition(
                ExtensionCertificate(d_total, "top-degree decomposition"),
                symbols,
                frame=cur_frame,
            )
        except _NeedExtension as need:
            d_total *= need.degree
            if d_total > _MAX_EXTENSION:
                raise UnsupportedExtension(
                    "constant-field extension degree exceeds the supported bound"
                ) from need
            cur_frame = extend_frame_constants(frame, d_total)
            cur_u = DifferentialForm(
                cur_frame,
                u.degree,
                {s: lift_element(cc, cur_frame) for s, cc in u.coeffs.items()},
            )


# -- wedge-shape decomposition -------------------------------------------------


def _strip_eta(form, dctx):
    """Divide a form by η: every log tuple must end with the a-positions."""
    apos = dctx.a_positions
    n = dctx.n
    out = {}
    for s, c in form.coeffs.items():
        if len(s) < n or s[-n:] != apos:
            raise NotInWedgeIdeal(
                "form has a component outside the wedge ideal of the a-part"
            )
        out[s[:-n]] = c
    return DifferentialForm(dctx.frame, form.degree - n, out)


def _drop_a_terms(form, dctx):
    r = dctx.r
    kept = {s: c for s, c in form.coeffs.items() if all(pos < r for pos in s)}
    return DifferentialForm(dctx.frame, form.degree, kept)


def _wedge_bottom(a, s1, c0, dctx):
    """Bottom step of the wedge descent: peel a·ω_(s1)∧η.

    The annihilator c0 is only determined up to a unit t of the field below
    position s1, and the choice decides which rank-(n+1) subfield the
    symbol entries land in.  We look for a representative c = t·c0 such
    that λ = a / (ω_(s1)-component of dlog c) lies in F^p(c, a-part); then
    λ·dlog(c)∧η is a top-degree ν-form over that subfield and its symbols
    have all entry differentials inside span{dc, da_1, ..., da_n} — which
    keeps the remainder in the wedge ideal with tuples strictly below s1.
    Multipliers are searched among monomials in the basis elements below
    s1 (exponents matter only modulo p-th powers).
    """
    frame = dctx.frame
    ctx = frame.ctx
    p = ctx.gf.p
    n = dctx.n
    apos = dctx.a_positions
    a_elts = [frame.basis[i] for i in apos]
    prefix = [frame.basis[j] for j in range(s1) if j not in frame.lowered]
    candidates = [ctx.one]
    for exps in itertools.product(range(p), repeat=len(prefix)):
        if not any(exps):
            continue
        t = ctx.one
        for b, e in zip(prefix, exps):
            t = t * b**e
        candidates.append(t)
    for t in candidates:
        cc = t * c0
        comp = dlog_element(cc, frame).coeffs.get((s1,), ctx.zero)
        if comp.is_zero():
            continue
        lam = a / comp
        if not in_p_subfield(lam, [cc] + a_elts):
            continue
        mframe = frame.replace_basis_element(s1, cc).with_active(
            (s1,) + apos, frame.lowered
        )
        try:
            mframe.decompose(lam, check=True)
        except CharpError:
            continue
        bform = DifferentialForm(mframe, n + 1, {tuple(range(n + 1)): lam})
        if not nu_member(bform):
            continue
        try:
            return _prop_top(bform, mframe)
        except NotInNu:
            continue
    raise UnsupportedExtension(
        "no annihilator representative places the peeled coefficient in a "
        "subfield generated by it and the a-part"
    )


def _prop_wedge(a, s, dctx):
    """One step of the wedge decomposition.

    Input: a ∈ F and a strictly increasing tuple s of b-positions such
    that (a^p - a)·ω_s∧η lies in the span of lower tuples plus exact
    forms.  Returns (ν, symbols): ν is supported on tuples strictly below
    s and a·ω_s∧η − ν∧η = Σ dlog(symbols) exactly over dctx.frame.
    """
    frame = dctx.frame
    ctx = frame.ctx
    p = ctx.gf.p
    apos = dctx.a_positions
    if not s:
        # terminal case m = n: a·η is a ν-form of the extension generated
        # by the a-part over the base field
        sub = frame.with_active(apos, frame.lowered)
        try:
            sub.decompose(a, check=True)
        except CharpError as exc:
            raise NotInNu(
                "coefficient does not lie in the subfield of the a-part"
            ) from exc
        base_form = DifferentialForm(sub, dctx.n, {tuple(range(dctx.n)): a})
        if base_form.is_zero():
            return None, []
        if not nu_member(base_form):
            raise NotInNu("base coefficient left the Artin-Schreier kernel")
        return None, _prop_top(base_form, sub)
    s1 = s[0]
    lowered2 = frame.lowered | set(range(s1))
    active2 = tuple(range(s1, s[-1] + 1)) + apos
    tower = frame.with_active(active2, lowered2)
    try:
        tower.decompose(a, check=True)
    except CharpError as exc:
        raise NotInNu("coefficient does not lie in the middle tower field") from exc
    # top form of the tower: ω_c ∧ ω_s ∧ η up to an irrelevant global sign
    omega_max = tower.log_basis_form(tuple(range(tower.r)))
    b1 = frame.basis[s1]
    g = [
        top_class_coordinate(omega_max.scale(a * b1**i))
        for i in range(p)
    ]
    line = frame.with_active((s1,), lowered2)
    c = _annihilator(g, line)
    if line.in_lower_field(c):
        raise NotInNu("annihilator lies in the lower field; input not in ν")
    if len(s) == 1:
        symbols = _wedge_bottom(a, s1, c, dctx)
    else:
        frame2 = FramedExtension(
            frame.ctx,
            [c if i == s1 else b for i, b in enumerate(frame.basis)],
            frame.active,
            frame.lowered,
        )
        tower2 = frame2.with_active(active2, lowered2)
        # dlog(b1) over the replaced tower collapses onto the c-direction
        kappa_form = dlog_element(b1, tower2)
        if set(kappa_form.coeffs) - {(0,)}:
            raise CharpError("replaced generator retained stray directions")
        kappa = kappa_form.coeffs.get((0,), ctx.zero)
        if kappa.is_zero():
            raise CharpError("replaced generator lost its leading direction")
        a2 = a * kappa
        dec = tower2.decompose(a2, check=True)
        zero_rest = (0,) * (tower2.r - 1)
        for alpha, coeff in dec.items():
            if alpha[0] != 0 and tuple(alpha[1:]) == zero_rest and coeff:
                raise NotInNu("pure powers of the annihilator obstruct descent")
        lam0 = dec.get((0,) * tower2.r, ctx.zero)
        if a2**p != lam0:
            raise NotInNu("p-th power consistency check failed")
        _, tail_symbols = _prop_wedge(a2, s[1:], dctx)
        symbols = [
            PureSymbol((c,) + tuple(sigma.entries)) for sigma in tail_symbols
        ]
    # ν is whatever is left of a·ω_s∧η after removing the symbols' dlogs
    target = frame.log_basis_form(s + apos).scale(a)
    total = frame.zero_form(len(s) + dctx.n)
    for sigma in symbols:
        total = total + dlog_symbol(sigma, frame)
    nu = _strip_eta(target - total, dctx)
    for t in nu.coeffs:
        if t >= s:
            raise CharpError("descent failed: correction is not lower than s")
    return nu, symbols


def _wedge_loop(omega_rest, dctx):
    """Peel lexicographically maximal tuples until nothing is left."""
    frame = dctx.frame
    symbols = []
    guard = len(omega_rest.coeffs)
    max_iter = 2 ** dctx.r + 2
    for _ in range(max_iter):
        if omega_rest.is_zero():
            return symbols
        s = max(omega_rest.coeffs)
        a = omega_rest.coeffs[s]
        nu, syms = _prop_wedge(a, s, dctx)
        symbols.extend(syms)
        remainder = DifferentialForm(
            frame,
            omega_rest.degree,
            {t: c for t, c in omega_rest.coeffs.items() if t != s},
        )
        omega_rest = remainder if nu is None else remainder + nu
        if omega_rest and max(omega_rest.coeffs) >= s:
            raise CharpError("descent failed to reduce the leading tuple")
    raise CharpError("descent loop exceeded its iteration bound")


def _adapted_context(a_elts):
    basis = extend_to_pbasis(list(a_elts))
    ctx = a_elts[0].ctx
    frame = FramedExtension(ctx, basis)
    return DecompositionContext(frame, len(a_elts))


def decompose_wedge_nu(omega, a_elts):
    """Decompose ω∧dlog(a_1)∧...∧dlog(a_n) ∈ ν(m) into pure symbols.

    ω is a degree-(m-n) form over the standard frame (or any frame of the
    same field); the elements a_i must be p-independent.  Each returned
    symbol carries the a-part subfield inside the field its entries
    generate.
    """
    a_elts = list(a_elts)
    if not p_independent(a_elts):
        raise NotPIndependent("the distinguished elements are not p-independent")
    dctx = _adapted_context(a_elts)
    w = change_pbasis(omega, dctx.frame)
    target = w.wedge(dctx.eta())
    if not target.is_zero() and not nu_member(target):
        raise NotInNu("ω∧η is not in the kernel of Artin-Schreier")
    d_total = 1
    base_frame = dctx.frame
    cur_dctx, cur_w = dctx, w
    while True:
        try:
            omega_rest = _drop_a_terms(cur_w, cur_dctx)
            symbols = _wedge_loop(omega_rest, cur_dctx)
            total = cur_dctx.frame.zero_form(target.degree)
            for sigma in symbols:
                total = total + dlog_symbol(sigma, cur_dctx.frame)
            cur_target = cur_w.wedge(cur_dctx.eta())
            if total != cur_target:
                raise CharpError("decomposition failed the round-trip check")
            return SymbolDecomposition(
                ExtensionCertificate(d_total, "wedge-shape decomposition"),
                symbols,
                frame=cur_dctx.frame,
            )
        except _NeedExtension as need:
            d_total *= need.degree
            if d_total > _MAX_EXTENSION:
                raise UnsupportedExtension(
                    "constant-field extension degree exceeds the supported bound"
                ) from need
            big = extend_frame_constants(base_frame, d_total)
            cur_dctx = DecompositionContext(big, dctx.n)
            cur_w = DifferentialForm(
                big,
                w.degree,
                {s: lift_element(c, big) for s, c in w.coeffs.items()},
            )


def _project_symbol_down(sigma, base_ctx, big_gf):
    """Map a symbol's entries to the base constant field; None if impossible."""
    entries = []
    for a in sigma.entries:
        try:
            entries.append(
                a.map_coeffs(
                    lambda g: _project_or_fail(big_gf, g), base_ctx
                )
            )
        except _NotRational:
            return None
    return PureSymbol(entries)


class _NotRational(Exception):
    pass


def _project_or_fail(big_gf, g):
    img = project_constant(big_gf, g)
    if img is None:
        raise _NotRational
    return img


def kernel_decompose(u, a_elts):
    """Full kernel decomposition with subfield-containment certificates.

    Input: u ∈ ν(m) expressible inside Ω^(m-n) ∧ dlog(a_1)∧...∧dlog(a_n).
    Output: pure symbols σ with Σ dlog(σ) = u exactly and, for every σ and
    every a_i, a_i ∈ F^p(σ entries).
    """
    a_elts = list(a_elts)
    if not p_independent(a_elts):
        raise NotPIndependent("the distinguished elements are not p-independent")
    dctx = _adapted_context(a_elts)
    w_full = change_pbasis(u, dctx.frame)
    apos = set(dctx.a_positions)
    for s in w_full.coeffs:
        if not apos <= set(s):
            raise NotInWedgeIdeal("form is not in the wedge ideal of the a-part")
    if w_full.is_zero():
        return SymbolDecomposition(
            ExtensionCertificate(1, "kernel decomposition"), [], frame=dctx.frame
        )
    if not nu_member(u):
        raise NotInNu("input is not in the kernel of Artin-Schreier")
    omega = _strip_eta(w_full, dctx)
    result = decompose_wedge_nu(omega, a_elts)
    if result.extension.d > 1:
        # Fold back to the base field: only possible here when every symbol
        # entry is already rational over it.
        big_gf = result.frame.ctx.gf
        projected = []
        for sigma in result.symbols:
            small = _project_symbol_down(sigma, dctx.frame.ctx, big_gf)
            if small is None:
                raise UnsupportedExtension(
                    "decomposition exists only over a constant-field extension"
                )
            projected.append(small)
        result = SymbolDecomposition(
            ExtensionCertificate(1, "kernel decomposition (folded)"),
            projected,
            frame=dctx.frame,
        )
        total = dctx.frame.zero_form(u.degree)
        for sigma in result.symbols:
            total = total + dlog_symbol(sigma, dctx.frame)
        if total != w_full:
            raise CharpError("folded decomposition failed the round-trip check")
    # containment certificates
    big_ctx = result.frame.ctx
    lifted_a = (
        a_elts
        if big_ctx == dctx.frame.ctx
        else [lift_element(a, result.frame) for a in a_elts]
    )
    for sigma in result.symbols:
        for a in lifted_a:
            if not in_p_subfield(a, list(sigma.entries)):
                raise CharpError("containment certificate failed")
    result.extension = ExtensionCertificate(
        result.extension.d, "kernel decomposition"
    )
    return result
