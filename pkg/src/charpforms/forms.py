"""Relative de Rham complex for framed purely inseparable extensions.

A FramedExtension fixes a tower k ⊂ E inside the ambient rational function
field F: a full p-basis (b_1, ..., b_v) of F over F^p is chosen once, a
subset of "lowered" indices is adjoined to the lower field, and an ordered
subset of "active" indices forms the p-basis of E over k:

    k = F^p(b_j : j lowered),   E = k(b_i : i active).

Indices that are neither active nor lowered are absent: E does not contain
them.  The standard frame has basis = the variables, all active and nothing
lowered, i.e. E = F and k = F^p.

Differential forms of degree i are stored as coefficients on the
logarithmic basis {omega_s}: omega_s = dlog(b_{s(1)}) ∧ ... ∧ dlog(b_{s(i)})
with s a strictly increasing tuple of active positions.  Every coefficient
of E decomposes uniquely as sum_alpha c_alpha * b^alpha with c_alpha in k
and alpha a multiindex in [0, p-1]^r; this underpins exactness decisions,
the inverse Cartier operator, and the top-degree coordinate.
"""

from __future__ import annotations

import math

from .errors import (
    DegreeZero,
    FrameMismatch,
    NotPIndependent,
    NotPrimeToP,
    NotTopDegree,
    ZeroElement,
)
from .gf import embed_constant, extend_constants, project_constant
from .linalg import invert
from .pbasis import p_independent
from .rational import MultiIndex


class FramedExtension:
    """A tower k ⊂ E carved out of F by a full p-basis and index sets."""

    def __init__(self, ctx, basis, active=None, lowered=frozenset()):
        basis = tuple(basis)
        if len(basis) != ctx.nvars:
            raise NotPIndependent("basis must have one element per variable")
        if active is None:
            active = tuple(range(len(basis)))
        active = tuple(active)
        lowered = frozenset(lowered)
        if set(active) & lowered:
            raise FrameMismatch("an index cannot be both active and lowered")
        self.ctx = ctx
        self.basis = basis
        self.active = active
        self.lowered = lowered
        self.absent = frozenset(range(len(basis))) - set(active) - lowered
        self.r = len(active)
        self._jinv = None
        self._is_standard = (
            not lowered
            and active == tuple(range(ctx.nvars))
            and all(basis[i] == ctx.var(v) for i, v in enumerate(ctx.variables))
        )

    def validate(self):
        """Check that the basis really is a p-basis of F over F^p."""
        if not p_independent(list(self.basis)):
            raise NotPIndependent("frame basis is not a p-basis of F")
        return self

    # -- structure -----------------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, FramedExtension)
            and other.ctx == self.ctx
            and other.active == self.active
            and other.lowered == self.lowered
            and all(a == b for a, b in zip(other.basis, self.basis))
        )

    def __hash__(self):
        return hash((self.ctx, self.active, self.lowered))

    def __repr__(self):
        names = [f"b{i}" for i in self.active]
        return f"Frame(active={names}, lowered={sorted(self.lowered)})"

    def with_active(self, active, lowered=None):
        return FramedExtension(
            self.ctx,
            self.basis,
            active,
            self.lowered if lowered is None else lowered,
        )

    def replace_basis_element(self, index, element):
        basis = list(self.basis)
        basis[index] = element
        return FramedExtension(self.ctx, basis, self.active, self.lowered)

    # -- derivations dual to the basis ---------------------------------------

    def _jacobian_inverse(self):
        if self._jinv is None:
            jac = [
                [b.partial(v) for v in self.ctx.variables] for b in self.basis
            ]
            jinv = invert(jac)
            if jinv is None:
                raise NotPIndependent("frame basis has singular Jacobian")
            self._jinv = jinv
        return self._jinv

    def derivation(self, a, index):
        """D_index(a): the derivation dual to basis element b_index."""
        if self._is_standard:
            return a.partial(self.ctx.variables[index])
        jinv = self._jacobian_inverse()
        acc = self.ctx.zero
        for l, v in enumerate(self.ctx.variables):
            entry = jinv[l][index]
            if entry:
                da = a.partial(v)
                if da:
                    acc = acc + da * entry
        return acc

    # -- coefficient decomposition -------------------------------------------

    def decompose(self, c, check=False):
        """Write c = sum_alpha c_alpha * b^alpha with c_alpha in k.

        Keys are MultiIndex tuples over the active positions.  With
        check=True, verify that c involves no absent basis directions
        (i.e. that c genuinely lies in E).
        """
        if self._is_standard:
            return c.pclass_decompose()
        out = {}
        self._peel(c, 0, (), out)
        if check:
            for coeff in out.values():
                for j in self.absent:
                    if self.derivation(coeff, j):
                        raise FrameMismatch(
                            "element does not lie in the framed subfield"
                        )
        return out

    def _peel(self, c, pos, prefix, out):
        if c.is_zero():
            return
        p = self.ctx.gf.p
        if pos == self.r:
            out[MultiIndex(prefix, p)] = out.get(MultiIndex(prefix, p), self.ctx.zero) + c
            return
        idx = self.active[pos]
        derivs = [c]
        for _ in range(p - 1):
            derivs.append(self.derivation(derivs[-1], idx))
        b = self.basis[idx]
        comps = [None] * p
        # Back-substitute from the top power down: D^j c = sum_{m>=j}
        # m!/(m-j)! * c_m * b^(m-j), and every factorial below p is a unit.
        for j in range(p - 1, -1, -1):
            acc = derivs[j]
            for m in range(j + 1, p):
                fall = (math.factorial(m) // math.factorial(m - j)) % p
                if fall:
                    acc = acc - comps[m] * b ** (m - j) * self.ctx.gf(fall)
            comps[j] = acc * self.ctx.const(math.factorial(j) % p).inv()
        for j, cj in enumerate(comps):
            self._peel(cj, pos + 1, prefix + (j,), out)

    def monomial(self, alpha):
        """b^alpha over the active positions."""
        acc = self.ctx.one
        for pos, e in enumerate(alpha):
            if e:
                acc = acc * self.basis[self.active[pos]] ** e
        return acc

    def in_lower_field(self, c):
        """True iff c lies in k = F^p(lowered basis elements)."""
        if c.is_zero():
            return True
        for j in range(len(self.basis)):
            if j not in self.lowered and self.derivation(c, j):
                return False
        return True

    # -- form constructors -----------------------------------------------------

    def zero_form(self, degree):
        return DifferentialForm(self, degree, {})

    def scalar_form(self, c):
        return DifferentialForm(self, 0, {(): c} if c else {})

    def log_basis_form(self, s):
        return DifferentialForm(self, len(s), {tuple(s): self.ctx.one})


def standard_frame(ctx):
    return FramedExtension(ctx, [ctx.var(v) for v in ctx.variables])


def _merge_sign(s, t):
    """Merge two strictly increasing tuples; (sign, merged) or (0, None)."""
    merged = []
    i = j = 0
    inversions = 0
    while i < len(s) and j < len(t):
        if s[i] == t[j]:
            return 0, None
        if s[i] < t[j]:
            merged.append(s[i])
            i += 1
        else:
            merged.append(t[j])
            inversions += len(s) - i
            j += 1
    merged.extend(s[i:])
    merged.extend(t[j:])
    return (-1) ** inversions, tuple(merged)


class DifferentialForm:
    """An element of Ω^i_{E|k} on the logarithmic basis of a frame."""

    __slots__ = ("frame", "degree", "coeffs")

    def __init__(self, frame, degree, coeffs):
        clean = {}
        for s, c in coeffs.items():
            s = tuple(s)
            if len(s) != degree or any(
                s[i] >= s[i + 1] for i in range(len(s) - 1)
            ):
                raise ValueError("log-basis tuples must be strictly increasing")
            if any(pos < 0 or pos >= frame.r for pos in s):
                raise ValueError("log-basis position out of range")
            if c:
                clean[s] = c
        self.frame = frame
        self.degree = degree
        self.coeffs = clean

    # -- basics ------------------------------------------------------------

    def is_zero(self):
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def _check(self, other):
        if not isinstance(other, DifferentialForm):
            raise TypeError("expected a DifferentialForm")
        if other.frame != self.frame:
            raise FrameMismatch("forms live on different frames")
        if other.degree != self.degree:
            raise ValueError("forms have different degrees")

    def __eq__(self, other):
        if not isinstance(other, DifferentialForm):
            return NotImplemented
        if other.frame != self.frame or other.degree != self.degree:
            return False
        keys = set(self.coeffs) | set(other.coeffs)
        zero = self.frame.ctx.zero
        return all(
            self.coeffs.get(s, zero) == other.coeffs.get(s, zero) for s in keys
        )

    def __add__(self, other):
        self._check(other)
        coeffs = dict(self.coeffs)
        for s, c in other.coeffs.items():
            acc = coeffs.get(s)
            acc = c if acc is None else acc + c
            if acc:
                coeffs[s] = acc
            else:
                coeffs.pop(s, None)
        return DifferentialForm(self.frame, self.degree, coeffs)

    def __neg__(self):
        return DifferentialForm(
            self.frame, self.degree, {s: -c for s, c in self.coeffs.items()}
        )

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        if isinstance(c, int):
            c = self.frame.ctx.const(c)
        return DifferentialForm(
            self.frame, self.degree, {s: c * v for s, v in self.coeffs.items()}
        )

    def __mul__(self, c):
        return self.scale(c)

    __rmul__ = __mul__

    def wedge(self, other):
        if other.frame != self.frame:
            raise FrameMismatch("forms live on different frames")
        out = {}
        ctx = self.frame.ctx
        for s, c in self.coeffs.items():
            for t, d in other.coeffs.items():
                sign, merged = _merge_sign(s, t)
                if sign == 0:
                    continue
                val = c * d
                if sign < 0:
                    val = -val
                acc = out.get(merged)
                acc = val if acc is None else acc + val
                if acc:
                    out[merged] = acc
                else:
                    out.pop(merged, None)
        return DifferentialForm(self.frame, self.degree + other.degree, out)

    def __repr__(self):
        if not self.coeffs:
            return f"0 (degree {self.degree})"
        names = []
        for s in sorted(self.coeffs):
            c = self.coeffs[s]
            basis = "∧".join(
                f"dlog(b{self.frame.active[pos]})" for pos in s
            ) or "1"
            names.append(f"({c!r})·{basis}")
        return " + ".join(names)


class PureSymbol:
    """An ordered tuple of nonzero field elements: a pure mod-p symbol."""

    __slots__ = ("entries",)

    def __init__(self, entries):
        entries = tuple(entries)
        for a in entries:
            if a.is_zero():
                raise ZeroElement("pure symbols require nonzero entries")
        self.entries = entries

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __repr__(self):
        return "{" + ", ".join(repr(a) for a in self.entries) + "}"


# -- the complex -------------------------------------------------------------


def wedge(u, v):
    return u.wedge(v)


def differential(u):
    """Exterior derivative: d(c·omega_s) = dc ∧ omega_s per the Leibniz rule."""
    frame = u.frame
    out = frame.zero_form(u.degree + 1)
    for s, c in u.coeffs.items():
        omega_s = DifferentialForm(frame, u.degree, {s: frame.ctx.one})
        out = out + _dlog_expand_element(c, frame, scale_by=None).wedge(omega_s)
    return out


def _dlog_expand_element(c, frame, scale_by):
    """dc as a 1-form on the log basis; scale_by divides (for dlog)."""
    coeffs = {}
    for pos in range(frame.r):
        idx = frame.active[pos]
        dc = frame.derivation(c, idx)
        if dc:
            val = dc * frame.basis[idx]
            if scale_by is not None:
                val = val / scale_by
            coeffs[(pos,)] = val
    return DifferentialForm(frame, 1, coeffs)


def d_element(c, frame):
    """The differential of a degree-0 coefficient as a 1-form."""
    return _dlog_expand_element(c, frame, scale_by=None)


def dlog_element(c, frame):
    """dlog(c) = dc/c as a 1-form."""
    if c.is_zero():
        raise ZeroElement("dlog of zero")
    return _dlog_expand_element(c, frame, scale_by=c)


def dlog_symbol(sigma, frame):
    """dlog of a pure symbol: the wedge of the entries' dlog 1-forms."""
    if not isinstance(sigma, PureSymbol):
        sigma = PureSymbol(sigma)
    acc = frame.scalar_form(frame.ctx.one)
    for a in sigma:
        acc = acc.wedge(dlog_element(a, frame))
    return acc


def component_project(u, alpha):
    """The alpha-component of the multiindex direct-sum decomposition."""
    frame = u.frame
    alpha = tuple(alpha)
    if len(alpha) != frame.r:
        raise FrameMismatch("multiindex length does not match the frame")
    mono = frame.monomial(alpha)
    out = {}
    for s, c in u.coeffs.items():
        buckets = frame.decompose(c)
        part = buckets.get(MultiIndex(alpha, frame.ctx.gf.p))
        if part:
            out[s] = part * mono
    return DifferentialForm(frame, u.degree, out)


def is_exact(u):
    """Membership in B^i = d(Ω^(i-1)): zero 0-component and closed."""
    if u.degree == 0:
        raise DegreeZero("exactness is defined for degree >= 1 only")
    zero_alpha = (0,) * u.frame.r
    if not component_project(u, zero_alpha).is_zero():
        return False
    return differential(u).is_zero()


def inverse_cartier(u):
    """γ: raise every log-basis coefficient to the p-th power."""
    p = u.frame.ctx.gf.p
    return DifferentialForm(
        u.frame, u.degree, {s: c**p for s, c in u.coeffs.items()}
    )


def artin_schreier(u):
    """γ(u) − u; its class mod B^i is the Artin-Schreier operator's value."""
    return inverse_cartier(u) - u


def nu_member(u):
    """True iff u lies in ν(i) = kernel of the Artin-Schreier operator."""
    diff = artin_schreier(u)
    if diff.is_zero():
        return True
    if u.degree == 0:
        return False
    return is_exact(diff)


def top_class_coordinate(u):
    """The k-coordinate of u against the top log form, mod exact forms."""
    frame = u.frame
    if u.degree != frame.r:
        raise NotTopDegree("top-class coordinate requires a top-degree form")
    s = tuple(range(frame.r))
    c = u.coeffs.get(s)
    if c is None:
        return frame.ctx.zero
    buckets = frame.decompose(c)
    return buckets.get(MultiIndex((0,) * frame.r, frame.ctx.gf.p), frame.ctx.zero)


def change_pbasis(u, new_frame):
    """Re-express u on the log basis of another frame for the same tower."""
    if new_frame.ctx != u.frame.ctx:
        raise FrameMismatch("frames live over different contexts")
    if new_frame.r != u.frame.r:
        raise FrameMismatch("frames have different p-basis sizes")
    old = u.frame
    expansions = {}
    out = new_frame.zero_form(u.degree)
    for s, c in u.coeffs.items():
        term = new_frame.scalar_form(c)
        for pos in s:
            idx = old.active[pos]
            if idx not in expansions:
                expansions[idx] = dlog_element(old.basis[idx], new_frame)
            term = term.wedge(expansions[idx])
        out = out + term
    return out


# -- constant-field extension: restriction and transfer ----------------------


def extend_frame_constants(frame, d):
    """The same frame over GF(q^d); records the base frame for transfers."""
    ctx = frame.ctx
    p = ctx.gf.p
    if d % p == 0:
        raise NotPrimeToP("constant extension degree must be prime to p")
    if d == 1:
        return frame
    big_gf = extend_constants(ctx.gf, d)
    big_ctx = ctx.with_gf(big_gf)
    lift = lambda g: embed_constant(big_gf, g)  # noqa: E731
    basis = [b.map_coeffs(lift, big_ctx) for b in frame.basis]
    big = FramedExtension(big_ctx, basis, frame.active, frame.lowered)
    big.base_frame = frame
    return big


def lift_element(a, big_frame):
    big_gf = big_frame.ctx.gf
    return a.map_coeffs(lambda g: embed_constant(big_gf, g), big_frame.ctx)


def restrict_constant_ext(u, d):
    """Reinterpret u over the degree-d constant-field extension."""
    big = extend_frame_constants(u.frame, d)
    if d == 1:
        return u
    return DifferentialForm(
        big, u.degree, {s: lift_element(c, big) for s, c in u.coeffs.items()}
    )


def _project_element(a, base_frame):
    """Map a Frobenius-fixed element back down to the base constant field."""
    big_gf = a.ctx.gf

    def down(g):
        img = project_constant(big_gf, g)
        if img is None:
            raise FrameMismatch("coefficient is not fixed by the Galois group")
        return img

    return a.map_coeffs(down, base_frame.ctx)


def transfer_constant_ext(u, d=None):
    """Tr ⊗ id along the constant-field extension recorded on u's frame.

    Sums the Frobenius conjugates of every log-basis coefficient (the basis
    itself is rational over the small field), then rewrites the result over
    the base constant field.
    """
    big = u.frame
    base_frame = getattr(big, "base_frame", None)
    if base_frame is None:
        raise FrameMismatch("frame does not record a constant-field base")
    info = big.ctx.gf.subfield_info
    base_gf, degree, _ = info
    if d is not None and d != degree:
        raise FrameMismatch("transfer degree does not match the frame")
    if degree % big.ctx.gf.p == 0:
        raise NotPrimeToP("transfer degree must be prime to p")
    q0 = base_gf.q
    out = {}
    for s, c in u.coeffs.items():
        acc = c
        conj = c
        for _ in range(degree - 1):
            conj = conj.map_coeffs(lambda g: g**q0, big.ctx)
            acc = acc + conj
        if acc:
            out[s] = _project_element(acc, base_frame)
    return DifferentialForm(base_frame, u.degree, out)
