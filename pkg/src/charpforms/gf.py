"""Exact arithmetic in small Galois fields GF(p^e).

Elements are represented on the polynomial basis 1, w, ..., w^(e-1) modulo a
fixed monic irreducible polynomial over GF(p).  The fields used here are tiny
(p in {2,3,5}, modest e), so everything is done with plain integer tuples and
no table tricks.
"""

from __future__ import annotations

import itertools

from .errors import InvalidSubfield

# Default moduli, written low degree first, without the leading monic term.
# E.g. GF(4) = GF(2)[w]/(w^2+w+1) is stored as (1, 1).
_DEFAULT_MODULI = {
    (2, 1): (1,),
    (2, 2): (1, 1),
    (2, 3): (1, 1, 0),
    (2, 4): (1, 1, 0, 0),
    (2, 5): (1, 0, 1, 0, 0),
    (2, 6): (1, 1, 0, 0, 0, 0),
    (3, 1): (1,),
    (3, 2): (1, 0),          # w^2 + 1
    (3, 3): (1, 2, 0),       # w^3 + 2w + 1
    (3, 4): (2, 1, 0, 0),    # w^4 + w + 2
    (5, 1): (1,),
    (5, 2): (2, 0),          # w^2 + 2
    (5, 3): (1, 1, 0),
    (5, 4): (2, 1, 1, 0),
}

_SMALL_PRIMES = (2, 3, 5)


def _poly_trim(c):
    i = len(c)
    while i > 0 and c[i - 1] == 0:
        i -= 1
    return tuple(c[:i])


def _poly_mulmod_p(a, b, p):
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _poly_trim(out)


def _poly_divmod_p(a, b, p):
    a = list(a)
    binv = pow(b[-1], -1, p)
    q = [0] * max(0, len(a) - len(b) + 1)
    for i in range(len(a) - len(b), -1, -1):
        f = (a[i + len(b) - 1] * binv) % p
        if f:
            q[i] = f
            for j, y in enumerate(b):
                a[i + j] = (a[i + j] - f * y) % p
    return _poly_trim(q), _poly_trim(a)


def _is_irreducible(modulus_full, p):
    """Trial division by every monic polynomial of degree <= e/2."""
    e = len(modulus_full) - 1
    if e == 1:
        return True
    for d in range(1, e // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            div = tuple(tail) + (1,)
            _, rem = _poly_divmod_p(modulus_full, div, p)
            if not rem:
                return False
    return True


class GaloisField:
    """An immutable GF(p^e) context.

    `modulus` is the tuple of the e non-leading coefficients of the defining
    monic irreducible polynomial (low degree first).
    """

    def __init__(self, p, e=1, modulus=None):
        if p not in _SMALL_PRIMES:
            raise ValueError(f"unsupported characteristic {p}")
        if e < 1:
            raise ValueError("extension degree must be >= 1")
        if modulus is None:
            if (p, e) not in _DEFAULT_MODULI:
                modulus = self._search_modulus(p, e)
            else:
                modulus = _DEFAULT_MODULI[(p, e)]
        modulus = tuple(c % p for c in modulus)
        if len(modulus) != e:
            raise ValueError("modulus must have degree e")
        full = modulus + (1,)
        if not _is_irreducible(full, p):
            raise ValueError("modulus is reducible over GF(p)")
        self.p = p
        self.e = e
        self.q = p**e
        self.modulus = modulus
        self._full = full
        # Set by extend_constants on derived fields: (base_gf, d, embed dict).
        self.subfield_info = None

    @staticmethod
    def _search_modulus(p, e):
        for tail in itertools.product(range(p), repeat=e):
            if tail[0] == 0:
                continue
            if _is_irreducible(tuple(tail) + (1,), p):
                return tuple(tail)
        raise ValueError(f"no irreducible polynomial found for GF({p}^{e})")

    # -- raw tuple arithmetic ------------------------------------------------

    def _pad(self, c):
        return tuple(c) + (0,) * (self.e - len(c))

    def _add(self, a, b):
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def _neg(self, a):
        p = self.p
        return tuple((-x) % p for x in a)

    def _mul(self, a, b):
        if self.e == 1:
            return ((a[0] * b[0]) % self.p,)
        prod = _poly_mulmod_p(a, b, self.p)
        _, rem = _poly_divmod_p(prod, self._full, self.p)
        return self._pad(rem)

    def _inv(self, a):
        if not any(a):
            raise ZeroDivisionError("inverse of zero in GF(q)")
        if self.e == 1:
            return (pow(a[0], -1, self.p),)
        # extended Euclid in GF(p)[w]
        r0, r1 = self._full, _poly_trim(a)
        s0, s1 = (), (1,)
        while r1:
            q, r = _poly_divmod_p(r0, r1, self.p)
            r0, r1 = r1, r
            qs = _poly_mulmod_p(q, s1, self.p)
            s = [0] * max(len(s0), len(qs))
            for i, x in enumerate(s0):
                s[i] = x
            for i, x in enumerate(qs):
                s[i] = (s[i] - x) % self.p
            s0, s1 = s1, _poly_trim(s)
        c = pow(r0[0], -1, self.p)
        return self._pad(tuple((x * c) % self.p for x in s0))

    # -- public element API ----------------------------------------------

    def __call__(self, value=0):
        """Coerce an integer (or coefficient sequence) to a field element."""
        if isinstance(value, GFElement):
            if value.field is not self:
                raise ValueError("element belongs to a different field")
            return value
        if isinstance(value, int):
            return GFElement(self, self._pad((value % self.p,)))
        return GFElement(self, self._pad(tuple(c % self.p for c in value)))

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    @property
    def gen(self):
        """The class of w (only meaningful for e > 1)."""
        return GFElement(self, self._pad((0, 1)))

    def elements(self):
        for tail in itertools.product(range(self.p), repeat=self.e):
            yield GFElement(self, tail)

    def __eq__(self, other):
        return (
            isinstance(other, GaloisField)
            and other.p == self.p
            and other.e == self.e
            and other.modulus == self.modulus
        )

    def __hash__(self):
        return hash((self.p, self.e, self.modulus))

    def __repr__(self):
        return f"GF({self.p}^{self.e})" if self.e > 1 else f"GF({self.p})"


class GFElement:
    """An element of a GaloisField, stored as a coefficient tuple."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        self.field = field
        self.coeffs = field._pad(tuple(c % field.p for c in coeffs))

    def _check(self, other):
        if isinstance(other, int):
            other = self.field(other)
        if not isinstance(other, GFElement) or other.field != self.field:
            raise ValueError("mixed Galois field arithmetic")
        return other

    def __bool__(self):
        return any(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.field(other)
        return (
            isinstance(other, GFElement)
            and other.field == self.field
            and other.coeffs == self.coeffs
        )

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        other = self._check(other)
        return GFElement(self.field, self.field._add(self.coeffs, other.coeffs))

    __radd__ = __add__

    def __neg__(self):
        return GFElement(self.field, self.field._neg(self.coeffs))

    def __sub__(self, other):
        other = self._check(other)
        return self + (-other)

    def __mul__(self, other):
        other = self._check(other)
        return GFElement(self.field, self.field._mul(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def inv(self):
        return GFElement(self.field, self.field._inv(self.coeffs))

    def __truediv__(self, other):
        other = self._check(other)
        return self * other.inv()

    def __pow__(self, n):
        if n < 0:
            return self.inv() ** (-n)
        result = self.field.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def frobenius(self, times=1):
        return self ** (self.field.p**times)

    def pth_root(self):
        """The unique p-th root; Frobenius has order e so this is a^(p^(e-1))."""
        return self ** (self.field.p ** (self.field.e - 1))

    def trace(self, sub_degree):
        """Trace to the subfield GF(p^sub_degree) along the polynomial tower.

        The result is still represented in the ambient field; it is fixed by
        the q0-power Frobenius.
        """
        e = self.field.e
        if sub_degree < 1 or e % sub_degree != 0:
            raise InvalidSubfield(f"GF(p^{sub_degree}) is not a subfield of GF(p^{e})")
        q0 = self.field.p**sub_degree
        acc = self.field.zero
        x = self
        for _ in range(e // sub_degree):
            acc = acc + x
            x = x**q0
        return acc

    def sqrt(self):
        """A square root, or None.  Fields are tiny, brute force is fine."""
        for cand in self.field.elements():
            if cand * cand == self:
                return cand
        return None

    def nth_root(self, n):
        """An n-th root by brute force, or None."""
        for cand in self.field.elements():
            if cand**n == self:
                return cand
        return None

    def __repr__(self):
        if not self:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            else:
                wpow = "w" if i == 1 else f"w^{i}"
                parts.append(wpow if c == 1 else f"{c}*{wpow}")
        return "+".join(parts)


def extend_constants(gf, d):
    """Build GF(q^d) together with the embedding GF(q) -> GF(q^d).

    The embedding sends the generator of `gf` to a root of its modulus in the
    big field (found by exhaustive search; the fields involved stay tiny).
    Returns the new field; the new field records (gf, d, embedding table) in
    `subfield_info` so transfers can find their way back down.
    """
    if d == 1:
        return gf
    big = GaloisField(gf.p, gf.e * d)
    if gf.e == 1:
        root = big.one
    else:
        root = None
        for cand in big.elements():
            acc = cand**gf.e
            for i, c in enumerate(gf.modulus):
                if c:
                    acc = acc + big(c) * cand**i
            if not acc:
                root = cand
                break
        if root is None:  # cannot happen: big field contains GF(q)
            raise InvalidSubfield("no embedding found")
    table = {}
    for a in gf.elements():
        img = big.zero
        for i, c in enumerate(a.coeffs):
            if c:
                img = img + big(c) * root**i
        table[a.coeffs] = img
    big.subfield_info = (gf, d, table)
    return big


def embed_constant(big, a):
    """Map a GFElement of the recorded base field into `big`."""
    base, _, table = big.subfield_info
    if a.field != base:
        raise InvalidSubfield("element is not in the recorded base field")
    return table[a.coeffs]


def project_constant(big, a):
    """Inverse of embed_constant on its image; None if a is not in the image."""
    base, _, table = big.subfield_info
    for coeffs, img in table.items():
        if img == a:
            return GFElement(base, coeffs)
    return None
