"""p-independence tests and p-basis completion for rational function fields.

Over F = GF(q)(x_1, ..., x_v) the subfield F^p is generated by the p-th
powers, and elements a_1, ..., a_n are p-independent over F^p exactly when
their differentials are linearly independent over F — concretely, when the
Jacobian matrix (partial a_i / partial x_j) has full row rank.
"""

from __future__ import annotations

from .errors import ContextMismatch, NotPIndependent, ZeroElement
from .linalg import rank


def jacobian(elts):
    """Rows of partials of each element with respect to every variable."""
    ctx = elts[0].ctx
    for a in elts:
        if a.ctx != ctx:
            raise ContextMismatch("elements from different contexts")
    return [[a.partial(v) for v in ctx.variables] for a in elts]


def p_independent(elts):
    """True iff [F^p(elts) : F^p] = p^len(elts)."""
    if not elts:
        return True
    for a in elts:
        if a.is_zero():
            raise ZeroElement("zero element in p-independence test")
    if len(elts) > elts[0].ctx.nvars:
        return False
    return rank(jacobian(elts)) == len(elts)


def reduce_to_p_independent(gens):
    """A greedy p-independent subset generating the same subfield F^p(gens)."""
    kept = []
    for g in gens:
        if g.is_zero():
            continue
        if p_independent(kept + [g]):
            kept.append(g)
    return kept


def in_p_subfield(a, gens):
    """Membership test a ∈ F^p(gens).

    After replacing gens by a p-independent subset, membership holds exactly
    when adjoining a does not raise the Jacobian rank (equivalently, the
    wedge of da with the generators' differentials vanishes).
    """
    basis = reduce_to_p_independent(gens)
    if a.is_zero():
        raise ZeroElement("zero element in subfield membership test")
    if a.pth_root() is not None:
        return True
    return not p_independent(basis + [a])


def extend_to_pbasis(elts):
    """Complete elts to a full ordered p-basis of F over F^p.

    Variables are tried greedily in their declared order and prepended so
    that the returned basis ends with elts; the result has length v.
    """
    if not p_independent(elts):
        raise NotPIndependent("the given elements are not p-independent")
    ctx = elts[0].ctx
    prefix = []
    for name in ctx.variables:
        cand = ctx.var(name)
        if p_independent(prefix + [cand] + list(elts)):
            prefix.append(cand)
        if len(prefix) + len(elts) == ctx.nvars:
            break
    basis = prefix + list(elts)
    if len(basis) != ctx.nvars:
        raise NotPIndependent("could not complete to a p-basis")
    return basis
