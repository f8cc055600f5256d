"""Triangular decomposition of zero-dimensional ideals.

A lex basis with the last variable most significant is split along
non-constant leading coefficients until each branch basis has exactly
one polynomial per variable with invertible leading coefficient, at
which point the basis itself is the triangular set for that branch.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NotZeroDimensional, ResourceLimit
from .groebner import (
    DEFAULT_MONOMIAL_CAP,
    GroebnerBasis,
    Ideal,
    MonomialOrder,
    buchberger,
    dimension_and_independent_set,
    leading_term,
)
from .poly import MPoly, Ring, coefficients_wrt, from_univariate
from .scalars import INFINITY, val

_MAX_SPLIT_DEPTH = 200


def triangular_order(n):
    """Lex order eliminating from the top variable downward."""
    return MonomialOrder.lex(priority=range(n - 1, -1, -1))


def is_triangular(polys, ring=None) -> bool:
    """One polynomial per variable, the i-th introducing variable i."""
    if not polys:
        return False
    ring = ring or polys[0].ring
    if len(polys) != ring.nvars:
        return False
    for i, f in enumerate(polys):
        if not f or f.deg_in(i) < 1:
            return False
        if any(j > i for j in f.variables()):
            return False
    return True


@dataclass(frozen=True)
class TriangularSet:
    polys: tuple

    def __post_init__(self):
        if not is_triangular(self.polys):
            raise ValueError("polynomials do not form a triangular set")

    @property
    def ring(self):
        return self.polys[0].ring

    def __iter__(self):
        return iter(self.polys)

    def __len__(self):
        return len(self.polys)


def _main_variable(f: MPoly):
    used = f.variables()
    return max(used) if used else None


def _leading_coefficient(f: MPoly, i: int) -> MPoly:
    return coefficients_wrt(f, i)[-1]


def _lift_to(ring: Ring, f: MPoly) -> MPoly:
    pad = ring.nvars - f.ring.nvars
    return MPoly(ring, {e + (0,) * pad: c for e, c in f.terms.items()})


def _saturate_by(ideal: Ideal, h: MPoly, order, cap) -> Ideal:
    ring = ideal.ring
    aux = Ring(("y_sat",) + ring.names, ring.field)
    lifted = [
        MPoly(aux, {(0,) + e: c for e, c in g.terms.items()})
        for g in ideal.generators
    ]
    h_aux = MPoly(aux, {(1,) + e: c for e, c in h.terms.items()})
    witness = MPoly.constant(aux, 1) - h_aux
    gb = buchberger(Ideal(aux, tuple(lifted) + (witness,)),
                    MonomialOrder.eliminate(1), cap)
    kept = [g for g in gb.polys if g.deg_in(0) == 0]
    return Ideal(ring, tuple(MPoly(ring, {e[1:]: c for e, c in g.terms.items()})
                             for g in kept))


def _squarefree_univariate(f: MPoly, ring: Ring) -> MPoly:
    """Squarefree part of a polynomial in the first variable only."""
    coeffs = [c.constant_value() for c in coefficients_wrt(f, 0)]
    if len(coeffs) <= 2:
        return f
    deriv = [ring.scalar(i) * coeffs[i] for i in range(1, len(coeffs))]
    g = _scalar_gcd(coeffs, deriv, ring)
    if len(g) <= 1:
        return f
    q, _ = _scalar_divmod(coeffs, g, ring)
    out = {}
    for i, c in enumerate(q):
        if c:
            out[(i,) + (0,) * (ring.nvars - 1)] = c
    return MPoly(ring, out)


def _scalar_divmod(a, b, ring):
    a = list(a)
    while a and not a[-1]:
        a.pop()
    db = len(b) - 1
    q = [ring.field.zero()] * max(0, len(a) - db)
    while len(a) - 1 >= db and a:
        factor = a[-1] / b[-1]
        k = len(a) - 1 - db
        q[k] = factor
        for i, c in enumerate(b):
            a[k + i] = a[k + i] - factor * c
        while a and not a[-1]:
            a.pop()
    return q, a


def _scalar_gcd(a, b, ring):
    a = [c for c in a]
    b = [c for c in b]
    while a and not a[-1]:
        a.pop()
    while b and not b[-1]:
        b.pop()
    while b:
        _, r = _scalar_divmod(a, b, ring)
        a, b = b, r
    if not a:
        return [ring.field.one()]
    lead = a[-1]
    return [c / lead for c in a]


def unit_normalize(f: MPoly) -> MPoly:
    """Scale by a uniformizer power so the least coefficient valuation is 0."""
    if not f or not f.ring.field.is_valued():
        return f
    m = INFINITY
    for c in f.terms.values():
        v = val(c)
        if v is not INFINITY and (m is INFINITY or v < m):
            m = v
    if m is INFINITY or m == 0:
        return f
    try:
        return f.scale(f.ring.field.uniformizer_power(-m))
    except ValueError:
        return f


def triangular_decomposition(
    ideal: Ideal, cap: int = DEFAULT_MONOMIAL_CAP
) -> list[TriangularSet]:
    """Split a zero-dimensional ideal into comaximal triangular sets.

    Components jointly carry the radical of the input and are returned
    in a deterministic order.
    """
    n = ideal.ring.nvars
    order = triangular_order(n)
    gb = buchberger(ideal, order, cap)
    if gb.is_unit():
        return []
    d, _ = dimension_and_independent_set(gb)
    if d != 0:
        raise NotZeroDimensional(f"ideal has dimension {d}")
    components = _split(gb, order, cap, _MAX_SPLIT_DEPTH)
    out = []
    for polys in components:
        polys = [unit_normalize(p) for p in polys]
        out.append(TriangularSet(tuple(polys)))
    out.sort(key=lambda T: [sorted(p.terms) for p in T.polys])
    return out


def _split(gb: GroebnerBasis, order, cap, depth) -> list[tuple]:
    if depth <= 0:
        raise ResourceLimit("triangular splitting exceeded the depth cap")
    if gb.is_unit():
        return []
    ring = gb.ring
    n = ring.nvars
    levels = {}
    for g in gb.polys:
        mv = _main_variable(g)
        if mv is None:
            return []
        levels.setdefault(mv, []).append(g)
    for i in range(n):
        group = levels.get(i)
        if not group:
            raise NotZeroDimensional(f"no basis element introduces {ring.names[i]}")
        g_min = min(
            group, key=lambda g: (g.deg_in(i), order.key(leading_term(g, order)[0]))
        )
        lc = _leading_coefficient(g_min, i)
        if lc.total_degree() <= 0:
            continue
        h = _lift_to(ring, lc)
        with_h = buchberger(Ideal(ring, gb.polys + (h,)), order, cap)
        sat = buchberger(_saturate_by(Ideal(ring, gb.polys), h, order, cap), order, cap)
        if list(sat.polys) == list(gb.polys):
            raise ResourceLimit(
                "leading-coefficient split made no progress; ideal is stuck"
            )
        return _split(with_h, order, cap, depth - 1) + _split(sat, order, cap, depth - 1)
    # every level now holds a single element with unit leading coefficient
    chosen = []
    for i in range(n):
        g = levels[i][0]
        if i == 0:
            g = _squarefree_univariate(g, ring)
        chosen.append(g)
    return [tuple(chosen)]


def radical_membership(f: MPoly, ideal: Ideal, cap=DEFAULT_MONOMIAL_CAP) -> bool:
    """Whether f vanishes on the variety of the ideal (Rabinowitsch)."""
    if not f:
        return True
    ring = ideal.ring
    aux = Ring(("y_rad",) + ring.names, ring.field)
    lifted = [
        MPoly(aux, {(0,) + e: c for e, c in g.terms.items()})
        for g in ideal.generators
    ]
    f_aux = MPoly(aux, {(1,) + e: c for e, c in f.terms.items()})
    witness = MPoly.constant(aux, 1) - f_aux
    gb = buchberger(Ideal(aux, tuple(lifted) + (witness,)),
                    MonomialOrder.degrevlex(), cap)
    return gb.is_unit()