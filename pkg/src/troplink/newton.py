"""Newton polygons of univariate polynomials over valued fields.

The polygon is the lower convex hull of (index, valuation) points; the
implicit vertical edge up from (0, infinity) is never stored.  Negated
edge slopes are the valuations of the roots, with the horizontal edge
length as multiplicity.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DegeneratePolygon, ZeroConstantTerm, ZeroPolynomial
from .poly import MPoly, coefficients_wrt, initial_form, is_monomial, trop_eval
from .scalars import INFINITY, val


def lower_hull(points):
    """Lower convex hull vertices of exact rational (x, y) points.

    Points must have distinct x.  Collinear interior points are dropped,
    so the result is exactly the vertex list.
    """
    pts = sorted(points)
    hull = []
    for p in pts:
        while len(hull) >= 2:
            (x0, y0), (x1, y1) = hull[-2], hull[-1]
            # keep only strict right turns: drop when p is on or above
            if (x1 - x0) * (p[1] - y0) - (p[0] - x0) * (y1 - y0) <= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


@dataclass(frozen=True)
class NewtonPolygon:
    vertices: tuple

    def __post_init__(self):
        if not self.vertices:
            raise ValueError("polygon needs at least one vertex")

    @property
    def width(self):
        return self.vertices[-1][0] - self.vertices[0][0]

    def value_at(self, x):
        """Height of the hull boundary above abscissa x (within range)."""
        vs = self.vertices
        if x < vs[0][0] or x > vs[-1][0]:
            raise ValueError("abscissa outside the polygon")
        for (x0, y0), (x1, y1) in zip(vs, vs[1:]):
            if x0 <= x <= x1:
                return y0 + Fraction(x - x0, x1 - x0) * (y1 - y0)
        return vs[-1][1]

    def json_vertices(self):
        return [[int(i), str(v)] for i, v in self.vertices]


@dataclass(frozen=True)
class SlopeSet:
    """Root valuations with multiplicities, strictly decreasing."""

    entries: tuple

    def valuations(self):
        return [v for v, _ in self.entries]

    def multiplicity_sum(self):
        return sum(m for _, m in self.entries)

    def as_multiset(self):
        out = []
        for v, m in self.entries:
            out.extend([v] * m)
        return sorted(out)

    def json(self):
        return [[str(v), int(m)] for v, m in self.entries]


def newton_polygon(f: MPoly) -> NewtonPolygon:
    """Lower hull of (i, val(c_i)) for univariate f with c_0 != 0."""
    if not f:
        raise ZeroPolynomial("Newton polygon of the zero polynomial")
    if f.ring.nvars != 1:
        raise ValueError("newton_polygon expects a univariate polynomial")
    coeffs = coefficients_wrt(f, 0)
    pts = []
    for i, c in enumerate(coeffs):
        v = val(c.constant_value())
        if v is not INFINITY:
            pts.append((i, v))
    if not pts or pts[0][0] != 0:
        raise ZeroConstantTerm("constant coefficient vanishes; 0 is a root")
    return NewtonPolygon(tuple(lower_hull(pts)))


def slopes(polygon: NewtonPolygon) -> SlopeSet:
    """Negated edge slopes with horizontal lengths as multiplicities."""
    vs = polygon.vertices
    if len(vs) < 2:
        raise DegeneratePolygon("polygon has zero width")
    entries = []
    for (r, y), (s, z) in zip(vs, vs[1:]):
        entries.append((-Fraction(z - y, s - r), s - r))
    return SlopeSet(tuple(entries))


def expected_polygon(f: MPoly, var_index: int, w) -> NewtonPolygon:
    """Hull of (i, trop(f_i)(w)) for f = sum f_i x_k^i at a weight w."""
    coeffs = coefficients_wrt(f, var_index)
    if len(coeffs) < 2:
        raise DegeneratePolygon("degree in the last variable is zero")
    pts = []
    for i, c in enumerate(coeffs):
        t = trop_eval(c, w)
        if t is not INFINITY:
            pts.append((i, t))
    if not pts or pts[0][0] != 0:
        raise ZeroConstantTerm("expected constant coefficient is infinite")
    return NewtonPolygon(tuple(lower_hull(pts)))


def is_unique_at(f: MPoly, var_index: int, w) -> bool:
    """Whether every hull vertex coefficient has monomial initial form."""
    coeffs = coefficients_wrt(f, var_index)
    polygon = expected_polygon(f, var_index, w)
    for i, _ in polygon.vertices:
        if not is_monomial(initial_form(coeffs[i], w)):
            return False
    return True


def certified_polygon(points):
    """Hull from flagged valuation data, or None when not certified.

    ``points`` is a list of (index, valuation-or-bound, exact) triples,
    one per coefficient whose value is not known to be exactly zero.  The
    hull is built from the exact points alone and certified only when the
    extreme indices are exact and every inexact bound lies on or above
    the hull, so the true polygon cannot differ.
    """
    if not points:
        return None
    exact_pts = [(i, v) for i, v, ok in points if ok]
    if not exact_pts:
        return None
    max_index = max(i for i, _, _ in points)
    min_index = min(i for i, _, _ in points)
    exact_idx = {i for i, _ in exact_pts}
    if min_index not in exact_idx or max_index not in exact_idx:
        return None
    polygon = NewtonPolygon(tuple(lower_hull(exact_pts)))
    for i, bound, ok in points:
        if not ok and bound < polygon.value_at(i):
            return None
    return polygon
