"""Finite-precision root computation for the non-unique polygon fallback.

p-adic roots come from Hensel lifting of simple residue roots, Puiseux
roots from slope-driven expansion with rational residue data.  Roots of
earlier triangular levels are substituted with explicit error bounds, so
every Newton polygon computed downstream is either certified or rejected
and retried at higher precision.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import (
    InsufficientPrecision,
    IrrationalResidueRoot,
    MultipleResidueRoot,
    NoResidueRoot,
    ZeroConstantTerm,
)
from .newton import NewtonPolygon, certified_polygon, lower_hull, slopes
from .poly import MPoly, coefficients_wrt, evaluate_approx
from .scalars import (
    INFINITY,
    ApproxScalar,
    PadicScalar,
    PuiseuxFraction,
    val,
)

DEFAULT_PRECISION_START = 2
DEFAULT_PRECISION_CAP = 64
_EXPANSION_DEPTH = 200


@dataclass(frozen=True)
class ApproxPoint:
    """Approximate common root of a triangular prefix."""

    coordinates: tuple
    precision: int

    def valuations(self):
        return tuple(c.val_info()[0] for c in self.coordinates)

    def describe(self):
        parts = []
        for c in self.coordinates:
            if c.prec is INFINITY:
                parts.append(f"{c.known} (exact)")
            else:
                parts.append(f"{c.known} + O(^{c.prec})")
        return ", ".join(parts)


def precision_schedule(start=DEFAULT_PRECISION_START, cap=DEFAULT_PRECISION_CAP):
    k = max(1, start)
    while k <= cap:
        yield k
        k *= 2


# ---------------------------------------------------------------------------
# Rational roots of rational polynomials (residue equations)


def _divisors(n):
    n = abs(n)
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)


def _horner(coeffs, x):
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _deflate(coeffs, r):
    """coeffs / (x - r) assuming r is a root; constant term first."""
    quo = []
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * r + c
        quo.append(acc)
    return list(reversed(quo[:-1]))


def rational_roots(coeffs):
    """Roots in Q with multiplicities; coefficients constant-term first."""
    cs = [Fraction(c) for c in coeffs]
    while cs and not cs[-1]:
        cs.pop()
    if len(cs) <= 1:
        return []
    roots = []
    low = 0
    while not cs[low]:
        low += 1
    if low:
        roots.append((Fraction(0), low))
        cs = cs[low:]
    denom = 1
    for c in cs:
        denom = denom * c.denominator // gcd(denom, c.denominator)
    ints = [Fraction(c * denom) for c in cs]
    cands = set()
    for pd in _divisors(int(ints[0])):
        for qd in _divisors(int(ints[-1])):
            cands.add(Fraction(pd, qd))
            cands.add(Fraction(-pd, qd))
    work = ints
    for r in sorted(cands):
        mult = 0
        while len(work) > 1 and not _horner(work, r):
            work = _deflate(work, r)
            mult += 1
        if mult:
            roots.append((r, mult))
    return sorted(roots)


# ---------------------------------------------------------------------------
# p-adic lifting


def _padic_reduce(coeffs, mod):
    out = []
    for c in coeffs:
        c = Fraction(c)
        inv = pow(c.denominator % mod, -1, mod)
        out.append((c.numerator * inv) % mod)
    return out


def _mod_horner(coeffs, z, mod):
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * z + c) % mod
    return acc


def _mod_horner_derivative(coeffs, z, mod):
    acc = 0
    for i in range(len(coeffs) - 1, 0, -1):
        acc = (acc * z + i * coeffs[i]) % mod
    return acc


def _simple_residue_roots(coeffs, p):
    """Simple roots of the residue polynomial in [0, p)."""
    red = _padic_reduce(coeffs, p)
    if not any(red):
        raise ValueError("residue polynomial is zero; clear content first")
    simple, multiple = [], []
    for r in range(p):
        if _mod_horner(red, r, p):
            continue
        if _mod_horner_derivative(red, r, p):
            simple.append(r)
        else:
            multiple.append(r)
    if not simple and not multiple:
        raise NoResidueRoot(f"no residue root mod {p}")
    if not simple:
        raise MultipleResidueRoot(
            f"every residue root mod {p} is multiple; cannot lift"
        )
    return simple


def _padic_int_hensel(coeffs, root_mod_p, p, k):
    """Lift a simple residue root to an integer root mod p^k."""
    mod = p**k
    red = _padic_reduce(coeffs, mod)
    z = root_mod_p % mod
    for _ in range(max(1, k.bit_length() + 1)):
        d = _mod_horner_derivative(red, z, mod)
        z = (z - _mod_horner(red, z, mod) * pow(d, -1, mod)) % mod
    if _mod_horner(red, z, mod):
        raise InsufficientPrecision("Hensel iteration failed to converge")
    return z


def hensel_root(f: MPoly, precision: int):
    """All Z_p roots lying over simple residue roots, to fixed precision.

    Content is cleared so the residue polynomial is nonzero; roots are
    returned as approximate scalars sorted by residue.
    """
    if f.ring.nvars != 1 or f.ring.field.kind != "padic":
        raise ValueError("hensel_root expects a univariate p-adic polynomial")
    p = f.ring.field.prime
    coeffs = [c.constant_value().value for c in coefficients_wrt(f, 0)]
    vals = [val(PadicScalar(c, p)) for c in coeffs]
    finite = [v for v in vals if v is not INFINITY]
    if not finite:
        raise ValueError("zero polynomial")
    unit = Fraction(p) ** int(-min(finite))
    coeffs = [c * unit for c in coeffs]
    out = []
    for r in _simple_residue_roots(coeffs, p):
        z = _padic_int_hensel(coeffs, r, p, precision)
        out.append(
            ApproxScalar(PadicScalar(z % p**precision, p), Fraction(precision))
        )
    return out


# ---------------------------------------------------------------------------
# Newton-Puiseux expansion with exact coefficients


def _shift_univariate(coeffs, a):
    """Coefficients of f(x + a) by synthetic Taylor shift."""
    out = list(coeffs)
    n = len(out)
    for j in range(n - 1):
        for i in range(n - 2, j - 1, -1):
            out[i] = out[i] + out[i + 1] * a
    return out


def _edge_residue_poly(coeffs, polygon, m):
    """Residue coefficients along the hull edge of root valuation m."""
    for (r, y), (s, z) in zip(polygon.vertices, polygon.vertices[1:]):
        if -Fraction(z - y, s - r) == m:
            phi = [Fraction(0)] * (s - r + 1)
            for i in range(r, s + 1):
                if i < len(coeffs) and coeffs[i]:
                    if val(coeffs[i]) == y - m * (i - r):
                        phi[i - r] = coeffs[i].residue()
            return phi
    raise ValueError(f"no edge of slope {-m}")


def puiseux_root(f: MPoly, bound):
    """Truncated series roots of a univariate polynomial over Puiseux scalars.

    Expansions stop at the exponent bound; a slope whose residue equation
    has no rational root raises IrrationalResidueRoot.
    """
    if f.ring.nvars != 1 or f.ring.field.kind != "puiseux":
        raise ValueError("puiseux_root expects a univariate Puiseux polynomial")
    coeffs = [c.constant_value() for c in coefficients_wrt(f, 0)]
    if not coeffs[0]:
        raise ZeroConstantTerm("zero constant term; 0 is a root")
    found = []
    _expand_puiseux(coeffs, PuiseuxFraction.from_fraction(0), None,
                    Fraction(bound), found, _EXPANSION_DEPTH)
    found.sort(key=lambda a: sorted(a.known.num.items()))
    return found


def _expand_puiseux(coeffs, prefix, prev_m, bound, out, depth):
    if depth <= 0:
        raise InsufficientPrecision("expansion recursion exceeded its depth cap")
    low = 0
    while low < len(coeffs) and not coeffs[low]:
        low += 1
    if low == len(coeffs):
        raise ValueError("zero polynomial in expansion")
    if low > 0:
        # the accumulated prefix is an exact root of multiplicity `low`
        out.extend(ApproxScalar(prefix, INFINITY) for _ in range(low))
        coeffs = coeffs[low:]
        if len(coeffs) == 1:
            return
    pts = [(i, val(c)) for i, c in enumerate(coeffs) if c]
    polygon = NewtonPolygon(tuple(lower_hull(pts)))
    if polygon.width == 0:
        return
    for m, mult in slopes(polygon).entries:
        if prev_m is not None and m <= prev_m:
            continue
        if m >= bound:
            out.extend(ApproxScalar(prefix, bound) for _ in range(mult))
            continue
        phi = _edge_residue_poly(coeffs, polygon, m)
        roots = [(a, mu) for a, mu in rational_roots(phi) if a]
        if not roots:
            raise IrrationalResidueRoot(
                f"residue equation with coefficients {phi} has no rational root"
            )
        for a, _mu in roots:
            shift = PuiseuxFraction({Fraction(m): a})
            _expand_puiseux(
                _shift_univariate(coeffs, shift),
                prefix + shift,
                m,
                bound,
                out,
                depth - 1,
            )


# ---------------------------------------------------------------------------
# Ball-coefficient roots and prefix solving


def _scalar_from_int(sample, k):
    if isinstance(sample, PuiseuxFraction):
        return PuiseuxFraction.from_fraction(k)
    if isinstance(sample, PadicScalar):
        return PadicScalar(k, sample.prime)
    return Fraction(k)


def _ball_eval(coeffs, z: ApproxScalar) -> ApproxScalar:
    acc = coeffs[-1]
    for c in reversed(coeffs[:-1]):
        acc = acc * z + c
    return acc.compress()


def _ball_derivative(coeffs):
    out = []
    for i, c in enumerate(coeffs[1:], start=1):
        factor = ApproxScalar.exact(_scalar_from_int(c.known, i))
        out.append(c * factor)
    return out


def ball_newton(coeffs, z_start, target):
    """Refine an approximate simple root; returns a certified ball.

    The certificate is the ultrametric Newton bound: if f(z) has
    valuation b and f'(z) exact valuation d with b > 2d, the true root
    differs from z by valuation at least b - d.
    """
    dcoeffs = _ball_derivative(coeffs)
    z_known = z_start
    best = None
    for _ in range(100):
        z_exact = ApproxScalar.exact(z_known)
        dfz = _ball_eval(dcoeffs, z_exact)
        d, d_ok = dfz.val_info()
        if not d_ok or d is INFINITY:
            raise InsufficientPrecision("derivative valuation uncertified")
        fz = _ball_eval(coeffs, z_exact)
        b = fz.lower_bound()
        if b is INFINITY or b - d >= target:
            prec = INFINITY if b is INFINITY else b - d
            return ApproxScalar(z_known, prec).compress()
        if b <= 2 * d:
            raise InsufficientPrecision("Newton contraction hypothesis fails")
        if best is not None and b <= best:
            raise InsufficientPrecision(
                f"Newton refinement stalled below target {target}"
            )
        best = b
        step = fz / dfz
        z_known = (z_exact - step).known
        # keep the representative small; truncating past the target is safe
        z_known = ApproxScalar(z_known, target + d + 1).compress().known
    raise InsufficientPrecision("Newton refinement did not reach its target")


def approximate_roots(coeff_balls, field, k):
    """Roots of a univariate polynomial with ApproxScalar coefficients.

    ``k`` steers the working precision: p-adic roots of valuation m are
    lifted to absolute precision m + k, Puiseux expansions carry k terms
    of exponent headroom past their leading exponent.
    """
    pts = []
    for i, c in enumerate(coeff_balls):
        v, ok = c.val_info()
        if v is INFINITY and ok:
            continue
        pts.append((i, v, ok))
    if not pts:
        raise ValueError("zero polynomial has no isolated roots")
    if pts[0][0] != 0:
        if pts[0][2] or all(ok for _, _, ok in pts):
            raise ZeroConstantTerm("constant coefficient vanishes")
        raise InsufficientPrecision("constant coefficient uncertified")
    polygon = certified_polygon(pts)
    if polygon is None:
        raise InsufficientPrecision("Newton polygon of the slice uncertified")
    if polygon.width == 0:
        return []
    exact = all(c.prec is INFINITY for c in coeff_balls)
    if exact and field.kind == "puiseux":
        coeffs = [c.known for c in coeff_balls]
        top = max(m for m, _ in slopes(polygon).entries)
        bound = Fraction(k) + max(Fraction(0), top)
        found = []
        _expand_puiseux(coeffs, PuiseuxFraction.from_fraction(0), None,
                        bound, found, _EXPANSION_DEPTH)
        found.sort(key=lambda a: sorted(a.known.num.items()))
        return found
    out = []
    for m, _mult in slopes(polygon).entries:
        out.extend(_slope_roots(coeff_balls, polygon, m, field, k))
    return out


def _ball_edge_residue(coeff_balls, polygon, m):
    """Residue equation along one edge, or None when not certified."""
    for (r, y), (s, z) in zip(polygon.vertices, polygon.vertices[1:]):
        if -Fraction(z - y, s - r) != m:
            continue
        phi = [Fraction(0)] * (s - r + 1)
        for i in range(r, s + 1):
            if i >= len(coeff_balls):
                continue
            c = coeff_balls[i]
            v, ok = c.val_info()
            if v is INFINITY and ok:
                continue
            edge_height = y - m * (i - r)
            if ok and v == edge_height:
                phi[i - r] = c.known.residue()
            elif not ok and v == edge_height:
                return None
        return phi
    raise ValueError(f"no edge of slope {-m}")


def _slope_roots(coeff_balls, polygon, m, field, k):
    if field.kind == "padic" and m.denominator != 1:
        raise NoResidueRoot(
            f"root valuation {m} needs a ramified extension of Q_{field.prime}"
        )
    exact = all(c.prec is INFINITY for c in coeff_balls)
    if field.kind == "padic" and exact:
        # scale x by p^m and lift with integer arithmetic
        coeffs = [c.known.value * Fraction(field.prime) ** int(m * i)
                  for i, c in enumerate(coeff_balls)]
        shift = min(val(PadicScalar(c, field.prime)) for c in coeffs if c)
        coeffs = [c * Fraction(field.prime) ** int(-shift) for c in coeffs]
        lift_prec = max(1, k)
        out = []
        for r in _simple_residue_roots(coeffs, field.prime):
            z = _padic_int_hensel(coeffs, r, field.prime, lift_prec)
            value = PadicScalar(
                Fraction(z) * Fraction(field.prime) ** int(m), field.prime
            )
            out.append(ApproxScalar(value, m + lift_prec))
        return out
    phi = _ball_edge_residue(coeff_balls, polygon, m)
    if phi is None:
        raise InsufficientPrecision("edge residue equation uncertified")
    if field.kind == "padic":
        residues = _simple_residue_roots(phi, field.prime)
        roots = [(Fraction(r), 1) for r in residues]
    else:
        roots = [(a, mu) for a, mu in rational_roots(phi) if a]
        if not roots:
            raise IrrationalResidueRoot(
                f"residue equation with coefficients {phi} has no rational root"
            )
    out = []
    for a, mu in roots:
        if mu > 1:
            raise MultipleResidueRoot(
                "multiple residue root over approximate coefficients"
            )
        if field.kind == "padic":
            z0 = PadicScalar(a * Fraction(field.prime) ** int(m), field.prime)
        else:
            z0 = PuiseuxFraction({Fraction(m): a})
        out.append(ball_newton(coeff_balls, z0, m + k))
    return out


def prefix_root_branches(polys, upto, k):
    """All approximate common roots of the first ``upto`` triangular levels."""
    branches = [()]
    for i in range(upto):
        coeff_polys = coefficients_wrt(polys[i], i)
        new = []
        for partial in branches:
            cvals = [evaluate_approx(c, partial) for c in coeff_polys]
            for root in approximate_roots(cvals, polys[i].ring.field, k):
                new.append(partial + (root,))
        branches = new
    return branches


def flagged_coefficient_points(f: MPoly, level: int, point):
    """(index, valuation-or-bound, exact) data of f's coefficients at a point."""
    pts = []
    for i, c in enumerate(coefficients_wrt(f, level)):
        b = evaluate_approx(c, point)
        v, ok = b.val_info()
        if v is INFINITY and ok:
            continue
        pts.append((i, v, ok))
    return pts


def solve_triangular_prefix(T, level, start=DEFAULT_PRECISION_START,
                            cap=DEFAULT_PRECISION_CAP):
    """One approximate root of the first ``level`` polynomials of T.

    Precision is raised along the doubling schedule until the Newton
    polygon of the next polynomial at the point is certified; returns
    (point, polygon).
    """
    polys = list(T)
    last = None
    for k in precision_schedule(start, cap):
        try:
            branches = prefix_root_branches(polys, level, k)
            if not branches:
                raise NoResidueRoot("prefix system has no supported roots")
            point = branches[0]
            pts = flagged_coefficient_points(polys[level], level, point)
            if not pts or pts[0][0] != 0:
                if all(ok for _, _, ok in pts):
                    raise ZeroConstantTerm("constant coefficient vanishes")
                raise InsufficientPrecision("constant coefficient uncertified")
            polygon = certified_polygon(pts)
            if polygon is None:
                raise InsufficientPrecision("polygon uncertified")
            return ApproxPoint(point, k), polygon
        except InsufficientPrecision as exc:
            last = exc
    raise InsufficientPrecision(
        f"precision cap {cap} reached: {last}"
    )
