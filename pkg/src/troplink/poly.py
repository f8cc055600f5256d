"""Multivariate polynomials over a valued coefficient field.

Terms are kept in a dict from exponent tuples to nonzero scalars.  The
canonical term order for printing and iteration is graded lexicographic,
so output is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    LengthMismatch,
    VariableOutOfScope,
    ZeroPolynomial,
)
from .scalars import (
    INFINITY,
    ApproxScalar,
    FieldConfig,
    PuiseuxFraction,
    ext_add,
    format_puiseux,
    leading_residue,
    val,
)


@dataclass(frozen=True)
class Ring:
    names: tuple[str, ...]
    field: FieldConfig

    @property
    def nvars(self):
        return len(self.names)

    def prefix(self, m):
        return Ring(self.names[:m], self.field)

    def drop(self, indices):
        """Ring without the given variables plus the old->new index map."""
        keep = [i for i in range(self.nvars) if i not in indices]
        new = Ring(tuple(self.names[i] for i in keep), self.field)
        return new, {old: pos for pos, old in enumerate(keep)}

    def residue_ring(self):
        return Ring(self.names, self.field.residue_config())

    def scalar(self, x):
        if isinstance(x, int) or (
            isinstance(x, Fraction) and self.field.kind != "rational"
        ):
            return self.field.from_fraction(x)
        return x


def _grlex_key(exps):
    return (sum(exps), exps)


class MPoly:
    """Sparse polynomial; immutable by convention after construction."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring, terms):
        self.ring = ring
        clean = {}
        for exps, c in terms.items():
            if c:
                clean[tuple(exps)] = c
        self.terms = clean

    @classmethod
    def zero(cls, ring):
        return cls(ring, {})

    @classmethod
    def constant(cls, ring, value):
        return cls(ring, {(0,) * ring.nvars: ring.scalar(value)})

    @classmethod
    def variable(cls, ring, i):
        exps = [0] * ring.nvars
        exps[i] = 1
        return cls(ring, {tuple(exps): ring.field.from_fraction(1)})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, MPoly):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    __hash__ = None

    def _check(self, other):
        if self.ring != other.ring:
            raise ValueError("polynomials from different rings")

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e)
            s = c if s is None else s + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return MPoly(self.ring, out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return MPoly(self.ring, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other):
        self._check(other)
        out = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                p = ca * cb
                s = out.get(e)
                s = p if s is None else s + p
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return MPoly(self.ring, out)

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative polynomial power")
        out = MPoly.constant(self.ring, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def scale(self, scalar):
        scalar = self.ring.scalar(scalar)
        if not scalar:
            return MPoly.zero(self.ring)
        return MPoly(self.ring, {e: c * scalar for e, c in self.terms.items()})

    def mul_term(self, exps, scalar):
        scalar = self.ring.scalar(scalar)
        if not scalar:
            return MPoly.zero(self.ring)
        return MPoly(
            self.ring,
            {
                tuple(x + y for x, y in zip(e, exps)): c * scalar
                for e, c in self.terms.items()
            },
        )

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    def total_degree(self):
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def deg_in(self, i):
        if not self.terms:
            return -1
        return max(e[i] for e in self.terms)

    def variables(self):
        used = set()
        for e in self.terms:
            for i, x in enumerate(e):
                if x:
                    used.add(i)
        return used

    def is_homogeneous(self):
        degs = {sum(e) for e in self.terms}
        return len(degs) <= 1

    def monomial_content(self):
        """Exponent vector of the largest monomial dividing every term."""
        if not self.terms:
            return (0,) * self.ring.nvars
        its = iter(self.terms)
        low = list(next(its))
        for e in its:
            low = [min(a, b) for a, b in zip(low, e)]
        return tuple(low)

    def strip_monomial_factor(self):
        low = self.monomial_content()
        if not any(low):
            return self
        return MPoly(
            self.ring,
            {tuple(x - y for x, y in zip(e, low)): c for e, c in self.terms.items()},
        )

    def constant_value(self):
        """The coefficient of the constant term (zero scalar if absent)."""
        return self.terms.get((0,) * self.ring.nvars, self.ring.field.zero())

    def __repr__(self):
        return f"MPoly({to_string(self)})"

    def __str__(self):
        return to_string(self)


def trop_eval(f: MPoly, w) -> Fraction | object:
    """min over terms of w.alpha + val(coefficient); INFINITY iff f = 0."""
    if len(w) != f.ring.nvars:
        raise LengthMismatch(
            f"weight length {len(w)} != variable count {f.ring.nvars}"
        )
    best = INFINITY
    for e, c in f.terms.items():
        t = ext_add(sum(wi * ei for wi, ei in zip(w, e)), val(c))
        if t is not INFINITY and (best is INFINITY or t < best):
            best = t
    return best


def initial_form(f: MPoly, w) -> MPoly:
    """Residue polynomial spanned by the terms of minimal weighted valuation."""
    if not f:
        raise ZeroPolynomial("initial form of the zero polynomial")
    m = trop_eval(f, w)
    res_ring = f.ring.residue_ring()
    out = {}
    for e, c in f.terms.items():
        if ext_add(sum(wi * ei for wi, ei in zip(w, e)), val(c)) == m:
            out[e] = res_ring.field.from_fraction(leading_residue(c))
    return MPoly(res_ring, out)


def residue_image(f: MPoly) -> MPoly:
    """Term-wise leading residues; meaningful for valuation-0 coefficients."""
    res_ring = f.ring.residue_ring()
    return MPoly(
        res_ring,
        {e: res_ring.field.from_fraction(leading_residue(c)) for e, c in f.terms.items()},
    )


def is_monomial(g: MPoly) -> bool:
    return len(g.terms) == 1


def coefficients_wrt(f: MPoly, var_index: int) -> list[MPoly]:
    """Coefficients of f as a univariate polynomial in its last variable.

    f may involve only variables 0..var_index; the returned coefficients
    live in the prefix ring on variables 0..var_index-1.
    """
    beyond = [i for i in f.variables() if i > var_index]
    if beyond:
        raise VariableOutOfScope(
            f"polynomial involves {f.ring.names[beyond[0]]} beyond position {var_index}"
        )
    sub = f.ring.prefix(var_index)
    d = max(0, f.deg_in(var_index))
    buckets = [dict() for _ in range(d + 1)]
    for e, c in f.terms.items():
        buckets[e[var_index]][e[:var_index]] = c
    return [MPoly(sub, b) for b in buckets]


def from_univariate(ring, var_index, coeffs):
    """Inverse of coefficients_wrt: sum of coeffs[i] * x_{var_index}^i."""
    out = {}
    for i, c in enumerate(coeffs):
        for e, s in c.terms.items():
            full = e + (i,) + (0,) * (ring.nvars - var_index - 1)
            out[full] = s
    return MPoly(ring, out)


def substitute(f: MPoly, assignment: dict, allow_zero: bool = False) -> MPoly:
    """Evaluate some variables at scalars; result lives on the rest."""
    if not assignment:
        return f
    assignment = {i: f.ring.scalar(v) for i, v in assignment.items()}
    if not allow_zero:
        for i, v in assignment.items():
            if not v:
                raise ValueError(
                    f"zero substituted for {f.ring.names[i]} without allow_zero"
                )
    new_ring, remap = f.ring.drop(set(assignment))
    out = {}
    for e, c in f.terms.items():
        coeff = c
        for i, v in assignment.items():
            if e[i]:
                coeff = coeff * v**e[i]
        if not coeff:
            continue
        newe = [0] * new_ring.nvars
        for old, pos in remap.items():
            newe[pos] = e[old]
        key = tuple(newe)
        s = out.get(key)
        s = coeff if s is None else s + coeff
        if s:
            out[key] = s
        else:
            out.pop(key, None)
    return MPoly(new_ring, out)


def evaluate(f: MPoly, values) -> object:
    """Full evaluation at exact scalars; returns a scalar."""
    if len(values) != f.ring.nvars:
        raise LengthMismatch("value count != variable count")
    values = [f.ring.scalar(v) for v in values]
    acc = f.ring.field.zero()
    for e, c in f.terms.items():
        term = c
        for v, k in zip(values, e):
            if k:
                term = term * v**k
        acc = acc + term
    return acc


def evaluate_approx(f: MPoly, values) -> ApproxScalar:
    """Evaluation at approximate scalars with error tracking."""
    if len(values) != f.ring.nvars:
        raise LengthMismatch("value count != variable count")
    acc = ApproxScalar.exact(f.ring.field.zero())
    for e, c in f.terms.items():
        term = ApproxScalar.exact(c)
        for v, k in zip(values, e):
            if k:
                term = term * v**k
        acc = acc + term
    return acc.compress()


# ---------------------------------------------------------------------------
# Printing.  The emitted text re-parses under the ideal-file grammar.

def _scalar_parts(c):
    """(sign, body) for a coefficient; body omits the sign."""
    if isinstance(c, Fraction):
        return (1 if c > 0 else -1), str(abs(c))
    if isinstance(c, PuiseuxFraction):
        if c.is_polynomial() and len(c.num) == 1:
            (e, q), = c.num.items()
            sign = 1 if q > 0 else -1
            q = abs(q)
            if e == 0:
                return sign, str(q)
            tpart = "t" if e == 1 else "t^" + (
                str(e.numerator) if e.denominator == 1 and e >= 0 else f"({e})"
            )
            return sign, (tpart if q == 1 else f"{q}*{tpart}")
        return 1, f"({format_puiseux(c)})"
    # p-adic scalars print as plain rationals
    q = c.value
    return (1 if q > 0 else -1), str(abs(q))


def to_string(f: MPoly) -> str:
    if not f.terms:
        return "0"
    names = f.ring.names
    pieces = []
    for e, c in f.sorted_terms():
        sign, body = _scalar_parts(c)
        vars_part = "*".join(
            n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k
        )
        if vars_part:
            term = vars_part if body == "1" else f"{body}*{vars_part}"
        else:
            term = body
        pieces.append((sign, term))
    first_sign, first = pieces[0]
    text = ("-" if first_sign < 0 else "") + first
    for sign, term in pieces[1:]:
        text += f" - {term}" if sign < 0 else f" + {term}"
    return text


def clear_denominators(f: MPoly) -> MPoly:
    """Unit-scale so every Puiseux coefficient is in polynomial form."""
    if f.ring.field.kind != "puiseux" or not f.terms:
        return f
    factor = None
    for c in f.terms.values():
        if not c.is_polynomial():
            part = PuiseuxFraction(c.den)
            factor = part if factor is None else factor * part
    if factor is None:
        return f
    return f.scale(factor)
