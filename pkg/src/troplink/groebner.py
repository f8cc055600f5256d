"""Buchberger engine over the valued coefficient fields.

The valuation never enters the monomial order; weighted orders compare
the weighted exponent degree only and are restricted to homogeneous
input, which keeps every initial-ideal computation inside classical
Groebner territory.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .errors import (
    NonConstantValuation,
    NotHomogeneous,
    ResourceLimit,
)
from .linalg import in_row_space, nullspace, rref
from .poly import MPoly, Ring, initial_form, trop_eval
from .scalars import INFINITY, val

DEFAULT_MONOMIAL_CAP = 10**6


@dataclass(frozen=True)
class MonomialOrder:
    """LEX, DEGREVLEX, weighted or elimination order as a key function."""

    kind: str
    weights: tuple = ()
    tiebreak: "MonomialOrder | None" = None
    priority: tuple = ()
    elim: int = 0

    @classmethod
    def lex(cls, priority=None):
        return cls("lex", priority=tuple(priority) if priority else ())

    @classmethod
    def degrevlex(cls):
        return cls("degrevlex")

    @classmethod
    def weighted(cls, weights, tiebreak=None):
        return cls(
            "weighted",
            weights=tuple(Fraction(w) for w in weights),
            tiebreak=tiebreak or cls.degrevlex(),
        )

    @classmethod
    def eliminate(cls, k):
        return cls("elim", elim=k)

    def key(self, exps):
        if self.kind == "lex":
            if self.priority:
                return tuple(exps[p] for p in self.priority)
            return exps
        if self.kind == "degrevlex":
            return (sum(exps), tuple(-e for e in reversed(exps)))
        if self.kind == "weighted":
            w = -sum(wi * ei for wi, ei in zip(self.weights, exps))
            return (w, self.tiebreak.key(exps))
        # elimination of the first `elim` variables
        return (sum(exps[: self.elim]), sum(exps), tuple(-e for e in reversed(exps)))

    def describe(self):
        if self.kind == "weighted":
            return f"weighted({','.join(str(w) for w in self.weights)})"
        return self.kind


@dataclass(frozen=True)
class Ideal:
    ring: Ring
    generators: tuple

    def __post_init__(self):
        object.__setattr__(
            self, "generators", tuple(g for g in self.generators if g)
        )

    def has_constant_valuation(self):
        return all(
            val(c) == 0 for g in self.generators for c in g.terms.values()
        )

    def is_generator_homogeneous(self):
        return all(g.is_homogeneous() for g in self.generators)


@dataclass(frozen=True)
class GroebnerBasis:
    ring: Ring
    polys: tuple
    order: MonomialOrder
    reduced: bool = False

    def leading_exponents(self):
        return [leading_term(g, self.order)[0] for g in self.polys]

    def is_unit(self):
        return len(self.polys) == 1 and set(self.polys[0].terms) == {
            (0,) * self.polys[0].ring.nvars
        }


def leading_term(f: MPoly, order: MonomialOrder):
    e = max(f.terms, key=order.key)
    return e, f.terms[e]


def _divides(e1, e2):
    return all(a <= b for a, b in zip(e1, e2))


def normal_form(f: MPoly, basis, order: MonomialOrder, cap=DEFAULT_MONOMIAL_CAP):
    """Fully reduced remainder of f modulo the basis polynomials."""
    if not basis:
        return f
    ring = f.ring
    lts = [leading_term(g, order) for g in basis]
    remainder = {}
    work = dict(f.terms)
    while work:
        e = max(work, key=order.key)
        c = work.pop(e)
        for (ge, gc), g in zip(lts, basis):
            if _divides(ge, e):
                shift = tuple(a - b for a, b in zip(e, ge))
                factor = c / gc
                for te, tc in g.terms.items():
                    if te == ge:
                        continue
                    k = tuple(a + b for a, b in zip(te, shift))
                    s = work.get(k)
                    s = -factor * tc if s is None else s - factor * tc
                    if s:
                        work[k] = s
                    else:
                        work.pop(k, None)
                break
        else:
            remainder[e] = c
        if len(work) + len(remainder) > cap:
            raise ResourceLimit("reduction exceeded the monomial cap")
    return MPoly(ring, remainder)


def _monic(f: MPoly, order: MonomialOrder):
    _, c = leading_term(f, order)
    one = f.ring.field.one()
    if c == one:
        return f
    return f.scale(one / c)


def _spoly(f, g, order):
    (ef, cf), (eg, cg) = leading_term(f, order), leading_term(g, order)
    lcm = tuple(max(a, b) for a, b in zip(ef, eg))
    mf = tuple(a - b for a, b in zip(lcm, ef))
    mg = tuple(a - b for a, b in zip(lcm, eg))
    one = f.ring.field.one()
    return f.mul_term(mf, one / cf) - g.mul_term(mg, one / cg)


def _lcm_exp(e1, e2):
    return tuple(max(a, b) for a, b in zip(e1, e2))


def _coprime(e1, e2):
    return all(a == 0 or b == 0 for a, b in zip(e1, e2))


def buchberger(
    ideal: Ideal,
    order: MonomialOrder | None = None,
    cap: int = DEFAULT_MONOMIAL_CAP,
) -> GroebnerBasis:
    """Reduced Groebner basis of the ideal under the given order."""
    order = order or MonomialOrder.degrevlex()
    basis = []
    for g in ideal.generators:
        h = normal_form(g, basis, order, cap)
        if h:
            basis.append(_monic(h, order))
    pairs = []
    for i in range(len(basis)):
        pairs = _update_pairs(pairs, basis, i, order)
    while pairs:
        # normal strategy: smallest lcm first
        pairs.sort(
            key=lambda p: order.key(
                _lcm_exp(
                    leading_term(basis[p[0]], order)[0],
                    leading_term(basis[p[1]], order)[0],
                )
            ),
            reverse=True,
        )
        i, j = pairs.pop()
        s = _spoly(basis[i], basis[j], order)
        h = normal_form(s, basis, order, cap)
        if h:
            basis.append(_monic(h, order))
            if sum(len(g.terms) for g in basis) > cap:
                raise ResourceLimit("basis exceeded the monomial cap")
            pairs = _update_pairs(pairs, basis, len(basis) - 1, order)
    return _reduce_basis(ideal.ring, basis, order, cap)


def _update_pairs(pairs, basis, new_index, order):
    """Gebauer-Moeller update after appending basis[new_index]."""
    lt_new = leading_term(basis[new_index], order)[0]
    lts = [leading_term(g, order)[0] for g in basis]
    # prune old pairs via the chain criterion
    kept = []
    for i, j in pairs:
        l = _lcm_exp(lts[i], lts[j])
        if (
            _divides(lt_new, l)
            and _lcm_exp(lts[i], lt_new) != l
            and _lcm_exp(lts[j], lt_new) != l
        ):
            continue
        kept.append((i, j))
    # candidate new pairs, pruned among themselves
    cand = list(range(new_index))
    lcms = {i: _lcm_exp(lts[i], lt_new) for i in cand}
    selected = []
    for i in cand:
        li = lcms[i]
        redundant = False
        for j in cand:
            if j == i:
                continue
            lj = lcms[j]
            if lj != li and _divides(lj, li):
                redundant = True
                break
            if lj == li and j < i:
                redundant = True
                break
        if not redundant:
            selected.append(i)
    for i in selected:
        if not _coprime(lts[i], lt_new):
            kept.append((i, new_index))
    return kept


def _reduce_basis(ring, basis, order, cap):
    if not basis:
        return GroebnerBasis(ring, (), order, reduced=True)
    # drop elements whose leading term another element divides
    lts = [leading_term(g, order)[0] for g in basis]
    keep = []
    for i, g in enumerate(basis):
        if any(
            j != i
            and _divides(lts[j], lts[i])
            and (lts[j] != lts[i] or j < i)
            for j in range(len(basis))
        ):
            continue
        keep.append(g)
    # tail-reduce every survivor against the others
    out = []
    for i, g in enumerate(keep):
        others = keep[:i] + keep[i + 1 :]
        h = normal_form(g, others, order, cap)
        if h:
            out.append(_monic(h, order))
    out.sort(key=lambda g: order.key(leading_term(g, order)[0]))
    return GroebnerBasis(ring, tuple(out), order, reduced=True)


# ---------------------------------------------------------------------------
# Dimension, homogeneity spaces, saturation


def dimension_and_independent_set(G: GroebnerBasis):
    """Krull dimension plus a canonical maximal independent variable set.

    Among maximum-size independent sets the one using the latest
    variables wins, which matches how substitutions are chosen later.
    Returns (-1, empty set) for the unit ideal.
    """
    n = G.ring.nvars
    supports = [
        frozenset(i for i, e in enumerate(exps) if e)
        for exps in G.leading_exponents()
    ]
    if frozenset() in supports:
        return -1, frozenset()
    for size in range(n, -1, -1):
        for combo in combinations(range(n - 1, -1, -1), size):
            s = frozenset(combo)
            if not any(sup <= s for sup in supports):
                return size, s
    return -1, frozenset()


@dataclass(frozen=True)
class LinearSubspace:
    basis: tuple

    @property
    def dim(self):
        return len(self.basis)

    def contains(self, vector):
        return in_row_space([list(b) for b in self.basis], list(vector))

    def json(self):
        return [[str(x) for x in row] for row in self.basis]


def homogeneity_space(G: GroebnerBasis) -> LinearSubspace:
    """Weights fixing every basis element term-wise.

    Requires valuation-zero coefficients so that initial forms can be
    compared against the original generators literally.
    """
    for g in G.polys:
        for c in g.terms.values():
            if val(c) != 0:
                raise NonConstantValuation(
                    "homogeneity space needs valuation-zero coefficients"
                )
    rows = []
    for g in G.polys:
        exps = sorted(g.terms)
        base = exps[0]
        for e in exps[1:]:
            rows.append([Fraction(a - b) for a, b in zip(e, base)])
    n = G.ring.nvars
    if not rows:
        basis = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    else:
        basis = nullspace(rows, n)
        basis, _ = rref(basis)
    return LinearSubspace(tuple(tuple(row) for row in basis))


def saturate(ideal: Ideal, variable_indices=None, cap=DEFAULT_MONOMIAL_CAP) -> Ideal:
    """(I : m^inf) for m the product of the given variables (default all).

    Adjoins an inverse witness variable and eliminates it again.
    """
    ring = ideal.ring
    if variable_indices is None:
        variable_indices = range(ring.nvars)
    aux_ring = Ring(("y_sat",) + ring.names, ring.field)
    lifted = [
        MPoly(aux_ring, {(0,) + e: c for e, c in g.terms.items()})
        for g in ideal.generators
    ]
    prod_exp = (1,) + tuple(
        1 if i in set(variable_indices) else 0 for i in range(ring.nvars)
    )
    witness = MPoly(
        aux_ring,
        {
            (0,) * aux_ring.nvars: aux_ring.field.one(),
            prod_exp: -aux_ring.field.one(),
        },
    )
    gb = buchberger(Ideal(aux_ring, tuple(lifted) + (witness,)),
                    MonomialOrder.eliminate(1), cap)
    kept = [g for g in gb.polys if g.deg_in(0) == 0]
    out = [MPoly(ring, {e[1:]: c for e, c in g.terms.items()}) for g in kept]
    return Ideal(ring, tuple(out))


def contains_monomial(ideal: Ideal, cap=DEFAULT_MONOMIAL_CAP) -> bool:
    """Whether the saturation by all variables is the unit ideal."""
    ring = ideal.ring
    if not ideal.generators:
        return False
    for g in ideal.generators:
        if len(g.terms) == 1:
            return True
    aux_ring = Ring(("y_sat",) + ring.names, ring.field)
    lifted = [
        MPoly(aux_ring, {(0,) + e: c for e, c in g.terms.items()})
        for g in ideal.generators
    ]
    witness = MPoly(
        aux_ring,
        {
            (0,) * aux_ring.nvars: aux_ring.field.one(),
            (1,) * aux_ring.nvars: -aux_ring.field.one(),
        },
    )
    gb = buchberger(
        Ideal(aux_ring, tuple(lifted) + (witness,)), MonomialOrder.degrevlex(), cap
    )
    return gb.is_unit()


def initial_ideal(ideal: Ideal, w, cap=DEFAULT_MONOMIAL_CAP) -> Ideal:
    """Ideal of w-initial forms, over the residue field."""
    if not ideal.has_constant_valuation():
        raise NonConstantValuation(
            "initial ideals need valuation-zero coefficients"
        )
    if not ideal.is_generator_homogeneous():
        raise NotHomogeneous("initial ideals need homogeneous generators")
    if not ideal.generators:
        return Ideal(ideal.ring.residue_ring(), ())
    order = MonomialOrder.weighted(w)
    gb = buchberger(ideal, order, cap)
    forms = tuple(initial_form(g, w) for g in gb.polys)
    return Ideal(ideal.ring.residue_ring(), forms)


def is_in_tropical_variety(ideal: Ideal, w, cap=DEFAULT_MONOMIAL_CAP) -> bool:
    """Monomial-freeness of the w-initial ideal."""
    return not contains_monomial(initial_ideal(ideal, w, cap), cap)


def in_prevariety(generators, w) -> bool:
    """Cheap necessary condition: each generator's minimum is attained twice."""
    for g in generators:
        if not g:
            continue
        if len(g.terms) == 1:
            return False
        m = trop_eval(g, w)
        hits = 0
        for e, c in g.terms.items():
            weight = sum(wi * ei for wi, ei in zip(w, e))
            if val(c) is not INFINITY and weight + val(c) == m:
                hits += 1
                if hits >= 2:
                    break
        if hits < 2:
            return False
    return True


def zero_dim_torus_check(ideal: Ideal, cap=DEFAULT_MONOMIAL_CAP) -> bool:
    """Zero-dimensional and disjoint from every coordinate hyperplane."""
    order = MonomialOrder.degrevlex()
    gb = buchberger(ideal, order, cap)
    if gb.is_unit():
        return False
    d, _ = dimension_and_independent_set(gb)
    if d != 0:
        return False
    ring = ideal.ring
    for j in range(ring.nvars):
        xj = MPoly.variable(ring, j)
        test = buchberger(Ideal(ring, gb.polys + (xj,)), order, cap)
        if not test.is_unit():
            return False
    return True
