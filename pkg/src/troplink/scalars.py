"""Exact arithmetic for the supported valued coefficient fields.

Two valued fields are available: fractions of finite Puiseux polynomials
over the rationals (valuation = order in t, rational exponents allowed)
and rationals with a p-adic valuation.  Their residue arithmetic lives in
plain ``Fraction`` values or in the prime field ``GFp``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd as _int_gcd, lcm as _int_lcm

from .errors import DivisionByZero, InsufficientPrecision, NonPrimeModulus, ZeroInput


class _Infinity:
    """The valuation of zero.  Larger than every rational, absorbs addition."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("troplink-infinity")

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __neg__(self):
        raise ArithmeticError("cannot negate INFINITY")


INFINITY = _Infinity()


def ext_min(*values):
    finite = [v for v in values if v is not INFINITY]
    if not finite:
        return INFINITY
    return min(finite)


def ext_add(a, b):
    if a is INFINITY or b is INFINITY:
        return INFINITY
    return a + b


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


# ---------------------------------------------------------------------------
# Finite Puiseux polynomials: dict {exponent Fraction: coefficient Fraction},
# no zero coefficients stored.

def _padd(a, b):
    out = dict(a)
    for e, c in b.items():
        s = out.get(e, 0) + c
        if s:
            out[e] = s
        else:
            out.pop(e, None)
    return out


def _pneg(a):
    return {e: -c for e, c in a.items()}


def _pmul(a, b):
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = ea + eb
            s = out.get(e, 0) + ca * cb
            if s:
                out[e] = s
            else:
                out.pop(e, None)
    return out


def _pshift(a, e):
    if not e:
        return dict(a)
    return {ea + e: ca for ea, ca in a.items()}


def _pscale(a, c):
    if not c:
        return {}
    return {e: ca * c for e, ca in a.items()}


def _int_poly_divmod(a, b):
    """Division with remainder for int-keyed polynomial dicts, b nonzero."""
    r = dict(a)
    q = {}
    db = max(b)
    lb = b[db]
    while r and max(r) >= db:
        dr = max(r)
        f = r[dr] / lb
        q[dr - db] = f
        for e, c in b.items():
            s = r.get(e + dr - db, 0) - f * c
            if s:
                r[e + dr - db] = s
            else:
                r.pop(e + dr - db, None)
    return q, r


def _int_poly_gcd(a, b):
    """Monic gcd of int-keyed polynomial dicts over the rationals."""
    while b:
        a, b = b, _int_poly_divmod(a, b)[1]
    lead = a[max(a)]
    return {e: c / lead for e, c in a.items()}


def _ram_index(*dicts):
    n = 1
    for d in dicts:
        for e in d:
            n = _int_lcm(n, Fraction(e).denominator)
    return n


def _to_int_keys(a, n):
    return {int(e * n): c for e, c in a.items()}


def _from_int_keys(a, n):
    return {Fraction(e, n): c for e, c in a.items()}


class PuiseuxFraction:
    """Element of the fraction field of finite Puiseux polynomials over Q.

    Stored as numerator/denominator dicts mapping rational exponents of t
    to rational coefficients.  The denominator is normalized so that its
    least exponent is 0 with coefficient 1, and numerator/denominator share
    no common polynomial factor.  The valuation is then the least exponent
    of the numerator, always exact.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, _normalized=False):
        if den is None:
            den = {Fraction(0): Fraction(1)}
        if _normalized:
            self.num = num
            self.den = den
            return
        num = {Fraction(e): Fraction(c) for e, c in num.items() if c}
        den = {Fraction(e): Fraction(c) for e, c in den.items() if c}
        if not den:
            raise DivisionByZero("zero denominator")
        if not num:
            self.num = {}
            self.den = {Fraction(0): Fraction(1)}
            return
        num_min = min(num)
        den_min = min(den)
        a = _pshift(num, -num_min)
        b = _pshift(den, -den_min)
        if len(a) > 1 or len(b) > 1:
            n = _ram_index(a, b)
            g = _int_poly_gcd(_to_int_keys(a, n), _to_int_keys(b, n))
            if len(g) > 1 or max(g) > 0:
                a = _from_int_keys(_int_poly_divmod(_to_int_keys(a, n), g)[0], n)
                b = _from_int_keys(_int_poly_divmod(_to_int_keys(b, n), g)[0], n)
        unit = b[Fraction(0)]
        if unit != 1:
            a = _pscale(a, 1 / unit)
            b = _pscale(b, 1 / unit)
        self.num = _pshift(a, num_min - den_min)
        self.den = b

    @classmethod
    def from_fraction(cls, q):
        q = Fraction(q)
        if not q:
            return cls({})
        return cls({Fraction(0): q})

    @classmethod
    def t_power(cls, e):
        return cls({Fraction(e): Fraction(1)})

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        if not isinstance(other, PuiseuxFraction):
            return NotImplemented
        return _pmul(self.num, other.den) == _pmul(other.num, self.den)

    __hash__ = None

    def __add__(self, other):
        return PuiseuxFraction(
            _padd(_pmul(self.num, other.den), _pmul(other.num, self.den)),
            _pmul(self.den, other.den),
        )

    def __sub__(self, other):
        return PuiseuxFraction(
            _padd(_pmul(self.num, other.den), _pneg(_pmul(other.num, self.den))),
            _pmul(self.den, other.den),
        )

    def __neg__(self):
        return PuiseuxFraction(_pneg(self.num), self.den, _normalized=True)

    def __mul__(self, other):
        return PuiseuxFraction(
            _pmul(self.num, other.num), _pmul(self.den, other.den)
        )

    def __truediv__(self, other):
        if not other.num:
            raise DivisionByZero("division by zero Puiseux element")
        return PuiseuxFraction(
            _pmul(self.num, other.den), _pmul(self.den, other.num)
        )

    def __pow__(self, n):
        if n < 0:
            return PuiseuxFraction.from_fraction(1) / self ** (-n)
        out = PuiseuxFraction.from_fraction(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def val(self):
        if not self.num:
            return INFINITY
        return min(self.num)

    def residue(self):
        if not self.num:
            raise ZeroInput("leading residue of zero")
        return self.num[min(self.num)]

    def is_polynomial(self):
        return self.den == {Fraction(0): Fraction(1)}

    def truncate(self, bound):
        """Drop numerator terms of exponent >= bound; polynomial form only."""
        if not self.is_polynomial():
            raise ValueError("truncate requires polynomial form")
        return PuiseuxFraction({e: c for e, c in self.num.items() if e < bound})

    def as_fraction(self):
        """Return the value as a rational if it is constant, else None."""
        if not self.num:
            return Fraction(0)
        if self.is_polynomial() and set(self.num) == {Fraction(0)}:
            return self.num[Fraction(0)]
        return None

    def __repr__(self):
        return f"PuiseuxFraction({format_puiseux(self)!r})"

    def __str__(self):
        return format_puiseux(self)


def _format_exponent(e):
    if e.denominator == 1 and e >= 0:
        return str(e.numerator)
    return f"({e})"


def _format_poly_dict(d):
    if not d:
        return "0"
    parts = []
    for e in sorted(d, reverse=True):
        c = d[e]
        if e == 0:
            term = str(abs(c))
        else:
            tpow = "t" if e == 1 else f"t^{_format_exponent(e)}"
            term = tpow if abs(c) == 1 else f"{abs(c)}*{tpow}"
        if not parts:
            parts.append(term if c > 0 else f"-{term}")
        else:
            parts.append(f"+ {term}" if c > 0 else f"- {term}")
    return " ".join(parts)


def format_puiseux(x: PuiseuxFraction) -> str:
    num = _format_poly_dict(x.num)
    if x.is_polynomial():
        return num
    return f"({num})/({_format_poly_dict(x.den)})"


class PadicScalar:
    """Rational number carrying a p-adic valuation."""

    __slots__ = ("value", "prime")

    def __init__(self, value, prime):
        self.value = Fraction(value)
        self.prime = prime

    def __bool__(self):
        return bool(self.value)

    def __eq__(self, other):
        if not isinstance(other, PadicScalar):
            return NotImplemented
        return self.value == other.value and self.prime == other.prime

    __hash__ = None

    def _wrap(self, v):
        return PadicScalar(v, self.prime)

    def __add__(self, other):
        return self._wrap(self.value + other.value)

    def __sub__(self, other):
        return self._wrap(self.value - other.value)

    def __neg__(self):
        return self._wrap(-self.value)

    def __mul__(self, other):
        return self._wrap(self.value * other.value)

    def __truediv__(self, other):
        if not other.value:
            raise DivisionByZero("division by zero p-adic element")
        return self._wrap(self.value / other.value)

    def __pow__(self, n):
        return self._wrap(self.value**n)

    def val(self):
        if not self.value:
            return INFINITY
        v = 0
        n = self.value.numerator
        while n % self.prime == 0:
            n //= self.prime
            v += 1
        d = self.value.denominator
        while d % self.prime == 0:
            d //= self.prime
            v -= 1
        return Fraction(v)

    def residue(self):
        if not self.value:
            raise ZeroInput("leading residue of zero")
        v = self.val()
        unit = self.value / Fraction(self.prime) ** int(v)
        inv_den = pow(unit.denominator, -1, self.prime)
        return Fraction((unit.numerator * inv_den) % self.prime)

    def __repr__(self):
        return f"PadicScalar({self.value}, p={self.prime})"

    def __str__(self):
        return str(self.value)


class GFp:
    """Element of the prime field Z/pZ; residue arithmetic for p-adics."""

    __slots__ = ("value", "prime")

    def __init__(self, value, prime):
        self.value = int(value) % prime
        self.prime = prime

    def __bool__(self):
        return self.value != 0

    def __eq__(self, other):
        if not isinstance(other, GFp):
            return NotImplemented
        return self.value == other.value and self.prime == other.prime

    __hash__ = None

    def _wrap(self, v):
        return GFp(v, self.prime)

    def __add__(self, other):
        return self._wrap(self.value + other.value)

    def __sub__(self, other):
        return self._wrap(self.value - other.value)

    def __neg__(self):
        return self._wrap(-self.value)

    def __mul__(self, other):
        return self._wrap(self.value * other.value)

    def __truediv__(self, other):
        if not other.value:
            raise DivisionByZero("division by zero in GF(p)")
        return self._wrap(self.value * pow(other.value, -1, self.prime))

    def __pow__(self, n):
        return self._wrap(pow(self.value, n, self.prime))

    def val(self):
        return Fraction(0) if self.value else INFINITY

    def residue(self):
        if not self.value:
            raise ZeroInput("leading residue of zero")
        return Fraction(self.value)

    def lift(self):
        return Fraction(self.value)

    def __repr__(self):
        return f"GFp({self.value}, p={self.prime})"

    def __str__(self):
        return str(self.value)


PUISEUX = "puiseux"
PADIC = "padic"
RATIONAL = "rational"
GFP = "gfp"


@dataclass(frozen=True)
class FieldConfig:
    """Which coefficient field is active, and its uniformizer."""

    kind: str
    prime: int | None = None

    @classmethod
    def puiseux(cls):
        return cls(PUISEUX)

    @classmethod
    def padic(cls, p):
        if not is_prime(p):
            raise NonPrimeModulus(f"{p} is not prime")
        return cls(PADIC, p)

    @classmethod
    def rational(cls):
        return cls(RATIONAL)

    @classmethod
    def gfp(cls, p):
        if not is_prime(p):
            raise NonPrimeModulus(f"{p} is not prime")
        return cls(GFP, p)

    @property
    def uniformizer_symbol(self):
        if self.kind == PUISEUX:
            return "t"
        if self.kind == PADIC:
            return str(self.prime)
        raise ValueError(f"{self.kind} field has no uniformizer")

    def from_fraction(self, q):
        q = Fraction(q)
        if self.kind == PUISEUX:
            return PuiseuxFraction.from_fraction(q)
        if self.kind == PADIC:
            return PadicScalar(q, self.prime)
        if self.kind == RATIONAL:
            return q
        if q.denominator % self.prime == 0:
            raise DivisionByZero(f"1/{q.denominator} does not reduce mod {self.prime}")
        return GFp(q.numerator * pow(q.denominator, -1, self.prime), self.prime)

    def zero(self):
        return self.from_fraction(0)

    def one(self):
        return self.from_fraction(1)

    def uniformizer_power(self, e):
        """t^e (rational e) or p^e (integral e)."""
        e = Fraction(e)
        if self.kind == PUISEUX:
            return PuiseuxFraction.t_power(e)
        if self.kind == PADIC:
            if e.denominator != 1:
                raise ValueError("fractional powers of p are not supported")
            return PadicScalar(Fraction(self.prime) ** int(e), self.prime)
        raise ValueError(f"{self.kind} field has no uniformizer")

    def residue_config(self):
        if self.kind == PUISEUX:
            return FieldConfig.rational()
        if self.kind == PADIC:
            return FieldConfig.gfp(self.prime)
        return self

    def is_valued(self):
        return self.kind in (PUISEUX, PADIC)


def val(a):
    """Valuation of a scalar; INFINITY for zero.

    Residue-field elements carry the trivial valuation.
    """
    if isinstance(a, (PuiseuxFraction, PadicScalar, GFp)):
        return a.val()
    if isinstance(a, (Fraction, int)):
        return Fraction(0) if a else INFINITY
    raise TypeError(f"no valuation for {type(a).__name__}")


def leading_residue(a):
    """Coefficient of the least-valuation part of a, as a rational."""
    if isinstance(a, (PuiseuxFraction, PadicScalar, GFp)):
        return a.residue()
    if isinstance(a, (Fraction, int)):
        if not a:
            raise ZeroInput("leading residue of zero")
        return Fraction(a)
    raise TypeError(f"no residue for {type(a).__name__}")


class ApproxScalar:
    """A scalar known modulo an error of valuation >= prec.

    ``known`` is an exact field element and ``prec`` a rational bound (or
    INFINITY for exact values).  The true value is known + (error of
    valuation at least prec).  Valuations extracted from such a value are
    flagged exact only when they fall strictly below the error bound.
    """

    __slots__ = ("known", "prec")

    def __init__(self, known, prec=INFINITY):
        self.known = known
        self.prec = prec

    @classmethod
    def exact(cls, scalar):
        return cls(scalar, INFINITY)

    def lower_bound(self):
        return ext_min(val(self.known), self.prec)

    def val_info(self):
        """(valuation or lower bound, is_exact)."""
        v = val(self.known)
        if self.prec is INFINITY:
            return v, True
        if v is not INFINITY and v < self.prec:
            return v, True
        return self.prec, False

    def __bool__(self):
        return bool(self.known) or self.prec is not INFINITY

    def __add__(self, other):
        return ApproxScalar(self.known + other.known, ext_min(self.prec, other.prec))

    def __sub__(self, other):
        return ApproxScalar(self.known - other.known, ext_min(self.prec, other.prec))

    def __neg__(self):
        return ApproxScalar(-self.known, self.prec)

    def __mul__(self, other):
        prec = ext_min(
            ext_add(self.prec, other.lower_bound()),
            ext_add(other.prec, self.lower_bound()),
            ext_add(self.prec, other.prec),
        )
        return ApproxScalar(self.known * other.known, prec)

    def __truediv__(self, other):
        vb, exact = other.val_info()
        if not exact or not other.known:
            raise InsufficientPrecision(
                "division by a value whose valuation is not certified"
            )
        va = self.lower_bound()
        prec = INFINITY
        if self.prec is not INFINITY:
            prec = ext_min(prec, self.prec - vb)
        if other.prec is not INFINITY and va is not INFINITY:
            prec = ext_min(prec, other.prec + va - 2 * vb)
        return ApproxScalar(self.known / other.known, prec)

    def __pow__(self, n):
        out = ApproxScalar.exact(_one_like(self.known))
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def compress(self):
        """Trim the known part below the error bound where cheap to do."""
        if self.prec is INFINITY:
            return self
        if isinstance(self.known, PuiseuxFraction) and self.known.is_polynomial():
            return ApproxScalar(self.known.truncate(self.prec), self.prec)
        if isinstance(self.known, PadicScalar) and self.prec.denominator == 1:
            k = int(self.prec)
            v = self.known.value
            if k >= 0 and v.denominator % self.known.prime != 0:
                mod = self.known.prime**k if k > 0 else 1
                if mod > 1:
                    inv = pow(v.denominator % mod, -1, mod) if mod > 1 else 0
                    red = (v.numerator * inv) % mod
                    return ApproxScalar(
                        PadicScalar(red, self.known.prime), self.prec
                    )
        return self

    def __repr__(self):
        if self.prec is INFINITY:
            return f"ApproxScalar({self.known}, exact)"
        return f"ApproxScalar({self.known} + O(^{self.prec}))"


def _one_like(scalar):
    if isinstance(scalar, PuiseuxFraction):
        return PuiseuxFraction.from_fraction(1)
    if isinstance(scalar, PadicScalar):
        return PadicScalar(1, scalar.prime)
    if isinstance(scalar, GFp):
        return GFp(1, scalar.prime)
    return Fraction(1)


def padic_approx(residue, precision, prime):
    """The coset residue + p^precision Z_p as an approximate scalar."""
    if precision < 1:
        raise ValueError("precision must be at least 1")
    return ApproxScalar(
        PadicScalar(residue % prime**precision, prime), Fraction(precision)
    )
