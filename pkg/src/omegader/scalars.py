"""Exact scalar tower: rationals, univariate polynomials, number fields.

Rationals are plain ``fractions.Fraction`` (always reduced, positive
denominator, arbitrary precision).  ``Poly`` is a dense univariate polynomial
over the rationals, coefficients stored lowest degree first with no trailing
zeros.  ``NumberField`` wraps a monic irreducible modulus and hands out
``NumberFieldElem`` residues, giving exact arithmetic in Q[t]/(p) for the
irrational special values that show up in parametric rank analysis.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction


class ReducibleModulusError(ValueError):
    """A number-field modulus turned out to be (or could not be proven) irreducible."""


def parse_rational(text: str) -> Fraction:
    """Parse "p" or "p/q" (ASCII or U+2212 minus) into a Fraction."""
    s = text.strip().replace("−", "-")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational literal: {text!r}") from exc


def format_rational(x: Fraction) -> str:
    """Render a Fraction as "p" or "p/q"."""
    return str(Fraction(x))


# ---------------------------------------------------------------------------
# Polynomials over Q
# ---------------------------------------------------------------------------

class Poly:
    """Dense univariate polynomial over Q, lowest-degree-first coefficients.

    Immutable.  The zero polynomial has an empty coefficient tuple and the
    sentinel degree -1; every nonzero polynomial has a nonzero leading
    coefficient.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        if isinstance(coeffs, (int, Fraction)):
            coeffs = (Fraction(coeffs),)
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    @staticmethod
    def variable() -> "Poly":
        return Poly((Fraction(0), Fraction(1)))

    @property
    def degree(self) -> int:
        """Degree; -1 is the sentinel for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("not a constant polynomial")
        return self.coeffs[0] if self.coeffs else Fraction(0)

    def leading(self) -> Fraction:
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(("Poly", self.coeffs))

    def __add__(self, other):
        other = _coerce_poly(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        other = _coerce_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _coerce_poly(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca:
                for j, cb in enumerate(b):
                    if cb:
                        out[i + j] += ca * cb
        return Poly(out)

    __rmul__ = __mul__

    def __divmod__(self, other):
        other = _coerce_poly(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        div = other.coeffs
        dd = len(div) - 1
        lead = div[-1]
        if len(rem) - 1 < dd:
            return Poly(), Poly(rem)
        quo = [Fraction(0)] * (len(rem) - dd)
        for i in range(len(rem) - 1, dd - 1, -1):
            c = rem[i]
            if c:
                q = c / lead
                quo[i - dd] = q
                for j in range(dd + 1):
                    rem[i - dd + j] -= q * div[j]
        return Poly(quo), Poly(rem)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __call__(self, x: Fraction) -> Fraction:
        x = Fraction(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "Poly":
        return Poly(tuple(i * c for i, c in enumerate(self.coeffs) if i))

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        lead = self.leading()
        if lead == 1:
            return self
        return Poly(tuple(c / lead for c in self.coeffs))

    def integer_primitive(self) -> tuple[int, ...]:
        """Integer coefficient list of the primitive associate (content 1)."""
        if self.is_zero():
            return ()
        den = math.lcm(*(c.denominator for c in self.coeffs))
        ints = [int(c * den) for c in self.coeffs]
        g = math.gcd(*ints)
        return tuple(v // g for v in ints)

    def __repr__(self):
        return f"Poly({list(self.coeffs)!r})"

    def __str__(self):
        return format_poly(self)


def _coerce_poly(x):
    if isinstance(x, Poly):
        return x
    if isinstance(x, (int, Fraction)):
        return Poly(x)
    return NotImplemented


def format_poly(p: Poly, var: str = "t") -> str:
    """Human form like "2*t^2 - 4*t + 2"."""
    if p.is_zero():
        return "0"
    parts = []
    for i in range(p.degree, -1, -1):
        c = p.coeffs[i]
        if not c:
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if i == 0:
            body = format_rational(mag)
        else:
            tpow = var if i == 1 else f"{var}^{i}"
            body = tpow if mag == 1 else f"{format_rational(mag)}*{tpow}"
        parts.append((sign, body))
    first_sign, first_body = parts[0]
    text = ("-" if first_sign == "-" else "") + first_body
    for sign, body in parts[1:]:
        text += f" {sign} {body}"
    return text


def poly_gcd(f: Poly, g: Poly) -> Poly:
    """Monic gcd; gcd(f, 0) = monic(f), gcd(0, 0) = 0."""
    a, b = f, g
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def squarefree_part(f: Poly) -> Poly:
    """Monic product of the distinct irreducible factors of a nonzero f."""
    if f.is_zero():
        raise ValueError("squarefree part of the zero polynomial")
    if f.is_constant():
        return Poly(1)
    return (f // poly_gcd(f, f.derivative())).monic()


# -- rational root extraction ------------------------------------------------
# Degree <= 2 uses direct formulas.  Higher degrees use the classical modular
# method: the rational root theorem bounds numerator and denominator (p | a0,
# q | an), every rational root survives reduction modulo a prime not dividing
# the leading coefficient, so roots are found modulo a word-size prime,
# Hensel-lifted, rationally reconstructed, and verified by exact evaluation.
# This avoids factoring the (possibly enormous) integer coefficients.

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _is_probable_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pmp_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmp_rem(a: list[int], b: list[int], p: int) -> list[int]:
    """Remainder of a by b over F_p (b nonzero)."""
    rem = [x % p for x in a]
    _pmp_trim(rem)
    db = len(b) - 1
    inv = pow(b[-1], p - 2, p)
    while len(rem) - 1 >= db:
        c = rem[-1] * inv % p
        if c:
            off = len(rem) - 1 - db
            for i in range(db + 1):
                rem[off + i] = (rem[off + i] - c * b[i]) % p
        rem.pop()
        _pmp_trim(rem)
    return rem


def _pmp_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = [x % p for x in a], [x % p for x in b]
    _pmp_trim(a)
    _pmp_trim(b)
    while b:
        a, b = b, _pmp_rem(a, b, p)
    if a:
        inv = pow(a[-1], p - 2, p)
        a = [x * inv % p for x in a]
    return a


def _pmp_mulmod(a: list[int], b: list[int], mod: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca:
            for j, cb in enumerate(b):
                out[i + j] = (out[i + j] + ca * cb) % p
    return _pmp_rem(out, mod, p)


def _pmp_powmod(base: list[int], e: int, mod: list[int], p: int) -> list[int]:
    result = [1]
    base = _pmp_rem(base, mod, p)
    while e:
        if e & 1:
            result = _pmp_mulmod(result, base, mod, p)
        base = _pmp_mulmod(base, base, mod, p)
        e >>= 1
    return result


def _roots_mod_p(g: list[int], p: int, rng: random.Random) -> list[int]:
    """Distinct roots of g over F_p (Cantor-Zassenhaus on the linear part)."""
    gm = [x % p for x in g]
    _pmp_trim(gm)
    inv = pow(gm[-1], p - 2, p)
    gm = [x * inv % p for x in gm]
    xp = _pmp_powmod([0, 1], p, gm, p)
    xp_minus_x = list(xp)
    while len(xp_minus_x) < 2:
        xp_minus_x.append(0)
    xp_minus_x[1] = (xp_minus_x[1] - 1) % p
    linear = _pmp_gcd(gm, xp_minus_x, p)
    roots: list[int] = []
    stack = [linear] if len(linear) >= 2 else []
    while stack:
        h = stack.pop()
        if len(h) == 2:  # monic x - r
            roots.append((-h[0]) % p)
            continue
        while True:
            shift = [rng.randrange(p), 1]
            w = _pmp_powmod(shift, (p - 1) // 2, h, p)
            w = list(w) or [0]
            w[0] = (w[0] - 1) % p
            d = _pmp_gcd(h, _pmp_trim(w), p)
            if 1 <= len(d) - 1 < len(h) - 1:
                q, r = _pmp_divmod_monic(h, d, p)
                assert not r
                stack.append(d)
                stack.append(q)
                break
    return roots


def _pmp_divmod_monic(a: list[int], b: list[int], p: int) -> tuple[list[int], list[int]]:
    rem = [x % p for x in a]
    db = len(b) - 1
    quo = [0] * max(len(rem) - db, 0)
    inv = pow(b[-1], p - 2, p)
    for i in range(len(rem) - 1, db - 1, -1):
        c = rem[i] * inv % p
        if c:
            quo[i - db] = c
            for j in range(db + 1):
                rem[i - db + j] = (rem[i - db + j] - c * b[j]) % p
    return quo, _pmp_trim(rem)


def _rational_reconstruct(r: int, m: int, bound: int) -> Fraction | None:
    """p0/q0 = r mod m with |p0| <= bound, 0 < q0 <= bound, if one exists."""
    r0, r1 = m, r % m
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if r1 == 0 or s1 == 0 or abs(s1) > bound:
        return None
    return Fraction(r1, s1) if s1 > 0 else Fraction(-r1, -s1)


def _rational_roots_modular(g: Poly) -> set[Fraction]:
    """Rational roots of a squarefree integer-primitive g of degree >= 1."""
    ints = list(g.integer_primitive())
    lc = abs(ints[-1])
    bound = max(abs(ints[0]), lc)
    rng = random.Random(0x5EED)
    p = (1 << 61) - 1  # scan upward from here for a suitable prime
    while True:
        p += 2
        if not _is_probable_prime(p):
            continue
        if lc % p == 0:
            continue
        deriv = [(i * c) % p for i, c in enumerate(ints) if i]
        if len(_pmp_gcd(ints, deriv, p)) != 1:
            continue  # not squarefree mod p
        break
    roots_p = _roots_mod_p(ints, p, rng)
    if not roots_p:
        return set()
    # Hensel-lift each simple root until the modulus exceeds 2*bound^2
    target = 2 * bound * bound + 1
    roots: set[Fraction] = set()
    for r in roots_p:
        m = p
        while m < target:
            fr = 0
            dfr = 0
            m2 = m * m
            for c in reversed(ints):
                fr = (fr * r + c) % m2
            for i in range(len(ints) - 1, 0, -1):
                dfr = (dfr * r + i * ints[i]) % m2
            inv = pow(dfr, -1, m2) if math.gcd(dfr, m2) == 1 else None
            if inv is None:
                break  # cannot lift (should not happen for simple roots)
            r = (r - fr * inv) % m2
            m = m2
        else:
            cand = _rational_reconstruct(r, m, bound)
            if cand is not None and g(cand) == 0:
                roots.add(cand)
    return roots


def is_rational_square(x: Fraction) -> bool:
    if x < 0:
        return False
    rn = math.isqrt(x.numerator)
    rd = math.isqrt(x.denominator)
    return rn * rn == x.numerator and rd * rd == x.denominator


def rational_roots(f: Poly) -> set[Fraction]:
    """Exactly the rational roots of a nonzero f.

    Degree <= 2 uses direct formulas; higher degrees find roots modulo a
    word-size prime, lift, reconstruct, and verify each candidate by exact
    evaluation (the candidate set is complete because a rational root's
    denominator divides the leading coefficient, which the prime does not).
    """
    if f.is_zero():
        raise ValueError("every point is a root of the zero polynomial")
    roots: set[Fraction] = set()
    coeffs = list(f.coeffs)
    shift = 0
    while coeffs and coeffs[0] == 0:
        coeffs.pop(0)
        shift += 1
    if shift:
        roots.add(Fraction(0))
    g = Poly(coeffs)
    if g.degree <= 0:
        return roots
    if g.degree == 1:
        roots.add(-g.coeffs[0] / g.coeffs[1])
        return roots
    if g.degree == 2:
        c0, c1, c2 = g.coeffs
        disc = c1 * c1 - 4 * c2 * c0
        if is_rational_square(disc):
            s = Fraction(math.isqrt(disc.numerator), math.isqrt(disc.denominator))
            roots.add((-c1 + s) / (2 * c2))
            roots.add((-c1 - s) / (2 * c2))
        return roots
    sf = (g // poly_gcd(g, g.derivative())).monic()
    roots |= {r for r in _rational_roots_modular(sf)}
    return roots


def irreducibility_verdict(p: Poly) -> bool | None:
    """True/False when decidable (degree <= 3), None when out of scope.

    Degree 1 is irreducible; degree 2 is irreducible iff the discriminant is
    not a rational square; degree 3 iff it has no rational root.  Degree >= 4
    is not decided here.
    """
    d = p.degree
    if d <= 0:
        return False
    if d == 1:
        return True
    if d == 2:
        c0, c1, c2 = p.coeffs
        return not is_rational_square(c1 * c1 - 4 * c2 * c0)
    if d == 3:
        return not rational_roots(p)
    return None


# ---------------------------------------------------------------------------
# Number fields Q[t]/(modulus)
# ---------------------------------------------------------------------------

class NumberField:
    """Q[t]/(modulus) for a monic modulus.

    Degree <= 3 moduli are checked for irreducibility up front; larger degrees
    are accepted provisionally and reducibility is reported if inversion ever
    stumbles on a nontrivial factor.
    """

    __slots__ = ("modulus",)

    def __init__(self, modulus: Poly):
        modulus = Poly(modulus.coeffs)
        if modulus.degree < 1:
            raise ValueError("modulus must have degree >= 1")
        if modulus.leading() != 1:
            modulus = modulus.monic()
        verdict = irreducibility_verdict(modulus)
        if verdict is False:
            raise ReducibleModulusError(f"modulus {modulus} is reducible over Q")
        object.__setattr__(self, "modulus", modulus)

    def __setattr__(self, name, value):
        raise AttributeError("NumberField is immutable")

    def __eq__(self, other):
        return isinstance(other, NumberField) and self.modulus == other.modulus

    def __hash__(self):
        return hash(("NumberField", self.modulus))

    def __repr__(self):
        return f"NumberField({self.modulus})"

    @property
    def degree(self) -> int:
        return self.modulus.degree

    def elem(self, value) -> "NumberFieldElem":
        if isinstance(value, NumberFieldElem):
            if value.field != self:
                raise ValueError("element belongs to a different field")
            return value
        if isinstance(value, (int, Fraction)):
            value = Poly(value)
        return NumberFieldElem(self, value % self.modulus)

    def zero(self) -> "NumberFieldElem":
        return NumberFieldElem(self, Poly())

    def one(self) -> "NumberFieldElem":
        return NumberFieldElem(self, Poly(1))

    def generator(self) -> "NumberFieldElem":
        return self.elem(Poly.variable())


class NumberFieldElem:
    """Residue class in Q[t]/(modulus); residue degree < modulus degree."""

    __slots__ = ("field", "residue")

    def __init__(self, field: NumberField, residue: Poly):
        if residue.degree >= field.modulus.degree:
            residue = residue % field.modulus
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "residue", residue)

    def __setattr__(self, name, value):
        raise AttributeError("NumberFieldElem is immutable")

    def is_zero(self) -> bool:
        return self.residue.is_zero()

    def __bool__(self):
        return not self.is_zero()

    def _coerce(self, other):
        if isinstance(other, NumberFieldElem):
            if other.field != self.field:
                raise ValueError("mixed number fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.elem(other)
        return None

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.residue == o.residue

    def __hash__(self):
        return hash(("NFElem", self.field.modulus, self.residue))

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return NumberFieldElem(self.field, self.residue + o.residue)

    __radd__ = __add__

    def __neg__(self):
        return NumberFieldElem(self.field, -self.residue)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return NumberFieldElem(self.field, self.residue - o.residue)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return NumberFieldElem(self.field, (self.residue * o.residue) % self.field.modulus)

    __rmul__ = __mul__

    def inverse(self) -> "NumberFieldElem":
        if self.is_zero():
            raise ZeroDivisionError("inverting zero in a number field")
        # extended Euclid: s*residue + t*modulus = gcd
        r0, r1 = self.field.modulus, self.residue
        s0, s1 = Poly(), Poly(1)
        while not r1.is_zero():
            q, r = divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 - q * s1
        if r0.degree > 0:
            raise ReducibleModulusError(
                f"modulus {self.field.modulus} is reducible: gcd with {self.residue} is {r0.monic()}"
            )
        inv = s0 * (Fraction(1) / r0.constant_value())
        return NumberFieldElem(self.field, inv % self.field.modulus)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __repr__(self):
        return f"<{self.residue} mod {self.field.modulus}>"


def nf_inverse(x: NumberFieldElem) -> NumberFieldElem:
    """Multiplicative inverse in Q[t]/(modulus)."""
    return x.inverse()
