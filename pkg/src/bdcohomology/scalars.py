"""Exact scalar arithmetic: Gaussian rationals, dense polynomials in the formal
parameter h, and reduced rational functions.

Everything is built on fractions.Fraction, so all arithmetic is exact.  The
polynomial variable is always the deformation parameter (printed "h"); its
coefficients live in Q(i).
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt

from .errors import FieldError

Q = Fraction


def rational_sqrt(q: Fraction) -> Fraction | None:
    """Exact square root of a nonnegative rational, or None."""
    if q < 0:
        return None
    if q == 0:
        return Q(0)
    rn, rd = isqrt(q.numerator), isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Q(rn, rd)
    return None


def int_square_part(n: int) -> tuple[int, int]:
    """Write n = s*s*f with f squarefree; returns (s, f).  Requires n >= 1."""
    if n < 1:
        raise ValueError("need a positive integer")
    s, f, m, p = 1, 1, n, 2
    while p * p <= m:
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        if e:
            s *= p ** (e // 2)
            if e % 2:
                f *= p
        p += 1 if p == 2 else 2
    return s, f * m


class GaussRat:
    """A Gaussian rational a + b*i with exact Fraction parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", Q(re))
        object.__setattr__(self, "im", Q(im))

    def __setattr__(self, *a):
        raise AttributeError("GaussRat is immutable")

    @staticmethod
    def _coerce(x):
        if isinstance(x, GaussRat):
            return x
        if isinstance(x, (int, Fraction)):
            return GaussRat(x)
        return None

    def __eq__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else (self.re == o.re and self.im == o.im)

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else GaussRat(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussRat(-self.re, -self.im)

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else GaussRat(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussRat(self.re * o.re - self.im * o.im,
                        self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def conj(self) -> "GaussRat":
        return GaussRat(self.re, -self.im)

    def norm(self) -> Fraction:
        """a^2 + b^2, the norm down to Q."""
        return self.re * self.re + self.im * self.im

    def inv(self) -> "GaussRat":
        n = self.norm()
        if not n:
            raise ZeroDivisionError("inverse of zero")
        return GaussRat(self.re / n, -self.im / n)

    def __truediv__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else self * o.inv()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else o * self.inv()

    def sqrt(self) -> "GaussRat | None":
        """A w with w*w == self, if one exists in Q(i); else None."""
        a, b = self.re, self.im
        if not b:
            if not a:
                return GaussRat(0)
            r = rational_sqrt(abs(a))
            if r is None:
                return None
            return GaussRat(r) if a > 0 else GaussRat(0, r)
        n = rational_sqrt(a * a + b * b)
        if n is None:
            return None
        # (x + yi)^2 = a + bi  =>  x^2 = (a + |z|)/2, y = b/(2x)
        x = rational_sqrt((a + n) / 2)
        if x is None or not x:
            return None
        return GaussRat(x, b / (2 * x))

    def __repr__(self):
        return f"GaussRat({self.re!r}, {self.im!r})"

    def __str__(self):
        a, b = self.re, self.im
        if not b:
            return str(a)
        if not a:
            if b == 1:
                return "i"
            if b == -1:
                return "-i"
            return f"{b}*i"
        sign = "+" if b > 0 else "-"
        bb = abs(b)
        istr = "i" if bb == 1 else f"{bb}*i"
        return f"{a}{sign}{istr}"


GR_ZERO = GaussRat(0)
GR_ONE = GaussRat(1)
GR_I = GaussRat(0, 1)


# ---------------------------------------------------------------------------
# dense polynomials in h over Q(i), lowest degree first


class Poly:
    """Dense polynomial over Q(i); coefficient tuple starts at degree 0."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [c if isinstance(c, GaussRat) else GaussRat(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, *a):
        raise AttributeError("Poly is immutable")

    @classmethod
    def const(cls, c) -> "Poly":
        return cls((c,))

    @classmethod
    def x(cls) -> "Poly":
        return cls((0, 1))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # zero polynomial -> -1

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __getitem__(self, k: int) -> GaussRat:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else GR_ZERO

    def lead(self) -> GaussRat:
        if not self.coeffs:
            raise FieldError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return Poly(tuple(self[k] + other[k] for k in range(n)))

    def __neg__(self):
        return Poly(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GaussRat)):
            c = other if isinstance(other, GaussRat) else GaussRat(other)
            return Poly(tuple(a * c for a in self.coeffs))
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly()
        out = [GR_ZERO] * (len(a) + len(b) - 1)
        for j, aj in enumerate(a):
            if not aj:
                continue
            for k, bk in enumerate(b):
                if bk:
                    out[j + k] = out[j + k] + aj * bk
        return Poly(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = P_ONE
        for _ in range(n):
            out = out * self
        return out

    def shift(self, k: int) -> "Poly":
        """Multiply by h^k."""
        if not self.coeffs:
            return self
        return Poly((GR_ZERO,) * k + self.coeffs)

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return Poly(), self
        quo = [GR_ZERO] * (dq + 1)
        linv = other.lead().inv()
        for k in range(dq, -1, -1):
            c = rem[k + other.degree] * linv
            quo[k] = c
            if c:
                for j, oc in enumerate(other.coeffs):
                    rem[k + j] = rem[k + j] - c * oc
        return Poly(tuple(quo)), Poly(tuple(rem))

    def monic(self) -> "Poly":
        if not self.coeffs:
            return self
        li = self.lead().inv()
        return Poly(tuple(c * li for c in self.coeffs))

    def gcd(self, other: "Poly") -> "Poly":
        a, b = self, other
        while b:
            a, b = b, a.divmod(b)[1]
        return a.monic() if a else a

    def deriv(self) -> "Poly":
        return Poly(tuple(self.coeffs[k] * k for k in range(1, len(self.coeffs))))

    def ord0(self) -> int:
        """Multiplicity of the root h = 0.  Undefined (raises) for 0."""
        if not self.coeffs:
            raise FieldError("zero polynomial has no order at 0")
        for k, c in enumerate(self.coeffs):
            if c:
                return k
        raise AssertionError

    def eval(self, x: GaussRat) -> GaussRat:
        acc = GR_ZERO
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def square_split(self) -> tuple["Poly", "Poly"]:
        """Write self = s^2 * r with r of squarefree polynomial part.

        Yun's squarefree decomposition; the leading content goes into r.
        """
        if not self:
            raise FieldError("cannot split zero")
        if self.degree == 0:
            return Poly.const(1), self
        c = self.lead()
        f = self.monic()
        parts = _yun(f)  # list of (monic squarefree factor, exponent)
        s, r = Poly.const(1), Poly.const(c)
        for fac, e in parts:
            for _ in range(e // 2):
                s = s * fac
            if e % 2:
                r = r * fac
        return s, r

    def __repr__(self):
        return f"Poly({self.coeffs!r})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            cs = str(c)
            if ("+" in cs[1:]) or ("-" in cs[1:]):
                cs = f"({cs})"
            if k == 0:
                terms.append(cs)
            else:
                hk = "h" if k == 1 else f"h^{k}"
                terms.append(hk if cs == "1" else f"{cs}*{hk}")
        return " + ".join(terms)


def _yun(f: Poly) -> list[tuple[Poly, int]]:
    # standard Yun over characteristic 0; f monic, degree >= 1
    out = []
    g = f.gcd(f.deriv())
    w = f.divmod(g)[0]
    y = f.deriv().divmod(g)[0]
    e = 1
    while w.degree > 0:
        z = y - w.deriv()
        a = w.gcd(z)
        if a.degree > 0:
            out.append((a, e))
        w = w.divmod(a)[0]
        y = z.divmod(a)[0]
        e += 1
    return out


P_ZERO = Poly()
P_ONE = Poly.const(1)
P_H = Poly.x()


# ---------------------------------------------------------------------------
# Gaussian-rational root extraction (used by the norm-equation solver)


def _pos_divisors(n: int) -> list[int]:
    n = abs(n)
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d * d != n:
                out.append(n // d)
        d += 1
    return sorted(out)


def _gauss_int_divisors(x: int, y: int) -> list[GaussRat]:
    """Divisors of x + yi in Z[i], one per unit class, first quadrant reps."""
    n = x * x + y * y
    reps = set()
    for d in _pos_divisors(n):
        for a in range(isqrt(d) + 1):
            b2 = d - a * a
            b = isqrt(b2)
            if b * b != b2:
                continue
            for wa, wb in ((a, b), (b, a)):
                if wa == 0 and wb == 0:
                    continue
                # does wa + wb*i divide x + yi?
                nw = wa * wa + wb * wb
                pr = x * wa + y * wb
                pi = y * wa - x * wb
                if pr % nw == 0 and pi % nw == 0:
                    if wa <= 0:  # rotate into {re > 0} or {re = 0, im > 0}
                        wa, wb = -wa, -wb
                    if wa == 0:
                        wb = abs(wb)
                    reps.add((wa, wb))
    return [GaussRat(a, b) for a, b in sorted(reps)]


_ROOT_SEARCH_LIMIT = 10**12


def gaussian_roots(p: Poly) -> tuple[list[GaussRat], Poly]:
    """All roots of p lying in Q(i), with multiplicity, plus rootless quotient.

    Candidate search via Gaussian-integer divisors of the outer coefficients;
    coefficients whose norms exceed a fixed bound make the search give up and
    report no roots (callers treat the quotient as irreducible-for-us).
    """
    if not p:
        raise FieldError("zero polynomial")
    roots: list[GaussRat] = []
    k = p.ord0()
    if k:
        roots.extend([GR_ZERO] * k)
        p = Poly(p.coeffs[k:])
    while p.degree >= 1:
        den_lcm = 1
        for c in p.coeffs:
            den_lcm = den_lcm * c.re.denominator // _gcd(den_lcm, c.re.denominator)
            den_lcm = den_lcm * c.im.denominator // _gcd(den_lcm, c.im.denominator)
        ints = [(int(c.re * den_lcm), int(c.im * den_lcm)) for c in p.coeffs]
        c0, cd = ints[0], ints[-1]
        if (c0[0] ** 2 + c0[1] ** 2 > _ROOT_SEARCH_LIMIT
                or cd[0] ** 2 + cd[1] ** 2 > _ROOT_SEARCH_LIMIT):
            break
        found = None
        for num in _gauss_int_divisors(*c0):
            for den in _gauss_int_divisors(*cd):
                base = num / den
                for unit in (GR_ONE, GR_I, -GR_ONE, -GR_I):
                    cand = base * unit
                    if not p.eval(cand):
                        found = cand
                        break
                if found is not None:
                    break
            if found is not None:
                break
        if found is None:
            break
        roots.append(found)
        p = p.divmod(Poly((-found, GR_ONE)))[0]
    return roots, p


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a if a else 1


# ---------------------------------------------------------------------------
# reduced rational functions in h


class RatFunc:
    """num/den with gcd removed and a monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=P_ONE):
        if not isinstance(num, Poly):
            num = Poly.const(num)
        if not isinstance(den, Poly):
            den = Poly.const(den)
        if not den:
            raise ZeroDivisionError("rational function with zero denominator")
        if not num:
            den = P_ONE
        else:
            g = num.gcd(den)
            if g.degree > 0:
                num = num.divmod(g)[0]
                den = den.divmod(g)[0]
            li = den.lead().inv()
            num, den = num * li, den * li
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, *a):
        raise AttributeError("RatFunc is immutable")

    @staticmethod
    def _coerce(x):
        if isinstance(x, RatFunc):
            return x
        if isinstance(x, (int, Fraction, GaussRat)):
            return RatFunc(Poly.const(x))
        if isinstance(x, Poly):
            return RatFunc(x)
        return None

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inv(self) -> "RatFunc":
        if not self.num:
            raise ZeroDivisionError("inverse of zero")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else self * o.inv()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else o * self.inv()

    def valuation(self) -> int:
        """Order of vanishing at h = 0 (negative for poles).  Raises on 0."""
        return self.num.ord0() - self.den.ord0()

    def is_constant(self) -> bool:
        return self.num.degree <= 0 and self.den.degree <= 0

    def as_const(self) -> GaussRat:
        if not self.is_constant():
            raise FieldError(f"not a constant: {self}")
        return self.num[0] if self.num else GR_ZERO

    def __repr__(self):
        return f"RatFunc({self.num!r}, {self.den!r})"

    def __str__(self):
        if self.den == P_ONE:
            return str(self.num)
        return f"({self.num})/({self.den})"


RF_ZERO = RatFunc(P_ZERO)
RF_ONE = RatFunc(P_ONE)
RF_H = RatFunc(P_H)
