"""Exact scalars: gaussian rationals and sparse multivariate polynomials over them.

Every coefficient in this library is one of these two types.  There is no
floating point anywhere; all identities are decided exactly.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt


class NoExactSquareRoot(ArithmeticError):
    """Raised when an exact square root is requested but does not exist."""


class MismatchedVariables(ValueError):
    """Raised when combining polynomials over different variable sets."""


def _fr(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot coerce {x!r} to an exact rational")


from math import gcd


class GaussRat:
    """A + Bi with A, B exact rationals in lowest terms.

    Stored as an integer triple (a + b i)/q with q > 0 and gcd(a, b, q) = 1,
    so each arithmetic step costs one gcd normalization.
    """

    __slots__ = ("a", "b", "q")

    def __init__(self, re=0, im=0):
        if isinstance(re, int) and isinstance(im, int):
            object.__setattr__(self, "a", re)
            object.__setattr__(self, "b", im)
            object.__setattr__(self, "q", 1)
            return
        fre, fim = _fr(re), _fr(im)
        q = fre.denominator * fim.denominator // gcd(fre.denominator, fim.denominator)
        a = fre.numerator * (q // fre.denominator)
        b = fim.numerator * (q // fim.denominator)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "q", q)

    def __setattr__(self, *_):
        raise AttributeError("GaussRat is immutable")

    @staticmethod
    def _raw(a: int, b: int, q: int) -> "GaussRat":
        if q < 0:
            a, b, q = -a, -b, -q
        g = gcd(gcd(a, b), q)
        if g > 1:
            a //= g
            b //= g
            q //= g
        out = object.__new__(GaussRat)
        object.__setattr__(out, "a", a)
        object.__setattr__(out, "b", b)
        object.__setattr__(out, "q", q)
        return out

    @property
    def re(self) -> Fraction:
        return Fraction(self.a, self.q)

    @property
    def im(self) -> Fraction:
        return Fraction(self.b, self.q)

    # -- ring/field operations -------------------------------------------
    def __add__(self, other):
        if not isinstance(other, GaussRat):
            other = _coerce(other)
            if other is NotImplemented:
                return NotImplemented
        if self.q == other.q:
            return GaussRat._raw(self.a + other.a, self.b + other.b, self.q)
        return GaussRat._raw(
            self.a * other.q + other.a * self.q,
            self.b * other.q + other.b * self.q,
            self.q * other.q,
        )

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, GaussRat):
            other = _coerce(other)
            if other is NotImplemented:
                return NotImplemented
        if self.q == other.q:
            return GaussRat._raw(self.a - other.a, self.b - other.b, self.q)
        return GaussRat._raw(
            self.a * other.q - other.a * self.q,
            self.b * other.q - other.b * self.q,
            self.q * other.q,
        )

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __neg__(self):
        out = object.__new__(GaussRat)
        object.__setattr__(out, "a", -self.a)
        object.__setattr__(out, "b", -self.b)
        object.__setattr__(out, "q", self.q)
        return out

    def __mul__(self, other):
        if not isinstance(other, GaussRat):
            other = _coerce(other)
            if other is NotImplemented:
                return NotImplemented
        a, b, c, d = self.a, self.b, other.a, other.b
        if b == 0 and d == 0:
            return GaussRat._raw(a * c, 0, self.q * other.q)
        return GaussRat._raw(a * c - b * d, a * d + b * c, self.q * other.q)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, GaussRat):
            other = _coerce(other)
            if other is NotImplemented:
                return NotImplemented
        c, d = other.a, other.b
        n = c * c + d * d
        if n == 0:
            raise ZeroDivisionError("division by zero gaussian rational")
        a, b = self.a, self.b
        return GaussRat._raw(
            other.q * (a * c + b * d), other.q * (b * c - a * d), self.q * n
        )

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __pow__(self, n: int):
        if n < 0:
            return (ONE / self) ** (-n)
        out, base = ONE, self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conj(self) -> "GaussRat":
        out = object.__new__(GaussRat)
        object.__setattr__(out, "a", self.a)
        object.__setattr__(out, "b", -self.b)
        object.__setattr__(out, "q", self.q)
        return out

    # -- predicates -------------------------------------------------------
    def __bool__(self):
        return self.a != 0 or self.b != 0

    def __eq__(self, other):
        if isinstance(other, Poly):
            return NotImplemented
        if not isinstance(other, GaussRat):
            other = _coerce(other)
            if other is NotImplemented:
                return NotImplemented
        return self.a == other.a and self.b == other.b and self.q == other.q

    def __hash__(self):
        return hash((self.a, self.b, self.q))

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    # -- constant-polynomial interface -------------------------------------
    # lets mixed GaussRat/Poly coefficient collections share one code path
    def diff(self, name: str) -> "GaussRat":
        return ZERO

    def eval(self, point: dict) -> "GaussRat":
        return self

    def total_degree(self) -> int:
        return 0

    @property
    def is_const(self) -> bool:
        return True

    def const_value(self) -> "GaussRat":
        return self

    def __repr__(self):
        return gauss_str(self)


def _coerce(x):
    if isinstance(x, GaussRat):
        return x
    if isinstance(x, int):
        return GaussRat(x, 0)
    if isinstance(x, Fraction):
        return GaussRat._raw(x.numerator, 0, x.denominator)
    return NotImplemented


ZERO = GaussRat(0)
ONE = GaussRat(1)
IUNIT = GaussRat(0, 1)
HALF = GaussRat(Fraction(1, 2))


def gauss_str(g: GaussRat) -> str:
    """Render in the CLI scalar grammar, e.g. '1/2+1/3i'."""
    if not g:
        return "0"
    parts = []
    if g.re:
        parts.append(str(g.re))
    if g.im:
        s = str(g.im)
        if s == "1":
            s = ""
        elif s == "-1":
            s = "-"
        s += "i"
        if parts and not s.startswith("-"):
            parts.append("+" + s)
        else:
            parts.append(s)
    return "".join(parts)


def _sqrt_fraction(q: Fraction) -> Fraction:
    if q < 0:
        raise NoExactSquareRoot(f"{q} is negative")
    num, den = q.numerator, q.denominator
    rn, rd = isqrt(num), isqrt(den)
    if rn * rn != num or rd * rd != den:
        raise NoExactSquareRoot(f"{q} is not a perfect square")
    return Fraction(rn, rd)


def sqrt_exact(g: GaussRat) -> GaussRat:
    """Exact square root in Q(i), or NoExactSquareRoot.

    For a+bi solves (c+di)^2 = a+bi using the norm: c^2 = (a + |z|)/2.
    """
    if not g:
        return ZERO
    if g.im == 0:
        if g.re > 0:
            return GaussRat(_sqrt_fraction(g.re))
        return GaussRat(0, _sqrt_fraction(-g.re))
    norm = _sqrt_fraction(g.re * g.re + g.im * g.im)
    c2 = (g.re + norm) / 2
    c = _sqrt_fraction(c2)
    if c == 0:
        raise NoExactSquareRoot(f"{g} has no gaussian-rational square root")
    d = g.im / (2 * c)
    root = GaussRat(c, d)
    if root * root != g:
        raise NoExactSquareRoot(f"{g} has no gaussian-rational square root")
    return root


class Poly:
    """Sparse polynomial over GaussRat in named chart variables.

    Terms map exponent tuples to nonzero coefficients.  Variables are real:
    conjugation only conjugates coefficients.  There is no division.
    """

    __slots__ = ("vars", "terms")

    def __init__(self, vars: tuple, terms: dict):
        object.__setattr__(self, "vars", tuple(vars))
        object.__setattr__(self, "terms", {e: c for e, c in terms.items() if c})

    def __setattr__(self, *_):
        raise AttributeError("Poly is immutable")

    # -- constructors -----------------------------------------------------
    @classmethod
    def const(cls, vars, c) -> "Poly":
        c = c if isinstance(c, GaussRat) else GaussRat(c)
        zero = (0,) * len(vars)
        return cls(vars, {zero: c} if c else {})

    @classmethod
    def var(cls, vars, name) -> "Poly":
        vars = tuple(vars)
        if name not in vars:
            raise MismatchedVariables(f"{name!r} is not a chart variable of {vars}")
        e = tuple(1 if v == name else 0 for v in vars)
        return cls(vars, {e: ONE})

    @classmethod
    def zero(cls, vars) -> "Poly":
        return cls(vars, {})

    # -- helpers -----------------------------------------------------------
    def _lift(self, other):
        if isinstance(other, Poly):
            if other.vars != self.vars:
                raise MismatchedVariables(
                    f"polynomials over {self.vars} and {other.vars} cannot be combined"
                )
            return other
        g = _coerce(other)
        if g is NotImplemented:
            return NotImplemented
        return Poly.const(self.vars, g)

    # -- ring operations ----------------------------------------------------
    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, ZERO) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return Poly(self.vars, out)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return Poly(self.vars, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, ZERO) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return Poly(self.vars, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = Poly.const(self.vars, ONE)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conj(self) -> "Poly":
        return Poly(self.vars, {e: c.conj() for e, c in self.terms.items()})

    # -- calculus ------------------------------------------------------------
    def diff(self, name: str) -> "Poly":
        """Formal partial derivative."""
        i = self.vars.index(name)
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                e2 = e[:i] + (e[i] - 1,) + e[i + 1 :]
                out[e2] = out.get(e2, ZERO) + GaussRat(e[i]) * c
        return Poly(self.vars, out)

    def eval(self, point: dict) -> GaussRat:
        """Substitute gaussian-rational coordinates for every variable."""
        vals = []
        for v in self.vars:
            if v not in point:
                raise MismatchedVariables(f"no value given for {v!r}")
            x = point[v]
            vals.append(x if isinstance(x, GaussRat) else GaussRat(x))
        acc = ZERO
        for e, c in self.terms.items():
            t = c
            for x, k in zip(vals, e):
                if k:
                    t = t * x**k
            acc = acc + t
        return acc

    def subs_into(self, target_vars: tuple, mapping: dict) -> "Poly":
        """Substitute variables by polynomials over a (possibly new) chart.

        Variables absent from `mapping` must exist in `target_vars` and map to
        themselves.
        """
        target_vars = tuple(target_vars)
        images = []
        for v in self.vars:
            if v in mapping:
                img = mapping[v]
                if not isinstance(img, Poly):
                    img = Poly.const(target_vars, img)
                elif img.vars != target_vars:
                    raise MismatchedVariables("substitution image over wrong chart")
            else:
                img = Poly.var(target_vars, v)
            images.append(img)
        acc = Poly.zero(target_vars)
        for e, c in self.terms.items():
            t = Poly.const(target_vars, c)
            for img, k in zip(images, e):
                if k:
                    t = t * img**k
            acc = acc + t
        return acc

    # -- predicates ------------------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.vars == other.vars and self.terms == other.terms
        g = _coerce(other)
        if g is NotImplemented:
            return NotImplemented
        return self.terms == Poly.const(self.vars, g).terms

    @property
    def is_const(self) -> bool:
        return all(not any(e) for e in self.terms)

    def const_value(self) -> GaussRat:
        if not self.terms:
            return ZERO
        if not self.is_const:
            raise ValueError(f"{self!r} is not constant")
        return next(iter(self.terms.values()))

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def __repr__(self):
        return poly_str(self)


def poly_str(p: Poly) -> str:
    if not p.terms:
        return "0"
    bits = []
    for e, c in sorted(p.terms.items(), key=lambda kv: (sum(kv[0]), kv[0]), reverse=True):
        mono = "*".join(
            v if k == 1 else f"{v}^{k}" for v, k in zip(p.vars, e) if k
        )
        cs = gauss_str(c)
        if mono:
            if cs == "1":
                term = mono
            elif cs == "-1":
                term = "-" + mono
            elif ("+" in cs[1:]) or ("-" in cs[1:]):
                term = f"({cs})*{mono}"
            else:
                term = f"{cs}*{mono}"
        else:
            term = cs if ("+" not in cs[1:] and "-" not in cs[1:]) else f"({cs})"
        if bits and not term.startswith("-"):
            bits.append("+ " + term)
        elif bits:
            bits.append("- " + term[1:])
        else:
            bits.append(term)
    return " ".join(bits)


def as_gauss(x) -> GaussRat:
    """Coerce a scalar to a constant GaussRat, rejecting genuine polynomials."""
    if isinstance(x, GaussRat):
        return x
    if isinstance(x, Poly):
        return x.const_value()
    g = _coerce(x)
    if g is NotImplemented:
        raise TypeError(f"not a scalar: {x!r}")
    return g


def conj_scalar(x):
    return x.conj()


def scalar_is_zero(x) -> bool:
    return not x
