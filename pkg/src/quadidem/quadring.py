"""Exact arithmetic in the maximal order of Q(sqrt(D)) and 2x2 matrices over it.

Elements of the ring are stored as ``(x + y*sqrt(D)) / den`` with ``den`` in
{1, 2}; the half-integer form only exists when D = 1 (mod 4).  Field elements
(``QuadRational``) carry two ``Fraction`` coordinates.  Nothing here ever
touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ContextMismatch, DegenerateD, NotDivisible, NotInRing, NotSquareFree


def is_square_free(n: int) -> bool:
    n = abs(n)
    if n == 0:
        return False
    q = 2
    while q * q <= n:
        if n % (q * q) == 0:
            return False
        if n % q == 0:
            n //= q
        q += 1 if q == 2 else 2
    return True


@dataclass(frozen=True)
class RingContext:
    D: int
    d_mod4: int
    half_integers: bool

    def __str__(self) -> str:
        return f"Z[√{self.D}]"

    @property
    def basis_form(self) -> str:
        if self.half_integers:
            return f"(a+b√{self.D})/2, a≡b mod 2"
        return f"a+b√{self.D}"

    def elem(self, x: int, y: int = 0, den: int = 1) -> QuadInt:
        return make_elem(self, x, y, den)

    def rational(self, x, y=0) -> QuadRational:
        return QuadRational(self, Fraction(x), Fraction(y))

    @property
    def zero(self) -> QuadInt:
        return QuadInt(self, 0, 0, 1)

    @property
    def one(self) -> QuadInt:
        return QuadInt(self, 1, 0, 1)


def make_context(D: int) -> RingContext:
    if D in (0, 1):
        raise DegenerateD(f"D={D} does not define a quadratic ring")
    if not is_square_free(D):
        raise NotSquareFree(f"D={D} is divisible by the square of a prime")
    r = D % 4
    return RingContext(D=D, d_mod4=r, half_integers=(r == 1))


def in_ring(ctx: RingContext, x, y) -> bool:
    """Membership of x + y*sqrt(D) (rational coordinates) in the maximal order.

    Every integrality test in the package funnels through here.
    """
    x2, y2 = 2 * Fraction(x), 2 * Fraction(y)
    if x2.denominator != 1 or y2.denominator != 1:
        return False
    X, Y = x2.numerator, y2.numerator
    if X % 2 == 0 and Y % 2 == 0:
        return True
    return ctx.half_integers and X % 2 == 1 and Y % 2 == 1


def _canonical(ctx: RingContext, X: int, Y: int, den: int) -> QuadInt:
    while den > 1 and X % 2 == 0 and Y % 2 == 0:
        X //= 2
        Y //= 2
        den //= 2
    if den == 1:
        return QuadInt(ctx, X, Y, 1)
    if den == 2 and ctx.half_integers and X % 2 == 1 and Y % 2 == 1:
        return QuadInt(ctx, X, Y, 2)
    raise NotInRing(f"({X}+{Y}√{ctx.D})/{den} is not in {ctx}")


def make_elem(ctx: RingContext, x: int, y: int = 0, den: int = 1) -> QuadInt:
    if den not in (1, 2):
        raise NotInRing(f"denominator {den} not allowed (must be 1 or 2)")
    return _canonical(ctx, int(x), int(y), den)


def _fmt(x, y, D) -> str:
    if y == 0:
        return str(x)
    root = f"√{D}" if D > 0 else f"√({D})"
    if y == 1:
        ys = root
    elif y == -1:
        ys = "-" + root
    else:
        ys = f"{y}{root}"
    if x == 0:
        return ys
    return f"{x}{'+' if y > 0 else ''}{ys}"


def _check(a, b) -> None:
    if a.ctx != b.ctx:
        raise ContextMismatch(f"elements of {a.ctx} and {b.ctx} cannot be combined")


class QuadInt:
    """An element (x + y*sqrt(D))/den of the maximal order, den in {1, 2}."""

    __slots__ = ("ctx", "x", "y", "den")

    def __init__(self, ctx: RingContext, x: int, y: int, den: int = 1):
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("QuadInt is immutable")

    def __reduce__(self):
        return (QuadInt, (self.ctx, self.x, self.y, self.den))

    # coordinates -------------------------------------------------------
    @property
    def coords(self) -> tuple[Fraction, Fraction]:
        return Fraction(self.x, self.den), Fraction(self.y, self.den)

    def half_coords(self) -> tuple[int, int]:
        """Numerators over 2: self = (u + v*sqrt(D))/2."""
        k = 2 // self.den
        return self.x * k, self.y * k

    def as_triple(self) -> list[int]:
        return [self.x, self.y, self.den]

    def to_rational(self) -> QuadRational:
        return QuadRational(self.ctx, *self.coords)

    # arithmetic --------------------------------------------------------
    def _lift(self, other):
        if isinstance(other, int):
            return QuadInt(self.ctx, other, 0, 1)
        if isinstance(other, QuadInt):
            _check(self, other)
            return other
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            if isinstance(other, (QuadRational, Fraction)):
                return self.to_rational() + other
            return NotImplemented
        if self.den == o.den:
            return _canonical(self.ctx, self.x + o.x, self.y + o.y, self.den)
        ks, ko = 2 // self.den, 2 // o.den
        return _canonical(self.ctx, self.x * ks + o.x * ko, self.y * ks + o.y * ko, 2)

    __radd__ = __add__

    def __neg__(self):
        return QuadInt(self.ctx, -self.x, -self.y, self.den)

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            if isinstance(other, (QuadRational, Fraction)):
                return self.to_rational() - other
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            if isinstance(other, (QuadRational, Fraction)):
                return self.to_rational() * other
            return NotImplemented
        D = self.ctx.D
        return _canonical(
            self.ctx,
            self.x * o.x + D * self.y * o.y,
            self.x * o.y + self.y * o.x,
            self.den * o.den,
        )

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.to_rational() ** n
        result, base = self.ctx.one, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __truediv__(self, other):
        return self.to_rational() / other

    def __rtruediv__(self, other):
        return QuadRational(self.ctx, Fraction(other), Fraction(0)) / self

    def conjugate(self) -> QuadInt:
        return QuadInt(self.ctx, self.x, -self.y, self.den)

    def norm(self) -> int:
        return (self.x * self.x - self.ctx.D * self.y * self.y) // (self.den * self.den)

    def trace(self) -> int:
        return 2 * self.x // self.den

    def is_unit(self) -> bool:
        return abs(self.norm()) == 1

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0

    # comparison --------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, int):
            return self.y == 0 and self.den == 1 and self.x == other
        if isinstance(other, (QuadInt, QuadRational)):
            return self.ctx == other.ctx and self.coords == other.coords
        if isinstance(other, Fraction):
            return self.y == 0 and Fraction(self.x, self.den) == other
        return NotImplemented

    def __hash__(self):
        return hash((self.ctx.D,) + self.coords)

    def __repr__(self):
        return f"QuadInt(D={self.ctx.D}, x={self.x}, y={self.y}, den={self.den})"

    def __str__(self):
        s = _fmt(self.x, self.y, self.ctx.D)
        return f"({s})/2" if self.den == 2 else s


class QuadRational:
    """x + y*sqrt(D) with exact rational coordinates."""

    __slots__ = ("ctx", "x", "y")

    def __init__(self, ctx: RingContext, x, y=0):
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "x", Fraction(x))
        object.__setattr__(self, "y", Fraction(y))

    def __setattr__(self, name, value):
        raise AttributeError("QuadRational is immutable")

    def __reduce__(self):
        return (QuadRational, (self.ctx, self.x, self.y))

    @property
    def coords(self) -> tuple[Fraction, Fraction]:
        return self.x, self.y

    def _lift(self, other):
        if isinstance(other, (int, Fraction)):
            return QuadRational(self.ctx, other, 0)
        if isinstance(other, QuadInt):
            _check(self, other)
            return other.to_rational()
        if isinstance(other, QuadRational):
            _check(self, other)
            return other
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return QuadRational(self.ctx, self.x + o.x, self.y + o.y)

    __radd__ = __add__

    def __neg__(self):
        return QuadRational(self.ctx, -self.x, -self.y)

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return QuadRational(self.ctx, self.x - o.x, self.y - o.y)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        D = self.ctx.D
        return QuadRational(self.ctx, self.x * o.x + D * self.y * o.y, self.x * o.y + self.y * o.x)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(√D)")
        num = self * o.conjugate()
        return QuadRational(self.ctx, num.x / n, num.y / n)

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, n: int):
        if n < 0:
            return QuadRational(self.ctx, 1) / (self ** (-n))
        result, base = QuadRational(self.ctx, 1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self) -> QuadRational:
        return QuadRational(self.ctx, self.x, -self.y)

    def norm(self) -> Fraction:
        return self.x * self.x - self.ctx.D * self.y * self.y

    def trace(self) -> Fraction:
        return 2 * self.x

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0

    def is_integral(self) -> bool:
        return in_ring(self.ctx, self.x, self.y)

    def to_quadint(self) -> QuadInt:
        if not self.is_integral():
            raise NotInRing(f"{self} is not in {self.ctx}")
        return _canonical(self.ctx, (2 * self.x).numerator, (2 * self.y).numerator, 2)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.y == 0 and self.x == other
        if isinstance(other, (QuadInt, QuadRational)):
            return self.ctx == other.ctx and self.coords == other.coords
        return NotImplemented

    def __hash__(self):
        return hash((self.ctx.D, self.x, self.y))

    def __repr__(self):
        return f"QuadRational(D={self.ctx.D}, x={self.x}, y={self.y})"

    def __str__(self):
        return _fmt(self.x, self.y, self.ctx.D)


# functional surface ------------------------------------------------------

def add(a, b):
    return a + b


def sub(a, b):
    return a - b


def mul(a, b):
    return a * b


def neg(a):
    return -a


def conjugate(a):
    return a.conjugate()


def norm(a):
    return a.norm()


def trace(a):
    return a.trace()


def is_unit(a: QuadInt) -> bool:
    return a.is_unit()


def divides(w: QuadInt, a: QuadInt) -> bool:
    """True iff a/w lies in the ring."""
    if isinstance(w, int):
        w = QuadInt(a.ctx, w, 0, 1)
    if isinstance(a, int):
        a = QuadInt(w.ctx, a, 0, 1)
    if w.is_zero():
        raise ZeroDivisionError("divisor must be nonzero")
    return (a / w).is_integral()


def div_exact(w: QuadInt, a: QuadInt) -> QuadInt:
    if isinstance(w, int):
        w = QuadInt(a.ctx, w, 0, 1)
    if isinstance(a, int):
        a = QuadInt(w.ctx, a, 0, 1)
    q = a / w
    if not q.is_integral():
        raise NotDivisible(f"{w} does not divide {a} in {a.ctx}")
    return q.to_quadint()


# 2x2 matrices ------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Mat2:
    """[[a, b], [c, d]] with exact entries (int, QuadInt or QuadRational)."""

    a: object
    b: object
    c: object
    d: object
    ring: RingContext

    @classmethod
    def of(cls, ring: RingContext, rows) -> Mat2:
        (a, b), (c, d) = rows
        lift = lambda e: QuadInt(ring, e, 0, 1) if isinstance(e, int) else e
        return cls(lift(a), lift(b), lift(c), lift(d), ring)

    @classmethod
    def identity(cls, ring: RingContext) -> Mat2:
        return cls.of(ring, [[1, 0], [0, 1]])

    @property
    def entries(self) -> tuple:
        return (self.a, self.b, self.c, self.d)

    def rows(self) -> list[list]:
        return [[self.a, self.b], [self.c, self.d]]

    def __matmul__(self, other: Mat2) -> Mat2:
        return Mat2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
            self.ring,
        )

    def __eq__(self, other):
        if not isinstance(other, Mat2):
            return NotImplemented
        return all(x == y for x, y in zip(self.entries, other.entries))

    def __hash__(self):
        return hash(self.entries)

    def transpose(self) -> Mat2:
        return Mat2(self.a, self.c, self.b, self.d, self.ring)

    def conjugate(self) -> Mat2:
        return Mat2(*(e.conjugate() for e in self.entries), self.ring)

    def det(self):
        return self.a * self.d - self.b * self.c

    def trace(self):
        return self.a + self.d

    def is_idempotent(self) -> bool:
        return self @ self == self

    def is_integral(self) -> bool:
        return all(isinstance(e, QuadInt) or e.is_integral() for e in self.entries)

    def __str__(self):
        return f"[[{self.a}, {self.b}], [{self.c}, {self.d}]]"


def mat_mul(m: Mat2, n: Mat2) -> Mat2:
    return m @ n


def mat_transpose(m: Mat2) -> Mat2:
    return m.transpose()


def is_idempotent(m: Mat2) -> bool:
    return m.is_idempotent()
