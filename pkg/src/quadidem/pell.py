"""Continued fractions, units and the norm equation x^2 - D*y^2 = N.

Solution classes are orbits under multiplication by -1 and by the norm-one
units of the lattice Z + Z*sqrt(D) (the lattice the integer pairs (x, y)
live in).  A pair and its conjugate (x, -y) form separate classes unless a
unit maps one to the other.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import isqrt

from .errors import ImaginaryRing, NotInRing
from .quadring import QuadInt, RingContext, make_context, make_elem


@dataclass(frozen=True)
class CFExpansion:
    a0: int
    period: tuple[int, ...]

    def __str__(self):
        return f"[{self.a0}; ({', '.join(map(str, self.period))})]"


def _floor_quadratic(P: int, Q: int, D: int) -> int:
    # floor((P + sqrt(D)) / Q) for non-square D > 0
    r = isqrt(D)
    if Q > 0:
        return (P + r) // Q
    return -((P + r) // -Q) - 1


def quadratic_cf(P: int, Q: int, D: int) -> CFExpansion:
    """Continued fraction of (P + sqrt(D))/Q, assuming Q | D - P^2.

    Only expansions that are purely periodic after the first term are
    supported, which covers sqrt(D) and (1 + sqrt(D))/2.
    """
    if D <= 0 or isqrt(D) ** 2 == D:
        raise ValueError("D must be a positive non-square")
    if (D - P * P) % Q:
        raise ValueError("Q must divide D - P^2")
    a0 = _floor_quadratic(P, Q, D)
    P = a0 * Q - P
    Q = (D - P * P) // Q
    start = (P, Q)
    period = []
    while True:
        a = _floor_quadratic(P, Q, D)
        period.append(a)
        P = a * Q - P
        Q = (D - P * P) // Q
        if (P, Q) == start:
            return CFExpansion(a0, tuple(period))


def sqrt_cf(D: int) -> CFExpansion:
    return quadratic_cf(0, 1, D)


def _convergent(terms) -> tuple[int, int]:
    h2, h1 = 0, 1
    k2, k1 = 1, 0
    for a in terms:
        h2, h1 = h1, a * h1 + h2
        k2, k1 = k1, a * k1 + k2
    return h1, k1


def torsion_generator(ctx: RingContext) -> QuadInt:
    if ctx.D == -1:
        return make_elem(ctx, 0, 1)
    if ctx.D == -3:
        return make_elem(ctx, 1, 1, 2)
    return make_elem(ctx, -1, 0)


def fundamental_unit(ctx: RingContext) -> QuadInt:
    """Smallest unit > 1 of the maximal order (real quadratic rings only)."""
    D = ctx.D
    if D < 0:
        raise ImaginaryRing(f"{ctx} has a finite unit group", torsion=torsion_generator(ctx))
    P, Q = (1, 2) if ctx.half_integers else (0, 1)
    cf = quadratic_cf(P, Q, D)
    h, k = _convergent((cf.a0,) + cf.period[:-1])
    # eps = h - k * conj(alpha), alpha = (P + sqrt(D))/Q
    return make_elem(ctx, Q * h - k * P, k, Q)


def class_unit(ctx: RingContext) -> QuadInt:
    """Generator (up to sign) of the norm-one units lying in Z + Z*sqrt(D)."""
    if ctx.D < 0:
        return make_elem(ctx, 0, 1) if ctx.D == -1 else make_elem(ctx, -1, 0)
    eps = fundamental_unit(ctx)
    power = eps
    for _ in range(6):
        if power.den == 1 and power.norm() == 1:
            return power
        power = power * eps
    raise AssertionError(f"no norm-one power of {eps} in Z[√{ctx.D}]")  # pragma: no cover


def _mul_pair(s, u, D):
    return (s[0] * u[0] + D * s[1] * u[1], s[0] * u[1] + s[1] * u[0])


@dataclass(frozen=True)
class PellSolutionClass:
    rep: tuple[int, int]
    unit: QuadInt = field(compare=False)
    N: int
    D: int

    def contains(self, x: int, y: int) -> bool:
        return equivalent(self.D, self.N, self.rep, (x, y))

    def members(self, steps: int):
        """Yield rep*u^k for k = 0..steps-1 together with its negative."""
        u = (self.unit.x, self.unit.y)
        s = self.rep
        for _ in range(steps):
            yield s
            yield (-s[0], -s[1])
            s = _mul_pair(s, u, self.D)

    def __str__(self):
        x, y = self.rep
        return f"{x}{'+' if y >= 0 else '-'}{abs(y)}√{self.D}"


def equivalent(D: int, N: int, s, t) -> bool:
    """s ~ t iff t/s is a norm-one unit of Z + Z*sqrt(D)."""
    x, y = s
    u, v = t
    return (u * x - D * v * y) % N == 0 and (v * x - u * y) % N == 0


def _candidates(D: int, N: int, ctx: RingContext):
    if D < 0:
        if N < 0:
            return []
        ymax = isqrt(N // -D)
        ys = range(-ymax, ymax + 1)
    else:
        u = class_unit(ctx)
        x1, y1 = u.x, u.y
        if N > 0:
            ymax = isqrt(y1 * y1 * N // (2 * (x1 + 1)))
        else:
            ymax = isqrt(y1 * y1 * -N // (2 * (x1 - 1)))
        ys = range(0, ymax + 1)
    out = []
    for y in ys:
        t = N + D * y * y
        if t < 0:
            continue
        x = isqrt(t)
        if x * x == t:
            out.append((x, y))
            if x:
                out.append((-x, y))
    return out


def _rep_key(s):
    x, y = s
    return (abs(y), abs(x), y < 0, x < 0)


def solve_norm_equation(D: int, N: int) -> list[PellSolutionClass]:
    """All inequivalent solution classes of x^2 - D*y^2 = N.

    For D > 0 the scan runs up to Nagell's bound for fundamental solutions,
    so an empty result certifies that the equation has no integer solution.
    """
    if N == 0:
        raise ValueError("N must be nonzero")
    ctx = make_context(D)
    unit = class_unit(ctx)
    classes: list[list[tuple[int, int]]] = []
    for s in _candidates(D, N, ctx):
        for group in classes:
            if equivalent(D, N, group[0], s):
                group.append(s)
                break
        else:
            classes.append([s])
    reps = sorted((min(g, key=_rep_key) for g in classes), key=_rep_key)
    return [PellSolutionClass(rep=r, unit=unit, N=N, D=D) for r in reps]


def unit_action(s: tuple[int, int], u: QuadInt, k: int) -> tuple[int, int]:
    """Coordinates of (x + y*sqrt(D)) * u^k."""
    if abs(u.norm()) != 1:
        raise ValueError(f"{u} is not a unit")
    if k < 0:
        u = u.conjugate() * u.norm()
        k = -k
    w = make_elem(u.ctx, s[0], s[1]) * u ** k
    if w.den != 1:
        raise NotInRing(f"{w} leaves the Z + Z*sqrt(D) lattice; use the class unit instead")
    return (w.x, w.y)


def enumerate_class_residues(cls: PellSolutionClass, m: int) -> frozenset:
    """Residues (x mod m, y mod m) of every member of the class."""
    if m < 1:
        raise ValueError("modulus must be positive")
    D = cls.D
    u = (cls.unit.x % m, cls.unit.y % m)
    start = (cls.rep[0] % m, cls.rep[1] % m)
    seen = set()
    s = start
    while True:
        seen.add(s)
        seen.add((-s[0] % m, -s[1] % m))
        s = ((s[0] * u[0] + D * s[1] * u[1]) % m, (s[0] * u[1] + s[1] * u[0]) % m)
        if s == start:
            return frozenset(seen)


def find_member_with_residue(cls: PellSolutionClass, m: int, target) -> tuple[int, int]:
    """An actual class member congruent to ``target`` modulo m."""
    D = cls.D
    u = (cls.unit.x, cls.unit.y)
    s = cls.rep
    start = (s[0] % m, s[1] % m)
    while True:
        for cand in (s, (-s[0], -s[1])):
            if (cand[0] % m, cand[1] % m) == target:
                return cand
        s = _mul_pair(s, u, D)
        if (s[0] % m, s[1] % m) == start:
            raise ValueError(f"residue {target} not attained by the class of {cls.rep}")
