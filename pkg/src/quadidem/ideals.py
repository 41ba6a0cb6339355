"""Kronecker symbol, splitting of rational primes, and the I_p(D) / S_z tests."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import InvalidSetting, NotPrime
from .pell import solve_norm_equation
from .quadring import QuadInt, RingContext, divides

_TAB8 = (0, 1, 0, -1, 0, -1, 0, 1)


def kronecker(a: int, b: int) -> int:
    """Kronecker symbol (a/b)."""
    if b == 0:
        return 1 if abs(a) == 1 else 0
    if a % 2 == 0 and b % 2 == 0:
        return 0
    v = 0
    while b % 2 == 0:
        v += 1
        b //= 2
    k = 1 if v % 2 == 0 else _TAB8[a & 7]
    if b < 0:
        b = -b
        if a < 0:
            k = -k
    while True:
        if a == 0:
            return k if b == 1 else 0
        v = 0
        while a % 2 == 0:
            v += 1
            a //= 2
        if v % 2:
            k *= _TAB8[b & 7]
        if a & b & 2:
            k = -k
        r = abs(a)
        a = b % r
        b = r


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    q = 3
    while q * q <= n:
        if n % q == 0:
            return False
        q += 2
    return True


@dataclass(frozen=True)
class PrimeStatus:
    p: int
    D: int
    splitting: str  # "split", "inert" or "ramified"
    irreducible: bool
    prime_in_ring: bool

    @property
    def valid_setting(self) -> bool:
        return self.irreducible and not self.prime_in_ring


def splitting_type(p: int, D: int) -> str:
    if p == 2:
        if D % 2 == 0 or D % 4 == 3:
            return "ramified"
        return "split" if D % 8 == 1 else "inert"
    if D % p == 0:
        return "ramified"
    return "split" if kronecker(D, p) == 1 else "inert"


@lru_cache(maxsize=None)
def _prime_status(p: int, D: int, half: bool) -> PrimeStatus:
    kind = splitting_type(p, D)
    if kind == "inert":
        return PrimeStatus(p, D, kind, irreducible=True, prime_in_ring=True)
    scale = 4 if half else 1
    has_norm_p = any(solve_norm_equation(D, s * scale * p) for s in (1, -1))
    return PrimeStatus(p, D, kind, irreducible=not has_norm_p, prime_in_ring=False)


def prime_status(p: int, ctx: RingContext) -> PrimeStatus:
    if not is_prime(p):
        raise NotPrime(f"{p} is not a rational prime")
    return _prime_status(p, ctx.D, ctx.half_integers)


def require_valid_setting(p: int, ctx: RingContext) -> PrimeStatus:
    st = prime_status(p, ctx)
    if not st.valid_setting:
        if st.prime_in_ring:
            raise InvalidSetting(f"{p} is prime in {ctx} ({st.splitting})")
        raise InvalidSetting(f"{p} is reducible in {ctx}: some element has norm ±{p}")
    return st


def in_Ip(z: QuadInt, p: int, ctx: RingContext | None = None) -> bool:
    """z is a non-unit, p does not divide z, and p divides norm(z)."""
    ctx = ctx or z.ctx
    require_valid_setting(p, ctx)
    if z.is_zero() or z.is_unit():
        return False
    return z.norm() % p == 0 and not divides(QuadInt(ctx, p, 0, 1), z)


def in_Sz(m: QuadInt, z: QuadInt, p: int) -> bool:
    if not in_Ip(z, p):
        raise InvalidSetting(f"{z} is not in I_{p}({z.ctx.D})")
    P = QuadInt(z.ctx, p, 0, 1)
    return not divides(P, m) and divides(P, z * m)
