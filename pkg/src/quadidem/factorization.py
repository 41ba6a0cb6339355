"""The matrix A(p, z), idempotent-pair certificates and their parametrization.

A pair of idempotents B = (a, b; c, 1-a), C = (d, e; f, 1-d) multiplies to
A(p, z) = (p, z; conj(z), k) exactly when five relations hold (see
``RELATIONS``).  Given b, the first two relations pin down a and c; given f,
the last two pin down d and e.  Everything below evaluates those solutions
with exact field arithmetic rather than transcribing closed forms.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import gcd

from .errors import (
    InvalidSetting,
    NormMismatch,
    NormNotDivisible,
    NotAUnit,
    NotInRing,
    OddPrimeRequired,
)
from .ideals import in_Ip, require_valid_setting
from .quadring import Mat2, QuadInt, QuadRational, RingContext, make_context, make_elem

CASES = ("case1", "case2", "case3")

RELATIONS = (
    "p = ad + bf",
    "z(1-a) = kb",
    "conj(z)a = pc",
    "zd = pe",
    "conj(z)(1-d) = kf",
)

CONJECTURE_METHODS = {"norm_minus_p2", "pell_decision", "corp2"}
METHODS = CONJECTURE_METHODS | {"general_search", "unit_transfer", "transpose", "external"}


@dataclass(frozen=True)
class MatrixA:
    p: int
    z: QuadInt
    k: int

    @property
    def ctx(self) -> RingContext:
        return self.z.ctx

    @property
    def matrix(self) -> Mat2:
        return Mat2.of(self.ctx, [[self.p, self.z], [self.z.conjugate(), self.k]])

    def __str__(self):
        return f"A({self.p}, {self.z})"


def build_matrix(p: int, z: QuadInt, ctx: RingContext | None = None) -> MatrixA:
    ctx = ctx or z.ctx
    n = z.norm()
    if n % p:
        raise NormNotDivisible(f"{p} does not divide norm({z}) = {n}; A(p,z) needs p | norm(z)")
    require_valid_setting(p, ctx)
    if not in_Ip(z, p, ctx):
        raise InvalidSetting(f"{z} is not in I_{p}({ctx.D}): <{p}, {z}> is principal")
    return MatrixA(p=p, z=z, k=n // p)


def case_of(target: MatrixA) -> str:
    if not target.ctx.half_integers:
        return "case3"
    return "case1" if target.z.den == 2 else "case2"


def _param_elem(ctx: RingContext, case: str, u1: int, u2: int) -> QuadRational:
    # cases 1 and 2 write b, f, a, ... as (u1 + u2*sqrt(D))/2
    if case == "case3":
        return QuadRational(ctx, u1, u2)
    return QuadRational(ctx, Fraction(u1, 2), Fraction(u2, 2))


def param_coords(x, case: str) -> tuple[Fraction, Fraction]:
    """Coordinates of x in the convention of ``case``."""
    if case == "case3":
        return x.coords
    return 2 * x.coords[0], 2 * x.coords[1]


def params_ac(b, target: MatrixA, case: str | None = None):
    """(a, c) forced by b through z(1-a) = kb and conj(z)a = pc."""
    case = case or case_of(target)
    bb = _param_elem(target.ctx, case, *b)
    zbar = target.z.conjugate()
    a = 1 - bb * zbar / target.p
    c = zbar * a / target.p
    return a, c


def params_de(f, target: MatrixA, case: str | None = None):
    """(d, e) forced by f through conj(z)(1-d) = kf and zd = pe."""
    case = case or case_of(target)
    ff = _param_elem(target.ctx, case, *f)
    d = 1 - ff * target.z / target.p
    e = target.z * d / target.p
    return d, e


def pairing_residual(b, f, target: MatrixA, case: str | None = None) -> QuadRational:
    case = case or case_of(target)
    a, _ = params_ac(b, target, case)
    d, _ = params_de(f, target, case)
    bb = _param_elem(target.ctx, case, *b)
    ff = _param_elem(target.ctx, case, *f)
    return a * d + bb * ff - target.p


@dataclass(frozen=True)
class BinaryQuadratic:
    """a*x^2 + b*x*y + c*y^2 + d*x + e*y + f."""

    a: int
    b: int
    c: int
    d: int
    e: int
    f: int

    def __call__(self, x, y):
        return self.a * x * x + self.b * x * y + self.c * y * y + self.d * x + self.e * y + self.f

    @property
    def coefficients(self) -> tuple[int, ...]:
        return (self.a, self.b, self.c, self.d, self.e, self.f)

    def primitive(self) -> BinaryQuadratic:
        g = reduce(gcd, self.coefficients)
        if g in (0, 1):
            return self
        return BinaryQuadratic(*(v // g for v in self.coefficients))

    def __str__(self):
        terms = []
        for coef, mono in zip(self.coefficients, ("x²", "xy", "y²", "x", "y", "")):
            if coef:
                terms.append(f"{coef}{mono}" if mono else str(coef))
        return (" + ".join(terms) or "0").replace("+ -", "- ") + " = 0"


def conjecture_equation(target: MatrixA, case: str | None = None, reduce_gcd: bool = True) -> BinaryQuadratic:
    """The single quadratic in (b1, b2) behind a conjugate-pair factorization.

    Obtained by interpolating p*den^2*(pairing residual at f = conj(b)) on six
    points, so the coefficients come from the same exact evaluation used
    everywhere else.
    """
    case = case or case_of(target)
    scale = target.p * (1 if case == "case3" else 4)

    def R(x, y):
        r = pairing_residual((x, y), (x, -y), target, case)
        assert r.y == 0
        return r.x * scale

    F = R(0, 0)
    Dx = (R(1, 0) - R(-1, 0)) / 2
    Ax = (R(1, 0) + R(-1, 0)) / 2 - F
    Ey = (R(0, 1) - R(0, -1)) / 2
    Cy = (R(0, 1) + R(0, -1)) / 2 - F
    Bxy = R(1, 1) - Ax - Cy - Dx - Ey - F
    coefs = [Ax, Bxy, Cy, Dx, Ey, F]
    assert all(Fraction(v).denominator == 1 for v in coefs)
    q = BinaryQuadratic(*(int(v) for v in coefs))
    return q.primitive() if reduce_gcd else q


def _ring(x) -> QuadInt:
    return x if isinstance(x, QuadInt) else x.to_quadint()


def lemma31_failures(a, b, c, d, e, f, target: MatrixA) -> list[str]:
    p, z, k = target.p, target.z, target.k
    zb = z.conjugate()
    checks = (
        a * d + b * f == p,
        z * (1 - a) == k * b,
        zb * a == p * c,
        z * d == p * e,
        zb * (1 - d) == k * f,
    )
    return [name for name, ok in zip(RELATIONS, checks) if not ok]


def verify_lemma31(a, b, c, d, e, f, target: MatrixA) -> bool:
    return not lemma31_failures(a, b, c, d, e, f, target)


@dataclass(frozen=True)
class Certificate:
    target: MatrixA
    B: Mat2
    C: Mat2
    method: str
    params: dict = field(default_factory=dict, compare=False)

    @property
    def conjecture_form(self) -> bool:
        return bool(self.params.get("conjecture_form", self.method in CONJECTURE_METHODS))

    def is_conjugate_arrangement(self) -> bool:
        a, b, c, _ = self.B.entries
        d, e, f, _ = self.C.entries
        return d == a.conjugate() and e == c.conjugate() and f == b.conjugate()

    def failures(self) -> list[str]:
        out = []
        if not (self.B.is_integral() and self.C.is_integral()):
            out.append("factor entries are not all in the ring")
        a, b, c, b22 = self.B.entries
        d, e, f, c22 = self.C.entries
        if b22 != 1 - a:
            out.append("shape: B[2][2] != 1 - B[1][1]")
        if c22 != 1 - d:
            out.append("shape: C[2][2] != 1 - C[1][1]")
        out.extend(lemma31_failures(a, b, c, d, e, f, self.target))
        if not self.B.is_idempotent():
            out.append("B is not idempotent")
        if not self.C.is_idempotent():
            out.append("C is not idempotent")
        if self.B @ self.C != self.target.matrix:
            out.append("B*C != A(p,z)")
        if self.conjecture_form and not self.is_conjugate_arrangement():
            out.append("shape: C is not the conjugate arrangement (conj a, conj c; conj b, 1 - conj a) of B")
        return out

    def verify(self) -> bool:
        return not self.failures()

    # serialization ------------------------------------------------------
    def to_json(self) -> dict:
        enc = lambda m: [[e.as_triple() for e in row] for row in m.rows()]
        return {
            "D": self.target.ctx.D,
            "p": self.target.p,
            "z": self.target.z.as_triple(),
            "k": self.target.k,
            "B": enc(self.B),
            "C": enc(self.C),
            "method": self.method,
            "params": self.params,
        }

    @classmethod
    def from_json(cls, data: dict) -> Certificate:
        missing = {"D", "p", "z", "k", "B", "C", "method"} - set(data)
        if missing:
            raise ValueError(f"certificate is missing keys: {sorted(missing)}")
        ctx = make_context(int(data["D"]))
        z = make_elem(ctx, *data["z"])
        target = build_matrix(int(data["p"]), z, ctx)
        if int(data["k"]) != target.k:
            raise ValueError(f"k = {data['k']} does not match norm(z)/p = {target.k}")
        dec = lambda rows: Mat2.of(ctx, [[make_elem(ctx, *e) for e in row] for row in rows])
        return cls(target, dec(data["B"]), dec(data["C"]), data["method"], dict(data.get("params") or {}))


def certificate_from_pair(target: MatrixA, a, b, c, d, e, f, method: str, params: dict) -> Certificate:
    ctx = target.ctx
    a, b, c, d, e, f = (_ring(x) for x in (a, b, c, d, e, f))
    B = Mat2(a, b, c, 1 - a, ctx)
    C = Mat2(d, e, f, 1 - d, ctx)
    return Certificate(target, B, C, method, params)


def certificate_from_b(target: MatrixA, b1: int, b2: int, method: str, params: dict | None = None,
                       case: str | None = None) -> Certificate:
    """Conjugate-pair certificate determined by b (f = conj(b))."""
    case = case or case_of(target)
    a, c = params_ac((b1, b2), target, case)
    d, e = params_de((b1, -b2), target, case)
    bb = _param_elem(target.ctx, case, b1, b2)
    params = dict(params or {}, b1=b1, b2=b2)
    return certificate_from_pair(target, a, bb, c, d, e, bb.conjugate(), method, params)


def ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, x, y) with a*x + b*y = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def construct_norm_minus_p2(target: MatrixA, m: int = 0) -> Certificate:
    """Explicit conjugate-pair factorization when norm(z) = -p^2.

    The linear equation z1*b1 - z2*D*b2 = const has the one-parameter family
    of solutions indexed by m.  In case 2 only even members keep b in the
    ring, so there the family is indexed by 2m.
    """
    p, z, D = target.p, target.z, target.ctx.D
    if z.norm() != -p * p:
        raise NormMismatch(f"norm({z}) = {z.norm()} but the construction needs -{p * p}")
    if p % 2 == 0:
        raise OddPrimeRequired("norm(z) = -4 never occurs for z in I_2(D)")
    case = case_of(target)
    z1, z2 = z.x, z.y
    g, x, y = ext_gcd(z1, -z2 * D)
    if g != 1:
        raise AssertionError(f"gcd(z1, z2*D) = {g} for {z}; expected 1")
    if case == "case3":
        t, mm = p * (1 - p) // 2, m
    elif case == "case1":
        t, mm = 2 * (p - p * p), m
    else:
        t, mm = p - p * p, 2 * m
    b1 = x * t - z2 * mm * D
    b2 = y * t - mm * z1
    return certificate_from_b(target, b1, b2, "norm_minus_p2", {"m": m, "x": x, "y": y}, case)


def transfer_by_unit(cert: Certificate, u: QuadInt) -> Certificate:
    """Certificate for A(p, z*u) obtained by conjugating with diag(1, conj(u))."""
    if not u.is_unit():
        raise NotAUnit(f"{u} is not a unit")
    if u.norm() != 1:
        raise NotAUnit(f"{u} has norm -1; diag(1, conj(u)) is then not a similarity")
    old = cert.target
    target = build_matrix(old.p, old.z * u, old.ctx)
    a, b, c, _ = cert.B.entries
    d, e, f, _ = cert.C.entries
    ub = u.conjugate()
    params = {"unit": u.as_triple(), "from_z": old.z.as_triple(), "conjecture_form": cert.conjecture_form}
    return certificate_from_pair(target, a, b * u, c * ub, d, e * u, f * ub, "unit_transfer", params)


def transpose_cert(cert: Certificate) -> Certificate:
    """Certificate for A(p, conj(z)) = A(p, z)^T, namely (C^T, B^T)."""
    old = cert.target
    target = build_matrix(old.p, old.z.conjugate(), old.ctx)
    params = {"from_z": old.z.as_triple(), "conjecture_form": cert.conjecture_form}
    return Certificate(target, cert.C.transpose(), cert.B.transpose(), "transpose", params)
