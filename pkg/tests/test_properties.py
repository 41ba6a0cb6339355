"""Property suites, 500 generated cases each.

COUNTS records how many cases each property actually checked, so the
acceptance module can confirm the volume.
"""

from collections import Counter
from math import gcd

from hypothesis import given, settings
from hypothesis import strategies as st

from quadidem.decision import decide_conjecture, florida_transform
from quadidem.errors import QuadIdemError
from quadidem.factorization import (
    build_matrix,
    _param_elem,
    case_of,
    conjecture_equation,
    lemma31_failures,
    pairing_residual,
    params_ac,
    params_de,
    transpose_cert,
)
from quadidem.ideals import in_Ip, prime_status
from quadidem.pell import class_unit, fundamental_unit, solve_norm_equation
from quadidem.quadring import make_context, make_elem

COUNTS: Counter = Counter()
EXAMPLES = settings(max_examples=500)

SETTING_DS = (-5, 10, 15, -15, 35, 85)
PRIMES = (2, 3, 5, 7, 11, 13)


def _valid_pairs():
    out = []
    for D in SETTING_DS:
        ctx = make_context(D)
        out += [(D, p) for p in PRIMES if prime_status(p, ctx).valid_setting]
    return out


VALID = _valid_pairs()


def _targets(coord=8):
    out = []
    for D, p in VALID:
        ctx = make_context(D)
        for den in ((1, 2) if ctx.half_integers else (1,)):
            for x in range(-coord, coord + 1):
                for y in range(-coord, coord + 1):
                    try:
                        out.append(build_matrix(p, make_elem(ctx, x, y, den)))
                    except (QuadIdemError, ValueError):
                        pass
    return out


TARGETS = _targets()
NONDEGENERATE = [t for t in TARGETS if t.p + t.k != 0]
coords = st.integers(-60, 60)


def _int_divides(p, z):
    """p | z in the maximal order, by hand on (x, y, den)."""
    x, y, den = z.as_triple()
    if not z.ctx.half_integers:
        return x % p == 0 and y % p == 0
    # z/p = (X + Y*sqrt(D))/2 needs integers X, Y of equal parity
    if (2 * x) % (den * p) or (2 * y) % (den * p):
        return False
    return (2 * x // (den * p) - 2 * y // (den * p)) % 2 == 0


# --- membership in I_p ---------------------------------------------------


@EXAMPLES
@given(st.sampled_from(VALID), coords, coords, st.booleans(), st.integers(-6, 6))
def test_prop_ip_membership(pair, x, y, half, j):
    D, p = pair
    ctx = make_context(D)
    den = 2 if half and ctx.half_integers and (x - y) % 2 == 0 else 1
    z = make_elem(ctx, x, y, den)
    expected = z.norm() % p == 0 and not z.is_unit() and not z.is_zero() and not _int_divides(p, z)
    assert in_Ip(z, p, ctx) == expected
    if expected:
        assert z.norm() % p == 0
        assert in_Ip(z.conjugate(), p, ctx)
    # integers, units and integer multiples of units never qualify
    u = fundamental_unit(ctx) if D > 1 else make_elem(ctx, -1, 0)
    uj = u ** abs(j)
    assert not in_Ip(make_elem(ctx, x, 0), p, ctx)
    assert not in_Ip(uj, p, ctx)
    if x:
        assert not in_Ip(uj * make_elem(ctx, x, 0), p, ctx)
    COUNTS["ip_membership"] += 1


# --- transpose coherence -------------------------------------------------


@EXAMPLES
@given(st.sampled_from(TARGETS))
def test_prop_transpose_coherence(t):
    v = decide_conjecture(t)
    w = decide_conjecture(build_matrix(t.p, t.z.conjugate()))
    assert v.status == w.status
    if v.certificate is not None:
        assert transpose_cert(v.certificate).verify()
    COUNTS["transpose_coherence"] += 1


# --- norm -p^2 coordinates are coprime -----------------------------------


def _norm_classes():
    out = []
    for D in (2, 3, 6, 7, 10, 11, 14, 15, -5):
        ctx = make_context(D)
        for p in (3, 5, 7, 11, 13):
            if not prime_status(p, ctx).valid_setting:
                continue
            for cls in solve_norm_equation(D, -p * p):
                out.append((D, p, cls))
    return out


NORM_P2 = _norm_classes()


@EXAMPLES
@given(st.sampled_from(NORM_P2), st.integers(-25, 25), st.booleans(), st.booleans())
def test_prop_norm_minus_p2_coprime(item, j, neg, conj):
    D, p, cls = item
    ctx = make_context(D)
    u = class_unit(ctx)
    x, y = cls.rep
    z = make_elem(ctx, x, y) * (u ** j if j >= 0 else u.conjugate() ** -j)
    if neg:
        z = -z
    if conj:
        z = z.conjugate()
    assert z.norm() == -p * p
    if in_Ip(z, p, ctx):
        assert gcd(z.x, z.y * D) == 1
    else:
        assert _int_divides(p, z)
    COUNTS["norm_minus_p2_coprime"] += 1


# --- norm -4 elements are divisible by 2 ---------------------------------


def _norm4_pool():
    out = []
    for D in (-5, 2, 3, 5, 10, 13, 15):
        ctx = make_context(D)
        for den, N in ((1, -4), (2, -16)):
            if den == 2 and not ctx.half_integers:
                continue
            for cls in solve_norm_equation(D, N):
                out.append((D, den, cls))
    return out


NORM4 = _norm4_pool()


@EXAMPLES
@given(st.sampled_from(NORM4), st.integers(-40, 40), st.booleans())
def test_prop_norm_minus_4_divisible_by_2(item, j, neg):
    D, den, cls = item
    ctx = make_context(D)
    x, y = cls.rep
    u = class_unit(ctx)
    z = make_elem(ctx, x, y, den) * (u ** j if j >= 0 else u.conjugate() ** -j)
    if neg:
        z = -z
    assert z.norm() == -4
    assert _int_divides(2, z)
    COUNTS["norm_minus_4"] += 1


# --- Pell form round trip ------------------------------------------------

big = st.integers(-10 ** 4, 10 ** 4)


@EXAMPLES
@given(st.sampled_from(NONDEGENERATE), big, big)
def test_prop_florida_round_trip(t, x, y):
    eq = conjecture_equation(t)
    form = florida_transform(eq, t)
    X, Y = form.forward(x, y)
    assert form.back(X, Y) == (x, y)
    # exact identity, so zero on one side iff zero on the other
    assert X * X - form.pell_D * Y * Y - form.pell_N == form.L ** 2 * eq(x, y) / eq.a
    assert (eq(x, y) == 0) == form.satisfies(X, Y)
    assert form.back(X + 1, Y) is None or form.L == 1
    COUNTS["florida_round_trip"] += 1


# --- parametrization against the five relations --------------------------


@EXAMPLES
@given(st.sampled_from(TARGETS), coords, coords, coords, coords)
def test_prop_params_match_relations(t, b1, b2, f1, f2):
    case = case_of(t)
    a, c = params_ac((b1, b2), t, case)
    d, e = params_de((f1, f2), t, case)
    b, f = _param_elem(t.ctx, case, b1, b2), _param_elem(t.ctx, case, f1, f2)
    fails = lemma31_failures(a, b, c, d, e, f, t)
    # four relations hold by construction; the fifth is exactly the residual
    assert set(fails) <= {"p = ad + bf"}
    assert ("p = ad + bf" in fails) == (pairing_residual((b1, b2), (f1, f2), t, case) != 0)
    COUNTS["params_relations"] += 1
