"""One test per acceptance criterion; the run prints a PASS/FAIL line for each."""

import json
import time

from click.testing import CliRunner

from quadidem import (
    Certificate,
    Status,
    build_matrix,
    decide_conjecture,
    fundamental_unit,
    make_context,
    make_elem,
    search_two_idempotent,
    solve_norm_equation,
    transfer_by_unit,
)
from quadidem.cli import EXIT_INPUT, main
from quadidem.errors import InvalidSetting
from quadidem.factorization import construct_norm_minus_p2
from quadidem.ideals import in_Ip, kronecker, prime_status
from quadidem.pell import class_unit
from quadidem.quadring import Mat2

from . import test_properties as props
from .oracles import brute_pell_table, conjecture_oracle

R10 = make_context(10)


def E(x, y=0):
    return make_elem(R10, x, y)


def pair(rows_b, rows_c):
    to = lambda rows: Mat2.of(R10, [[E(*rows[0]), E(*rows[1])], [E(*rows[2]), E(*rows[3])]])
    return to(rows_b), to(rows_c)


def test_criterion_01_explicit_factorization(tmp_path):
    cert = {
        "D": 10, "p": 3, "z": [1, 1, 1], "k": -3,
        "B": [[[2, 2, 1], [7, 1, 1]], [[-6, 0, 1], [-1, -2, 1]]],
        "C": [[[2, -2, 1], [-6, 0, 1]], [[7, -1, 1], [-1, 2, 1]]],
        "method": "explicit", "params": {"conjecture_form": True},
    }
    path = tmp_path / "explicit.json"
    path.write_text(json.dumps(cert))
    r = CliRunner().invoke(main, ["verify", str(path)])
    assert r.exit_code == 0 and "PASS" in r.output


def test_criterion_02_four_more_factorizations():
    target = build_matrix(3, E(1, 1))
    listed = [
        (((2, 5), (17, 2), (-16, 1), (-1, -5)), ((2, -5), (-16, -1), (17, -2), (-1, 5))),
        (((2, -19), (-36, -6), (64, -7), (-1, 19)), ((2, 19), (64, 7), (-36, 6), (-1, -19))),
        (((2, 8), (27, 3), (-26, 2), (-1, -8)), ((2, -8), (-26, -2), (27, -3), (-1, 8))),
        (((2, -4), (-13, -1), (14, -2), (-1, 4)), ((2, -4), (14, 2), (-13, 1), (-1, 4))),
    ]
    failing = {}
    certs = []
    for rows_b, rows_c in listed:
        B, C = pair(rows_b, rows_c)
        cert = Certificate(target, B, C, "explicit", {"conjecture_form": True})
        certs.append(cert)
        if cert.failures():
            failing[str(B)] = cert.failures()
    assert failing == {}
    assert len({str(c.B) for c in certs}) == 4


def test_criterion_03_kronecker_obstruction():
    assert kronecker(10, 7) == -1
    for z1 in (5, -5):
        v = decide_conjecture(build_matrix(3, E(z1, 1)))
        assert v.status == Status.REFUTED_KRONECKER
        assert v.evidence["value"] == -1 and v.evidence["symbol"] == "(10/7)"


def test_criterion_04_mod4_obstruction_and_search():
    target = build_matrix(3, E(1, 2))
    assert decide_conjecture(target).status == Status.REFUTED_MOD4
    t0 = time.perf_counter()
    v = search_two_idempotent(target, 200)
    assert v.status == Status.NOT_FOUND_WITHIN_BOUND
    assert time.perf_counter() - t0 < 60


def test_criterion_05_sqrt10_and_unit_transfer():
    v = decide_conjecture(build_matrix(2, E(0, 1)))
    assert v.status == Status.SATISFIED and v.method == "corp2"
    assert v.certificate.verify()
    u = E(19, 6)
    for n in (1, 2, 3):
        moved = transfer_by_unit(v.certificate, u ** n)
        assert moved.target.z == E(0, 1) * u ** n
        assert moved.verify()


def _norm_elements(ctx, N, limit):
    """All elements of norm N with coordinates at most limit (as x + y*sqrt(D) over den)."""
    D = ctx.D
    out = set()
    lifts = [(1, N)] + ([(2, 4 * N)] if ctx.half_integers else [])
    u = class_unit(ctx)
    for den, rhs in lifts:
        for cls in solve_norm_equation(D, rhs):
            if den == 2 and (cls.rep[0] - cls.rep[1]) % 2:
                continue
            base = make_elem(ctx, cls.rep[0], cls.rep[1], den)
            for step in (u, u.conjugate()):
                z = base
                while max(abs(z.x), abs(z.y)) <= limit:
                    for w in (z, -z, z.conjugate(), -z.conjugate()):
                        out.add(w)
                    z = z * step
    return out


def test_criterion_06_norm_minus_p2_sweep():
    t0 = time.perf_counter()
    checked = 0
    for D in (-5, 2, 3, 10, 13, 15):
        ctx = make_context(D)
        for p in (3, 5, 7, 11, 13):
            if not prime_status(p, ctx).valid_setting:
                continue
            for z in _norm_elements(ctx, -p * p, 10 ** 4):
                if not in_Ip(z, p, ctx):
                    continue
                target = build_matrix(p, z)
                for m in range(-3, 4):
                    assert construct_norm_minus_p2(target, m).verify(), (D, p, str(z), m)
                    checked += 1
    assert checked > 0
    assert time.perf_counter() - t0 < 120


def test_criterion_07_pell():
    classes = solve_norm_equation(10, -10)
    assert len(classes) == 1 and classes[0].rep == (0, 1)
    for D in range(-30, 31):
        if not props_squarefree(D):
            continue
        table = brute_pell_table(D, 200, box=1000)
        for N in range(-200, 201):
            if N == 0:
                continue
            found = table.get(N, set())
            classes = solve_norm_equation(D, N)
            assert bool(found) == bool(classes), (D, N)
            for x, y in found:
                assert any(c.contains(x, y) for c in classes), (D, N, x, y)
    assert fundamental_unit(R10) == E(19, 6)


def props_squarefree(D):
    from .oracles import is_squarefree

    return D not in (0, 1) and is_squarefree(D)


def test_criterion_08_oracle_equivalence(fleet_verdicts):
    disagreements = []
    exhaustive = 0
    for D, p, z1, z2, target, v in fleet_verdicts:
        verdict, _ = conjecture_oracle(p, z1, z2, D)
        sat = v.status == Status.SATISFIED
        if sat:
            assert v.certificate.verify()
        if verdict != "none_in_box":
            exhaustive += 1
        if (verdict == "found") != sat and verdict != "none_in_box":
            disagreements.append((D, p, z1, z2, v.status.value, verdict))
    assert disagreements == []
    assert exhaustive > 500


def test_criterion_09_property_suites():
    props.COUNTS.clear()
    for name in dir(props):
        if name.startswith("test_prop_"):
            getattr(props, name)()
    expected = {"ip_membership", "transpose_coherence", "norm_minus_p2_coprime",
                "norm_minus_4", "florida_round_trip", "params_relations"}
    assert set(props.COUNTS) == expected
    assert all(n >= 500 for n in props.COUNTS.values()), dict(props.COUNTS)


def test_criterion_10_classify_rejects_7_13_2():
    r = CliRunner().invoke(main, ["classify", "10", "7", "13,2"])
    assert r.exit_code == EXIT_INPUT
    assert "not well formed" in r.output
    assert "requires p | norm(z)" in r.output and "129" in r.output
