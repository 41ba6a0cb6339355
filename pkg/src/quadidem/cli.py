"""Command-line front end.

Exit codes: 0 for any computed answer (refutations included), 1 when a
certificate fails verification, 2 for invalid or malformed input.
"""

from __future__ import annotations

import csv
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import click

from .decision import Verdict, decide_conjecture, search_two_idempotent
from .errors import NormNotDivisible, QuadIdemError
from .factorization import Certificate, build_matrix
from .ideals import in_Ip, is_prime, prime_status
from .pell import class_unit, fundamental_unit, solve_norm_equation, torsion_generator
from .quadring import make_context, make_elem

EXIT_FAIL = 1
EXIT_INPUT = 2

SURVEY_COLUMNS = ["D", "p", "z1", "z2", "den", "norm", "k", "status", "method", "certificate_path", "error"]

_ARGS = {"ignore_unknown_options": True}  # lets negative numbers through as arguments


class InputError(click.ClickException):
    exit_code = EXIT_INPUT

    def __init__(self, exc: Exception):
        code = getattr(exc, "code", "invalid_input")
        super().__init__(f"[{code}] {exc}")


def _parse_z(ctx, text: str):
    try:
        parts = [int(v) for v in text.split(",")]
    except ValueError:
        raise click.BadParameter(f"expected z1,z2[,den], got {text!r}")
    if len(parts) not in (2, 3):
        raise click.BadParameter(f"expected z1,z2[,den], got {text!r}")
    return make_elem(ctx, *parts)


def _target(D: int, p: int, z: str):
    try:
        ctx = make_context(D)
        return build_matrix(p, _parse_z(ctx, z), ctx)
    except QuadIdemError as exc:
        raise InputError(exc)


def _emit(data, as_json: bool, text: str):
    click.echo(json.dumps(data, indent=2) if as_json else text)


def _write_cert(cert: Certificate, path: str):
    Path(path).write_text(json.dumps(cert.to_json(), indent=2) + "\n")


def _render_verdict(target, v: Verdict) -> str:
    lines = [f"{target}: {v.status}" + (f" ({v.method})" if v.method else "")]
    if v.certificate is not None:
        lines.append(f"  B = {v.certificate.B}")
        lines.append(f"  C = {v.certificate.C}")
    for key, val in v.evidence.items():
        if key != "rule":
            lines.append(f"  {key}: {val}")
    return "\n".join(lines)


@click.group()
@click.version_option(package_name="artifact")
def main():
    """Idempotent factorizations of A(p, z) over quadratic integer rings."""


@main.command(context_settings=_ARGS)
@click.argument("D", type=int)
@click.option("--json", "as_json", is_flag=True)
def ring(d, as_json):
    """Describe the maximal order of Q(sqrt(D))."""
    try:
        ctx = make_context(d)
    except QuadIdemError as exc:
        raise InputError(exc)
    data = {"D": d, "ring": str(ctx), "basis": ctx.basis_form, "square_free": True}
    lines = [f"ring: {ctx}", f"basis: {ctx.basis_form}", "square-free: yes"]
    if d > 1:
        eps, u = fundamental_unit(ctx), class_unit(ctx)
        data.update(fundamental_unit=eps.as_triple(), fundamental_unit_norm=eps.norm(),
                    norm_one_unit=u.as_triple())
        lines.append(f"fundamental unit: {eps} (norm {eps.norm()})")
        lines.append(f"norm-one unit of Z+Z√{d}: {u}")
    else:
        tors = torsion_generator(ctx)
        data["torsion_generator"] = tors.as_triple()
        lines.append(f"unit group is finite, generated by {tors}")
    _emit(data, as_json, "\n".join(lines))


@main.command(context_settings=_ARGS)
@click.argument("D", type=int)
@click.argument("P", type=int)
@click.argument("Z")
@click.option("--json", "as_json", is_flag=True)
def classify(d, p, z, as_json):
    """Report whether A(p, z) is well formed in the required setting."""
    try:
        ctx = make_context(d)
        zz = _parse_z(ctx, z)
    except QuadIdemError as exc:
        raise InputError(exc)
    if not is_prime(p):
        raise InputError(ValueError(f"{p} is not a rational prime"))
    n = zz.norm()
    st = prime_status(p, ctx)
    errors = []
    if n % p:
        errors.append({"code": NormNotDivisible.code,
                       "message": f"A(p,z) requires p | norm(z), but {p} does not divide norm({zz}) = {n}"})
    if not st.valid_setting:
        why = f"{p} is prime in {ctx} ({st.splitting})" if st.prime_in_ring else f"{p} is reducible in {ctx}"
        errors.append({"code": "invalid_setting", "message": f"{why}: need p irreducible but not prime"})
    member = None
    if st.valid_setting:
        member = in_Ip(zz, p, ctx)
        if not member:
            errors.append({"code": "not_in_Ip", "message": f"{zz} is not in I_{p}({d}): <{p}, z> is principal"})
    data = {
        "D": d, "p": p, "z": zz.as_triple(), "norm": n, "k": n // p if n % p == 0 else None,
        "prime_status": {"splitting": st.splitting, "irreducible": st.irreducible,
                         "prime": st.prime_in_ring, "valid_setting": st.valid_setting},
        "in_Ip": member, "well_formed": not errors, "errors": errors,
    }
    lines = [
        f"D = {d}, p = {p}, z = {zz}",
        f"norm(z) = {n}" + (f", k = {n // p}" if n % p == 0 else ""),
        f"{p} is {st.splitting}; irreducible: {st.irreducible}; prime: {st.prime_in_ring}",
        f"valid setting: {st.valid_setting}",
    ]
    if member is not None:
        lines.append(f"z in I_{p}({d}): {member}")
    lines += [f"error [{e['code']}]: {e['message']}" for e in errors]
    lines.append("A(p,z) is well formed" if not errors else "A(p,z) is not well formed")
    _emit(data, as_json, "\n".join(lines))
    if errors:
        sys.exit(EXIT_INPUT)


def _verdict_command(v: Verdict, target, as_json: bool, cert_path):
    if cert_path and v.certificate is not None:
        _write_cert(v.certificate, cert_path)
    _emit(v.to_json(), as_json, _render_verdict(target, v))


@main.command(context_settings=_ARGS)
@click.argument("D", type=int)
@click.argument("P", type=int)
@click.argument("Z")
@click.option("--m", "m", type=int, default=0, show_default=True, help="free parameter for norm(z) = -p^2")
@click.option("--json", "as_json", is_flag=True)
@click.option("--cert", "cert_path", type=click.Path(dir_okay=False), help="write the certificate here")
def conjecture(d, p, z, m, as_json, cert_path):
    """Decide whether A(p, z) = B * C with C built from the conjugates of B."""
    target = _target(d, p, z)
    _verdict_command(decide_conjecture(target, m), target, as_json, cert_path)


@main.command(context_settings=_ARGS)
@click.argument("D", type=int)
@click.argument("P", type=int)
@click.argument("Z")
@click.option("--bound", type=int, default=200, show_default=True)
@click.option("--json", "as_json", is_flag=True)
@click.option("--cert", "cert_path", type=click.Path(dir_okay=False))
def factor(d, p, z, bound, as_json, cert_path):
    """Search for any product of two idempotents equal to A(p, z)."""
    if bound < 1:
        raise click.BadParameter("bound must be at least 1")
    target = _target(d, p, z)
    _verdict_command(search_two_idempotent(target, bound), target, as_json, cert_path)


@main.command()
@click.argument("cert_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--json", "as_json", is_flag=True)
def verify(cert_file, as_json):
    """Check a certificate file relation by relation."""
    try:
        cert = Certificate.from_json(json.loads(Path(cert_file).read_text()))
    except json.JSONDecodeError as exc:
        raise InputError(ValueError(f"parse error: {exc}"))
    except (ValueError, TypeError, KeyError) as exc:
        raise InputError(exc)
    failures = cert.failures()
    data = {"target": str(cert.target), "method": cert.method, "pass": not failures, "failures": failures}
    text = [f"{cert.target} [{cert.method}]: {'PASS' if not failures else 'FAIL'}"]
    text += [f"  failed: {f}" for f in failures]
    _emit(data, as_json, "\n".join(text))
    if failures:
        sys.exit(EXIT_FAIL)


@main.command(context_settings=_ARGS)
@click.argument("D", type=int)
@click.argument("N", type=int)
@click.option("--json", "as_json", is_flag=True)
def pell(d, n, as_json):
    """Solution classes of x^2 - D*y^2 = N."""
    try:
        classes = solve_norm_equation(d, n)
        unit = class_unit(make_context(d))
    except (QuadIdemError, ValueError) as exc:
        raise InputError(exc)
    data = {"D": d, "N": n, "unit": unit.as_triple(), "classes": [list(c.rep) for c in classes]}
    lines = [f"x^2 - ({d})y^2 = {n}: {len(classes)} class(es), unit {unit}"]
    lines += [f"  class of ({c.rep[0]}, {c.rep[1]})" for c in classes]
    if n == 1 and d > 0:
        data["fundamental_solution"] = [unit.x, unit.y]
        lines.append(f"  fundamental solution: ({unit.x}, {unit.y})")
    _emit(data, as_json, "\n".join(lines))


# --- survey ---------------------------------------------------------------


def _primes_upto(n: int):
    return [q for q in range(2, n + 1) if is_prime(q)]


def survey_instances(d_list, p_max: int, coord_max: int):
    """(D, p, x, y, den) for every valid instance in the box, or an error tuple."""
    for D in d_list:
        try:
            ctx = make_context(D)
        except QuadIdemError as exc:
            yield ("error", D, exc.code, str(exc))
            continue
        for p in _primes_upto(p_max):
            if not prime_status(p, ctx).valid_setting:
                continue
            dens = (1, 2) if ctx.half_integers else (1,)
            for den in dens:
                for x in range(-coord_max, coord_max + 1):
                    for y in range(-coord_max, coord_max + 1):
                        if den == 2 and (x % 2 == 0 or y % 2 == 0):
                            continue
                        z = make_elem(ctx, x, y, den)
                        if z.norm() % p == 0 and in_Ip(z, p, ctx):
                            yield ("ok", D, p, x, y, den)


def _survey_one(inst):
    _, D, p, x, y, den = inst
    row = {"D": D, "p": p, "z1": x, "z2": y, "den": den}
    try:
        ctx = make_context(D)
        z = make_elem(ctx, x, y, den)
        row.update(norm=z.norm(), k=z.norm() // p)
        v = decide_conjecture(build_matrix(p, z, ctx))
        row.update(status=v.status.value, method=v.method)
        return row, (v.certificate.to_json() if v.certificate else None)
    except Exception as exc:  # a failing instance must not abort the sweep
        row["error"] = f"{type(exc).__name__}: {exc}"
        return row, None


def _cert_name(row) -> str:
    enc = lambda v: f"m{-v}" if v < 0 else str(v)
    return f"D{enc(row['D'])}_p{row['p']}_z{enc(row['z1'])}_{enc(row['z2'])}_{row['den']}.json"


def run_survey(d_list, p_max, coord_max, jobs=1, cert_dir=None, base_dir=None):
    instances = list(survey_instances(d_list, p_max, coord_max))
    errors = [i for i in instances if i[0] == "error"]
    work = [i for i in instances if i[0] == "ok"]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_survey_one, work, chunksize=max(1, len(work) // (4 * jobs))))
    else:
        results = [_survey_one(i) for i in work]
    rows = [{"D": e[1], "error": f"{e[2]}: {e[3]}"} for e in errors]
    for row, cert in results:
        if cert is not None and cert_dir is not None:
            path = Path(cert_dir) / _cert_name(row)
            path.write_text(json.dumps(cert, indent=2) + "\n")
            try:
                row["certificate_path"] = str(path.relative_to(base_dir)) if base_dir else str(path)
            except ValueError:
                row["certificate_path"] = str(path)
        rows.append(row)
    return rows


@main.command()
@click.option("--d-list", required=True, help="comma-separated discriminant parameters, e.g. 10,-5,15")
@click.option("--p-max", type=int, required=True)
@click.option("--coord-max", type=int, required=True)
@click.option("--out", type=click.Path(dir_okay=False), help="CSV path (stdout when omitted)")
@click.option("--jobs", type=int, default=1, show_default=True)
@click.option("--cert-dir", type=click.Path(file_okay=False), help="also write certificates here")
def survey(d_list, p_max, coord_max, out, jobs, cert_dir):
    """Run the conjecture decision over a box of instances and write CSV."""
    try:
        ds = [int(v) for v in d_list.split(",") if v.strip()]
    except ValueError:
        raise click.BadParameter(f"cannot parse --d-list {d_list!r}")
    if cert_dir:
        Path(cert_dir).mkdir(parents=True, exist_ok=True)
    base = Path(out).resolve().parent if out else Path.cwd()
    rows = run_survey(ds, p_max, coord_max, max(1, jobs), Path(cert_dir).resolve() if cert_dir else None, base)
    fh = open(out, "w", newline="") if out else sys.stdout
    try:
        w = csv.DictWriter(fh, fieldnames=SURVEY_COLUMNS, lineterminator="\n")
        w.writeheader()
        for row in rows:
            w.writerow({c: row.get(c, "") for c in SURVEY_COLUMNS})
    finally:
        if out:
            fh.close()


if __name__ == "__main__":
    main()
