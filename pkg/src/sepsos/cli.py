"""Command-line interface.

Exit codes: 0 affirmed (SOS, verified, PPT pass, all claims pass),
1 refuted (not SOS, verification failed, PPT fail, a claim failed),
2 indeterminate, 64 usage or malformed input, 74 I/O failure.
"""

from __future__ import annotations

import json
import sys

import click

EXIT_OK, EXIT_REFUTED, EXIT_INDETERMINATE, EXIT_USAGE, EXIT_IO = 0, 1, 2, 64, 74


class InputError(Exception):
    """Malformed or inconsistent input; maps to exit 64."""


def _read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise click.exceptions.Exit(_io_fail(exc))
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})")


def _io_fail(exc) -> int:
    click.echo(f"error: {exc}", err=True)
    return EXIT_IO


def _write_json(path, data):
    try:
        with open(path, "w") as fh:
            json.dump(data, fh, indent=2)
    except OSError as exc:
        raise click.exceptions.Exit(_io_fail(exc))


def _load_poly(path):
    from .poly import HermitianPolynomial, Poly, RealPolynomial

    data = _read_json(path)
    try:
        if data.get("kind") == "real":
            return RealPolynomial.from_json(data)
        return HermitianPolynomial.from_poly(Poly.from_json(data))
    except (KeyError, ValueError, TypeError, ZeroDivisionError) as exc:
        raise InputError(f"{path}: not a polynomial ({exc})")


def _sibling(path, suffix):
    stem = path[:-5] if path.endswith(".json") else path
    return f"{stem}.{suffix}.json"


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
def cli():
    """Hermitian SOS certificates, Choi maps and separability tests."""


# ---------------------------------------------------------------------------
# sos


@cli.group()
def sos():
    """Decide or verify sum-of-squares membership."""


@sos.command("check")
@click.argument("poly_path", type=click.Path(dir_okay=False))
@click.option("--mode", type=click.Choice(["exact", "numeric"]), default="exact", show_default=True)
@click.option("--tol", type=float, default=1e-9, show_default=True)
@click.option("--seed", type=int, required=True, help="Solver seed (required for reproducibility).")
@click.option("--out", "out_path", type=click.Path(dir_okay=False), help="Certificate path (default: beside input).")
def sos_check_cmd(poly_path, mode, tol, seed, out_path):
    """Run the SOS decision and write the certificate."""
    from .poly import RealPolynomial
    from .sos import real_sos_check, sos_check

    p = _load_poly(poly_path)
    if mode == "exact" and p.regime != "exact":
        raise InputError("exact mode needs rational coefficients")
    if isinstance(p, RealPolynomial):
        v = real_sos_check(p, mode=mode, tol=tol, seed=seed)
    else:
        v = sos_check(p, mode=mode, tol=tol, seed=seed)
    out = {"status": v.status, "method": v.method}
    if v.certificate is not None:
        path = out_path or _sibling(poly_path, "cert")
        _write_json(path, v.certificate.to_json())
        out["certificate"] = path
    click.echo(json.dumps(out))
    return {"sos": EXIT_OK, "not_sos": EXIT_REFUTED}.get(v.status, EXIT_INDETERMINATE)


@sos.command("verify")
@click.argument("poly_path", type=click.Path(dir_okay=False))
@click.argument("cert_path", type=click.Path(dir_okay=False))
def sos_verify_cmd(poly_path, cert_path):
    """Exactly re-verify a certificate; exit 0 iff it is valid for the polynomial."""
    from .sos import GramCertificate, MomentCertificate, certificate_from_json, verify_gram, verify_moment
    from .sos import verify_real_gram

    p = _load_poly(poly_path)
    try:
        cert = certificate_from_json(_read_json(cert_path))
    except (KeyError, ValueError, TypeError) as exc:
        raise InputError(f"{cert_path}: not a certificate ({exc})")
    try:
        if isinstance(cert, GramCertificate):
            ok, claim = verify_gram(p, cert), "sos"
        elif isinstance(cert, MomentCertificate):
            ok, claim = verify_moment(p, cert), "not_sos"
        else:
            ok, claim = verify_real_gram(p, cert), "sos"
    except (ValueError, TypeError) as exc:
        raise InputError(f"certificate does not match the polynomial ({exc})")
    click.echo(json.dumps({"valid": ok, "proves": claim if ok else None}))
    return EXIT_OK if ok else EXIT_REFUTED


# ---------------------------------------------------------------------------
# tools


@cli.command("notsos-zeros")
@click.argument("poly_path", type=click.Path(dir_okay=False))
@click.argument("curve_path", type=click.Path(dir_okay=False))
@click.option("--out", "out_path", type=click.Path(dir_okay=False), help="Proof report path.")
def notsos_zeros_cmd(poly_path, curve_path, out_path):
    """Prove non-SOS from a curve of zeros; exit 1 when a proof is found."""
    from .zeros import ZeroCurve, prove_not_sos

    p = _load_poly(poly_path)
    try:
        curve = ZeroCurve.from_json(_read_json(curve_path))
        res, system, _ = prove_not_sos(p, curve)
    except (KeyError, ValueError, TypeError) as exc:
        raise InputError(f"cannot run the zeros pipeline ({exc})")
    if res.verdict == "not_sos":
        report = res.report(p.names)
        report["system"] = system.to_json()
        report["rows"] = [system.describe_row(r) for r in system.row_monomials]
        code = EXIT_REFUTED
    else:
        report = {"verdict": res.verdict, "reason": res.reason}
        code = EXIT_INDETERMINATE
    if out_path:
        _write_json(out_path, report)
    summary = {k: v for k, v in report.items() if k not in ("system",)}
    click.echo(json.dumps(summary, indent=2))
    return code


def _parse_dims(s):
    try:
        n, m = (int(x) for x in s.split(","))
    except ValueError:
        raise InputError("--dims must look like 2,2")
    return n, m


@cli.command("ppt")
@click.argument("state_path", type=click.Path(dir_okay=False))
@click.option("--dims", help="Tensor dims n,m (default: from the state JSON).")
@click.option("--tol", type=float, default=1e-10, show_default=True)
def ppt_cmd(state_path, dims, tol):
    """PPT test; exit 0 on pass, 1 on fail."""
    from .linalg import HermitianMatrix
    from .states import ppt_check

    data = _read_json(state_path)
    try:
        d = _parse_dims(dims) if dims else tuple(data["dims"])
        mat = HermitianMatrix.from_json(data)
        r = ppt_check(mat, tol=tol, dims=d)
    except (KeyError, ValueError, TypeError) as exc:
        raise InputError(f"{state_path}: {exc}")
    click.echo(json.dumps({"ppt": r.passed, "min_eigenvalue_rho": r.min_eig_rho,
                           "min_eigenvalue_partial_transpose": r.min_eig_pt}))
    click.echo(f"min eigenvalue: {r.min_eigenvalue:.12g}")
    return EXIT_OK if r.passed else EXIT_REFUTED


@cli.group()
def choi():
    """Convert between maps and biquadratic forms."""


@choi.command("to-poly")
@click.argument("map_path", type=click.Path(dir_okay=False))
@click.option("--orientation", type=click.Choice(["input_first", "output_first"]))
@click.option("--out", "out_path", type=click.Path(dir_okay=False))
def choi_to_poly(map_path, orientation, out_path):
    """Biquadratic form of a map."""
    from .maps import MatrixMap, map_to_biquadratic

    try:
        phi = MatrixMap.from_json(_read_json(map_path))
        p = map_to_biquadratic(phi, orientation)
    except (KeyError, ValueError, TypeError) as exc:
        raise InputError(f"{map_path}: {exc}")
    _emit(p.to_json(), out_path)
    return EXIT_OK


@choi.command("from-poly")
@click.argument("poly_path", type=click.Path(dir_okay=False))
@click.option("--orientation", type=click.Choice(["input_first", "output_first"]), default="input_first",
              show_default=True)
@click.option("--out", "out_path", type=click.Path(dir_okay=False))
def choi_from_poly(poly_path, orientation, out_path):
    """Map whose biquadratic form is the given polynomial."""
    from .maps import biquadratic_to_map

    p = _load_poly(poly_path)
    try:
        phi = biquadratic_to_map(p, orientation)
    except (KeyError, ValueError, TypeError) as exc:
        raise InputError(f"{poly_path}: {exc}")
    _emit(phi.to_json(), out_path)
    return EXIT_OK


def _emit(data, out_path):
    if out_path:
        _write_json(out_path, data)
    else:
        click.echo(json.dumps(data, indent=2))


@cli.group()
def fixtures():
    """List or emit the built-in exact fixtures."""


@fixtures.command("list")
def fixtures_list():
    from .fixtures import fixture_names

    for name in fixture_names():
        click.echo(name.replace("_", "-"))
    return EXIT_OK


def fixture_json(name):
    from .fixtures import get_fixture
    from .linalg import HermitianMatrix
    from .poly import monomial_str
    from .scalars import format_fraction

    obj = get_fixture(name)
    if hasattr(obj, "to_json"):
        return obj.to_json()
    if isinstance(obj, tuple):  # monomial list
        return {"basis": [{"u": list(u), "v": list(v)} for u, v in obj]}
    if isinstance(obj, list):  # matrix rows
        return {"dim": len(obj), "regime": "exact",
                "entries": [[{"re": format_fraction(x.re), "im": format_fraction(x.im)} for x in row]
                            for row in obj]}
    raise TypeError(f"fixture {name!r} has no JSON form")


@fixtures.command("emit")
@click.argument("name")
@click.option("--out", "out_path", type=click.Path(dir_okay=False))
def fixtures_emit(name, out_path):
    """Write a fixture as exact-rational JSON."""
    try:
        data = fixture_json(name)
    except KeyError as exc:
        raise InputError(str(exc))
    _emit(data, out_path)
    return EXIT_OK


# ---------------------------------------------------------------------------
# repro


@cli.command("repro")
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default="repro_report.json",
              show_default=True, help="JSON report; a .txt rendering is written beside it.")
@click.option("--only", multiple=True, help="Run only these claim ids (repeatable).")
@click.option("--parallel", is_flag=True, help="Run claims in worker processes.")
@click.option("--fixture-override", "overrides", multiple=True, metavar="NAME=PATH",
              help="Replace a fixture by the object in a JSON file (repeatable).")
def repro_cmd(out_path, only, parallel, overrides):
    """Run the reproduction claims; exit 0 iff all pass."""
    from . import repro

    ov = {}
    for item in overrides:
        if "=" not in item:
            raise InputError("--fixture-override takes NAME=PATH")
        k, v = item.split("=", 1)
        ov[k.replace("-", "_")] = v
    try:
        results = repro.run_claims(only or None, parallel, ov or None)
    except KeyError as exc:
        raise InputError(str(exc.args[0]))
    try:
        repro.write_report(results, out_path)
    except OSError as exc:
        raise click.exceptions.Exit(_io_fail(exc))
    click.echo(repro.report_text(results), nl=False)
    return repro.exit_code(results)


def main(argv=None) -> int:
    """Entry point; maps every outcome onto the documented exit codes."""
    try:
        rv = cli.main(args=argv, standalone_mode=False)
    except click.exceptions.Exit as exc:
        code = exc.exit_code
    except click.UsageError as exc:
        click.echo(f"usage error: {exc.format_message()}", err=True)
        code = EXIT_USAGE
    except click.exceptions.Abort:
        code = EXIT_USAGE
    except InputError as exc:
        click.echo(f"input error: {exc}", err=True)
        code = EXIT_USAGE
    except OSError as exc:
        code = _io_fail(exc)
    else:
        code = rv if isinstance(rv, int) else EXIT_OK
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
