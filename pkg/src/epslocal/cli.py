"""Command-line front end.

Exit codes: 0 all checks pass, 1 a verification failed, 2 usage or input error.
JSON lines go to standard output, human summaries to standard error.
"""

from __future__ import annotations

import json
import sys
import time
from fractions import Fraction

import click

from .characters import ff_char
from .cyclotomic import complex_embed
from .epsilon import _fmt, gauss_sum_finite
from .gamma import GammaQuery, gamma_p
from .padic import DEFAULT_PRECISION
from .residue import make_finite_field
from . import verify as V


def _emit(obj) -> None:
    click.echo(json.dumps(obj, sort_keys=True, separators=(",", ":")))


def _int_list(_ctx, _param, value):
    if value is None:
        return None
    try:
        return [int(x) for x in value.split(",") if x.strip()]
    except ValueError:
        raise click.BadParameter("expected a comma-separated list of integers")


@click.group()
def main():
    """Exact local epsilon factors and twist variations."""


@main.command("gauss-sum")
@click.option("-p", "p", type=int, required=True)
@click.option("-r", "r", type=int, default=1, show_default=True)
@click.option("--chi", "j", type=int, required=True, help="exponent j: chi(g) = exp(2 pi i j/(q-1))")
@click.option("--scale", type=int, default=1, show_default=True, help="additive character x -> psi(scale x)")
def gauss_sum_cmd(p, r, j, scale):
    """Classical Gauss sum over F_{p^r}."""
    try:
        F = make_finite_field(p, r)
        g = gauss_sum_finite(ff_char(F, j % (F.q - 1)), scale)
    except (ValueError, TypeError) as e:
        raise click.UsageError(str(e))
    z = complex_embed(g)
    _emit({
        "p": p, "r": r, "chi": j, "scale": scale,
        "value": _fmt(g),
        "order": g.N,
        "power_coords": [str(c) for c in g.power_coords()],
        "complex": [round(z.real, 12), round(z.imag, 12)],
        "modulus": round(abs(z), 12),
    })


@main.command("gamma-p")
@click.option("-p", "p", type=int, required=True)
@click.option("-z", "z", type=str, required=True, help="rational n/d with p not dividing d")
@click.option("-k", "k", type=int, default=DEFAULT_PRECISION, show_default=True, help="p-adic digits")
def gamma_p_cmd(p, z, k):
    """Morita's Gamma_p(z); digits least significant first."""
    try:
        x = Fraction(z)
        val = gamma_p(GammaQuery(x, p, k))
    except (ValueError, ZeroDivisionError) as e:
        raise click.UsageError(str(e))
    _emit({"p": p, "z": str(x), "precision": k, "digits": val.digit_string(), "value": str(val)})


@main.command("verify")
@click.argument("suite", type=click.Choice(V.SUITES))
@click.option("--primes", callback=_int_list, help="override the prime list")
@click.option("--pmax", type=int, help="largest prime where the suite takes a bound")
@click.option("--conductors", callback=_int_list, help="override conductors a(chi)")
@click.option("--weights", callback=_int_list, help="override weights k")
@click.option("--jobs", type=int, default=1, show_default=True)
def verify_cmd(suite, primes, pmax, conductors, weights, jobs):
    """Run a verification suite; exit 0 iff every checked case passes."""
    if jobs < 1:
        raise click.UsageError("--jobs must be positive")
    grid = dict(V.DEFAULT_GRIDS[suite])
    if primes is not None:
        key = "odd_primes" if suite == "parity" else "primes"
        grid[key] = primes
    if pmax is not None:
        if "pmax" in grid:
            grid["pmax"] = pmax
        elif "primes" in grid:
            grid["primes"] = [p for p in grid["primes"] if p <= pmax] if primes else \
                [int(q) for q in V.primerange(2, pmax + 1)]
    if conductors is not None and "conductors" in grid:
        grid["conductors"] = conductors
    if weights is not None and "weights" in grid:
        grid["weights"] = weights
    t0 = time.time()
    try:
        recs = V.run_suite(suite, grid, jobs)
    except ValueError as e:
        raise click.UsageError(str(e))
    _emit({"convention": V.convention_block(suite, grid)})
    for r in recs:
        _emit(r)
    checked = [r for r in recs if r["equal"] is not None]
    failed = [r for r in checked if not r["equal"]]
    click.echo(f"{suite}: {len(checked) - len(failed)}/{len(checked)} pass, "
               f"{len(recs) - len(checked)} reported only, {time.time() - t0:.1f}s", err=True)
    sys.exit(0 if not failed else 1)


@main.command("classify")
@click.argument("infile", type=click.File("r"))
@click.argument("outfile", type=click.File("w"), default="-")
@click.option("--want-field", is_flag=True, help="require global root numbers to name K")
def classify_cmd(infile, outfile, want_field):
    """Classify JSON-lines newform records at p."""
    from .classifier import classify_lines

    bad = 0
    for n, rep in classify_lines(infile, want_field):
        if isinstance(rep, str):
            bad += 1
            click.echo(rep, err=True)
            continue
        outfile.write(rep.to_json() + "\n")
    if bad:
        click.echo(f"{bad} record(s) rejected", err=True)
        sys.exit(2)


if __name__ == "__main__":
    main()
