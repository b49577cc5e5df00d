"""Command-line front end.

    drwitt compute --crystal a1-trivial --p 2 --r 2 --wmax 4
    drwitt verify  --crystal gm-kummer:c=1 --p 3 --r 2 --checks all
    drwitt witt "[1]+[1]" --p 2 --r 2

Errors are written to stderr as one JSON object and the process exits with
the code attached to the error class:

    0  success
    1  unexpected internal error
    2  NotStabilized (raise --kmax)
    3  invalid input: parse, validation, bad job parameters, NotInjective
    4  a relation, axiom or comparison check failed
    5  window errors (strict window overflow, incoherent window)
"""

from __future__ import annotations

import csv
import io
import json
import sys
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

import click

from . import crystal as crystals
from .drw import (
    DRWTower,
    SCHEMA,
    alpha_F_check,
    degree0_witt_check,
    export,
    lambda_check,
    localization_check,
    rho_check,
    run_axioms,
)
from .errors import DRWError, InvalidJob, Mismatch
from .exactalg.poly import is_prime
from .parsing import parse_witt
from .suites import (
    crystal_identity_suite,
    derham_identity_suite,
    ghost_mod,
    pd_relation_suite,
    pd_suite,
    witt_identity_suite,
)

TOWER_CHECKS = ("axioms", "rho", "alpha_F", "lambda", "witt-degree0", "localization")
SUITES = ("witt-identities", "pd", "pd-relations", "derham-identities", "crystal-identities")
DEFAULT_CHECKS = ("axioms", "rho", "alpha_F", "lambda")
FAULTS = ("verschiebung", "lambda", "witt-sum", "crystal", "kmax")

# the check each fault is designed to trip
_FAULT_CHECK = {"verschiebung": "axioms", "lambda": "rho", "witt-sum": "witt-identities"}


@dataclass
class JobSpec:
    p: int | None
    r_max: int
    wmin: Fraction
    wmax: Fraction | None
    kmax: int | None
    confirm: int
    crystal: str
    checks: list = field(default_factory=list)
    out: str | None = None
    strict: bool = False
    fault: str | None = None
    max_exp: int | None = None
    source_bound: Fraction | None = None

    def validate(self):
        if self.p is not None and not is_prime(self.p):
            raise InvalidJob(f"p = {self.p} is not prime", p=self.p)
        if self.r_max < 1:
            raise InvalidJob("r must be at least 1", r=self.r_max)
        if self.wmax is not None and self.wmax < self.wmin:
            raise InvalidJob("empty weight window", wmin=str(self.wmin), wmax=str(self.wmax))
        if self.confirm < 1:
            raise InvalidJob("confirm must be at least 1", confirm=self.confirm)
        unknown = [c for c in self.checks if c not in TOWER_CHECKS + SUITES]
        if unknown:
            raise InvalidJob(f"unknown checks {unknown}; known: {', '.join(TOWER_CHECKS + SUITES)}")
        if self.fault is not None and self.fault not in FAULTS:
            raise InvalidJob(f"unknown fault {self.fault!r}; known: {', '.join(FAULTS)}")

    def metadata(self) -> dict:
        out = asdict(self)
        for k in ("wmin", "wmax", "source_bound"):
            out[k] = None if out[k] is None else str(out[k])
        return out


def load_crystal_data(job: JobSpec):
    """Crystal data from a file path or builtin name; p comes from the file when not given."""
    if job.fault == "crystal":
        return crystals.non_horizontal_example(job.p or 2)
    path = Path(job.crystal)
    if path.suffix == ".json" or path.exists():
        data = crystals.load_crystal(path)
        if job.p is not None and job.p != data.p:
            raise InvalidJob(f"--p {job.p} disagrees with p = {data.p} in {path}")
        return data
    if job.p is None:
        raise InvalidJob("--p is required with a builtin crystal")
    return crystals.builtin(job.crystal, job.p)


def make_tower(job: JobSpec) -> DRWTower:
    cr = crystals.validate(load_crystal_data(job))
    kmax = 0 if job.fault == "kmax" else job.kmax
    fault = job.fault if job.fault in ("verschiebung", "lambda") else None
    return DRWTower(cr, job.r_max, job.wmin, job.wmax, kmax=kmax, confirm=job.confirm,
                    source_bound=job.source_bound, strict=job.strict, fault=fault, max_exp=job.max_exp)


def _error_record(name, exc: DRWError) -> dict:
    return {"check": name, "passed": False, **exc.to_json()}


def run_checks(job: JobSpec, dt: DRWTower | None) -> tuple[list, int]:
    """Run the selected checks; returns the records and the exit code of the first failure."""
    records, code = [], 0

    def note(rec, exit_code):
        nonlocal code
        records.append(rec)
        if not rec["passed"] and code == 0:
            code = exit_code

    for name in job.checks:
        if name in SUITES:
            rec = _run_suite(name, job, dt)
            rec.setdefault("check", name)
            note(rec, Mismatch.exit_code)
            continue
        try:
            for rec in _tower_check(name, dt):
                note(rec, 0)
        except DRWError as exc:
            note(_error_record(name, exc), exc.exit_code)
    return records, code


def _tower_check(name: str, dt: DRWTower):
    levels = range(1, dt.r_max + 1)
    if name == "axioms":
        yield run_axioms(dt)
    elif name == "rho":
        for r in levels:
            yield rho_check(dt, r).to_json()
    elif name == "alpha_F":
        for r in levels:
            yield alpha_F_check(dt, r).to_json()
    elif name == "lambda":
        for r in levels:
            yield lambda_check(dt, r).to_json()
    elif name == "witt-degree0":
        if dt.trivial_tower is not dt:
            yield {"check": name, "passed": True, "skipped": "crystal is not trivial"}
            return
        for r in levels:
            yield degree0_witt_check(dt, r).to_json()
    elif name == "localization":
        ring = dt.ring
        polys = [v for v, lf in zip(ring.variables, ring.laurent) if not lf]
        if not polys:
            yield {"check": name, "passed": True, "skipped": "no polynomial variable to invert"}
        for var in polys:
            for r in levels:
                yield localization_check(dt, var, r).to_json()


def _run_suite(name: str, job: JobSpec, dt: DRWTower | None) -> dict:
    p = job.p if dt is None else dt.p
    if name == "witt-identities":
        return witt_identity_suite(p, job.r_max, fault="witt-sum" if job.fault == "witt-sum" else None)
    if name == "pd":
        return pd_suite(p, job.r_max)
    if name == "pd-relations":
        return pd_relation_suite(p, job.r_max)
    if name == "derham-identities":
        return derham_identity_suite(p)
    lo, hi = dt.window
    return crystal_identity_suite([dt.crystal.data], lo, hi)


def csv_table(doc: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["level", "degree", "weight", "divisors", "order", "stage", "tainted"])
    for lev in doc["levels"]:
        for b in lev["blocks"]:
            order = 1
            for x in b["divisors"]:
                order *= x
            w.writerow([lev["r"], b["degree"], ";".join(b["weight"]), ";".join(map(str, b["divisors"])),
                        order, b["stage"], int(b["tainted"])])
    return buf.getvalue()


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        click.echo(text, nl=not text.endswith("\n"))


def _fraction(ctx, param, value):
    if value is None:
        return None
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError):
        raise click.BadParameter(f"{value!r} is not a rational number") from None


def _checks(value: str | None, default) -> list:
    if value is None:
        return list(default)
    if value == "all":
        return list(TOWER_CHECKS + SUITES)
    return [c.strip() for c in value.split(",") if c.strip()]


def _job_options(f):
    opts = [
        click.option("--p", "p", type=int, default=None, help="The prime (read from the file if omitted)."),
        click.option("--r", "r_max", type=int, default=2, show_default=True, help="Highest level."),
        click.option("--wmin", callback=_fraction, default="0", show_default=True, help="Window lower bound."),
        click.option("--wmax", callback=_fraction, default=None, help="Window upper bound [default: p^2]."),
        click.option("--kmax", type=int, default=None, help="Largest saturation stage [default: r+4]."),
        click.option("--confirm", type=int, default=2, show_default=True,
                     help="Consecutive stable stages required."),
        click.option("--crystal", default="a1-trivial", show_default=True,
                     help="JSON crystal file or builtin: " + ", ".join(crystals.BUILTINS)),
        click.option("--checks", default=None, help="Comma-separated checks, or 'all'."),
        click.option("--out", type=click.Path(dir_okay=False), default=None, help="Write output here."),
        click.option("--strict-window", "strict", is_flag=True, help="Error instead of tainting on overflow."),
        click.option("--corrupt", "fault", type=click.Choice(FAULTS), default=None, hidden=True),
        click.option("--max-denominator-exp", "max_exp", type=int, default=None,
                     help="Largest exponent s of p in weight denominators [default: r]."),
        click.option("--source-bound", callback=_fraction, default=None,
                     help="Restrict the source complex to ambient weights of absolute value at most this."),
    ]
    for o in reversed(opts):
        f = o(f)
    return f


@click.group()
@click.version_option(package_name="artifact")
def cli():
    """Saturated de Rham-Witt towers with unit-root coefficients."""


@cli.command()
@_job_options
@click.option("--cohomology", is_flag=True, help="Include cohomology per block.")
@click.option("--csv", "as_csv", is_flag=True, help="Print the flat rank table instead of JSON.")
def compute(cohomology, as_csv, **kw):
    """Build levels 1..r on the window and export the blocks."""
    job = JobSpec(checks=_checks(kw.pop("checks"), ()), **kw)
    job.validate()
    dt = make_tower(job).build()
    records, code = run_checks(job, dt) if job.checks else (None, 0)
    doc = export(dt, cohomology=cohomology, checks=records)
    _emit(csv_table(doc) if as_csv else json.dumps(doc, indent=1), job.out)
    return code


@cli.command()
@_job_options
def verify(**kw):
    """Run checks; exit 0 iff all of them pass."""
    job = JobSpec(checks=_checks(kw.pop("checks"), DEFAULT_CHECKS), **kw)
    designated = _FAULT_CHECK.get(job.fault)
    if designated and designated not in job.checks:
        job.checks.append(designated)
    job.validate()
    needs_tower = any(c in TOWER_CHECKS or c == "crystal-identities" for c in job.checks)
    if needs_tower:
        dt = make_tower(job)
    else:
        if job.p is None:
            raise InvalidJob("--p is required")
        dt = None
    records, code = run_checks(job, dt)
    doc = {"schema": SCHEMA, "passed": code == 0, "checks": records, "job": job.metadata()}
    _emit(json.dumps(doc, indent=1), job.out)
    return code


@cli.command()
@click.argument("expr")
@click.option("--p", "p", type=int, required=True)
@click.option("--r", "r", type=int, default=2, show_default=True)
@click.option("--json", "as_json", is_flag=True)
def witt(expr, p, r, as_json):
    """Evaluate a Witt vector expression in W_r(F_p[t]).

    Grammar: integers, [f] for the Teichmuller lift of a polynomial f in t,
    V(...), F(...), +, -, * and parentheses. Prints the Witt coordinates and
    the ghost components of a lift, the n-th one modulo p^(n+1).
    """
    if not is_prime(p) or r < 1:
        raise InvalidJob("need a prime p and r >= 1", p=p, r=r)
    w = parse_witt(expr, p, r)
    coords = [str(c) for c in w.coords]
    ghost = [str(g) for g in ghost_mod(w)]
    if as_json:
        click.echo(json.dumps({"p": p, "r": r, "coordinates": coords, "ghost": ghost}))
    else:
        click.echo("coordinates: (" + ", ".join(coords) + ")")
        click.echo("ghost:       (" + ", ".join(ghost) + ")")
    return 0


def main(argv=None) -> int:
    try:
        code = cli.main(args=argv, prog_name="drwitt", standalone_mode=False)
    except DRWError as exc:
        click.echo(json.dumps(exc.to_json()), err=True)
        return exc.exit_code
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.exceptions.Abort:
        return 1
    except click.ClickException as exc:
        click.echo(json.dumps({"error": "UsageError", "message": exc.format_message()}), err=True)
        return InvalidJob.exit_code
    except ValueError as exc:
        click.echo(json.dumps({"error": "ValueError", "message": str(exc)}), err=True)
        return InvalidJob.exit_code
    return code if isinstance(code, int) else 0


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
