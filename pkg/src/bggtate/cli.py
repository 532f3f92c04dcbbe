"""Command line entry point.

Exit codes: 0 success, 1 mathematical precondition or failed verification,
2 parse or I/O error.  Diagnostics go to stderr; stdout is only written
once a command has fully succeeded.
"""

from __future__ import annotations

import sys

import click

from . import gallery as gallery_mod
from . import modfile
from .beilinson import beilinson_linear_terms, beilinson_omega
from .cohomology import BookkeepingMismatch, CannotCertify, cohomology_table, hom_derived_dim
from .exterior import ExteriorContext
from .linalg import DEFAULT_CHAR, Field
from .modules import annihilated_by_top, split_free
from .resolutions import NotSocleAnnihilated, WindowTooSmall, render_betti, tate_resolution
from .suites import SUITES

MATH_ERRORS = (NotSocleAnnihilated, WindowTooSmall, CannotCertify, BookkeepingMismatch)


class RangeParam(click.ParamType):
    """An inclusive integer range written ``lo:hi``."""

    name = "lo:hi"

    def convert(self, value, param, ctx):
        if isinstance(value, tuple):
            return value
        try:
            lo, hi = (int(x) for x in str(value).split(":"))
        except ValueError:
            self.fail(f"{value!r} is not of the form lo:hi", param, ctx)
        if lo > hi:
            self.fail(f"empty range {value!r}", param, ctx)
        return (lo, hi)


RANGE = RangeParam()


class MathError(click.ClickException):
    exit_code = 1


class InputError(click.ClickException):
    exit_code = 2


def _load(path: str, char: int | None):
    try:
        if path == "-":
            N, shift = modfile.loads(sys.stdin.read())
        else:
            N, shift = modfile.read(path)
    except modfile.ModuleFileError as exc:
        raise InputError(f"{path}: {exc}")
    if char is not None and char != N.field.char:
        data = modfile.to_dict(N, shift)
        data["char"] = char
        try:
            N, shift = modfile.from_dict(data)
        except modfile.ModuleFileError as exc:
            raise InputError(f"{path}: {exc}")
    return N, shift


def _seed(N):
    """Drop free summands; their L-images are acyclic."""
    if annihilated_by_top(N):
        return N
    return split_free(N).core


def _run(fn):
    try:
        return fn()
    except MATH_ERRORS as exc:
        raise MathError(str(exc))


module_arg = click.argument("module", type=click.Path(allow_dash=True), default="-")
char_opt = click.option("--char", "char", type=int, default=None,
                        help="Reinterpret the module over this characteristic (0 for Q).")


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
def main():
    """Sheaf cohomology on projective space through exterior-algebra Tate resolutions."""


@main.command()
@module_arg
@click.option("--window", type=RANGE, required=True, help="Tate indices lo:hi.")
@char_opt
def tate(module, window, char):
    """Print the Betti table of the Tate resolution."""
    N, _ = _load(module, char)
    out = _run(lambda: render_betti(tate_resolution(_seed(N), window)))
    click.echo(out, nl=False)


@main.command()
@module_arg
@click.option("--twists", type=RANGE, required=True, help="Twists d as lo:hi.")
@click.option("--degrees", type=RANGE, default=None, help="Cohomological degrees j as lo:hi.")
@click.option("--shift", type=int, default=None, help="Report T^shift L(N); defaults to the file's shift.")
@char_opt
def cohomology(module, twists, degrees, shift, char):
    """Print the table h^j(F(d))."""
    N, file_shift = _load(module, char)
    s = file_shift if shift is None else shift
    tab = _run(lambda: cohomology_table(_seed(N), twists, degrees, s))
    click.echo(tab.render(), nl=False)


@main.command()
@module_arg
@click.option("--form", type=click.Choice(["omega", "linear"]), default="omega", show_default=True)
@click.option("--window", type=RANGE, default=None, help="Tate indices lo:hi.")
@click.option("--shift", type=int, default=None)
@click.option("--maps/--no-maps", default=False, help="Also print the differentials (omega form).")
@char_opt
def beilinson(module, form, window, shift, maps, char):
    """Print a Beilinson monad of the module's complex."""
    N, file_shift = _load(module, char)
    s = file_shift if shift is None else shift

    def go():
        seed = _seed(N)
        if form == "omega":
            return beilinson_omega(seed, window, s).render(maps)
        return beilinson_linear_terms(seed, window, s).render()

    click.echo(_run(go), nl=False)


@main.command()
@click.argument("source", type=click.Path(allow_dash=True))
@click.argument("target", type=click.Path(allow_dash=True))
@click.option("--p", "p", type=int, default=0, show_default=True)
@char_opt
def hom(source, target, p, char):
    """Print dim Hom(L(SOURCE), T^p L(TARGET)) in the derived category."""
    Np, _ = _load(source, char)
    N, _ = _load(target, char)
    if Np.ctx != N.ctx:
        raise click.UsageError("modules live over different exterior algebras")
    click.echo(_run(lambda: hom_derived_dim(Np, _seed(N), p)))


@main.command()
@click.option("--name", type=click.Choice(sorted(gallery_mod.BUILDERS)), required=True)
@click.option("--n", "n", type=int, required=True, help="Dimension of the projective space.")
@click.option("--a", "a", type=int, default=0, show_default=True, help="Twist parameter.")
@click.option("--m", "m", type=int, default=2, show_default=True, help="Truncation length (truncated).")
@click.option("--i", "i", type=int, default=0, show_default=True, help="Form degree (omega).")
@click.option("--char", "char", type=int, default=DEFAULT_CHAR, show_default=True)
@click.option("-o", "--output", type=click.Path(allow_dash=True), default="-")
def gallery(name, n, a, m, i, char, output):
    """Write a named seed module as a module file."""
    try:
        ctx = ExteriorContext(n, Field(char))
        params = {"twisted-structure": {"a": a}, "underline-k": {"a": a},
                  "truncated": {"m": m, "a": a}, "omega": {"i": i}}[name]
        seed = gallery_mod.build(name, ctx, **params)
    except ValueError as exc:
        raise click.BadParameter(str(exc))
    text = modfile.dumps(seed.module, seed.shift)
    if output == "-":
        click.echo(text, nl=False)
    else:
        try:
            with open(output, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise InputError(f"{output}: {exc}")


@main.command()
@click.argument("suite", type=click.Choice(list(SUITES)))
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--count", type=int, default=20, show_default=True, help="Random cases per setting.")
@click.option("--char", "char", type=int, default=DEFAULT_CHAR, show_default=True)
def verify(suite, seed, count, char):
    """Run a verification suite and print pass/fail counts."""
    try:
        field = Field(char)
    except ValueError as exc:
        raise click.BadParameter(str(exc))
    report = SUITES[suite](field, seed=seed, count=count)
    for label in report.failures:
        click.echo(f"FAIL {label}", err=True)
    click.echo(report.summary())
    sys.exit(0 if report.ok else 1)


if __name__ == "__main__":
    main()
