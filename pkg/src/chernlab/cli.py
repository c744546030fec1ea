"""Command line entry point: ``chernlab run`` and ``chernlab demo``."""

from __future__ import annotations

import os
import sys
from contextlib import contextmanager
from pathlib import Path

import click

from . import lab
from .errors import ChernlabError
from .session import run_instance, run_text


@contextmanager
def _degree_guard(maxdeg):
    """Set the working degree guard for the duration of one command."""
    old = os.environ.get("CHERNLAB_MAXDEG")
    if maxdeg is not None:
        os.environ["CHERNLAB_MAXDEG"] = str(maxdeg)
    try:
        yield
    finally:
        if old is None:
            os.environ.pop("CHERNLAB_MAXDEG", None)
        else:
            os.environ["CHERNLAB_MAXDEG"] = old


def _emit(bundle, json_out, tsv_dir):
    if json_out:
        bundle.write_json(json_out)
    if tsv_dir:
        bundle.write_tsv(tsv_dir)
    click.echo(bundle.summary(), nl=False)


@click.group()
def main():
    """Hilbert coefficients, extended degrees and bound checks for small rings."""


@main.command()
@click.argument("script", type=click.Path(exists=True, dir_okay=False))
@click.option("--json", "json_out", type=click.Path(dir_okay=False), help="write the report bundle")
@click.option("--tsv", "tsv_dir", type=click.Path(file_okay=False), help="directory for tables")
@click.option("--field", "field_", default=None, help="fp32003 or qq (overrides the script)")
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--maxdeg", default=None, type=int, help="working degree guard")
@click.option("--include-expensive", is_flag=True, help="allow expensive instances")
def run(script, json_out, tsv_dir, field_, seed, maxdeg, include_expensive):
    """Run a session script."""
    with _degree_guard(maxdeg):
        bundle = run_text(Path(script).read_text(), seed=seed, field=field_)
    _emit(bundle, json_out, tsv_dir)
    sys.exit(bundle.exit_code)


@main.command()
@click.argument("instance")
@click.option("--json", "json_out", type=click.Path(dir_okay=False))
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--maxdeg", default=None, type=int)
@click.option("--include-expensive", is_flag=True)
def demo(instance, json_out, seed, maxdeg, include_expensive):
    """Run a built-in lab instance (see `chernlab list`)."""
    if instance in lab.EXPENSIVE and not include_expensive:
        click.echo(f"{instance} is expensive; pass --include-expensive", err=True)
        sys.exit(3)
    try:
        with _degree_guard(maxdeg):
            bundle = run_instance(lab.build(instance), seed=seed)
    except ChernlabError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(exc.exit_code)
    _emit(bundle, json_out, None)
    sys.exit(bundle.exit_code)


@main.command(name="list")
def list_instances():
    """List the built-in lab instances."""
    for name in lab.INSTANCES:
        click.echo(name + ("  (expensive)" if name in lab.EXPENSIVE else ""))


if __name__ == "__main__":
    main()
