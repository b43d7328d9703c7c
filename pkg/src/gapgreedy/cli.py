"""Command-line front end: norms, restricted constants, the inequality suite and subset certificates.

Exit codes: 0 success, 1 a check failed, 2 usage or configuration error.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import constants as C
from .core import SparseVector
from .gaps import GapSequence
from .lemmas import CertificateError, select_subset, select_subset_signed, verify_certificate
from .spaces import space_from_config
from .verify import ConfigError, default_config, run_suite


class InputError(click.ClickException):
    exit_code = 2


def _load(text: str, what: str):
    """Parse a JSON literal, or read JSON from a file when ``text`` names one."""
    path = Path(text)
    try:
        if not text.lstrip().startswith(("{", "[")) and path.is_file():
            text = path.read_text()
        return json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {what}: {exc}") from exc


def _space(text: str):
    try:
        return space_from_config(_load(text, "space"))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad space config: {exc}") from exc


def _vector(obj, what="vector") -> SparseVector:
    try:
        return SparseVector.from_json(obj)
    except (TypeError, ValueError) as exc:
        raise InputError(f"bad {what}: {exc}") from exc


def _gaps(text: str | None) -> GapSequence | None:
    if text is None:
        return None
    try:
        return GapSequence.from_json(_load(text, "gap sequence"))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad gap sequence: {exc}") from exc


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        click.echo(text, nl=not text.endswith("\n"))


@click.group()
@click.version_option(package_name="artifact")
def cli():
    """Greedy-approximation constants for gap-indexed bases."""


@cli.command()
@click.argument("space")
@click.argument("vector")
def norm(space, vector):
    """Print the norm of VECTOR ([[index, value], ...]) in SPACE."""
    sp = _space(space)
    x = _vector(_load(vector, "vector"))
    click.echo(f"{sp.evaluate(x):.15g}")


@cli.command()
@click.argument("name")
@click.option("--space", "space_text", required=True, help="Space config as JSON or a path.")
@click.option("--gaps", "gaps_text", default=None, help="Gap sequence as JSON or a path; all sizes when omitted.")
@click.option("--N", "N", type=int, default=8, show_default=True, help="Window 1..N.")
@click.option("--s", "s", type=int, default=4, show_default=True, help="Largest cardinality.")
@click.option("--max-support", type=int, default=None, help="Cap on the support of grid vectors.")
@click.option("--samples", type=int, default=0, show_default=True)
@click.option("--limit", type=int, default=None, help="Largest number of norm evaluations allowed.")
@click.option("--t", "t", type=float, default=1.0, show_default=True, help="Greedy threshold for quasi_greedy.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", default=None, help="Write the JSON here instead of stdout.")
def constant(name, space_text, gaps_text, N, s, max_support, samples, limit, t, seed, out):
    """Compute the restricted constant NAME with its witness."""
    known = set(C.ESTIMATORS) | {"ul", "ul_lower", "ul_upper"}
    if name not in known:
        raise InputError(f"unknown constant {name!r}; choose from {', '.join(sorted(known))}")
    sp = _space(space_text)
    n = _gaps(gaps_text)
    try:
        fields = {"N": N, "s": s, "max_support": max_support, "samples": samples, "seed": seed}
        if limit is not None:
            fields["limit"] = limit
        budget = C.SearchBudget.from_json(fields)
        options = {"t": t} if name == "quasi_greedy" else {}
        found = C.estimate(name, sp, n, budget, **options)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    payload = found[0].to_json() if len(found) == 1 else [e.to_json() for e in found]
    _emit(json.dumps(payload, indent=2, sort_keys=True) + "\n", out)


@cli.command()
@click.option("--config", "config_path", default=None, help="Run config JSON file; the built-in suite when omitted.")
@click.option("--out", default=None, help="Report path; stdout when omitted.")
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default=None, help="Report format [default: json].")
@click.option("--seed", type=int, default=None, help="Override the config seed.")
@click.option("--jobs", type=click.IntRange(min=1), default=1, show_default=True, help="Worker processes.")
def verify(config_path, out, fmt, seed, jobs):
    """Run the inequality suite and write a report; exits 1 if any check fails."""
    if config_path is None:
        cfg = default_config()
    else:
        path = Path(config_path)
        if not path.is_file():
            raise InputError(f"config file not found: {config_path}")
        cfg = _load(path.read_text(), "config")
    output = cfg.get("output", {}) if isinstance(cfg, dict) else {}
    out = out or output.get("path")
    fmt = fmt or output.get("format", "json")
    if fmt not in ("json", "csv"):
        raise InputError(f"unknown report format {fmt!r}")
    try:
        report = run_suite(cfg, jobs=jobs, seed=seed)
    except ConfigError as exc:
        raise InputError(str(exc)) from exc
    _emit(report.dumps(fmt), out)
    counts = report.counts
    click.echo(" ".join(f"{k}={v}" for k, v in counts.items()), err=True)
    sys.exit(1 if report.failed else 0)


@cli.command()
@click.option("--space", "space_text", required=True, help="Space config as JSON or a path.")
@click.option("--vectors", "vectors_text", required=True,
              help="JSON list of vectors, or an object mapping index to vector.")
@click.option("--gaps", "gaps_text", required=True, help="Gap sequence as JSON or a path.")
@click.option("--coefficients", "coef_text", default=None,
              help="Optional scalars b_j (same shape as --vectors) for the signed version.")
@click.option("--max-size", type=int, default=16, show_default=True)
@click.option("--out", default=None)
def lemma34(space_text, vectors_text, gaps_text, coef_text, max_size, out):
    """Select a subset whose sum dominates every sub-sum, with a checkable certificate."""
    sp = _space(space_text)
    n = _gaps(gaps_text)
    raw = _load(vectors_text, "vectors")
    if isinstance(raw, dict):
        try:
            xs = {int(k): _vector(v) for k, v in raw.items()}
        except ValueError as exc:
            raise InputError(f"bad vector index: {exc}") from exc
    elif isinstance(raw, list):
        xs = [_vector(v) for v in raw]
    else:
        raise InputError("vectors must be a list or an object")
    bs = None
    if coef_text is not None:
        braw = _load(coef_text, "coefficients")
        try:
            if isinstance(braw, dict):
                braw = [braw[k] for k in sorted(braw, key=int)]
            bs = [float(v) for v in braw]
        except (TypeError, ValueError) as exc:
            raise InputError(f"bad coefficients: {exc}") from exc
    try:
        if bs is None:
            result = select_subset(sp, xs, n, max_size=max_size)
        else:
            result = select_subset_signed(sp, xs, bs, n, max_size=max_size)
    except CertificateError as exc:
        click.echo(f"no certificate: {exc}", err=True)
        sys.exit(1)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    payload = result.to_json() | {"verified": verify_certificate(sp, xs, n, result, bs=bs)}
    _emit(json.dumps(payload, indent=2, sort_keys=True) + "\n", out)
    sys.exit(0 if payload["verified"] else 1)


def main(argv=None):
    cli.main(args=argv, prog_name="gapgreedy")


if __name__ == "__main__":
    main()
