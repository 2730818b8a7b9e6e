"""Command-line entry points: serve the HTTP API, validate or convert
datasets, and render batch reports (figures + CSV).

Flags can also be set through ``CBX_``-prefixed environment variables
(CBX_PORT, CBX_DATA, CBX_CORS_ORIGIN, ...).
"""

from __future__ import annotations

import csv
import json
import sys
from pathlib import Path

import click

from .dataset import load_dataset
from .errors import EngineError
from .session import Session, SessionStore
from .trinary import OperatingPoint


@click.group()
def main():
    """Assessment workbench for continuously valued binary classifiers."""


def _load_or_die(path: str, normalize: bool):
    try:
        dataset, report = load_dataset(Path(path).read_text(), normalize=normalize)
    except EngineError as exc:
        raise click.ClickException(f"{exc.code}: {exc.message}") from None
    for w in report.warnings:
        click.echo(f"warning: {w.code}: {w.message}", err=True)
    if dataset is None:
        for e in report.errors:
            click.echo(f"error: {e.code}: {e.message}", err=True)
        raise click.ClickException("dataset failed validation")
    return dataset, report


@main.command()
@click.option("--port", envvar="CBX_PORT", default=8787, show_default=True, type=int)
@click.option("--host", envvar="CBX_HOST", default="127.0.0.1", show_default=True)
@click.option(
    "--data",
    envvar="CBX_DATA",
    type=click.Path(exists=True, dir_okay=False),
    default=None,
    help="Preload a session from an ingest file (JSON or CSV).",
)
@click.option("--cors-origin", envvar="CBX_CORS_ORIGIN", default=None)
@click.option("--normalize", is_flag=True, help="Min-max normalize out-of-range scores on preload.")
def serve(port, host, data, cors_origin, normalize):
    """Run the HTTP/JSON service."""
    import uvicorn

    from .service import create_app

    store = SessionStore()
    if data:
        dataset, report = _load_or_die(data, normalize)
        session = store.add(Session(dataset, report))
        click.echo(f"preloaded session {session.id} from {data}")
    app = create_app(store, cors_origin=cors_origin)
    uvicorn.run(app, host=host, port=port, log_level="warning")


@main.command()
@click.option("--data", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--normalize", is_flag=True)
def validate(data, normalize):
    """Validate an ingest file and print the report."""
    try:
        dataset, report = load_dataset(Path(data).read_text(), normalize=normalize)
    except EngineError as exc:
        raise click.ClickException(f"{exc.code}: {exc.message}") from None
    for e in report.errors:
        click.echo(f"error: {e.code}: {e.message}")
    for w in report.warnings:
        click.echo(f"warning: {w.code}: {w.message}")
    click.echo(json.dumps(report.counts, indent=2))
    if dataset is None:
        sys.exit(1)
    click.echo("dataset accepted")


@main.command()
@click.option("--data", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--out", required=True, type=click.Path(file_okay=False))
@click.option("--classifier", "classifiers", multiple=True, help="Restrict to these classifiers.")
@click.option("--normalize", is_flag=True)
@click.option("--bins", default=10, show_default=True, type=int)
@click.option("--resolution", default=20, show_default=True, type=int)
@click.option("--metric", default="accuracy", show_default=True)
@click.option("--threshold", default=0.5, show_default=True, type=float)
@click.option("--lower", default=0.5, show_default=True, type=float, help="Operating point lower threshold.")
@click.option("--upper", default=0.5, show_default=True, type=float, help="Operating point upper threshold.")
@click.option("--bandwidths", default="0.05,0.1,0.2", show_default=True)
def report(data, out, classifiers, normalize, bins, resolution, metric, threshold, lower, upper, bandwidths):
    """Render assessment figures (PNG) and their series (CSV) to a directory."""
    from .report import write_report

    dataset, _ = _load_or_die(data, normalize)
    try:
        bw = tuple(float(b) for b in bandwidths.split(",") if b.strip())
        written = write_report(
            dataset,
            out,
            classifiers=list(classifiers) or None,
            operating_point=OperatingPoint(lower, upper),
            bins=bins,
            grid_resolution=resolution,
            arc_metric=metric,
            arc_threshold=threshold,
            bandwidths=bw,
        )
    except EngineError as exc:
        raise click.ClickException(f"{exc.code}: {exc.message}") from None
    for path in written:
        click.echo(str(path))


@main.command()
@click.argument("input_file", type=click.Path(exists=True, dir_okay=False))
@click.option("-o", "--output", required=True, type=click.Path(dir_okay=False))
@click.option("--label-column", default="y_true", show_default=True)
@click.option("--id-column", default=None, help="Column holding instance ids (default: row number).")
@click.option(
    "--score-column",
    "score_columns",
    multiple=True,
    required=True,
    help="NAME=COLUMN pair; repeat for several classifiers.",
)
@click.option("--feature-column", "feature_columns", multiple=True)
@click.option("--classes", default=None, help="negative,positive (default: sorted observed labels).")
def convert(input_file, output, label_column, id_column, score_columns, feature_columns, classes):
    """Convert a prediction dump CSV (one row per item) to ingest JSON.

    Typical notebook export: a CSV with a y_true column and one probability
    column per model.
    """
    pairs = []
    for spec in score_columns:
        if "=" not in spec:
            raise click.ClickException(f"--score-column needs NAME=COLUMN, got {spec!r}")
        name, col = spec.split("=", 1)
        pairs.append((name, col))

    with open(input_file, newline="") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        raise click.ClickException("input file has no data rows")
    missing = [c for c in [label_column] + [c for _, c in pairs] if c not in rows[0]]
    if missing:
        raise click.ClickException(f"missing columns: {missing}")

    labels = sorted({r[label_column] for r in rows})
    if classes:
        neg, pos = (c.strip() for c in classes.split(","))
    elif len(labels) == 2:
        neg, pos = labels
    else:
        raise click.ClickException(
            f"need exactly two label values or an explicit --classes, saw {labels}"
        )

    instances = []
    classifiers = {name: {} for name, _ in pairs}
    for k, row in enumerate(rows):
        iid = row[id_column] if id_column else f"item-{k:06d}"
        features = {}
        for col in feature_columns:
            cell = (row.get(col) or "").strip()
            if not cell:
                continue
            try:
                features[col] = float(cell)
            except ValueError:
                features[col] = cell
        instances.append({"id": iid, "label": row[label_column], "features": features})
        for name, col in pairs:
            classifiers[name][iid] = float(row[col])

    payload = {
        "classes": [neg, pos],
        "instances": instances,
        "classifiers": [{"name": n, "scores": s} for n, s in classifiers.items()],
    }
    Path(output).write_text(json.dumps(payload, indent=1))
    click.echo(f"wrote {output} ({len(instances)} instances, {len(pairs)} classifiers)")


if __name__ == "__main__":
    main()
