"""Command-line entry points mirroring the export operations."""

import json

import click


@click.group()
def main():
    """Export trained Keras models to NNPF and emit reference predictions."""


def _manifest_json(manifest):
    return json.dumps({
        "source_model": manifest.source_model,
        "widths": manifest.widths,
        "activations": manifest.activations,
        "standardizer": manifest.standardizer is not None,
        "out_nnpf": manifest.out_nnpf,
    }, indent=2)


@main.command()
@click.option("--model", required=True, type=click.Path(exists=True))
@click.option("--metadata", type=click.Path(exists=True))
@click.option("--out", required=True, type=click.Path())
def dnn(model, metadata, out):
    """Convert a deterministic dense model to NNPF."""
    from .export import export_dnn
    click.echo(_manifest_json(export_dnn(model, metadata, out)))


@main.command()
@click.option("--model", required=True, type=click.Path(exists=True))
@click.option("--metadata", type=click.Path(exists=True))
@click.option("--out", required=True, type=click.Path())
def bnn(model, metadata, out):
    """Convert a mean-field variational dense model to NNPF."""
    from .export import export_bnn
    click.echo(_manifest_json(export_bnn(model, metadata, out)))


@main.command()
@click.option("--model", required=True, type=click.Path(exists=True))
@click.option("--metadata", type=click.Path(exists=True))
@click.option("--input", "input_csv", required=True, type=click.Path(exists=True))
@click.option("--out", required=True, type=click.Path())
@click.option("--samples", default=20000, show_default=True)
@click.option("--seed", default=123, show_default=True)
@click.option("--float32", is_flag=True,
              help="Run the forward pass at training precision.")
def reference(model, metadata, input_csv, out, samples, seed, float32):
    """Emit framework-side reference predictions for an input CSV."""
    from .export import emit_reference
    path = emit_reference(model, metadata, input_csv, out,
                          n_samples=samples, seed=seed, float32=float32)
    click.echo(json.dumps({"reference_csv": path}))


@main.command()
@click.option("--out-dir", required=True, type=click.Path())
@click.option("--quick", is_flag=True,
              help="Tiny epoch budget for smoke testing only.")
def fixtures(out_dir, quick):
    """Train and export the full fixture set."""
    from .fixtures import train_fixtures
    provenance = train_fixtures(out_dir, quick=quick)
    click.echo(json.dumps(provenance, indent=2))
