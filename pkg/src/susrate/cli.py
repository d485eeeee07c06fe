"""Operator command line: validate, reduce, ingest, rate, analyze, serve.

Preference scores only ever enter through a local file consumed by
`rate`; `serve` has no score-bearing flag, mirroring the client/server
privacy split.  Every flag is mirrored by a SUSRATE_-prefixed
environment variable.

Exit codes: 0 success, 1 validation/integrity failure, 2 reduction
conflict, 3 I/O failure.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path
from typing import Optional

import click

from . import analysis
from .explain import explain as explain_rating
from .ontology import apply_reduction_principle, overlap_error
from .rating import (
    STRATEGIES,
    THEORETICAL_UNREDUCED_CLIPPED,
    RatingConfig,
    RatingEngine,
    RatingError,
)
from .store import (
    IntegrityError,
    LoadedOntology,
    ParseError,
    ingest_products,
    load_ontology,
    report_lines,
    save_ontology,
)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_REDUCTION_CONFLICT = 2
EXIT_IO = 3


def _fail(code: int, message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _load(path: str) -> LoadedOntology:
    try:
        return load_ontology(path)
    except FileNotFoundError:
        _fail(EXIT_IO, f"cannot read {path!r}")
    except OSError as exc:
        _fail(EXIT_IO, str(exc))
    except (ParseError, IntegrityError) as exc:
        _fail(EXIT_VALIDATION, str(exc))
    raise AssertionError("unreachable")


def _number(value: float) -> str:
    return f"{value:.6f}"


ontology_option = click.option(
    "--ontology", required=True, envvar="SUSRATE_ONTOLOGY",
    help="Path to the knowledge-base JSON document.",
)
format_option = click.option(
    "--format", "fmt", type=click.Choice(["json", "csv"]), default="json",
    envvar="SUSRATE_FORMAT", show_default=True, help="Output file format.",
)
out_option = click.option(
    "--out", default=None, envvar="SUSRATE_OUT",
    help="Output path (stdout when omitted).",
)


def rating_options(command):
    for option in (
        click.option("--alpha", type=float, default=5.0, envvar="SUSRATE_ALPHA",
                     show_default=True, help="Rating scale factor."),
        click.option("--beta", type=float, default=5.0, envvar="SUSRATE_BETA",
                     show_default=True, help="Rating scale offset."),
        click.option("--tau", type=float, default=1.0, envvar="SUSRATE_TAU",
                     show_default=True, help="Aggregate clip threshold."),
        click.option("--strategy", type=click.Choice(list(STRATEGIES)),
                     default=THEORETICAL_UNREDUCED_CLIPPED,
                     envvar="SUSRATE_STRATEGY", show_default=True,
                     help="Reference product strategy."),
    ):
        command = option(command)
    return command


def _config(alpha: float, beta: float, tau: float, strategy: str) -> RatingConfig:
    try:
        return RatingConfig(alpha=alpha, beta=beta, tau=tau, reference_strategy=strategy)
    except RatingError as exc:
        _fail(EXIT_VALIDATION, str(exc))
    raise AssertionError("unreachable")


def _write(text: str, out: Optional[str]) -> None:
    if out is None:
        click.echo(text, nl=False)
        return
    try:
        Path(out).write_text(text, encoding="utf-8")
    except OSError as exc:
        _fail(EXIT_IO, str(exc))


@click.group()
def main() -> None:
    """Sustainability knowledge-base and product-rating toolkit."""


@main.command()
@ontology_option
def validate(ontology: str) -> None:
    """Check a knowledge base and report findings incl. overlap errors."""
    loaded = _load(ontology)
    for line in report_lines(loaded.report):
        click.echo(line)
    errors = loaded.report.errors
    click.echo(
        f"{len(errors)} error(s), {len(loaded.report.warnings)} warning(s); "
        f"version {loaded.version}"
    )
    sys.exit(EXIT_OK if not errors else EXIT_VALIDATION)


@main.command()
@ontology_option
@click.option("--out", required=True, envvar="SUSRATE_OUT",
              help="Where to write the reduced document.")
def reduce(ontology: str, out: str) -> None:
    """Rewrite the ontology so co-assigned product tags share no concepts."""
    loaded = _load(ontology)
    result = apply_reduction_principle(loaded.ontology)
    for tag_id in result.extracted_tag_ids:
        click.echo(f"extracted {tag_id}")
    for conflict in result.conflicts:
        click.echo(
            f"conflict: {conflict.product_tag_ids[0]} / "
            f"{conflict.product_tag_ids[1]}: {conflict.reason}",
            err=True,
        )
    reduced = result.ontology
    residual = 0
    for product in reduced.products.values():
        for pref_tag in reduced.preference_tags.values():
            if abs(overlap_error(reduced, product, pref_tag)) > 1e-12:
                residual += 1
    try:
        save_ontology(reduced, out, loaded.rules)
    except OSError as exc:
        _fail(EXIT_IO, str(exc))
    click.echo(
        f"wrote {out}: {len(result.extracted_tag_ids)} extracted tag(s), "
        f"{residual} residual overlap pair(s)"
    )
    sys.exit(EXIT_REDUCTION_CONFLICT if result.conflicts else EXIT_OK)


@main.command()
@ontology_option
@click.option("--csv", "csv_path", required=True, envvar="SUSRATE_CSV",
              help="Product catalog CSV to merge.")
@click.option("--out", required=True, envvar="SUSRATE_OUT",
              help="Where to write the merged document.")
def ingest(ontology: str, csv_path: str, out: str) -> None:
    """Merge a product catalog CSV and re-run tag assignment rules."""
    loaded = _load(ontology)
    try:
        merged = ingest_products(csv_path, loaded.ontology, loaded.rules)
    except FileNotFoundError:
        _fail(EXIT_IO, f"cannot read {csv_path!r}")
    except ParseError as exc:
        _fail(EXIT_VALIDATION, str(exc))
    try:
        save_ontology(merged, out, loaded.rules)
    except OSError as exc:
        _fail(EXIT_IO, str(exc))
    click.echo(f"wrote {out}: {len(merged.products)} product(s)")


def _read_scores(path: str) -> dict[str, float]:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError:
        _fail(EXIT_IO, f"cannot read {path!r}")
    except OSError as exc:
        _fail(EXIT_IO, str(exc))
    except json.JSONDecodeError as exc:
        _fail(EXIT_VALIDATION, f"{path}: {exc}")
    if not isinstance(data, dict):
        _fail(EXIT_VALIDATION, f"{path}: expected an object of preference scores")
    try:
        return {str(k): float(v) for k, v in data.items()}
    except (TypeError, ValueError):
        _fail(EXIT_VALIDATION, f"{path}: scores must be numbers")
    raise AssertionError("unreachable")


@main.command()
@ontology_option
@click.option("--scores", required=True, envvar="SUSRATE_SCORES",
              help="Local JSON file of preference scores (never sent anywhere).")
@click.option("--products", default=None, envvar="SUSRATE_PRODUCTS",
              help="Comma-separated product ids (default: whole catalog).")
@click.option("--explain", "with_explanations", is_flag=True,
              envvar="SUSRATE_EXPLAIN", help="Attach contribution breakdowns.")
@click.option("--parallel", type=int, default=1, envvar="SUSRATE_PARALLEL",
              show_default=True,
              help="Worker threads for catalog-wide explanation batches.")
@rating_options
@format_option
@out_option
def rate(
    ontology: str,
    scores: str,
    products: Optional[str],
    with_explanations: bool,
    parallel: int,
    alpha: float,
    beta: float,
    tau: float,
    strategy: str,
    fmt: str,
    out: Optional[str],
) -> None:
    """Rank products by personalized rating from a local score file."""
    loaded = _load(ontology)
    cfg = _config(alpha, beta, tau, strategy)
    score_vector = _read_scores(scores)
    engine = RatingEngine(loaded.ontology, cfg)
    try:
        ranked = engine.rank(score_vector)
    except RatingError as exc:
        _fail(EXIT_VALIDATION, str(exc))
    if products is not None:
        wanted = [p.strip() for p in products.split(",") if p.strip()]
        unknown = [p for p in wanted if p not in loaded.ontology.products]
        if unknown:
            _fail(EXIT_VALIDATION, f"unknown products: {unknown}")
        keep = set(wanted)
        ranked = [(pid, rating) for pid, rating in ranked if pid in keep]

    explanations = {}
    if with_explanations:
        def explanation_entry(pid: str) -> tuple[str, dict]:
            explanation = explain_rating(
                loaded.ontology, loaded.ontology.products[pid], score_vector, cfg
            )
            return pid, {
                "beta": explanation.beta,
                "strict_violation": explanation.strict_violation,
                "by_preference": explanation.preference_contributions,
                "by_preference_tag": explanation.preference_tag_contributions,
                "by_product_tag": explanation.product_tag_contributions,
            }

        ids = [pid for pid, _rating in ranked]
        if parallel > 1:
            from concurrent.futures import ThreadPoolExecutor

            with ThreadPoolExecutor(max_workers=parallel) as pool:
                explanations = dict(pool.map(explanation_entry, ids))
        else:
            explanations = dict(explanation_entry(pid) for pid in ids)

    if fmt == "json":
        payload = {
            "ontology_version": loaded.version,
            "ratings": [
                {
                    "rank": i + 1,
                    "product_id": pid,
                    "raw": rating.raw,
                    "scaled": rating.scaled,
                    "strict_violation": rating.strict_violation,
                }
                for i, (pid, rating) in enumerate(ranked)
            ],
        }
        if with_explanations:
            payload["explanations"] = explanations
        _write(json.dumps(payload, indent=2) + "\n", out)
    else:
        lines = ["rank,product_id,raw,scaled,strict_violation"]
        for i, (pid, rating) in enumerate(ranked):
            lines.append(
                f"{i + 1},{pid},{_number(rating.raw)},{_number(rating.scaled)},"
                f"{rating.strict_violation or ''}"
            )
        _write("\n".join(lines) + "\n", out)


@main.command()
@ontology_option
@rating_options
@format_option
@out_option
def indices(
    ontology: str, alpha: float, beta: float, tau: float, strategy: str,
    fmt: str, out: Optional[str],
) -> None:
    """Export the per-product, per-preference sustainability indices."""
    loaded = _load(ontology)
    engine = RatingEngine(loaded.ontology, _config(alpha, beta, tau, strategy))
    if fmt == "json":
        payload = {
            "ontology_version": loaded.version,
            "preference_ids": engine.preference_ids,
            "indices": {pid: engine.indices(pid) for pid in engine.product_ids},
        }
        _write(json.dumps(payload, indent=2) + "\n", out)
    else:
        lines = ["product_id," + ",".join(engine.preference_ids)]
        for pid in engine.product_ids:
            row = engine.indices(pid)
            lines.append(
                pid + "," + ",".join(_number(row[q]) for q in engine.preference_ids)
            )
        _write("\n".join(lines) + "\n", out)


@main.command()
@ontology_option
@click.option("--level", type=click.Choice([analysis.ONTOLOGY_LEVEL, analysis.PRODUCT_LEVEL]),
              default=analysis.ONTOLOGY_LEVEL, envvar="SUSRATE_LEVEL",
              show_default=True, help="Interaction matrix level.")
@click.option("--bins", type=int, default=10, envvar="SUSRATE_BINS",
              show_default=True, help="Histogram bins over [-1, 1].")
@rating_options
@format_option
@out_option
def analyze(
    ontology: str, level: str, bins: int, alpha: float, beta: float,
    tau: float, strategy: str, fmt: str, out: Optional[str],
) -> None:
    """Preference interaction matrix plus index distributions."""
    loaded = _load(ontology)
    cfg = _config(alpha, beta, tau, strategy)
    matrix = analysis.interaction_matrix(loaded.ontology, level, cfg)
    engine = RatingEngine(loaded.ontology, cfg)
    histograms = {
        pid: analysis.index_density(engine, pid, bins)
        for pid in engine.preference_ids
    }
    if fmt == "json":
        payload = {
            "ontology_version": loaded.version,
            "level": matrix.level,
            "preference_ids": list(matrix.preference_ids),
            "matrix": [list(row) for row in matrix.values],
            "densities": {
                pid: {"edges": list(h.edges), "counts": list(h.counts)}
                for pid, h in histograms.items()
            },
        }
        _write(json.dumps(payload, indent=2) + "\n", out)
    else:
        lines = ["preference," + ",".join(matrix.preference_ids)]
        for i, pid in enumerate(matrix.preference_ids):
            cells = [
                "" if v is None else _number(v) for v in matrix.values[i]
            ]
            lines.append(pid + "," + ",".join(cells))
        lines.append("")
        lines.append("preference,bin_left,bin_right,count")
        for pid in engine.preference_ids:
            histogram = histograms[pid]
            for b in range(len(histogram.counts)):
                lines.append(
                    f"{pid},{_number(histogram.edges[b])},"
                    f"{_number(histogram.edges[b + 1])},{histogram.counts[b]}"
                )
        _write("\n".join(lines) + "\n", out)


@main.command()
@ontology_option
@click.option("--listen", default="127.0.0.1:8080", envvar="SUSRATE_LISTEN",
              show_default=True, help="host:port to bind.")
@click.option("--page-size-cap", type=int, default=500,
              envvar="SUSRATE_PAGE_SIZE_CAP", show_default=True,
              help="Maximum page size served by /v1/products.")
@rating_options
def serve(
    ontology: str, listen: str, page_size_cap: int, alpha: float,
    beta: float, tau: float, strategy: str,
) -> None:
    """Run the read-only index service (no score ever reaches it)."""
    import logging

    import uvicorn

    from .service import ServiceState, create_app

    logging.basicConfig(
        level=logging.INFO, format="%(asctime)s %(name)s %(message)s"
    )
    cfg = _config(alpha, beta, tau, strategy)
    state = ServiceState(ontology, cfg, page_size_cap)
    try:
        state.reload()
    except FileNotFoundError:
        _fail(EXIT_IO, f"cannot read {ontology!r}")
    except (ParseError, IntegrityError) as exc:
        _fail(EXIT_VALIDATION, str(exc))
    host, _, port_text = listen.rpartition(":")
    if not host or not port_text.isdigit():
        _fail(EXIT_VALIDATION, f"bad listen address {listen!r}")
    try:
        # uvicorn's own access log would record client addresses; the app
        # middleware logs requests without them instead.
        uvicorn.run(create_app(state), host=host, port=int(port_text), access_log=False)
    except OSError as exc:
        _fail(EXIT_IO, f"cannot bind {listen!r}: {exc}")


if __name__ == "__main__":
    main()
