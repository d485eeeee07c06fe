"""Command-line behaviors and exit codes."""

from __future__ import annotations

import json
import socket
import subprocess
import sys
import time
import urllib.request
from pathlib import Path

import pytest
from click.testing import CliRunner

from susrate.cli import main
from susrate.rating import RatingConfig, RatingEngine
from susrate.store import load_ontology, save_ontology

DATA = Path(__file__).resolve().parent.parent / "data"
SEED = DATA / "seed_ontology.json"


@pytest.fixture()
def runner():
    return CliRunner()


def write_scores(tmp_path, scores) -> str:
    path = tmp_path / "scores.json"
    path.write_text(json.dumps(scores))
    return str(path)


class TestValidate:
    def test_clean_ontology_exit_zero(self, runner):
        result = runner.invoke(main, ["validate", "--ontology", str(SEED)])
        assert result.exit_code == 0
        assert "0 error(s)" in result.output

    def test_overlap_warning_carries_epsilon(self, runner, tmp_path):
        from susrate.ontology import (
            Ontology,
            Preference,
            PreferenceTag,
            PrimitiveConcept,
            Product,
            ProductTag,
        )

        toy = Ontology(
            concepts=[PrimitiveConcept(c) for c in "abcd"],
            product_tags=[
                ProductTag("z1", "z1", frozenset({"a", "b"})),
                ProductTag("z2", "z2", frozenset({"b", "c"})),
            ],
            preference_tags=[
                PreferenceTag("w", "w", frozenset({"a", "b", "c"}), frozenset({"d"}))
            ],
            preferences=[Preference("P.1", "toy", "health", frozenset({"w"}))],
            products=[Product("p", "p", tag_ids=frozenset({"z1", "z2"}))],
        )
        path = tmp_path / "toy.json"
        save_ontology(toy, path)
        result = runner.invoke(main, ["validate", "--ontology", str(path)])
        assert result.exit_code == 0
        assert "+0.333333" in result.output

    def test_dangling_id_exit_one(self, runner, tmp_path):
        doc = json.loads(SEED.read_text())
        doc["products"][0]["tag_ids"].append("ghost")
        path = tmp_path / "broken.json"
        path.write_text(json.dumps(doc))
        result = runner.invoke(main, ["validate", "--ontology", str(path)])
        assert result.exit_code == 1

    def test_missing_file_exit_three(self, runner):
        result = runner.invoke(main, ["validate", "--ontology", "no-such-file.json"])
        assert result.exit_code == 3


class TestReduce:
    def test_extracts_shared_tags_and_reports_clean_overlap(self, runner, tmp_path):
        out = tmp_path / "reduced.json"
        result = runner.invoke(
            main, ["reduce", "--ontology", str(SEED), "--out", str(out)]
        )
        assert result.exit_code == 0, result.output
        assert "extracted shared." in result.output
        assert "0 residual overlap pair(s)" in result.output
        assert load_ontology(out).ontology is not None

    def test_already_reduced_is_identity(self, runner, tmp_path):
        first = tmp_path / "first.json"
        second = tmp_path / "second.json"
        runner.invoke(main, ["reduce", "--ontology", str(SEED), "--out", str(first)])
        result = runner.invoke(
            main, ["reduce", "--ontology", str(first), "--out", str(second)]
        )
        assert result.exit_code == 0
        assert "0 extracted tag(s)" in result.output
        assert first.read_bytes() == second.read_bytes()

    def test_conflict_exit_two(self, runner, tmp_path):
        doc = json.loads(SEED.read_text())
        doc["product_tags"].append({"id": "z.mystery", "name": "?", "concepts": []})
        doc["products"][0]["tag_ids"].append("z.mystery")
        doc["overrides"].append(
            {
                "product_tag_id": "z.mystery",
                "preference_tag_id": "vegan-diet",
                "score": "0.5",
                "source": "expert",
            }
        )
        path = tmp_path / "with-placeholder.json"
        path.write_text(json.dumps(doc))
        out = tmp_path / "reduced.json"
        result = runner.invoke(main, ["reduce", "--ontology", str(path), "--out", str(out)])
        assert result.exit_code == 2
        assert "conflict" in result.output.lower() or "conflict" in (result.stderr or "")


class TestRate:
    def test_neutral_scores_rate_everything_five(self, runner, tmp_path):
        scores = write_scores(tmp_path, {})
        result = runner.invoke(
            main,
            ["rate", "--ontology", str(SEED), "--scores", scores, "--format", "csv"],
        )
        assert result.exit_code == 0, result.output
        lines = result.output.strip().splitlines()[1:]
        assert lines
        for line in lines:
            assert line.split(",")[3] == "5.000000"

    def test_json_output_matches_library_bit_for_bit(self, runner, tmp_path):
        scores = {"H.12": 10.0, "E.1": 8.0, "H.7": 9.0}
        scores_path = write_scores(tmp_path, scores)
        result = runner.invoke(
            main,
            ["rate", "--ontology", str(SEED), "--scores", scores_path, "--format", "json"],
        )
        assert result.exit_code == 0, result.output
        payload = json.loads(result.output)
        loaded = load_ontology(SEED)
        engine = RatingEngine(loaded.ontology, RatingConfig())
        expected = engine.rank(scores)
        assert [r["product_id"] for r in payload["ratings"]] == [
            pid for pid, _ in expected
        ]
        for row, (_, rating) in zip(payload["ratings"], expected):
            assert row["raw"] == rating.raw
            assert row["scaled"] == rating.scaled
            assert row["strict_violation"] == rating.strict_violation

    def test_explain_sums_reconcile(self, runner, tmp_path):
        scores_path = write_scores(tmp_path, {"E.1": 9.0, "H.7": 2.0})
        result = runner.invoke(
            main,
            [
                "rate",
                "--ontology",
                str(SEED),
                "--scores",
                scores_path,
                "--explain",
                "--format",
                "json",
            ],
        )
        assert result.exit_code == 0, result.output
        payload = json.loads(result.output)
        ratings = {r["product_id"]: r for r in payload["ratings"]}
        for pid, explanation in payload["explanations"].items():
            if explanation["strict_violation"] is not None:
                continue
            for level in ("by_preference", "by_preference_tag", "by_product_tag"):
                total = explanation["beta"] + sum(explanation[level].values())
                assert total == pytest.approx(ratings[pid]["scaled"], abs=1e-9)

    def test_out_of_range_score_exit_one(self, runner, tmp_path):
        scores_path = write_scores(tmp_path, {"H.12": 11.0})
        result = runner.invoke(
            main, ["rate", "--ontology", str(SEED), "--scores", scores_path]
        )
        assert result.exit_code == 1
        assert "H.12" in (result.output + str(result.stderr))

    def test_deterministic_output(self, runner, tmp_path):
        scores_path = write_scores(tmp_path, {"E.2": 7.5, "S.3": 2.0})
        args = ["rate", "--ontology", str(SEED), "--scores", scores_path]
        assert runner.invoke(main, args).output == runner.invoke(main, args).output

    def test_parallel_explanations_identical(self, runner, tmp_path):
        scores_path = write_scores(tmp_path, {"E.1": 9.0, "H.7": 2.0})
        base = ["rate", "--ontology", str(SEED), "--scores", scores_path, "--explain"]
        serial = runner.invoke(main, base)
        threaded = runner.invoke(main, base + ["--parallel", "4"])
        assert serial.exit_code == threaded.exit_code == 0
        assert serial.output == threaded.output


class TestAnalyze:
    def test_matrix_and_histograms(self, runner):
        result = runner.invoke(
            main,
            ["analyze", "--ontology", str(SEED), "--level", "ontology", "--bins", "4"],
        )
        assert result.exit_code == 0, result.output
        payload = json.loads(result.output)
        ids = payload["preference_ids"]
        matrix = payload["matrix"]
        for i in range(len(ids)):
            for j in range(len(ids)):
                assert matrix[i][j] == matrix[j][i]
            if matrix[i][i] is not None:
                assert matrix[i][i] == pytest.approx(1.0)
        catalog_size = len(load_ontology(SEED).ontology.products)
        for counts in payload["densities"].values():
            assert sum(counts["counts"]) == catalog_size


class TestIngestCommand:
    def test_ingest_merges_catalog(self, runner, tmp_path):
        out = tmp_path / "merged.json"
        result = runner.invoke(
            main,
            [
                "ingest",
                "--ontology",
                str(SEED),
                "--csv",
                str(DATA / "sample_catalog.csv"),
                "--out",
                str(out),
            ],
        )
        assert result.exit_code == 0, result.output
        merged = load_ontology(out)
        assert "p.oat-drink" in merged.ontology.products


class TestServe:
    def test_serve_and_health_roundtrip(self, tmp_path):
        with socket.socket() as probe:
            probe.bind(("127.0.0.1", 0))
            port = probe.getsockname()[1]
        process = subprocess.Popen(
            [
                sys.executable,
                "-m",
                "susrate.cli",
                "serve",
                "--ontology",
                str(SEED),
                "--listen",
                f"127.0.0.1:{port}",
            ],
            stdout=subprocess.DEVNULL,
            stderr=subprocess.DEVNULL,
        )
        try:
            body = None
            for _ in range(50):
                try:
                    with urllib.request.urlopen(
                        f"http://127.0.0.1:{port}/v1/health", timeout=1
                    ) as response:
                        body = json.loads(response.read())
                    break
                except OSError:
                    time.sleep(0.2)
            assert body is not None, "service never came up"
            assert body["status"] == "ok"
        finally:
            process.terminate()
            process.wait(timeout=10)

    def test_bad_listen_address(self, runner):
        result = runner.invoke(
            main, ["serve", "--ontology", str(SEED), "--listen", "nope"]
        )
        assert result.exit_code == 1
