import json

import numpy as np
import pytest

from tscodec.coders.registry import CODERS
from tscodec.core import TimeSeries, entropy_and_limit
from tscodec.errors import TscodecError
from tscodec.harness import (
    ABLATION_CHAINS,
    ablation_markdown,
    ablation_rows,
    emit_report,
    parse_report_json,
    run_job,
    run_matrix,
    synthetic_matrix,
)
from tscodec.synth import SynthSpec, generate, suite
from tscodec.transforms import TransformChain, chain_apply


@pytest.fixture(scope="module")
def small_suite():
    return suite(n=3000, seed=0)


class TestRunJob:
    def test_constant_series_delta_rle0_expgolomb(self):
        series = TimeSeries(samples=np.full(1000, 500))
        rec = run_job(series, TransformChain(("delta", "rle0")), "expgolomb", dataset_name="const")
        # Token stream collapses to (500, 0, 999): a few bytes of payload.
        assert rec.cs > 0.9
        assert rec.roundtrip_ok
        assert rec.payload_bytes <= 8

    def test_noise_huffman_tracks_shannon_limit(self, small_suite):
        series = small_suite["noise"]
        rec = run_job(series, TransformChain(()), "huffman", dataset_name="noise")
        stats = entropy_and_limit(series)
        header_share = rec.header_bytes / rec.original_bytes
        assert abs(rec.cs - (stats.shannon_cs - header_share)) <= 0.05

    def test_sizes_add_up(self, small_suite):
        rec = run_job(small_suite["sine"], TransformChain(("delta",)), "range", dataset_name="sine")
        assert rec.compressed_bytes == rec.payload_bytes + rec.header_bytes
        assert rec.original_bytes == 2 * len(small_suite["sine"])

    def test_decoder_fault_is_fatal(self, small_suite, monkeypatch):
        # A coder whose decode corrupts one token must never yield a record.
        from tscodec.coders import registry

        real = CODERS["drh"]
        broken = registry.CoderInfo(
            name="drh",
            id_byte=real.id_byte,
            kind="symbol",
            encode=real.encode,
            decode=lambda h, p, n: real.decode(h, p, n) + 1,
        )
        monkeypatch.setitem(registry.CODERS, "drh", broken)
        monkeypatch.setitem(registry.CODER_BY_ID, real.id_byte, broken)
        with pytest.raises(TscodecError, match="round-trip mismatch"):
            run_job(small_suite["sine"], TransformChain(()), "drh", dataset_name="sine")

    def test_unavailable_backend_bubbles_up(self, small_suite):
        from tscodec.backends import is_available
        from tscodec.errors import BackendUnavailableError

        missing = [b for b in ("sprintz", "zstd", "brotli", "snappy") if not is_available(b)]
        if not missing:
            pytest.skip("all probed backends installed")
        with pytest.raises(BackendUnavailableError):
            run_job(small_suite["sine"], TransformChain(()), missing[0])

    def test_timing_fields_populated(self, small_suite):
        rec = run_job(small_suite["sine"], TransformChain(("delta",)), "bitpack", repetitions=2)
        assert rec.compress_seconds > 0
        assert rec.decompress_seconds > 0
        assert rec.speed_mb_s > 0


class TestRunMatrix:
    def test_empty_axis_errors(self, small_suite):
        with pytest.raises(ValueError, match="empty axis"):
            run_matrix({}, [TransformChain(())], ["drh"])
        with pytest.raises(ValueError, match="empty axis"):
            run_matrix(small_suite, [], ["drh"])
        with pytest.raises(ValueError, match="empty axis"):
            run_matrix(small_suite, [TransformChain(())], [])

    def test_full_synthetic_matrix_shape(self):
        result = synthetic_matrix(n=1500, seed=0, repetitions=1)
        assert len(result.records) == 4 * 4 * 6
        assert all(r.roundtrip_ok for r in result.records)
        assert not result.failures
        # 4 cases x 4 cumulative chains
        assert len(result.ablations) == 16

    def test_matrix_deterministic_scores(self):
        a = synthetic_matrix(n=1200, seed=5, repetitions=1)
        b = synthetic_matrix(n=1200, seed=5, repetitions=1)
        key = lambda r: (r.dataset, r.chain, r.coder)
        assert [key(r) for r in a.records] == [key(r) for r in b.records]
        assert [r.cs for r in a.records] == [r.cs for r in b.records]

    def test_unavailable_backend_becomes_na_cell(self, small_suite):
        from tscodec.backends import is_available

        missing = [b for b in ("sprintz", "zstd", "brotli") if not is_available(b)]
        if not missing:
            pytest.skip("all probed backends installed")
        result = run_matrix(
            {"sine": small_suite["sine"]}, [TransformChain(())], ["drh", missing[0]]
        )
        by_coder = {r.coder: r for r in result.records}
        assert by_coder[missing[0]].status == "n/a"
        assert not by_coder[missing[0]].roundtrip_ok
        assert by_coder["drh"].status == "ok"

    def test_level_sweep(self, small_suite):
        result = run_matrix(
            {"sine": small_suite["sine"]},
            [TransformChain(("delta",))],
            ["deflate"],
            levels={"deflate": [1, 9]},
            repetitions=1,
        )
        assert [r.level for r in result.records] == [1, 9]
        assert result.records[1].cs > result.records[0].cs

    def test_worker_pool_matches_serial(self, small_suite):
        datasets = {"sine": small_suite["sine"], "noise": small_suite["noise"]}
        chains = [TransformChain(()), TransformChain(("delta",))]
        serial = run_matrix(datasets, chains, ["drh", "bitpack"], repetitions=1, workers=1)
        parallel = run_matrix(datasets, chains, ["drh", "bitpack"], repetitions=1, workers=2)
        key = lambda r: (r.dataset, r.chain, r.coder, r.cs)
        assert [key(r) for r in serial.records] == [key(r) for r in parallel.records]


class TestShannonDominance:
    def test_payload_cs_never_beats_post_transform_limit(self, small_suite):
        # Order-0 coders cannot compress the token stream below its
        # entropy; 1/16 of slack covers the +1-bit prefix-code bound.
        for case, series in small_suite.items():
            for label in ABLATION_CHAINS:
                chain = TransformChain.parse(label)
                tokens, _ = chain_apply(series, chain)
                limit = entropy_and_limit(tokens)
                token_limit_bytes = len(tokens) * limit.entropy_bits / 8
                for coder in ("expgolomb", "bitpack", "huffman", "drh", "range"):
                    rec = run_job(series, chain, coder, repetitions=1, dataset_name=case)
                    payload_cs = 1 - rec.payload_bytes / rec.original_bytes
                    shannon_cs_tokens = 1 - token_limit_bytes / rec.original_bytes
                    assert payload_cs <= shannon_cs_tokens + 1 / 16 + 1e-9, (case, label, coder)


class TestAblation:
    def test_rows_follow_fixed_chain_order(self, small_suite):
        rows = ablation_rows({"sine": small_suite["sine"]})
        assert [r.chain for r in rows] == ["none", "delta", "delta,rle0", "delta,rle0,quars"]

    def test_directional_pattern(self):
        rows = ablation_rows({"sine": generate(SynthSpec(case="sine", n=10000, seed=0))})
        by_chain = {r.chain: r for r in rows}
        assert by_chain["none"].cardinality > 500
        assert by_chain["delta"].cardinality <= 20
        assert by_chain["delta,rle0,quars"].cardinality == by_chain["delta,rle0"].cardinality

    def test_markdown_table_shape(self, small_suite):
        rows = ablation_rows(small_suite)
        text = ablation_markdown(rows)
        lines = text.strip().splitlines()
        assert lines[0].startswith("| case |")
        assert len(lines) == 2 + len(small_suite)


class TestReports:
    @pytest.fixture()
    def records(self, small_suite):
        result = run_matrix(
            {"sine": small_suite["sine"]},
            [TransformChain(()), TransformChain(("delta",))],
            ["huffman", "drh"],
            repetitions=1,
        )
        return result

    def test_csv_row_count_and_quoting(self, records):
        text = emit_report(records.records, "csv", metadata=records.metadata).decode()
        lines = [l for l in text.splitlines() if not l.startswith("#")]
        assert len(lines) == 1 + len(records.records)
        assert lines[0].startswith("dataset,chain,coder")
        meta_lines = [l for l in text.splitlines() if l.startswith("#")]
        assert any("tool_version" in l for l in meta_lines)
        assert any("repetitions" in l for l in meta_lines)

    def test_csv_preserves_negative_cs(self, small_suite):
        rng = np.random.default_rng(0)
        noisy = TimeSeries(samples=rng.integers(-32768, 32768, 400))
        rec = run_job(noisy, TransformChain(()), "huffman", dataset_name="hostile")
        assert rec.cs < 0
        text = emit_report([rec], "csv").decode()
        row = [l for l in text.splitlines() if not l.startswith("#")][1]
        assert float(row.split(",")[9]) == pytest.approx(rec.cs)

    def test_markdown_clamps_negative_cs(self, small_suite):
        rng = np.random.default_rng(0)
        noisy = TimeSeries(samples=rng.integers(-32768, 32768, 400))
        rec = run_job(noisy, TransformChain(()), "huffman", dataset_name="hostile")
        text = emit_report([rec], "markdown-table").decode()
        assert "| 0.000 |" in text

    def test_json_roundtrip(self, records):
        payload = emit_report(
            records.records, "json-plotdata", ablations=records.ablations, metadata=records.metadata
        )
        doc = parse_report_json(payload)
        assert len(doc["records"]) == len(records.records)
        assert doc["plots"]["score_speed"]
        assert doc["plots"]["score_vs_chain"]["sine"]
        assert doc["metadata"]["repetitions"] == 1
        # parse(emit(parse(emit))) is stable
        again = parse_report_json(json.dumps(doc).encode())
        assert again == doc

    def test_unknown_format_errors(self, records):
        with pytest.raises(ValueError, match="unknown report format"):
            emit_report(records.records, "xml")

    def test_empty_records_error(self):
        with pytest.raises(ValueError, match="no records"):
            emit_report([], "csv")

    def test_na_cells_never_enter_tables(self, records):
        from tscodec.harness import _na_record

        na = _na_record("sine", TransformChain(()), "zstd", None, "missing")
        text = emit_report(records.records + [na], "csv").decode()
        assert "zstd" not in [l.split(",")[2] for l in text.splitlines() if not l.startswith("#")][1:]
        doc = parse_report_json(emit_report(records.records + [na], "json-plotdata"))
        assert len(doc["na_cells"]) == 1
