import pytest

from claimgraph.errors import InputError
from claimgraph.pipeline import PipelineConfig, run_audit, score_pair
from claimgraph.providers import ProviderSet, StubOptions

from conftest import OUTPUT_TEXT, REVISED_OUTPUT_TEXT, SOURCE_TEXT


class TestRunAudit:
    def test_fixture_outcome_shape(self, stub_providers):
        outcome = run_audit(SOURCE_TEXT, OUTPUT_TEXT, PipelineConfig(), stub_providers)
        assert len(outcome.output_claims) == 2
        assert len(outcome.source_claims) == 3
        assert len(outcome.matchsets) == 2
        assert len(outcome.judgments) == len(outcome.assessments) == 2
        assert outcome.verdict.label == "hallucinated"
        assert outcome.graph is not None
        assert len(outcome.positions) == len(outcome.graph.nodes)

    def test_document_embeds_edge_verdicts(self, stub_providers):
        outcome = run_audit(SOURCE_TEXT, OUTPUT_TEXT, PipelineConfig(), stub_providers)
        edge_nli = [e["nli"] for e in outcome.document["edges"]]
        assert all(v is not None for v in edge_nli)
        assert all(abs(v["entail"] + v["neutral"] + v["contradict"] - 1.0) < 1e-6
                   for v in edge_nli)

    def test_clean_pair_consistent(self, stub_providers):
        outcome = run_audit(SOURCE_TEXT, REVISED_OUTPUT_TEXT, PipelineConfig(),
                            stub_providers)
        assert outcome.verdict.label == "consistent"
        assert all(a.color == "green" for a in outcome.assessments)

    def test_deterministic_documents(self, stub_providers):
        from claimgraph.graph import graph_json_bytes
        a = run_audit(SOURCE_TEXT, OUTPUT_TEXT, PipelineConfig(), stub_providers)
        b = run_audit(SOURCE_TEXT, OUTPUT_TEXT, PipelineConfig(), stub_providers)
        assert graph_json_bytes(a.document) == graph_json_bytes(b.document)

    def test_extraction_failure_empty_document(self):
        providers = ProviderSet.stubs(stub_options=StubOptions(fail_extraction=True))
        outcome = run_audit(SOURCE_TEXT, OUTPUT_TEXT,
                            PipelineConfig(strategy="triples"), providers)
        assert outcome.extraction_failed
        assert outcome.verdict.failure_forced
        assert outcome.document["nodes"] == []
        assert outcome.document["response"]["label"] == "hallucinated"

    def test_no_checkable_claims_forces_hallucinated(self, stub_providers):
        # Stub pattern table finds no triples in lowercase prose.
        outcome = run_audit("it rained all day.", "it rained all day.",
                            PipelineConfig(strategy="triples"), stub_providers)
        assert outcome.verdict.failure_forced
        assert outcome.verdict.label == "hallucinated"

    def test_empty_source_rejected(self, stub_providers):
        with pytest.raises(InputError):
            run_audit("  ", OUTPUT_TEXT, PipelineConfig(), stub_providers)

    def test_triples_strategy_end_to_end(self, stub_providers):
        source = "Alice founded Acme. Bob joined Acme."
        output = "Alice founded Acme."
        outcome = run_audit(source, output, PipelineConfig(strategy="triples"),
                            stub_providers)
        assert outcome.verdict.label == "consistent"
        assert all(c.kind == "triple" for c in outcome.output_claims)


class TestScorePair:
    def test_matches_run_audit_score(self, stub_providers):
        score, forced = score_pair(SOURCE_TEXT, OUTPUT_TEXT, PipelineConfig(),
                                   stub_providers)
        outcome = run_audit(SOURCE_TEXT, OUTPUT_TEXT, PipelineConfig(), stub_providers)
        assert not forced
        assert score == outcome.verdict.response_score

    def test_failure_forces_zero(self):
        providers = ProviderSet.stubs(stub_options=StubOptions(fail_extraction=True))
        score, forced = score_pair(SOURCE_TEXT, OUTPUT_TEXT,
                                   PipelineConfig(strategy="triples"), providers)
        assert (score, forced) == (0.0, True)

    def test_sici_radius_changes_hypothesis(self, stub_providers):
        # Radius 1 windows stop being substrings of single source sentences.
        source = "Alice opened the store on Monday. Bob works at the store."
        output = "Alice opened the store on Monday. Bob works at the store."
        score_r0, _ = score_pair(source, output, PipelineConfig(window_radius=0),
                                 stub_providers)
        score_r1, _ = score_pair(source, output, PipelineConfig(window_radius=1),
                                 stub_providers)
        assert score_r0 == 1.0
        assert score_r1 == 0.0
