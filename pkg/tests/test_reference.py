import json

import pytest

from conftest import REF_QUERIES, REF_SCHEMAS
from qrec import (
    load_log,
    load_snapshot,
    reference_queries,
    retrieve_relevant_domains,
    save_snapshot,
)
from qrec.errors import EmptyText, MalformedFile, NoUsableQueries
from qrec.reference import ReferenceRepository

# golden from tests/embedding_oracle.py
SIM_DELIVERIES_ADDRESSES = 0.627571632442


def test_load_log_groups(repo):
    labels = [g.domain_label for g in repo.groups]
    assert labels == sorted(labels)
    assert "customer order addresses" in labels
    assert all(g.queries for g in repo.groups)


def test_load_log_matches_fixture_counts():
    fresh = load_log(REF_SCHEMAS, REF_QUERIES)
    by_label = {g.domain_label: len(g.queries) for g in fresh.groups}
    assert by_label == {
        "customer order addresses": 8,
        "store product orders": 5,
        "concert singer": 4,
        "flight company": 3,
        "course teach": 4,
    }
    assert fresh.skipped_queries == 0


def test_load_log_dedupes_and_skips(tmp_path):
    queries = [
        {"db_id": "course_teach", "question": "q", "query": "SELECT course_name FROM course"},
        {"db_id": "course_teach", "question": "dup", "query": "SELECT course_name FROM course"},
        {"db_id": "course_teach", "question": "unsupported", "query": "DELETE FROM course"},
        {"db_id": "no_such_db", "question": "orphan", "query": "SELECT a FROM b"},
    ]
    path = tmp_path / "queries.json"
    path.write_text(json.dumps(queries))
    repo = load_log(REF_SCHEMAS, path)
    assert len(repo.groups) == 1
    assert len(repo.groups[0].queries) == 1
    assert repo.skipped_queries == 3


def test_load_log_all_skipped(tmp_path):
    path = tmp_path / "queries.json"
    path.write_text(json.dumps([{"db_id": "ghost", "question": "x", "query": "SELECT a FROM b"}]))
    with pytest.raises(NoUsableQueries):
        load_log(REF_SCHEMAS, path)


def test_load_log_malformed(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("[{ nope")
    with pytest.raises(MalformedFile):
        load_log(REF_SCHEMAS, bad)


def test_load_log_idempotent():
    assert load_log(REF_SCHEMAS, REF_QUERIES) == load_log(REF_SCHEMAS, REF_QUERIES)


def test_snapshot_round_trip(repo, tmp_path):
    path = tmp_path / "snap.json"
    save_snapshot(repo, path)
    assert load_snapshot(path) == repo


def test_retrieve_exact_label(repo):
    ranked = retrieve_relevant_domains(repo, "customer order addresses", 3)
    assert ranked[0][0].domain_label == "customer order addresses"
    assert ranked[0][1] == pytest.approx(1.0, abs=1e-9)


def test_retrieve_deliveries_pairing(repo):
    ranked = retrieve_relevant_domains(repo, "customer order deliveries", len(repo.groups))
    assert ranked[0][0].domain_label == "customer order addresses"
    assert ranked[0][1] == pytest.approx(SIM_DELIVERIES_ADDRESSES, abs=1e-9)
    unrelated = {"concert singer", "flight company", "course teach"}
    for group, score in ranked:
        if group.domain_label in unrelated:
            assert score < ranked[0][1]


def test_retrieve_prefix_and_monotone(repo):
    full = retrieve_relevant_domains(repo, "customer order deliveries", len(repo.groups))
    scores = [s for _, s in full]
    assert scores == sorted(scores, reverse=True)
    for k in range(1, len(full) + 1):
        assert retrieve_relevant_domains(repo, "customer order deliveries", k) == full[:k]


def test_retrieve_k_larger_than_groups(repo):
    assert len(retrieve_relevant_domains(repo, "anything at all", 99)) == len(repo.groups)


def test_retrieve_empty_target(repo):
    with pytest.raises(EmptyText):
        retrieve_relevant_domains(repo, "   ", 3)


def test_reference_queries_concatenation(repo):
    two = list(repo.groups[:2])
    flat = reference_queries(two)
    assert flat == list(two[0].queries) + list(two[1].queries)
    assert reference_queries([]) == []
    assert reference_queries(two) == reference_queries(two)


def test_duplicate_labels_rejected(repo):
    with pytest.raises(MalformedFile):
        ReferenceRepository(groups=(repo.groups[0], repo.groups[0]))
