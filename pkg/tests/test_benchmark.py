import json
from collections import Counter

import pytest

from citegate.benchmark import (TEMPERATURES, BenchmarkRecord, EchoCorruptionBackend,
                                FailingCorruptionBackend, HeuristicCorruptionBackend,
                                ScriptedCorruptionBackend, bucket_sizes, build_benchmark,
                                corrupt_batch, partition_collection, render_corruption_prompt)
from citegate.models import Label, RawCitation
from citegate.parser import parse_rule_based
from citegate.synthetic import POOL_SIZES, clean_pool, pool_982

VIREY = "[Virey, J., 2009, Probing dark energy with supernovae](https://arxiv.org/pdf/0804.0389.pdf)"


def _pool(sizes):
    return [RawCitation(f"c{k}-{i}", f"c{k}", f"[Doe, J., {2000 + i}, Title {k} {i}](https://x.org/{k}/{i})")
            for k, n in enumerate(sizes) for i in range(n)]


@pytest.mark.parametrize("n,sizes", [(10, (4, 3, 3)), (3, (1, 1, 1)), (1, (1, 0, 0)),
                                     (2, (2, 0, 0)), (20, (8, 6, 6)), (6, (2, 2, 2))])
def test_bucket_sizes(n, sizes):
    assert bucket_sizes(n) == sizes
    assert sum(sizes) == n


def test_partition_is_deterministic_and_seed_sensitive():
    ids = [f"id{i}" for i in range(30)]
    a = partition_collection(ids, 42)
    assert a == partition_collection(ids, 42)
    assert a != partition_collection(ids, 43)
    assert sorted(sum(map(list, a), [])) == sorted(ids)
    with pytest.raises(ValueError):
        partition_collection([])


def test_echo_backend_keeps_text_but_applies_labels():
    backend = EchoCorruptionBackend()
    records, summary = build_benchmark(_pool([10]), backend)
    assert Counter(r.label for r in records) == {Label.EXACT: 4, Label.MINOR: 3, Label.MAJOR: 3}
    assert all(r.corrupted == r.original for r in records)
    assert backend.calls == [("minor", 0.7, 3), ("major", 0.9, 3)]
    assert summary.failed_batches == 0


def test_failing_backend_falls_back_to_valid():
    sleeps = []
    backend = FailingCorruptionBackend()
    records, summary = build_benchmark(_pool([10]), backend, sleep=sleeps.append)
    assert len(records) == 10
    assert all(r.label is Label.EXACT and r.corrupted == r.original for r in records)
    assert summary.failed_batches == 2 and summary.fallback_records == 6
    # 1 + 3 retries per batch, exponential backoff between attempts
    assert backend.calls == 8
    assert sleeps == [0.5, 1.0, 2.0] * 2


def test_scripted_single_record_corruption():
    changed = "[Virey, J., 2008, Probing dark energy with supernovae](https://researchgate.net/pdf/0804.0389.pdf)"
    backend = ScriptedCorruptionBackend({VIREY: (changed, "year 2009 -> 2008; host changed")})
    [rec] = corrupt_batch([RawCitation("v", "c", VIREY)], "minor", "physics", "cosmology",
                          backend)
    assert rec.label is Label.MINOR
    assert rec.corrupted == changed
    p = parse_rule_based(rec.corrupted)
    assert p.year == 2008 and p.arxiv_id is None and "researchgate.net" in p.url


def test_misaligned_output_counts_as_failure():
    class Short:
        def corrupt(self, batch, *a, **k):
            return batch[:-1]
    out = corrupt_batch([RawCitation("a", "c", VIREY), RawCitation("b", "c", VIREY)], "major",
                        "t", "s", Short(), retries=0)
    assert [r.label for r in out] == [Label.EXACT, Label.EXACT]


def test_two_collections_balanced_separately():
    records, _ = build_benchmark(_pool([6, 6]), EchoCorruptionBackend())
    per = Counter((r.collection, r.label) for r in records)
    for coll in ("c0", "c1"):
        assert [per[(coll, lab)] for lab in Label] == [2, 2, 2]


def test_build_is_byte_identical_across_runs():
    pool = clean_pool()
    dumps = []
    for _ in range(2):
        records, _ = build_benchmark(pool, HeuristicCorruptionBackend())
        dumps.append("\n".join(json.dumps(r.to_dict(), sort_keys=True) for r in records))
    assert dumps[0] == dumps[1]


def test_982_pool_distribution_matches_enumeration():
    # independent count: per collection, floor(n/3) to each corrupted bucket
    minor = sum(n // 3 for n in POOL_SIZES)
    valid = sum(POOL_SIZES) - 2 * minor
    assert (len(POOL_SIZES), sum(POOL_SIZES)) == (42, 982)
    records, summary = build_benchmark(pool_982(), EchoCorruptionBackend())
    counts = Counter(r.label for r in records)
    assert counts == {Label.EXACT: valid, Label.MINOR: minor, Label.MAJOR: minor}
    assert (valid, minor) == (354, 314)
    assert summary.total == 982


def test_heuristic_backend_corrupts_recognisably():
    records, _ = build_benchmark(clean_pool(), HeuristicCorruptionBackend())
    for r in records:
        if r.label is Label.EXACT:
            continue
        assert r.corrupted != r.original and r.change_description
        before, after = parse_rule_based(r.original), parse_rule_based(r.corrupted)
        if r.label is Label.MINOR:
            assert after.year == before.year + 1 and after.title == before.title
        else:
            assert after.title != before.title and after.year == before.year + 5


def test_heuristic_backend_rejects_unknown_shapes():
    out = corrupt_batch([RawCitation("x", "c", "plain text 2001")], "minor", "t", "s",
                        HeuristicCorruptionBackend(), retries=0)
    assert out[0].label is Label.EXACT


def test_prompts():
    assert "{" not in render_corruption_prompt("minor")
    major = render_corruption_prompt("major", "astrophysics", "exoplanets")
    assert "astrophysics" in major and "exoplanets" in major
    with pytest.raises(ValueError):
        render_corruption_prompt("medium")
    assert TEMPERATURES == {"minor": 0.7, "major": 0.9}


def test_record_round_trip_and_invariants():
    r = BenchmarkRecord(3, "c", VIREY, VIREY + "x", Label.MAJOR, "changed", "id7")
    assert BenchmarkRecord.from_dict(json.loads(json.dumps(r.to_dict()))) == r
    assert r.to_dataset_row() == {"id": "id7", "collection": "c", "text": VIREY + "x",
                                  "gold_label": "major"}
    with pytest.raises(ValueError):
        BenchmarkRecord(0, "c", VIREY, VIREY + "x", Label.EXACT)


def test_duplicate_ids_rejected():
    pool = [RawCitation("a", "c", VIREY), RawCitation("a", "c", VIREY)]
    with pytest.raises(ValueError):
        build_benchmark(pool, EchoCorruptionBackend())
