import os

import pytest

try:
    import streamsynth as ss
except ImportError:
    ss = pytest.importorskip("_core")

FIXTURE = os.path.join(
    os.environ.get("STREAMSYNTH_TEST_DATA_DIR", "tests/data"), "fixture_200.jsonl"
)
TEMPLATES = os.environ.get("STREAMSYNTH_TEMPLATES", "templates")


def test_tokenize_and_richness():
    assert ss.tokenize("Great, GREAT buy!") == ["great", "great", "buy"]
    assert ss.richness(["a b c"]) == pytest.approx(1.0)
    assert ss.richness([]) is None


def test_parse_review_line():
    r = ss.parse_review_line(
        '{"reviewerID": "u1", "asin": "p1", "unixReviewTime": 7, '
        '"overall": 4.0, "reviewText": "ok"}'
    )
    assert (r.user_id, r.product_id, r.timestamp, r.rating, r.text) == (
        "u1",
        "p1",
        7,
        4,
        "ok",
    )


def test_session_stats_and_neighborhoods():
    s = ss.Session(FIXTURE, n_spans=10)
    stats = s.stats()
    assert stats["total_reviews"] == 200
    assert stats["distinct_users"] == len(
        {r.user_id for r in s.records}
    )
    some_user = s.records[0].user_id
    firsts = s.first_order(some_user)
    assert firsts  # the user reviewed something
    for p in firsts:
        assert some_user in s.first_order(p, user_side=False)


def test_classify_covers_all_users():
    s = ss.Session(FIXTURE)
    cats = s.classify()
    assert set(cats) == {r.user_id for r in s.records}
    assert set(cats.values()) <= {"Normal", "MidTail", "LongTail", "Extreme"}


def test_synthesize_deterministic():
    s = ss.Session(FIXTURE)
    a = s.synthesize(TEMPLATES, seed=123)
    b = s.synthesize(TEMPLATES, seed=123, workers=4)
    assert a["failure_count"] == 0
    assert a["synthetic_count"] == len(s.plan())
    assert a["lines"] == b["lines"]
