import io

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import insertion_sort
from vetmeter.errors import (
    DuplicateKey,
    EmptyTrace,
    MalformedLine,
    NegativeDuration,
    ZeroUnitSize,
)
from vetmeter.ingest import (
    aggregate_units,
    build_ordered_trace,
    group_samples,
    parse_trace,
    serialize_trace,
)
from vetmeter.trace_model import RecordSample

JSON_LINE = b'{"job":"j1","task":"m_0001","phase":"read-map","seq":0,"duration_ns":1200}\n'
CSV_DOC = b"job,task,phase,seq,duration_ns\nj1,m_0001,read-map,0,1200\n"
EXPECTED = RecordSample("j1", "m_0001", "read-map", 0, 1200)


def samples_of(durations, task="t"):
    return [RecordSample("j", task, "read-map", i, d) for i, d in enumerate(durations)]


def test_parse_jsonl_single_line():
    assert parse_trace(JSON_LINE, "jsonl") == [EXPECTED]


def test_parse_csv_row_matches_jsonl():
    assert parse_trace(CSV_DOC, "csv") == [EXPECTED]


def test_missing_fields_is_malformed():
    with pytest.raises(MalformedLine) as err:
        parse_trace(b'{"job":"j1"}\n', "jsonl")
    assert err.value.line_no == 1


def test_error_line_numbers():
    doc = JSON_LINE + b"not json\n"
    with pytest.raises(MalformedLine) as err:
        parse_trace(doc)
    assert err.value.line_no == 2
    bad_csv = CSV_DOC + b"j1,m_0001,read-map,1,-5\n"
    with pytest.raises(NegativeDuration) as err:
        parse_trace(bad_csv, "csv")
    assert err.value.line_no == 3


def test_negative_duration_jsonl():
    line = b'{"job":"j","task":"t","phase":"read-map","seq":0,"duration_ns":-1}'
    with pytest.raises(NegativeDuration):
        parse_trace(line)


@pytest.mark.parametrize("line", [
    b'{"job":"j","task":"t","phase":"read-map","seq":0,"duration_ns":1.5}',
    b'{"job":"j","task":"t","phase":"read-map","seq":true,"duration_ns":1}',
    b'{"job":"j","task":"t","phase":"read-map","seq":0,"duration_ns":1,"x":2}',
    b'[1,2,3]',
])
def test_jsonl_type_and_key_checks(line):
    with pytest.raises(MalformedLine):
        parse_trace(line)


def test_duplicate_key():
    with pytest.raises(DuplicateKey) as err:
        parse_trace(JSON_LINE + JSON_LINE)
    assert err.value.key == ("j1", "m_0001", "read-map", 0)


def test_csv_requires_header_and_plain_ids():
    with pytest.raises(MalformedLine):
        parse_trace(b"j1,m_0001,read-map,0,1200\n", "csv")
    with pytest.raises(MalformedLine):
        parse_trace(b"job,task,phase,seq,duration_ns\nj 1,m,read-map,0,1\n", "csv")


def test_accepts_streams():
    assert parse_trace(io.BytesIO(JSON_LINE)) == [EXPECTED]
    assert parse_trace(io.StringIO(CSV_DOC.decode()), "csv") == [EXPECTED]


def test_rejects_invalid_utf8():
    with pytest.raises(UnicodeDecodeError):
        parse_trace(b"\xff\xfe\n")


@pytest.mark.parametrize("durations, unit, expected", [
    ([1, 2, 3, 4, 5], 5, [15]),
    ([1, 2, 3], 2, [3, 3]),
    ([10] * 6, 1, [10] * 6),
])
def test_aggregate_units_examples(durations, unit, expected):
    units = aggregate_units(samples_of(durations), unit)
    assert [u.duration for u in units] == expected
    assert [u.seq for u in units] == list(range(len(expected)))


def test_zero_unit_size():
    with pytest.raises(ZeroUnitSize):
        aggregate_units(samples_of([1]), 0)


@given(st.lists(st.integers(0, 10**9), max_size=80), st.integers(1, 12))
def test_aggregation_conserves_total(durations, unit):
    units = aggregate_units(samples_of(durations), unit)
    assert sum(u.duration for u in units) == sum(durations)
    assert len(units) == -(-len(durations) // unit)


@pytest.mark.parametrize("durations, expected", [([5, 1, 3], [1, 3, 5]), ([2, 2, 2], [2, 2, 2])])
def test_build_ordered_trace_examples(durations, expected):
    tr = build_ordered_trace(samples_of(durations))
    assert tr.y.tolist() == expected


def test_build_ordered_trace_large_against_insertion_sort(rng):
    durations = rng.integers(0, 10**9, 10_000).tolist()
    tr = build_ordered_trace(samples_of(durations), unit_size=5)
    assert tr.n == 10_000 and tr.unit_size == 5
    assert np.all(np.diff(tr.y) >= 0)
    assert tr.y.tolist() == insertion_sort(durations[:2000] + durations[2000:])


def test_empty_trace():
    with pytest.raises(EmptyTrace):
        build_ordered_trace([])


ids = st.from_regex(r"[A-Za-z0-9_.-]{1,8}", fullmatch=True)
phases = st.sampled_from(["read-map", "spill", "merge", "shuffle", "sort", "reduce-write", "custom.x"])


@st.composite
def sample_lists(draw):
    keys = draw(st.lists(st.tuples(ids, ids, phases, st.integers(0, 10**6)), unique=True, max_size=30))
    return [RecordSample(j, t, p, s, draw(st.integers(0, 2**62))) for j, t, p, s in keys]


@given(sample_lists())
def test_serialize_parse_round_trip(samples):
    for fmt in ("jsonl", "csv"):
        assert parse_trace(serialize_trace(samples, fmt), fmt) == samples


def test_group_samples_orders_by_seq():
    s = [RecordSample("j", "a", "read-map", 2, 1), RecordSample("j", "a", "read-map", 0, 2),
         RecordSample("j", "b", "spill", 0, 3)]
    groups = group_samples(s, "read-map")
    assert list(groups) == [("j", "a", "read-map")]
    assert [x.seq for x in groups[("j", "a", "read-map")]] == [0, 2]
