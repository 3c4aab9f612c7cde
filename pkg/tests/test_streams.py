import io
import json

import pytest
from hypothesis import given, settings, strategies as st

from cello_eval.errors import MalformedRecord, NonMonotonicTimestamp, OutOfRange
from cello_eval.streams import (
    FramePacket,
    canonical_json,
    parse_frame_line,
    read_stream,
    serialize_frame,
)


def test_all_absent_record():
    packet = parse_frame_line('{"t_ms": 120, "hand": null, "pose": null, "bow": null, "strings": null}')
    assert packet == FramePacket(t_ms=120)


def test_missing_optional_keys_treated_as_absent():
    assert parse_frame_line('{"t_ms": 0}') == FramePacket(t_ms=0)


def test_wrong_hand_cardinality():
    rec = {"t_ms": 0, "hand": [[0.1, 0.2]] * 20}
    with pytest.raises(MalformedRecord):
        parse_frame_line(json.dumps(rec))


def test_coordinate_out_of_range():
    rec = {"t_ms": 0, "hand": [[0.1, 0.2]] * 20 + [[1.6, 0.2]]}
    with pytest.raises(OutOfRange):
        parse_frame_line(json.dumps(rec))


def test_slightly_out_of_frame_accepted():
    rec = {"t_ms": 0, "hand": [[-0.4, 1.4]] + [[0.1, 0.2]] * 20}
    packet = parse_frame_line(json.dumps(rec))
    assert packet.hand[0] == (-0.4, 1.4)


def test_bad_json_and_bad_t_ms():
    with pytest.raises(MalformedRecord):
        parse_frame_line("{not json")
    with pytest.raises(MalformedRecord):
        parse_frame_line('{"t_ms": -5}')
    with pytest.raises(MalformedRecord):
        parse_frame_line('{"t_ms": 3.5}')


def test_box_validation():
    with pytest.raises(MalformedRecord):
        parse_frame_line('{"t_ms": 0, "bow": {"cx": 0.5, "cy": 0.5}}')
    with pytest.raises(OutOfRange):
        parse_frame_line('{"t_ms": 0, "bow": {"cx": 0.5, "cy": 0.5, "w": -1, "h": 0.1, "theta_deg": 0}}')


# --- stream reader ---

def _reader(text):
    return read_stream(io.StringIO(text))


def test_empty_file():
    assert list(_reader("")) == []


def test_three_packets_in_order():
    text = "\n".join(f'{{"t_ms": {t}}}' for t in (0, 33, 66)) + "\n"
    assert [p.t_ms for p in _reader(text)] == [0, 33, 66]


def test_duplicate_timestamp_rejected_with_line_number():
    text = "\n".join(f'{{"t_ms": {t}}}' for t in (0, 33, 33))
    with pytest.raises(NonMonotonicTimestamp, match="line 3"):
        list(_reader(text))


def test_parse_error_carries_line_number():
    text = '{"t_ms": 0}\nnot json\n'
    with pytest.raises(MalformedRecord, match="line 2"):
        list(_reader(text))


def test_reader_yields_nothing_after_error():
    text = '{"t_ms": 0}\n{"t_ms": 0}\n{"t_ms": 99}\n'
    gen = _reader(text)
    assert next(gen).t_ms == 0
    with pytest.raises(NonMonotonicTimestamp):
        next(gen)
    with pytest.raises(StopIteration):
        next(gen)


# --- round-trip property ---

coords = st.floats(min_value=-0.5, max_value=1.5, allow_nan=False, width=64)
point2 = st.lists(coords, min_size=2, max_size=2)
point3 = st.lists(coords, min_size=3, max_size=3)


@st.composite
def canonical_boxes(draw):
    w = draw(st.floats(min_value=0.01, max_value=1.0))
    h = draw(st.floats(min_value=0.005, max_value=1.0).filter(lambda x: x <= w))
    return {
        "cx": draw(coords),
        "cy": draw(coords),
        "w": w,
        "h": h,
        # +0.0 folds -0.0 into 0.0; canonicalization would rewrite -0.0 anyway
        "theta_deg": draw(st.floats(min_value=-90.0, max_value=89.999).map(lambda v: v + 0.0)),
    }


@st.composite
def canonical_records(draw):
    return {
        "t_ms": draw(st.integers(min_value=0, max_value=10**9)),
        "hand": draw(st.none() | st.lists(point2, min_size=21, max_size=21)),
        "pose": draw(
            st.none()
            | st.fixed_dictionaries({"shoulder": point3, "elbow": point3, "wrist": point3})
        ),
        "bow": draw(st.none() | canonical_boxes()),
        "strings": draw(st.none() | canonical_boxes()),
    }


@settings(max_examples=1000, deadline=None)
@given(canonical_records())
def test_parse_serialize_round_trip(record):
    text = canonical_json(record)
    assert serialize_frame(parse_frame_line(text)) == text


@settings(max_examples=200, deadline=None)
@given(canonical_records())
def test_parsed_packets_satisfy_invariants(record):
    packet = parse_frame_line(canonical_json(record))
    if packet.hand is not None:
        assert len(packet.hand) == 21
        assert all(-0.5 <= c <= 1.5 for p in packet.hand for c in p)
    for box in (packet.bow, packet.strings):
        if box is not None:
            assert box.w >= box.h > 0
            assert -90 <= box.theta_deg < 90
