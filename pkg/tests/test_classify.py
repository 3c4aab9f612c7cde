import numpy as np
import pytest

from cello_eval import features, mlp
from cello_eval.classify import (
    ElbowClass,
    FrameResult,
    WristClass,
    check_models,
    classify_frame,
    result_to_dict,
)
from cello_eval.errors import ModelShapeMismatch
from cello_eval.geometry import BowAngle, BowConfig, BowHeight, OrientedBox, classify_bow
from cello_eval.streams import FramePacket, PoseTriplet
from cello_eval.synth import hand_template, rotate_hand

CFG = BowConfig()
STRINGS = OrientedBox(0.5, 0.5, 0.5, 0.1, -90.0)
BOW_OK = OrientedBox(0.5, 0.5, 0.6, 0.05, 0.0)


def hand_pts(angle=0.0):
    return tuple(map(tuple, rotate_hand(hand_template(), angle) + 0.5))


POSE = PoseTriplet((0.3, 0.4, 0.0), (0.55, 0.42, 0.05), (0.75, 0.3, 0.0))


def test_empty_packet_is_total(wrist_model, elbow_model):
    result = classify_frame(FramePacket(t_ms=0), wrist_model, elbow_model, CFG)
    assert result.wrist is WristClass.UNDETECTED and result.wrist_probs is None
    assert result.elbow is ElbowClass.UNDETECTED and result.elbow_probs is None
    assert not result.bow.in_zone and not result.bow_detected
    assert result.wrist_correct is None and result.elbow_correct is None
    assert result.bow_height_correct is None and result.bow_angle_correct is None


def test_hand_only_packet(wrist_model, elbow_model):
    packet = FramePacket(t_ms=0, hand=hand_pts())
    result = classify_frame(packet, wrist_model, elbow_model, CFG)
    assert result.wrist is not WristClass.UNDETECTED
    assert result.wrist_probs is not None and abs(sum(result.wrist_probs) - 1) < 1e-9
    assert result.elbow is ElbowClass.UNDETECTED
    assert result.bow.height is BowHeight.NOT_APPLICABLE


def test_degenerate_hand_is_undetected(wrist_model, elbow_model):
    packet = FramePacket(t_ms=0, hand=tuple([(0.5, 0.5)] * 21))
    result = classify_frame(packet, wrist_model, elbow_model, CFG)
    assert result.wrist is WristClass.UNDETECTED


def test_composition_oracle(wrist_model, elbow_model):
    packet = FramePacket(t_ms=42, hand=hand_pts(35.0), pose=POSE, bow=BOW_OK, strings=STRINGS)
    result = classify_frame(packet, wrist_model, elbow_model, CFG)

    wrist_probs = mlp.forward(wrist_model, features.normalize_hand(packet.hand))
    assert result.wrist.value == wrist_model.class_labels[int(np.argmax(wrist_probs))]
    assert np.allclose(result.wrist_probs, wrist_probs)
    elbow_probs = mlp.forward(elbow_model, features.elbow_features(POSE))
    assert result.elbow.value == elbow_model.class_labels[int(np.argmax(elbow_probs))]
    assert result.bow == classify_bow(BOW_OK, STRINGS, CFG)


def test_replay_yields_identical_results(wrist_model, elbow_model):
    packet = FramePacket(t_ms=1, hand=hand_pts(10.0), pose=POSE, bow=BOW_OK, strings=STRINGS)
    r1 = classify_frame(packet, wrist_model, elbow_model, CFG)
    r2 = classify_frame(packet, wrist_model, elbow_model, CFG)
    assert r1 == r2


def test_category_independence(wrist_model, elbow_model):
    base = FramePacket(t_ms=0, hand=hand_pts(35.0), pose=POSE, bow=BOW_OK, strings=STRINGS)
    moved_bow = FramePacket(
        t_ms=0, hand=base.hand, pose=base.pose,
        bow=OrientedBox(0.5, 0.3, 0.6, 0.05, 20.0), strings=STRINGS,
    )
    r1 = classify_frame(base, wrist_model, elbow_model, CFG)
    r2 = classify_frame(moved_bow, wrist_model, elbow_model, CFG)
    assert (r1.wrist, r1.elbow) == (r2.wrist, r2.elbow)
    assert r1.wrist_probs == r2.wrist_probs

    new_hand = FramePacket(t_ms=0, hand=hand_pts(-35.0), pose=base.pose, bow=BOW_OK, strings=STRINGS)
    r3 = classify_frame(new_hand, wrist_model, elbow_model, CFG)
    assert r3.bow == r1.bow


def test_correctness_flags(wrist_model, elbow_model):
    result = FrameResult(
        t_ms=0,
        wrist=WristClass.SUPINATED, wrist_probs=(0.1, 0.8, 0.1),
        elbow=ElbowClass.NORMAL, elbow_probs=(0.9, 0.05, 0.05),
        bow=classify_bow(BOW_OK, STRINGS, CFG),
        bow_detected=True,
    )
    assert result.wrist_correct is False
    assert result.elbow_correct is True
    assert result.bow_height_correct is True and result.bow_angle_correct is True


def test_check_models_rejects_wrong_shapes(wrist_model, elbow_model):
    with pytest.raises(ModelShapeMismatch):
        check_models(elbow_model, elbow_model)
    with pytest.raises(ModelShapeMismatch):
        check_models(wrist_model, wrist_model)
    check_models(wrist_model, elbow_model)


def test_result_serialization_shape(wrist_model, elbow_model):
    packet = FramePacket(t_ms=7, hand=hand_pts(), pose=POSE, bow=BOW_OK, strings=STRINGS)
    rec = result_to_dict(classify_frame(packet, wrist_model, elbow_model, CFG))
    assert rec["t_ms"] == 7
    assert set(rec) == {"t_ms", "wrist", "elbow", "bow", "correct"}
    assert rec["bow"]["detected"] is True
    assert set(rec["correct"]) == {"wrist", "elbow", "bow_height", "bow_angle"}
