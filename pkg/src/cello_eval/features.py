"""Classifier input vectors derived from raw landmarks.

Hand features are the 21 landmark (x, y) pairs translated so a chosen origin
node sits at (0, 0) and scaled so the farthest point has unit norm; rotation
is deliberately preserved (forearm rotation is the signal). Elbow features
are nine values from the bow-side shoulder/elbow/wrist triplet: joint angle,
the two segment lengths, and both unit direction vectors into the elbow.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DegenerateHand, DegeneratePose
from .streams import PoseTriplet

DEFAULT_ORIGIN_INDEX = 0  # wrist-base node of the 21-point hand topology
_EPS = 1e-9

HAND_FEATURE_SIZE = 42
ELBOW_FEATURE_SIZE = 9


def normalize_hand(points, origin_index: int = DEFAULT_ORIGIN_INDEX) -> np.ndarray:
    """Flattened 42-vector of translation/scale-normalized hand coordinates."""
    pts = np.asarray(points, dtype=float)
    if pts.shape != (21, 2):
        raise ValueError(f"expected 21 2D points, got shape {pts.shape}")
    centered = pts - pts[origin_index]
    scale = np.max(np.linalg.norm(centered, axis=1))
    if scale < _EPS:
        raise DegenerateHand("all hand points coincident")
    return (centered / scale).reshape(-1)


def elbow_features(pose: PoseTriplet) -> np.ndarray:
    """Nine elbow posture features: [angle, d_se, d_ew, u_se, u_we]."""
    shoulder = np.asarray(pose.shoulder, dtype=float)
    elbow = np.asarray(pose.elbow, dtype=float)
    wrist = np.asarray(pose.wrist, dtype=float)

    se = elbow - shoulder
    we = elbow - wrist
    d_se = float(np.linalg.norm(se))
    d_ew = float(np.linalg.norm(we))
    if d_se < _EPS or d_ew < _EPS:
        raise DegeneratePose("coincident pose landmarks")
    u_se = se / d_se
    u_we = we / d_ew
    # Angle at the elbow between elbow->shoulder and elbow->wrist.
    cos_a = float(np.dot(-u_se, -u_we))
    angle = math.acos(min(1.0, max(-1.0, cos_a)))
    return np.concatenate(([angle, d_se, d_ew], u_se, u_we))
