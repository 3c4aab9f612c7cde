"""Real-time cellist posture evaluation engine.

Consumes timestamped landmark/oriented-box streams, classifies wrist, elbow,
bow height, and bow angle per frame, debounces correction instructions, and
produces session summary reports. Detector-agnostic: image inference happens
upstream, this package starts at landmarks and boxes.
"""

__version__ = "0.1.0"
