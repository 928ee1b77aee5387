"""Low-pass filtering, differentiation and speed of position tracks."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import butter, filtfilt

from .errors import InvalidCutoffError, TooShortError
from .motion import END_EFFECTORS, MotionSequence

MIN_FILTER_SAMPLES = 8


@dataclass(frozen=True)
class FilterSpec:
    cutoff_hz: float = 1.5
    order: int = 2
    zero_phase: bool = True

    def __post_init__(self):
        if not (math.isfinite(self.cutoff_hz) and self.cutoff_hz > 0):
            raise InvalidCutoffError(f"cutoff must be positive, got {self.cutoff_hz}")
        if self.order != 2 or not self.zero_phase:
            raise ValueError("only the 2nd-order zero-phase filter is supported")

    def check(self, frame_rate: float):
        if self.cutoff_hz >= frame_rate / 2:
            raise InvalidCutoffError(
                f"cutoff {self.cutoff_hz} Hz is not below Nyquist ({frame_rate / 2} Hz)"
            )

    def settling_samples(self, frame_rate: float) -> int:
        """Filter time constant in samples, rounded up."""
        return math.ceil(frame_rate / (2 * math.pi * self.cutoff_hz))


def lowpass(positions, frame_rate: float, spec: FilterSpec = FilterSpec()) -> np.ndarray:
    """Butterworth low-pass run forward and backward along axis 0.

    Ends are padded by odd reflection over three time constants (capped at
    the signal length minus one); the padding is dropped from the result.
    """
    x = np.asarray(positions, dtype=float)
    n = x.shape[0] if x.ndim else 0
    if n < MIN_FILTER_SAMPLES:
        raise TooShortError(f"low-pass filter needs >= {MIN_FILTER_SAMPLES} samples, got {n}")
    spec.check(frame_rate)
    b, a = butter(spec.order, spec.cutoff_hz, btype="low", fs=frame_rate)
    padlen = min(3 * spec.settling_samples(frame_rate), n - 1)
    return filtfilt(b, a, x, axis=0, padtype="odd", padlen=padlen)


def differentiate(positions, frame_rate: float) -> np.ndarray:
    """Central differences inside, first-order one-sided differences at the ends."""
    x = np.asarray(positions, dtype=float)
    n = x.shape[0] if x.ndim else 0
    if n < 3:
        raise TooShortError(f"differentiation needs >= 3 samples, got {n}")
    return np.gradient(x, 1.0 / frame_rate, axis=0, edge_order=1)


def speed(velocities) -> np.ndarray:
    v = np.asarray(velocities, dtype=float)
    return np.linalg.norm(v, axis=-1)


def speed_traces(motion: MotionSequence, spec: FilterSpec = FilterSpec(),
                 names=END_EFFECTORS) -> dict[str, np.ndarray]:
    """Filtered speed (m/s) of each named track, one value per frame."""
    if motion.frame_count < MIN_FILTER_SAMPLES:
        raise TooShortError(
            f"motion has {motion.frame_count} frames; at least {MIN_FILTER_SAMPLES} are needed"
        )
    fr = motion.frame_rate
    return {
        name: speed(differentiate(lowpass(motion[name], fr, spec), fr))
        for name in names
    }


def speeds_csv(traces: dict[str, np.ndarray], names=END_EFFECTORS) -> str:
    lines = ["frame," + ",".join(names)]
    n = len(traces[names[0]])
    for i in range(n):
        lines.append(f"{i}," + ",".join(f"{traces[k][i]:.6f}" for k in names))
    return "\n".join(lines) + "\n"
