"""Per-frame event-probability signals and raised-cosine window smoothing.

A probability signal holds one value per frame for a single event kind
(start of a dive, mid-air, or water entry). Smoothing is a discrete
raised-cosine (Hann) window: weights cos^2(pi*k/T) over integer frame
offsets k in [-T/2, T/2], normalized to sum 1. At the signal boundaries
the window is truncated and renormalized over the valid support, so a
constant signal stays constant everywhere.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import InvalidInputError, InvalidParameterError

PROB_TOLERANCE = 1e-6


class EventKind(enum.Enum):
    START = "start"
    MID = "mid"
    END = "end"


def _clean_probabilities(values) -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise InvalidInputError("signal values must be a non-empty 1-D sequence")
    if np.any(arr < -PROB_TOLERANCE) or np.any(arr > 1.0 + PROB_TOLERANCE):
        bad = arr[(arr < -PROB_TOLERANCE) | (arr > 1.0 + PROB_TOLERANCE)][0]
        raise InvalidInputError(f"probability {bad!r} outside [0, 1] beyond tolerance")
    out = np.clip(arr, 0.0, 1.0)
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class ProbabilitySignal:
    """One event probability per frame, at a fixed frame rate."""

    event_kind: EventKind
    frame_rate: float
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        if not self.frame_rate > 0:
            raise InvalidParameterError("frame_rate must be positive")
        object.__setattr__(self, "values", _clean_probabilities(self.values))

    def __len__(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True)
class HannKernel:
    """Normalized raised-cosine weights over offsets -T/2 .. T/2."""

    span_frames: int
    weights: np.ndarray = field(repr=False)

    @property
    def half_span(self) -> int:
        return self.span_frames // 2

    def weight(self, k: int) -> float:
        """Weight at integer offset k, 0 outside the span."""
        if abs(k) > self.half_span:
            return 0.0
        return float(self.weights[k + self.half_span])


def build_hann_kernel(span_frames: int) -> HannKernel:
    """Build the discrete smoothing kernel for an even span of T frames.

    Weights are proportional to cos^2(pi*k/T) for |k| <= T/2 and sum to 1;
    the endpoint weights are exactly zero.
    """
    if not isinstance(span_frames, (int, np.integer)):
        raise InvalidParameterError("span_frames must be an integer")
    if span_frames < 2 or span_frames % 2 != 0:
        raise InvalidParameterError(
            f"span_frames must be an even integer >= 2, got {span_frames}"
        )
    half = span_frames // 2
    k = np.arange(-half, half + 1, dtype=np.float64)
    w = np.cos(np.pi * k / span_frames) ** 2
    w[0] = 0.0
    w[-1] = 0.0
    w /= w.sum()
    w.flags.writeable = False
    return HannKernel(span_frames=int(span_frames), weights=w)


def default_span_frames(frame_rate: float, seconds: float = 0.5) -> int:
    """Smoothing span covering `seconds` at the given frame rate, rounded
    to the nearest even integer (minimum 2)."""
    if frame_rate <= 0 or seconds <= 0:
        raise InvalidParameterError("frame_rate and seconds must be positive")
    span = 2 * int(math.floor(frame_rate * seconds / 2.0 + 0.5))
    return max(span, 2)


def smooth(signal: ProbabilitySignal, kernel: HannKernel) -> ProbabilitySignal:
    """Smooth a signal with the raised-cosine window.

    Output has the same length, event kind, and frame rate. Each value is
    the kernel-weighted mean of its neighborhood; near the edges the weights
    are renormalized over the in-range offsets.
    """
    smoothed = kernels.hann_smooth(signal.values, kernel.weights)
    # Convex combination of [0, 1] values; clip float drift only.
    smoothed = np.clip(smoothed, 0.0, 1.0)
    return ProbabilitySignal(
        event_kind=signal.event_kind,
        frame_rate=signal.frame_rate,
        values=smoothed,
    )
