"""Dive interval extraction from the three smoothed probability signals.

Candidate dives are peaks in the mid signal. For each candidate, a limited
scan backwards locates the strongest start peak and a scan forwards the
strongest end peak; candidates missing either edge are discarded. When two
candidates produce overlapping intervals the one with the higher mid peak
wins (the source footage has non-overlapping dives, so an overlap means a
duplicate detection).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InvalidInputError, InvalidParameterError
from .signal import ProbabilitySignal


@dataclass(frozen=True)
class Peak:
    frame: int
    height: float


@dataclass(frozen=True)
class DiveInterval:
    """Temporal extent of one dive, in frames, with optional peak metadata."""

    t_start: int
    t_end: int
    mid_peak: Peak | None = None
    start_peak: Peak | None = None
    end_peak: Peak | None = None

    def __post_init__(self):
        if self.t_start >= self.t_end:
            raise InvalidInputError(
                f"interval start {self.t_start} must precede end {self.t_end}"
            )
        if self.mid_peak is not None and not (
            self.t_start <= self.mid_peak.frame <= self.t_end
        ):
            raise InvalidInputError("mid peak must lie inside the interval")

    @property
    def length(self) -> float:
        return float(self.t_end - self.t_start)


@dataclass(frozen=True)
class ExtractionParams:
    """Thresholds and scan limits for interval extraction.

    min_peak_separation_frames suppresses nearby mid peaks: of two peaks
    closer than the separation, only the higher survives.
    """

    mid_threshold: float = 0.5
    edge_threshold: float = 0.5
    scan_radius_seconds: float = 1.0
    min_peak_separation_frames: int = 30

    def __post_init__(self):
        if not 0.0 < self.mid_threshold < 1.0:
            raise InvalidParameterError("mid_threshold must be in (0, 1)")
        if not 0.0 < self.edge_threshold < 1.0:
            raise InvalidParameterError("edge_threshold must be in (0, 1)")
        if not self.scan_radius_seconds > 0:
            raise InvalidParameterError("scan_radius_seconds must be positive")
        if self.min_peak_separation_frames < 1:
            raise InvalidParameterError("min_peak_separation_frames must be >= 1")


def find_peaks(
    signal: ProbabilitySignal, min_height: float, min_separation: int = 1
) -> list[Peak]:
    """Strictly interior local maxima with height >= min_height.

    A plateau (run of equal values higher than both neighbors) reports its
    leftmost index; signal endpoints are never peaks. Peaks closer than
    min_separation frames conflict, and the higher one (ties: earlier)
    survives. Result is sorted by frame.
    """
    v = signal.values
    n = v.shape[0]
    candidates: list[Peak] = []
    i = 1
    while i < n - 1:
        if v[i] <= v[i - 1]:
            i += 1
            continue
        j = i
        while j + 1 < n and v[j + 1] == v[i]:
            j += 1
        if j < n - 1 and v[j + 1] < v[i]:
            if v[i] >= min_height:
                candidates.append(Peak(frame=i, height=float(v[i])))
        i = j + 1

    if min_separation <= 1 or len(candidates) < 2:
        return candidates

    kept: list[Peak] = []
    for peak in sorted(candidates, key=lambda p: (-p.height, p.frame)):
        if all(abs(peak.frame - k.frame) >= min_separation for k in kept):
            kept.append(peak)
    kept.sort(key=lambda p: p.frame)
    return kept


def _best_peak_in(peaks: list[Peak], lo: int, hi: int) -> Peak | None:
    best = None
    for p in peaks:
        if lo <= p.frame <= hi:
            if best is None or p.height > best.height:
                best = p
    return best


def extract_dives(
    g_start: ProbabilitySignal,
    g_mid: ProbabilitySignal,
    g_end: ProbabilitySignal,
    params: ExtractionParams,
) -> list[DiveInterval]:
    """Extract dive intervals from the three smoothed signals.

    Returns chronologically sorted, non-overlapping intervals. The scan
    radius is converted from seconds to frames by rounding frame_rate *
    scan_radius_seconds to the nearest integer.
    """
    if not (len(g_start) == len(g_mid) == len(g_end)):
        raise InvalidInputError("the three signals must have equal length")
    if not (g_start.frame_rate == g_mid.frame_rate == g_end.frame_rate):
        raise InvalidInputError("the three signals must share one frame rate")

    radius = max(1, round(g_mid.frame_rate * params.scan_radius_seconds))
    mid_peaks = find_peaks(
        g_mid, params.mid_threshold, params.min_peak_separation_frames
    )
    # Edge peaks are not separation-suppressed; the scan already selects
    # the single strongest peak inside each window.
    start_peaks = find_peaks(g_start, params.edge_threshold)
    end_peaks = find_peaks(g_end, params.edge_threshold)

    candidates: list[DiveInterval] = []
    for mid in mid_peaks:
        start = _best_peak_in(start_peaks, mid.frame - radius, mid.frame)
        end = _best_peak_in(end_peaks, mid.frame, mid.frame + radius)
        if start is None or end is None:
            continue
        if start.frame >= end.frame:
            continue
        candidates.append(
            DiveInterval(
                t_start=start.frame,
                t_end=end.frame,
                mid_peak=mid,
                start_peak=start,
                end_peak=end,
            )
        )

    accepted: list[DiveInterval] = []
    for cand in sorted(
        candidates, key=lambda c: (-c.mid_peak.height, c.mid_peak.frame)
    ):
        overlaps = any(
            cand.t_start <= a.t_end and a.t_start <= cand.t_end for a in accepted
        )
        if not overlaps:
            accepted.append(cand)
    accepted.sort(key=lambda c: c.t_start)
    return accepted


def interval_iou(a: DiveInterval, b: DiveInterval) -> float:
    """Intersection over union of two intervals on the continuous frame axis
    (an interval [s, e] has measure e - s). Result is in [0, 1]."""
    inter = min(a.t_end, b.t_end) - max(a.t_start, b.t_start)
    if inter <= 0:
        return 0.0
    union = a.length + b.length - inter
    return inter / union
