"""Finite cosine series with a dominant leading term, and their derivative algebra.

A series represents the almost-periodic function

    g(k) = cos(s0*k + phi0) - sum_j a_j * cos(s_j*k + phi_j)

where every term action ``s_j`` lies strictly below the leading action
``s0``.  The family is closed under (d/dk)/s0: each term amplitude shrinks
by the ratio ``s_j/s0`` and every phase advances by pi/2.  Because all
ratios are below one, repeated differentiation eventually pushes the term
sum below 1, after which the leading cosine pins the sign of the series at
its own extrema.  That decay is what the spectral descent in
:mod:`qgspectra.solver` relies on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import NonpositiveLeadingAction, TermActionExceedsLeading

TWO_PI = 2.0 * math.pi

# Actions (and phases, circularly) closer than this refer to the same term.
MERGE_TOL = 1e-12
# Merged amplitudes below this are dropped outright.
AMPLITUDE_FLOOR = 1e-14
# Default headroom below 1 required of a regular term sum.
DEFAULT_MARGIN = 1e-6


@dataclass(frozen=True)
class TrigTerm:
    """One subtracted cosine term: ``amplitude * cos(action*k + phase)``."""

    action: float
    amplitude: float
    phase: float


@dataclass(frozen=True)
class SpectralSeries:
    """Canonical cosine series at derivative level ``level``.

    Instances should be built through :func:`canonicalize` (or by
    :func:`derivative_series`), which guarantees positive amplitudes,
    phases in [0, 2*pi), strictly sub-leading actions and action-sorted,
    duplicate-free terms.
    """

    level: int
    leading_action: float
    leading_phase: float
    terms: tuple[TrigTerm, ...]


def _wrap_phase(phi: float) -> float:
    """Reduce a phase to [0, 2*pi)."""
    x = math.fmod(phi, TWO_PI)
    if x < 0.0:
        x += TWO_PI
    if x >= TWO_PI:  # fmod rounding can land exactly on 2*pi
        x = 0.0
    return x


def canonicalize(
    leading_action: float,
    leading_phase: float,
    raw_terms: Iterable[tuple[float, float, float] | TrigTerm] = (),
    *,
    level: int = 0,
) -> SpectralSeries:
    """Build the canonical form of a series from raw term triples.

    Negative amplitudes are folded into a pi phase shift, phases are
    reduced mod 2*pi, terms sharing (action, phase) within ``MERGE_TOL``
    are merged by amplitude addition, merged amplitudes below
    ``AMPLITUDE_FLOOR`` are dropped, and the result is sorted by action.

    Raises ``NonpositiveLeadingAction`` or ``TermActionExceedsLeading``
    when the dominance structure is broken.
    """
    s0 = float(leading_action)
    if not math.isfinite(s0) or s0 <= 0.0:
        raise NonpositiveLeadingAction(f"leading action must be > 0, got {leading_action!r}")
    if not math.isfinite(leading_phase):
        raise ValueError(f"leading phase must be finite, got {leading_phase!r}")

    folded: list[tuple[float, float, float]] = []
    for raw in raw_terms:
        if isinstance(raw, TrigTerm):
            action, amplitude, phase = raw.action, raw.amplitude, raw.phase
        else:
            action, amplitude, phase = raw
        action = float(action)
        amplitude = float(amplitude)
        phase = float(phase)
        if not (math.isfinite(action) and math.isfinite(amplitude) and math.isfinite(phase)):
            raise ValueError(f"term ({action!r}, {amplitude!r}, {phase!r}) has a non-finite field")
        if action < 0.0:
            raise ValueError(f"term action must be >= 0, got {action!r}")
        if action >= s0:
            raise TermActionExceedsLeading(
                f"term action {action!r} is not strictly below the leading action {s0!r}"
            )
        if amplitude == 0.0:
            continue
        if amplitude < 0.0:
            amplitude = -amplitude
            phase += math.pi
        folded.append((action, amplitude, _wrap_phase(phase)))

    folded.sort(key=lambda t: (t[0], t[2]))

    # Group by action, then merge circularly close phases within a group.
    merged: list[tuple[float, float, float]] = []
    i = 0
    while i < len(folded):
        j = i
        rep_action = folded[i][0]
        while j < len(folded) and folded[j][0] - rep_action <= MERGE_TOL:
            j += 1
        group = folded[i:j]

        clusters: list[list[tuple[float, float, float]]] = []
        for term in group:  # group is phase-sorted
            if clusters and term[2] - clusters[-1][0][2] <= MERGE_TOL:
                clusters[-1].append(term)
            else:
                clusters.append([term])
        # Phases just below 2*pi wrap around onto the first cluster.
        if len(clusters) > 1 and (clusters[0][0][2] + TWO_PI) - clusters[-1][0][2] <= MERGE_TOL:
            clusters[0].extend(clusters.pop())

        for cluster in clusters:
            amp = math.fsum(t[1] for t in cluster)
            if amp < AMPLITUDE_FLOOR:
                continue
            merged.append((cluster[0][0], amp, cluster[0][2]))
        i = j

    merged.sort(key=lambda t: (t[0], t[2]))
    return SpectralSeries(
        level=int(level),
        leading_action=s0,
        leading_phase=_wrap_phase(float(leading_phase)),
        terms=tuple(TrigTerm(*t) for t in merged),
    )


def evaluate(series: SpectralSeries, k: float) -> float:
    """Value of the series at wavenumber ``k``, compensated summation."""
    parts = [math.cos(series.leading_action * k + series.leading_phase)]
    parts.extend(-t.amplitude * math.cos(t.action * k + t.phase) for t in series.terms)
    return math.fsum(parts)


def evaluate_array(series: SpectralSeries, ks: np.ndarray) -> np.ndarray:
    """Vectorized series evaluation over an array of wavenumbers."""
    ks = np.asarray(ks, dtype=float)
    acc = np.cos(series.leading_action * ks + series.leading_phase)
    terms = series.terms
    if len(terms) > 48:
        actions = np.array([t.action for t in terms])
        amps = np.array([t.amplitude for t in terms])
        phases = np.array([t.phase for t in terms])
        acc = acc - amps @ np.cos(np.outer(actions, ks.ravel()) + phases[:, None]).reshape(
            (len(terms),) + ks.shape
        )
        return acc
    for t in terms:
        acc = acc - t.amplitude * np.cos(t.action * ks + t.phase)
    return acc


def derivative_series(series: SpectralSeries) -> SpectralSeries:
    """Next derivative level: d/dk followed by division by the leading action.

    Amplitudes scale by action/leading_action and every phase advances by
    pi/2, so the result is again a canonical series one level up.
    """
    s0 = series.leading_action
    half = 0.5 * math.pi
    raw = [(t.action, t.amplitude * (t.action / s0), t.phase + half) for t in series.terms]
    return canonicalize(s0, series.leading_phase + half, raw, level=series.level + 1)


def regularity_sum(series: SpectralSeries) -> float:
    """Sum of term amplitudes; the series is regular iff this is below 1."""
    return math.fsum(t.amplitude for t in series.terms)


def regularization_order(series: SpectralSeries, margin: float = DEFAULT_MARGIN) -> int:
    """Smallest derivative level whose term sum is at most ``1 - margin``.

    Termination is guaranteed by the strict action gap: every ratio
    action/leading_action is below 1, so amplitudes decay geometrically.
    """
    if not (0.0 < margin < 1.0):
        raise ValueError(f"margin must lie in (0, 1), got {margin!r}")
    order = 0
    current = series
    while regularity_sum(current) > 1.0 - margin:
        current = derivative_series(current)
        order += 1
        if order > 100_000:
            raise RuntimeError("regularization did not converge; action gap is degenerate")
    return order
