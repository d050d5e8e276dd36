"""Bootstrap-and-descent root solver for canonical cosine series.

The series is differentiated (and renormalized) until its term sum drops
below one.  At that regular level the extrema of the leading cosine are
root separators: the series sign there is pinned by the leading term, so
every separator cell brackets exactly one simple root.  Walking back down,
the roots of each level are the extrema of the level below and therefore
separate its roots; each cell is probed for a sign change and yields at
most one root.  Every root is returned inside a certified bracket obtained
by bisection and a bracket-safeguarded Newton polish.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateEndpoint,
    DegenerateSpectrum,
    EmptyWindow,
    NotRegular,
)
from .graphs import QuantumGraph, secular_series
from .series import (
    DEFAULT_MARGIN,
    SpectralSeries,
    derivative_series,
    evaluate_array,
    regularity_sum,
)

# Roots are never reported below this wavenumber; padding is clamped here.
POSITIVE_FLOOR = 1e-9
# |g| at or below this at a cell endpoint signals a (near-)double root.
ENDPOINT_TOL = 1e-12
# Bisection stops once the bracket width falls below this, relative to |k|.
BRACKET_REL_WIDTH = 1e-13
# Window membership slack for roots sitting on a float window edge.
EDGE_SLACK_REL = 1e-11


@dataclass(frozen=True)
class DescentChain:
    """Derivative levels 0..M of a series, M minimal for the given margin."""

    levels: tuple[SpectralSeries, ...]
    margin: float

    @property
    def order(self) -> int:
        return len(self.levels) - 1


@dataclass(frozen=True)
class RootCell:
    """One separator cell and the certified root it encloses, if any."""

    lower: float
    upper: float
    root: float | None
    enclosure: float = 0.0


@dataclass(frozen=True)
class SpectrumEntry:
    index: int
    wavenumber: float
    energy: float
    enclosure: float


@dataclass(frozen=True)
class Spectrum:
    """Ordered eigen-wavenumbers with certified enclosures, indexed from 1."""

    entries: tuple[SpectrumEntry, ...]

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    @property
    def wavenumbers(self) -> np.ndarray:
        return np.array([e.wavenumber for e in self.entries])

    @property
    def energies(self) -> np.ndarray:
        return np.array([e.energy for e in self.entries])


@dataclass(frozen=True)
class DescentTrace:
    """Solver internals for inspection: padded window and per-level roots."""

    padded_window: tuple[float, float]
    separators: np.ndarray
    level_roots: tuple[np.ndarray, ...]  # index m = 0..M


def build_chain(series: SpectralSeries, margin: float = DEFAULT_MARGIN) -> DescentChain:
    """Materialize derivative levels up to the first regular one."""
    if not (0.0 < margin < 1.0):
        raise ValueError(f"margin must lie in (0, 1), got {margin!r}")
    levels = [series]
    while regularity_sum(levels[-1]) > 1.0 - margin:
        levels.append(derivative_series(levels[-1]))
        if len(levels) > 100_001:
            raise RuntimeError("regularization did not converge; action gap is degenerate")
    return DescentChain(levels=tuple(levels), margin=margin)


def base_separators(
    series: SpectralSeries,
    lo: float,
    hi: float,
    margin: float = DEFAULT_MARGIN,
) -> np.ndarray:
    """Extremal grid of the leading cosine inside [lo, hi].

    At each grid point the leading cosine is +-1 while the terms sum to
    less than 1 - margin in magnitude, so the series sign alternates and
    consecutive grid points bracket exactly one root.  Requires the series
    to be regular at the given margin.
    """
    if regularity_sum(series) > 1.0 - margin:
        raise NotRegular(
            f"term sum {regularity_sum(series):g} is not at most {1.0 - margin:g}"
        )
    if hi < lo:
        return np.empty(0)
    s0 = series.leading_action
    phi0 = series.leading_phase
    q_lo = math.ceil((s0 * lo + phi0) / math.pi - 1e-12)
    q_hi = math.floor((s0 * hi + phi0) / math.pi + 1e-12)
    if q_hi < q_lo:
        return np.empty(0)
    qs = np.arange(q_lo, q_hi + 1)
    return (qs * math.pi - phi0) / s0


def _refine_brackets(
    series: SpectralSeries,
    deriv: SpectralSeries,
    a: np.ndarray,
    b: np.ndarray,
    fa: np.ndarray,
) -> tuple[np.ndarray, np.ndarray]:
    """Bisect sign-change brackets to relative width, then Newton-polish.

    Lanes are updated only while active, so each lane performs the same
    operation sequence it would in a scalar loop.  The Newton step uses the
    analytic derivative leading_action * deriv(k) and never leaves its
    bracket, which keeps the returned enclosure certified.
    """
    a = np.array(a, dtype=float)
    b = np.array(b, dtype=float)
    sa = np.sign(fa)
    for _ in range(200):
        mid = 0.5 * (a + b)
        tol = BRACKET_REL_WIDTH * np.maximum(1.0, np.abs(mid))
        active = (b - a) > tol
        if not active.any():
            break
        fm = evaluate_array(series, mid)
        go_left = active & (np.sign(fm) == sa)
        go_right = active & ~go_left
        a = np.where(go_left, mid, a)
        b = np.where(go_right, mid, b)

    s0 = series.leading_action
    x = 0.5 * (a + b)
    for _ in range(3):
        fx = evaluate_array(series, x)
        dfx = s0 * evaluate_array(deriv, x)
        with np.errstate(divide="ignore", invalid="ignore"):
            cand = x - fx / dfx
        ok = np.isfinite(cand) & (cand > a) & (cand < b)
        x = np.where(ok, cand, x)
    enclosure = np.maximum(x - a, b - x)
    return x, enclosure


def root_in_cell(
    series: SpectralSeries,
    lower: float,
    upper: float,
    *,
    deriv: SpectralSeries | None = None,
) -> RootCell:
    """Extract the unique root of a separator cell, or report it empty.

    The endpoints must carry nonzero series values; a magnitude at or below
    ``ENDPOINT_TOL`` raises ``DegenerateEndpoint`` since it is consistent
    with a tangential (double) root, which the solver refuses to guess at.
    Equal endpoint signs mean the cell contains no root at all: between
    consecutive extrema the series is monotone, so the sign test is exact.
    """
    if not upper > lower:
        raise ValueError(f"cell bounds must satisfy lower < upper, got {lower!r}, {upper!r}")
    ends = evaluate_array(series, np.array([lower, upper]))
    if np.min(np.abs(ends)) <= ENDPOINT_TOL:
        raise DegenerateEndpoint(
            f"series value {ends[int(np.argmin(np.abs(ends)))]:.3e} at a cell endpoint "
            "is consistent with a double root"
        )
    if np.sign(ends[0]) == np.sign(ends[1]):
        return RootCell(lower=lower, upper=upper, root=None)
    if deriv is None:
        deriv = derivative_series(series)
    roots, enclosures = _refine_brackets(
        series, deriv, np.array([lower]), np.array([upper]), ends[:1]
    )
    return RootCell(lower=lower, upper=upper, root=float(roots[0]), enclosure=float(enclosures[0]))


def _floor_escape(series: SpectralSeries, start: float, cap: float) -> tuple[float, float]:
    """Climb geometrically from ``start`` until the series value is resolvable.

    Near k = 0 a series with an even symmetry (every secular series of a
    graph with real couplings, for instance) has a systematic zero whose
    true value sits below double-precision noise, so points there carry no
    usable sign.  Both the solver and the dense-scan oracle skip that
    region through this one helper, which keeps their window semantics
    identical.
    """
    x = start
    value = float(evaluate_array(series, np.array([x]))[0])
    while abs(value) <= ENDPOINT_TOL:
        if x >= cap:
            raise DegenerateEndpoint(
                f"series is numerically zero on [{start:g}, {cap:g}]"
            )
        x = min(x * 4.0, cap)
        value = float(evaluate_array(series, np.array([x]))[0])
    return x, value


def _safe_edge(
    series: SpectralSeries,
    edge: float,
    cell: float,
    side: str,
    floor: float | None = None,
) -> tuple[float, float]:
    """Nudge a padded-window edge off a (near-)zero of the series.

    The padding edges are arbitrary points, so landing on a root there is
    an accident of the window, not a degeneracy of the spectrum.  Edges
    move outward by up to half a cell; the lower edge, when pinned at the
    positive floor, instead moves inward geometrically (an even series has
    a systematic zero at k = 0, and roots that close to zero are excluded
    from spectra anyway).
    """
    value = float(evaluate_array(series, np.array([edge]))[0])
    if abs(value) > ENDPOINT_TOL:
        return edge, value

    candidates: list[float] = []
    at_floor = floor is not None and edge <= floor * (1.0 + 1e-9)
    if side == "lower" and at_floor:
        return _floor_escape(series, edge, edge + 0.25 * cell)
    if side == "lower":
        for j in range(1, 9):
            x = edge - j * cell / 16.0
            if floor is not None and x < floor:
                candidates.append(floor)
                break
            candidates.append(x)
    else:
        candidates.extend(edge + j * cell / 16.0 for j in range(1, 9))

    for x in candidates:
        value = float(evaluate_array(series, np.array([x]))[0])
        if abs(value) > ENDPOINT_TOL:
            return x, value
    raise DegenerateEndpoint(
        f"could not move the padded window edge {edge:g} off a zero of the series"
    )


def _level_pass(
    series: SpectralSeries,
    deriv: SpectralSeries,
    bounds: np.ndarray,
    values: np.ndarray,
    *,
    interior: slice | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Probe consecutive cells of one level; return roots and enclosures."""
    small = np.abs(values) <= ENDPOINT_TOL
    if small.any():
        where = float(bounds[int(np.argmax(small))])
        raise DegenerateEndpoint(
            f"series value at separator {where:.12g} is consistent with a double root"
        )
    signs = np.sign(values)
    change = signs[:-1] != signs[1:]
    if interior is not None and not change[interior].all():
        raise AssertionError("regular-level cell without a sign change; separator logic broken")
    if not change.any():
        return np.empty(0), np.empty(0)
    return _refine_brackets(
        series, deriv, bounds[:-1][change], bounds[1:][change], values[:-1][change]
    )


def descend_with_trace(
    chain: DescentChain, window: tuple[float, float]
) -> tuple[Spectrum, DescentTrace]:
    """Run the descent and also return per-level roots for inspection."""
    k_lo, k_hi = float(window[0]), float(window[1])
    if not (math.isfinite(k_lo) and math.isfinite(k_hi)):
        raise ValueError("window bounds must be finite")
    if k_lo < 0.0:
        raise ValueError(f"window must start at a nonnegative wavenumber, got {k_lo!r}")
    if not k_hi > k_lo:
        raise EmptyWindow(f"window [{k_lo!r}, {k_hi!r}] contains no interval")

    levels = chain.levels
    top = chain.order
    s0 = levels[0].leading_action
    cell = math.pi / s0
    pad = (top + 1) * cell
    lo_pad = max(k_lo - pad, POSITIVE_FLOOR)
    hi_pad = k_hi + pad

    derivs = list(levels[1:]) + [derivative_series(levels[top])]
    level_roots: dict[int, np.ndarray] = {}
    level_encl: dict[int, np.ndarray] = {}
    width_tol = 1e-9 * cell

    try:
        # Regular level: separator grid of the leading cosine.
        series = levels[top]
        lo_edge, _ = _safe_edge(series, lo_pad, cell, "lower", floor=POSITIVE_FLOOR)
        hi_edge, _ = _safe_edge(series, hi_pad, cell, "upper")
        seps = base_separators(series, lo_edge, hi_edge, chain.margin)
        seps = seps[(seps > lo_edge + width_tol) & (seps < hi_edge - width_tol)]
        bounds = np.concatenate(([lo_edge], seps, [hi_edge]))
        values = evaluate_array(series, bounds)
        interior = slice(1, -1) if len(bounds) > 3 else None
        roots, encl = _level_pass(series, derivs[top], bounds, values, interior=interior)
        level_roots[top] = roots
        level_encl[top] = encl

        # Walk back down: level-m roots separate the roots of level m-1.
        for m in range(top - 1, -1, -1):
            series = levels[m]
            lo_edge, _ = _safe_edge(series, lo_pad, cell, "lower", floor=POSITIVE_FLOOR)
            hi_edge, _ = _safe_edge(series, hi_pad, cell, "upper")
            prev = level_roots[m + 1]
            inner = prev[(prev > lo_edge + width_tol) & (prev < hi_edge - width_tol)]
            bounds = np.concatenate(([lo_edge], inner, [hi_edge]))
            values = evaluate_array(series, bounds)
            roots, encl = _level_pass(series, derivs[m], bounds, values)
            level_roots[m] = roots
            level_encl[m] = encl
    except DegenerateEndpoint as exc:
        raise DegenerateSpectrum(str(exc)) from exc

    slack = EDGE_SLACK_REL * max(1.0, abs(k_lo), abs(k_hi))
    roots0 = level_roots[0]
    encl0 = level_encl[0]
    keep = (roots0 >= k_lo - slack) & (roots0 <= k_hi + slack)
    ks = roots0[keep]
    encls = encl0[keep]
    entries = tuple(
        SpectrumEntry(index=i + 1, wavenumber=float(k), energy=float(k) * float(k), enclosure=float(e))
        for i, (k, e) in enumerate(zip(ks, encls))
    )
    trace = DescentTrace(
        padded_window=(lo_pad, hi_pad),
        separators=seps,
        level_roots=tuple(level_roots[m] for m in range(top + 1)),
    )
    return Spectrum(entries=entries), trace


def descend(chain: DescentChain, window: tuple[float, float]) -> Spectrum:
    """Extract every root of level 0 inside the window, sorted and indexed."""
    spectrum, _ = descend_with_trace(chain, window)
    return spectrum


def solve_graph(
    graph: QuantumGraph,
    window: tuple[float, float],
    margin: float = DEFAULT_MARGIN,
) -> Spectrum:
    """Spectrum of a scaling graph: secular series, chain, descent."""
    return descend(build_chain(secular_series(graph), margin), window)
