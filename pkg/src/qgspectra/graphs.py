"""Scaling metric graphs and the construction of their secular cosine series.

A scaling graph carries a potential ``U_b = lambda_b * E`` on each bond and
a delta coupler of strength ``lambda_v * k`` on each vertex.  Both choices
scale with energy, which keeps every scattering amplitude independent of k:
the bond only contributes the constant action ``S_b = L_b * sqrt(1 -
lambda_b)`` per unit wavenumber, and the vertex matrix depends on the
dimensionless strength alone.  The secular condition det(I - D(k) Sigma) = 0,
with D(k) the diagonal of directed-bond phase factors exp(i S k) and Sigma
the unitary bond-to-bond scattering matrix, is therefore a finite sum of
exponentials in k with constant coefficients.  Expanding the determinant
symbolically, centering the occurring total actions and rotating the result
onto the real axis turns it into the canonical cosine series consumed by
the solver.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Literal

import numpy as np

from .errors import (
    DegenerateLeadingTerm,
    DegreeMismatch,
    RealificationFailure,
    SizeCapExceeded,
    ValidationError,
)
from .series import MERGE_TOL, SpectralSeries, canonicalize

# Determinant expansion cap on directed bonds (2 per undirected bond).
MAX_DIRECTED_BONDS = 16
# Complex monomial coefficients below this are treated as exact zeros.
COEFF_FLOOR = 1e-14
# Mirror-paired coefficients must be conjugate within this tolerance.
CONJUGATE_TOL = 1e-9

VertexCondition = Literal["dirichlet", "kirchhoff", "scaling_delta"]
_CONDITIONS = ("dirichlet", "kirchhoff", "scaling_delta")


@dataclass(frozen=True)
class VertexSpec:
    """Vertex with a matching condition; ``delta_strength`` is the
    dimensionless coupler strength and only meaningful for scaling_delta."""

    id: int
    condition: VertexCondition
    delta_strength: float = 0.0


@dataclass(frozen=True)
class BondSpec:
    """Bond between two vertices with a scaling potential fraction."""

    endpoints: tuple[int, int]
    length: float
    potential_fraction: float = 0.0

    @property
    def action(self) -> float:
        """Phase length L*sqrt(1 - lambda); the accumulated phase is action*k."""
        return self.length * math.sqrt(1.0 - self.potential_fraction)


@dataclass(frozen=True)
class QuantumGraph:
    """Validated scaling graph; construction checks every invariant eagerly."""

    vertices: tuple[VertexSpec, ...]
    bonds: tuple[BondSpec, ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "bonds", tuple(self.bonds))
        violations = validate_graph(self.vertices, self.bonds)
        if violations:
            if any("directed bonds" in v for v in violations):
                raise SizeCapExceeded(violations)
            raise ValidationError(violations)

    def vertex(self, vertex_id: int) -> VertexSpec:
        for v in self.vertices:
            if v.id == vertex_id:
                return v
        raise KeyError(vertex_id)

    def degree(self, vertex_id: int) -> int:
        d = 0
        for b in self.bonds:
            d += (b.endpoints[0] == vertex_id) + (b.endpoints[1] == vertex_id)
        return d


def validate_graph(vertices, bonds, path: str = "graph") -> list[str]:
    """Collect every violated graph invariant; empty list means valid."""
    problems: list[str] = []
    ids = [v.id for v in vertices]
    if len(set(ids)) != len(ids):
        problems.append(f"{path}.vertices: vertex ids must be unique")
    known = set(ids)
    if not vertices:
        problems.append(f"{path}.vertices: at least one vertex is required")
    for i, v in enumerate(vertices):
        if v.condition not in _CONDITIONS:
            problems.append(
                f"{path}.vertices[{i}]: unknown condition {v.condition!r}"
            )
        if not math.isfinite(v.delta_strength):
            problems.append(f"{path}.vertices[{i}]: delta strength must be finite")
        elif v.condition != "scaling_delta" and v.delta_strength != 0.0:
            problems.append(
                f"{path}.vertices[{i}]: delta strength is only meaningful for scaling_delta vertices"
            )
    if not bonds:
        problems.append(f"{path}.bonds: at least one bond is required")
    if 2 * len(bonds) > MAX_DIRECTED_BONDS:
        problems.append(
            f"{path}.bonds: {2 * len(bonds)} directed bonds exceed the expansion cap of {MAX_DIRECTED_BONDS}"
        )
    for i, b in enumerate(bonds):
        if not (math.isfinite(b.length) and b.length > 0.0):
            problems.append(f"{path}.bonds[{i}].length: must be > 0, got {b.length!r}")
        if not math.isfinite(b.potential_fraction) or b.potential_fraction >= 1.0:
            problems.append(
                f"{path}.bonds[{i}].potential_lambda: potential_fraction must be < 1 "
                f"(got {b.potential_fraction!r}; fractions >= 1 create classically forbidden bonds)"
            )
        for e in b.endpoints:
            if e not in known:
                problems.append(f"{path}.bonds[{i}]: endpoint {e!r} is not a vertex id")

    # Connectivity over the vertices actually referenced; degree >= 1 everywhere.
    if vertices and bonds and not problems:
        parent = {v.id: v.id for v in vertices}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        degree = {v.id: 0 for v in vertices}
        for b in bonds:
            u, w = b.endpoints
            degree[u] += 1
            degree[w] += 1
            parent[find(u)] = find(w)
        isolated = sorted(v for v, d in degree.items() if d == 0)
        if isolated:
            problems.append(f"{path}: vertices {isolated} have degree 0")
        elif len({find(v.id) for v in vertices}) > 1:
            problems.append(f"{path}: graph is not connected")
    return problems


def vertex_scattering(vertex: VertexSpec, degree: int) -> np.ndarray:
    """Unitary vertex scattering matrix for a degree-``degree`` vertex.

    Dirichlet vertices reflect with amplitude -1 on every channel.  A
    Kirchhoff vertex or a scaling delta coupler of dimensionless strength
    ``lam`` mixes channels as 2/(degree + i*lam) - delta_ij, which is the
    k-independent limit of the delta vertex whose physical strength grows
    as lam*k.
    """
    if degree < 1:
        raise DegreeMismatch(f"vertex degree must be >= 1, got {degree}")
    if vertex.condition == "dirichlet":
        return -np.eye(degree, dtype=complex)
    lam = vertex.delta_strength if vertex.condition == "scaling_delta" else 0.0
    c = 2.0 / (degree + 1j * lam)
    return np.full((degree, degree), c, dtype=complex) - np.eye(degree, dtype=complex)


@dataclass
class ExpoPolynomial:
    """Exponential sum  sum_n c_n * exp(i k * <n, actions>)  with n in {0,1}^d.

    Exponent vectors are stored as bitmasks over the directed bonds; the
    basis ``actions`` give each directed bond's action.  Coefficients with
    magnitude below ``COEFF_FLOOR`` are never stored.
    """

    coefficients: dict[int, complex]
    actions: tuple[float, ...]

    @property
    def n_directed(self) -> int:
        return len(self.actions)

    def exponent_vector(self, mask: int) -> tuple[int, ...]:
        return tuple((mask >> i) & 1 for i in range(self.n_directed))

    def total_action(self, mask: int) -> float:
        return math.fsum(self.actions[i] for i in range(self.n_directed) if mask >> i & 1)

    def evaluate(self, k: float) -> complex:
        return sum(
            c * cmath.exp(1j * self.total_action(mask) * k)
            for mask, c in self.coefficients.items()
        )


def directed_actions(graph: QuantumGraph) -> tuple[float, ...]:
    """Actions of the 2B directed bonds; bond b yields indices 2b and 2b+1."""
    out: list[float] = []
    for b in graph.bonds:
        out.extend((b.action, b.action))
    return tuple(out)


def bond_scattering_matrix(graph: QuantumGraph) -> np.ndarray:
    """The 2B x 2B unitary map from incoming to outgoing directed bonds.

    Directed bond 2b runs from endpoints[0] to endpoints[1] of bond b, and
    2b+1 runs back.  Entry [i, j] is the amplitude for leaving vertex
    head(j) = tail(i) along i after arriving along j.
    """
    n = 2 * len(graph.bonds)
    tails: dict[int, list[int]] = {v.id: [] for v in graph.vertices}
    for bi, b in enumerate(graph.bonds):
        u, w = b.endpoints
        tails[u].append(2 * bi)
        tails[w].append(2 * bi + 1)

    sigma = np.zeros((n, n), dtype=complex)
    for v in graph.vertices:
        outgoing = tails[v.id]
        local = vertex_scattering(v, len(outgoing))
        for pi, i in enumerate(outgoing):
            for pj, rev_j in enumerate(outgoing):
                sigma[i, rev_j ^ 1] = local[pi, pj]
    return sigma


def transfer_determinant(graph: QuantumGraph) -> ExpoPolynomial:
    """Symbolic expansion of det(I - D(k) Sigma) over directed-bond monomials.

    Laplace expansion along rows, memoized on the remaining column subset;
    row r contributes either its identity entry (column r) or the monomial
    -Sigma[r, j] * exp(i S_r k).  Exponent components therefore stay in
    {0, 1} and the cost is O(2^n * n) subset states.
    """
    sigma = bond_scattering_matrix(graph)
    actions = directed_actions(graph)
    n = len(actions)

    rows: list[list[tuple[int, complex]]] = []
    for r in range(n):
        entries = [(j, -sigma[r, j]) for j in range(n) if sigma[r, j] != 0.0]
        rows.append(entries)

    # prev[mask] is the determinant polynomial of rows (n-popcount)..n-1
    # against the column set ``mask``; only one popcount level is live.
    prev: dict[int, dict[int, complex]] = {0: {0: 1.0 + 0.0j}}
    for size in range(1, n + 1):
        row = n - size
        exp_bit = 1 << row
        row_entries = rows[row]
        cur: dict[int, dict[int, complex]] = {}
        for cols in combinations(range(n), size):
            mask = 0
            for c in cols:
                mask |= 1 << c
            poly: dict[int, complex] = {}
            for parity, col in enumerate(cols):
                sub = prev[mask ^ (1 << col)]
                sgn = -1.0 if parity & 1 else 1.0
                if col == row:
                    for mono, coeff in sub.items():
                        poly[mono] = poly.get(mono, 0.0) + sgn * coeff
            for col, centry in row_entries:
                if not mask >> col & 1:
                    continue
                parity = bin(mask & ((1 << col) - 1)).count("1")
                sgn = -1.0 if parity & 1 else 1.0
                factor = sgn * centry
                sub = prev[mask ^ (1 << col)]
                for mono, coeff in sub.items():
                    key = mono | exp_bit
                    poly[key] = poly.get(key, 0.0) + factor * coeff
            cur[mask] = poly
        prev = cur

    full = prev[(1 << n) - 1]
    coefficients = {m: c for m, c in full.items() if abs(c) >= COEFF_FLOOR}
    return ExpoPolynomial(coefficients=coefficients, actions=actions)


def transfer_matrix(graph: QuantumGraph, k: float) -> np.ndarray:
    """Numeric D(k) Sigma at wavenumber ``k`` (for cross-checks)."""
    sigma = bond_scattering_matrix(graph)
    phases = np.exp(1j * np.asarray(directed_actions(graph)) * k)
    return phases[:, None] * sigma


@dataclass(frozen=True)
class SecularExpansion:
    """Secular series plus the constants of its construction.

    ``normalization * exp(-i*theta*k) * det(I - D(k) Sigma)`` is real for
    real k and equals the canonical series value, which is what the
    reconstruction checks assert.
    """

    series: SpectralSeries
    theta: float
    rotation: complex
    scale: float
    expo: ExpoPolynomial
    sigma: np.ndarray = field(repr=False)
    actions: tuple[float, ...]

    @property
    def normalization(self) -> complex:
        return self.rotation / self.scale


def _cluster_actions(expo: ExpoPolynomial) -> list[tuple[float, complex]]:
    """Group monomials whose total actions agree within MERGE_TOL."""
    items = sorted(
        ((expo.total_action(mask), coeff) for mask, coeff in expo.coefficients.items()),
        key=lambda t: t[0],
    )
    groups: list[tuple[float, complex]] = []
    for action, coeff in items:
        if groups and action - groups[-1][0] <= MERGE_TOL:
            groups[-1] = (groups[-1][0], groups[-1][1] + coeff)
        else:
            groups.append((action, coeff))
    return [(a, c) for a, c in groups if abs(c) >= COEFF_FLOOR]


def expand_secular(graph: QuantumGraph) -> SecularExpansion:
    """Full secular construction: expansion, centering, realification.

    The occurring total actions are centered on theta = (K_max + K_min)/2,
    the whole sum is rotated by a unimodular constant so that mirror pairs
    become complex conjugate (the leading phase is placed within a quarter
    turn of the real axis), conjugate exponentials are folded into cosines
    and the leading amplitude is normalized to one.
    """
    expo = transfer_determinant(graph)
    groups = _cluster_actions(expo)
    if len(groups) < 2:
        raise RealificationFailure(
            "secular determinant has no oscillatory content after cancellation"
        )
    k_min, c_min = groups[0]
    k_max, c_max = groups[-1]
    theta = 0.5 * (k_max + k_min)
    s0 = theta - k_min

    if abs(abs(c_max) - abs(c_min)) > CONJUGATE_TOL:
        raise RealificationFailure(
            f"extreme coefficients have unequal magnitude: {abs(c_min):g} vs {abs(c_max):g}"
        )

    # c_max must rotate onto conj(c_min): two unimodular solutions, pi apart.
    gamma = 0.5 * cmath.phase(c_min.conjugate() / c_max)
    rotation = cmath.exp(1j * gamma)
    lead = rotation * c_max
    # Keep the leading phase within a quarter turn of zero; on the pure
    # imaginary boundary prefer the phase -pi/2.
    boundary = 1e-12 * abs(lead)
    if lead.real < -boundary or (abs(lead.real) <= boundary and lead.imag > 0.0):
        rotation = -rotation
        lead = -lead

    centered: list[tuple[float, complex]] = [(a - theta, c) for a, c in groups]
    minus = {}
    plus = []
    zero_coeff = 0.0 + 0.0j
    for kappa, coeff in centered:
        if kappa > MERGE_TOL:
            plus.append((kappa, coeff))
        elif kappa < -MERGE_TOL:
            minus[-kappa] = coeff
        else:
            zero_coeff += coeff

    paired: list[tuple[float, complex]] = []
    for kappa, c_plus in plus:
        partner = None
        for cand in minus:
            if abs(cand - kappa) <= 10 * MERGE_TOL:
                partner = cand
                break
        c_minus = minus.pop(partner) if partner is not None else 0.0 + 0.0j
        p = rotation * c_plus
        q = (rotation * c_minus).conjugate()
        if abs(p - q) > CONJUGATE_TOL:
            raise RealificationFailure(
                f"coefficients at actions +-{kappa:g} are not conjugate: {p!r} vs {q!r}"
            )
        paired.append((kappa, 0.5 * (p + q)))
    if minus:
        smallest = min(minus)
        raise RealificationFailure(f"unpaired coefficient at centered action -{smallest:g}")

    r0 = rotation * zero_coeff
    if abs(r0.imag) > CONJUGATE_TOL:
        raise RealificationFailure(f"constant term is not real: {r0!r}")

    r_lead = paired[-1][1]
    lead_amp = abs(r_lead)
    if lead_amp < 1e-12:
        raise DegenerateLeadingTerm(
            f"leading cosine amplitude {lead_amp:g} vanished after cancellation"
        )
    phi0 = math.atan2(r_lead.imag, r_lead.real)
    scale = 2.0 * lead_amp

    raw_terms: list[tuple[float, float, float]] = []
    for kappa, r in paired[:-1]:
        raw_terms.append((kappa, -abs(r) / lead_amp, math.atan2(r.imag, r.real)))
    if abs(r0.real) > 0.0:
        raw_terms.append((0.0, -r0.real / scale, 0.0))

    series = canonicalize(s0, phi0, raw_terms)
    return SecularExpansion(
        series=series,
        theta=theta,
        rotation=rotation,
        scale=scale,
        expo=expo,
        sigma=bond_scattering_matrix(graph),
        actions=directed_actions(graph),
    )


def secular_series(graph: QuantumGraph) -> SpectralSeries:
    """Canonical secular cosine series of a scaling graph."""
    return expand_secular(graph).series
