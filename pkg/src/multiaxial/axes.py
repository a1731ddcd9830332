"""Constellations on the sphere: Majorana roots and per-rank axis systems.

Both representations reduce to finding the roots of a complex polynomial in
the stereographic variable Z = tan(theta/2) e^{i phi} and mapping them back
to the sphere.  For mixed-state tensors the 2k roots close under the
antipodal map and pair into k double-headed axes.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import least_squares, linear_sum_assignment

from .angular import couple_axis_chain
from .fano import SphericalTensorSet
from .halfint import HalfInteger, projections
from .states import PureState

ZERO_TOL = 1e-12
PAIR_TOL = 1e-6


class AxisPairingError(RuntimeError):
    """Roots failed to close under the antipodal map within tolerance."""

    def __init__(self, message: str, unpaired: list):
        super().__init__(message)
        self.unpaired = unpaired


class DegenerateFitError(RuntimeError):
    """The coupled axis tensor vanished; no scale can be fitted."""


@dataclass(frozen=True)
class SpherePoint:
    """Point (theta, phi) with theta in [0, pi], phi in [0, 2 pi); poles at phi=0."""

    theta: float
    phi: float

    @staticmethod
    def create(theta: float, phi: float) -> "SpherePoint":
        theta = min(max(theta, 0.0), math.pi)
        if theta == 0.0 or theta == math.pi:
            return SpherePoint(theta, 0.0)
        phi = phi % (2.0 * math.pi)
        if 2.0 * math.pi - phi < 1e-9:
            phi = 0.0
        return SpherePoint(theta, phi)

    @staticmethod
    def from_root(z: complex) -> "SpherePoint":
        return SpherePoint.create(2.0 * math.atan(abs(z)), cmath.phase(z))

    @staticmethod
    def from_vector(v: np.ndarray) -> "SpherePoint":
        x, y, z = float(v[0]), float(v[1]), float(v[2])
        r = math.sqrt(x * x + y * y + z * z)
        return SpherePoint.create(math.acos(max(-1.0, min(1.0, z / r))),
                                  math.atan2(y, x))

    @property
    def unit_vector(self) -> np.ndarray:
        st = math.sin(self.theta)
        return np.array(
            [st * math.cos(self.phi), st * math.sin(self.phi), math.cos(self.theta)]
        )

    def antipode(self) -> "SpherePoint":
        return SpherePoint.create(math.pi - self.theta, self.phi + math.pi)


NORTH_POLE = SpherePoint(0.0, 0.0)
SOUTH_POLE = SpherePoint(math.pi, 0.0)


@dataclass(frozen=True)
class Axis:
    """A double-headed direction, stored by its canonical-hemisphere head.

    Canonical head: theta < pi/2, or theta = pi/2 with phi in [0, pi);
    poles are reported as (0, 0).
    """

    representative: SpherePoint

    @staticmethod
    def from_vector(v: np.ndarray, flat_tol: float = 1e-12) -> "Axis":
        v = np.asarray(v, dtype=float)
        v = v / np.linalg.norm(v)
        if v[2] < -flat_tol:
            v = -v
        elif abs(v[2]) <= flat_tol:
            # Equatorial axis: pick the head with phi in [0, pi).
            if v[1] < -flat_tol or (abs(v[1]) <= flat_tol and v[0] < 0.0):
                v = -v
        return Axis(SpherePoint.from_vector(v))

    @property
    def theta(self) -> float:
        return self.representative.theta

    @property
    def phi(self) -> float:
        return self.representative.phi

    @property
    def unit_vector(self) -> np.ndarray:
        return self.representative.unit_vector

    def angle_to(self, other: "Axis") -> float:
        """Angle between the two lines, in [0, pi/2]."""
        d = abs(float(np.dot(self.unit_vector, other.unit_vector)))
        return math.acos(min(1.0, d))


Z_AXIS = Axis(NORTH_POLE)


@dataclass(frozen=True)
class RankDecomposition:
    """One rank of the multiaxial representation: scalar r_k and k axes."""

    k: int
    r_k: float
    axes: tuple  # ((Axis, multiplicity), ...) sorted by multiplicity desc
    fit_residual: float = 0.0

    @property
    def present(self) -> bool:
        return self.r_k > 0.0

    def expanded_axes(self) -> list[Axis]:
        out = []
        for axis, mult in self.axes:
            out.extend([axis] * mult)
        return out


# ---------------------------------------------------------------------------
# Polynomial machinery


def _polish_roots(coeffs_desc: np.ndarray, roots: np.ndarray,
                  steps: int = 5) -> np.ndarray:
    deriv = np.polyder(coeffs_desc)
    out = roots.copy()
    for i, z in enumerate(out):
        best = z
        best_val = abs(np.polyval(coeffs_desc, z))
        for _ in range(steps):
            d = np.polyval(deriv, z)
            if abs(d) < 1e-300:
                break
            z = z - np.polyval(coeffs_desc, z) / d
            val = abs(np.polyval(coeffs_desc, z))
            if val < best_val:
                best, best_val = z, val
        out[i] = best
    return out


def _roots_ascending(coeffs: np.ndarray) -> np.ndarray:
    """Finite roots of a polynomial given by ascending coefficients."""
    desc = coeffs[::-1]
    roots = np.roots(desc)
    if len(roots):
        roots = _polish_roots(desc, roots)
    return roots


def majorana_polynomial(psi: PureState) -> np.ndarray:
    """Ascending coefficients of P(Z) = sum_m (-1)^{j+m} sqrt(C(2j, j+m)) a_m Z^{j+m}."""
    n = psi.j.twice  # 2j
    coeffs = np.zeros(n + 1, dtype=complex)
    for m in projections(psi.j):
        power = (psi.j.twice + m.twice) // 2
        amp = psi.amplitudes[(psi.j.twice - m.twice) // 2]
        coeffs[power] = (-1) ** power * math.sqrt(math.comb(n, power)) * amp
    return coeffs


def majorana_roots(psi: PureState) -> list[SpherePoint]:
    """The 2j Majorana points, with multiplicity; degree deficiency maps to the south pole."""
    if psi.j.twice < 1:
        raise ValueError("need j >= 1/2 for a Majorana constellation")
    coeffs = majorana_polynomial(psi)
    scale = float(np.max(np.abs(coeffs)))
    if scale == 0.0:
        raise RuntimeError("zero Majorana polynomial for a normalized state")
    tol = scale * ZERO_TOL
    degree = len(coeffs) - 1
    top = degree
    while top > 0 and abs(coeffs[top]) <= tol:
        top -= 1
    n_infinity = degree - top
    points = [SOUTH_POLE] * n_infinity
    trimmed = coeffs[: top + 1]
    if top > 0:
        points.extend(SpherePoint.from_root(z) for z in _roots_ascending(trimmed))
    points.sort(key=lambda p: (p.theta, p.phi))
    return points


def mar_polynomial(t: SphericalTensorSet, k: int) -> np.ndarray:
    """Ascending coefficients of the rank-k axis polynomial.

    The coefficient of Z^{k-q} is sqrt(C(2k, k+q)) t^k_q; the sign factor
    (-1)^{2(k-q)} is unity for integral ranks.
    """
    if k < 1 or k > t.max_rank:
        raise ValueError(f"rank {k} outside 1..2j = {t.max_rank}")
    coeffs = np.zeros(2 * k + 1, dtype=complex)
    for q in range(-k, k + 1):
        coeffs[k - q] = math.sqrt(math.comb(2 * k, k + q)) * t.component(k, q)
    return coeffs


def _pair_antipodes(vectors: list[np.ndarray], tol: float) -> list[np.ndarray]:
    """Pair each point with its antipode; return one line direction per pair."""
    n = len(vectors)
    if n % 2 != 0:
        raise AxisPairingError("odd number of points cannot pair", vectors)

    def mismatch(i: int, l: int) -> float:
        d = -float(np.dot(vectors[i], vectors[l]))
        return math.acos(max(-1.0, min(1.0, d)))

    # Greedy nearest-antipode matching.
    remaining = list(range(n))
    pairs: list[tuple[int, int]] = []
    ok = True
    while remaining:
        i = remaining.pop(0)
        best_l, best_val = None, math.inf
        for l in remaining:
            val = mismatch(i, l)
            if val < best_val:
                best_l, best_val = l, val
        if best_l is None or best_val > tol:
            ok = False
            break
        remaining.remove(best_l)
        pairs.append((i, best_l))

    if not ok:
        # Optimal assignment fallback for degenerate clusters.
        cost = np.empty((n, n))
        for i in range(n):
            for l in range(n):
                cost[i, l] = math.inf if i == l else mismatch(i, l)
        rows, cols = linear_sum_assignment(cost)
        match = dict(zip(rows.tolist(), cols.tolist()))
        pairs = []
        used = set()
        bad = []
        for i in range(n):
            if i in used:
                continue
            l = match[i]
            if match.get(l) != i or mismatch(i, l) > tol:
                bad.append(vectors[i])
                continue
            used.update((i, l))
            pairs.append((i, l))
        if bad or len(pairs) != n // 2:
            raise AxisPairingError(
                f"{n - 2 * len(pairs)} points have no antipodal partner "
                f"within {tol:g} rad", bad or vectors)

    lines = []
    for i, l in pairs:
        d = vectors[i] - vectors[l]
        lines.append(d / np.linalg.norm(d))
    return lines


def cluster_directions(vectors: list[np.ndarray], tol: float) -> list[tuple[np.ndarray, int]]:
    """Group line directions whose mutual angle is within tol (transitively)."""
    n = len(vectors)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for l in range(i + 1, n):
            d = abs(float(np.dot(vectors[i], vectors[l])))
            if math.acos(min(1.0, d)) <= tol:
                ri, rl = find(i), find(l)
                if ri != rl:
                    parent[rl] = ri

    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    out = []
    for members in groups.values():
        ref = vectors[members[0]]
        acc = np.zeros(3)
        for i in members:
            v = vectors[i]
            acc += v if float(np.dot(v, ref)) >= 0.0 else -v
        out.append((acc / np.linalg.norm(acc), len(members)))
    return out


def _ordered_axis_list(clusters: list[tuple[np.ndarray, int]]) -> tuple:
    axes = [(Axis.from_vector(v), mult) for v, mult in clusters]
    axes.sort(key=lambda am: (-am[1], am[0].theta, am[0].phi))
    return tuple(axes)


def fit_rk(components: np.ndarray, axes: tuple) -> tuple[float, float]:
    """Least-squares magnitude of t^k over the sequentially coupled axis tensor.

    Axes are coupled in descending-multiplicity, then (theta, phi) order;
    the head-flip phase freedom is absorbed by reporting a magnitude.
    Returns (r_k, max-residual).
    """
    directions: list[tuple[float, float]] = []
    for axis, mult in sorted(axes, key=lambda am: (-am[1], am[0].theta, am[0].phi)):
        directions.extend([(axis.theta, axis.phi)] * mult)
    k = len(directions)
    if len(components) != 2 * k + 1:
        raise ValueError("total axis multiplicity must equal the rank")
    coupled = couple_axis_chain(directions)
    denom = float(np.sum(np.abs(coupled) ** 2))
    if denom < 1e-14:
        raise DegenerateFitError("coupled axis tensor vanished")
    scale = complex(np.sum(np.conj(coupled) * components)) / denom
    residual = float(np.max(np.abs(components - scale * coupled)))
    return abs(scale), residual


def _refine_axes(comp: np.ndarray, axes: tuple) -> tuple:
    """Polish the clustered axis directions against the tensor components.

    Multiple roots come out of the polynomial solver with an error that
    scales like eps^(1/multiplicity); minimizing the fit residual over the
    distinct (theta, phi) recovers them to near machine precision.
    """
    ordered = sorted(axes, key=lambda am: (-am[1], am[0].theta, am[0].phi))
    mults = [m for _, m in ordered]
    x0 = []
    for axis, _ in ordered:
        x0 += [axis.theta, axis.phi]

    def residual_vec(x):
        directions = []
        for i, mult in enumerate(mults):
            directions.extend([(x[2 * i], x[2 * i + 1])] * mult)
        coupled = couple_axis_chain(directions)
        denom = float(np.sum(np.abs(coupled) ** 2))
        if denom < 1e-14:
            return np.full(2 * len(comp), 1e3)
        s = complex(np.sum(np.conj(coupled) * comp)) / denom
        diff = comp - s * coupled
        return np.concatenate([diff.real, diff.imag])

    sol = least_squares(residual_vec, x0, xtol=3e-16, ftol=3e-16, gtol=3e-16)
    refined = tuple(
        (Axis.from_vector(SpherePoint.create(sol.x[2 * i],
                                             sol.x[2 * i + 1]).unit_vector), m)
        for i, m in enumerate(mults)
    )
    return _ordered_axis_list([(a.unit_vector, m) for a, m in refined])


def solve_axes(
    t: SphericalTensorSet,
    k: int,
    zero_tol: float = ZERO_TOL,
    pair_tol: float = PAIR_TOL,
) -> RankDecomposition:
    """Find the k axes and the invariant scalar r_k of one rank."""
    comp = t.rank_components(k)
    scale = float(np.max(np.abs(comp)))
    if scale < zero_tol:
        return RankDecomposition(k, 0.0, ())

    coeffs = mar_polynomial(t, k)
    ctol = float(np.max(np.abs(coeffs))) * 1e-12
    degree = 2 * k
    lead = 0
    while lead < degree and abs(coeffs[degree - lead]) <= ctol:
        lead += 1
    trail = 0
    while trail < degree and abs(coeffs[trail]) <= ctol:
        trail += 1
    # Conjugate-reversal symmetry makes the counts equal; strip matched
    # pairs, each contributing a z-axis (root at 0 plus root at infinity).
    stripped = min(lead, trail)
    n_z_axes = stripped
    trimmed = coeffs[stripped: degree - stripped + 1]

    vectors: list[np.ndarray] = []
    if len(trimmed) > 1:
        roots = _roots_ascending(trimmed)
        vectors = [SpherePoint.from_root(z).unit_vector for z in roots]

    # A root of multiplicity m scatters by about eps^(1/m); allow for the
    # worst case when matching antipodes.
    scatter = 100.0 * np.finfo(float).eps ** (1.0 / max(2, k))
    lines = _pair_antipodes(vectors, max(pair_tol, scatter)) if vectors else []
    lines.extend(np.array([0.0, 0.0, 1.0]) for _ in range(n_z_axes))
    if len(lines) != k:
        raise AxisPairingError(
            f"rank {k}: expected {k} axes, built {len(lines)}", vectors)

    # Cluster coarse-to-fine: accept the coarsest grouping that the tensor
    # itself validates (tiny residual after refinement); over-merging
    # distinct axes cannot fit, so it falls through to a finer tolerance.
    accept = 1e-9 * max(1.0, scale)
    best = None
    candidates = [c for c in (1e-2, 1e-3, 1e-4, 1e-5) if c > pair_tol]
    candidates.append(pair_tol)
    for cluster_tol in candidates:
        axes = _ordered_axis_list(cluster_directions(lines, cluster_tol))
        r_k, residual = fit_rk(comp, axes)
        if residual > 1e-12 * max(1.0, scale):
            axes = _refine_axes(comp, axes)
            r_k, residual = fit_rk(comp, axes)
        if best is None or residual < best[2]:
            best = (r_k, axes, residual)
        if residual <= accept:
            break
    r_k, axes, residual = best
    return RankDecomposition(k, r_k, axes, residual)


def solve_all_axes(
    t: SphericalTensorSet,
    zero_tol: float = ZERO_TOL,
    pair_tol: float = PAIR_TOL,
) -> list[RankDecomposition]:
    return [
        solve_axes(t, k, zero_tol=zero_tol, pair_tol=pair_tol)
        for k in range(1, t.max_rank + 1)
    ]


def pairwise_invariants(decompositions: list[RankDecomposition]) -> list[float]:
    """|cos(angle)| for every unordered pair of axes, multiplicity counted, sorted descending."""
    vectors: list[np.ndarray] = []
    for decomp in decompositions:
        for axis in decomp.expanded_axes():
            vectors.append(axis.unit_vector)
    values = []
    for i in range(len(vectors)):
        for l in range(i + 1, len(vectors)):
            values.append(min(1.0, abs(float(np.dot(vectors[i], vectors[l])))))
    values.sort(reverse=True)
    return values
