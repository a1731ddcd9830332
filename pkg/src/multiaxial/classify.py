"""Degeneracy configurations, class signatures and LU-equivalence testing."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .axes import (
    Axis,
    RankDecomposition,
    cluster_directions,
    fit_rk,
    pairwise_invariants,
    solve_all_axes,
)
from .fano import SphericalTensorSet, extract_tensors
from .halfint import HalfInteger
from .states import DensityMatrix, EulerAngles, rotate_density, validate


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds shared by the classifier and the CLI."""

    zero: float = 1e-12        # |t^k_q| below which a rank is absent
    angle: float = 1e-6        # radians; identical-axis and pairing threshold
    fingerprint: float = 1e-7  # r_k and pairwise-cosine comparisons
    purity: float = 1e-8       # Tr(rho^2) = 1 test for the pure recipe


DEFAULT_TOLERANCES = Tolerances()


@dataclass(frozen=True)
class DegeneracyConfiguration:
    """Partition of the rank k recording multiplicities of identical axes."""

    k: int
    partition: tuple[int, ...]

    def __post_init__(self):
        if sum(self.partition) != self.k:
            raise ValueError(f"partition {self.partition} does not sum to {self.k}")
        if list(self.partition) != sorted(self.partition, reverse=True):
            raise ValueError("partition must be descending")

    @property
    def diversity_degree(self) -> int:
        return len(self.partition)

    def render(self) -> str:
        return f"D^{self.k}_" + ",".join(str(n) for n in self.partition)


def degeneracy_configuration(
    decomp: RankDecomposition, angular_tol: float
) -> DegeneracyConfiguration:
    """Cluster the axes of one rank by angle and read off the partition."""
    if not decomp.present:
        raise ValueError(f"rank {decomp.k} is absent; no configuration")
    vectors = []
    mults = []
    for axis, mult in decomp.axes:
        vectors.append(axis.unit_vector)
        mults.append(mult)
    merged = _merge_multiplicities(vectors, mults, angular_tol)
    partition = tuple(sorted(merged, reverse=True))
    return DegeneracyConfiguration(decomp.k, partition)


def _merge_multiplicities(vectors, mults, tol) -> list[int]:
    clusters = cluster_directions(vectors, tol)
    if len(clusters) == len(vectors):
        return list(mults)
    # cluster_directions loses the per-entry weights; redo the grouping by
    # assigning every input to its cluster representative.
    totals = []
    for rep, _ in clusters:
        total = 0
        for v, m in zip(vectors, mults):
            if math.acos(min(1.0, abs(float(np.dot(v, rep))))) <= 2 * tol:
                total += m
        totals.append(total)
    if sum(totals) != sum(mults):
        # Overlapping assignment; fall back to exhaustive union-find on
        # expanded axes.
        expanded = []
        for v, m in zip(vectors, mults):
            expanded.extend([v] * m)
        return [m for _, m in cluster_directions(expanded, tol)]
    return totals


@dataclass(frozen=True)
class RankEntry:
    k: int
    present: bool
    configuration: DegeneracyConfiguration | None
    r_k: float
    decomposition: RankDecomposition | None


@dataclass(frozen=True)
class ClassSignature:
    """Per-rank configurations plus the rotation-invariant fingerprint."""

    j: HalfInteger
    entries: tuple[RankEntry, ...]
    pairwise: tuple[float, ...]

    def render(self) -> str:
        parts = [
            entry.configuration.render()
            for entry in self.entries
            if entry.present and entry.configuration is not None
        ]
        return "{" + ", ".join(parts) + "}"

    @property
    def r_values(self) -> dict[int, float]:
        return {e.k: e.r_k for e in self.entries if e.present}

    def invariant_count(self) -> int:
        """Pairwise axis invariants plus one scalar per rank (present or not)."""
        return len(self.pairwise) + len(self.entries)

    def decompositions(self) -> list[RankDecomposition]:
        return [e.decomposition for e in self.entries if e.decomposition is not None]


def signature_from_tensors(
    t: SphericalTensorSet, tolerances: Tolerances = DEFAULT_TOLERANCES
) -> ClassSignature:
    decomps = solve_all_axes(t, zero_tol=tolerances.zero, pair_tol=tolerances.angle)
    entries = []
    for decomp in decomps:
        if decomp.present:
            config = degeneracy_configuration(decomp, tolerances.angle)
            entries.append(RankEntry(decomp.k, True, config, decomp.r_k, decomp))
        else:
            entries.append(RankEntry(decomp.k, False, None, 0.0, None))
    pairwise = tuple(pairwise_invariants([d for d in decomps if d.present]))
    return ClassSignature(t.j, tuple(entries), pairwise)


def class_signature(
    rho: DensityMatrix, tolerances: Tolerances = DEFAULT_TOLERANCES
) -> ClassSignature:
    return signature_from_tensors(extract_tensors(rho), tolerances)


# ---------------------------------------------------------------------------
# Pure-state separability recipe


@lru_cache(maxsize=None)
def separable_reference_r(twice_j: int) -> dict[int, float]:
    """Reference r_k of the aligned product state |j j><j j|, all axes on z."""
    j = HalfInteger(twice_j)
    dim = twice_j + 1
    mat = np.zeros((dim, dim), dtype=complex)
    mat[0, 0] = 1.0
    t = extract_tensors(DensityMatrix(j, mat))
    z_axis = Axis.from_vector(np.array([0.0, 0.0, 1.0]))
    out = {}
    for k in range(1, t.max_rank + 1):
        r, _ = fit_rk(t.rank_components(k), ((z_axis, k),))
        out[k] = r
    return out


@dataclass(frozen=True)
class SeparabilityVerdict:
    separable: bool
    applicable: bool
    reason: str


def pure_separability_check(
    rho: DensityMatrix, tolerances: Tolerances = DEFAULT_TOLERANCES
) -> SeparabilityVerdict:
    """The aligned-axes-plus-reference-scalars recipe; pure states only."""
    report = validate(rho)
    if abs(report.purity - 1.0) > tolerances.purity:
        return SeparabilityVerdict(
            False, False, f"not applicable: mixed state (purity {report.purity:.6f})"
        )
    signature = class_signature(rho, tolerances)
    all_axes: list[Axis] = []
    for decomp in signature.decompositions():
        all_axes.extend(decomp.expanded_axes())
    max_angle = 0.0
    for i in range(len(all_axes)):
        for l in range(i + 1, len(all_axes)):
            max_angle = max(max_angle, all_axes[i].angle_to(all_axes[l]))
    if max_angle > tolerances.angle:
        return SeparabilityVerdict(
            False, True,
            f"axes not all collinear (max pairwise angle {max_angle:.3e} rad)",
        )
    reference = separable_reference_r(rho.j.twice)
    r_values = signature.r_values
    for k, r_ref in reference.items():
        r_here = r_values.get(k, 0.0)
        if abs(r_here - r_ref) > 1e-7:
            return SeparabilityVerdict(
                False, True,
                f"r_{k} = {r_here:.9f} differs from separable reference "
                f"{r_ref:.9f}",
            )
    return SeparabilityVerdict(True, True, "all axes collinear and every r_k matches "
                                           "the aligned product state")


# ---------------------------------------------------------------------------
# LU equivalence


@dataclass(frozen=True)
class EquivalenceResult:
    verdict: str  # "equivalent" | "inequivalent" | "fingerprint-match-only"
    reason: str
    witness: EulerAngles | None = None


def _configurations_match(a: ClassSignature, b: ClassSignature) -> bool:
    for ea, eb in zip(a.entries, b.entries):
        if ea.present != eb.present:
            return False
        if ea.present and ea.configuration.partition != eb.configuration.partition:
            return False
    return True


def _fingerprints_match(a: ClassSignature, b: ClassSignature, tol: float) -> bool:
    for ea, eb in zip(a.entries, b.entries):
        if abs(ea.r_k - eb.r_k) > tol:
            return False
    if len(a.pairwise) != len(b.pairwise):
        return False
    return all(abs(x - y) <= tol for x, y in zip(a.pairwise, b.pairwise))


def _rank_axis_table(sig: ClassSignature) -> list[tuple[int, np.ndarray, int]]:
    table = []
    for entry in sig.entries:
        if entry.decomposition is None:
            continue
        for axis, mult in entry.decomposition.axes:
            table.append((entry.k, axis.unit_vector, mult))
    return table


def _frame_from_pair(u1: np.ndarray, u2: np.ndarray) -> np.ndarray | None:
    n = u2 - float(np.dot(u1, u2)) * u1
    norm = float(np.linalg.norm(n))
    if norm < 1e-9:
        return None
    n = n / norm
    return np.column_stack([u1, n, np.cross(u1, n)])

def _rotation_candidates(table_a, table_b, angle_tol: float):
    """Orthogonal maps sending the constellation of A onto B, rank by rank."""
    # Pick an anchor pair of non-collinear axes in A.
    anchor = None
    for i in range(len(table_a)):
        for l in range(len(table_a)):
            if i == l:
                continue
            dot = max(-1.0, min(1.0, float(np.dot(table_a[i][1], table_a[l][1]))))
            line_angle = math.acos(abs(dot))
            if line_angle > 1e-4:
                # head angle, not line angle: the frames are built from the
                # stored heads, so candidate filtering must compare like
                # with like
                anchor = (i, l, math.acos(dot))
                break
        if anchor:
            break

    if anchor is None:
        # All axes collinear: any rotation mapping the common line works.
        u = table_a[0][1]
        v = table_b[0][1]
        for head in (v, -v):
            axis = np.cross(u, head)
            norm = float(np.linalg.norm(axis))
            dot = max(-1.0, min(1.0, float(np.dot(u, head))))
            if norm < 1e-12:
                if dot > 0.0:
                    yield np.eye(3)
                else:
                    perp = np.array([1.0, 0.0, 0.0])
                    if abs(float(np.dot(perp, u))) > 0.9:
                        perp = np.array([0.0, 1.0, 0.0])
                    perp = perp - float(np.dot(perp, u)) * u
                    perp /= np.linalg.norm(perp)
                    yield _rotation_about(perp, math.pi)
                continue
            yield _rotation_about(axis / norm, math.acos(dot))
        return

    i, l, ang = anchor
    k1, u1, _ = table_a[i]
    k2, u2, _ = table_a[l]
    fa = _frame_from_pair(u1, u2)
    for kb1, v1, _ in table_b:
        if kb1 != k1:
            continue
        for kb2, v2, _ in table_b:
            if kb2 != k2:
                continue
            for s1 in (1.0, -1.0):
                for s2 in (1.0, -1.0):
                    w1, w2 = s1 * v1, s2 * v2
                    angb = math.acos(max(-1.0, min(1.0, float(np.dot(w1, w2)))))
                    if abs(angb - ang) > max(1e-4, 10 * angle_tol):
                        continue
                    fb = _frame_from_pair(w1, w2)
                    if fb is None:
                        continue
                    yield fb @ fa.T


def _rotation_about(axis: np.ndarray, angle: float) -> np.ndarray:
    x, y, z = axis
    c, s = math.cos(angle), math.sin(angle)
    cc = 1.0 - c
    return np.array(
        [
            [c + x * x * cc, x * y * cc - z * s, x * z * cc + y * s],
            [y * x * cc + z * s, c + y * y * cc, y * z * cc - x * s],
            [z * x * cc - y * s, z * y * cc + x * s, c + z * z * cc],
        ]
    )


def _match_constellations(rot: np.ndarray, table_a, table_b, tol: float):
    """Greedy per-rank matching of rotated A axes onto B axes.

    Returns matched (rotated_a, signed_b) vector pairs, or None.
    """
    by_rank: dict[int, list[tuple[np.ndarray, int]]] = {}
    for k, v, mult in table_b:
        by_rank.setdefault(k, []).append((v, mult))
    pairs = []
    consumed: dict[int, set] = {}
    for k, v, mult in table_a:
        rv = rot @ v
        candidates = by_rank.get(k, [])
        found = False
        for idx, (w, wmult) in enumerate(candidates):
            if idx in consumed.setdefault(k, set()):
                continue
            dot = float(np.dot(rv, w))
            if wmult == mult and math.acos(min(1.0, abs(dot))) <= tol:
                consumed[k].add(idx)
                head = w if dot >= 0.0 else -w
                pairs.append((rv, head, mult))
                found = True
                break
        if not found:
            return None
    return pairs


def _kabsch_refine(rot: np.ndarray, pairs) -> np.ndarray:
    a = np.array([rot.T @ rv for rv, _, _ in pairs])  # original A directions
    b = np.array([w for _, w, _ in pairs])
    weights = np.array([m for _, _, m in pairs], dtype=float)
    h = (a * weights[:, None]).T @ b
    u, _, vt = np.linalg.svd(h)
    d = np.sign(np.linalg.det(vt.T @ u.T))
    refined = vt.T @ np.diag([1.0, 1.0, d]) @ u.T
    return refined


def euler_zyz_from_matrix(rot: np.ndarray) -> EulerAngles:
    """Euler angles with R = Rz(alpha) Ry(beta) Rz(gamma)."""
    beta = math.acos(max(-1.0, min(1.0, float(rot[2, 2]))))
    if math.sin(beta) > 1e-9:
        alpha = math.atan2(float(rot[1, 2]), float(rot[0, 2]))
        gamma = math.atan2(float(rot[2, 1]), -float(rot[2, 0]))
    elif rot[2, 2] > 0.0:
        alpha = math.atan2(float(rot[1, 0]), float(rot[0, 0]))
        gamma = 0.0
    else:
        alpha = math.atan2(float(rot[1, 0]), -float(rot[0, 0]))
        gamma = 0.0
    return EulerAngles(alpha, beta, gamma)


def lu_equivalent(
    rho_a: DensityMatrix,
    rho_b: DensityMatrix,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> EquivalenceResult:
    """Three-stage test: configurations, invariant fingerprint, witness rotation."""
    if rho_a.j != rho_b.j:
        raise ValueError(f"spin mismatch: {rho_a.j} vs {rho_b.j}")
    sig_a = class_signature(rho_a, tolerances)
    sig_b = class_signature(rho_b, tolerances)

    if not _configurations_match(sig_a, sig_b):
        return EquivalenceResult(
            "inequivalent",
            f"degeneracy configurations differ: {sig_a.render()} vs {sig_b.render()}",
        )
    if not _fingerprints_match(sig_a, sig_b, tolerances.fingerprint):
        return EquivalenceResult(
            "inequivalent", "invariant fingerprints (r_k, pairwise cosines) differ"
        )

    table_a = _rank_axis_table(sig_a)
    table_b = _rank_axis_table(sig_b)
    if not table_a:
        # No axes at all: both are the maximally mixed state.
        return EquivalenceResult("equivalent", "both states have no axes",
                                 EulerAngles(0.0, 0.0, 0.0))

    witness_tol = max(tolerances.angle, 1e-6)
    for rot in _rotation_candidates(table_a, table_b, tolerances.angle):
        pairs = _match_constellations(rot, table_a, table_b, 100 * witness_tol)
        if pairs is None:
            continue
        refined = _kabsch_refine(rot, pairs)
        pairs = _match_constellations(refined, table_a, table_b, witness_tol)
        if pairs is None:
            continue
        angles = euler_zyz_from_matrix(refined)
        rotated = rotate_density(rho_a, angles)
        if float(np.max(np.abs(rotated.matrix - rho_b.matrix))) <= 1e-6:
            return EquivalenceResult(
                "equivalent", "witness rotation maps the constellations and "
                "the density matrices", angles,
            )
    return EquivalenceResult(
        "fingerprint-match-only",
        "invariants agree but no single witness rotation was found",
    )
