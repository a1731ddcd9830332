"""Spherical tensor parameters of a density matrix and their rotations.

The density matrix is expanded over the irreducible tensor operators as
rho = (1/(2j+1)) sum_{k q} t^k_q tau^{k+}_q, with t^k_q = Tr(rho tau^k_q).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .angular import tau_matrix, wigner_d
from .halfint import HalfInteger, dimension
from .states import DensityMatrix, EulerAngles

CONJUGATION_TOL = 1e-10
#: Looser bound when reading hand-authored tensor files.
FILE_CONJUGATION_TOL = 1e-8


class TensorFormatError(ValueError):
    """A tensor set or tensor file violates its structural constraints."""


@dataclass(frozen=True)
class SphericalTensorSet:
    """Components t^k_q for k = 0..2j; each rank stored ascending in q."""

    j: HalfInteger
    ranks: tuple

    def __post_init__(self):
        n = self.j.twice  # 2j, also the highest rank
        ranks = tuple(np.asarray(r, dtype=complex) for r in self.ranks)
        object.__setattr__(self, "ranks", ranks)
        if len(ranks) != n + 1:
            raise ValueError(f"expected ranks 0..{n}, got {len(ranks)} arrays")
        for k, comp in enumerate(ranks):
            if comp.shape != (2 * k + 1,):
                raise ValueError(f"rank {k} must have {2 * k + 1} components")

    @property
    def max_rank(self) -> int:
        return self.j.twice

    def component(self, k: int, q: int) -> complex:
        return complex(self.ranks[k][q + k])

    def rank_components(self, k: int) -> np.ndarray:
        return self.ranks[k]

    def conjugation_defect(self) -> float:
        worst = 0.0
        for k, comp in enumerate(self.ranks):
            for q in range(-k, k + 1):
                d = abs(np.conj(comp[q + k]) - (-1) ** q * comp[-q + k])
                worst = max(worst, d)
        return worst

    def check(self, tol: float = CONJUGATION_TOL) -> None:
        t00 = self.component(0, 0)
        if abs(t00 - 1.0) > tol:
            raise TensorFormatError(f"t^0_0 must be 1, got {t00}")
        defect = self.conjugation_defect()
        if defect > tol:
            raise TensorFormatError(
                f"conjugation property violated (defect {defect:.3e} > {tol:g})"
            )


def extract_tensors(rho: DensityMatrix) -> SphericalTensorSet:
    """All t^k_q = Tr(rho tau^k_q) for k = 0 .. 2j."""
    n = rho.j.twice
    ranks = []
    for k in range(n + 1):
        comp = np.empty(2 * k + 1, dtype=complex)
        for q in range(-k, k + 1):
            comp[q + k] = np.trace(rho.matrix @ tau_matrix(rho.j, k, q))
        ranks.append(comp)
    return SphericalTensorSet(rho.j, tuple(ranks))


def reconstruct_density(t: SphericalTensorSet) -> DensityMatrix:
    """Invert the expansion: rho = (1/(2j+1)) sum t^k_q tau^{k+}_q."""
    t.check(FILE_CONJUGATION_TOL)
    dim = dimension(t.j)
    mat = np.zeros((dim, dim), dtype=complex)
    for k in range(t.max_rank + 1):
        for q in range(-k, k + 1):
            tau = tau_matrix(t.j, k, q)
            mat += t.component(k, q) * tau.conj().T
    return DensityMatrix(t.j, mat / dim)


def rotate_tensors(t: SphericalTensorSet, angles: EulerAngles) -> SphericalTensorSet:
    """Tensor components of the rotated state.

    Matches rotate_density: extracting tensors from the conjugated density
    gives (t^k_q)' = sum_q' conj(D^k_{q q'}) t^k_{q'}, since the components
    transform contragradiently to the operator basis.
    """
    ranks = [t.ranks[0].copy()]
    for k in range(1, t.max_rank + 1):
        dmat = np.empty((2 * k + 1, 2 * k + 1), dtype=complex)
        for q in range(-k, k + 1):
            for qp in range(-k, k + 1):
                dmat[q + k, qp + k] = wigner_d(
                    k, q, qp, angles.alpha, angles.beta, angles.gamma
                )
        ranks.append(np.conj(dmat) @ t.ranks[k])
    return SphericalTensorSet(t.j, tuple(ranks))


def rank_norm(t: SphericalTensorSet, k: int) -> float:
    """Rotationally invariant scalar t^k . t^k = sum_q (-1)^q t^k_{-q} t^k_q."""
    if k > t.max_rank:
        raise ValueError(f"rank {k} exceeds 2j = {t.max_rank}")
    comp = t.ranks[k]
    total = 0.0 + 0.0j
    for q in range(-k, k + 1):
        total += (-1) ** q * comp[-q + k] * comp[q + k]
    return float(total.real)


def purity_from_tensors(t: SphericalTensorSet) -> float:
    """Tr(rho^2) = (1/(2j+1)) sum_k t^k . t^k."""
    return sum(rank_norm(t, k) for k in range(t.max_rank + 1)) / dimension(t.j)


# ---------------------------------------------------------------------------
# Tensor file format


def tensors_to_json(t: SphericalTensorSet) -> dict:
    tensors = {}
    for k in range(t.max_rank + 1):
        tensors[str(k)] = [
            {
                "q": q,
                "re": float(t.component(k, q).real),
                "im": float(t.component(k, q).imag),
            }
            for q in range(-k, k + 1)
        ]
    return {"j": str(t.j), "tensors": tensors}


def tensors_from_json(doc: dict) -> SphericalTensorSet:
    try:
        j = HalfInteger.of(doc["j"])
    except (KeyError, TypeError, ValueError) as exc:
        raise TensorFormatError(f"bad or missing 'j': {exc}") from exc
    n = j.twice
    ranks = [np.zeros(2 * k + 1, dtype=complex) for k in range(n + 1)]
    ranks[0][0] = 1.0
    table = doc.get("tensors", {})
    for key, entries in table.items():
        k = int(key)
        if k < 0 or k > n:
            raise TensorFormatError(f"rank {k} outside 0..2j for j={j}")
        for entry in entries:
            q = int(entry["q"])
            if abs(q) > k:
                raise TensorFormatError(f"|q|={abs(q)} exceeds rank {k}")
            ranks[k][q + k] = complex(
                float(entry.get("re", 0.0)), float(entry.get("im", 0.0))
            )
    t = SphericalTensorSet(j, tuple(ranks))
    try:
        t.check(FILE_CONJUGATION_TOL)
    except TensorFormatError:
        raise
    return t


def write_tensors(path, t: SphericalTensorSet) -> None:
    with open(path, "w") as fh:
        json.dump(tensors_to_json(t), fh, indent=2)
        fh.write("\n")


def read_tensors(path) -> SphericalTensorSet:
    with open(path) as fh:
        doc = json.load(fh)
    return tensors_from_json(doc)
