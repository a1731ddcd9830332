"""Constructors for the standard state families used in the analysis.

Dicke basis states, GHZ, coherent (aligned product) states, and the
uniaxial / biaxial / triaxial spin-1 mixed families with their
positive-semidefiniteness domains.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .halfint import HalfInteger, basis_index, dimension
from .states import (
    DensityMatrix,
    EulerAngles,
    PureState,
    pure_to_density,
    rotate_pure,
    validate,
)

SQRT32 = math.sqrt(1.5)
UNIAXIAL_PSD_MAX = math.sqrt(2.0 / 3.0)
BIAXIAL_PSD_MAX = math.sqrt(3.0)


class FamilyParameterError(ValueError):
    """Family parameters are missing, unknown or outside their hard domain."""


def make_dicke(j, m) -> PureState:
    j = HalfInteger.of(j)
    m = HalfInteger.of(m)
    if abs(m.twice) > j.twice:
        raise FamilyParameterError(f"|m|={m} exceeds j={j}")
    amps = np.zeros(dimension(j), dtype=complex)
    amps[basis_index(j, m)] = 1.0
    return PureState(j, amps)


def make_ghz(n_qubits: int) -> PureState:
    if n_qubits < 2:
        raise FamilyParameterError("GHZ needs at least 2 qubits")
    j = HalfInteger(n_qubits)  # j = N/2
    amps = np.zeros(dimension(j), dtype=complex)
    s = 1.0 / math.sqrt(2.0)
    amps[0] = s
    amps[-1] = s
    return PureState(j, amps)


def make_w(n_qubits: int = 3) -> PureState:
    """Single-excitation-from-the-bottom Dicke state |j, -j + 1>."""
    if n_qubits < 2:
        raise FamilyParameterError("W needs at least 2 qubits")
    j = HalfInteger(n_qubits)
    return make_dicke(j, HalfInteger(-j.twice + 2))


def make_bell() -> PureState:
    return make_dicke(1, 0)


def make_coherent(j, theta: float, phi: float) -> PureState:
    """All 2j spinors aligned along (theta, phi): the rotated |j j>."""
    aligned = make_dicke(j, j)
    return rotate_pure(aligned, EulerAngles(phi, theta, 0.0))


@dataclass(frozen=True)
class FamilyState:
    """A constructed family member plus its domain flags."""

    rho: DensityMatrix
    psd_ok: bool
    note: str = ""


def make_uniaxial(r1: float, theta1: float, phi1: float) -> FamilyState:
    """Purely vector-polarized spin-1 state with a single axis at (theta1, phi1)."""
    if r1 <= 0.0:
        raise FamilyParameterError("uniaxial requires r1 > 0")
    c = SQRT32 * r1 * math.cos(theta1)
    off = (math.sqrt(3.0) / 2.0) * r1 * math.sin(theta1) * np.exp(-1j * phi1)
    mat = (
        np.array(
            [
                [1.0 + c, off, 0.0],
                [np.conj(off), 1.0, off],
                [0.0, np.conj(off), 1.0 - c],
            ],
            dtype=complex,
        )
        / 3.0
    )
    rho = DensityMatrix(HalfInteger.of(1), mat)
    psd_ok = r1 <= UNIAXIAL_PSD_MAX + 1e-12
    note = "" if psd_ok else f"r1={r1:g} outside PSD range (0, sqrt(2/3)]"
    return FamilyState(rho, psd_ok, note)


def _alignment_block(r2: float, theta: float) -> tuple[float, float]:
    diag = r2 * (1.0 + math.cos(theta) ** 2) / (2.0 * math.sqrt(3.0))
    corner = -(math.sqrt(3.0) / 2.0) * r2 * math.sin(theta) ** 2
    return diag, corner


def make_biaxial(r2: float, theta: float) -> FamilyState:
    """Purely tensor-polarized spin-1 state in its principal alignment frame.

    Axes {(theta, 0), (theta, pi)}; the corner diagonal entries both carry
    the (1 + cos^2 theta) factor, which the trace and the stated tensor
    components force.
    """
    if r2 <= 0.0:
        raise FamilyParameterError("biaxial requires r2 > 0")
    diag, corner = _alignment_block(r2, theta)
    mat = (
        np.array(
            [
                [1.0 + diag, 0.0, corner],
                [0.0, 1.0 - 2.0 * diag, 0.0],
                [corner, 0.0, 1.0 + diag],
            ],
            dtype=complex,
        )
        / 3.0
    )
    rho = DensityMatrix(HalfInteger.of(1), mat)
    report = validate(rho)
    psd_ok = report.min_eigenvalue >= -1e-10
    note = "" if psd_ok else (
        f"r2={r2:g}, theta={theta:g} not positive semi-definite "
        f"(min eigenvalue {report.min_eigenvalue:.3e})"
    )
    return FamilyState(rho, psd_ok, note)


def make_triaxial(r1: float, r2: float, theta: float) -> FamilyState:
    """Vector plus tensor polarization: z-axis for rank 1, tilted pair for rank 2."""
    if r2 <= 0.0:
        raise FamilyParameterError("triaxial requires r2 > 0")
    c = SQRT32 * r1
    diag, corner = _alignment_block(r2, theta)
    mat = (
        np.array(
            [
                [1.0 + c + diag, 0.0, corner],
                [0.0, 1.0 - 2.0 * diag, 0.0],
                [corner, 0.0, 1.0 - c + diag],
            ],
            dtype=complex,
        )
        / 3.0
    )
    rho = DensityMatrix(HalfInteger.of(1), mat)
    report = validate(rho)
    psd_ok = report.min_eigenvalue >= -1e-10
    note = "" if psd_ok else (
        f"r1={r1:g}, r2={r2:g}, theta={theta:g} not positive semi-definite "
        f"(min eigenvalue {report.min_eigenvalue:.3e})"
    )
    return FamilyState(rho, psd_ok, note)


# ---------------------------------------------------------------------------
# FamilySpec: {"family": "...", "params": {...}}

FAMILY_PARAMS = {
    "dicke": ("j", "m"),
    "ghz": ("N",),
    "w": ("N",),
    "bell": (),
    "separable_coherent": ("j", "theta", "phi"),
    "uniaxial": ("r1", "theta1", "phi1"),
    "biaxial": ("r2", "theta"),
    "triaxial": ("r1", "r2", "theta"),
}


def family_ranges(name: str) -> str:
    hints = {
        "dicke": "j half-integer >= 1/2, |m| <= j",
        "ghz": "N integer >= 2",
        "w": "N integer >= 2",
        "bell": "no parameters",
        "separable_coherent": "j half-integer >= 1/2, theta/phi radians",
        "uniaxial": "0 < r1 <= sqrt(2/3) for PSD; theta1, phi1 radians",
        "biaxial": "0 < r2 <= sqrt(3); theta radians (PSD range depends on r2)",
        "triaxial": "r1 real, 0 < r2; theta radians (PSD checked post-construction)",
    }
    return hints[name]


def build_family(name: str, params: dict) -> PureState | FamilyState:
    if name not in FAMILY_PARAMS:
        raise FamilyParameterError(
            f"unknown family {name!r}; expected one of {sorted(FAMILY_PARAMS)}"
        )
    expected = FAMILY_PARAMS[name]
    missing = [p for p in expected if p not in params]
    if missing:
        raise FamilyParameterError(
            f"family {name!r} missing parameters {missing}; ranges: "
            f"{family_ranges(name)}"
        )
    unknown = [p for p in params if p not in expected]
    if unknown:
        raise FamilyParameterError(
            f"family {name!r} got unknown parameters {unknown}"
        )
    if name == "dicke":
        return make_dicke(params["j"], params["m"])
    if name == "ghz":
        return make_ghz(int(params["N"]))
    if name == "w":
        return make_w(int(params["N"]))
    if name == "bell":
        return make_bell()
    if name == "separable_coherent":
        return make_coherent(params["j"], float(params["theta"]), float(params["phi"]))
    if name == "uniaxial":
        return make_uniaxial(
            float(params["r1"]), float(params["theta1"]), float(params["phi1"])
        )
    if name == "biaxial":
        return make_biaxial(float(params["r2"]), float(params["theta"]))
    return make_triaxial(
        float(params["r1"]), float(params["r2"]), float(params["theta"])
    )


def family_density(name: str, params: dict) -> tuple[DensityMatrix, bool, str]:
    """Construct a family member as a density matrix with PSD flag and note."""
    built = build_family(name, params)
    if isinstance(built, PureState):
        return pure_to_density(built), True, ""
    return built.rho, built.psd_ok, built.note
