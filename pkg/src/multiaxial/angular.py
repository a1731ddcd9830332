"""Angular momentum special functions.

Clebsch-Gordan coefficients (Condon-Shortley convention, exact rational
arithmetic inside the square roots), Wigner rotation matrices, irreducible
tensor operator matrices and sequential tensor coupling of unit vectors.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .halfint import HalfInteger, basis_index, dimension, projections

#: Largest spin handled before factorial arguments stop being desk-scale.
MAX_SPIN = HalfInteger.of(20)


class SpinTooLargeError(ValueError):
    pass


def _check_spin(j: HalfInteger) -> None:
    if j.twice < 0:
        raise ValueError(f"negative spin {j}")
    if j > MAX_SPIN:
        raise SpinTooLargeError(f"spin {j} exceeds supported maximum {MAX_SPIN}")


def _fact(n: int) -> int:
    if n < 0:
        raise ValueError("negative factorial argument")
    return math.factorial(n)


@lru_cache(maxsize=100_000)
def _cg_twice(tj1: int, tj2: int, tj3: int, tm1: int, tm2: int, tm3: int) -> float:
    """Exact Racah sum for <j1 m1 j2 m2 | j3 m3>, arguments doubled."""
    if tm1 + tm2 != tm3:
        return 0.0
    if abs(tm1) > tj1 or abs(tm2) > tj2 or abs(tm3) > tj3:
        return 0.0
    if tj3 < abs(tj1 - tj2) or tj3 > tj1 + tj2:
        return 0.0
    # j1 + j2 + j3 must be integral, as must every j +/- m.
    if (tj1 + tj2 + tj3) % 2 != 0:
        return 0.0
    if (tj1 + tm1) % 2 != 0 or (tj2 + tm2) % 2 != 0 or (tj3 + tm3) % 2 != 0:
        return 0.0

    a = (tj1 + tj2 - tj3) // 2
    b = (tj1 - tj2 + tj3) // 2
    c = (-tj1 + tj2 + tj3) // 2
    pref = Fraction(
        (tj3 + 1) * _fact(a) * _fact(b) * _fact(c),
        _fact((tj1 + tj2 + tj3) // 2 + 1),
    )
    pref *= (
        _fact((tj1 + tm1) // 2)
        * _fact((tj1 - tm1) // 2)
        * _fact((tj2 + tm2) // 2)
        * _fact((tj2 - tm2) // 2)
        * _fact((tj3 + tm3) // 2)
        * _fact((tj3 - tm3) // 2)
    )

    s_min = max(0, (tj2 - tj3 - tm1) // 2, (tj1 - tj3 + tm2) // 2)
    s_max = min(a, (tj1 - tm1) // 2, (tj2 + tm2) // 2)
    total = Fraction(0)
    for s in range(s_min, s_max + 1):
        denom = (
            _fact(s)
            * _fact(a - s)
            * _fact((tj1 - tm1) // 2 - s)
            * _fact((tj2 + tm2) // 2 - s)
            * _fact((tj3 - tj2 + tm1) // 2 + s)
            * _fact((tj3 - tj1 - tm2) // 2 + s)
        )
        total += Fraction(-1 if s % 2 else 1, denom)
    if total == 0:
        return 0.0
    return float(total) * math.sqrt(float(pref))


def clebsch_gordan(j1, j2, j3, m1, m2, m3) -> float:
    """Clebsch-Gordan coefficient C(j1 j2 j3; m1 m2 m3) = <j1 m1; j2 m2 | j3 m3>.

    Selection-rule violations return exactly 0.  The paper's tensor matrix
    elements use the ordering C(j k j; m q m').
    """
    j1, j2, j3 = HalfInteger.of(j1), HalfInteger.of(j2), HalfInteger.of(j3)
    m1, m2, m3 = HalfInteger.of(m1), HalfInteger.of(m2), HalfInteger.of(m3)
    for j in (j1, j2, j3):
        _check_spin(j)
    return _cg_twice(j1.twice, j2.twice, j3.twice, m1.twice, m2.twice, m3.twice)


def cg_stretched(c, b) -> float:
    """Closed form C(c b c; c 0 c) = (2c)! sqrt((2c+1) / ((2c-b)! (2c+b+1)!))."""
    c = HalfInteger.of(c)
    b = HalfInteger.of(b)
    _check_spin(c)
    if not b.is_integer or b.twice < 0:
        raise ValueError(f"rank must be a non-negative integer, got {b}")
    if b.twice > 2 * c.twice:
        return 0.0
    two_c = c.twice
    rank = int(b)
    inner = Fraction(
        _fact(two_c) ** 2 * (two_c + 1),
        _fact(two_c - rank) * _fact(two_c + rank + 1),
    )
    return math.sqrt(float(inner))


def wigner_small_d(j, mprime, m, beta: float) -> float:
    """Reduced rotation matrix element d^j_{m' m}(beta)."""
    j = HalfInteger.of(j)
    mp = HalfInteger.of(mprime)
    m = HalfInteger.of(m)
    _check_spin(j)
    if abs(mp.twice) > j.twice or abs(m.twice) > j.twice:
        raise ValueError("|m| and |m'| must not exceed j")

    jm = (j.twice + m.twice) // 2
    jmm = (j.twice - m.twice) // 2
    jmp = (j.twice + mp.twice) // 2
    jmmp = (j.twice - mp.twice) // 2
    norm = math.sqrt(float(_fact(jm) * _fact(jmm) * _fact(jmp) * _fact(jmmp)))

    cos_h = math.cos(beta / 2.0)
    sin_h = math.sin(beta / 2.0)
    dmm = (mp.twice - m.twice) // 2  # m' - m, always integral here

    total = 0.0
    s_min = max(0, -dmm)
    s_max = min(jmmp, jm)
    for s in range(s_min, s_max + 1):
        denom = _fact(s) * _fact(jmmp - s) * _fact(jm - s) * _fact(dmm + s)
        sign = -1.0 if (s + dmm) % 2 else 1.0
        total += sign * cos_h ** (jm + jmmp - 2 * s) * sin_h ** (dmm + 2 * s) / denom
    return norm * total


def wigner_d(j, mprime, m, alpha: float, beta: float, gamma: float) -> complex:
    """Wigner rotation matrix element D^j_{m' m}(alpha, beta, gamma)."""
    mp = HalfInteger.of(mprime)
    mm = HalfInteger.of(m)
    phase = cmath.exp(-1j * (float(mp) * alpha + float(mm) * gamma))
    return phase * wigner_small_d(j, mp, mm, beta)


def wigner_d_matrix(j, alpha: float, beta: float, gamma: float) -> np.ndarray:
    """Full (2j+1)x(2j+1) rotation matrix, rows and columns m' and m descending."""
    j = HalfInteger.of(j)
    dim = dimension(j)
    out = np.empty((dim, dim), dtype=complex)
    ms = projections(j)
    for r, mp in enumerate(ms):
        for c, m in enumerate(ms):
            out[r, c] = wigner_d(j, mp, m, alpha, beta, gamma)
    return out


def tau_matrix(j, k, q) -> np.ndarray:
    """Irreducible tensor operator tau^k_q, <j m'|tau^k_q|j m> = [k] C(j k j; m q m')."""
    j = HalfInteger.of(j)
    k = HalfInteger.of(k)
    q = HalfInteger.of(q)
    _check_spin(j)
    if not k.is_integer or k.twice < 0 or k.twice > 2 * j.twice:
        raise ValueError(f"rank k={k} outside 0..2j for j={j}")
    if abs(q.twice) > k.twice:
        raise ValueError(f"|q|={q} exceeds k={k}")
    dim = dimension(j)
    out = np.zeros((dim, dim), dtype=complex)
    norm = math.sqrt(k.twice + 1.0)
    for m in projections(j):
        mp = m + q
        if abs(mp.twice) > j.twice:
            continue
        out[basis_index(j, mp), basis_index(j, m)] = norm * clebsch_gordan(
            j, k, j, m, q, mp
        )
    return out


def couple_pair(t1: np.ndarray, k1: int, t2: np.ndarray, k2: int, k: int) -> np.ndarray:
    """Couple two spherical tensors to rank k.

    Components are indexed q + rank (ascending q).  Implements
    (t1 x t2)^k_q = sum_q1 C(k1 k2 k; q1, q - q1, q) t1_{q1} t2_{q - q1}.
    """
    k1, k2, k = int(k1), int(k2), int(k)
    if len(t1) != 2 * k1 + 1 or len(t2) != 2 * k2 + 1:
        raise ValueError("component array lengths must be 2k+1")
    if k < abs(k1 - k2) or k > k1 + k2:
        raise ValueError(f"triangle violation: cannot couple {k1} and {k2} to {k}")
    out = np.zeros(2 * k + 1, dtype=complex)
    for q in range(-k, k + 1):
        acc = 0.0 + 0.0j
        for q1 in range(-k1, k1 + 1):
            q2 = q - q1
            if abs(q2) > k2:
                continue
            cg = clebsch_gordan(k1, k2, k, q1, q2, q)
            if cg != 0.0:
                acc += cg * t1[q1 + k1] * t2[q2 + k2]
        out[q + k] = acc
    return out


def q_vector(theta: float, phi: float) -> np.ndarray:
    """Rank-1 components of the unit vector (theta, phi): sqrt(4 pi / 3) Y^1_q.

    Returned as [Q_{-1}, Q_0, Q_{+1}].
    """
    st = math.sin(theta)
    return np.array(
        [
            st / math.sqrt(2.0) * cmath.exp(-1j * phi),
            math.cos(theta),
            -st / math.sqrt(2.0) * cmath.exp(1j * phi),
        ],
        dtype=complex,
    )


def couple_axis_chain(directions: list[tuple[float, float]]) -> np.ndarray:
    """Sequentially couple unit vectors ((Q1 x Q2)^2 x Q3)^3 ... up to rank n."""
    if not directions:
        raise ValueError("need at least one direction")
    acc = q_vector(*directions[0])
    rank = 1
    for theta, phi in directions[1:]:
        acc = couple_pair(acc, rank, q_vector(theta, phi), 1, rank + 1)
        rank += 1
    return acc
