"""Three-dimensional vertex weights and their stochasticization.

The R weights act on triples of arrow counts along the three axes and
satisfy the tetrahedron equation.  Freezing one corner of that equation
yields factored weights; multiplying R by a six-weight cross-ratio of
them gives weights S whose outgoing sum is 1.  S depends on the frozen
attachment (k4, k5, k6) only through v = q^{2 k5 + 2}, which plays the
role of a dynamical parameter.  As q tends to 1 the S weights become
the v-independent-in-propagation T weights, a stochastic solution of
the plain tetrahedron equation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .special_fn import POLE_TOL, PoleError, pochhammer

__all__ = [
    "TetraConfig",
    "TetraFreeze",
    "TetraDynParams",
    "weight_R",
    "weight_R_frozen",
    "correction_tetra",
    "correction_tetra_ratio",
    "weight_S_tetra",
    "weight_T_tetra",
    "dyn_params_tetra",
]

# Below this distance from q = 1 the direct prefactors degenerate and
# the transformed series takes over.
_NEAR_ONE = 1e-3


@dataclass(frozen=True)
class TetraConfig:
    """Arrow counts (n1, n2, n3) entering and (n1p, n2p, n3p) leaving a
    vertex along the three axes.

    Weights vanish off the two-sided conservation set n1 + n2 =
    n1p + n2p, n2 + n3 = n2p + n3p; the total arrow count need not be
    conserved.
    """

    n1: int
    n2: int
    n3: int
    n1p: int
    n2p: int
    n3p: int

    def __post_init__(self) -> None:
        for name in ("n1", "n2", "n3", "n1p", "n2p", "n3p"):
            value = getattr(self, name)
            if not isinstance(value, int) or value < 0:
                raise ValueError(f"{name} must be a nonnegative integer, got {value!r}")

    def supported(self) -> bool:
        return (
            self.n1 + self.n2 == self.n1p + self.n2p
            and self.n2 + self.n3 == self.n2p + self.n3p
        )


class _Derived(NamedTuple):
    a4p: int
    a5p: int
    a6p: int
    a4pp: int
    a5pp: int
    a6pp: int
    b4p: int
    b5p: int
    b6p: int


@dataclass(frozen=True)
class TetraFreeze:
    """Auxiliary incoming counts (k4, k5, k6) of the frozen attachment."""

    k4: int
    k5: int
    k6: int

    def __post_init__(self) -> None:
        for name in ("k4", "k5", "k6"):
            value = getattr(self, name)
            if not isinstance(value, int) or value < 0:
                raise ValueError(f"{name} must be a nonnegative integer, got {value!r}")

    def derived(self, cfg: TetraConfig) -> _Derived:
        """Counts forced on the attachment edges by conservation."""
        return _Derived(
            a4p=self.k4 + cfg.n2,
            a5p=self.k5 + cfg.n3,
            a6p=self.k6 - cfg.n3,
            a4pp=self.k4 + cfg.n1 + cfg.n2,
            a5pp=self.k5 - cfg.n1 + cfg.n3,
            a6pp=self.k6 - cfg.n2 - cfg.n3,
            b4p=self.k4 + cfg.n1p,
            b5p=self.k5 - cfg.n1p,
            b6p=self.k6 - cfg.n2p,
        )


class TetraDynParams(NamedTuple):
    """Per-vertex dynamical values on the two sides of the tetrahedron
    equation, in the order the four weights appear."""

    lhs: tuple[complex, complex, complex, complex]
    rhs: tuple[complex, complex, complex, complex]


def _one_minus_qpow(m: int, q: complex) -> complex:
    """1 - q^m, stable against cancellation for real q near 1."""
    if m == 0:
        return 0j
    qc = complex(q)
    if qc.imag == 0 and qc.real > 0:
        return complex(-math.expm1(m * math.log(qc.real)))
    return 1.0 - qc**m


def _qfac(k: int, q: complex) -> complex:
    """(q^2; q^2)_k, guarded against roots of unity."""
    value = pochhammer("q", q**2, k, q**2)
    if k > 0 and abs(value) < POLE_TOL:
        raise PoleError(f"(q^2; q^2)_{k} vanishes: q is at a root of unity")
    return value


def _poch2_parts(a: int, k: int, q: complex) -> tuple[int, complex]:
    """(q^{2a}; q^2)_k split into exact-zero factor count and the rest.

    A factor with exponent 0 is the literal number 1 - q^0 = 0 at every
    q; matched zero counts between two symbols cancel at ratio one.
    """
    zeros = 0
    value = 1.0 + 0j
    for j in range(k):
        m = a + j
        if m == 0:
            zeros += 1
        else:
            value *= _one_minus_qpow(2 * m, q)
    return zeros, value


def _phi_sum_absorbed(n1: int, n2: int, n3: int, n1p: int, q: complex) -> complex:
    """The terminating series of the R weight with its prefactor absorbed.

    Equals (q^{-2 n1p}; q^2)_{n2} / (q^2; q^2)_{n2} times the basic
    hypergeometric factor; term k of the plain series hits an exact
    zero against an exact pole when n1p < n2, so only the absorbed form
    evaluates cleanly.
    """
    total = 0j
    for k in range(n2 + 1):
        num = pochhammer("q", q ** (-2 * n1p), n2 - k, q**2) * pochhammer(
            "q", q ** (2 * n1 + 2), k, q**2
        )
        total += (
            num / (_qfac(n2 - k, q) * _qfac(k, q)) * q ** (-2 * k * (n1p + n3 + 1))
        )
    return total


def weight_R(cfg: TetraConfig, q: complex) -> complex:
    """Plain vertex weight R of the tetrahedron solution."""
    if not cfg.supported():
        return 0j
    n1, n2, n3, n1p, n3p = cfg.n1, cfg.n2, cfg.n3, cfg.n1p, cfg.n3p
    pref = q ** (n2 * (n2 + 1) - (n2 - n1p) * (n2 - n3p))
    return pref * _phi_sum_absorbed(n1, n2, n3, n1p, q)


def weight_R_frozen(n1: int, n2: int, n3: int, q: complex) -> complex:
    """Factored weight R with no outgoing arrows on the first axis."""
    return (
        q ** (-n2 * (n1 + n3 + 1))
        * _qfac(n1 + n2, q)
        / (_qfac(n1, q) * _qfac(n2, q))
    )


def correction_tetra(cfg: TetraConfig, q: complex, v: complex) -> complex:
    """Stochastic correction C(v) = S(v) / R in closed form.

    Depends on the frozen attachment only through v = q^{2 k5 + 2}.
    """
    if not cfg.supported():
        raise ValueError("correction_tetra needs a supported configuration")
    n1, n2, n3 = cfg.n1, cfg.n2, cfg.n3
    n1p, n2p, n3p = cfg.n1p, cfg.n2p, cfg.n3p
    value = (
        _qfac(n1, q)
        * _qfac(n2, q)
        * _qfac(n3, q)
        / (_qfac(n1p, q) * _qfac(n2p, q) * _qfac(n3p, q))
    )
    den = pochhammer("q", v, n3, q**2)
    if abs(den) < POLE_TOL:
        raise PoleError(f"(v; q^2)_{n3} vanishes")
    value *= pochhammer("q", v * q ** (-2 * n1p), n3p, q**2) / den
    return value * v**n2p * q ** (
        n2 * (n1 + n3 + 1) + n1p * n3p - 2 * n2p * (n1p + 1)
    )


def correction_tetra_ratio(cfg: TetraConfig, q: complex, freeze: TetraFreeze) -> complex:
    """Stochastic correction as a six-weight ratio of frozen attachments."""
    if not cfg.supported():
        raise ValueError("correction_tetra_ratio needs a supported configuration")
    d = freeze.derived(cfg)
    if min(d) < 0:
        raise ValueError(f"attachment too small to freeze: derived counts {d}")
    k4, k5, k6 = freeze.k4, freeze.k5, freeze.k6
    num = (
        weight_R_frozen(cfg.n1p, k4, k5, q)
        * weight_R_frozen(cfg.n2p, d.b4p, k6, q)
        * weight_R_frozen(cfg.n3p, d.b5p, d.b6p, q)
    )
    den = (
        weight_R_frozen(cfg.n3, k5, k6, q)
        * weight_R_frozen(cfg.n2, k4, d.a6p, q)
        * weight_R_frozen(cfg.n1, d.a4p, d.a5p, q)
    )
    if abs(den) < POLE_TOL:
        raise PoleError("frozen attachment weight vanishes in a denominator")
    return num / den


def _s_tetra_near_one(cfg: TetraConfig, q: complex, v: complex) -> complex:
    """S(v) through the transformed series, stable for q near 1.

    The direct prefactor carries (1-q)^{n2p - n2} and degenerates; the
    transformed form pairs every such power.  When n1p < n2 both the
    numerator and the denominator hold a literal 1 - q^0 = 0 factor;
    shifting n1p off the integers turns the pair into
    (1 - q^{-2e}) / (1 - q^{2e}), so each matched pair cancels at -1.
    """
    n1, n2, n3 = cfg.n1, cfg.n2, cfg.n3
    n1p, n2p, n3p = cfg.n1p, cfg.n2p, cfg.n3p
    num_zeros = den_zeros = 0
    value = q ** (n2 * (n1 + n3 + n1p + n3p + 2) - 2 * n2p * (n1p + 1))
    for a, k in ((1, n1), (-n1p, n2), (1, n3), (-n2 - n3, n2)):
        z, part = _poch2_parts(a, k, q)
        num_zeros += z
        value *= part
    for a, k in ((1, n1p), (1, n2p), (1, n3p), (n1p - n2 + 1, n2p)):
        z, part = _poch2_parts(a, k, q)
        den_zeros += z
        # legitimately tiny near q = 1: powers of 1 - q^2 cancel across
        # the ratio, so only an exact zero is a pole
        if part == 0:
            raise PoleError("transformed prefactor vanishes in a denominator")
        value /= part
    if num_zeros > den_zeros:
        return 0j
    if num_zeros < den_zeros:
        raise PoleError("unmatched exact zero in a transformed denominator")
    value *= (-1) ** num_zeros
    den = pochhammer("q", v, n3, q**2)
    if abs(den) < POLE_TOL:
        raise PoleError(f"(v; q^2)_{n3} vanishes")
    value *= v**n2p * pochhammer("q", v * q ** (-2 * n1p), n3p, q**2) / den
    total = 0j
    term = 1.0 + 0j
    limit = min(n2p, n3)
    for k in range(limit + 1):
        total += term
        if k == limit:
            break
        num = _one_minus_qpow(2 * (k - n2p), q) * _one_minus_qpow(2 * (k - n3), q)
        dnm = _one_minus_qpow(2 * (k - n2 - n3), q) * _one_minus_qpow(2 * (k + 1), q)
        if dnm == 0:
            raise PoleError("transformed series denominator vanishes")
        term *= num / dnm * q ** (2 * n1 + 2)
    return value * total


def weight_S_tetra(cfg: TetraConfig, q: complex, v: complex) -> complex:
    """Stochasticized vertex weight S(v) of the tetrahedron solution."""
    if not cfg.supported():
        return 0j
    if abs(1 - complex(q)) < _NEAR_ONE:
        return _s_tetra_near_one(cfg, q, v)
    n1, n2, n3 = cfg.n1, cfg.n2, cfg.n3
    n1p, n2p, n3p = cfg.n1p, cfg.n2p, cfg.n3p
    value = q ** (n2 * (n1 + n3 + n1p + n3p + 2) - 2 * n2p * (n1p + 1))
    value *= (
        _qfac(n1, q) * _qfac(n2, q) * _qfac(n3, q)
        / (_qfac(n1p, q) * _qfac(n2p, q) * _qfac(n3p, q))
    )
    den = pochhammer("q", v, n3, q**2)
    if abs(den) < POLE_TOL:
        raise PoleError(f"(v; q^2)_{n3} vanishes")
    value *= v**n2p * pochhammer("q", v * q ** (-2 * n1p), n3p, q**2) / den
    return value * _phi_sum_absorbed(n1, n2, n3, n1p, q)


def weight_T_tetra(cfg: TetraConfig, v: complex) -> complex:
    """q -> 1 limit weight: each axis-2 arrow keeps its line with
    probability v and otherwise splits onto the two other axes."""
    if not cfg.supported() or cfg.n2p > cfg.n2:
        return 0j
    return (
        v**cfg.n2p
        * (1 - v) ** (cfg.n2 - cfg.n2p)
        * math.comb(cfg.n2, cfg.n2p)
    )


def dyn_params_tetra(
    v: complex, w: complex, q: complex, mediating: tuple[int, int, int]
) -> TetraDynParams:
    """Dynamical values carried by the eight vertices of the equation.

    mediating = (n2pp, n3p, n5): the outgoing axis-2 count of the left
    side, the intermediate axis-3 count of the right side, and the
    incoming axis-5 count.
    """
    n2pp, n3p, n5 = mediating
    return TetraDynParams(
        lhs=(q ** (2 * n5) * w, w, q ** (-2 * n2pp) * v, v),
        rhs=(v, q ** (-2 * n3p) * v, q ** (2 * n3p) * w, w),
    )
