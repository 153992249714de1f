"""Spin-1/2 and higher-spin six-vertex weights and their stochasticization.

The R-matrix weights ``w`` act on pairs of 0/1 arrow counts.  The weights
``chi_s`` carry a spin parameter ``s`` and an unbounded vertical arrow
count.  Multiplying ``w`` by a cross-ratio of frozen ``chi_s`` weights
(both horizontal arrows absorbed into the vertical line) produces weights
``S`` whose outgoing sum is 1; they depend on the frozen data only through
the dynamical parameter ``v = s q^k / z``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .special_fn import POLE_TOL, PoleError

__all__ = [
    "ArrowConfig",
    "SixVertexParams",
    "weight_w",
    "weight_chi",
    "weight_s6v",
    "stochasticize_ratio_6v",
    "propagate_6v",
]

# Supported off-diagonal spin-1/2 configurations (i1, j1, i2, j2).
_CROSS_SUPPORT = frozenset({(1, 0, 1, 0), (1, 0, 0, 1), (0, 1, 1, 0), (0, 1, 0, 1)})


@dataclass(frozen=True)
class ArrowConfig:
    """Arrow counts (i1, j1) entering and (i2, j2) leaving a vertex.

    i1/i2 count vertical arrows, j1/j2 horizontal ones.  Weights vanish
    off the conservation set i1 + j1 = i2 + j2.
    """

    i1: int
    j1: int
    i2: int
    j2: int

    def __post_init__(self) -> None:
        for name in ("i1", "j1", "i2", "j2"):
            value = getattr(self, name)
            if not isinstance(value, int) or value < 0:
                raise ValueError(f"{name} must be a nonnegative integer, got {value!r}")

    def conserving(self) -> bool:
        return self.i1 + self.j1 == self.i2 + self.j2


@dataclass(frozen=True)
class SixVertexParams:
    """Rapidities and couplings of one six-vertex instance.

    ``v`` is the dynamical parameter.  When the frozen-line data
    ``(s, k, z)`` is also present, the two descriptions must agree:
    v = s q^k / z.
    """

    x: complex
    y: complex
    q: complex
    s: complex | None = None
    v: complex | None = None
    k: int | None = None
    z: complex | None = None

    def __post_init__(self) -> None:
        if self.k is not None and (not isinstance(self.k, int) or self.k < 0):
            raise ValueError(f"k must be a nonnegative integer, got {self.k!r}")
        if None not in (self.s, self.v, self.k, self.z):
            implied = self.s * self.q**self.k / self.z
            if abs(self.v - implied) > 1e-12:
                raise ValueError(
                    f"inconsistent dynamical parameter: v={self.v} but "
                    f"s q^k / z = {implied}"
                )


def _guard(value: complex, what: str) -> complex:
    if abs(value) < POLE_TOL:
        raise PoleError(f"{what} vanishes")
    return value


def weight_w(cfg: ArrowConfig, x: complex, y: complex, q: complex) -> complex:
    """Plain R-matrix weight w(i1, j1; i2, j2 | x, y)."""
    key = (cfg.i1, cfg.j1, cfg.i2, cfg.j2)
    if key in ((0, 0, 0, 0), (1, 1, 1, 1)):
        return 1.0 + 0j
    if key not in _CROSS_SUPPORT:
        return 0j
    den = _guard(x - q * y, "x - q y")
    if key == (1, 0, 1, 0):
        return q * (x - y) / den
    if key == (1, 0, 0, 1):
        return (1 - q) * x / den
    if key == (0, 1, 1, 0):
        return (1 - q) * y / den
    return (x - y) / den


def weight_chi(
    cfg: ArrowConfig, x: complex, y: complex, q: complex, s: complex
) -> complex:
    """Higher-spin weight chi_s(k, j1; k', j2 | x, y).

    The incoming vertical count k = cfg.i1 is unbounded; horizontal
    counts stay in {0, 1}.
    """
    k = cfg.i1
    if cfg.j1 == 0 and cfg.j2 == 0 and cfg.i2 == k:
        kind = "keep0"
    elif cfg.j1 == 0 and cfg.j2 == 1 and cfg.i2 == k - 1:
        kind = "emit"
    elif cfg.j1 == 1 and cfg.j2 == 0 and cfg.i2 == k + 1:
        kind = "absorb"
    elif cfg.j1 == 1 and cfg.j2 == 1 and cfg.i2 == k:
        kind = "keep1"
    else:
        return 0j
    den = _guard(y - s * x, "y - s x")
    if kind == "keep0":
        return (y - s * q**k * x) / den
    if kind == "emit":
        return (1 - s * s * q ** (k - 1)) * x / den
    if kind == "absorb":
        return (1 - q ** (k + 1)) * y / den
    return (x - s * q**k * y) / den


def weight_s6v(
    cfg: ArrowConfig, x: complex, y: complex, q: complex, v: complex
) -> complex:
    """Stochastic spin-1/2 weight S(i1, j1; i2, j2 | x, y; v).

    At v = 0 this reduces to weight_w.
    """
    key = (cfg.i1, cfg.j1, cfg.i2, cfg.j2)
    if any(a not in (0, 1) for a in key):
        raise ValueError("weight_s6v expects arrow counts in {0, 1}")
    if key in ((0, 0, 0, 0), (1, 1, 1, 1)):
        return 1.0 + 0j
    if key not in _CROSS_SUPPORT:
        return 0j
    den = _guard(x - q * y, "x - q y")
    if key == (1, 0, 1, 0):
        return q * (x - y) * (1 - v * x) / (den * _guard(1 - q * v * x, "1 - q v x"))
    if key == (1, 0, 0, 1):
        return (1 - q) * x * (1 - q * v * y) / (den * _guard(1 - q * v * x, "1 - q v x"))
    if key == (0, 1, 1, 0):
        return (1 - q) * y * (1 - v * x) / (den * _guard(1 - v * y, "1 - v y"))
    return (x - y) * (1 - q * v * y) / (den * _guard(1 - v * y, "1 - v y"))


def stochasticize_ratio_6v(
    cfg: ArrowConfig,
    x: complex,
    y: complex,
    q: complex,
    s: complex,
    k: int,
    z: complex,
) -> complex:
    """Stochastic weight built as w times a ratio of frozen chi weights.

    The auxiliary line carries spin s, occupancy k and rapidity z; both
    horizontal arrows of each chi factor are absorbed (outgoing j = 0).
    Equals weight_s6v with v = s q^k / z.
    """
    w = weight_w(cfg, x, y, q)
    if w == 0:
        return 0j
    num = weight_chi(
        ArrowConfig(k, cfg.j2, k + cfg.j2, 0), x, z, q, s
    ) * weight_chi(
        ArrowConfig(k + cfg.j2, cfg.i2, k + cfg.i2 + cfg.j2, 0), y, z, q, s
    )
    den = weight_chi(
        ArrowConfig(k + cfg.i1, cfg.j1, k + cfg.i1 + cfg.j1, 0), x, z, q, s
    ) * weight_chi(ArrowConfig(k, cfg.i1, k + cfg.i1, 0), y, z, q, s)
    if abs(den) < POLE_TOL:
        raise PoleError("frozen chi denominator vanishes")
    return w * num / den


def propagate_6v(state: SixVertexParams, cfg: ArrowConfig) -> tuple[complex, complex]:
    """Dynamical parameters seen by the west (a-1, b) and north (a, b+1) neighbors.

    Returns (q^{i1} v, q^{j2} v).
    """
    if state.v is None:
        raise ValueError("state has no dynamical parameter v")
    if not cfg.conserving():
        raise ValueError("propagation needs a conserving configuration")
    return (state.q**cfg.i1 * state.v, state.q**cfg.j2 * state.v)
