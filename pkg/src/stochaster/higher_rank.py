"""Colored higher rank vertex weights and their stochasticization.

U_{L;M} is the rank-n colored vertex weight: a prefactor times a sum of
paired Phi splitting factors over redistributions of the colored
arrows.  W is its transpose in the horizontal arrows, which factors
when all outgoing horizontal arrows are colorless.  Multiplying W by a
cross-ratio C of such frozen weights gives weights S whose outgoing sum
is 1.  S depends on the frozen curve's spin T, occupancy R and rapidity
z only through the dynamical parameter v = q^{-R_0} / z.

Colors live in [0, n]; color 0 marks the empty slots of an edge, so a
composition (length n + 1, indexed by color) records a full edge state.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .special_fn import POLE_TOL, PoleError, pochhammer

__all__ = [
    "Composition",
    "ColoredConfig",
    "RankParams",
    "RankNeighbors",
    "phi",
    "weight_U",
    "weight_W_rank",
    "weight_W_rank_frozen",
    "correction_rank",
    "correction_rank_ratio",
    "weight_S_rank",
    "weight_S_rank_L1",
    "propagate_rank",
]


@dataclass(frozen=True)
class Composition:
    """Arrow counts by color; parts[0] is the colorless slot.

    Sums and differences are formed componentwise and freely: a
    difference may leave negative parts, and valid() reports whether the
    result is a genuine composition.
    """

    parts: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "parts", tuple(int(p) for p in self.parts))

    @classmethod
    def unit(cls, length: int, color: int, count: int = 1) -> "Composition":
        """The composition count * e_color."""
        if not 0 <= color < length:
            raise ValueError(f"color {color} outside [0, {length - 1}]")
        return cls(tuple(count if i == color else 0 for i in range(length)))

    def __len__(self) -> int:
        return len(self.parts)

    def __getitem__(self, i: int) -> int:
        return self.parts[i]

    def __add__(self, other: "Composition") -> "Composition":
        return Composition(
            tuple(a + b for a, b in zip(self.parts, other.parts, strict=True))
        )

    def __sub__(self, other: "Composition") -> "Composition":
        return Composition(
            tuple(a - b for a, b in zip(self.parts, other.parts, strict=True))
        )

    def size(self) -> int:
        return sum(self.parts)

    def bar(self) -> tuple[int, ...]:
        """The colored parts (everything except the color-0 slot)."""
        return self.parts[1:]

    def range_sum(self, i: int, j: int) -> int:
        """Sum of parts i through j inclusive; empty when j < i."""
        return sum(self.parts[i : j + 1])

    def valid(self) -> bool:
        return all(p >= 0 for p in self.parts)


@dataclass(frozen=True)
class ColoredConfig:
    """Colored arrow configuration (A, B; C, D) of one vertex.

    A and B are the incoming vertical and horizontal edge states, C and
    D the outgoing ones.
    """

    A: Composition
    B: Composition
    C: Composition
    D: Composition

    def supported(self, L: int, M: int) -> bool:
        """Color conservation with edge capacities M vertical, L horizontal."""
        return (
            all(e.valid() for e in (self.A, self.B, self.C, self.D))
            and (self.A + self.B).parts == (self.C + self.D).parts
            and self.A.size() == M == self.C.size()
            and self.B.size() == L == self.D.size()
        )


@dataclass(frozen=True)
class RankParams:
    """Spins, rapidities and dynamical data of one colored vertex.

    The dynamical parameter may be given directly as ``v`` or through
    the frozen-curve data ``(T, R, z)`` with v = q^{-R_0} / z; when both
    are present they must agree.
    """

    n: int
    L: int
    M: int
    q: complex
    x: complex
    y: complex
    z: complex | None = None
    v: complex | None = None
    T: int | None = None
    R: Composition | None = None

    def __post_init__(self) -> None:
        for name in ("n", "L", "M"):
            value = getattr(self, name)
            if not isinstance(value, int) or value <= 0:
                raise ValueError(f"{name} must be a positive integer, got {value!r}")
        if self.T is not None and (not isinstance(self.T, int) or self.T <= 0):
            raise ValueError(f"T must be a positive integer, got {self.T!r}")
        if self.R is not None:
            if len(self.R) != self.n + 1 or not self.R.valid():
                raise ValueError("R must be a composition of length n + 1")
            if self.T is not None and self.R.size() != self.T:
                raise ValueError("R must have size T")

    def implied_v(self) -> complex:
        """The value q^{-R_0} / z carried by the frozen curve."""
        if self.R is None or self.z is None:
            raise ValueError("implied_v needs both R and z")
        return self.q ** (-self.R[0]) / self.z

    def resolve_v(self) -> complex:
        """Return v, checking consistency if both v and (R, z) are given."""
        if self.R is not None and self.z is not None:
            implied = self.implied_v()
            if self.v is not None and abs(self.v - implied) > 1e-12:
                raise ValueError(
                    f"inconsistent dynamical parameter: v={self.v} but "
                    f"q^(-R_0) / z = {implied}"
                )
            return self.v if self.v is not None else implied
        if self.v is None:
            raise ValueError("no dynamical parameter: give v or both (R, z)")
        return self.v


class RankNeighbors(NamedTuple):
    v_west: complex
    v_north: complex


def _qp(a: complex, k: int, q: complex) -> complex:
    return pochhammer("q", a, k, q)


def _div(num: complex, den: complex, what: str) -> complex:
    if abs(den) < POLE_TOL:
        raise PoleError(f"{what} vanishes in a denominator")
    return num / den


def phi(
    lam: Sequence[int], mu: Sequence[int], x: complex, y: complex, q: complex
) -> complex:
    """Splitting factor Phi(lam, mu; x, y) over color multiplicities.

    lam and mu are n-vectors of colored counts (bars of compositions).
    Vanishes unless 0 <= lam <= mu componentwise.
    """
    lam = tuple(int(v) for v in lam)
    mu = tuple(int(v) for v in mu)
    if len(lam) != len(mu):
        raise ValueError("lam and mu must have equal length")
    if any(l < 0 or l > m for l, m in zip(lam, mu)):
        return 0j
    tl, tm = sum(lam), sum(mu)
    value = _div(
        _qp(x, tl, q) * _qp(y / x, tm - tl, q), _qp(y, tm, q), f"(y; q)_{tm}"
    )
    value *= (y / x) ** tl
    n = len(lam)
    cross = sum(
        (mu[i] - lam[i]) * lam[j] for i in range(n) for j in range(i + 1, n)
    )
    value *= q**cross
    for l, m in zip(lam, mu):
        value *= _qp(q, m, q) / (_qp(q, l, q) * _qp(q, m - l, q))
    return value


def weight_U(
    L: int,
    M: int,
    A: Composition,
    B: Composition,
    C: Composition,
    D: Composition,
    z: complex,
    q: complex,
) -> complex:
    """Colored vertex weight U_{L;M}(A, B; C, D | z).

    The sum redistributes the colored outgoing arrows over the two
    Phi factors, one splitting slot 0 <= P_i <= min(B_i, C_i) at a time.
    """
    if not ColoredConfig(A, B, C, D).supported(L, M):
        return 0j
    Ab, Bb, Cb, Db = A.bar(), B.bar(), C.bar(), D.bar()
    pref = z ** (sum(Db) - sum(Bb)) * q ** (L * sum(Ab) - M * sum(Db))
    total = 0j
    for P in itertools.product(*(range(min(b, c) + 1) for b, c in zip(Bb, Cb))):
        total += phi(
            tuple(c - p for c, p in zip(Cb, P)),
            tuple(c + d - p for c, d, p in zip(Cb, Db, P)),
            q ** (L - M) * z,
            q ** (-M) * z,
            q,
        ) * phi(P, Bb, q ** (-L) / z, q ** (-L), q)
    return pref * total


def weight_W_rank(
    L: int,
    M: int,
    A: Composition,
    B: Composition,
    C: Composition,
    D: Composition,
    z: complex,
    q: complex,
) -> complex:
    """Transposed colored weight W_{L;M}(A, B, C, D | z) = U_{L;M}(C, D; A, B | z)."""
    return weight_U(L, M, C, D, A, B, z, q)


def weight_W_rank_frozen(
    L: int,
    M: int,
    I: Composition,
    J: Composition,
    K: Composition,
    z: complex,
    q: complex,
) -> complex:
    """Frozen weight W_{L;M}(I, J, K, L e_0 | z): colorless horizontal output.

    The transposed sum collapses to one term and factors completely.
    """
    n = len(I) - 1
    if (I + J).parts != (K + Composition.unit(n + 1, 0, L)).parts:
        raise ValueError("frozen weight needs I + J = K + L e_0")
    if not (I.valid() and J.valid() and K.valid()):
        return 0j
    if I.size() != M or J.size() != L:
        return 0j
    J0, K0 = J[0], K[0]
    value = z ** (L - J0) * q ** ((M - L) * (J0 - L))
    value *= _div(
        _qp(q ** (-K0) * z, J0, q) * _qp(q ** (-L), L - J0, q),
        _qp(q ** (-M) * z, L, q),
        "(q^-M z; q)_L",
    )
    cross = sum(I[t] * J[s] for s in range(1, n + 1) for t in range(s + 1, n + 1))
    value *= q**cross
    for s in range(1, n + 1):
        value *= _qp(q, K[s], q) / (_qp(q, I[s], q) * _qp(q, J[s], q))
    return value


def correction_rank(
    L: int,
    M: int,
    cfg: ColoredConfig,
    x: complex,
    y: complex,
    v: complex,
    q: complex,
) -> complex:
    """Stochastic correction C_{L;M} in closed form.

    Depends on the frozen curve only through v = q^{-R_0} / z.
    """
    if not cfg.supported(L, M):
        raise ValueError("correction_rank needs a supported configuration")
    A, B, C, D = cfg.A, cfg.B, cfg.C, cfg.D
    n = len(A) - 1
    A0, B0, C0, D0 = A[0], B[0], C[0], D[0]
    cross = sum(
        D[j] * C[i] - A[j] * B[i]
        for i in range(1, n + 1)
        for j in range(i + 1, n + 1)
    )
    expo = (M - L) * (D0 - B0) + A0 * B0 - C0 * D0 + cross
    value = q**expo * (y / x) ** (D0 - B0)
    value *= _div(
        _qp(q ** (L - D0) * x * v, D0, q),
        _qp(q ** (L + M - A0 - B0) * x * v, B0, q),
        "(q^{L+M-A0-B0} x v; q)_B0",
    )
    value *= _div(
        _qp(q ** (L + M - C0 - D0) * y * v, C0, q),
        _qp(q ** (M - A0) * y * v, A0, q),
        "(q^{M-A0} y v; q)_A0",
    )
    for i in range(n + 1):
        value *= (
            _qp(q, A[i], q)
            * _qp(q, B[i], q)
            / (_qp(q, C[i], q) * _qp(q, D[i], q))
        )
    return value


def correction_rank_ratio(
    L: int,
    M: int,
    cfg: ColoredConfig,
    x: complex,
    y: complex,
    q: complex,
    T: int,
    R: Composition,
    z: complex,
) -> complex:
    """Stochastic correction as a cross-ratio of frozen weights.

    The curve of spin T and occupancy R absorbs the outgoing arrows of
    the numerator weights and re-emits the incoming ones in the
    denominator, at spectral arguments x/z and y/z.
    """
    A, B, C, D = cfg.A, cfg.B, cfg.C, cfg.D
    length = len(R)

    def e0(k: int) -> Composition:
        return Composition.unit(length, 0, k)

    after_d = R + D - e0(L)
    after_a = R + A - e0(M)
    for inter in (after_d, after_a, R + A + B - e0(L + M), R + C + D - e0(L + M)):
        if not inter.valid():
            raise ValueError("curve occupancy too small to absorb the arrows")
    num = weight_W_rank_frozen(L, T, R, D, after_d, x / z, q) * weight_W_rank_frozen(
        M, T, after_d, C, R + C + D - e0(L + M), y / z, q
    )
    den = weight_W_rank_frozen(
        L, T, after_a, B, R + A + B - e0(L + M), x / z, q
    ) * weight_W_rank_frozen(M, T, R, A, after_a, y / z, q)
    return _div(num, den, "frozen rank weight product")


def weight_S_rank(
    L: int,
    M: int,
    cfg: ColoredConfig,
    x: complex,
    y: complex,
    v: complex,
    q: complex,
) -> complex:
    """Stochasticized colored weight S_{L;M}(A, B, C, D | x, y; v)."""
    if not cfg.supported(L, M):
        return 0j
    A, B, C, D = cfg.A, cfg.B, cfg.C, cfg.D
    n = len(A) - 1
    A0, B0, C0, D0 = A[0], B[0], C[0], D[0]
    cross = sum(
        D[j] * C[i] - A[j] * B[i]
        for i in range(1, n + 1)
        for j in range(i + 1, n + 1)
    )
    expo = M * B0 - L * C0 + (M - L) * (D0 - B0) + A0 * B0 - C0 * D0 + cross
    value = q**expo
    value *= _div(
        _qp(q ** (L - D0) * v * x, D0, q),
        _qp(q ** (L + M - A0 - B0) * v * x, B0, q),
        "(q^{L+M-A0-B0} v x; q)_B0",
    )
    value *= _div(
        _qp(q ** (L + M - C0 - D0) * v * y, C0, q),
        _qp(q ** (M - A0) * v * y, A0, q),
        "(q^{M-A0} v y; q)_A0",
    )
    for i in range(n + 1):
        value *= (
            _qp(q, A[i], q)
            * _qp(q, B[i], q)
            / (_qp(q, C[i], q) * _qp(q, D[i], q))
        )
    Ab, Bb, Db = A.bar(), B.bar(), D.bar()
    total = 0j
    for P in itertools.product(*(range(min(a, d) + 1) for a, d in zip(Ab, Db))):
        total += phi(
            tuple(a - p for a, p in zip(Ab, P)),
            tuple(a + b - p for a, b, p in zip(Ab, Bb, P)),
            q ** (L - M) * x / y,
            q ** (-M) * x / y,
            q,
        ) * phi(P, Db, q ** (-L) * y / x, q ** (-L), q)
    return value * total


def weight_S_rank_L1(
    M: int,
    I: Composition,
    b: int,
    K: Composition,
    d: int,
    x: complex,
    y: complex,
    v: complex,
    q: complex,
    *,
    qM: complex | None = None,
) -> complex:
    """Horizontal spin 1 weight S_{1;M}(I, e_b, K, e_d | x, y; v), factored.

    qM overrides q^M as a free complex parameter; the closed forms are
    rational in q^M, so they continue analytically with the size-M
    constraint on I dropped.  The colorless slot then becomes formal:
    only the colored parts of I and K gate the support, and q^{I_0}
    stands for qM q^{-I_[1,n]} (the row sums force this reading, since
    stochasticity pins q^{I_0 + I_[1,n]} to qM).
    """
    n = len(I) - 1
    if not 0 <= b <= n or not 0 <= d <= n:
        raise ValueError(f"colors must lie in [0, {n}]")
    if qM is None:
        if I.size() != M or not I.valid():
            return 0j
        qM = q**M
        expected = I + Composition.unit(n + 1, b) - Composition.unit(n + 1, d)
        if K.parts != expected.parts or not K.valid():
            return 0j
    else:
        if any(p < 0 for p in I.bar()):
            return 0j
        kbar = list(I.bar())
        if b >= 1:
            kbar[b - 1] += 1
        if d >= 1:
            kbar[d - 1] -= 1
        if K.bar() != tuple(kbar) or any(p < 0 for p in kbar):
            return 0j
    colored = I.range_sum(1, n)
    qI0 = qM * q ** (-colored)
    qrem = q**colored
    den = _div(1.0, (x - qM * y), "x - q^M y")
    if b == 0 and d == 0:
        last = _div(1.0, 1 - qrem * v * x, "1 - q^{M-I0} v x")
        return qrem * (x - qI0 * y) * (1 - v * x) * den * last
    if b == 0:
        last = _div(1.0, 1 - qrem * v * x, "1 - q^{M-I0} v x")
        return (
            q ** I.range_sum(1, d - 1)
            * (1 - q ** I[d])
            * x
            * (1 - qM * v * y)
            * den
            * last
        )
    last = _div(1.0, 1 - qrem * v * y, "1 - q^{M-I0} v y")
    if d == 0:
        return qrem * (1 - qI0) * y * (1 - v * x) * den * last
    if b == d:
        core = (x - q ** I[d] * y) * (1 - qM * v * y)
    elif b < d:
        core = (1 - q ** I[d]) * y * (1 - qM * v * y)
    else:
        core = (1 - q ** I[d]) * x * (1 - qM * v * y)
    return q ** I.range_sum(1, d - 1) * core * den * last


def propagate_rank(
    v: complex, cfg: ColoredConfig, L: int, M: int, q: complex
) -> RankNeighbors:
    """Dynamical values seen by the west and north neighbor vertices.

    Passing an edge of spin K with X_0 colorless arrows costs the curve
    K - X_0 colorless arrows, so v picks up q^{M - A_0} going west and
    q^{L - D_0} going north.
    """
    if not cfg.supported(L, M):
        raise ValueError("propagation needs a supported configuration")
    return RankNeighbors(q ** (M - cfg.A[0]) * v, q ** (L - cfg.D[0]) * v)
