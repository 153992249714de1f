"""Elliptic fused vertex weights and their stochasticization.

W_{J;Lambda} is the fused elliptic weight: a product of elliptic
Pochhammer symbols times a terminating, balanced, very-well-poised
12v11 series.  Multiplying by a cross-ratio C of frozen weights (both
horizontal arrows absorbed, curve rapidity 0) gives weights S whose
outgoing sum is 1.  S depends on the frozen curve's spin T and
occupancy r only through the dynamical parameter v = eta (J + T - 2r).

Throughout, f is the odd Jacobi theta function of special_fn.theta1 and
[a]_k denotes the elliptic Pochhammer symbol built from it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .sixvertex import ArrowConfig
from .special_fn import (
    POLE_TOL,
    EllipticContext,
    PoleError,
    pochhammer,
    theta1,
    theta_scale,
)

__all__ = [
    "EllipticVertexParams",
    "EllipticNeighbors",
    "VWPParameterSet",
    "vwp_parameters",
    "weight_W_fused",
    "weight_W_frozen",
    "correction_elliptic",
    "correction_elliptic_ratio",
    "weight_S_elliptic",
    "weight_S_special",
    "propagate_elliptic",
]


@dataclass(frozen=True)
class EllipticVertexParams:
    """Spins, rapidities and dynamical data of one fused elliptic vertex.

    The second dynamical parameter may be given directly as ``v`` or
    through the frozen-curve data ``(T, r)`` with v = eta (J + T - 2r);
    when both are present they must agree.
    """

    J: int
    Lambda: complex
    lam: complex
    x: complex
    y: complex
    v: complex | None = None
    T: complex | None = None
    r: int | None = None

    def __post_init__(self) -> None:
        if not isinstance(self.J, int) or self.J <= 0:
            raise ValueError(f"J must be a positive integer, got {self.J!r}")
        if self.r is not None and (not isinstance(self.r, int) or self.r < 0):
            raise ValueError(f"r must be a nonnegative integer, got {self.r!r}")

    def implied_v(self, ctx: EllipticContext) -> complex:
        """The value eta (J + T - 2r) carried by the frozen curve."""
        if self.T is None or self.r is None:
            raise ValueError("implied_v needs both T and r")
        return ctx.eta * (self.J + self.T - 2 * self.r)

    def resolve_v(self, ctx: EllipticContext) -> complex:
        """Return v, checking consistency if both v and (T, r) are given."""
        if self.T is not None and self.r is not None:
            implied = self.implied_v(ctx)
            if self.v is not None and abs(self.v - implied) > 1e-12:
                raise ValueError(
                    f"inconsistent dynamical parameter: v={self.v} but "
                    f"eta (J + T - 2r) = {implied}"
                )
            return self.v if self.v is not None else implied
        if self.v is None:
            raise ValueError("no dynamical parameter: give v or both (T, r)")
        return self.v


@dataclass(frozen=True)
class VWPParameterSet:
    """Parameters a1; a6..a12 of the 12v11 series inside a fused weight.

    a2..a5 are the implicit very-well-poised entries.  a6 = 2 eta j1 and
    a7 = 2 eta j2 provide the integer termination witnesses.
    """

    a1: complex
    a6: complex
    a7: complex
    a8: complex
    a9: complex
    a10: complex
    a11: complex
    a12: complex

    def tail(self) -> tuple[complex, ...]:
        return (self.a6, self.a7, self.a8, self.a9, self.a10, self.a11, self.a12)


class EllipticNeighbors(NamedTuple):
    lam_east: complex
    lam_south: complex
    v_west: complex
    v_north: complex


def _poch_ratio(num, den, ctx: EllipticContext) -> complex:
    """Product of elliptic Pochhammers [a]_k over a denominator product.

    Denominator magnitudes are compared against theta_scale**k, the
    natural size of a k-fold theta product, so pole detection stays
    meaningful at large Im(tau).
    """
    scale = theta_scale(ctx)
    value = 1 + 0j
    for a, k in num:
        value *= pochhammer("elliptic", a, k, ctx)
    for a, k in den:
        d = pochhammer("elliptic", a, k, ctx)
        if abs(d) < POLE_TOL * scale**k:
            raise PoleError(f"elliptic Pochhammer [{a}]_{k} vanishes in a denominator")
        value /= d
    return value


def vwp_parameters(
    p: EllipticVertexParams, cfg: ArrowConfig, ctx: EllipticContext
) -> VWPParameterSet:
    """Series parameters of the 12v11 factor of W_{J;Lambda} at cfg."""
    J, Lam, lam = p.J, p.Lambda, p.lam
    i1, j1, i2, j2 = cfg.i1, cfg.j1, cfg.i2, cfg.j2
    eta = ctx.eta
    h = 2 * eta
    return VWPParameterSet(
        a1=lam + h * (2 * j1 + j2 - J),
        a6=h * j1,
        a7=h * j2,
        a8=lam + h * j1,
        a9=lam + h * (i1 + 2 * j1 - J - 1 - Lam),
        a10=eta * (Lam - J) + p.x - p.y + h * (j2 - i1 - 1),
        a11=eta * (Lam - J) - p.x + p.y + h * (j2 - i1),
        a12=lam + h * (i2 + j1 + j2 - J),
    )


def _lattice_int(nu) -> int | None:
    """The integer n when nu is exactly n, else None."""
    z = complex(nu)
    if z.imag == 0.0 and z.real == round(z.real):
        return int(z.real)
    return None


def _poch_lattice(nu, k: int, ctx: EllipticContext) -> complex:
    """``[2 eta nu]_k`` with exact bookkeeping of lattice theta zeros.

    For integer nu some factors hit f(0) head on; the rounded theta
    value there is pure noise, so zeros are taken exactly and a zero in
    a denominator position raises instead of dividing by that noise.
    """
    n = _lattice_int(nu)
    h = 2.0 * complex(ctx.eta)
    if n is None:
        return pochhammer("elliptic", h * nu, k, ctx)
    if k >= 0:
        if 0 <= n <= k - 1:
            return 0j
        return pochhammer("elliptic", h * n, k, ctx)
    if k <= n <= -1:
        raise PoleError(f"[2 eta {n}]_({k}) carries a theta zero in its denominator")
    return pochhammer("elliptic", h * n, k, ctx)


def _poch_lattice_parts(nu, k: int, ctx: EllipticContext) -> tuple[int, complex]:
    """``[2 eta nu]_k`` split into lattice zero order and remaining factors.

    For integer nu one factor can sit exactly on a theta zero; it
    vanishes linearly in the distance of nu from the lattice, at a rate
    independent of which factor vanished, so matched zero and pole
    orders between two symbols cancel at ratio one.  The order is 0 or 1
    for k >= 0 and 0 or -1 for k < 0; the value excludes the vanishing
    factor.
    """
    n = _lattice_int(nu)
    if n is None:
        return 0, pochhammer("elliptic", 2.0 * complex(ctx.eta) * nu, k, ctx)
    h = 2.0 * complex(ctx.eta)
    tol = POLE_TOL * theta_scale(ctx)
    if k >= 0:
        if 0 <= n <= k - 1:
            value = 1.0 + 0j
            for l in range(k):
                if l != n:
                    value *= theta1(h * (n - l), ctx)
            return 1, value
        return 0, pochhammer("elliptic", h * n, k, ctx)
    if k <= n <= -1:
        value = 1.0 + 0j
        for l in range(1, -k + 1):
            if l != -n:
                d = theta1(h * (n + l), ctx)
                if abs(d) < tol:
                    raise PoleError(f"f(2 eta {n + l}) vanishes in a denominator")
                value /= d
        return -1, value
    return 0, pochhammer("elliptic", h * n, k, ctx)


def _capacity_parts(Lam, top: int, bottom: int, ctx: EllipticContext) -> tuple[int, complex]:
    """``[2 eta Lam]_top / [2 eta Lam]_bottom`` merged by concatenation.

    The merged form keeps integer Lam regular unless the occupancy really
    crosses the capacity between bottom and top.  Returns the lattice
    zero order (+1 downward crossing, -1 upward) and the crossing-free
    factor product.
    """
    if bottom >= top:
        order, val = _poch_lattice_parts(Lam - top, bottom - top, ctx)
        if abs(val) < POLE_TOL * theta_scale(ctx) ** (bottom - top - order):
            raise PoleError("capacity Pochhammer vanishes in a denominator")
        return -order, 1.0 / val
    return _poch_lattice_parts(Lam - bottom, top - bottom, ctx)


def _capacity_ratio(Lam, top: int, bottom: int, ctx: EllipticContext) -> complex:
    """Capacity ratio with crossings taken at face value: zero or pole."""
    order, value = _capacity_parts(Lam, top, bottom, ctx)
    if order > 0:
        return 0j
    if order < 0:
        raise PoleError("occupancy crossed the capacity: genuine pole")
    return value


def _series_folded(
    p: EllipticVertexParams,
    cfg: ArrowConfig,
    ctx: EllipticContext,
    pn: int,
    pm: int,
    pole_order: int = 0,
) -> complex:
    """Terminating 12v11 sum with its lattice denominators cancelled.

    Three series denominators sit on the 2 eta lattice,

        [a1 - a8 - 2 eta]_k  = [2 eta (j1 + j2 - J - 1)]_k,
        [a1 - a9 - 2 eta]_k  = [2 eta (Lam - i1 + j2)]_k,
        [a1 - a12 - 2 eta]_k = [2 eta (j2 - i1 - 1)]_k,

    and can vanish exactly while the weight itself stays finite: each
    pairs with a prefactor numerator carrying the same theta zeros.
    With [2 eta n]_m / [2 eta (m - n - 1)]_k = (-1)^k [2 eta n]_{m-k}
    and plain concatenation for the a9 pair, the prefactors
    [2 eta pn]_pm, [2 eta i1]_{j2} and [2 eta (Lam - i1 + j2)]_{j1} fold
    into the sum term by term, leaving only generic denominators.  The
    two sign factors cancel.  pn, pm is (J - j2, j1) for the fused
    weight normalization and (J - j1, j2) for the stochastic one.

    pole_order counts capacity poles held by the caller's prefactor.
    Whenever that pole exists, every term's a9 fold carries a matching
    lattice zero vanishing as the same f(2 eta (Lam - n)), so the pair
    drops at ratio one and the crossing evaluates finite.
    """
    Lam = p.Lambda
    i1, j1, j2 = cfg.i1, cfg.j1, cfg.j2
    h = 2.0 * complex(ctx.eta)
    ps = vwp_parameters(p, cfg, ctx)
    a1 = ps.a1
    scale = theta_scale(ctx)
    f_a1 = theta1(a1, ctx)
    if abs(f_a1) < POLE_TOL * scale:
        raise PoleError("f(a1) vanishes in the 12v11 series")
    gen_num = (a1, ps.a6, ps.a7, ps.a8, ps.a9, ps.a10, ps.a11, ps.a12)
    gen_den = (-h, a1 - ps.a6 - h, a1 - ps.a7 - h, a1 - ps.a10 - h, a1 - ps.a11 - h)
    total = 0j
    term = 1.0 + 0j
    for k in range(min(j1, j2) + 1):
        if k:
            for a in gen_num:
                term *= theta1(a - h * (k - 1), ctx)
            for a in gen_den:
                d = theta1(a - h * (k - 1), ctx)
                if abs(d) < POLE_TOL * scale:
                    raise PoleError("12v11 series denominator vanishes")
                term /= d
        z9, v9 = _poch_lattice_parts(Lam - i1 + j2 - k, j1 - k, ctx)
        if z9 > pole_order:
            continue
        if z9 < pole_order:
            raise PoleError("capacity pole without a matching series zero")
        folded = _poch_lattice(pn, pm - k, ctx) * _poch_lattice(i1, j2 - k, ctx) * v9
        total += term * theta1(a1 - 2.0 * h * k, ctx) / f_a1 * folded
    return total


def weight_W_fused(
    p: EllipticVertexParams, cfg: ArrowConfig, ctx: EllipticContext
) -> complex:
    """Fused elliptic weight W_{J;Lambda}(i1, j1; i2, j2 | lam; x, y).

    At integer Lambda an occupancy crossing the capacity downward gives
    an exact zero; crossing upward leaves a capacity pole matched by a
    lattice zero in every series term, and the finite cancelled value is
    returned.
    """
    J, Lam, lam, x, y = p.J, p.Lambda, p.lam, p.x, p.y
    i1, j1, i2, j2 = cfg.i1, cfg.j1, cfg.i2, cfg.j2
    if i1 + j1 != i2 + j2 or not 0 <= j1 <= J or not 0 <= j2 <= J:
        return 0j
    eta = ctx.eta
    h = 2 * eta
    num = [
        (h * i2, i2),
        (eta * (Lam + J) - x + y - h * (i1 + j1), J - j1 - j2),
        (lam + x - y + h * (i1 + 2 * j1 - 1) - eta * (Lam + J), j1),
        (lam + h * i2, J - j1 - j2),
        (lam + h * (i1 + 2 * j1 - J) + eta * (J - Lam) - x + y, j2),
    ]
    den = [
        (h * i1, i1),
        (h * j1, j1),
        (eta * (Lam + J) - x + y, J),
        (lam + h * j1, J - j1),
        (lam + h * (2 * j1 + j2 - J - 1), j1),
    ]
    cap_order, cap_val = _capacity_parts(Lam, i1, i2, ctx)
    if cap_order > 0:
        return 0j
    pref = _poch_ratio(num, den, ctx) * cap_val
    return pref * _series_folded(p, cfg, ctx, J - j2, j1, -cap_order)


def weight_W_frozen(
    J: int,
    Lambda: complex,
    i: int,
    j: int,
    lam: complex,
    x: complex,
    y: complex,
    ctx: EllipticContext,
) -> complex:
    """Frozen fused weight W_{J;Lambda}(i, j; i+j, 0 | lam; x, y).

    Fully factored: the 12v11 series degenerates when the outgoing
    horizontal count vanishes.
    """
    if j < 0 or j > J:
        return 0j
    eta = ctx.eta
    h = 2 * eta
    num = [
        (h * J, j),
        (h * (i + j), j),
        (lam + h * (i + j), J - j),
        (x - y + lam + h * (i + 2 * j - 1) - eta * (Lambda + J), j),
        (eta * (Lambda + J) - h * (i + j) - x + y, J - j),
    ]
    den = [
        (h * j, j),
        (eta * (Lambda + J) - x + y, J),
        (lam + h * j, J - j),
        (lam + h * (2 * j - J - 1), j),
    ]
    return _poch_ratio(num, den, ctx)


def _v_ratio_pairs(p: EllipticVertexParams, cfg: ArrowConfig, v: complex, eta):
    """The four v-dependent Pochhammer ratios shared by C and S."""
    J, Lam, lam, x, y = p.J, p.Lambda, p.lam, p.x, p.y
    i1, j1, i2, j2 = cfg.i1, cfg.j1, cfg.i2, cfg.j2
    h = 2 * eta
    num = [
        (lam + x - v + h * (2 * i2 + 2 * j2 - Lam - 1), j2),
        (v - x - h * j2, i2),
        (lam + y - v + h * (2 * i2 + j2 - 1) + eta * (J - Lam), i2),
        (v - y - eta * (Lam + J), j2),
    ]
    den = [
        (lam + x - v + h * (i1 + 2 * j1 - 1), j1),
        (v - x - h * J, i1),
        (lam + y - v + h * (2 * i1 + 2 * j1 - 1) - eta * (Lam + J), i1),
        (v - y + eta * (Lam - J - 2 * i1), j1),
    ]
    return num, den


def correction_elliptic(
    p: EllipticVertexParams, cfg: ArrowConfig, ctx: EllipticContext
) -> complex:
    """Stochastic correction C_{J;Lambda} in closed form.

    Depends on the frozen curve only through v = eta (J + T - 2r).
    """
    if not cfg.conserving():
        raise ValueError("correction_elliptic needs a conserving configuration")
    J, Lam, lam = p.J, p.Lambda, p.lam
    i1, j1, i2, j2 = cfg.i1, cfg.j1, cfg.i2, cfg.j2
    v = p.resolve_v(ctx)
    eta = ctx.eta
    h = 2 * eta
    num = [
        (h * J, j2),
        (h * i1, i1),
        (h * j1, j1),
        (lam + h * j1, J - j1),
        (lam + h * (2 * j1 - J - 1), j1),
        (lam + h * (i1 + 2 * j1 - J), j2),
        (lam + h * (i2 + j1 - Lam - 1), J - j2),
    ]
    den = [
        (h * J, j1),
        (h * i2, i2),
        (h * j2, j2),
        (lam + h * (2 * i2 + j2 - Lam), j2),
        (lam + h * (2 * i2 - Lam - 1), J - j2),
        (lam + h * i2, J - j1),
        (lam + h * (i2 + j1 - Lam - 1), j1),
    ]
    vnum, vden = _v_ratio_pairs(p, cfg, v, eta)
    cap = _capacity_ratio(Lam, i2, i1, ctx)
    return _poch_ratio(num + vnum, den + vden, ctx) * cap


def correction_elliptic_ratio(
    p: EllipticVertexParams, cfg: ArrowConfig, ctx: EllipticContext
) -> complex:
    """Stochastic correction as a cross-ratio of frozen weights.

    Both incoming arrows of the denominator weights and both outgoing
    arrows of the numerator weights freeze onto a curve of spin T,
    occupancy r and rapidity 0.
    """
    if p.T is None or p.r is None:
        raise ValueError("correction_elliptic_ratio needs both T and r")
    p.resolve_v(ctx)
    J, Lam, lam = p.J, p.Lambda, p.lam
    T, r = p.T, p.r
    i1, j1, i2, j2 = cfg.i1, cfg.j1, cfg.i2, cfg.j2
    h = 2 * ctx.eta
    num = weight_W_frozen(
        Lam, T, r + j2, i2, lam, p.y, 0.0, ctx
    ) * weight_W_frozen(J, T, r, j2, lam + h * (2 * i2 - Lam), p.x, 0.0, ctx)
    den = weight_W_frozen(
        Lam, T, r, i1, lam + h * (2 * j1 - J), p.y, 0.0, ctx
    ) * weight_W_frozen(J, T, r + i1, j1, lam, p.x, 0.0, ctx)
    # Each frozen weight is a ratio of equally many thetas, so the
    # denominator product carries no theta_scale power.
    if abs(den) < POLE_TOL:
        raise PoleError("frozen elliptic denominator vanishes")
    return num / den


def weight_S_elliptic(
    p: EllipticVertexParams, cfg: ArrowConfig, ctx: EllipticContext
) -> complex:
    """Stochasticized fused weight S_{J;Lambda} in closed form.

    Equals weight_W_fused times correction_elliptic on the conservation
    set, but stays regular at integer Lambda with occupancies above
    capacity where the two factors develop a removable 0/0.

    Exactly at x = y + eta (J - Lambda) with integer Lambda, some
    configurations pin an x - y Pochhammer onto theta zeros that only
    cancel against the summed series; the closed form raises PoleError
    there and weight_S_special("q-hahn") gives the resolved value.
    """
    J, Lam, lam, x, y = p.J, p.Lambda, p.lam, p.x, p.y
    i1, j1, i2, j2 = cfg.i1, cfg.j1, cfg.i2, cfg.j2
    if i1 + j1 != i2 + j2 or not 0 <= j1 <= J or not 0 <= j2 <= J:
        return 0j
    v = p.resolve_v(ctx)
    eta = ctx.eta
    h = 2 * eta
    num = [
        (eta * (Lam + J) - x + y - h * (i1 + j1), J - j1 - j2),
        (lam + h * (i2 - Lam - 1), J - j1 - j2),
        (lam + h * (2 * j1 - J - 1), j1),
        (lam + x - y + h * (i1 + 2 * j1 - 1) - eta * (Lam + J), j1),
        (lam - x + y + h * (i1 + 2 * j1 - J) + eta * (J - Lam), j2),
    ]
    den = [
        (h * j2, j2),
        (eta * (Lam + J) - x + y, J),
        (lam + h * (2 * i2 + j2 - Lam), j2),
        (lam + h * (2 * i2 - Lam - 1), J - j2),
        (lam + h * (2 * j1 + j2 - J - 1), j1),
    ]
    vnum, vden = _v_ratio_pairs(p, cfg, v, eta)
    pref = _poch_ratio(num + vnum, den + vden, ctx)
    return pref * _series_folded(p, cfg, ctx, J - j1, j2)


def weight_S_special(
    kind: str, p: EllipticVertexParams, cfg: ArrowConfig, ctx: EllipticContext
) -> complex:
    """Factored special cases of the stochasticized elliptic weight.

    kind "one-one": J = Lambda = 1 table.  kind "one-lambda": J = 1,
    arbitrary Lambda.  kind "q-hahn": x = y + eta (J - Lambda), where the
    12v11 series collapses and an indicator i1 >= j2 appears.
    """
    if kind == "one-one":
        return _s_one_one(p, cfg, ctx)
    if kind == "one-lambda":
        return _s_one_lambda(p, cfg, ctx)
    if kind == "q-hahn":
        return _s_q_hahn(p, cfg, ctx)
    raise ValueError(f"unknown specialization kind {kind!r}")


def _s_one_one(
    p: EllipticVertexParams, cfg: ArrowConfig, ctx: EllipticContext
) -> complex:
    if p.J != 1 or abs(p.Lambda - 1) > 1e-12:
        raise ValueError("one-one specialization needs J = Lambda = 1")
    key = (cfg.i1, cfg.j1, cfg.i2, cfg.j2)
    if key in ((0, 0, 0, 0), (1, 1, 1, 1)):
        return 1.0 + 0j
    if key not in ((1, 0, 1, 0), (0, 1, 1, 0), (1, 0, 0, 1), (0, 1, 0, 1)):
        return 0j
    lam, x, y = p.lam, p.x, p.y
    v = p.resolve_v(ctx)
    h = 2 * ctx.eta

    def f(z):
        return theta1(z, ctx)

    base = f(y - x + h) * f(lam)
    if abs(base) < POLE_TOL * theta_scale(ctx) ** 2:
        raise PoleError("f(y - x + 2 eta) f(lam) vanishes")
    if key == (1, 0, 1, 0):
        first = f(y - x) * f(lam - h) / base
        return first * f(lam + y - v + h) * f(x - v) / (f(x - v + h) * f(lam + y - v))
    if key == (0, 1, 1, 0):
        first = f(lam - y + x) * f(h) / base
        return first * f(lam + y - v + h) * f(x - v) / (f(lam + x - v + h) * f(y - v))
    if key == (1, 0, 0, 1):
        first = f(lam + y - x) * f(h) / base
        return first * f(y - v + h) * f(lam + x - v) / (f(x - v + h) * f(lam + y - v))
    first = f(y - x) * f(lam + h) / base
    return first * f(lam + x - v) * f(y - v + h) / (f(lam + x - v + h) * f(y - v))


def _s_one_lambda(
    p: EllipticVertexParams, cfg: ArrowConfig, ctx: EllipticContext
) -> complex:
    if p.J != 1:
        raise ValueError("one-lambda specialization needs J = 1")
    Lam, lam, x, y = p.Lambda, p.lam, p.x, p.y
    v = p.resolve_v(ctx)
    k, j1, i2, j2 = cfg.i1, cfg.j1, cfg.i2, cfg.j2
    if k + j1 != i2 + j2 or j1 not in (0, 1) or j2 not in (0, 1):
        return 0j
    eta = ctx.eta
    h = 2 * eta

    def f(z):
        return theta1(z, ctx)

    base = f(y - x + eta * (Lam + 1))
    if abs(base) < POLE_TOL * theta_scale(ctx):
        raise PoleError("f(y - x + eta (Lambda + 1)) vanishes")
    if (j1, j2) == (0, 0):
        first = (
            f(y - x + eta * (Lam - 2 * k + 1))
            * f(lam + h * (k - Lam - 1))
            / (base * f(lam + h * (2 * k - Lam - 1)))
        )
        second = (
            f(x - v)
            * f(lam + y + eta * (4 * k - Lam - 1) - v)
            / (f(x + 2 * k * eta - v) * f(lam + y + eta * (2 * k - Lam - 1) - v))
        )
    elif (j1, j2) == (1, 0):
        first = (
            f(lam - y + x + eta * (2 * k - Lam + 1))
            * f(h * (Lam - k))
            / (base * f(lam + h * (2 * k - Lam + 1)))
        )
        second = (
            f(v - x)
            * f(lam + y - v + eta * (4 * k - Lam + 3))
            / (f(lam + x - v + h * (k + 1)) * f(v - y + eta * (Lam - 2 * k - 1)))
        )
    elif (j1, j2) == (0, 1):
        first = (
            f(lam + y - x + eta * (2 * k - Lam - 1))
            * f(h * k)
            / (base * f(lam + h * (2 * k - Lam - 1)))
        )
        second = (
            f(v - y - eta * (Lam + 1))
            * f(lam - v + x + h * (2 * k - Lam - 1))
            / (f(v - x - 2 * k * eta) * f(lam + y + eta * (2 * k - Lam - 1) - v))
        )
    else:
        first = (
            f(y - x + eta * (2 * k - Lam + 1))
            * f(lam + h * (k + 1))
            / (base * f(lam + h * (2 * k - Lam + 1)))
        )
        second = (
            f(x + lam + h * (2 * k - Lam + 1) - v)
            * f(v - y - eta * (Lam + 1))
            / (f(lam + x - v + h * (k + 1)) * f(v - y + eta * (Lam - 2 * k - 1)))
        )
    return first * second


def _s_q_hahn(
    p: EllipticVertexParams, cfg: ArrowConfig, ctx: EllipticContext
) -> complex:
    J, Lam, lam, x, y = p.J, p.Lambda, p.lam, p.x, p.y
    eta = ctx.eta
    if abs(x - y - eta * (J - Lam)) > 1e-12:
        raise ValueError("q-hahn specialization needs x = y + eta (J - Lambda)")
    i1, j1, i2, j2 = cfg.i1, cfg.j1, cfg.i2, cfg.j2
    if i1 + j1 != i2 + j2 or not 0 <= j1 <= J or not 0 <= j2 <= J or i1 < j2:
        return 0j
    v = p.resolve_v(ctx)
    h = 2 * eta
    num = [
        (h * J, j2),
        (h * i1, j2),
        (lam + h * (i1 + 2 * j1 - J), j2),
        (lam + h * (i2 + j1 - Lam - 1), J - j2),
    ]
    den = [
        (h * j2, j2),
        (lam + h * (2 * i2 + j2 - Lam), j2),
        (lam + h * (2 * i2 - Lam - 1), J - j2),
    ]
    cap_num = _poch_lattice(Lam - i1, J - j2, ctx)
    cap_den = _poch_lattice(Lam, J, ctx)
    if abs(cap_den) < POLE_TOL * theta_scale(ctx) ** J:
        raise PoleError("[2 eta Lambda]_J vanishes: integer Lambda below J")
    vnum, vden = _v_ratio_pairs(p, cfg, v, eta)
    return _poch_ratio(num + vnum, den + vden, ctx) * cap_num / cap_den


def propagate_elliptic(
    lam: complex,
    v: complex,
    cfg: ArrowConfig,
    J: int,
    Lambda: complex,
    eta: complex,
) -> EllipticNeighbors:
    """Dynamical values seen by the four adjacent vertices.

    lam shifts along rows and columns: the east neighbor (a+1, b) sees
    lam + 2 eta (2 i2 - Lambda) and the south neighbor (a, b-1) sees
    lam + 2 eta (2 j1 - J).  v decreases by 2 eta per passing arrow:
    west (a-1, b) sees v - 2 eta i1, north (a, b+1) sees v - 2 eta j2.
    """
    if not cfg.conserving():
        raise ValueError("propagation needs a conserving configuration")
    h = 2 * eta
    return EllipticNeighbors(
        lam_east=lam + h * (2 * cfg.i2 - Lambda),
        lam_south=lam + h * (2 * cfg.j1 - J),
        v_west=v - h * cfg.i1,
        v_north=v - h * cfg.j2,
    )
