"""Numerical residual checks for the library's defining identities.

Every check evaluates both sides of one exact statement (a row sum that
should equal 1, a Yang-Baxter or tetrahedron equation, a hypergeometric
summation, or a degeneration limit) on supplied parameters and returns a
:class:`ResidualReport`.  :func:`sweep` runs a plan of such checks on
seeded random draws, rejecting parameters that land on poles, and never
aborts: errors inside a check become failed reports.

Nothing here is symbolic; the reports are double-precision evidence.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .special_fn import (
    TRUNCATION_TOL,
    ConvergenceError,
    EllipticContext,
    HypergeometricSpec,
    PoleError,
    hypergeometric,
    is_balanced,
    pochhammer,
    theta1,
    vwp_elliptic,
)
from .sixvertex import ArrowConfig, weight_chi, weight_s6v, weight_w
from .elliptic import (
    EllipticVertexParams,
    correction_elliptic,
    correction_elliptic_ratio,
    weight_S_elliptic,
    weight_S_special,
    weight_W_frozen,
    weight_W_fused,
)
from .higher_rank import (
    ColoredConfig,
    Composition,
    correction_rank,
    correction_rank_ratio,
    weight_S_rank,
    weight_S_rank_L1,
    weight_U,
    weight_W_rank,
)
from .tetrahedron import (
    TetraConfig,
    TetraFreeze,
    correction_tetra,
    correction_tetra_ratio,
    dyn_params_tetra,
    weight_R,
    weight_S_tetra,
    weight_T_tetra,
)

__all__ = [
    "DEFAULT_TOL",
    "EXACT_TOL",
    "MAX_REDRAWS",
    "ResidualReport",
    "check_stochasticity",
    "check_ybe",
    "check_tetrahedron",
    "check_identity",
    "check_degeneration",
    "sweep",
    "default_plan",
]

#: Relative tolerance for generic double-precision identity checks.
DEFAULT_TOL = 1e-9

#: Tighter tolerance for checks whose terms are exact rationals.
EXACT_TOL = 1e-12

#: Redraw budget before a pole-rejecting drawer gives up.
MAX_REDRAWS = 100


@dataclass(frozen=True)
class ResidualReport:
    """Outcome of evaluating both sides of one equation.

    ``residual_rel`` is ``residual_abs`` normalized by the larger of 1
    and the largest term magnitude encountered while summing, so it is
    unchanged when every weight on both sides is rescaled by a common
    constant.  ``passed`` records ``residual_rel <= tol`` for the
    tolerance the caller supplied.
    """

    equation_id: str
    lhs: complex
    rhs: complex
    residual_abs: float
    residual_rel: float
    term_count: int
    params: dict
    passed: bool

    def as_dict(self) -> dict:
        """JSON-ready view of the report."""
        return {
            "equation": self.equation_id,
            "params": {k: _jsonify(v) for k, v in self.params.items()},
            "lhs": _jsonify(self.lhs),
            "rhs": _jsonify(self.rhs),
            "residual_abs": self.residual_abs,
            "residual_rel": self.residual_rel,
            "term_count": self.term_count,
            "passed": self.passed,
        }


def _jsonify(value):
    if isinstance(value, complex):
        if value.imag == 0:
            return value.real
        return f"{value.real}{value.imag:+}i"
    if isinstance(value, Composition):
        return list(value)
    if isinstance(value, (tuple, list)):
        return [_jsonify(v) for v in value]
    if isinstance(value, dict):
        return {k: _jsonify(v) for k, v in value.items()}
    return value


def _report(
    equation_id: str,
    lhs: complex,
    rhs: complex,
    terms: Sequence[complex],
    params: dict,
    tol: float,
) -> ResidualReport:
    lhs = complex(lhs)
    rhs = complex(rhs)
    scale = max([1.0, abs(lhs), abs(rhs)] + [abs(t) for t in terms])
    residual_abs = abs(lhs - rhs)
    residual_rel = residual_abs / scale
    return ResidualReport(
        equation_id=equation_id,
        lhs=lhs,
        rhs=rhs,
        residual_abs=residual_abs,
        residual_rel=residual_rel,
        term_count=len(terms),
        params=dict(params),
        passed=residual_rel <= tol,
    )


def _need(params: dict, *names: str) -> list:
    missing = [name for name in names if name not in params]
    if missing:
        raise ValueError(f"missing parameters: {', '.join(missing)}")
    return [params[name] for name in names]


def _located(exc: PoleError, where) -> PoleError:
    return PoleError(f"{exc} [at configuration {where}]")


def _comp(parts) -> Composition:
    return parts if isinstance(parts, Composition) else Composition(tuple(parts))


def _compositions(n: int, size: int) -> list[Composition]:
    out = []
    for parts in itertools.product(range(size + 1), repeat=n + 1):
        c = Composition(parts)
        if c.size() == size:
            out.append(c)
    return out


# ---------------------------------------------------------------------------
# Row-stochasticity checks


def check_stochasticity(
    family: str, incoming, params: dict, tol: float = DEFAULT_TOL
) -> ResidualReport:
    """Residual of `sum of outgoing weights = 1` for one incoming state.

    ``family`` selects the weight row: ``six-vertex``, ``elliptic``,
    ``rank``, ``tetra-S`` or ``tetra-T``.  ``incoming`` is the family's
    incoming configuration; the outgoing states are enumerated exactly
    from arrow conservation.  A pole hit during the enumeration raises
    :class:`PoleError` naming the offending configuration.
    """
    terms = []
    if family == "six-vertex":
        i1, j1 = incoming
        x, y, q, v = _need(params, "x", "y", "q", "v")
        for j2 in (0, 1):
            i2 = i1 + j1 - j2
            if i2 not in (0, 1):
                continue
            cfg = ArrowConfig(i1, j1, i2, j2)
            try:
                terms.append(weight_s6v(cfg, x, y, q, v))
            except PoleError as exc:
                raise _located(exc, cfg) from exc
    elif family == "elliptic":
        i1, j1 = incoming
        J, Lam, lam, x, y, v, tau, eta = _need(
            params, "J", "Lambda", "lam", "x", "y", "v", "tau", "eta"
        )
        ctx = EllipticContext(tau=tau, eta=eta)
        p = EllipticVertexParams(J=J, Lambda=Lam, lam=lam, x=x, y=y, v=v)
        for j2 in range(min(J, i1 + j1) + 1):
            cfg = ArrowConfig(i1, j1, i1 + j1 - j2, j2)
            try:
                terms.append(weight_S_elliptic(p, cfg, ctx))
            except PoleError as exc:
                raise _located(exc, cfg) from exc
    elif family == "rank":
        A, B = (_comp(c) for c in incoming)
        n, L, M, x, y, v, q = _need(params, "n", "L", "M", "x", "y", "v", "q")
        for D in _compositions(n, L):
            C = A + B - D
            if not C.valid():
                continue
            cfg = ColoredConfig(A, B, C, D)
            try:
                terms.append(weight_S_rank(L, M, cfg, x, y, v, q))
            except PoleError as exc:
                raise _located(exc, cfg) from exc
    elif family in ("tetra-S", "tetra-T"):
        n1, n2, n3 = incoming
        if family == "tetra-S":
            q, v = _need(params, "q", "v")
        else:
            (v,) = _need(params, "v")
        for n2p in range(min(n1 + n2, n2 + n3) + 1):
            cfg = TetraConfig(n1, n2, n3, n1 + n2 - n2p, n2p, n2 + n3 - n2p)
            try:
                if family == "tetra-S":
                    terms.append(weight_S_tetra(cfg, q, v))
                else:
                    terms.append(weight_T_tetra(cfg, v))
            except PoleError as exc:
                raise _located(exc, cfg) from exc
    else:
        raise ValueError(f"unknown stochasticity family {family!r}")
    return _report(
        f"stochasticity/{family}",
        sum(terms),
        1.0,
        terms,
        {"incoming": incoming, **params},
        tol,
    )


# ---------------------------------------------------------------------------
# Yang-Baxter checks

# Interior enumeration for the triangle move.  On the left side the free
# index is the vertical count between the first two vertices; on the
# right side it is the count between the last two.  Conservation fixes
# everything else, and the leftover constraint filters incompatible
# assignments.


def _ybe_sides(boundary, lhs_factors, rhs_factors, caps):
    i1, j1, k1, i3, j3, k3 = boundary
    cap_i, cap_j, cap_k = caps
    lhs_terms = []
    for i2 in range(cap_i + 1):
        j2 = i1 + j1 - i2
        if not 0 <= j2 <= cap_j:
            continue
        k2 = k1 + j2 - j3
        if not 0 <= k2 <= cap_k or k2 + i2 != k3 + i3:
            continue
        lhs_terms.append(lhs_factors(i2, j2, k2))
    rhs_terms = []
    for i2 in range(cap_i + 1):
        k2 = k1 + i1 - i2
        if not 0 <= k2 <= cap_k:
            continue
        j2 = j1 + k2 - k3
        if not 0 <= j2 <= cap_j or i2 + j2 != i3 + j3:
            continue
        rhs_terms.append(rhs_factors(i2, j2, k2))
    return lhs_terms, rhs_terms


def check_ybe(
    family: str, boundary, params: dict, tol: float = DEFAULT_TOL
) -> ResidualReport:
    """Residual of the triangle equation for one boundary sextuple.

    ``family`` is one of ``six-vertex-w``, ``six-vertex-chi``,
    ``six-vertex-S``, ``elliptic-W``, ``elliptic-S``, ``rank-U``,
    ``rank-W`` or ``rank-S``.  The boundary is ``(i1, j1, k1, i3, j3,
    k3)`` in the family's edge alphabet; both interior sums are exact,
    with dynamical-parameter shifts applied per family.
    """
    if family == "six-vertex-w":
        x, y, z, q = _need(params, "x", "y", "z", "q")
        lhs_terms, rhs_terms = _ybe_sides(
            boundary,
            lambda i2, j2, k2: (
                weight_w(ArrowConfig(boundary[0], boundary[1], i2, j2), x, y, q)
                * weight_w(ArrowConfig(boundary[2], j2, k2, boundary[4]), x, z, q)
                * weight_w(ArrowConfig(k2, i2, boundary[5], boundary[3]), y, z, q)
            ),
            lambda i2, j2, k2: (
                weight_w(ArrowConfig(boundary[2], boundary[0], k2, i2), y, z, q)
                * weight_w(ArrowConfig(k2, boundary[1], boundary[5], j2), x, z, q)
                * weight_w(ArrowConfig(i2, j2, boundary[3], boundary[4]), x, y, q)
            ),
            (1, 1, 1),
        )
    elif family == "six-vertex-chi":
        x, y, z, q, s = _need(params, "x", "y", "z", "q", "s")
        cap = params.get("cap", 8)
        lhs_terms, rhs_terms = _ybe_sides(
            boundary,
            lambda i2, j2, k2: (
                weight_w(ArrowConfig(boundary[0], boundary[1], i2, j2), x, y, q)
                * weight_chi(ArrowConfig(boundary[2], j2, k2, boundary[4]), x, z, q, s)
                * weight_chi(ArrowConfig(k2, i2, boundary[5], boundary[3]), y, z, q, s)
            ),
            lambda i2, j2, k2: (
                weight_chi(ArrowConfig(boundary[2], boundary[0], k2, i2), y, z, q, s)
                * weight_chi(ArrowConfig(k2, boundary[1], boundary[5], j2), x, z, q, s)
                * weight_w(ArrowConfig(i2, j2, boundary[3], boundary[4]), x, y, q)
            ),
            (1, 1, cap),
        )
    elif family == "six-vertex-S":
        x, y, z, q, v = _need(params, "x", "y", "z", "q", "v")
        i1, j1, k1, i3, j3, k3 = boundary
        lhs_terms, rhs_terms = _ybe_sides(
            boundary,
            lambda i2, j2, k2: (
                weight_s6v(ArrowConfig(i1, j1, i2, j2), x, y, q, q**k1 * v)
                * weight_s6v(ArrowConfig(k1, j2, k2, j3), x, z, q, v)
                * weight_s6v(ArrowConfig(k2, i2, k3, i3), y, z, q, q**j3 * v)
            ),
            lambda i2, j2, k2: (
                weight_s6v(ArrowConfig(k1, i1, k2, i2), y, z, q, v)
                * weight_s6v(ArrowConfig(k2, j1, k3, j2), x, z, q, q**i2 * v)
                * weight_s6v(ArrowConfig(i2, j2, i3, j3), x, y, q, v)
            ),
            (1, 1, 1),
        )
    elif family in ("elliptic-W", "elliptic-S"):
        lhs_terms, rhs_terms = _ybe_elliptic_sides(family, boundary, params)
    elif family in ("rank-U", "rank-W", "rank-S"):
        lhs_terms, rhs_terms = _ybe_rank_sides(family, boundary, params)
    else:
        raise ValueError(f"unknown Yang-Baxter family {family!r}")
    return _report(
        f"ybe/{family}",
        sum(lhs_terms),
        sum(rhs_terms),
        lhs_terms + rhs_terms,
        {"boundary": boundary, **params},
        tol,
    )


def _ybe_elliptic_sides(family, boundary, params):
    """Interior sums with the face-parameter shift pattern.

    The first factor's dynamical entry is referenced to spin ``J``; the
    spin-``Lam`` factors carry an extra ``eta (Lam - J)``, and crossing
    an absorbed arrow shifts ``v`` by ``-2 eta``.  The ``lam`` shifts
    apply to both weight kinds; the ``v`` shifts only to the stochastic
    one.
    """
    J, Lam, T, lam, x, y, z, tau, eta = _need(
        params, "J", "Lambda", "T", "lam", "x", "y", "z", "tau", "eta"
    )
    ctx = EllipticContext(tau=tau, eta=eta)
    h = 2 * eta
    dynamical = family == "elliptic-S"
    if dynamical:
        (v,) = _need(params, "v")

    def factor(spins, lam_shift, xy, v_shift, cfg):
        if dynamical:
            p = EllipticVertexParams(
                J=spins[0], Lambda=spins[1], lam=lam + lam_shift,
                x=xy[0], y=xy[1], v=v + v_shift,
            )
            return weight_S_elliptic(p, cfg, ctx)
        p = EllipticVertexParams(
            J=spins[0], Lambda=spins[1], lam=lam + lam_shift, x=xy[0], y=xy[1]
        )
        return weight_W_fused(p, cfg, ctx)

    i1, j1, k1, i3, j3, k3 = boundary
    lhs_terms = []
    for j2 in range(min(J, i1 + j1) + 1):
        i2 = i1 + j1 - j2
        k2 = k1 + j2 - j3
        if k2 < 0 or k2 + i2 != k3 + i3:
            continue
        lhs_terms.append(
            factor((J, Lam), 0.0, (x, y), -h * k1, ArrowConfig(i1, j1, i2, j2))
            * factor((J, T), h * (2 * i2 - Lam), (x, z), 0.0,
                     ArrowConfig(k1, j2, k2, j3))
            * factor((Lam, T), 0.0, (y, z), -h * j3 + eta * (Lam - J),
                     ArrowConfig(k2, i2, k3, i3))
        )
    rhs_terms = []
    for i2 in range(k1 + i1 + 1):
        k2 = k1 + i1 - i2
        j2 = j1 + k2 - k3
        if not 0 <= j2 <= J or i2 + j2 != i3 + j3:
            continue
        rhs_terms.append(
            factor((Lam, T), h * (2 * j1 - J), (y, z), eta * (Lam - J),
                   ArrowConfig(k1, i1, k2, i2))
            * factor((J, T), 0.0, (x, z), -h * i2, ArrowConfig(k2, j1, k3, j2))
            * factor((J, Lam), h * (2 * k3 - T), (x, y), 0.0,
                     ArrowConfig(i2, j2, i3, j3))
        )
    return lhs_terms, rhs_terms


def _ybe_rank_sides(family, boundary, params):
    n, L, M, T, x, y, z, q = _need(
        params, "n", "L", "M", "T", "x", "y", "z", "q"
    )
    I1, J1, K1, I3, J3, K3 = (_comp(c) for c in boundary)
    if family == "rank-S":
        (v,) = _need(params, "v")

        def f1(cfg, side):
            shift = q ** (T - K1[0]) if side == "lhs" else 1.0
            return weight_S_rank(L, M, cfg, x, y, shift * v, q)

        def f2(cfg, i2_head):
            shift = 1.0 if i2_head is None else q ** (M - i2_head)
            return weight_S_rank(L, T, cfg, x, z, shift * v, q)

        def f3(cfg, side, j3_head):
            shift = q ** (L - j3_head) if side == "lhs" else 1.0
            return weight_S_rank(M, T, cfg, y, z, shift * v, q)

    else:
        weight = weight_U if family == "rank-U" else weight_W_rank

        def f1(cfg, side):
            return weight(L, M, cfg.A, cfg.B, cfg.C, cfg.D, x / y, q)

        def f2(cfg, i2_head):
            return weight(L, T, cfg.A, cfg.B, cfg.C, cfg.D, x / z, q)

        def f3(cfg, side, j3_head):
            return weight(M, T, cfg.A, cfg.B, cfg.C, cfg.D, y / z, q)

    lhs_terms = []
    for J2 in _compositions(n, L):
        I2 = I1 + J1 - J2
        K2 = K1 + J2 - J3
        if not (I2.valid() and K2.valid()):
            continue
        lhs_terms.append(
            f1(ColoredConfig(I1, J1, I2, J2), "lhs")
            * f2(ColoredConfig(K1, J2, K2, J3), None)
            * f3(ColoredConfig(K2, I2, K3, I3), "lhs", J3[0])
        )
    rhs_terms = []
    for I2 in _compositions(n, M):
        K2 = K1 + I1 - I2
        J2 = K2 + J1 - K3
        if not (K2.valid() and J2.valid()):
            continue
        rhs_terms.append(
            f3(ColoredConfig(K1, I1, K2, I2), "rhs", None)
            * f2(ColoredConfig(K2, J1, K3, J2), I2[0])
            * f1(ColoredConfig(I2, J2, I3, J3), "rhs")
        )
    return lhs_terms, rhs_terms


# ---------------------------------------------------------------------------
# Tetrahedron checks


def _tetra_lhs_assignments(boundary):
    """Interior assignments of the left side; the free count is n2'."""
    n1, n2, n3, n4, n5, n6, n1pp, n2pp, n3pp, n4pp, n5pp, n6pp = boundary
    out = []
    for n2p in range(min(n1 + n2, n2 + n3) + 1):
        n1p, n3p = n1 + n2 - n2p, n2 + n3 - n2p
        n4p = n1p + n4 - n1pp
        n5p = n4 + n5 - n4p
        n6p = n4p + n6 - n4pp
        if min(n4p, n5p, n6p) < 0:
            continue
        if n2p + n4p != n2pp + n4pp:
            continue
        if n3p + n5p != n3pp + n5pp:
            continue
        if n5p + n6p != n5pp + n6pp:
            continue
        out.append((
            TetraConfig(n1, n2, n3, n1p, n2p, n3p),
            TetraConfig(n1p, n4, n5, n1pp, n4p, n5p),
            TetraConfig(n3p, n5p, n6p, n3pp, n5pp, n6pp),
            TetraConfig(n2p, n4p, n6, n2pp, n4pp, n6p),
            n3p,
        ))
    return out


def _tetra_rhs_assignments(boundary):
    """Interior assignments of the right side; the free count is n3'."""
    n1, n2, n3, n4, n5, n6, n1pp, n2pp, n3pp, n4pp, n5pp, n6pp = boundary
    out = []
    for n3p in range(n3 + n5 + 1):
        n5p = n3 + n5 - n3p
        n6p = n6 - n3 + n3p
        if n6p < 0:
            continue
        n4p = n4 + n6p - n6pp
        n2p = n2 + n4 - n4p
        n1p = n1 + n4p - n4pp
        if min(n4p, n2p, n1p) < 0:
            continue
        if n4p + n5p != n4pp + n5pp:
            continue
        if n1p + n2p != n1pp + n2pp:
            continue
        if n2p + n3p != n2pp + n3pp:
            continue
        out.append((
            TetraConfig(n3, n5, n6, n3p, n5p, n6p),
            TetraConfig(n2, n4, n6p, n2p, n4p, n6pp),
            TetraConfig(n1, n4p, n5p, n1p, n4pp, n5pp),
            TetraConfig(n1p, n2p, n3p, n1pp, n2pp, n3pp),
            n3p,
        ))
    return out


def check_tetrahedron(
    kind: str, boundary, params: dict, tol: float = DEFAULT_TOL
) -> ResidualReport:
    """Residual of the four-vertex equation for one twelve-count boundary.

    ``kind`` is ``plain-R``, ``dynamical-S`` or ``nondyn-T``.  Interior
    counts follow from conservation, leaving a single free index per
    side; ``params["cap"]`` (default 3) bounds the boundary counts to
    keep the sums small and well conditioned.
    """
    boundary = tuple(int(b) for b in boundary)
    if len(boundary) != 12:
        raise ValueError("boundary must hold twelve counts")
    cap = params.get("cap", 3)
    if any(b < 0 for b in boundary):
        raise ValueError("boundary counts must be nonnegative")
    if max(boundary) > cap:
        raise ValueError(f"boundary count exceeds cap {cap}")
    n5, n2pp = boundary[4], boundary[7]

    if kind == "plain-R":
        (q,) = _need(params, "q")

        def lhs_factors(c1, c2, c3, c4, free):
            return (weight_R(c1, q) * weight_R(c2, q)
                    * weight_R(c3, q) * weight_R(c4, q))

        rhs_factors = lhs_factors
    elif kind == "dynamical-S":
        q, v, w = _need(params, "q", "v", "w")

        def lhs_factors(c1, c2, c3, c4, free):
            args = dyn_params_tetra(v, w, q, (n2pp, 0, n5)).lhs
            return (weight_S_tetra(c1, q, args[0]) * weight_S_tetra(c2, q, args[1])
                    * weight_S_tetra(c3, q, args[2]) * weight_S_tetra(c4, q, args[3]))

        def rhs_factors(c1, c2, c3, c4, free):
            args = dyn_params_tetra(v, w, q, (n2pp, free, n5)).rhs
            return (weight_S_tetra(c1, q, args[0]) * weight_S_tetra(c2, q, args[1])
                    * weight_S_tetra(c3, q, args[2]) * weight_S_tetra(c4, q, args[3]))

    elif kind == "nondyn-T":
        v, w = _need(params, "v", "w")

        def lhs_factors(c1, c2, c3, c4, free):
            return (weight_T_tetra(c1, w) * weight_T_tetra(c2, w)
                    * weight_T_tetra(c3, v) * weight_T_tetra(c4, v))

        def rhs_factors(c1, c2, c3, c4, free):
            return (weight_T_tetra(c1, v) * weight_T_tetra(c2, v)
                    * weight_T_tetra(c3, w) * weight_T_tetra(c4, w))

    else:
        raise ValueError(f"unknown tetrahedron kind {kind!r}")

    lhs_terms = [lhs_factors(*a) for a in _tetra_lhs_assignments(boundary)]
    rhs_terms = [rhs_factors(*a) for a in _tetra_rhs_assignments(boundary)]
    return _report(
        f"tetrahedron/{kind}",
        sum(lhs_terms),
        sum(rhs_terms),
        lhs_terms + rhs_terms,
        {"boundary": boundary, **params},
        tol,
    )


# ---------------------------------------------------------------------------
# Hypergeometric and theta identities


def _qpoch_inf(a: complex, q: complex) -> complex:
    """(a; q)_infinity for |q| < 1, truncated once the tail factor is 1."""
    if abs(q) >= 1:
        raise ValueError("infinite q-Pochhammer needs |q| < 1")
    value = 1.0 + 0j
    factor = complex(a)
    for _ in range(100000):
        if abs(factor) <= TRUNCATION_TOL:
            return value
        value *= 1.0 - factor
        factor *= q
    raise ConvergenceError("infinite q-Pochhammer tail did not shrink")


def _phi21(a: complex, b: complex, c: complex, q: complex, z: complex) -> complex:
    """Non-terminating 2phi1, summed until the tail is negligible."""
    total = 1.0 + 0j
    term = 1.0 + 0j
    largest = 1.0
    for k in range(10000):
        den = (1.0 - c * q**k) * (1.0 - q ** (k + 1))
        if abs(den) < 1e-10:
            raise PoleError(f"2phi1 denominator vanishes at order {k + 1}")
        term *= (1.0 - a * q**k) * (1.0 - b * q**k) * z / den
        if abs(term) > largest:
            largest = abs(term)
        total += term
        if abs(term) <= TRUNCATION_TOL * largest and abs(z * q**k) < 0.9:
            return total
    raise ConvergenceError("2phi1 did not converge within 10000 terms")


def check_identity(kind: str, params: dict, tol: float = DEFAULT_TOL) -> ResidualReport:
    """Residual of one special-function identity.

    Kinds: ``theta-quartic`` (the quartic relation among four theta
    factors), ``vandermonde-chu`` (terminating 2F1 at 1), ``q-heine``
    (the transformation of a terminating 2phi1 into a non-terminating
    one), ``elliptic-jackson`` (the terminating very-well-poised 10v9
    summation) and ``poch-merge`` (index concatenation of q-Pochhammer
    symbols, negative indices allowed).
    """
    terms: list[complex]
    if kind == "theta-quartic":
        x, y, z, w, tau = _need(params, "x", "y", "z", "w", "tau")
        ctx = EllipticContext(tau=tau, eta=params.get("eta", 0.25))

        def f(arg):
            return theta1(arg, ctx)

        lhs = f(x + z) * f(x - z) * f(y + w) * f(y - w)
        first = f(x + y) * f(x - y) * f(z + w) * f(z - w)
        second = f(x + w) * f(x - w) * f(y + z) * f(y - z)
        rhs = first + second
        terms = [lhs, first, second]
    elif kind == "vandermonde-chu":
        k, b, c = _need(params, "k", "b", "c")
        spec = HypergeometricSpec(
            kind="rational", upper=(-k, b), lower=(c,), argument=1.0,
            termination_index=k,
        )
        lhs = hypergeometric(spec)
        den = pochhammer("rational", c, k)
        if abs(den) < 1e-10:
            raise PoleError(f"(c)_{k} vanishes for c = {c}")
        rhs = pochhammer("rational", c - b, k) / den
        terms = [lhs, rhs]
    elif kind == "q-heine":
        k, b, c, z, q = _need(params, "k", "b", "c", "z", "q")
        if abs(q) >= 1 or abs(b) >= 1:
            raise ValueError("q-heine needs |q| < 1 and |b| < 1")
        spec = HypergeometricSpec(
            kind="basic", upper=(complex(q) ** (-k), b), lower=(c,),
            argument=z, termination_index=k, base=q,
        )
        lhs = hypergeometric(spec)
        den = _qpoch_inf(c, q)
        if abs(den) < 1e-10:
            raise PoleError(f"(c; q)_infinity vanishes for c = {c}")
        prefactor = (
            _qpoch_inf(b, q)
            * pochhammer("q", complex(q) ** (-k) * z, k, q)
            / den
        )
        rhs = prefactor * _phi21(c / b, z, complex(q) ** (-k) * z, q, b)
        terms = [lhs, rhs]
    elif kind == "elliptic-jackson":
        n, a, b, c, d, tau, eta = _need(
            params, "n", "a", "b", "c", "d", "tau", "eta"
        )
        ctx = EllipticContext(tau=tau, eta=eta)
        # the balancing condition pins the fifth tail entry
        e = 2 * a - 2 * eta - b - c - d - 2 * n * eta
        tail = (b, c, d, e, 2 * n * eta)
        if not is_balanced(a, tail, 9, ctx):
            raise ValueError("parameter draw is not balanced")
        lhs = vwp_elliptic(a, tail, 1.0, ctx, termination_index=n)

        def ep(arg):
            return pochhammer("elliptic", arg, n, ctx)

        num = (ep(a - 2 * eta) * ep(a - b - c - 2 * eta)
               * ep(a - b - d - 2 * eta) * ep(a - c - d - 2 * eta))
        den = (ep(a - b - 2 * eta) * ep(a - c - 2 * eta)
               * ep(a - d - 2 * eta) * ep(a - b - c - d - 2 * eta))
        if abs(den) < 1e-10:
            raise PoleError("closed-form denominator vanishes")
        rhs = num / den
        terms = [lhs, rhs]
    elif kind == "poch-merge":
        a, q, k, m = _need(params, "a", "q", "k", "m")
        lhs = pochhammer("q", a, k, q) * pochhammer(
            "q", a * complex(q) ** k, m, q
        )
        rhs = pochhammer("q", a, k + m, q)
        terms = [lhs, rhs]
    else:
        raise ValueError(f"unknown identity kind {kind!r}")
    return _report(f"identity/{kind}", lhs, rhs, terms, params, tol)


# ---------------------------------------------------------------------------
# Degeneration checks


_SPIN_HALF_CONFIGS = [
    ArrowConfig(0, 0, 0, 0), ArrowConfig(1, 1, 1, 1),
    ArrowConfig(1, 0, 1, 0), ArrowConfig(0, 1, 0, 1),
    ArrowConfig(1, 0, 0, 1), ArrowConfig(0, 1, 1, 0),
]

_TRIG_KEYS = [(1, 0, 1, 0), (0, 1, 1, 0), (1, 0, 0, 1), (0, 1, 0, 1)]


def _sine_one_one(key, lam, v, x, y, h):
    """Trigonometric limit of the unit-spin dynamical weights."""
    import cmath

    def s(arg):
        return cmath.sin(cmath.pi * arg)

    base = s(y - x + h) * s(lam)
    first = {
        (1, 0, 1, 0): s(y - x) * s(lam - h) / base,
        (0, 1, 1, 0): s(lam - y + x) * s(h) / base,
        (1, 0, 0, 1): s(lam + y - x) * s(h) / base,
        (0, 1, 0, 1): s(y - x) * s(lam + h) / base,
    }[key]
    second = {
        (1, 0, 1, 0): s(lam + y - v + h) * s(x - v)
        / (s(x - v + h) * s(lam + y - v)),
        (0, 1, 1, 0): s(lam + y - v + h) * s(x - v)
        / (s(lam + x - v + h) * s(y - v)),
        (1, 0, 0, 1): s(y - v + h) * s(lam + x - v)
        / (s(x - v + h) * s(lam + y - v)),
        (0, 1, 0, 1): s(lam + x - v) * s(y - v + h)
        / (s(lam + x - v + h) * s(y - v)),
    }[key]
    return first * second


def _unit_spin_case(a, b, c, d, x, y, q, v):
    """Unit-spin colored weights, written out case by case."""
    if a == b:
        return 1.0 + 0j if c == a and d == a else 0j
    if (c, d) == (a, b):
        if a == 0:
            return (x - y) * (1 - q * v * y) / ((x - q * y) * (1 - v * y))
        if b == 0:
            return q * (x - y) * (1 - v * x) / ((x - q * y) * (1 - q * v * x))
        if a < b:
            return q * (x - y) / (x - q * y)
        return (x - y) / (x - q * y)
    if (c, d) == (b, a):
        if a == 0:
            return (1 - q) * y * (1 - v * x) / ((x - q * y) * (1 - v * y))
        if b == 0:
            return (1 - q) * x * (1 - q * v * y) / ((x - q * y) * (1 - q * v * x))
        if a < b:
            return (1 - q) * x / (x - q * y)
        return (1 - q) * y / (x - q * y)
    return 0j


def _worst_pair(pairs):
    """The (value, reference, label) triple with the largest deviation."""
    def gap(pair):
        value, reference, _ = pair
        return abs(value - reference) / max(1.0, abs(value), abs(reference))

    return max(pairs, key=gap)


def check_degeneration(
    kind: str, params: dict, tol: float = DEFAULT_TOL
) -> ResidualReport:
    """Residual between a degenerate evaluation and its closed form.

    Kinds: ``six-vertex-v0`` (stochastic weights at v = 0 against the
    plain ones), ``elliptic-trig-limit`` (theta-built unit-spin weights
    at large Im tau against their sine forms), ``tetra-q1`` (the
    three-dimensional stochastic weights near q = 1 against the
    binomial ones), ``rank-L1-closed-form`` (the general colored weight
    at L = 1 against its single-arrow closed form, and at M = 1 also
    against the case table), ``elliptic-frozen`` (the fused weight at
    j2 = 0 against the factored frozen product) and ``correction-ratio``
    (closed-form corrections against frozen-weight ratios, per family).

    When a comparison aggregates several configurations the report
    carries the worst one.  A limit that has not converged at the
    supplied scale shows up as a large residual, not as an error.
    """
    recorded = dict(params)
    if kind == "six-vertex-v0":
        x, y, q = _need(params, "x", "y", "q")
        pairs = [
            (weight_s6v(cfg, x, y, q, 0.0), weight_w(cfg, x, y, q), cfg)
            for cfg in _SPIN_HALF_CONFIGS
        ]
    elif kind == "elliptic-trig-limit":
        lam, v, x, y, eta = _need(params, "lam", "v", "x", "y", "eta")
        tau = recorded["tau"] = params.get("tau", 40j)
        ctx = EllipticContext(tau=tau, eta=eta)
        p = EllipticVertexParams(J=1, Lambda=1, lam=lam, x=x, y=y, v=v)
        pairs = [
            (
                weight_S_special("one-one", p, ArrowConfig(*key), ctx),
                _sine_one_one(key, lam, v, x, y, 2 * eta),
                key,
            )
            for key in _TRIG_KEYS
        ]
    elif kind == "tetra-q1":
        v = params["v"]
        q = recorded["q"] = params.get("q", 1.0 - 1e-5)
        n1, n2, n3 = _need(params, "n1", "n2", "n3")
        pairs = []
        for n2p in range(min(n1 + n2, n2 + n3) + 1):
            cfg = TetraConfig(n1, n2, n3, n1 + n2 - n2p, n2p, n2 + n3 - n2p)
            pairs.append(
                (weight_S_tetra(cfg, q, v), weight_T_tetra(cfg, v), cfg)
            )
    elif kind == "rank-L1-closed-form":
        n, M, I, b, K, d, x, y, v, q = _need(
            params, "n", "M", "I", "b", "K", "d", "x", "y", "v", "q"
        )
        I, K = _comp(I), _comp(K)
        cfg = ColoredConfig(I, Composition.unit(n + 1, b), K,
                            Composition.unit(n + 1, d))
        general = weight_S_rank(1, M, cfg, x, y, v, q)
        closed = weight_S_rank_L1(M, I, b, K, d, x, y, v, q)
        pairs = [(general, closed, "closed-form")]
        if M == 1:
            a = next(i for i in range(n + 1) if I[i] == 1)
            c = next(i for i in range(n + 1) if K[i] == 1)
            pairs.append(
                (general, _unit_spin_case(a, b, c, d, x, y, q, v), "case-table")
            )
    elif kind == "elliptic-frozen":
        J, Lam, lam, x, y, tau, eta, i1, j1 = _need(
            params, "J", "Lambda", "lam", "x", "y", "tau", "eta", "i1", "j1"
        )
        ctx = EllipticContext(tau=tau, eta=eta)
        p = EllipticVertexParams(J=J, Lambda=Lam, lam=lam, x=x, y=y)
        fused = weight_W_fused(p, ArrowConfig(i1, j1, i1 + j1, 0), ctx)
        frozen = weight_W_frozen(J, Lam, i1, j1, lam, x, y, ctx)
        pairs = [(fused, frozen, "frozen")]
    elif kind == "correction-ratio":
        pairs = [_correction_pair(params)]
    else:
        raise ValueError(f"unknown degeneration kind {kind!r}")

    value, reference, label = _worst_pair(pairs)
    return _report(
        f"degeneration/{kind}",
        value,
        reference,
        [p[0] for p in pairs] + [p[1] for p in pairs],
        {**recorded, "worst": label},
        tol,
    )


def _correction_pair(params):
    family = params.get("family")
    if family == "elliptic":
        J, Lam, lam, x, y, T, r, tau, eta, cfg = _need(
            params, "J", "Lambda", "lam", "x", "y", "T", "r", "tau", "eta", "cfg"
        )
        ctx = EllipticContext(tau=tau, eta=eta)
        p = EllipticVertexParams(J=J, Lambda=Lam, lam=lam, x=x, y=y, T=T, r=r)
        cfg = ArrowConfig(*cfg)
        return (
            correction_elliptic_ratio(p, cfg, ctx),
            correction_elliptic(p, cfg, ctx),
            "elliptic",
        )
    if family == "rank":
        n, L, M, x, y, q, T, R, z, cfg = _need(
            params, "n", "L", "M", "x", "y", "q", "T", "R", "z", "cfg"
        )
        R = _comp(R)
        cfg = ColoredConfig(*(_comp(c) for c in cfg))
        # the curve enters the closed form only through v = q^{-R_0} / z
        return (
            correction_rank_ratio(L, M, cfg, x, y, q, T, R, z),
            correction_rank(L, M, cfg, x, y, complex(q) ** (-R[0]) / z, q),
            "rank",
        )
    if family == "tetra":
        q, cfg, freeze = _need(params, "q", "cfg", "freeze")
        cfg = TetraConfig(*cfg)
        k4, k5, k6 = freeze
        ratio = correction_tetra_ratio(cfg, q, TetraFreeze(k4, k5, k6))
        if "freeze_alt" in params:
            # same k5: the ratio must not see k4 or k6 at all
            a4, a5, a6 = params["freeze_alt"]
            return (
                ratio,
                correction_tetra_ratio(cfg, q, TetraFreeze(a4, a5, a6)),
                "tetra-independence",
            )
        return (
            ratio,
            correction_tetra(cfg, q, complex(q) ** (2 * k5 + 2)),
            "tetra",
        )
    raise ValueError(f"unknown correction family {family!r}")


# ---------------------------------------------------------------------------
# Seeded sweeps


def _cx(rng: random.Random, lo: float, hi: float, imag: float = 0.0) -> complex:
    return complex(rng.uniform(lo, hi), rng.uniform(-imag, imag) if imag else 0.0)


_S6V_INCOMING = [(0, 0), (1, 0), (0, 1), (1, 1)]
_ELLIPTIC_SPINS = [(J, Lam) for J in (1, 2, 3) for Lam in (1, 2, 3)]
_RANK_SHAPES = [
    (n, L, M) for n in (1, 2) for L in (1, 2) for M in (1, 2)
]
_RANK_ROWS = [
    (n, L, M, A, B)
    for (n, L, M) in _RANK_SHAPES
    for A in _compositions(n, M)
    for B in _compositions(n, L)
]
_B64 = [b for b in itertools.product((0, 1), repeat=6)]
_RANK_S_GRID = [
    (n, boundary)
    for n in (1, 2)
    for boundary in itertools.product(_compositions(n, 1), repeat=6)
]
_UWT_SHAPES = [(1, (1, 1, 1)), (1, (2, 1, 1)), (2, (1, 2, 1)), (2, (2, 2, 2))]


def _six_vertex_params(rng):
    return {
        "x": rng.uniform(1.1, 2.2),
        "y": rng.uniform(0.2, 0.9),
        "q": rng.uniform(0.2, 0.8),
        "v": _cx(rng, 0.05, 0.5, 0.2),
    }


def _draw_stoch_six_vertex(rng, index, tol):
    return check_stochasticity(
        "six-vertex", _S6V_INCOMING[index % 4], _six_vertex_params(rng), tol
    )


def _draw_stoch_elliptic(rng, index, tol):
    J, Lam = _ELLIPTIC_SPINS[index % len(_ELLIPTIC_SPINS)]
    i1 = rng.randint(0, min(4, Lam))
    j1 = rng.randint(0, J)
    params = {
        "J": J, "Lambda": Lam,
        "lam": complex(rng.uniform(0.2, 0.8), rng.uniform(0.0, 0.1)),
        "x": rng.uniform(0.0, 0.6),
        "y": rng.uniform(0.0, 0.6),
        "v": complex(rng.uniform(0.2, 0.8), rng.uniform(0.0, 0.1)),
        "tau": 1.1j, "eta": 0.13,
    }
    return check_stochasticity("elliptic", (i1, j1), params, tol)


def _draw_stoch_rank(rng, index, tol):
    n, L, M, A, B = _RANK_ROWS[index % len(_RANK_ROWS)]
    params = {
        "n": n, "L": L, "M": M,
        "x": 1.2 + 0.5 * rng.random(),
        "y": 0.3 + 0.25 * rng.random(),
        "v": 0.05 + 0.2 * rng.random(),
        "q": rng.uniform(0.3, 0.7),
    }
    return check_stochasticity("rank", (A, B), params, tol)


def _draw_stoch_tetra_s(rng, index, tol):
    # small q makes the terminating sum trade huge alternating terms;
    # keep q high enough that doubles carry the cancellation
    incoming = tuple(rng.randint(0, 4) for _ in range(3))
    params = {"q": rng.uniform(0.8, 0.95), "v": _cx(rng, 0.05, 0.5, 0.15)}
    return check_stochasticity("tetra-S", incoming, params, tol)


def _draw_stoch_tetra_t(rng, index, tol):
    incoming = tuple(rng.randint(0, 4) for _ in range(3))
    return check_stochasticity(
        "tetra-T", incoming, {"v": rng.uniform(0.05, 0.95)}, tol
    )


def _draw_ybe_six_vertex(family):
    def drawer(rng, index, tol):
        params = {
            "x": _cx(rng, 1.2, 2.1, 0.2),
            "y": _cx(rng, 0.3, 0.9, 0.1),
            "z": _cx(rng, 0.2, 0.5, 0.1),
            "q": _cx(rng, 0.25, 0.6, 0.1),
        }
        if family == "six-vertex-chi":
            params["s"] = _cx(rng, 0.1, 0.7, 0.1)
        if family == "six-vertex-S":
            params["v"] = _cx(rng, 0.05, 0.4, 0.1)
        return check_ybe(family, _B64[index % 64], params, tol)

    return drawer


def _elliptic_ybe_boundary(rng, J, Lam, T):
    for _ in range(200):
        i1, j1, k1 = rng.randint(0, Lam), rng.randint(0, J), rng.randint(0, T)
        total = i1 + j1 + k1
        i3, j3 = rng.randint(0, Lam), rng.randint(0, J)
        k3 = total - i3 - j3
        if 0 <= k3 <= T:
            return (i1, j1, k1, i3, j3, k3)
    raise ValueError("no conserving boundary found")


def _draw_ybe_elliptic(family):
    shapes = [(1, 1, 1), (2, 1, 1), (1, 2, 1), (1, 1, 2), (2, 2, 1)]

    def drawer(rng, index, tol):
        J, Lam, T = shapes[index % len(shapes)]
        params = {
            "J": J, "Lambda": Lam, "T": T,
            "lam": complex(rng.uniform(0.3, 0.6), rng.uniform(0.02, 0.08)),
            "x": rng.uniform(0.1, 0.4),
            "y": rng.uniform(0.4, 0.7),
            "z": rng.uniform(0.7, 0.9),
            "tau": 1.1j, "eta": 0.13,
        }
        if family == "elliptic-S":
            params["v"] = complex(rng.uniform(0.2, 0.5), rng.uniform(0.02, 0.08))
        return check_ybe(
            family, _elliptic_ybe_boundary(rng, J, Lam, T), params, tol
        )

    return drawer


def _rank_ybe_boundary(rng, n, L, M, T):
    cm, cl, ct = _compositions(n, M), _compositions(n, L), _compositions(n, T)
    for _ in range(200):
        I1, J1, K1 = rng.choice(cm), rng.choice(cl), rng.choice(ct)
        total = I1 + J1 + K1
        I3, J3 = rng.choice(cm), rng.choice(cl)
        K3 = total - I3 - J3
        if K3.valid() and K3.size() == T:
            return (I1, J1, K1, I3, J3, K3)
    raise ValueError("no conserving boundary found")


def _draw_ybe_rank_plain(family):
    def drawer(rng, index, tol):
        n, (L, M, T) = _UWT_SHAPES[index % len(_UWT_SHAPES)]
        params = {
            "n": n, "L": L, "M": M, "T": T,
            "x": _cx(rng, 1.4, 2.0, 0.2),
            "y": _cx(rng, 0.4, 0.8, 0.1),
            "z": _cx(rng, 2.1, 2.6, 0.3),
            "q": rng.uniform(0.3, 0.6),
        }
        return check_ybe(
            family, _rank_ybe_boundary(rng, n, L, M, T), params, tol
        )

    return drawer


def _draw_ybe_rank_s(rng, index, tol):
    n, boundary = _RANK_S_GRID[index % len(_RANK_S_GRID)]
    params = {
        "n": n, "L": 1, "M": 1, "T": 1,
        "x": 1.7, "y": 0.6, "z": 2.3,
        "q": rng.uniform(0.35, 0.55),
        "v": _cx(rng, 0.1, 0.4, 0.1),
    }
    return check_ybe("rank-S", boundary, params, tol)


def _tetra_boundary(rng, cap):
    """A full boundary reached through an admissible interior chain."""
    while True:
        n1, n2, n3, n4, n5, n6 = (rng.randint(0, cap) for _ in range(6))
        n2p = rng.randint(0, min(n1 + n2, n2 + n3))
        n1p, n3p = n1 + n2 - n2p, n2 + n3 - n2p
        n4p = rng.randint(0, min(n1p + n4, n4 + n5))
        n1pp, n5p = n1p + n4 - n4p, n4 + n5 - n4p
        n4pp = rng.randint(0, min(n2p + n4p, n4p + n6))
        n2pp, n6p = n2p + n4p - n4pp, n4p + n6 - n4pp
        n5pp = rng.randint(0, min(n3p + n5p, n5p + n6p))
        n3pp, n6pp = n3p + n5p - n5pp, n5p + n6p - n5pp
        boundary = (n1, n2, n3, n4, n5, n6, n1pp, n2pp, n3pp, n4pp, n5pp, n6pp)
        if max(boundary) <= cap:
            return boundary


def _draw_tetra(kind):
    def drawer(rng, index, tol):
        if kind == "plain-R":
            params = {"q": rng.uniform(0.45, 0.7), "cap": 2}
            boundary = _tetra_boundary(rng, 2)
        elif kind == "dynamical-S":
            params = {
                "q": rng.uniform(0.5, 0.65),
                "v": _cx(rng, 0.1, 0.6, 0.2),
                "w": _cx(rng, 0.1, 0.6, 0.2),
                "cap": 2,
            }
            boundary = _tetra_boundary(rng, 2)
        else:
            params = {
                "v": rng.uniform(0.05, 0.95),
                "w": rng.uniform(0.05, 0.95),
                "cap": 3,
            }
            boundary = _tetra_boundary(rng, 3)
        return check_tetrahedron(kind, boundary, params, tol)

    return drawer


def _draw_theta_quartic(rng, index, tol):
    params = {
        "x": _cx(rng, -0.4, 0.4, 0.3),
        "y": _cx(rng, -0.4, 0.4, 0.3),
        "z": _cx(rng, -0.4, 0.4, 0.3),
        "w": _cx(rng, -0.4, 0.4, 0.3),
        "tau": 1.1j,
    }
    return check_identity("theta-quartic", params, tol)


def _draw_vandermonde_chu(rng, index, tol):
    params = {
        "k": index % 6,
        "b": _cx(rng, -2.0, 2.0, 0.8),
        "c": _cx(rng, 0.5, 3.0, 0.8),
    }
    return check_identity("vandermonde-chu", params, tol)


def _draw_q_heine(rng, index, tol):
    params = {
        "k": index % 6,
        "b": _cx(rng, 0.1, 0.55, 0.15),
        "c": _cx(rng, 0.2, 1.5, 0.3),
        "z": _cx(rng, 0.1, 0.8, 0.2),
        "q": _cx(rng, 0.25, 0.6, 0.1),
    }
    return check_identity("q-heine", params, tol)


def _draw_elliptic_jackson(rng, index, tol):
    params = {
        "n": index % 4,
        "a": _cx(rng, 0.4, 0.9, 0.05),
        "b": _cx(rng, 0.1, 0.35, 0.05),
        "c": _cx(rng, 0.1, 0.35, 0.05),
        "d": _cx(rng, 0.1, 0.35, 0.05),
        "tau": 1.1j,
        "eta": 0.13,
    }
    return check_identity("elliptic-jackson", params, tol)


def _draw_poch_merge(rng, index, tol):
    params = {
        "a": _cx(rng, -1.4, 1.4, 0.6),
        "q": _cx(rng, 0.2, 0.7, 0.15),
        "k": rng.randint(-4, 5),
        "m": rng.randint(-4, 5),
    }
    return check_identity("poch-merge", params, tol)


def _draw_deg_six_vertex_v0(rng, index, tol):
    params = {
        "x": _cx(rng, 1.1, 2.2, 0.3),
        "y": _cx(rng, 0.2, 0.9, 0.2),
        "q": _cx(rng, 0.2, 0.7, 0.2),
    }
    return check_degeneration("six-vertex-v0", params, tol)


def _draw_deg_trig(rng, index, tol):
    params = {
        "lam": complex(rng.uniform(0.3, 0.5), rng.uniform(0.02, 0.08)),
        "v": complex(rng.uniform(0.25, 0.35), rng.uniform(0.02, 0.06)),
        "x": rng.uniform(0.15, 0.3),
        "y": rng.uniform(0.45, 0.6),
        "eta": 0.13,
        "tau": 40j,
    }
    return check_degeneration("elliptic-trig-limit", params, tol)


def _draw_deg_tetra_q1(rng, index, tol):
    params = {
        "n1": rng.randint(0, 3), "n2": rng.randint(0, 3),
        "n3": rng.randint(0, 3), "v": rng.uniform(0.1, 0.9),
    }
    return check_degeneration("tetra-q1", params, tol)


def _draw_deg_rank_l1(rng, index, tol):
    n = 2
    M = (1, 2, 3)[index % 3]
    for _ in range(100):
        I = rng.choice(_compositions(n, M))
        b, d = rng.randrange(n + 1), rng.randrange(n + 1)
        K = I + Composition.unit(n + 1, b) - Composition.unit(n + 1, d)
        if K.valid():
            break
    params = {
        "n": n, "M": M, "I": tuple(I), "b": b, "K": tuple(K), "d": d,
        "x": 1.2 + 0.5 * rng.random(),
        "y": 0.3 + 0.25 * rng.random(),
        "v": 0.05 + 0.2 * rng.random(),
        "q": rng.uniform(0.3, 0.6),
    }
    return check_degeneration("rank-L1-closed-form", params, tol)


def _draw_deg_elliptic_frozen(rng, index, tol):
    J = (1, 2, 3)[index % 3]
    Lam = rng.randint(1, 3)
    j1 = rng.randint(0, J)
    i1 = rng.randint(0, max(0, Lam - j1))
    params = {
        "J": J, "Lambda": Lam,
        "lam": complex(rng.uniform(0.3, 0.6), rng.uniform(0.02, 0.08)),
        "x": rng.uniform(0.1, 0.35),
        "y": rng.uniform(0.4, 0.65),
        "tau": 1.1j, "eta": 0.13,
        "i1": i1, "j1": j1,
    }
    return check_degeneration("elliptic-frozen", params, tol)


def _draw_deg_correction(rng, index, tol):
    family = ("elliptic", "rank", "tetra")[index % 3]
    if family == "elliptic":
        J, Lam = rng.randint(1, 3), rng.randint(1, 3)
        j1 = rng.randint(0, J)
        i1 = rng.randint(0, min(3, Lam))
        j2 = rng.randint(max(0, i1 + j1 - Lam), min(J, i1 + j1))
        params = {
            "family": family, "J": J, "Lambda": Lam,
            "lam": complex(rng.uniform(0.2, 0.8), rng.uniform(0.0, 0.1)),
            "x": rng.uniform(0.0, 0.6), "y": rng.uniform(0.0, 0.6),
            "T": complex(rng.uniform(1.5, 3.5), 0.07),
            "r": rng.randrange(4),
            "tau": 1.1j, "eta": 0.13,
            "cfg": (i1, j1, i1 + j1 - j2, j2),
        }
    elif family == "rank":
        n = 2
        L, M = rng.choice((1, 2)), rng.choice((1, 2))
        A = rng.choice(_compositions(n, M))
        B = rng.choice(_compositions(n, L))
        total = A + B
        D = rng.choice([D for D in _compositions(n, L) if (total - D).valid()])
        params = {
            "family": family, "n": n, "L": L, "M": M,
            "x": 1.2 + 0.5 * rng.random(),
            "y": 0.3 + 0.25 * rng.random(),
            "q": rng.uniform(0.3, 0.6),
            "T": 8, "R": (6, 1, 1),
            "z": 2.0 + 0.5 * rng.random(),
            "cfg": (tuple(A), tuple(B), tuple(total - D), tuple(D)),
        }
    else:
        n1, n2, n3 = (rng.randint(0, 3) for _ in range(3))
        n2p = rng.randint(0, min(n1 + n2, n2 + n3))
        cfg = (n1, n2, n3, n1 + n2 - n2p, n2p, n2 + n3 - n2p)
        n1p = n1 + n2 - n2p
        k4 = rng.randint(0, 4)
        k5 = max(n1 - n3, n1p, 0) + rng.randint(0, 4)
        k6 = n2 + n3 + rng.randint(0, 4)
        params = {
            "family": family, "q": rng.uniform(0.45, 0.7),
            "cfg": cfg, "freeze": (k4, k5, k6),
        }
        if index % 2:
            # the correction must be blind to the k4 and k6 attachments
            params["freeze_alt"] = (k4 + 2, k5, k6 + 3)
    return check_degeneration("correction-ratio", params, tol)


_DRAWERS: dict[str, Callable[[random.Random, int, float], ResidualReport]] = {
    "stochasticity/six-vertex": _draw_stoch_six_vertex,
    "stochasticity/elliptic": _draw_stoch_elliptic,
    "stochasticity/rank": _draw_stoch_rank,
    "stochasticity/tetra-S": _draw_stoch_tetra_s,
    "stochasticity/tetra-T": _draw_stoch_tetra_t,
    "ybe/six-vertex-w": _draw_ybe_six_vertex("six-vertex-w"),
    "ybe/six-vertex-chi": _draw_ybe_six_vertex("six-vertex-chi"),
    "ybe/six-vertex-S": _draw_ybe_six_vertex("six-vertex-S"),
    "ybe/elliptic-W": _draw_ybe_elliptic("elliptic-W"),
    "ybe/elliptic-S": _draw_ybe_elliptic("elliptic-S"),
    "ybe/rank-U": _draw_ybe_rank_plain("rank-U"),
    "ybe/rank-W": _draw_ybe_rank_plain("rank-W"),
    "ybe/rank-S": _draw_ybe_rank_s,
    "tetrahedron/plain-R": _draw_tetra("plain-R"),
    "tetrahedron/dynamical-S": _draw_tetra("dynamical-S"),
    "tetrahedron/nondyn-T": _draw_tetra("nondyn-T"),
    "identity/theta-quartic": _draw_theta_quartic,
    "identity/vandermonde-chu": _draw_vandermonde_chu,
    "identity/q-heine": _draw_q_heine,
    "identity/elliptic-jackson": _draw_elliptic_jackson,
    "identity/poch-merge": _draw_poch_merge,
    "degeneration/six-vertex-v0": _draw_deg_six_vertex_v0,
    "degeneration/elliptic-trig-limit": _draw_deg_trig,
    "degeneration/tetra-q1": _draw_deg_tetra_q1,
    "degeneration/rank-L1-closed-form": _draw_deg_rank_l1,
    "degeneration/elliptic-frozen": _draw_deg_elliptic_frozen,
    "degeneration/correction-ratio": _draw_deg_correction,
}


def _failure(kind: str, message: str) -> ResidualReport:
    nan = float("nan")
    return ResidualReport(
        equation_id=kind,
        lhs=complex(nan, nan),
        rhs=complex(nan, nan),
        residual_abs=float("inf"),
        residual_rel=float("inf"),
        term_count=0,
        params={"error": message},
        passed=False,
    )


def sweep(plan: Iterable[tuple]) -> list[ResidualReport]:
    """Run a plan of seeded random checks and collect every report.

    Each plan entry is ``(kind, draws, seed, tol)`` where ``kind`` names
    a registered check.  Draws that land on a pole are rejected and
    redrawn, up to :data:`MAX_REDRAWS` times; any other error inside a
    check becomes a failed report.  The sweep never aborts, and the
    report list follows the plan order, so identical plans give
    identical output.
    """
    reports = []
    for kind, draws, seed, tol in plan:
        drawer = _DRAWERS.get(kind)
        if drawer is None:
            reports.extend(
                _failure(kind, f"unknown check kind {kind!r}")
                for _ in range(draws)
            )
            continue
        rng = random.Random(seed)
        for index in range(draws):
            reports.append(_run_one(kind, drawer, rng, index, tol))
    return reports


def _run_one(kind, drawer, rng, index, tol):
    last = "no draw attempted"
    for _ in range(MAX_REDRAWS):
        try:
            return drawer(rng, index, tol)
        except PoleError as exc:
            last = str(exc)
        except Exception as exc:  # noqa: BLE001 - sweeps must not abort
            return _failure(kind, f"{type(exc).__name__}: {exc}")
    return _failure(kind, f"pole persisted through {MAX_REDRAWS} redraws: {last}")


def default_plan(seed: int = 0) -> list[tuple]:
    """The full verification plan: every family, acceptance-scale draws."""
    entries = [
        ("identity/theta-quartic", 100, 1e-9),
        ("identity/poch-merge", 100, 1e-9),
        ("identity/vandermonde-chu", 100, 1e-9),
        ("identity/q-heine", 100, 1e-9),
        ("identity/elliptic-jackson", 100, 1e-9),
        ("stochasticity/six-vertex", 400, 1e-9),
        ("stochasticity/elliptic", 225, 1e-9),
        ("stochasticity/rank", 25 * len(_RANK_ROWS), 1e-9),
        ("stochasticity/tetra-S", 25, 1e-9),
        ("stochasticity/tetra-T", 25, 1e-9),
        ("ybe/six-vertex-w", 64, 1e-9),
        ("ybe/six-vertex-chi", 64, 1e-9),
        ("ybe/six-vertex-S", 64, 1e-9),
        ("ybe/elliptic-W", 10, 1e-9),
        ("ybe/elliptic-S", 10, 1e-9),
        ("ybe/rank-U", 12, 1e-9),
        ("ybe/rank-W", 12, 1e-9),
        ("ybe/rank-S", len(_RANK_S_GRID), 1e-9),
        ("tetrahedron/plain-R", 10, 1e-9),
        ("tetrahedron/dynamical-S", 10, 1e-9),
        ("tetrahedron/nondyn-T", 10, 1e-12),
        ("degeneration/six-vertex-v0", 5, 1e-12),
        ("degeneration/correction-ratio", 90, 1e-10),
        ("degeneration/elliptic-frozen", 25, 1e-10),
        ("degeneration/rank-L1-closed-form", 30, 1e-10),
        ("degeneration/elliptic-trig-limit", 4, 1e-4),
        ("degeneration/tetra-q1", 10, 1e-3),
    ]
    return [
        (kind, draws, seed + offset, tol)
        for offset, (kind, draws, tol) in enumerate(entries)
    ]
