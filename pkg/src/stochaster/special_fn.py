"""Scalar special functions underlying every vertex-weight family.

This module provides the first Jacobi theta function, the three flavors of
Pochhammer symbol (rational, basic, elliptic) together with their
negative-index reciprocal extensions, and terminating hypergeometric series
built from them, including the very-well-poised elliptic series.  All
functions operate on Python complex scalars; vectorization happens at the
caller's level where needed.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

__all__ = [
    "TRUNCATION_TOL",
    "THETA_TERM_CAP",
    "POLE_TOL",
    "WITNESS_TOL",
    "BALANCE_TOL",
    "PoleError",
    "ConvergenceError",
    "TerminationError",
    "EllipticContext",
    "theta1",
    "theta_scale",
    "pochhammer",
    "inv_qfactorial",
    "HypergeometricSpec",
    "hypergeometric",
    "vwp_elliptic",
    "is_balanced",
]

#: Relative magnitude below which a theta-series term is negligible.
TRUNCATION_TOL = 1e-16

#: Maximum number of theta-series terms on each side of j = 0.
THETA_TERM_CAP = 200

#: Threshold for a vanishing denominator factor (scale-relative for theta).
POLE_TOL = 1e-14

#: Tolerance for recognizing a termination witness among upper parameters.
WITNESS_TOL = 1e-12

#: Tolerance for the balancing condition of very-well-poised series.
BALANCE_TOL = 1e-10


class PoleError(ArithmeticError):
    """A denominator factor vanished to working precision."""


class ConvergenceError(ArithmeticError):
    """A series failed to settle within its term budget."""


class TerminationError(ValueError):
    """A hypergeometric series carries no valid termination witness."""


@dataclass(frozen=True)
class EllipticContext:
    """Modular data shared by all elliptic quantities.

    Attributes
    ----------
    tau : complex
        Modular parameter of the theta function; Im(tau) > 0 is required
        for the defining series to converge.
    eta : complex
        Crossing parameter entering every elliptic Pochhammer shift; must
        be nonzero.
    """

    tau: complex
    eta: complex

    def __post_init__(self) -> None:
        if complex(self.tau).imag <= 0:
            raise ValueError("theta series requires Im(tau) > 0")
        if complex(self.eta) == 0:
            raise ValueError("eta must be nonzero")


@lru_cache(maxsize=1 << 18)
def _theta1_raw(z: complex, tau: complex) -> complex:
    # Summed outward from j = 0 and j = -1 separately.  Terms can grow
    # before they decay when |Im z| is large, so the stopping rule is
    # relative to the largest magnitude seen, not to the running sum.
    total = 0j
    scale = 0.0
    for start, step in ((0, 1), (-1, -1)):
        j = start
        for _ in range(THETA_TERM_CAP):
            h = j + 0.5
            term = cmath.exp(1j * cmath.pi * (tau * h * h + 2.0 * h * (z + 0.5)))
            total += term
            mag = abs(term)
            if mag > scale:
                scale = mag
            if mag <= TRUNCATION_TOL * scale:
                break
            j += step
        else:
            raise ConvergenceError(
                f"theta series did not settle within {THETA_TERM_CAP} terms "
                f"per side at tau={tau}; Im(tau) may be too small"
            )
    return -total


def theta1(z: complex, ctx: EllipticContext) -> complex:
    r"""First Jacobi theta function.

    Evaluates

    .. math::

        f(z) = -\sum_{j \in \mathbb{Z}}
            \exp\Big(\pi \mathrm{i} \tau (j + \tfrac{1}{2})^2
            + 2 \pi \mathrm{i} (j + \tfrac{1}{2}) (z + \tfrac{1}{2})\Big),

    summed symmetrically until terms fall below ``TRUNCATION_TOL`` relative
    to the largest term encountered.  The function is odd, vanishes exactly
    on the lattice `Z + tau Z`, and satisfies
    ``exp(-pi i tau / 4) * f(z) -> 2 sin(pi z)`` as ``Im(tau) -> oo``.

    Parameters
    ----------
    z : complex
        Argument.
    ctx : EllipticContext
        Supplies the modular parameter ``tau``.

    Returns
    -------
    complex

    Raises
    ------
    ConvergenceError
        If more than ``THETA_TERM_CAP`` terms per side would be needed.
    """
    return _theta1_raw(complex(z), complex(ctx.tau))


def theta_scale(ctx: EllipticContext) -> float:
    """Magnitude of the leading theta-series term, ``exp(-pi Im(tau) / 4)``.

    Every theta value carries this overall scale, so zero tests on theta
    factors must be made relative to it rather than to 1.
    """
    return math.exp(-math.pi * complex(ctx.tau).imag / 4.0)


def _guard(factor: complex, tol: float, what: str) -> complex:
    if abs(factor) < tol:
        raise PoleError(f"denominator factor {what} vanished ({factor!r})")
    return factor


def _poch_rational(a: complex, k: int) -> complex:
    out = 1.0 + 0j
    if k >= 0:
        for j in range(k):
            out *= a + j
    else:
        for j in range(1, -k + 1):
            out /= _guard(a - j, POLE_TOL, f"(a - {j})")
    return out


def _poch_q(a: complex, k: int, q: complex) -> complex:
    out = 1.0 + 0j
    if k >= 0:
        for j in range(k):
            out *= 1.0 - q**j * a
    else:
        for j in range(1, -k + 1):
            out /= _guard(1.0 - q ** (-j) * a, POLE_TOL, f"(1 - q^-{j} a)")
    return out


def _poch_elliptic(a: complex, k: int, ctx: EllipticContext) -> complex:
    eta2 = 2.0 * complex(ctx.eta)
    tol = POLE_TOL * theta_scale(ctx)
    out = 1.0 + 0j
    if k >= 0:
        for j in range(k):
            out *= theta1(a - eta2 * j, ctx)
    else:
        for j in range(1, -k + 1):
            out /= _guard(theta1(a + eta2 * j, ctx), tol, f"f(a + 2 eta {j})")
    return out


def pochhammer(kind: str, a: complex, k: int, base_or_ctx=None) -> complex:
    r"""Pochhammer symbol of the given kind, extended to negative index.

    .. math::

        (a)_k = \prod_{j=0}^{k-1} (a + j), \qquad
        (a; q)_k = \prod_{j=0}^{k-1} (1 - q^j a), \qquad
        [a]_k = \prod_{j=0}^{k-1} f(a - 2 \eta j),

    for ``kind`` equal to ``"rational"``, ``"q"`` and ``"elliptic"``
    respectively.  ``base_or_ctx`` is the base ``q`` for the ``"q"`` kind and
    an :class:`EllipticContext` for the ``"elliptic"`` kind; it is ignored
    for ``"rational"``.

    Negative ``k`` extends through reciprocals, e.g.
    ``(a)_{-m} = prod_{j=1}^{m} (a - j)^{-1}``; a reciprocal factor within
    ``POLE_TOL`` of zero raises :class:`PoleError`.  ``k = 0`` gives 1.
    """
    if int(k) != k:
        raise ValueError(f"Pochhammer index must be an integer, got {k!r}")
    k = int(k)
    if kind == "rational":
        return _poch_rational(complex(a), k)
    if kind == "q":
        if base_or_ctx is None:
            raise ValueError('kind "q" requires the base as base_or_ctx')
        return _poch_q(complex(a), k, complex(base_or_ctx))
    if kind == "elliptic":
        if not isinstance(base_or_ctx, EllipticContext):
            raise ValueError('kind "elliptic" requires an EllipticContext')
        return _poch_elliptic(complex(a), k, base_or_ctx)
    raise ValueError(f"unknown Pochhammer kind {kind!r}")


def inv_qfactorial(m: int, q: complex) -> complex:
    """``1 / (q; q)_m`` with the convention that it vanishes for ``m < 0``.

    Off-support occupancies enter weight formulas through reciprocal
    q-factorials; this entry point returns exactly 0 for negative ``m``
    instead of reporting the pole that the plain symbol would hit.
    """
    if m < 0:
        return 0j
    den = _poch_q(complex(q), m, complex(q))
    return 1.0 / _guard(den, POLE_TOL, f"(q; q)_{m}")


@dataclass(frozen=True)
class HypergeometricSpec:
    """Description of a terminating hypergeometric sum.

    ``kind`` is one of ``"rational"``, ``"basic"``, ``"elliptic"``,
    ``"vwp-elliptic"``.  ``upper`` and ``lower`` are the numerator and
    denominator parameter tuples, ``argument`` the series argument, and
    ``termination_index`` the index at which the series truncates (it must
    be certified by a witness among the upper parameters).  Basic series
    require ``base``; the elliptic kinds require ``ctx``.  For
    ``"vwp-elliptic"``, ``upper`` is ``(a1, a6, ..., a_{r+1})`` and
    ``lower`` must be empty.
    """

    kind: str
    upper: tuple
    lower: tuple
    argument: complex
    termination_index: int
    base: complex | None = None
    ctx: EllipticContext | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "upper", tuple(self.upper))
        object.__setattr__(self, "lower", tuple(self.lower))
        if self.kind not in {"rational", "basic", "elliptic", "vwp-elliptic"}:
            raise ValueError(f"unknown series kind {self.kind!r}")
        if self.termination_index < 0:
            raise ValueError("termination_index must be nonnegative")
        if self.kind == "basic" and self.base is None:
            raise ValueError('kind "basic" requires base')
        if self.kind in {"elliptic", "vwp-elliptic"} and self.ctx is None:
            raise ValueError(f'kind {self.kind!r} requires ctx')
        if self.kind == "vwp-elliptic":
            if not self.upper:
                raise ValueError("vwp-elliptic needs at least the a1 parameter")
            if self.lower:
                raise ValueError("vwp-elliptic takes no lower parameters")


def _witness_target(spec: HypergeometricSpec) -> complex:
    r = spec.termination_index
    if spec.kind == "rational":
        return complex(-r)
    if spec.kind == "basic":
        return complex(spec.base) ** (-r)
    return 2.0 * complex(spec.ctx.eta) * r


def _require_witness(spec: HypergeometricSpec, candidates: tuple) -> None:
    target = _witness_target(spec)
    if not any(abs(complex(a) - target) <= WITNESS_TOL for a in candidates):
        raise TerminationError(
            f"no upper parameter equals the termination witness {target!r} "
            f"for index {spec.termination_index}"
        )


def hypergeometric(spec: HypergeometricSpec) -> complex:
    r"""Evaluate a terminating hypergeometric series.

    .. math::

        {}_pF_r : \sum_k \frac{z^k}{k!}
            \prod_j (a_j)_k \prod_j (b_j)_k^{-1}, \qquad
        {}_p\varphi_r : \sum_k \frac{z^k}{(q; q)_k}
            \prod_j (a_j; q)_k \prod_j (b_j; q)_k^{-1}, \qquad
        {}_pe_r : \sum_k \frac{z^k}{[-2\eta]_k}
            \prod_j [a_j]_k \prod_j [b_j]_k^{-1},

    for kinds ``"rational"``, ``"basic"``, ``"elliptic"``; the kind
    ``"vwp-elliptic"`` delegates to :func:`vwp_elliptic`.  The sum runs over
    ``0 <= k <= termination_index``, which must be certified by an upper
    parameter equal (within ``WITNESS_TOL``) to ``-r``, ``q^{-r}`` or
    ``2 eta r`` respectively.

    Raises
    ------
    TerminationError
        If no upper parameter certifies the claimed termination index.
    PoleError
        If a lower-parameter factor vanishes before termination.
    """
    if spec.kind == "vwp-elliptic":
        _require_witness(
            HypergeometricSpec(
                kind="elliptic",
                upper=spec.upper[1:],
                lower=(),
                argument=spec.argument,
                termination_index=spec.termination_index,
                ctx=spec.ctx,
            ),
            spec.upper[1:],
        )
        return vwp_elliptic(
            spec.upper[0], spec.upper[1:], spec.argument, spec.ctx,
            spec.termination_index,
        )

    _require_witness(spec, spec.upper)
    z = complex(spec.argument)
    upper = tuple(complex(a) for a in spec.upper)
    lower = tuple(complex(b) for b in spec.lower)

    if spec.kind == "basic":
        q = complex(spec.base)
    elif spec.kind == "elliptic":
        eta2 = 2.0 * complex(spec.ctx.eta)
        tol = POLE_TOL * theta_scale(spec.ctx)

    total = 1.0 + 0j
    term = 1.0 + 0j
    for k in range(spec.termination_index):
        num = z
        den = 1.0 + 0j
        if spec.kind == "rational":
            for a in upper:
                num *= a + k
            den = _guard(k + 1.0 + 0j, POLE_TOL, "k!")
            for b in lower:
                den *= _guard(b + k, POLE_TOL, f"({b} + {k})")
        elif spec.kind == "basic":
            qk = q**k
            for a in upper:
                num *= 1.0 - qk * a
            den = _guard(1.0 - q ** (k + 1), POLE_TOL, "(q; q)_k")
            for b in lower:
                den *= _guard(1.0 - qk * b, POLE_TOL, f"(1 - q^{k} b)")
        else:
            for a in upper:
                num *= theta1(a - eta2 * k, spec.ctx)
            den = _guard(
                theta1(-eta2 * (k + 1), spec.ctx), tol, "[-2 eta]_k"
            )
            for b in lower:
                den *= _guard(theta1(b - eta2 * k, spec.ctx), tol, "[b]_k")
        term *= num / den
        total += term
    return total


def vwp_elliptic(a1: complex, tail, z: complex, ctx: EllipticContext,
                 termination_index: int) -> complex:
    r"""Very-well-poised terminating elliptic hypergeometric series.

    .. math::

        {}_{r+1}v_r(a_1; a_6, \ldots, a_{r+1}; z) = \sum_{k \ge 0}
            z^k \frac{[a_1]_k}{[-2\eta]_k}
            \frac{f(a_1 - 4 \eta k)}{f(a_1)}
            \prod_{j=6}^{r+1} \frac{[a_j]_k}{[a_1 - a_j - 2\eta]_k},

    summed over ``0 <= k <= termination_index``.  A witness entry equal to
    ``2 eta r`` (within ``WITNESS_TOL``) must be present in ``tail``.
    """
    r = int(termination_index)
    a1 = complex(a1)
    tail = tuple(complex(a) for a in tail)
    z = complex(z)
    eta2 = 2.0 * complex(ctx.eta)
    target = eta2 * r
    if not any(abs(a - target) <= WITNESS_TOL for a in tail):
        raise TerminationError(
            f"no tail parameter equals the termination witness {target!r}"
        )
    tol = POLE_TOL * theta_scale(ctx)
    f_a1 = _guard(theta1(a1, ctx), tol, "f(a1)")

    total = 1.0 + 0j
    num = 1.0 + 0j
    den = 1.0 + 0j
    zpow = 1.0 + 0j
    for k in range(1, r + 1):
        num *= theta1(a1 - eta2 * (k - 1), ctx)
        for a in tail:
            num *= theta1(a - eta2 * (k - 1), ctx)
        den *= _guard(theta1(-eta2 * k, ctx), tol, "[-2 eta]_k")
        for a in tail:
            den *= _guard(
                theta1(a1 - a - eta2 * k, ctx), tol, "[a1 - a_j - 2 eta]_k"
            )
        zpow *= z
        total += zpow * (num / den) * theta1(a1 - 2.0 * eta2 * k, ctx) / f_a1
    return total


def is_balanced(a1: complex, tail, r: int, ctx: EllipticContext) -> bool:
    """Whether a very-well-poised parameter set is balanced.

    Checks ``(r - 5)(a1 - 2 eta) / 2 == sum(tail) - 2 eta`` within
    ``BALANCE_TOL``; ``tail`` must hold the ``r - 4`` entries
    ``(a_6, ..., a_{r+1})``.
    """
    tail = tuple(complex(a) for a in tail)
    if len(tail) != r - 4:
        raise ValueError(f"expected {r - 4} tail entries, got {len(tail)}")
    eta2 = 2.0 * complex(ctx.eta)
    lhs = (r - 5) * (complex(a1) - eta2) / 2.0
    rhs = sum(tail) - eta2
    return abs(lhs - rhs) <= BALANCE_TOL
