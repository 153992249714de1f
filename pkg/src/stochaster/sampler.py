"""Seeded Monte Carlo growth of stochastic path ensembles.

A lattice sweep visits the vertices of a ``width x height`` grid bottom
row first, left to right, then row by row upward, so every incoming
edge and every face-local dynamical value is determined before its
vertex is visited.  At each vertex the outgoing configuration is drawn
from the stochastic weights, which must form a probability distribution
there; the dynamical values then propagate to the neighboring faces by
the family's shift rules.  The anchor values ``(lam0, v0)`` live on the
bottom-right face, exactly where the sweep starts: ``v`` grows toward
the west and north, ``lam`` toward the west (along the bottom) and the
north-east.

Randomness comes from a counter-based generator with one substream per
vertex, keyed by ``(seed, row, col)``, so output is reproducible no
matter how draws are scheduled.  The elliptic family has no guaranteed
positivity region; it is sampled through the same per-vertex
distribution check as everything else, and a run that leaves the
probabilistic regime fails with the offending vertex rather than
silently producing weights outside [0, 1].
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Sequence

import numpy as np

from .special_fn import EllipticContext
from .sixvertex import ArrowConfig, weight_s6v
from .elliptic import EllipticVertexParams, weight_S_elliptic
from .higher_rank import ColoredConfig, Composition, weight_S_rank
from .tetrahedron import TetraConfig, weight_T_tetra

__all__ = [
    "PRESETS",
    "NonProbabilisticWeightError",
    "LatticeDomain",
    "HeightField",
    "sample_lattice",
    "sample_tetra_T",
    "empirical_vertex_dist",
]

#: Absolute tolerance for the per-vertex probability check.
PROB_TOL = 1e-9

#: Documented parameter presets that keep every visited vertex
#: probabilistic (``v`` entries are the anchor values).
PRESETS = {
    "six-vertex": {"x": 1.7, "y": 0.6, "q": 0.35, "v": 0.2},
    "rank-colored": {"n": 2, "L": 1, "M": 1, "x": 1.4, "y": 0.3,
                     "q": 0.45, "v": 0.2},
    "tetra-T": {"v": 0.55},
}


class NonProbabilisticWeightError(ValueError):
    """The outgoing weights at a visited vertex are not a distribution."""


@dataclass(frozen=True)
class LatticeDomain:
    """A finite grid with incoming arrows and anchored dynamical values.

    ``boundary`` maps ``"bottom"`` to the incoming vertical edge states
    of the bottom row (one per column) and ``"left"`` to the incoming
    horizontal edge states of the left column (one per row).  Edge
    states are occupation numbers, or compositions for the colored
    family.  ``initial_dynamical`` is ``(lam0, v0)`` on the bottom-right
    face; ``lam0`` is ``None`` for families without a face parameter.
    """

    width: int
    height: int
    boundary: Mapping[str, Sequence]
    initial_dynamical: tuple

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError("domain dimensions must be positive")
        for side, size in (("bottom", self.width), ("left", self.height)):
            if side not in self.boundary:
                raise ValueError(f"boundary is missing the {side!r} side")
            if len(self.boundary[side]) != size:
                raise ValueError(
                    f"{side} boundary needs {size} entries, "
                    f"got {len(self.boundary[side])}"
                )
        if len(self.initial_dynamical) != 2:
            raise ValueError("initial_dynamical must be (lam0, v0)")


@dataclass(frozen=True)
class HeightField:
    """A sampled configuration grid with its face-value grids.

    ``grid[row][col]`` is the vertex configuration (row 0 at the
    bottom); ``v_faces`` and ``lam_faces`` hold the dynamical values on
    the ``(height+1) x (width+1)`` face grid, ``lam_faces`` being
    ``None`` for families without a face parameter.  ``params`` records
    the family constants the field was sampled with.
    """

    family: str
    width: int
    height: int
    grid: tuple
    v_faces: tuple
    lam_faces: tuple | None
    params: dict

    def conservation_ok(self) -> bool:
        """Whether arrows are conserved and neighbors hand off exactly."""
        for r, row in enumerate(self.grid):
            for c, cfg in enumerate(row):
                in_v, in_h, out_v, out_h = _edges(cfg)
                if _total(in_v) + _total(in_h) != _total(out_v) + _total(out_h):
                    return False
                if isinstance(cfg, ColoredConfig) and cfg.A + cfg.B != cfg.C + cfg.D:
                    return False
                if r > 0 and _edges(self.grid[r - 1][c])[2] != in_v:
                    return False
                if c > 0 and _edges(row[c - 1])[3] != in_h:
                    return False
        return True

    def propagation_ok(self) -> bool:
        """Whether replaying the shift rules reproduces the face grids."""
        bottom = tuple(_edges(cfg)[0] for cfg in self.grid[0])
        lam0 = self.lam_faces[0][-1] if self.lam_faces is not None else None
        v0 = self.v_faces[0][-1]

        def replay(r, c, i1, j1, lam, v):
            return self.grid[r][c]

        _, v_faces, lam_faces = _lattice_pass(
            self.family, self.params, self.width, self.height,
            bottom, tuple(_edges(row[0])[1] for row in self.grid),
            lam0, v0, replay,
        )
        return v_faces == self.v_faces and lam_faces == self.lam_faces

    def to_csv(self) -> str:
        """Vertex rows as ``row,col,i1,j1,i2,j2`` plus color columns."""
        colored = self.family == "rank-colored"
        header = "row,col,i1,j1,i2,j2"
        if colored:
            header += ",color_in_v,color_in_h,color_out_v,color_out_h"
        lines = [header]
        for r, row in enumerate(self.grid):
            for c, cfg in enumerate(row):
                edges = _edges(cfg)
                cells = [str(r), str(c)] + [str(_total(e)) for e in edges]
                if colored:
                    cells += [":".join(str(k) for k in e) for e in edges]
                lines.append(",".join(cells))
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        """The grids as a JSON document with stable keys."""
        def edge_value(state):
            return list(state) if isinstance(state, Composition) else state

        grid = [
            [
                dict(zip(("i1", "j1", "i2", "j2"),
                         (edge_value(e) for e in _edges(cfg))))
                for cfg in row
            ]
            for row in self.grid
        ]
        faces = {"v": [[_json_complex(v) for v in row] for row in self.v_faces]}
        if self.lam_faces is not None:
            faces["lam"] = [
                [_json_complex(v) for v in row] for row in self.lam_faces
            ]
        doc = {
            "family": self.family,
            "width": self.width,
            "height": self.height,
            "params": {k: _json_complex(v) for k, v in self.params.items()},
            "grid": grid,
            "faces": faces,
        }
        return json.dumps(doc)


def _json_complex(value):
    if isinstance(value, complex):
        return value.real if value.imag == 0 else f"{value.real}{value.imag:+}i"
    return value


def _edges(cfg) -> tuple:
    if isinstance(cfg, ColoredConfig):
        return (cfg.A, cfg.B, cfg.C, cfg.D)
    return (cfg.i1, cfg.j1, cfg.i2, cfg.j2)


def _total(state) -> int:
    return state.size() if isinstance(state, Composition) else state


def _uniform(seed: int, rep: int, row: int, col: int) -> float:
    gen = np.random.Generator(
        np.random.Philox(key=seed, counter=[rep, 0, row, col])
    )
    return gen.random()


def _pick(probs: Sequence[float], u: float) -> int:
    acc = 0.0
    for index, p in enumerate(probs):
        acc += p
        if u < acc:
            return index
    return len(probs) - 1


def _check_distribution(weights, where, params) -> list[float]:
    total = sum(w.real for w in weights)
    bad = (
        any(abs(w.imag) > PROB_TOL for w in weights)
        or any(w.real < -PROB_TOL for w in weights)
        or abs(total - 1.0) > PROB_TOL
    )
    if bad:
        raise NonProbabilisticWeightError(
            f"outgoing weights at vertex {where} are not a distribution: "
            f"{[complex(w) for w in weights]} (sum {total}) with params {params}"
        )
    return [max(w.real, 0.0) for w in weights]


# ---------------------------------------------------------------------------
# Family rules: outgoing rows and face shifts


def _rules(family: str, params: dict):
    """Row enumeration, boundary checks and face shifts for a family."""
    if family == "six-vertex":
        x, y, q, = params["x"], params["y"], params["q"]

        def check_edge(state, side):
            if state not in (0, 1):
                raise ValueError(f"{side} edge state {state!r} exceeds capacity 1")

        def row(i1, j1, lam, v):
            out = []
            for j2 in (0, 1):
                i2 = i1 + j1 - j2
                if i2 in (0, 1):
                    cfg = ArrowConfig(i1, j1, i2, j2)
                    out.append((cfg, weight_s6v(cfg, x, y, q, v)))
            return out

        def v_west(v, state):
            return q**state * v

        def v_north(v, state):
            return q**state * v

        return check_edge, row, v_west, v_north, None, None, None

    if family == "elliptic":
        J, Lam = params["J"], params["Lambda"]
        x, y = params["x"], params["y"]
        ctx = EllipticContext(tau=params["tau"], eta=params["eta"])
        h = 2 * ctx.eta

        def check_edge(state, side):
            cap = Lam if side == "bottom" else J
            if not 0 <= state <= cap:
                raise ValueError(
                    f"{side} edge state {state!r} exceeds capacity {cap}"
                )

        def row(i1, j1, lam, v):
            p = EllipticVertexParams(J=J, Lambda=Lam, lam=lam, x=x, y=y, v=v)
            out = []
            for j2 in range(min(J, i1 + j1) + 1):
                i2 = i1 + j1 - j2
                if i2 > Lam:
                    continue
                cfg = ArrowConfig(i1, j1, i2, j2)
                out.append((cfg, weight_S_elliptic(p, cfg, ctx)))
            return out

        def v_west(v, state):
            return v - h * state

        def v_north(v, state):
            return v - h * state

        def lam_west(lam, state):
            return lam - h * (2 * state - Lam)

        def lam_north(lam, state):
            return lam - h * (2 * state - J)

        def lam_east(lam, state):
            return lam + h * (2 * state - Lam)

        return check_edge, row, v_west, v_north, lam_west, lam_north, lam_east

    if family == "rank-colored":
        n, L, M = params["n"], params["L"], params["M"]
        x, y, q = params["x"], params["y"], params["q"]
        out_states = [
            Composition(parts)
            for parts in _tuples_summing(n + 1, L)
        ]

        def check_edge(state, side):
            size = M if side == "bottom" else L
            if not isinstance(state, Composition):
                raise ValueError(f"{side} edge state {state!r} is not a composition")
            if len(state) != n + 1 or not state.valid() or state.size() != size:
                raise ValueError(
                    f"{side} edge state {tuple(state)} is not a valid "
                    f"composition of {size} into {n + 1} colors"
                )

        def row(A, B, lam, v):
            out = []
            for D in out_states:
                C = A + B - D
                if not C.valid():
                    continue
                cfg = ColoredConfig(A, B, C, D)
                out.append((cfg, weight_S_rank(L, M, cfg, x, y, v, q)))
            return out

        def v_west(v, state):
            return q ** (M - state[0]) * v

        def v_north(v, state):
            return q ** (L - state[0]) * v

        return check_edge, row, v_west, v_north, None, None, None

    raise ValueError(f"unknown sampling family {family!r}")


def _tuples_summing(length: int, size: int):
    if length == 1:
        yield (size,)
        return
    for head in range(size + 1):
        for tail in _tuples_summing(length - 1, size - head):
            yield (head,) + tail


def _lattice_pass(
    family: str,
    params: dict,
    width: int,
    height: int,
    bottom: Sequence,
    left: Sequence,
    lam0,
    v0,
    choose: Callable,
):
    """Shared sweep engine for sampling and for replay verification.

    ``choose(r, c, i1, j1, lam, v)`` returns the vertex configuration;
    the engine derives the incoming edges, keeps the face grids in step
    and returns ``(grid, v_faces, lam_faces)`` as nested tuples.
    """
    check_edge, row_fn, v_west, v_north, lam_west, lam_north, lam_east = _rules(
        family, params
    )
    has_lam = lam_west is not None
    v_faces = [[None] * (width + 1) for _ in range(height + 1)]
    lam_faces = [[None] * (width + 1) for _ in range(height + 1)] if has_lam else None

    # the anchor sits on the bottom-right face; the bottom boundary
    # arrows carry it west along the bottom face row
    v_faces[0][width] = complex(v0)
    if has_lam:
        lam_faces[0][width] = complex(lam0)
    for c in range(width - 1, -1, -1):
        v_faces[0][c] = v_west(v_faces[0][c + 1], bottom[c])
        if has_lam:
            lam_faces[0][c] = lam_west(lam_faces[0][c + 1], bottom[c])

    grid = []
    for r in range(height):
        row = []
        for c in range(width):
            i1 = bottom[c] if r == 0 else _edges(grid[r - 1][c])[2]
            j1 = left[r] if c == 0 else _edges(row[c - 1])[3]
            if has_lam:
                lam_faces[r + 1][c] = lam_north(lam_faces[r][c], _total(j1))
            lam = lam_faces[r + 1][c] if has_lam else None
            cfg = choose(r, c, i1, j1, lam, v_faces[r][c + 1])
            row.append(cfg)
            out_v, out_h = _edges(cfg)[2], _edges(cfg)[3]
            v_faces[r + 1][c + 1] = v_north(v_faces[r][c + 1], out_h)
            if has_lam:
                lam_faces[r + 1][c + 1] = lam_east(
                    lam_faces[r + 1][c], _total(out_v)
                )
        v_faces[r + 1][0] = v_west(v_faces[r + 1][1], _edges(row[0])[2])
        grid.append(row)

    freeze = lambda rows: tuple(tuple(entry) for entry in rows)
    return (
        freeze(grid),
        freeze(v_faces),
        freeze(lam_faces) if has_lam else None,
    )


def sample_lattice(
    family: str, domain: LatticeDomain, params: dict, seed: int
) -> HeightField:
    """Draw a full lattice configuration from the stochastic weights.

    Vertices are visited bottom row first, left to right, each drawing
    its outgoing edges from its exact outgoing distribution under the
    local dynamical values.  The run aborts with
    :class:`NonProbabilisticWeightError` if any visited vertex's weights
    are not real, nonnegative and summing to 1 within ``1e-9``, and with
    ``ValueError`` if the boundary violates the family's capacities.
    Identical inputs give identical fields.
    """
    check_edge, row_fn, *_ = _rules(family, params)
    bottom = tuple(domain.boundary["bottom"])
    left = tuple(domain.boundary["left"])
    for state in bottom:
        check_edge(state, "bottom")
    for state in left:
        check_edge(state, "left")
    lam0, v0 = domain.initial_dynamical
    if (lam0 is None) == (family == "elliptic"):
        raise ValueError("lam0 is required exactly for the elliptic family")

    def choose(r, c, i1, j1, lam, v):
        outcomes = row_fn(i1, j1, lam, v)
        probs = _check_distribution(
            [w for _, w in outcomes], (r, c), params
        )
        return outcomes[_pick(probs, _uniform(seed, 0, r, c))][0]

    grid, v_faces, lam_faces = _lattice_pass(
        family, params, domain.width, domain.height,
        bottom, left, lam0, v0, choose,
    )
    return HeightField(
        family=family, width=domain.width, height=domain.height,
        grid=grid, v_faces=v_faces, lam_faces=lam_faces, params=dict(params),
    )


def sample_tetra_T(shape, boundary, v: float, seed: int):
    """Grow a three-dimensional splitting configuration.

    ``shape`` is the box ``(X, Y, Z)``; ``boundary`` maps ``"axis1"``,
    ``"axis2"`` and ``"axis3"`` to the incoming counts on the three
    entry faces (indexed ``[y][z]``, ``[x][z]`` and ``[x][y]``).  At
    each vertex the axis-1 and axis-3 arrows pass straight through,
    while every axis-2 arrow independently continues with probability
    ``v`` and otherwise splits into one axis-1 and one axis-3 arrow.
    Returns the ``[x][y][z]`` grid of vertex configurations.
    """
    X, Y, Z = (int(d) for d in shape)
    if min(X, Y, Z) < 1:
        raise ValueError("box dimensions must be positive")
    if not 0 < v <= 1:
        raise ValueError("continuation probability must lie in (0, 1]")
    sizes = {"axis1": (Y, Z), "axis2": (X, Z), "axis3": (X, Y)}
    for axis, (rows, cols) in sizes.items():
        face = boundary.get(axis)
        if face is None or len(face) != rows or any(
            len(line) != cols for line in face
        ):
            raise ValueError(f"{axis} boundary must be a {rows}x{cols} grid")
        if any(int(k) < 0 or int(k) != k for line in face for k in line):
            raise ValueError(f"{axis} boundary counts must be nonnegative integers")

    grid = [[[None] * Z for _ in range(Y)] for _ in range(X)]
    for x in range(X):
        for y in range(Y):
            for z in range(Z):
                n1 = boundary["axis1"][y][z] if x == 0 else grid[x - 1][y][z].n1p
                n2 = boundary["axis2"][x][z] if y == 0 else grid[x][y - 1][z].n2p
                n3 = boundary["axis3"][x][y] if z == 0 else grid[x][y][z - 1].n3p
                gen = np.random.Generator(
                    np.random.Philox(key=seed, counter=[0, x, y, z])
                )
                n2p = int(gen.binomial(n2, v)) if n2 else 0
                splits = n2 - n2p
                grid[x][y][z] = TetraConfig(
                    n1, n2, n3, n1 + splits, n2p, n3 + splits
                )
    return tuple(tuple(tuple(line) for line in plane) for plane in grid)


def empirical_vertex_dist(
    family: str, incoming, params: dict, N: int, seed: int
) -> dict:
    """Frequencies of ``N`` independent single-vertex draws.

    The outcome keys are the outgoing edge states; the values are exact
    fractions with denominator ``N``, so they sum to 1 exactly.  Every
    enumerable outcome appears, including ones never drawn.
    """
    if N < 1:
        raise ValueError("N must be positive")
    if family == "tetra-T":
        n1, n2, n3 = incoming
        outcomes = []
        for n2p in range(min(n1 + n2, n2 + n3) + 1):
            cfg = TetraConfig(n1, n2, n3, n1 + n2 - n2p, n2p, n2 + n3 - n2p)
            outcomes.append((cfg, weight_T_tetra(cfg, params["v"])))
    else:
        _, row_fn, *_ = _rules(family, params)
        if family == "rank-colored":
            incoming = tuple(
                s if isinstance(s, Composition) else Composition(tuple(s))
                for s in incoming
            )
        outcomes = row_fn(*incoming, params.get("lam"), params["v"])
    probs = _check_distribution([w for _, w in outcomes], (0, 0), params)
    counts = [0] * len(outcomes)
    for rep in range(N):
        counts[_pick(probs, _uniform(seed, rep, 0, 0))] += 1

    def key(cfg):
        if isinstance(cfg, TetraConfig):
            return (cfg.n1p, cfg.n2p, cfg.n3p)
        if isinstance(cfg, ColoredConfig):
            return (tuple(cfg.C), tuple(cfg.D))
        return (cfg.i2, cfg.j2)

    return {
        key(cfg): Fraction(count, N)
        for (cfg, _), count in zip(outcomes, counts)
    }
