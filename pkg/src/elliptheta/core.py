"""Contour quadrature, Z-indexed series summation and truncated double products.

Everything here is generic plumbing: callers supply the integrand/term/factor
and a Truncation; results come back as EvalResult with a defensible error
estimate (node doubling for quadrature, boundary terms for series/products).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .types import (
    DivergenceError,
    EvalResult,
    PoleError,
    Truncation,
)

_GAUSS_ORDER = 16
_gauss_cache: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _gauss(order: int) -> tuple[np.ndarray, np.ndarray]:
    if order not in _gauss_cache:
        _gauss_cache[order] = np.polynomial.legendre.leggauss(order)
    return _gauss_cache[order]


# ----------------------------------------------------------------- contours


@dataclass(frozen=True)
class Indent:
    """One indentation of a unit segment around a (near-)path pole.

    side is the side of the pole the path passes on: "below" leaves the pole
    above the contour, "above" leaves it below.  For a pole off the base line
    the indentation is realized as the homotopic base path plus a small loop
    around the pole (the connecting slit cancels), which is what pieces()
    emits.
    """

    center: complex
    radius: float
    side: str  # "below" | "above"


@dataclass(frozen=True)
class Contour:
    """A parameterized integration path in the complex plane.

    kinds:
      segment          -- straight path a -> b
      shifted_segment  -- offset -> offset + 1
      indented_segment -- base_start -> base_start + 1 with indentations
      eta_line         -- x -> eta * x, x in [-radius, radius]
    """

    kind: str
    a: complex = 0.0
    b: complex = 1.0
    offset: complex = 0.0
    base_start: complex = 0.0
    indents: tuple[Indent, ...] = ()
    eta: complex = 0.0
    radius: float = 0.0
    refine_near: tuple[complex, ...] = ()

    @staticmethod
    def segment(a: complex, b: complex, refine_near: Sequence[complex] = ()) -> "Contour":
        return Contour(kind="segment", a=complex(a), b=complex(b), refine_near=tuple(refine_near))

    @staticmethod
    def shifted_segment(offset: complex, refine_near: Sequence[complex] = ()) -> "Contour":
        return Contour(kind="shifted_segment", offset=complex(offset), refine_near=tuple(refine_near))

    @staticmethod
    def indented_segment(
        indents: Sequence[Indent], base_start: complex = 0.0, refine_near: Sequence[complex] = ()
    ) -> "Contour":
        ind = tuple(indents)
        on_path = [i for i in ind if abs(i.center.imag - complex(base_start).imag) < 1e-12]
        for x, y in zip(on_path, on_path[1:]):
            gap = abs(y.center.real - x.center.real)
            if x.radius + y.radius >= gap:
                raise ValueError("indentation radii overlap between consecutive centers")
        for i in ind:
            if i.radius <= 0:
                raise ValueError("indentation radius must be > 0")
            if i.side not in ("below", "above"):
                raise ValueError(f"bad indent side {i.side!r}")
        return Contour(kind="indented_segment", indents=ind, base_start=complex(base_start),
                       refine_near=tuple(refine_near))

    @staticmethod
    def eta_line(eta: complex, radius: float) -> "Contour":
        if eta == 0:
            raise ValueError("eta_line requires eta != 0")
        return Contour(kind="eta_line", eta=complex(eta), radius=float(radius))


@dataclass(frozen=True)
class _Line:
    a: complex
    b: complex
    refine: tuple[complex, ...] = ()


@dataclass(frozen=True)
class _Arc:
    center: complex
    radius: float
    th0: float
    th1: float


@dataclass(frozen=True)
class _Loop:
    center: complex
    radius: float
    ccw: bool


def _pieces(contour: Contour) -> list:
    if contour.kind == "segment":
        return [_Line(contour.a, contour.b, contour.refine_near)]
    if contour.kind == "shifted_segment":
        return [_Line(contour.offset, contour.offset + 1.0, contour.refine_near)]
    if contour.kind == "eta_line":
        e = contour.eta
        return [_Line(-contour.radius * e, contour.radius * e)]
    if contour.kind == "indented_segment":
        s = contour.base_start
        base_im = s.imag
        on_path = sorted(
            (i for i in contour.indents if abs(i.center.imag - base_im) < 1e-12),
            key=lambda i: i.center.real,
        )
        off_path = [i for i in contour.indents if abs(i.center.imag - base_im) >= 1e-12]
        pieces: list = []
        cur = s
        for ind in on_path:
            c, r = ind.center, ind.radius
            pieces.append(_Line(cur, c - r, contour.refine_near))
            if ind.side == "below":
                pieces.append(_Arc(c, r, np.pi, 2 * np.pi))
            else:
                pieces.append(_Arc(c, r, np.pi, 0.0))
            cur = c + r
        pieces.append(_Line(cur, s + 1.0, contour.refine_near))
        for ind in off_path:
            below_path = ind.center.imag < base_im
            if ind.side == "below" and below_path:
                # path must dip below this pole: straight cycle + ccw loop
                pieces.append(_Loop(ind.center, ind.radius, ccw=True))
            elif ind.side == "above" and not below_path:
                pieces.append(_Loop(ind.center, ind.radius, ccw=False))
            # pole already on the requested side: base path suffices
        return pieces
    raise ValueError(f"unknown contour kind {contour.kind!r}")


def _line_breakpoints(line: _Line, n_panels: int) -> np.ndarray:
    """Panel breakpoints in [0,1], geometrically refined toward near poles."""
    pts = set(np.linspace(0.0, 1.0, max(2, n_panels + 1)))
    d = line.b - line.a
    length = abs(d)
    if length == 0:
        return np.array([0.0, 1.0])
    for p in line.refine:
        s = ((p - line.a) / d).real  # projection parameter
        dist = abs(line.a + s * d - p) / length
        if -0.2 < s < 1.2 and dist < 0.2:
            h = max(dist, 1e-4)
            while h < 0.5:
                for q in (s - h, s + h):
                    if 1e-12 < q < 1 - 1e-12:
                        pts.add(q)
                h *= 2.0
    return np.array(sorted(pts))


def contour_nodes(contour: Contour, quad_points: int) -> tuple[np.ndarray, np.ndarray]:
    """Flatten a contour into quadrature nodes and complex weights.

    sum(w * f(nodes)) approximates the path integral of f.
    """
    xg, wg = _gauss(_GAUSS_ORDER)
    nodes: list[np.ndarray] = []
    weights: list[np.ndarray] = []
    for piece in _pieces(contour):
        if isinstance(piece, _Line):
            n_panels = max(2, quad_points // _GAUSS_ORDER)
            bp = _line_breakpoints(piece, n_panels)
            d = piece.b - piece.a
            for lo, hi in zip(bp[:-1], bp[1:]):
                mid = 0.5 * (lo + hi)
                half = 0.5 * (hi - lo)
                s = mid + half * xg
                nodes.append(piece.a + s * d)
                weights.append(wg * half * d)
        elif isinstance(piece, _Arc):
            n_panels = max(1, quad_points // (4 * _GAUSS_ORDER))
            bp = np.linspace(piece.th0, piece.th1, n_panels + 1)
            for lo, hi in zip(bp[:-1], bp[1:]):
                mid = 0.5 * (lo + hi)
                half = 0.5 * (hi - lo)
                th = mid + half * xg
                z = piece.center + piece.radius * np.exp(1j * th)
                nodes.append(z)
                weights.append(wg * half * 1j * piece.radius * np.exp(1j * th))
        elif isinstance(piece, _Loop):
            n = max(32, quad_points // 2)
            th = 2 * np.pi * np.arange(n) / n
            z = piece.center + piece.radius * np.exp(1j * th)
            dz = 1j * piece.radius * np.exp(1j * th) * (2 * np.pi / n)
            if not piece.ccw:
                dz = -dz
            nodes.append(z)
            weights.append(dz)
        else:  # pragma: no cover
            raise TypeError(piece)
    return np.concatenate(nodes), np.concatenate(weights)


def _eval_vectorized(f: Callable, z: np.ndarray) -> np.ndarray:
    try:
        v = np.asarray(f(z), dtype=np.complex128)
        if v.shape == z.shape:
            return v
    except (TypeError, ValueError):
        pass
    return np.array([complex(f(zi)) for zi in z], dtype=np.complex128)


def integrate_contour(f: Callable, contour: Contour, trunc: Truncation) -> EvalResult:
    """Path integral of f along contour with a node-doubling error estimate."""
    trunc = trunc.scaled()
    z1, w1 = contour_nodes(contour, trunc.quad_points)
    z2, w2 = contour_nodes(contour, 2 * trunc.quad_points)
    v1 = _eval_vectorized(f, z1)
    v2 = _eval_vectorized(f, z2)
    for z, v in ((z1, v1), (z2, v2)):
        bad = ~np.isfinite(v)
        if bad.any():
            raise PoleError(f"non-finite integrand at node t={z[bad][0]}")
    coarse = np.sum(w1 * v1)
    fine = np.sum(w2 * v2)
    scale = float(np.max(np.abs(v2)) * np.sum(np.abs(w2))) + 1.0
    err = abs(fine - coarse) + 1e-15 * scale
    return EvalResult(
        value=complex(fine),
        err_estimate=float(err),
        diagnostics={"terms_used": len(z2), "converged": err < max(trunc.tol_abs, trunc.tol_rel * abs(fine))},
    )


# -------------------------------------------------------------------- series


def sum_Z_series(term: Callable[[int], complex], trunc: Truncation) -> EvalResult:
    """Sum term(m) over |m| <= series_cutoff with a boundary-term error bound."""
    trunc = trunc.scaled()
    n = trunc.series_cutoff
    ms = np.arange(-n, n + 1)
    vals = np.array([complex(term(int(m))) for m in ms], dtype=np.complex128)
    if not np.all(np.isfinite(vals)):
        m_bad = ms[~np.isfinite(vals)][0]
        raise PoleError(f"non-finite series term at m={m_bad}")
    lo, lo2 = abs(vals[0]), abs(vals[1])
    hi, hi2 = abs(vals[-1]), abs(vals[-2])
    for edge, inner in ((lo, lo2), (hi, hi2)):
        if edge > inner and edge > trunc.tol_abs:
            raise DivergenceError(
                f"series boundary terms growing (|term(N)|={edge:.3g} > |term(N-1)|={inner:.3g})"
            )
    value = complex(vals.sum())
    err = float(lo + hi)
    return EvalResult(
        value=value,
        err_estimate=err,
        diagnostics={"terms_used": len(ms), "converged": err < trunc.tol_abs},
    )


def product_grid(
    factor: Callable[[int, int], complex],
    trunc: Truncation,
    denominator: Callable[[int, int], complex] | None = None,
) -> EvalResult:
    """Product of factor(j,k) over the square grid 0 <= j,k <= product_cutoff.

    The error estimate is the accumulated |factor - 1| on the outermost grid
    layer, which bounds the log of the discarded tail when factors decay
    geometrically.  If a denominator callback is supplied, any denominator
    value within pinch_tol of zero raises PoleError.
    """
    trunc = trunc.scaled()
    n = trunc.product_cutoff
    value = 1.0 + 0.0j
    boundary_dev = 0.0
    for j in range(n + 1):
        for k in range(n + 1):
            if denominator is not None:
                d = complex(denominator(j, k))
                if abs(d) < trunc.pinch_tol:
                    raise PoleError(f"denominator factor ~0 at (j,k)=({j},{k})")
            f = complex(factor(j, k))
            if not np.isfinite(f):
                raise PoleError(f"non-finite factor at (j,k)=({j},{k})")
            value *= f
            if j == n or k == n:
                boundary_dev += abs(f - 1.0)
    if boundary_dev > 1.0:
        raise DivergenceError(f"product factors not tending to 1 on the boundary layer "
                              f"(sum |factor-1| = {boundary_dev:.3g})")
    err = boundary_dev * (abs(value) + 1.0)
    return EvalResult(
        value=value,
        err_estimate=float(err),
        diagnostics={"terms_used": (n + 1) ** 2, "converged": err < trunc.tol_abs},
    )


# ----------------------------------------------------- endpoint-singular aid


def tanh_sinh_nodes(n: int, u_max: float = 3.5) -> tuple[np.ndarray, np.ndarray]:
    """tanh-sinh nodes/weights on (0, 1); handles integrable endpoint singularities."""
    u = np.linspace(-u_max, u_max, n)
    du = u[1] - u[0]
    s = np.sinh(u)
    x = 0.5 * (1.0 + np.tanh(0.5 * np.pi * s))
    w = 0.25 * np.pi * np.cosh(u) / np.cosh(0.5 * np.pi * s) ** 2 * du
    keep = (x > 0.0) & (x < 1.0) & (w > 1e-300)
    return x[keep], w[keep]
