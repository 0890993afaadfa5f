"""
Exact-rational piecewise-affine realization of a geometric type.

Every rectangle becomes the unit square; horizontal strip j of square i is
[0,1] x [(j-1)/h_i, j/h_i] and is sent onto vertical strip l of square k by
an affine map that contracts horizontally by 1/v_k, expands vertically by
h_i, and flips vertically exactly when eps = -1.  All arithmetic is in
``fractions.Fraction``; comparisons are exact.

The module recomputes stable-boundary refinements geometrically (cut heights
as fixed points, exact sorting, interval arithmetic on images) and is kept
free of the formula engine in ``refine`` so the two can check each other.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import GeoTypeError, GeometricType, HLabel, VLabel, require_valid
from .shift import (
    AdmissibilityError,
    CodeOrbit,
    PeriodicCode,
    incidence_matrix,
    is_binary,
    min_rotation,
)
from .boundary import per_s_codes


class TieError(GeoTypeError):
    """Two distinct cut lines landed on the same height: a deduplication bug."""


@dataclass(frozen=True)
class RationalPoint:
    square: int
    x: Fraction
    y: Fraction


@dataclass(frozen=True)
class StripMap:
    """Affine map of one horizontal strip onto one vertical strip.

    Vertical part y' = ay + b with a = eps * h_i; horizontal part
    x' = x / v_k + (l - 1) / v_k.
    """

    source: HLabel
    target: VLabel
    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction

    @property
    def eps(self) -> int:
        return 1 if self.a > 0 else -1

    def apply_y(self, y: Fraction) -> Fraction:
        return self.a * y + self.b

    def apply_x(self, x: Fraction) -> Fraction:
        return self.c * x + self.d


@dataclass(frozen=True)
class AffineModel:
    source: GeometricType
    maps: tuple[StripMap, ...]  # aligned with the lexicographic label order

    def strip_map(self, label: tuple[int, int]) -> StripMap:
        return self.maps[self.source.lex_index(label) - 1]

    def strip_bounds(self, i: int, j: int) -> tuple[Fraction, Fraction]:
        h = self.source.h[i - 1]
        return Fraction(j - 1, h), Fraction(j, h)

    def branch(self, i: int, target_square: int) -> int:
        """The unique strip of square i mapped into the target square."""
        hits = [
            j
            for j in range(1, self.source.h[i - 1] + 1)
            if self.strip_map((i, j)).target.k == target_square
        ]
        if len(hits) != 1:
            raise AdmissibilityError(
                f"square {i} has {len(hits)} strips into square {target_square}"
            )
        return hits[0]

    def extract_type(self) -> GeometricType:
        """Read (rho, eps) back off the affine data, not off the source type."""
        mapping: dict[tuple[int, int], tuple[int, int, int]] = {}
        for label in self.source.h_labels():
            m = self.strip_map(label)
            k = m.target.k
            # left endpoint of the x-image of [0,1] identifies the vertical slot
            left = m.apply_x(Fraction(0))
            l = left * self.source.v[k - 1] + 1
            if l.denominator != 1:
                raise GeoTypeError("image is not aligned with a vertical strip")
            mapping[(label.i, label.j)] = (k, int(l), m.eps)
        return GeometricType.build(self.source.h, self.source.v, mapping)


def realize(T: GeometricType) -> AffineModel:
    require_valid(T)
    maps: list[StripMap] = []
    for label in T.h_labels():
        k, l, e = T.phi(label)
        h_i = T.h[label.i - 1]
        v_k = T.v[k - 1]
        if e == 1:
            a, b = Fraction(h_i), Fraction(-(label.j - 1))
        else:
            a, b = Fraction(-h_i), Fraction(label.j)
        maps.append(
            StripMap(label, VLabel(k, l), a, b, Fraction(1, v_k), Fraction(l - 1, v_k))
        )
    return AffineModel(T, tuple(maps))


def _cycle_maps(model: AffineModel, code: PeriodicCode, phase: int) -> list[StripMap]:
    steps = []
    for m in range(code.period):
        t = phase + m
        i = code.symbol(t)
        j = model.branch(i, code.symbol(t + 1))
        steps.append(model.strip_map((i, j)))
    return steps


def periodic_point(model: AffineModel, code: PeriodicCode, phase: int = 0) -> RationalPoint:
    """Rational fixed point of the period-long composition starting at ``phase``.

    The y-coordinate is the cut height of the code's stable line in square
    w_phase.  When no vertical expansion happens along the cycle the height
    is undetermined and an error is raised; when the horizontal direction is
    everywhere rigid the midpoint x = 1/2 is returned.
    """
    steps = _cycle_maps(model, code, phase)
    A, B = Fraction(1), Fraction(0)
    C, D = Fraction(1), Fraction(0)
    for m in steps:
        A, B = m.a * A, m.a * B + m.b
        C, D = m.c * C, m.c * D + m.d
    if A == 1:
        if B == 0:
            raise GeoTypeError("vertical cut height undetermined: no expansion along cycle")
        raise GeoTypeError("vertical holonomy has no fixed point")
    y = B / (1 - A)
    x = D / (1 - C) if C != 1 else Fraction(1, 2)
    point = RationalPoint(code.symbol(phase), x, y)
    _check_orbit(model, code, phase, point)
    return point


def _check_orbit(model: AffineModel, code: PeriodicCode, phase: int, point: RationalPoint) -> None:
    y = point.y
    for m in range(code.period):
        t = phase + m
        i = code.symbol(t)
        j = model.branch(i, code.symbol(t + 1))
        lo, hi = model.strip_bounds(i, j)
        if not (lo <= y <= hi):
            raise GeoTypeError(f"cut height {y} escapes strip ({i},{j})")
        y = model.strip_map((i, j)).apply_y(y)
    if y != point.y:
        raise GeoTypeError("cut height is not periodic under the strip maps")


@dataclass(frozen=True)
class OracleRefinement:
    refined: GeometricType
    label_map: tuple[tuple[int, int], ...]
    cut_heights: tuple[tuple[tuple[Fraction, int, PeriodicCode], ...], ...]


def oracle_s_refine(
    T: GeometricType,
    W,
    *,
    drop_boundary: bool = False,
    dedup_orbits: bool = False,
) -> OracleRefinement:
    """Recompute the stable-boundary refinement from the affine geometry.

    Cut heights come from :func:`periodic_point`, bands from exact sorting,
    and the refined bijection from pushing each band piece through its strip
    map and reading off which bands of the target square it sweeps.
    """
    require_valid(T)
    A = incidence_matrix(T)
    if not is_binary(A):
        raise GeoTypeError("oracle refinement needs a binary incidence matrix")
    boundary = {c.orbit() for c in per_s_codes(T)}
    family: list[PeriodicCode] = []
    seen: set[CodeOrbit] = set()
    for code in W:
        if not isinstance(code, PeriodicCode):
            code = PeriodicCode(tuple(code))
        if not code.is_admissible(A):
            raise AdmissibilityError(f"code {code} is not admissible for this type")
        orbit = code.orbit()
        if orbit in seen:
            if dedup_orbits:
                continue
            raise GeoTypeError(f"duplicate orbit {orbit.canonical} in cutting family")
        if orbit in boundary:
            if drop_boundary:
                continue
            raise GeoTypeError(f"s-boundary code {code} in cutting family cuts nothing")
        seen.add(orbit)
        family.append(code)

    model = realize(T)
    cuts: list[list[tuple[Fraction, int, PeriodicCode]]] = [[] for _ in range(T.n)]
    for code in family:
        for t in range(code.period):
            i = code.symbol(t)
            y = periodic_point(model, code, t).y
            cuts[i - 1].append((y, t, code))
    for i in range(1, T.n + 1):
        cuts[i - 1].sort(key=lambda item: item[0])
        heights = [item[0] for item in cuts[i - 1]]
        if len(set(heights)) != len(heights):
            raise TieError(f"exact tie between distinct cut lines in square {i}")

    boundaries: list[list[Fraction]] = [
        [Fraction(0)] + [item[0] for item in cuts[i - 1]] + [Fraction(1)]
        for i in range(1, T.n + 1)
    ]

    pairs: list[tuple[int, int]] = []
    starts: list[int] = []
    total = 0
    for i in range(1, T.n + 1):
        starts.append(total)
        bands = len(boundaries[i - 1]) - 1
        pairs.extend((i, s) for s in range(1, bands + 1))
        total += bands

    def r_tilde(k: int, s: int) -> int:
        return starts[k - 1] + s

    h_new: list[int] = []
    v_new: list[int] = []
    mapping: dict[tuple[int, int], tuple[int, int, int]] = {}
    for r, (i, s) in enumerate(pairs, start=1):
        lo = boundaries[i - 1][s - 1]
        hi = boundaries[i - 1][s]
        v_new.append(T.v[i - 1])
        pieces: list[tuple[Fraction, int, int, int]] = []  # (preimage lo, r', l, eps)
        for j in range(1, T.h[i - 1] + 1):
            strip_lo, strip_hi = model.strip_bounds(i, j)
            piece_lo = max(lo, strip_lo)
            piece_hi = min(hi, strip_hi)
            if piece_lo >= piece_hi:
                continue
            m = model.strip_map((i, j))
            y1, y2 = m.apply_y(piece_lo), m.apply_y(piece_hi)
            img_lo, img_hi = (y1, y2) if y1 < y2 else (y2, y1)
            k = m.target.k
            marks = boundaries[k - 1]
            if img_lo not in marks or img_hi not in marks:
                raise GeoTypeError("image of a band edge missed the cut grid")
            idx_lo = marks.index(img_lo)
            idx_hi = marks.index(img_hi)
            for band in range(idx_lo + 1, idx_hi + 1):
                band_lo, band_hi = marks[band - 1], marks[band]
                pre_points = sorted(
                    ((band_lo - m.b) / m.a, (band_hi - m.b) / m.a)
                )
                pieces.append((pre_points[0], r_tilde(k, band), m.target.l, m.eps))
        pieces.sort(key=lambda item: item[0])
        for J_bar, (_, target_r, l, e) in enumerate(pieces, start=1):
            mapping[(r, J_bar)] = (target_r, l, e)
        h_new.append(len(pieces))

    refined = GeometricType.build(tuple(h_new), tuple(v_new), mapping)
    require_valid(refined)
    return OracleRefinement(
        refined,
        tuple(pairs),
        tuple(tuple(bucket) for bucket in cuts),
    )


# -- diagram emission -----------------------------------------------------------


def _fmt(value: Fraction, scale: float, offset: float = 0.0) -> str:
    return f"{offset + float(value) * scale:.2f}"


def model_svg(T: GeometricType, W=()) -> str:
    """Deterministic SVG of the unit squares, strips and cut lines of W."""
    require_valid(T)
    model = realize(T)
    side = 120.0
    gap = 30.0
    height = side + 60.0
    width = T.n * (side + gap) + gap
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" height="{height:.0f}">'
    ]
    cut_rows: list[tuple[int, Fraction, str]] = []
    for code in W:
        if not isinstance(code, PeriodicCode):
            code = PeriodicCode(tuple(code))
        orbit_id = ".".join(str(sym) for sym in min_rotation(code.word))
        for t in range(code.period):
            point = periodic_point(model, code, t)
            cut_rows.append((code.symbol(t), point.y, f"({t},{orbit_id})"))
    for i in range(1, T.n + 1):
        x0 = gap + (i - 1) * (side + gap)
        y0 = 30.0
        lines.append(
            f'<rect x="{x0:.2f}" y="{y0:.2f}" width="{side:.2f}" height="{side:.2f}" '
            'fill="none" stroke="black"/>'
        )
        lines.append(
            f'<text x="{x0 + side / 2:.2f}" y="{y0 + side + 18:.2f}" '
            f'text-anchor="middle" font-size="12">R{i}</text>'
        )
        for j in range(1, T.h[i - 1]):
            y = y0 + side - float(Fraction(j, T.h[i - 1])) * side
            lines.append(
                f'<line x1="{x0:.2f}" y1="{y:.2f}" x2="{x0 + side:.2f}" y2="{y:.2f}" '
                'stroke="gray" stroke-dasharray="4,3"/>'
            )
        for l in range(1, T.v[i - 1]):
            x = x0 + float(Fraction(l, T.v[i - 1])) * side
            lines.append(
                f'<line x1="{x:.2f}" y1="{y0:.2f}" x2="{x:.2f}" y2="{y0 + side:.2f}" '
                'stroke="gray" stroke-dasharray="2,3"/>'
            )
        for square, y_frac, label in sorted(cut_rows, key=lambda row: (row[0], row[1], row[2])):
            if square != i:
                continue
            y = y0 + side - float(y_frac) * side
            lines.append(
                f'<line x1="{x0:.2f}" y1="{y:.2f}" x2="{x0 + side:.2f}" y2="{y:.2f}" '
                'stroke="red"/>'
            )
            lines.append(
                f'<text x="{x0 + side + 2:.2f}" y="{y + 4:.2f}" font-size="10" '
                f'fill="red">{label}</text>'
            )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
