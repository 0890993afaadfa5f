"""
Refinements of geometric types.

Three constructions live here.  The binary refinement promotes every
horizontal strip to a rectangle of its own, which forces a 0/1 incidence
matrix.  The stable-boundary refinement cuts rectangles along the horizontal
lines carried by a family of periodic codes; its engine is a strict total
order on cut lines computed from mismatch times and orientation products,
followed by a per-strip case analysis that assembles the refined bijection.
The unstable-boundary refinement is the same construction run on the inverse
type, and the corner / bounded-period refinements are pipelines of the two.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cmp_to_key
from math import lcm

from .core import (
    GeoTypeError,
    GeometricType,
    HLabel,
    invert,
    require_valid,
    serialize,
)
from .boundary import (
    SULabel,
    boundary_sets,
    has_corner_property,
    max_boundary_period,
    per_s_codes,
    per_u_codes,
)
from .shift import (
    AdmissibilityError,
    CodeOrbit,
    IncidenceMatrix,
    PeriodicCode,
    enumerate_orbits,
    incidence_matrix,
    is_binary,
    primitive_root,
    require_binary,
)


class BoundaryCodeError(GeoTypeError):
    """A cutting family contains a boundary code, which cuts nothing."""


class ShiftEqualError(GeoTypeError):
    """Two interval references denote the same shifted code."""


class DuplicateOrbitError(GeoTypeError):
    """A cutting family lists the same shift orbit twice."""


class PeriodBoundError(GeoTypeError):
    """The requested period bound is below the boundary-code maximum."""


# -- binary refinement ----------------------------------------------------------


@dataclass(frozen=True)
class BinRefinement:
    refined: GeometricType
    label_map: tuple[HLabel, ...]  # position r-1 holds the source label (i, j)

    def r_of(self, label: tuple[int, int]) -> int:
        return self.label_map.index(HLabel(*label)) + 1


def bin_refine(T: GeometricType) -> BinRefinement:
    """Promote horizontal strips to rectangles; the result is always binary.

    Rectangle r(i, j) inherits v_i vertical strips and h_k horizontal ones,
    where (k, l) = rho(i, j).  Orientation decides whether the new strips
    enumerate the strips of rectangle k bottom-up or top-down.
    """
    require_valid(T)
    labels = tuple(T.h_labels())
    r_of = {label: pos + 1 for pos, label in enumerate(labels)}
    h_new: list[int] = []
    v_new: list[int] = []
    mapping: dict[tuple[int, int], tuple[int, int, int]] = {}
    for label in labels:
        k, l, e = T.phi(label)
        r = r_of[label]
        v_new.append(T.v[label.i - 1])
        h_new.append(T.h[k - 1])
        for j0 in range(1, T.h[k - 1] + 1):
            if e == 1:
                target = r_of[HLabel(k, j0)]
            else:
                target = r_of[HLabel(k, T.h[k - 1] - (j0 - 1))]
            mapping[(r, j0)] = (target, l, e)
    refined = GeometricType.build(tuple(h_new), tuple(v_new), mapping)
    require_valid(refined)
    return BinRefinement(refined, labels)


# -- the interval order engine ---------------------------------------------------


@dataclass(frozen=True)
class IntervalRef:
    """The stable line carried by iterate t of a pointed periodic code."""

    t: int
    code: PeriodicCode

    def __post_init__(self) -> None:
        if not (0 <= self.t < self.code.period):
            raise ValueError("iterate index must lie in 0..period-1")

    @property
    def host(self) -> int:
        return self.code.symbol(self.t)

    def shifted_word(self) -> tuple[int, ...]:
        return self.code.rotate(self.t).word

    def successor(self) -> "IntervalRef":
        return IntervalRef((self.t + 1) % self.code.period, self.code)


def j_index(T: GeometricType, code: PeriodicCode, t: int) -> int:
    """The unique strip of rectangle w_t that maps into rectangle w_{t+1}."""
    i = code.symbol(t)
    nxt = code.symbol(t + 1)
    for j in range(1, T.h[i - 1] + 1):
        if T.xi((i, j)) == nxt:
            return j
    raise AdmissibilityError(
        f"no strip of rectangle {i} maps into rectangle {nxt} (code {code})"
    )


def mismatch_M(T: GeometricType, a: IntervalRef, b: IntervalRef) -> int:
    """First forward time at which the two shifted codes disagree."""
    if a.host != b.host:
        raise ValueError("interval references must share a host rectangle")
    if a.shifted_word() == b.shifted_word():
        raise ShiftEqualError(f"intervals ({a.t},{a.code}) and ({b.t},{b.code}) are shift-equal")
    window = lcm(a.code.period, b.code.period)
    for m in range(1, window + 1):
        if a.code.symbol(a.t + m) != b.code.symbol(b.t + m):
            return m
    raise ShiftEqualError("mismatch search window exceeded; inputs are shift-equal")


def interchange_delta(T: GeometricType, a: IntervalRef, b: IntervalRef) -> int:
    """Sign of the orientation product before the codes diverge; +1 when M = 1."""
    M = mismatch_M(T, a, b)
    if M == 1:
        return 1
    delta_a = 1
    delta_b = 1
    for m in range(M - 1):
        delta_a *= T.eps_of((a.code.symbol(a.t + m), j_index(T, a.code, a.t + m)))
        delta_b *= T.eps_of((b.code.symbol(b.t + m), j_index(T, b.code, b.t + m)))
    assert delta_a == delta_b, "orientation product must not depend on the code"
    return delta_a


def interval_less(T: GeometricType, a: IntervalRef, b: IntervalRef) -> bool:
    """Strict vertical order of two cut lines with a common host rectangle."""
    M = mismatch_M(T, a, b)
    delta = interchange_delta(T, a, b)
    ja = j_index(T, a.code, a.t + M - 1)
    jb = j_index(T, b.code, b.t + M - 1)
    assert ja != jb, "strips at the mismatch time must differ for a binary matrix"
    return ja < jb if delta == 1 else ja > jb


@dataclass(frozen=True)
class OrderTable:
    """Per-rectangle vertical order of the cut lines, sentinels implicit.

    Position 0 is the bottom edge (i, -1) and position count+1 the top edge
    (i, +1); the interval at table position p (1-based) sits p-th from the
    bottom.
    """

    n: int
    family: tuple[PeriodicCode, ...]
    entries: tuple[tuple[IntervalRef, ...], ...]

    def count(self, i: int) -> int:
        return len(self.entries[i - 1])

    def refs(self, i: int) -> tuple[IntervalRef, ...]:
        return self.entries[i - 1]

    def position(self, ref: IntervalRef) -> int:
        return self.entries[ref.host - 1].index(ref) + 1


def _prepare_family(
    T: GeometricType,
    A: IncidenceMatrix,
    W,
    *,
    boundary_orbits: set[CodeOrbit],
    boundary_kind: str,
    drop_boundary: bool,
    dedup_orbits: bool,
) -> tuple[PeriodicCode, ...]:
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
            raise DuplicateOrbitError(f"duplicate orbit {orbit.canonical} in cutting family")
        if orbit in boundary_orbits:
            if drop_boundary:
                continue
            raise BoundaryCodeError(
                f"{boundary_kind} code {code} in cutting family cuts nothing"
            )
        seen.add(orbit)
        family.append(code)
    return tuple(family)


def build_order(
    T: GeometricType,
    W,
    *,
    drop_boundary: bool = False,
    dedup_orbits: bool = False,
) -> OrderTable:
    """Validate a cutting family and sort its cut lines rectangle by rectangle."""
    require_valid(T)
    A = incidence_matrix(T)
    require_binary(A)
    boundary_orbits = {c.orbit() for c in per_s_codes(T)}
    family = _prepare_family(
        T,
        A,
        W,
        boundary_orbits=boundary_orbits,
        boundary_kind="s-boundary",
        drop_boundary=drop_boundary,
        dedup_orbits=dedup_orbits,
    )
    buckets: list[list[IntervalRef]] = [[] for _ in range(T.n)]
    for code in family:
        for t in range(code.period):
            ref = IntervalRef(t, code)
            buckets[ref.host - 1].append(ref)
    key = cmp_to_key(lambda x, y: -1 if interval_less(T, x, y) else 1)
    entries = tuple(tuple(sorted(bucket, key=key)) for bucket in buckets)
    return OrderTable(T.n, family, entries)


# -- refinement results -----------------------------------------------------------


@dataclass(frozen=True)
class RefinementResult:
    """A refined type plus the bookkeeping that produced it.

    Single-stage results carry the label map r <-> (i, s), the order table and
    per-rectangle bounding intervals; pipeline results chain stages and carry
    only the final type.  For 'u' results the bookkeeping refers to the
    stable-side run on the inverse type (rectangle labels r agree).
    """

    refined: GeometricType
    source: GeometricType
    kind: str  # 's' | 'u' | 'pipeline'
    label_map: tuple[tuple[int, int], ...] | None = None
    order: OrderTable | None = None
    provenance: tuple[tuple[object, object], ...] | None = None
    stages: tuple["RefinementResult", ...] = ()

    def label_of(self, r: int) -> tuple[int, int]:
        if self.label_map is None:
            raise GeoTypeError("pipeline results have no single label map")
        return self.label_map[r - 1]

    def r_of(self, i: int, s: int) -> int:
        if self.label_map is None:
            raise GeoTypeError("pipeline results have no single label map")
        return self.label_map.index((i, s)) + 1

    # -- recoding ------------------------------------------------------------

    def recode(self, code: PeriodicCode) -> frozenset[PeriodicCode]:
        """Codes of the refined type shadowing a periodic code of the source.

        A cut code yields its two flanking rectangle codes (just below and
        just above the cut line); any other admissible periodic code yields
        the single code of the rectangles its orbit passes through.
        """
        if self.kind == "pipeline":
            current = {code}
            for stage in self.stages:
                current = {new for c in current for new in stage.recode(c)}
            return frozenset(current)
        if self.kind == "u":
            inner = self.stages[0]
            reversed_out = inner.recode(code.reversed_pointed())
            return frozenset(c.reversed_pointed() for c in reversed_out)
        return self._recode_s(code)

    def _recode_s(self, code: PeriodicCode) -> frozenset[PeriodicCode]:
        assert self.kind == "s" and self.order is not None
        T = self.source
        by_orbit = {w.orbit(): w for w in self.order.family}
        orbit = code.orbit()
        if orbit in by_orbit:
            # The two flanking rectangle codes swap sides at every
            # orientation-reversing step, so their period doubles when the
            # orientation product over one period is -1.
            rep = by_orbit[orbit]
            P = rep.period
            signs = [1]
            for t in range(2 * P - 1):
                strip = (rep.symbol(t), j_index(T, rep, t))
                signs.append(signs[-1] * T.eps_of(strip))
            length = P if signs[P] == 1 else 2 * P
            below: list[int] = []
            above: list[int] = []
            for t in range(length):
                ref = IntervalRef(t % P, rep)
                pos = self.order.position(ref)
                low = self.r_of(ref.host, pos)
                high = self.r_of(ref.host, pos + 1)
                if signs[t] == 1:
                    below.append(low)
                    above.append(high)
                else:
                    below.append(high)
                    above.append(low)
            return frozenset(
                {
                    PeriodicCode(primitive_root(below)),
                    PeriodicCode(primitive_root(above)),
                }
            )
        word: list[int] = []
        for t in range(code.period):
            ref = IntervalRef(t, code)
            i = ref.host
            s = 1 + sum(
                1 for other in self.order.refs(i) if interval_less(T, other, ref)
            )
            word.append(self.r_of(i, s))
        return frozenset({PeriodicCode(primitive_root(word))})


def _tilde_labels(order: OrderTable) -> tuple[tuple[tuple[int, int], ...], list[int]]:
    pairs: list[tuple[int, int]] = []
    starts: list[int] = []
    total = 0
    for i in range(1, order.n + 1):
        starts.append(total)
        for s in range(1, order.count(i) + 2):
            pairs.append((i, s))
        total += order.count(i) + 1
    return tuple(pairs), starts


def s_refine(
    T: GeometricType,
    W,
    *,
    drop_boundary: bool = False,
    dedup_orbits: bool = False,
) -> RefinementResult:
    """Cut each rectangle along the stable lines of all iterates of W.

    Every strip of the source that meets a refined rectangle contributes a
    block of refined strips.  The block size and images follow from which of
    the rectangle's two bounding lines live inside that strip:

    * neither (the strip crosses the rectangle, or the bounds are rectangle
      edges): the image sweeps all of rectangle k;
    * both: the image runs between the two successor lines;
    * exactly one: the image runs from the successor line to the edge of k
      picked out by the orientation.
    """
    order = build_order(T, W, drop_boundary=drop_boundary, dedup_orbits=dedup_orbits)
    pairs, starts = _tilde_labels(order)

    def r_tilde(k: int, s: int) -> int:
        return starts[k - 1] + s

    h_new: list[int] = []
    v_new: list[int] = []
    mapping: dict[tuple[int, int], tuple[int, int, int]] = {}
    provenance: list[tuple[object, object]] = []

    for r, (i, s) in enumerate(pairs, start=1):
        count_i = order.count(i)
        lower: object = SULabel(i, -1) if s == 1 else order.refs(i)[s - 2]
        upper: object = SULabel(i, +1) if s == count_i + 1 else order.refs(i)[s - 1]
        provenance.append((lower, upper))
        j_lo = 1 if isinstance(lower, SULabel) else j_index(T, lower.code, lower.t)
        j_hi = T.h[i - 1] if isinstance(upper, SULabel) else j_index(T, upper.code, upper.t)
        assert j_lo <= j_hi
        v_new.append(T.v[i - 1])

        blocks: list[tuple[int, int, int, list[int]]] = []  # (k, l, eps, image rs)
        for j in range(j_lo, j_hi + 1):
            k, l, e = T.phi((i, j))
            count_k = order.count(k)
            low_in = isinstance(lower, IntervalRef) and j == j_index(T, lower.code, lower.t)
            up_in = isinstance(upper, IntervalRef) and j == j_index(T, upper.code, upper.t)
            if low_in and up_in:
                succ_lo = lower.successor()
                succ_hi = upper.successor()
                assert succ_lo.host == k and succ_hi.host == k
                s_minus = order.position(succ_lo)
                s_plus = order.position(succ_hi)
                assert (s_minus < s_plus) if e == 1 else (s_minus > s_plus)
                h_bar = abs(s_minus - s_plus)
                if e == 1:
                    images = [r_tilde(k, s_minus + J) for J in range(1, h_bar + 1)]
                else:
                    images = [r_tilde(k, s_minus - J + 1) for J in range(1, h_bar + 1)]
            elif up_in:
                succ = upper.successor()
                assert succ.host == k
                s_plus = order.position(succ)
                if e == 1:
                    h_bar = s_plus
                    images = [r_tilde(k, J) for J in range(1, h_bar + 1)]
                else:
                    h_bar = count_k + 1 - s_plus
                    images = [r_tilde(k, count_k + 2 - J) for J in range(1, h_bar + 1)]
            elif low_in:
                succ = lower.successor()
                assert succ.host == k
                s_img = order.position(succ)
                if e == 1:
                    h_bar = count_k + 1 - s_img
                    images = [r_tilde(k, s_img + J) for J in range(1, h_bar + 1)]
                else:
                    h_bar = s_img
                    images = [r_tilde(k, s_img - J + 1) for J in range(1, h_bar + 1)]
            else:
                h_bar = count_k + 1
                if e == 1:
                    images = [r_tilde(k, J) for J in range(1, h_bar + 1)]
                else:
                    images = [r_tilde(k, count_k + 2 - J) for J in range(1, h_bar + 1)]
            assert h_bar >= 1
            blocks.append((k, l, e, images))

        J_bar = 0
        for _, l, e, images in blocks:
            for target in images:
                J_bar += 1
                mapping[(r, J_bar)] = (target, l, e)
        h_new.append(J_bar)

    refined = GeometricType.build(tuple(h_new), tuple(v_new), mapping)
    require_valid(refined)
    assert sum(h_new) == sum(v_new)
    assert is_binary(incidence_matrix(refined))
    return RefinementResult(
        refined=refined,
        source=T,
        kind="s",
        label_map=pairs,
        order=order,
        provenance=tuple(provenance),
    )


def u_refine(
    T: GeometricType,
    W,
    *,
    drop_boundary: bool = False,
    dedup_orbits: bool = False,
) -> RefinementResult:
    """Cut along unstable lines: the stable refinement of the inverse type.

    Code words are reversed before feeding the inverse side, since forward
    time for the inverse is backward time for the original.
    """
    require_valid(T)
    A = incidence_matrix(T)
    require_binary(A)
    boundary_orbits = {c.orbit() for c in per_u_codes(T)}
    family = _prepare_family(
        T,
        A,
        W,
        boundary_orbits=boundary_orbits,
        boundary_kind="u-boundary",
        drop_boundary=drop_boundary,
        dedup_orbits=dedup_orbits,
    )
    inner = s_refine(invert(T), [w.reversed_pointed() for w in family])
    return RefinementResult(
        refined=invert(inner.refined),
        source=T,
        kind="u",
        label_map=inner.label_map,
        order=inner.order,
        provenance=inner.provenance,
        stages=(inner,),
    )


# -- pipelines ---------------------------------------------------------------------


def _orbit_reps(orbits: set[CodeOrbit]) -> list[PeriodicCode]:
    return [o.canonical for o in sorted(orbits, key=CodeOrbit.sort_key)]


def _pipeline(T: GeometricType, stages: tuple[RefinementResult, ...]) -> RefinementResult:
    refined = stages[-1].refined if stages else T
    return RefinementResult(refined=refined, source=T, kind="pipeline", stages=stages)


def corner_refine(T: GeometricType) -> RefinementResult:
    """Restore the corner property by an s-pass then a u-pass.

    First cut along the boundary periodic codes that are not yet stable
    boundary (they are the unstable-only ones), then cut the intermediate
    type along its own stable boundary codes that are not yet unstable
    boundary.
    """
    require_valid(T)
    require_binary(incidence_matrix(T))
    sets = boundary_sets(T)
    s_orbits = {c.orbit() for c in sets.s_codes}
    b_orbits = {c.orbit() for c in sets.b_codes}
    stage1 = s_refine(T, _orbit_reps(b_orbits - s_orbits))
    T1 = stage1.refined
    s1_orbits = {c.orbit() for c in per_s_codes(T1)}
    u1_orbits = {c.orbit() for c in per_u_codes(T1)}
    stage2 = u_refine(T1, _orbit_reps(s1_orbits - u1_orbits))
    return _pipeline(T, (stage1, stage2))


def corner_refine_along(T: GeometricType, W) -> RefinementResult:
    """Cut along W, then corner-refine; boundary members of W cut nothing."""
    require_valid(T)
    require_binary(incidence_matrix(T))
    if not has_corner_property(T):
        raise GeoTypeError("corner refinement along a family needs the corner property")
    stage1 = s_refine(T, W, drop_boundary=True)
    inner = corner_refine(stage1.refined)
    return _pipeline(T, (stage1,) + inner.stages)


def wp_refine(T: GeometricType, P: int) -> RefinementResult:
    """Put every periodic orbit of period <= P on refined rectangle corners."""
    require_valid(T)
    A = incidence_matrix(T)
    require_binary(A)
    if not has_corner_property(T):
        raise GeoTypeError("bounded-period refinement needs the corner property")
    p_bound = max_boundary_period(T)
    if P < p_bound:
        raise PeriodBoundError(f"P below P_B(T)={p_bound}")
    orbits = enumerate_orbits(A, P)
    return corner_refine_along(T, [o.canonical for o in orbits])


# -- serialization ------------------------------------------------------------------


def _orbit_id(code: PeriodicCode) -> str:
    return ".".join(str(s) for s in code.orbit().canonical.word)


def _entry_text(ref: IntervalRef) -> str:
    return f"({ref.t},{_orbit_id(ref.code)})"


def serialize_result(result: RefinementResult) -> str:
    """Canonical text block: refined type, then LABEL / ORDER / CUT lines.

    Pipelines serialize the refined type only; the per-stage tables are stage
    objects, not attributes of the composite.
    """
    out = serialize(result.refined)
    if result.kind == "pipeline" or result.order is None:
        return out
    lines: list[str] = []
    for r, (i, s) in enumerate(result.label_map, start=1):
        lines.append(f"LABEL {r}=({i},{s})")
    for i in range(1, result.order.n + 1):
        entries = " ".join(
            [f"({i},-)"] + [_entry_text(ref) for ref in result.order.refs(i)] + [f"({i},+)"]
        )
        lines.append(f"ORDER {i} : {entries}")
    for i in range(1, result.order.n + 1):
        for pos, ref in enumerate(result.order.refs(i), start=1):
            lines.append(f"CUT {_entry_text(ref)} host={i} pos={pos}")
    return out + "\n".join(lines) + ("\n" if lines else "")
