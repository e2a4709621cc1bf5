"""Triangulations of the closed disc with marked points on the circle.

All geometry is exact: a marked point is a rational fraction of a full
turn in [0, 1). Finite triangulations are validated exhaustively; infinite
triangulations are described by finitely many arc families (fountains,
nests, half-nests) with tip sequences of the form limit +/- scale/k, plus
finitely many exceptional arcs, with all edges of the marked point set
implied.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import (
    CrossingPair,
    InvalidFamily,
    NotFlippable,
    NotMaximal,
    ParseError,
)
from .laurent import VarId
from .seeds import Seed


def norm_angle(x: Fraction) -> Fraction:
    return x % 1


def parse_frac(text: str) -> Fraction:
    try:
        f = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad fraction {text!r}", expected="p/q") from exc
    return norm_angle(f)


def frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def in_open(a: Fraction, b: Fraction, z: Fraction) -> bool:
    """z lies in the open cyclic interval (a, b), traversed by increasing
    angle from a to b."""
    if a == b:
        return False
    if a < b:
        return a < z < b
    return z > a or z < b


@dataclass(frozen=True, order=True)
class Arc:
    """Unordered pair of distinct marked points, stored with p < q."""

    p: Fraction
    q: Fraction

    @staticmethod
    def of(a: Fraction, b: Fraction) -> "Arc":
        a, b = norm_angle(a), norm_angle(b)
        if a == b:
            raise ValueError("arc endpoints must be distinct")
        return Arc(min(a, b), max(a, b))

    @property
    def label(self) -> VarId:
        return f"{frac_str(self.p)}~{frac_str(self.q)}"

    def endpoints(self) -> tuple[Fraction, Fraction]:
        return (self.p, self.q)

    def other(self, x: Fraction) -> Fraction:
        return self.q if x == self.p else self.p

    def __str__(self):
        return "{" + f"{frac_str(self.p)}, {frac_str(self.q)}" + "}"


def arc_label(a: Arc) -> VarId:
    return a.label


def parse_arc_label(label: VarId) -> Arc:
    try:
        left, right = label.split("~")
    except ValueError as exc:
        raise ParseError(f"bad arc label {label!r}", expected="p/q~r/s") from exc
    return Arc.of(parse_frac(left), parse_frac(right))


def arcs_cross(a: Arc, b: Arc) -> bool:
    """True iff the chords properly cross; shared endpoints never cross."""
    if {a.p, a.q} & {b.p, b.q}:
        return False
    b0_in = in_open(a.p, a.q, b.p)
    b1_in = in_open(a.p, a.q, b.q)
    return b0_in != b1_in


@dataclass(frozen=True)
class FiniteTriangulation:
    """A maximal set of pairwise non-crossing arcs on a finite point set.
    Construct through validate_triangulation."""

    points: tuple[Fraction, ...]
    arcs: frozenset[Arc]

    def internal_arcs(self) -> list[Arc]:
        return sorted(a for a in self.arcs if classify_arc(self, a) == "internal")

    def _triangle_cache(self):
        cached = self.__dict__.get("_triangles")
        if cached is None:
            cached = _compute_triangles(self)
            object.__setattr__(self, "_triangles", cached)
        return cached


def classify_arc(t: FiniteTriangulation, a: Arc) -> str:
    """'edge' iff one open side contains no marked point, else 'internal'."""
    pts = set(t.points)
    if a.p not in pts or a.q not in pts:
        raise ValueError("arc endpoints must be marked points")
    side1 = any(in_open(a.p, a.q, z) for z in pts)
    side2 = any(in_open(a.q, a.p, z) for z in pts)
    return "internal" if (side1 and side2) else "edge"


def validate_triangulation(
    points: Iterable[Fraction], arcs: Iterable[Arc]
) -> FiniteTriangulation:
    """Checks pairwise non-crossing and maximality exhaustively."""
    pts = tuple(sorted({norm_angle(p) for p in points}))
    if len(pts) < 2:
        raise ValueError("a triangulation needs at least two marked points")
    arc_set = frozenset(arcs)
    pt_set = set(pts)
    for a in arc_set:
        if a.p not in pt_set or a.q not in pt_set:
            raise ValueError(f"arc {a} uses a point outside the marked set")
    ordered = sorted(arc_set)
    for i, a in enumerate(ordered):
        for b in ordered[i + 1 :]:
            if arcs_cross(a, b):
                raise CrossingPair(a, b)
    for i, p in enumerate(pts):
        for q in pts[i + 1 :]:
            cand = Arc.of(p, q)
            if cand in arc_set:
                continue
            if not any(arcs_cross(cand, a) for a in arc_set):
                raise NotMaximal(cand)
    t = FiniteTriangulation(pts, arc_set)
    # consequence of maximality: all edges of the point set are present
    n = len(pts)
    for i in range(n):
        assert Arc.of(pts[i], pts[(i + 1) % n]) in arc_set or n == 2
    return t


def triangles(t: FiniteTriangulation) -> list[tuple[Fraction, Fraction, Fraction]]:
    """Triples of points pairwise joined by arcs, in increasing angle order.
    In a triangulation every such triple bounds a face."""
    return t._triangle_cache()


def _compute_triangles(t: FiniteTriangulation) -> list[tuple[Fraction, Fraction, Fraction]]:
    adj: dict[Fraction, set[Fraction]] = {p: set() for p in t.points}
    for a in t.arcs:
        adj[a.p].add(a.q)
        adj[a.q].add(a.p)
    out = []
    pts = t.points
    for i, p in enumerate(pts):
        for q in pts[i + 1 :]:
            if q not in adj[p]:
                continue
            for r in pts:
                if r > q and r in adj[p] and r in adj[q]:
                    out.append((p, q, r))
    return out


def _triangle_arrows(
    corners: tuple[Fraction, Fraction, Fraction]
) -> list[tuple[Arc, Arc]]:
    """Arrow pairs contributed by one triangle, corners in increasing angle.

    Orientation convention, fixed once and validated by the flip/mutation
    compatibility property: {p,q} -> {q,r} -> {r,p} -> {p,q}.
    """
    p, q, r = corners
    s1, s2, s3 = Arc.of(p, q), Arc.of(q, r), Arc.of(r, p)
    return [(s1, s2), (s2, s3), (s3, s1)]


def exchangeable_arcs(t: FiniteTriangulation) -> set[Arc]:
    """Arcs that are the diagonal of a quadrilateral in t, i.e. flanked by
    triangles on both sides."""
    sides: dict[Arc, int] = {a: 0 for a in t.arcs}
    for tri in triangles(t):
        p, q, r = tri
        for a in (Arc.of(p, q), Arc.of(q, r), Arc.of(r, p)):
            sides[a] += 1
    return {a for a, n in sides.items() if n == 2}


def seed_from_triangulation(t: FiniteTriangulation) -> Seed:
    """One cluster variable per arc; exchangeables are the quadrilateral
    diagonals; skew-symmetric matrix from the triangle orientation rule."""
    labels = [a.label for a in sorted(t.arcs)]
    entries: dict[VarId, dict[VarId, int]] = {}

    def bump(x: Arc, y: Arc, v: int):
        row = entries.setdefault(x.label, {})
        n = row.get(y.label, 0) + v
        if n:
            row[y.label] = n
        elif y.label in row:
            del row[y.label]

    for tri in triangles(t):
        for src, dst in _triangle_arrows(tri):
            bump(src, dst, 1)
            bump(dst, src, -1)
    entries = {v: r for v, r in entries.items() if r}
    ex = {a.label for a in exchangeable_arcs(t)}
    return Seed.initial(labels, ex, entries)


def flip_arc(t: FiniteTriangulation, a: Arc) -> FiniteTriangulation:
    """Replace an exchangeable arc by the opposite diagonal of its
    quadrilateral; the result is re-validated."""
    if a not in exchangeable_arcs(t):
        raise NotFlippable(a)
    apexes = []
    for tri in triangles(t):
        p, q, r = tri
        tri_arcs = {Arc.of(p, q), Arc.of(q, r), Arc.of(r, p)}
        if a in tri_arcs:
            apexes.extend(c for c in tri if c not in (a.p, a.q))
    assert len(apexes) == 2
    new_arc = Arc.of(apexes[0], apexes[1])
    return validate_triangulation(t.points, (t.arcs - {a}) | {new_arc})


def fan_triangulation(n: int) -> FiniteTriangulation:
    """Fan of the regular n-gon {k/n} from the point 0."""
    pts = [Fraction(k, n) for k in range(n)]
    arcs = {Arc.of(pts[i], pts[(i + 1) % n]) for i in range(n)}
    arcs |= {Arc.of(pts[0], pts[k]) for k in range(2, n - 1)}
    return validate_triangulation(pts, arcs)


def all_triangulations(n: int) -> list[FiniteTriangulation]:
    """Flip-closure of the fan of the n-gon: all triangulations of the
    convex n-gon."""
    start = fan_triangulation(n)
    seen = {start.arcs: start}
    frontier = [start]
    while frontier:
        nxt = []
        for t in frontier:
            for a in sorted(exchangeable_arcs(t)):
                u = flip_arc(t, a)
                if u.arcs not in seen:
                    seen[u.arcs] = u
                    nxt.append(u)
        frontier = nxt
    return [seen[k] for k in sorted(seen, key=lambda s: sorted(s))]


# -- infinite triangulations ---------------------------------------------------


@dataclass(frozen=True)
class _TipSequence:
    """Endpoint sequence tip(k) = (limit + step/k) mod 1 for k >= start."""

    limit: Fraction
    step: Fraction  # nonzero; positive means tips approach the limit from above
    start: int

    def __post_init__(self):
        if self.step == 0:
            raise InvalidFamily("tip sequence needs a nonzero step")
        if self.start < 1:
            raise InvalidFamily("tip index range must start at k >= 1")
        if abs(self.step) / self.start >= Fraction(1, 2):
            raise InvalidFamily(
                "tip sequence must stay within half a turn of its limit"
            )

    def tip(self, k: int) -> Fraction:
        return norm_angle(self.limit + Fraction(self.step, k))

    def index_of(self, p: Fraction) -> int | None:
        """The k with tip(k) == p, if any."""
        for shift in (0, -1, 1):
            delta = p + shift - self.limit
            if delta == 0:
                continue
            ratio = self.step / delta
            if ratio.denominator == 1 and ratio >= self.start:
                k = int(ratio)
                if self.tip(k) == p:
                    return k
        return None

    def has_tip_in(self, lo: Fraction, hi: Fraction) -> bool:
        """Any tip in the open cyclic interval (lo, hi)?"""
        if lo == hi:
            return False
        # unwrap: tips live at limit + step/k; test the three integer shifts
        spans = [(lo, hi)] if lo < hi else [(lo, hi + 1)]
        out = []
        for a, b in spans:
            for shift in (-1, 0, 1):
                out.append((a + shift, b + shift))
        return any(self._has_tip_linear(a, b) for a, b in out)

    def _has_tip_linear(self, a: Fraction, b: Fraction) -> bool:
        """Any k >= start with a < limit + step/k < b (no wrapping)?"""
        lo = a - self.limit
        hi = b - self.limit
        s = self.step
        if s > 0:
            # need lo < s/k < hi
            if hi <= 0:
                return False
            kmin = max(self.start, _floor_div(s, hi) + 1)
            if lo <= 0:
                return True  # any k >= kmin works; k unbounded above
            kmax = _ceil_div(s, lo) - 1
            return kmin <= kmax
        u = -s
        # need lo < -u/k < hi  <=>  -hi < u/k < -lo
        lo2, hi2 = -hi, -lo
        if hi2 <= 0:
            return False
        kmin = max(self.start, _floor_div(u, hi2) + 1)
        if lo2 <= 0:
            return True
        kmax = _ceil_div(u, lo2) - 1
        return kmin <= kmax

    def nearest_ccw(self, p: Fraction):
        """Closest tip strictly after p going counterclockwise.

        Returns ("point", tip) when attained, ("accum", distance) when the
        infimum is an accumulation value that no tip attains.
        """
        D = norm_angle(self.limit - p)
        if self.step > 0:
            s = self.step
            if D == 0:
                return ("accum", Fraction(0))
            kw = _floor_div(s, 1 - D)
            if kw >= self.start:
                if s == (1 - D) * kw:  # tip(kw) == p exactly
                    kw -= 1
                if kw >= self.start:
                    return ("point", self.tip(kw))
            return ("accum", D)
        u = -self.step
        if D == 0:
            return ("point", self.tip(self.start))
        k = max(self.start, _floor_div(u, D) + 1)
        return ("point", self.tip(k))

    def nearest_cw(self, p: Fraction):
        reflected = _TipSequence(norm_angle(-self.limit), -self.step, self.start)
        res = reflected.nearest_ccw(norm_angle(-p))
        if res is None:
            return None
        kind, val = res
        if kind == "point":
            return ("point", norm_angle(-val))
        return res


def _floor(q: Fraction) -> int:
    return q.numerator // q.denominator


def _floor_div(a: Fraction, b: Fraction) -> int:
    return _floor(a / b)


def _ceil_div(a: Fraction, b: Fraction) -> int:
    return -_floor(-(a / b))


FAMILY_KINDS = ("fountain", "left-fountain", "right-fountain", "nest", "half-nest")


@dataclass(frozen=True)
class ArcFamily:
    """A convergent infinite family of arcs.

    Fountain kinds keep one endpoint at `base` while tips approach `limit`
    (right-fountain: from below/the right, step < 0 in the tip sequence;
    left-fountain: from above/the left). Nest and half-nest kinds zigzag:
    arcs {a_k, b_k} and {a_{k+1}, b_k} with both endpoint sequences moving.
    """

    kind: str
    limit: Fraction
    scale: Fraction
    start: int = 1
    base: Fraction | None = None
    limit2: Fraction | None = None
    scale2: Fraction | None = None

    def __post_init__(self):
        if self.kind not in FAMILY_KINDS:
            raise InvalidFamily(f"unknown family kind {self.kind!r}")
        if self.scale <= 0:
            raise InvalidFamily("scale must be positive")
        if self.kind in ("fountain", "left-fountain", "right-fountain"):
            if self.base is None:
                raise InvalidFamily(f"{self.kind} needs a base point")
        if self.kind == "half-nest":
            if self.limit2 is None:
                raise InvalidFamily("half-nest needs a second limit")
        for seq in self.sequences():
            pass  # sequence construction validates ranges
        window = self.arcs(12)
        for i, a in enumerate(window):
            for b in window[i + 1 :]:
                if arcs_cross(a, b):
                    raise InvalidFamily(
                        f"family generates crossing arcs {a} and {b}"
                    )

    def sequences(self) -> list[_TipSequence]:
        s2 = self.scale2 if self.scale2 is not None else self.scale
        if self.kind == "right-fountain":
            return [_TipSequence(self.limit, -self.scale, self.start)]
        if self.kind == "left-fountain":
            return [_TipSequence(self.limit, self.scale, self.start)]
        if self.kind == "fountain":
            return [
                _TipSequence(self.limit, -self.scale, self.start),
                _TipSequence(self.limit, s2, self.start),
            ]
        if self.kind == "half-nest":
            return [
                _TipSequence(self.limit, self.scale, self.start),
                _TipSequence(self.limit2, -s2, self.start),
            ]
        # nest: both endpoint sequences converge to the same point
        return [
            _TipSequence(self.limit, -self.scale, self.start),
            _TipSequence(self.limit, s2, self.start),
        ]

    def arcs(self, window: int) -> list[Arc]:
        """The first `window` arcs of the family, deterministically."""
        out: list[Arc] = []
        if self.kind in ("left-fountain", "right-fountain"):
            seq = self.sequences()[0]
            for k in range(self.start, self.start + window):
                out.append(Arc.of(self.base, seq.tip(k)))
        elif self.kind == "fountain":
            below, above = self.sequences()
            for k in range(self.start, self.start + (window + 1) // 2):
                out.append(Arc.of(self.base, below.tip(k)))
                if len(out) < window:
                    out.append(Arc.of(self.base, above.tip(k)))
            out = out[:window]
        else:  # nest / half-nest zigzag
            sa, sb = self.sequences()
            k = self.start
            while len(out) < window:
                out.append(Arc.of(sa.tip(k), sb.tip(k)))
                if len(out) < window:
                    out.append(Arc.of(sa.tip(k + 1), sb.tip(k)))
                k += 1
        return out

    def points(self, window: int) -> set[Fraction]:
        out: set[Fraction] = set()
        if self.base is not None:
            out.add(norm_angle(self.base))
        for a in self.arcs(window):
            out.update(a.endpoints())
        return out

    def is_member(self, arc: Arc) -> bool:
        """Exact membership test for a candidate arc."""
        if self.kind in ("fountain", "left-fountain", "right-fountain"):
            base = norm_angle(self.base)
            if base not in arc.endpoints():
                return False
            tip = arc.other(base)
            return any(seq.index_of(tip) is not None for seq in self.sequences())
        sa, sb = self.sequences()
        ka = sa.index_of(arc.p), sa.index_of(arc.q)
        kb = sb.index_of(arc.p), sb.index_of(arc.q)
        for a_idx, b_idx in ((ka[0], kb[1]), (ka[1], kb[0])):
            if a_idx is None or b_idx is None:
                continue
            if a_idx == b_idx or a_idx == b_idx + 1:
                return True
        return False

    def zigzag_partners(self, p: Fraction) -> set[Fraction]:
        """Endpoints paired with p by a zigzag arc of this family."""
        if self.kind in ("fountain", "left-fountain", "right-fountain"):
            return set()
        sa, sb = self.sequences()
        out: set[Fraction] = set()
        k = sa.index_of(p)
        if k is not None:
            out.add(sb.tip(k))
            if k > self.start:
                out.add(sb.tip(k - 1))
        k = sb.index_of(p)
        if k is not None:
            out.add(sa.tip(k))
            out.add(sa.tip(k + 1))
        return out

    def limit_arc(self) -> Arc | None:
        """Half-nests and fountains converge to an arc of the closure; a
        nest's endpoint limits coincide, so it contributes none."""
        if self.kind == "nest":
            return None
        if self.kind == "half-nest":
            return Arc.of(self.limit, self.limit2)
        return Arc.of(self.base, self.limit)


@dataclass(frozen=True)
class InfiniteTriangulation:
    """Finitely described countable triangulation: declared arc families,
    finitely many exceptional internal arcs, finitely many standalone
    points, and all edges of the full marked point set implied.

    Maximality of the described set is the modeler's responsibility; every
    finite window materialization is validated pairwise non-crossing.
    """

    families: tuple[ArcFamily, ...]
    extra_arcs: frozenset[Arc] = frozenset()
    finite_points: tuple[Fraction, ...] = ()

    def __post_init__(self):
        pts = {norm_angle(p) for p in self.finite_points}
        for f in self.families:
            if f.base is not None:
                pts.add(norm_angle(f.base))
        for a in self.extra_arcs:
            pts.update(a.endpoints())
        object.__setattr__(self, "finite_points", tuple(sorted(pts)))
        mat = self.window_arcs(10)
        for i, a in enumerate(mat):
            for b in mat[i + 1 :]:
                if arcs_cross(a, b):
                    raise CrossingPair(a, b)
        tip_pools = [f.points(32) - {f.base} for f in self.families]
        for i in range(len(tip_pools)):
            for j in range(i + 1, len(tip_pools)):
                if tip_pools[i] & tip_pools[j]:
                    raise InvalidFamily(
                        "families must not share moving endpoints"
                    )

    # -- point set ------------------------------------------------------

    def in_point_set(self, p: Fraction) -> bool:
        p = norm_angle(p)
        if p in self.finite_points:
            return True
        return any(
            seq.index_of(p) is not None
            for f in self.families
            for seq in f.sequences()
        )

    def has_point_in(self, lo: Fraction, hi: Fraction) -> bool:
        """Any marked point in the open cyclic interval (lo, hi)?"""
        if any(in_open(lo, hi, p) for p in self.finite_points):
            return True
        return any(
            seq.has_tip_in(lo, hi)
            for f in self.families
            for seq in f.sequences()
        )

    def nearest(self, p: Fraction, ccw: bool) -> Fraction | None:
        """The neighbouring marked point of p in the given direction, or
        None when marked points accumulate there without a closest one."""
        p = norm_angle(p)
        attained: list[Fraction] = []
        accums: list[Fraction] = []

        def dist(x: Fraction) -> Fraction:
            return norm_angle(x - p) if ccw else norm_angle(p - x)

        for q in self.finite_points:
            if q != p:
                attained.append(dist(q))
        for f in self.families:
            for seq in f.sequences():
                res = seq.nearest_ccw(p) if ccw else seq.nearest_cw(p)
                kind, val = res
                if kind == "point":
                    attained.append(dist(val))
                else:
                    accums.append(val)
        if not attained and not accums:
            return None
        best = min(attained) if attained else None
        worst_accum = min(accums) if accums else None
        if best is None:
            return None
        if worst_accum is not None and worst_accum < best:
            return None
        return norm_angle(p + best) if ccw else norm_angle(p - best)

    # -- arc membership ----------------------------------------------------

    def is_edge(self, a: Arc) -> bool:
        return not self.has_point_in(a.p, a.q) or not self.has_point_in(a.q, a.p)

    def arc_in(self, a: Arc) -> bool:
        if not (self.in_point_set(a.p) and self.in_point_set(a.q)):
            return False
        if a in self.extra_arcs:
            return True
        if any(f.is_member(a) for f in self.families):
            return True
        return self.is_edge(a)

    # -- triangles -----------------------------------------------------------

    def _candidates(self, x0: Fraction, x1: Fraction) -> set[Fraction]:
        out: set[Fraction] = set()
        for x in (x0, x1):
            for ccw in (True, False):
                q = self.nearest(x, ccw)
                if q is not None:
                    out.add(q)
            for f in self.families:
                out |= f.zigzag_partners(x)
                if f.base is not None and any(
                    seq.index_of(x) is not None for seq in f.sequences()
                ):
                    out.add(norm_angle(f.base))
                if f.base == x:
                    # flanking tips when the arc itself is a fountain arc
                    for seq in f.sequences():
                        other = x1 if x == x0 else x0
                        k = seq.index_of(other)
                        if k is not None:
                            if k > f.start:
                                out.add(seq.tip(k - 1))
                            out.add(seq.tip(k + 1))
            for a in self.extra_arcs:
                if x in a.endpoints():
                    out.add(a.other(x))
        out -= {x0, x1}
        return out

    def triangles_of(self, arc: Arc) -> list[tuple[Fraction, Fraction, Fraction]]:
        """The at most two triangles of the triangulation having this arc
        as a side, each as an increasing-angle corner triple."""
        if not self.arc_in(arc):
            raise ValueError(f"{arc} is not an arc of the triangulation")
        out = []
        for lo, hi in (arc.endpoints(), (arc.q, arc.p)):
            found = []
            for z in sorted(self._candidates(lo, hi)):
                if not in_open(lo, hi, z):
                    continue
                if self.arc_in(Arc.of(lo, z)) and self.arc_in(Arc.of(z, hi)):
                    found.append(z)
            if len(found) > 1:
                raise InvalidFamily(
                    f"arc {arc} has two apexes {found} on one side; "
                    "the described arc set is not a triangulation"
                )
            if found:
                out.append(tuple(sorted((lo, hi, found[0]))))
        return out

    def arc_neighbour_row(self, arc: Arc) -> dict[Arc, int]:
        """Signed quiver row of the arc: entries to the other sides of its
        flanking triangles under the fixed orientation convention."""
        row: dict[Arc, int] = {}
        for tri in self.triangles_of(arc):
            for src, dst in _triangle_arrows(tri):
                if src == arc:
                    row[dst] = row.get(dst, 0) + 1
                elif dst == arc:
                    row[src] = row.get(src, 0) - 1
        return {a: v for a, v in row.items() if v}

    def arc_exchangeable(self, arc: Arc) -> bool:
        return len(self.triangles_of(arc)) == 2

    # -- materialization -----------------------------------------------------

    def window_points(self, window: int) -> list[Fraction]:
        pts: set[Fraction] = set(self.finite_points)
        for f in self.families:
            pts |= f.points(window)
        return sorted(pts)

    def window_arcs(self, window: int) -> list[Arc]:
        """Family arcs of the window, exceptional arcs, and those edges of
        the FULL point set whose endpoints are materialized."""
        arcs: set[Arc] = set(self.extra_arcs)
        for f in self.families:
            arcs.update(f.arcs(window))
        pts = self.window_points(window)
        n = len(pts)
        for i in range(n):
            a = Arc.of(pts[i], pts[(i + 1) % n])
            if self.is_edge(a):
                arcs.add(a)
        return sorted(arcs)

    def limit_arcs(self) -> set[Arc]:
        out = set()
        for f in self.families:
            la = f.limit_arc()
            if la is not None:
                out.add(la)
        return out


def limit_arcs(it: InfiniteTriangulation) -> set[Arc]:
    return it.limit_arcs()


def triangulation_components(
    it: InfiniteTriangulation | FiniteTriangulation, window: int = 12
) -> list[list[Arc]]:
    """Partition of the materialized arcs by limit-arc separation: arcs
    share a part iff no limit arc has them on opposite closed sides; a
    limit arc that is itself an arc of the point set is its own part."""
    if isinstance(it, FiniteTriangulation):
        return [sorted(it.arcs)]
    arcs = it.window_arcs(window)
    limits = sorted(it.limit_arcs())

    def side(a: Arc, ell: Arc) -> str:
        if a == ell:
            return "self"
        within = lambda lo, hi, x: x == lo or x == hi or in_open(lo, hi, x)
        p_in_01 = within(ell.p, ell.q, a.p) and within(ell.p, ell.q, a.q)
        p_in_10 = within(ell.q, ell.p, a.p) and within(ell.q, ell.p, a.q)
        if p_in_01 and p_in_10:
            return "self"
        if p_in_01:
            return "a"
        if p_in_10:
            return "b"
        raise InvalidFamily(
            f"arc {a} crosses the limit arc {ell}; inconsistent triangulation"
        )

    groups: dict[tuple, list[Arc]] = {}
    for i, a in enumerate(arcs):
        key = tuple(side(a, ell) for ell in limits)
        if "self" in key:
            key = key + ("own", i)
        groups.setdefault(key, []).append(a)
    return [sorted(g) for g in sorted(groups.values(), key=lambda g: g[0])]
