"""Lazy infinite seeds and their finite full-subseed filtrations.

A SeedOracle answers local questions (matrix row, exchangeability) about a
possibly infinite seed; filtrations interleave neighbourhood balls across
connected components exactly as the colimit construction prescribes, with
every stage a finite full subseed connected to the next only by its own
coefficients. Mutations in the infinite seed are computed on a stage and
certified stable against the next one.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Protocol, Sequence

from .disc import (
    Arc,
    ArcFamily,
    FiniteTriangulation,
    InfiniteTriangulation,
    parse_arc_label,
    seed_from_triangulation,
    triangles,
    triangulation_components,
    validate_triangulation,
)
from .errors import (
    IncompatibleCone,
    LabelCollision,
    NotAdmissibleAtStage,
    NotFullSubseed,
    NotOnlyCoefficients,
    OracleInconsistent,
    ResourceLimit,
    SeedMismatch,
)
from .laurent import LaurentPoly, VarId
from .morphisms import (
    ClusterMap,
    VerificationReport,
    check_cm1_cm2,
    check_cm3,
    check_no_specialization_conditions,
)
from .seeds import (
    Seed,
    check_skew_symmetrizable,
    connected_components,
    coproduct,
    mutate_seed,
)

DEFAULT_MAX_STAGES = 64


class SeedOracle(Protocol):
    """Pure, locally finite view of a (possibly infinite) seed."""

    def neighbor_row(self, v: VarId) -> dict[VarId, int]:
        """The nonzero matrix row of v."""
        ...

    def is_exchangeable(self, v: VarId) -> bool:
        ...

    def representatives(self) -> list[VarId]:
        """One base vertex per connected component, in stage entry order."""
        ...


# -- built-in oracles -----------------------------------------------------------


class FiniteSeedOracle:
    """Wraps a finite seed; radius past the diameter reproduces it whole."""

    def __init__(self, seed: Seed):
        self.seed = seed.reroot()

    def neighbor_row(self, v: VarId) -> dict[VarId, int]:
        return dict(self.seed.matrix.get(v, {}))

    def is_exchangeable(self, v: VarId) -> bool:
        return v in self.seed.exchangeable

    def representatives(self) -> list[VarId]:
        return [min(c.labels) for c in connected_components(self.seed)]


class PathQuiverOracle:
    """Doubly infinite path quiver ... -> xm1 -> x0 -> x1 -> ..., every
    variable exchangeable. Negative positions are written xm1, xm2, ...
    ('m' for minus: the '-' sign is a term separator in Laurent text)."""

    @staticmethod
    def label(i: int) -> VarId:
        return f"x{i}" if i >= 0 else f"xm{-i}"

    def _index(self, v: VarId) -> int:
        body = v[1:]
        if v.startswith("xm"):
            body = v[2:]
            if body.isdigit() and int(body) > 0:
                return -int(body)
        elif v.startswith("x") and body.isdigit():
            return int(body)
        raise OracleInconsistent(f"unknown path-quiver label {v!r}")

    def neighbor_row(self, v: VarId) -> dict[VarId, int]:
        i = self._index(v)
        return {self.label(i + 1): 1, self.label(i - 1): -1}

    def is_exchangeable(self, v: VarId) -> bool:
        self._index(v)
        return True

    def representatives(self) -> list[VarId]:
        return ["x0"]


class TriangulationOracle:
    """Seed oracle of a finitely described infinite triangulation; labels
    are canonical arc labels."""

    def __init__(
        self,
        tri: InfiniteTriangulation,
        representatives: Sequence[VarId] | None = None,
        window: int = 8,
    ):
        self.tri = tri
        if representatives is None:
            parts = triangulation_components(tri, window=window)
            representatives = [part[0].label for part in parts]
        self._reps = list(representatives)
        self._rows: dict[VarId, dict[VarId, int]] = {}
        self._ex: dict[VarId, bool] = {}

    def neighbor_row(self, v: VarId) -> dict[VarId, int]:
        if v not in self._rows:
            arc = parse_arc_label(v)
            self._rows[v] = {
                a.label: s for a, s in self.tri.arc_neighbour_row(arc).items()
            }
        return dict(self._rows[v])

    def is_exchangeable(self, v: VarId) -> bool:
        if v not in self._ex:
            self._ex[v] = self.tri.arc_exchangeable(parse_arc_label(v))
        return self._ex[v]

    def representatives(self) -> list[VarId]:
        return list(self._reps)


def fan_oracle() -> TriangulationOracle:
    """One-sided infinite fan: base 0, tips 1/2 - 1/(2k) accumulating at
    1/2 from the right."""
    tri = InfiniteTriangulation(
        families=(
            ArcFamily(
                "right-fountain",
                limit=Fraction(1, 2),
                scale=Fraction(1, 2),
                start=2,
                base=Fraction(0),
            ),
        )
    )
    return TriangulationOracle(
        tri, representatives=[Arc.of(Fraction(0), Fraction(1, 4)).label]
    )


def split_fountain_oracle() -> TriangulationOracle:
    """The split fountain: fans at 1/4 and 3/4 converging to the limit
    point 0 from either side, with the non-exchangeable internal arc
    {1/4, 3/4} in the middle."""
    tri = split_fountain_triangulation()
    return TriangulationOracle(
        tri,
        representatives=[
            Arc.of(Fraction(1, 4), Fraction(1, 8)).label,
            Arc.of(Fraction(1, 4), Fraction(1, 2)).label,
            Arc.of(Fraction(3, 4), Fraction(7, 8)).label,
        ],
    )


def split_fountain_triangulation() -> InfiniteTriangulation:
    return InfiniteTriangulation(
        families=(
            ArcFamily(
                "left-fountain",
                limit=Fraction(0),
                scale=Fraction(1, 2),
                start=4,
                base=Fraction(1, 4),
            ),
            ArcFamily(
                "right-fountain",
                limit=Fraction(0),
                scale=Fraction(1, 2),
                start=4,
                base=Fraction(3, 4),
            ),
        ),
        extra_arcs=frozenset({Arc.of(Fraction(1, 4), Fraction(3, 4))}),
        finite_points=(Fraction(1, 2), Fraction(1, 6), Fraction(5, 6)),
    )


def nest_oracle() -> TriangulationOracle:
    """A nest around 1/2: zigzag arcs between a_k = 1/2 - 1/(4k) and
    b_k = 1/2 + 1/(4k); connected (a nest has no limit arc)."""
    tri = nest_triangulation()
    return TriangulationOracle(
        tri, representatives=[Arc.of(Fraction(1, 4), Fraction(3, 4)).label]
    )


def nest_triangulation() -> InfiniteTriangulation:
    return InfiniteTriangulation(
        families=(
            ArcFamily(
                "nest",
                limit=Fraction(1, 2),
                scale=Fraction(1, 4),
                start=1,
            ),
        )
    )


ORACLES = {
    "path-quiver": PathQuiverOracle,
    "fan": fan_oracle,
    "split-fountain": split_fountain_oracle,
    "nest": nest_oracle,
}


# -- balls and filtrations --------------------------------------------------------


def materialize_ball(oracle: SeedOracle, center: VarId, radius: int) -> Seed:
    """The neighbourhood ball of the colimit construction: the radius-0
    ball is ({center}, {}, [0]); each step adds all neighbours, and the
    exchangeables of the radius-(i+1) ball are the radius-i cluster
    intersected with the oracle's exchangeables."""
    shells = [{center}]
    cluster = {center}
    for _ in range(radius):
        new = set()
        for v in sorted(shells[-1]):
            for w in oracle.neighbor_row(v):
                if w not in cluster:
                    new.add(w)
        cluster |= new
        shells.append(new)
    if radius == 0:
        exchangeable: set[VarId] = set()
    else:
        inner = set().union(*shells[:-1])
        exchangeable = {v for v in inner if oracle.is_exchangeable(v)}
    rows = {v: oracle.neighbor_row(v) for v in cluster}
    matrix = {
        v: {w: b for w, b in row.items() if w in cluster and b}
        for v, row in rows.items()
    }
    matrix = {v: r for v, r in matrix.items() if r}
    for v in cluster:
        for w in cluster:
            if (matrix.get(v, {}).get(w, 0) != 0) != (matrix.get(w, {}).get(v, 0) != 0):
                raise OracleInconsistent(
                    f"asymmetric neighbour reports between {v!r} and {w!r}"
                )
    seed = Seed.initial(sorted(cluster), exchangeable, matrix)
    try:
        check_skew_symmetrizable(seed.matrix, seed.labels)
    except Exception as exc:
        raise OracleInconsistent(f"ball at {center!r} is not skew-symmetrizable: {exc}")
    return seed


@dataclass(frozen=True)
class Filtration:
    """Tower of finite full subseeds with verified inclusion morphisms."""

    stages: tuple[Seed, ...]
    inclusions: tuple[ClusterMap, ...]  # consecutive stages
    provenance: str = "oracle-balls"

    def __post_init__(self):
        assert len(self.inclusions) == max(0, len(self.stages) - 1)


def check_only_coefficients(
    inner: Seed, outer: Seed
) -> tuple[bool, VarId | None]:
    """Pass iff every inner label with an outside neighbour is a
    coefficient of inner. Raises NotFullSubseed if inner is not a full
    subseed of outer."""
    inner_labels = set(inner.labels)
    outer_labels = set(outer.labels)
    if not inner_labels <= outer_labels:
        raise NotFullSubseed("inner cluster is not contained in the outer cluster")
    if not inner.exchangeable <= outer.exchangeable:
        raise NotFullSubseed("inner exchangeables are not outer exchangeables")
    for v in inner.labels:
        for w in inner.labels:
            if inner.b(v, w) != outer.b(v, w):
                raise NotFullSubseed(
                    f"matrix entry ({v!r}, {w!r}) is not the outer restriction"
                )
    for v in sorted(inner.exchangeable):
        for w in outer.neighbours(v):
            if w not in inner_labels:
                return False, v
    return True, None


def inclusion_morphism(inner: Seed, outer: Seed) -> ClusterMap:
    """Identity-on-labels morphism of a full subseed connected only by its
    coefficients; the morphism conditions are verified, not assumed."""
    ok, witness = check_only_coefficients(inner, outer)
    if not ok:
        raise NotOnlyCoefficients(witness)
    m = ClusterMap(inner, outer, {l: l for l in inner.labels})
    report = check_no_specialization_conditions(m)
    if not report.passed:
        raise NotOnlyCoefficients(
            f"inclusion fails the morphism conditions: {report.witnesses}"
        )
    return m


def _stage_seed(oracle: SeedOracle, reps: Sequence[VarId], i: int) -> Seed:
    balls = [
        materialize_ball(oracle, reps[j], i - j)
        for j in range(min(i + 1, len(reps)))
    ]
    try:
        return coproduct(balls)
    except LabelCollision as exc:
        raise OracleInconsistent(
            f"component representatives are not disconnected: {exc}"
        ) from exc


def build_filtration(oracle: SeedOracle, steps: int) -> Filtration:
    """Interleave component balls (component j enters at stage j, radius
    growing by one per stage); every consecutive inclusion is verified."""
    reps = oracle.representatives()
    stages = [_stage_seed(oracle, reps, i) for i in range(steps)]
    inclusions = []
    for inner, outer in zip(stages, stages[1:]):
        inclusions.append(inclusion_morphism(inner, outer))
    return Filtration(tuple(stages), tuple(inclusions), "oracle-balls")


# -- stable mutation ---------------------------------------------------------------


def _mutate_tracking(seed: Seed, sequence: Sequence[VarId], target: VarId):
    """Mutate along the sequence tracking the target's descendant; returns
    (value, ok, blocking_step)."""
    desc = target
    current = seed
    for step in sequence:
        if step not in current.exchangeable:
            return None, False, step
        new = mutate_seed(current, step)
        if step == desc:
            desc = next(l for l in new.labels if l not in current.labels)
        current = new
    return current.values[desc], True, None


def stable_mutation(
    oracle: SeedOracle,
    sequence: Sequence[VarId],
    target: VarId,
    max_stages: int = DEFAULT_MAX_STAGES,
) -> tuple[LaurentPoly, int]:
    """Value of the mutated target in the least stage where the sequence is
    admissible and the target is present, certified by exact agreement with
    the value computed one stage higher. Returns (value, stage index)."""
    reps = oracle.representatives()
    for i in range(max_stages):
        stage = _stage_seed(oracle, reps, i)
        if target not in stage.labels:
            continue
        value, ok, blocker = _mutate_tracking(stage, sequence, target)
        if not ok:
            if blocker in stage.labels and not oracle.is_exchangeable(blocker):
                raise NotAdmissibleAtStage(blocker)
            continue
        next_stage = _stage_seed(oracle, reps, i + 1)
        value2, ok2, _ = _mutate_tracking(next_stage, sequence, target)
        if not ok2 or value2 != value:
            raise OracleInconsistent(
                f"mutation of {target!r} along {tuple(sequence)!r} is not "
                f"stable between stages {i} and {i + 1}"
            )
        return value, i
    raise ResourceLimit(
        f"no stage up to {max_stages} admits the sequence {tuple(sequence)!r} "
        f"with target {target!r}"
    )


# -- mediating morphism ---------------------------------------------------------------


def mediating_morphism(
    fil: Filtration, cone: Sequence[ClusterMap], depth: int = 4
) -> tuple[ClusterMap, VerificationReport]:
    """The unique map out of the filtration's top stage agreeing with a
    compatible cone; well-definedness is verified labelwise, CM1/CM2 must
    hold, and CM3 is checked to the given depth."""
    if len(cone) != len(fil.stages):
        raise IncompatibleCone("<arity>", (len(cone), len(fil.stages)))
    target = cone[0].target
    for i, (stage, g) in enumerate(zip(fil.stages, cone)):
        if not g.source.same_seed(stage):
            raise SeedMismatch(f"cone map {i} is not rooted at stage {i}")
        if not g.target.same_seed(target):
            raise SeedMismatch("cone maps must share one target seed")
    for i in range(len(cone)):
        for j in range(i + 1, len(cone)):
            for x in fil.stages[i].labels:
                if cone[j].assignment[x] != cone[i].assignment[x]:
                    raise IncompatibleCone(x, (i, j))
    assignment = dict(cone[-1].assignment)
    med = ClusterMap(fil.stages[-1], target, assignment)
    cm1, cm2, wit = check_cm1_cm2(med)
    if not (cm1 and cm2):
        raise IncompatibleCone(wit[0] if wit else "<cm2>", ("cm2", None))
    report = check_cm3(med, depth)
    return med, report


# -- triangulation filtrations -----------------------------------------------------------


def _arc_adjacency_finite(tri: FiniteTriangulation) -> dict[Arc, set[Arc]]:
    adj: dict[Arc, set[Arc]] = {a: set() for a in tri.arcs}
    for p, q, r in triangles(tri):
        sides = [Arc.of(p, q), Arc.of(q, r), Arc.of(r, p)]
        for a in sides:
            for b in sides:
                if a != b:
                    adj[a].add(b)
    return adj


def triangulation_filtration(
    tri: InfiniteTriangulation | FiniteTriangulation,
    steps: int,
    base_arcs: Sequence[Arc] | None = None,
    window: int = 8,
) -> Filtration:
    """Stages grow per connected component by glueing the triangles
    adjacent to the previous stage, starting from one designated arc per
    component; each component stage is validated as a finite triangulation
    and converted to its seed, components interleaved as in the ball
    construction."""
    finite = isinstance(tri, FiniteTriangulation)
    if finite:
        adjacency = _arc_adjacency_finite(tri)

        def neighbours(a: Arc) -> set[Arc]:
            return adjacency[a]

        parts = [sorted(tri.arcs)]
    else:

        def neighbours(a: Arc) -> set[Arc]:
            out: set[Arc] = set()
            for corners in tri.triangles_of(a):
                p, q, r = corners
                out |= {Arc.of(p, q), Arc.of(q, r), Arc.of(r, p)}
            out.discard(a)
            return out

        parts = triangulation_components(tri, window=window)
    if base_arcs is None:
        base_arcs = [part[0] for part in parts]

    grown: list[list[set[Arc]]] = []
    for base in base_arcs:
        levels = [{base}]
        for _ in range(steps):
            current = levels[-1]
            new = set(current)
            for a in sorted(current):
                new |= neighbours(a)
            levels.append(new)
        grown.append(levels)

    def component_stage(j: int, r: int) -> Seed:
        arcs = grown[j][r]
        points = {p for a in arcs for p in a.endpoints()}
        t = validate_triangulation(points, arcs)
        return seed_from_triangulation(t)

    stages = []
    for i in range(steps):
        seeds = [component_stage(j, i - j) for j in range(min(i + 1, len(base_arcs)))]
        stages.append(coproduct(seeds))
    inclusions = []
    for inner, outer in zip(stages, stages[1:]):
        inclusions.append(inclusion_morphism(inner, outer))
    return Filtration(tuple(stages), tuple(inclusions), "triangulation-glueing")
