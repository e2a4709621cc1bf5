"""Candidate maps between rooted cluster algebras and their verification.

A ClusterMap assigns each source cluster label a target label or an
integer. Its algebra-level extension substitutes the assignment into
Laurent expansions over the source initial cluster; an optional table of
extra generator images covers ring generators whose substitution image is
0/0-indeterminate (the ideal-morphism counterexample needs one). All
CM3-style verification is depth-bounded and says so; nothing is claimed
globally.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import (
    Inconclusive,
    InvalidSeed,
    NonLaurentImage,
    NotSimilar,
    ResourceLimit,
    SeedMismatch,
)
from .laurent import LaurentPoly, Monomial, VarId, format_poly, lp_exact_div
from .seeds import (
    Seed,
    enumerate_cluster_variables,
    exchangeably_connected_components,
    full_subseed,
    mutate_seed,
    verify_similarity_bijection,
)
from .errors import NotDivisible

Image = VarId | int

DEFAULT_CM3_DEPTH = 4
DEFAULT_NODE_BUDGET = 100_000


@dataclass(frozen=True)
class ClusterMap:
    """A candidate rooted cluster morphism, given on the initial cluster.

    Both endpoint seeds are re-rooted on construction (each label's value
    becomes its own monomial): a rooted cluster algebra depends only on
    (cluster, exchangeables, matrix).
    """

    source: Seed
    target: Seed
    assignment: dict[VarId, Image]
    extra: dict[LaurentPoly, Image] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "source", self.source.reroot())
        object.__setattr__(self, "target", self.target.reroot())
        src_labels = set(self.source.labels)
        tgt_labels = set(self.target.labels)
        if set(self.assignment) != src_labels:
            raise InvalidSeed("assignment must be total on the source labels")
        for x, img in self.assignment.items():
            if isinstance(img, bool) or not isinstance(img, (int, str)):
                raise InvalidSeed(f"image of {x!r} must be a label or an integer")
            if isinstance(img, str) and img not in tgt_labels:
                raise InvalidSeed(f"image label {img!r} is not a target label")
        for gen, img in self.extra.items():
            if isinstance(img, str) and img not in tgt_labels:
                raise InvalidSeed(f"extra image label {img!r} is not a target label")
            if not gen.variables() <= src_labels:
                raise InvalidSeed(
                    "extra generators must be Laurent polynomials in the "
                    "source cluster"
                )
            lhs, rhs = self._extra_consistency(gen, img)
            if lhs != rhs:
                raise InvalidSeed(
                    f"extra generator image is inconsistent: f({format_poly(gen)}) "
                    f"cannot be {img!r}"
                )

    # -- algebra-level extension -------------------------------------------

    def _resolve(self, img: Image) -> LaurentPoly:
        if isinstance(img, str):
            return LaurentPoly.var(img)
        return LaurentPoly.const(img)

    def _split(self, p: LaurentPoly) -> tuple[LaurentPoly, Monomial]:
        """p = N * D^-1 with N a polynomial and D a nonnegative monomial."""
        mins: dict[VarId, int] = {}
        for m in p.terms:
            for v, e in m:
                mins[v] = min(mins.get(v, 0), e)
        denom = tuple(sorted((v, -e) for v, e in mins.items() if e < 0))
        return p.shift(denom), denom

    def _subst_poly(self, p: LaurentPoly) -> LaurentPoly:
        out = LaurentPoly.zero()
        for mono, coeff in p.terms.items():
            term = LaurentPoly.const(coeff)
            for v, e in mono:
                if e < 0:
                    raise AssertionError("substitution needs a polynomial")
                term = term * self._resolve(self.assignment[v]) ** e
            out = out + term
        return out

    def _extra_consistency(self, gen: LaurentPoly, img: Image):
        num, denom = self._split(gen)
        f_num = self._subst_poly(num)
        f_den = self._subst_poly(LaurentPoly({denom: 1}))
        return f_num, self._resolve(img) * f_den

    def apply(self, p: LaurentPoly) -> LaurentPoly:
        """Image of a Laurent polynomial over the source initial cluster.

        Substitution; on a 0/0-indeterminate quotient, the extra generator
        table is consulted for the exact value. Raises NonLaurentImage when
        the image leaves the target Laurent ring (inverted zero, or an
        inexact integer division).
        """
        num, denom = self._split(p)
        f_num = self._subst_poly(num)
        f_den = self._subst_poly(LaurentPoly({denom: 1}))
        if f_den.is_zero():
            if f_num.is_zero():
                hit = self.extra.get(p)
                if hit is not None:
                    return self._resolve(hit)
                raise NonLaurentImage(
                    f"image of {format_poly(p)} is 0/0-indeterminate and no "
                    "extra generator image is declared"
                )
            raise NonLaurentImage(
                f"image of {format_poly(p)} inverts a variable specialized to 0"
            )
        try:
            return lp_exact_div(f_num, f_den)
        except NotDivisible as exc:
            raise NonLaurentImage(
                f"image of {format_poly(p)} leaves the integer Laurent ring"
            ) from exc

    def label_image(self, x: VarId) -> Image:
        return self.assignment[x]

    def is_without_specializations(self) -> bool:
        return all(isinstance(i, str) for i in self.assignment.values())


# -- CM1 / CM2 ----------------------------------------------------------------


@dataclass(frozen=True)
class Cm3Counterexample:
    sequence: tuple[VarId, ...]
    variable: VarId
    lhs: LaurentPoly
    rhs: LaurentPoly


@dataclass(frozen=True)
class VerificationReport:
    cm1: bool
    cm2: bool
    cm2_witnesses: tuple[VarId, ...]
    cm3_verified_to: int | None
    counterexample: Cm3Counterexample | None
    depth: int
    nodes: int

    @property
    def passed(self) -> bool:
        return self.cm1 and self.cm2 and self.counterexample is None


def check_cm1_cm2(m: ClusterMap) -> tuple[bool, bool, tuple[VarId, ...]]:
    """CM1 holds by the shape of the assignment; CM2 fails with witnesses
    when an exchangeable variable maps to a non-exchangeable target label."""
    witnesses = tuple(
        x
        for x in sorted(m.source.exchangeable)
        if isinstance(m.assignment[x], str)
        and m.assignment[x] not in m.target.exchangeable
    )
    return True, not witnesses, witnesses


# -- biadmissible enumeration ---------------------------------------------------


@dataclass(frozen=True)
class _PairState:
    src: Seed
    tgt: Seed
    corr: dict[VarId, Image]  # current source label -> current target label | int
    desc: dict[VarId, VarId]  # initial source label -> current source label
    sequence: tuple[VarId, ...]
    last: VarId | None  # initial ancestor of the label mutated last


def _initial_state(m: ClusterMap) -> _PairState:
    return _PairState(
        m.source,
        m.target,
        dict(m.assignment),
        {y: y for y in m.source.labels},
        (),
        None,
    )


def _biadmissible_steps(state: _PairState) -> list[VarId]:
    out = []
    for x in sorted(state.src.exchangeable):
        img = state.corr[x]
        if isinstance(img, str) and img in state.tgt.exchangeable:
            out.append(x)
    return out


def _advance(state: _PairState, x: VarId) -> _PairState:
    img = state.corr[x]
    new_src = mutate_seed(state.src, x)
    new_tgt = mutate_seed(state.tgt, img)
    new_x = next(l for l in new_src.labels if l not in state.src.labels)
    new_img = next(l for l in new_tgt.labels if l not in state.tgt.labels)
    # The mutation acts on the element `img`, so every tracked image equal
    # to it follows the mutation, not only the stepped label's.
    corr: dict[VarId, Image] = {}
    for lbl, tgt_img in state.corr.items():
        corr[new_x if lbl == x else lbl] = (
            new_img if tgt_img == img else tgt_img
        )
    desc = dict(state.desc)
    last = None
    for y, cur in desc.items():
        if cur == x:
            desc[y] = new_x
            last = y
    return _PairState(new_src, new_tgt, corr, desc, state.sequence + (x,), last)


def _walk_biadmissible(
    m: ClusterMap, depth: int, max_nodes: int
) -> Iterable[_PairState]:
    """Breadth-first over biadmissible sequences, shortest first and
    lexicographic within a length; yields every visited state including
    the root."""
    state = _initial_state(m)
    yield state
    frontier = [state]
    nodes = 1
    for _ in range(depth):
        nxt = []
        for st in frontier:
            for x in _biadmissible_steps(st):
                nodes += 1
                if nodes > max_nodes:
                    raise ResourceLimit(
                        f"biadmissible enumeration exceeded {max_nodes} nodes"
                    )
                child = _advance(st, x)
                yield child
                nxt.append(child)
        frontier = nxt
        if not frontier:
            break


def enumerate_biadmissible(
    m: ClusterMap, depth: int, max_nodes: int = DEFAULT_NODE_BUDGET
) -> list[tuple[VarId, ...]]:
    """All biadmissible sequences of length <= depth (the empty sequence
    included), shortest first."""
    return [st.sequence for st in _walk_biadmissible(m, depth, max_nodes)]


# -- CM3 -----------------------------------------------------------------------


def check_cm3(
    m: ClusterMap, depth: int = DEFAULT_CM3_DEPTH, max_nodes: int = DEFAULT_NODE_BUDGET
) -> VerificationReport:
    """Verify f(mu_seq(y)) == mu_f(seq)(f(y)) for every biadmissible
    sequence up to the depth and every initial variable with non-integer
    image; exact equality of Laurent polynomials.

    The recorded counterexample is deterministic: sequences in BFS order
    (shortest, then lexicographically least); within a sequence, the
    variable mutated by its last step is checked first (the exchange
    relation itself), then the remaining initial labels in label order.
    """
    cm1, cm2, cm2_wit = check_cm1_cm2(m)
    tracked = [x for x in m.source.labels if isinstance(m.assignment[x], str)]
    nodes = 0
    counterexample = None
    for st in _walk_biadmissible(m, depth, max_nodes):
        nodes += 1
        order = tracked
        if st.last is not None and st.last in tracked:
            order = [st.last] + [y for y in tracked if y != st.last]
        for y in order:
            cur = st.desc[y]
            img = st.corr[cur]
            lhs = m.apply(st.src.values[cur])
            rhs = st.tgt.values[img]
            if lhs != rhs:
                counterexample = Cm3Counterexample(st.sequence, y, lhs, rhs)
                break
        if counterexample:
            break
    return VerificationReport(
        cm1=cm1,
        cm2=cm2,
        cm2_witnesses=cm2_wit,
        cm3_verified_to=depth if counterexample is None else None,
        counterexample=counterexample,
        depth=depth,
        nodes=nodes,
    )


def biadmissible_descendant(m: ClusterMap, sequence: Sequence[VarId]) -> ClusterMap:
    """The induced map between the seeds mutated along a biadmissible
    sequence and its image sequence."""
    st = _initial_state(m)
    for x in sequence:
        if x not in _biadmissible_steps(st):
            raise SeedMismatch(f"sequence {sequence!r} is not biadmissible at {x!r}")
        st = _advance(st, x)
    return ClusterMap(st.src, st.tgt, dict(st.corr))


# -- Theorem classification for maps without specializations --------------------


@dataclass(frozen=True)
class NoSpecReport:
    condition1: bool
    condition2: bool
    condition3: bool
    witnesses: tuple[str, ...]
    component_signs: tuple[int, ...]

    @property
    def passed(self) -> bool:
        return self.condition1 and self.condition2 and self.condition3


def check_no_specialization_conditions(
    m: ClusterMap, depth: int = DEFAULT_CM3_DEPTH, max_nodes: int = DEFAULT_NODE_BUDGET
) -> NoSpecReport:
    """The three-way combinatorial characterization of maps whose algebraic
    extension is a rooted cluster morphism (no specializations allowed).

    (1) is checked exactly; (2) first by the sufficient row-equality
    criterion, falling back to a depth-bounded search for a replayable
    sign-conflict witness (raising Inconclusive when neither settles it);
    (3) exactly, one global sign per exchangeably connected component of
    the image seed.
    """
    if not m.is_without_specializations():
        raise InvalidSeed("the characterization applies to maps without specializations")
    witnesses: list[str] = []

    # (1) injective on exchangeables, into the target exchangeables
    cond1 = True
    seen: dict[VarId, VarId] = {}
    for x in sorted(m.source.exchangeable):
        img = m.assignment[x]
        if img not in m.target.exchangeable:
            cond1 = False
            witnesses.append(f"condition1: {x} -> {img} is not exchangeable")
        if img in seen:
            cond1 = False
            witnesses.append(
                f"condition1: {seen[img]} and {x} share the image {img}"
            )
        seen[img] = x

    # (2) collisions only between coefficients, with stable neighbour signs
    cond2 = True
    collisions: list[tuple[VarId, VarId]] = []
    by_image: dict[VarId, list[VarId]] = {}
    for x in m.source.labels:
        by_image.setdefault(m.assignment[x], []).append(x)
    for img, xs in sorted(by_image.items()):
        if len(xs) < 2:
            continue
        for x in xs:
            if x in m.source.exchangeable:
                cond2 = False
                witnesses.append(
                    f"condition2: exchangeable {x} shares image {img}"
                )
        for i in range(len(xs)):
            for j in range(i + 1, len(xs)):
                collisions.append((xs[i], xs[j]))
    needs_search = []
    if cond2:
        for x, y in collisions:
            if all(
                m.source.b(x, v) == m.source.b(y, v)
                for v in m.source.exchangeable
            ):
                continue
            needs_search.append((x, y))
    if cond2 and needs_search:
        conflict = _condition2_search(m.source, needs_search, depth, max_nodes)
        if conflict is not None:
            cond2 = False
            witnesses.append(
                "condition2: sequence {} gives opposite signs b[{}][{}]={} "
                "vs b[{}][{}]={}".format(*conflict)
            )
        else:
            raise Inconclusive(
                "condition (2): the sufficient criterion fails for "
                f"{needs_search} and no sign conflict was found to depth {depth}",
                condition="condition2",
            )

    # (3) signed-sum matrix condition per exchangeably connected component
    img_seed = image_seed(m)
    cond3 = True
    signs: list[int] = []
    for comp in exchangeably_connected_components(img_seed):
        members = [
            x
            for x in sorted(m.source.exchangeable)
            if m.assignment[x] in comp.exchangeable
        ]
        allowed = {1, -1}
        for y in members:
            fy = m.assignment[y]
            sums: dict[VarId, int] = {}
            for v in m.source.labels:
                b = m.source.b(y, v)
                if b:
                    sums[m.assignment[v]] = sums.get(m.assignment[v], 0) + b
            sums = {v: s for v, s in sums.items() if s}
            row = {w: b for w, b in m.target.row(fy).items() if b}
            ok = set()
            if row == sums:
                ok.add(1)
            if row == {v: -s for v, s in sums.items()}:
                ok.add(-1)
            allowed &= ok
            if not allowed:
                cond3 = False
                witnesses.append(
                    f"condition3: row of {fy} is not the signed image sum of "
                    f"the row of {y} (component of {comp.labels[0]})"
                )
                break
        signs.append(max(allowed) if allowed else 0)
    return NoSpecReport(cond1, cond2, cond3, tuple(witnesses), tuple(signs))


def _condition2_search(
    seed: Seed, pairs: list[tuple[VarId, VarId]], depth: int, max_nodes: int
):
    """Look for an admissible sequence after which some exchangeable z
    neighbours both members of a colliding coefficient pair with opposite
    signs. Coefficients keep their labels under mutation."""
    frontier = [((), seed)]
    nodes = 1
    for _ in range(depth + 1):
        nxt = []
        for seq, s in frontier:
            for x, y in pairs:
                for z in sorted(s.exchangeable):
                    bx, by = s.b(z, x), s.b(z, y)
                    if bx * by < 0:
                        return (seq, z, x, bx, z, y, by)
            for step in sorted(s.exchangeable):
                nodes += 1
                if nodes > max_nodes:
                    raise ResourceLimit(
                        f"condition-2 search exceeded {max_nodes} nodes"
                    )
                nxt.append((seq + (step,), mutate_seed(s, step)))
        frontier = nxt
    return None


# -- image seed and ideal witnesses ---------------------------------------------


def image_seed(m: ClusterMap) -> Seed:
    """(f(X) n X', f(ex) n ex', restricted matrix): the full subseed of the
    target on the image labels, whose exchangeables are images of source
    exchangeables that land in target exchangeables."""
    labels = [
        l
        for l in m.target.labels
        if any(m.assignment[x] == l for x in m.source.labels)
    ]
    ex = {
        m.assignment[x]
        for x in m.source.exchangeable
        if isinstance(m.assignment[x], str)
        and m.assignment[x] in m.target.exchangeable
    }
    sub = full_subseed(m.target, labels)
    return Seed(sub.labels, frozenset(ex), sub.matrix, dict(sub.values))


@dataclass(frozen=True)
class IdealReport:
    status: str  # "witness" | "ideal-to-depth"
    witness: LaurentPoly | None
    depth: int

    @property
    def is_witness(self) -> bool:
        return self.status == "witness"


def check_ideal_witness(
    m: ClusterMap, depth: int = DEFAULT_CM3_DEPTH, max_nodes: int = DEFAULT_NODE_BUDGET
) -> IdealReport:
    """Search for an image value provably outside the cluster algebra of
    the image seed.

    Membership is decidable only when the image seed has no exchangeable
    variables (a polynomial ring on its coefficients); otherwise the
    report is 'ideal-to-depth', meaning no provable witness at this depth.
    The caller is responsible for having verified m as a rooted cluster
    morphism to the same depth.
    """
    images: list[LaurentPoly] = []
    for p in enumerate_cluster_variables(m.source, depth, max_nodes):
        images.append(m.apply(p))
    img_seed = image_seed(m)
    generators = set(enumerate_cluster_variables(img_seed, depth, max_nodes)) if img_seed.labels else set()
    target_vars = set(enumerate_cluster_variables(m.target, depth, max_nodes))
    if not img_seed.exchangeable:
        coeffs = set(img_seed.labels)
        for img in images:
            if img.as_int() is not None:
                continue
            if img not in target_vars or img in generators:
                continue
            inside = all(
                e > 0 and v in coeffs for mono in img.terms for v, e in mono
            )
            if not inside:
                return IdealReport("witness", img, depth)
    return IdealReport("ideal-to-depth", None, depth)


# -- composition and similarity ---------------------------------------------------


def compose(g: ClusterMap, f: ClusterMap) -> ClusterMap:
    """g after f; integer images absorb (a unital ring homomorphism fixes
    the integers). Extra generator tables do not compose and must be empty."""
    if f.extra or g.extra:
        raise SeedMismatch("maps with extra generator images do not compose")
    if not f.target.same_seed(g.source):
        raise SeedMismatch("target of f must equal the source of g")
    by_value = {g.source.values[l]: l for l in g.source.labels}
    translate = {l: by_value[f.target.values[l]] for l in f.target.labels}
    assignment: dict[VarId, Image] = {}
    for x, img in f.assignment.items():
        if isinstance(img, int):
            assignment[x] = img
        else:
            assignment[x] = g.assignment[translate[img]]
    return ClusterMap(f.source, g.target, assignment)


def identity_map(seed: Seed) -> ClusterMap:
    return ClusterMap(seed, seed, {l: l for l in seed.labels})


def morphism_from_similarity(
    bijection: Mapping[VarId, VarId], s: Seed, t: Seed
) -> tuple[ClusterMap, ClusterMap]:
    """Forward and inverse ClusterMaps induced by a similarity bijection;
    both are verified against the no-specialization characterization."""
    if not verify_similarity_bijection(s, t, bijection):
        raise NotSimilar("the bijection is not a similarity witness")
    forward = ClusterMap(s, t, dict(bijection))
    inverse = ClusterMap(t, s, {w: v for v, w in bijection.items()})
    for m in (forward, inverse):
        report = check_no_specialization_conditions(m)
        if not report.passed:
            raise NotSimilar(
                f"similarity bijection fails the morphism conditions: {report.witnesses}"
            )
    return forward, inverse
