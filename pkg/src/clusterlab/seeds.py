"""Seeds, mutation, admissible sequences, components, coproducts, similarity.

A seed is a cluster of labelled variables (each carrying its value as a
Laurent polynomial over some ambient variable set), an exchangeable subset,
and a sparse skew-symmetrizable exchange matrix indexed by the labels.
Seeds are immutable; mutation returns a new seed. Equality of seeds is
decided through the value-preserving label correspondence: labels are
bookkeeping, values are not.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Callable, Iterable, Mapping, Sequence

from .errors import (
    InvalidSeed,
    LabelCollision,
    NotAdmissible,
    NotExchangeable,
    NotSkewSymmetrizable,
    ResourceLimit,
    SearchBudgetExceeded,
)
from .laurent import LaurentPoly, VarId, format_poly, poly_product

Matrix = dict[VarId, dict[VarId, int]]

DEFAULT_NODE_BUDGET = 100_000


def _freeze_matrix(entries: Mapping[VarId, Mapping[VarId, int]]) -> Matrix:
    return {v: {w: b for w, b in row.items() if b} for v, row in entries.items() if row}


@dataclass(frozen=True, eq=False)
class Seed:
    """Triple (cluster, exchangeable subset, exchange matrix) with values."""

    labels: tuple[VarId, ...]
    exchangeable: frozenset[VarId]
    matrix: Matrix
    values: dict[VarId, LaurentPoly]

    def __post_init__(self):
        labels = set(self.labels)
        if len(labels) != len(self.labels):
            raise InvalidSeed("duplicate labels in cluster")
        if not self.exchangeable <= labels:
            extra = sorted(self.exchangeable - labels)
            raise InvalidSeed(f"exchangeable labels not in cluster: {extra}")
        for v, row in self.matrix.items():
            if v not in labels:
                raise InvalidSeed(f"matrix row {v!r} not in cluster")
            for w, b in row.items():
                if w not in labels:
                    raise InvalidSeed(f"matrix column {w!r} not in cluster")
                if b == 0:
                    raise InvalidSeed("zero entries must not be stored")
        if set(self.values) != labels:
            raise InvalidSeed("values must be given for exactly the cluster labels")
        seen: dict[LaurentPoly, VarId] = {}
        for v in self.labels:
            val = self.values[v]
            if val in seen:
                raise InvalidSeed(
                    f"labels {seen[val]!r} and {v!r} share the value {format_poly(val)}"
                )
            seen[val] = v

    # -- construction -----------------------------------------------------

    @classmethod
    def initial(
        cls,
        labels: Sequence[VarId],
        exchangeable: Iterable[VarId],
        entries: Iterable[tuple[VarId, VarId, int]] | Mapping[VarId, Mapping[VarId, int]],
    ) -> "Seed":
        """Seed whose values are the label monomials themselves."""
        if isinstance(entries, Mapping):
            matrix = _freeze_matrix(entries)
        else:
            matrix: Matrix = {}
            for v, w, b in entries:
                if b:
                    matrix.setdefault(v, {})[w] = b
        values = {v: LaurentPoly.var(v) for v in labels}
        return cls(tuple(labels), frozenset(exchangeable), matrix, values)

    @classmethod
    def empty(cls) -> "Seed":
        return cls((), frozenset(), {}, {})

    # -- queries ------------------------------------------------------------

    def b(self, v: VarId, w: VarId) -> int:
        return self.matrix.get(v, {}).get(w, 0)

    def row(self, v: VarId) -> dict[VarId, int]:
        return dict(self.matrix.get(v, {}))

    def neighbours(self, v: VarId) -> set[VarId]:
        out = {w for w, b in self.matrix.get(v, {}).items() if b}
        for u, r in self.matrix.items():
            if r.get(v):
                out.add(u)
        out.discard(v)
        return out

    def coefficients(self) -> tuple[VarId, ...]:
        return tuple(v for v in self.labels if v not in self.exchangeable)

    def value(self, v: VarId) -> LaurentPoly:
        return self.values[v]

    def is_initial(self) -> bool:
        return all(self.values[v] == LaurentPoly.var(v) for v in self.labels)

    def reroot(self) -> "Seed":
        """Forget values: each label becomes its own initial variable."""
        return Seed.initial(self.labels, self.exchangeable, self.matrix)

    def canonical_key(self):
        """Equality key under the value-preserving label correspondence."""
        texts = {v: format_poly(self.values[v]) for v in self.labels}
        order = sorted(self.labels, key=lambda v: texts[v])
        index = {v: i for i, v in enumerate(order)}
        entries = tuple(
            sorted(
                (index[v], index[w], b)
                for v, row in self.matrix.items()
                for w, b in row.items()
            )
        )
        return (
            tuple(texts[v] for v in order),
            tuple(v in self.exchangeable for v in order),
            entries,
        )

    def same_seed(self, other: "Seed") -> bool:
        return self.canonical_key() == other.canonical_key()

    def __repr__(self):
        ex = ",".join(sorted(self.exchangeable))
        return f"Seed(labels={list(self.labels)!r}, ex={{{ex}}})"


# -- skew-symmetrizability ----------------------------------------------------


def check_skew_symmetrizable(
    matrix: Mapping[VarId, Mapping[VarId, int]], labels: Iterable[VarId]
) -> dict[VarId, int]:
    """Least positive integral symmetrizer per connected component.

    Propagates d_w / d_v = -b_vw / b_wv along nonzero entries and clears
    denominators componentwise; raises NotSkewSymmetrizable with a witness
    pair (sign violation) or cycle (inconsistent ratios).
    """
    labels = sorted(set(labels))
    b: Callable[[VarId, VarId], int] = lambda v, w: matrix.get(v, {}).get(w, 0)
    adjacency: dict[VarId, set[VarId]] = {v: set() for v in labels}
    for v in labels:
        for w, entry in matrix.get(v, {}).items():
            if entry:
                adjacency[v].add(w)
                adjacency[w].add(v)
    for v in labels:
        for w in adjacency[v]:
            bvw, bwv = b(v, w), b(w, v)
            if bvw * bwv > 0 or (bvw == 0) != (bwv == 0):
                raise NotSkewSymmetrizable(
                    f"sign violation at ({v!r}, {w!r}): b={bvw}, b'={bwv}",
                    witness=(v, w),
                )

    d: dict[VarId, Fraction] = {}
    parent: dict[VarId, VarId] = {}
    result: dict[VarId, int] = {}
    for root in labels:
        if root in d:
            continue
        d[root] = Fraction(1)
        parent[root] = root
        component = [root]
        queue = [root]
        while queue:
            v = queue.pop(0)
            for w in sorted(adjacency[v]):
                ratio = Fraction(-b(v, w), b(w, v))
                if w in d:
                    if d[w] != d[v] * ratio:
                        cycle = _trace_cycle(parent, v, w)
                        raise NotSkewSymmetrizable(
                            f"inconsistent symmetrizer ratios on cycle {cycle}",
                            witness=cycle,
                        )
                else:
                    d[w] = d[v] * ratio
                    parent[w] = v
                    component.append(w)
                    queue.append(w)
        denom_lcm = 1
        for v in component:
            denom_lcm = denom_lcm * d[v].denominator // gcd(denom_lcm, d[v].denominator)
        scaled = {v: int(d[v] * denom_lcm) for v in component}
        shrink = 0
        for n in scaled.values():
            shrink = gcd(shrink, n)
        for v in component:
            result[v] = scaled[v] // shrink
    return result


def _trace_cycle(parent: Mapping[VarId, VarId], v: VarId, w: VarId) -> tuple[VarId, ...]:
    path_v = [v]
    while parent[path_v[-1]] != path_v[-1]:
        path_v.append(parent[path_v[-1]])
    path_w = [w]
    while parent[path_w[-1]] != path_w[-1]:
        path_w.append(parent[path_w[-1]])
    common = set(path_v) & set(path_w)
    cut_v = [x for x in path_v if x not in common]
    cut_w = [x for x in path_w if x not in common]
    meet = next(x for x in path_v if x in common)
    return tuple(cut_v + [meet] + list(reversed(cut_w)))


def seed_symmetrizer(seed: Seed) -> dict[VarId, int]:
    return check_skew_symmetrizable(seed.matrix, seed.labels)


# -- mutation --------------------------------------------------------------


def fresh_label(old: VarId, taken: Iterable[VarId]) -> VarId:
    """Primed-counter label scheme: x, x'1, x'2, ..."""
    taken = set(taken)
    base, n = old, 0
    if "'" in old:
        stem, _, suffix = old.rpartition("'")
        if suffix.isdigit():
            base, n = stem, int(suffix)
    while True:
        n += 1
        candidate = f"{base}'{n}"
        if candidate not in taken:
            return candidate


def mutate_seed(seed: Seed, x: VarId) -> Seed:
    """Mutation at an exchangeable variable: exchange relation for the value,
    standard matrix mutation, fresh primed label for the mutated variable."""
    if x not in seed.exchangeable:
        raise NotExchangeable(x)
    from .laurent import lp_exact_div

    row = seed.matrix.get(x, {})
    pos = poly_product(seed.values[v] ** e for v, e in row.items() if e > 0)
    neg = poly_product(seed.values[v] ** -e for v, e in row.items() if e < 0)
    new_value = lp_exact_div(pos + neg, seed.values[x])

    new_label = fresh_label(x, seed.labels)
    nbrs = [v for v, e in row.items() if e]

    matrix: Matrix = {}
    for v, r in seed.matrix.items():
        for w, entry in r.items():
            nv = new_label if v == x else v
            nw = new_label if w == x else w
            val = -entry if (v == x or w == x) else entry
            matrix.setdefault(nv, {})[nw] = val
    for v in nbrs:
        for w in nbrs:
            bump = abs(seed.b(v, x)) * seed.b(x, w) + seed.b(v, x) * abs(seed.b(x, w))
            if bump:
                r = matrix.setdefault(v, {})
                n = r.get(w, 0) + bump // 2
                if n:
                    r[w] = n
                else:
                    del r[w]
    matrix = {v: r for v, r in matrix.items() if r}

    labels = tuple(new_label if v == x else v for v in seed.labels)
    values = {v: seed.values[v] for v in seed.labels if v != x}
    values[new_label] = new_value
    exchangeable = (seed.exchangeable - {x}) | {new_label}
    return Seed(labels, frozenset(exchangeable), matrix, values)


def is_admissible(seed: Seed, sequence: Sequence[VarId]) -> bool:
    current = seed
    for step in sequence:
        if step not in current.exchangeable:
            return False
        current = mutate_seed(current, step)
    return True


def mutate_sequence(seed: Seed, sequence: Sequence[VarId]) -> Seed:
    current = seed
    for i, step in enumerate(sequence):
        if step not in current.exchangeable:
            raise NotAdmissible(sequence, i)
        current = mutate_seed(current, step)
    return current


def enumerate_cluster_variables(
    seed: Seed, depth: int, max_nodes: int = DEFAULT_NODE_BUDGET
) -> list[LaurentPoly]:
    """All values occurring in seeds reachable by admissible sequences of
    length <= depth; deduplicated by value, in deterministic BFS order."""
    out: list[LaurentPoly] = []
    seen_values: set[LaurentPoly] = set()

    def collect(s: Seed):
        for v in s.labels:
            val = s.values[v]
            if val not in seen_values:
                seen_values.add(val)
                out.append(val)

    seen_seeds = {seed.canonical_key()}
    collect(seed)
    frontier = [seed]
    nodes = 1
    for _ in range(depth):
        nxt = []
        for s in frontier:
            for x in sorted(s.exchangeable):
                child = mutate_seed(s, x)
                key = child.canonical_key()
                if key in seen_seeds:
                    continue
                nodes += 1
                if nodes > max_nodes:
                    raise ResourceLimit(
                        f"seed frontier exceeded the node budget of {max_nodes}"
                    )
                seen_seeds.add(key)
                collect(child)
                nxt.append(child)
        frontier = nxt
        if not frontier:
            break
    return out


def enumerate_seeds(
    seed: Seed, depth: int, max_nodes: int = DEFAULT_NODE_BUDGET
) -> list[Seed]:
    """Distinct seeds reachable within depth, BFS order (the mutation class,
    truncated)."""
    seen = {seed.canonical_key()}
    out = [seed]
    frontier = [seed]
    for _ in range(depth):
        nxt = []
        for s in frontier:
            for x in sorted(s.exchangeable):
                child = mutate_seed(s, x)
                key = child.canonical_key()
                if key in seen:
                    continue
                if len(out) + 1 > max_nodes:
                    raise ResourceLimit(
                        f"seed frontier exceeded the node budget of {max_nodes}"
                    )
                seen.add(key)
                out.append(child)
                nxt.append(child)
        frontier = nxt
        if not frontier:
            break
    return out


# -- components ---------------------------------------------------------------


def full_subseed(seed: Seed, labels: Iterable[VarId]) -> Seed:
    """Full subseed on the given labels: restricted matrix, exchangeables
    inherited, values kept."""
    keep = set(labels)
    if not keep <= set(seed.labels):
        raise InvalidSeed("subseed labels must belong to the seed")
    matrix = {
        v: {w: b for w, b in row.items() if w in keep}
        for v, row in seed.matrix.items()
        if v in keep
    }
    matrix = {v: r for v, r in matrix.items() if r}
    return Seed(
        tuple(v for v in seed.labels if v in keep),
        frozenset(seed.exchangeable & keep),
        matrix,
        {v: seed.values[v] for v in seed.labels if v in keep},
    )


def connected_components(seed: Seed) -> list[Seed]:
    """Partition under the neighbour relation, each part a full subseed.
    Parts are ordered by their least label."""
    remaining = set(seed.labels)
    parts = []
    for v in seed.labels:
        if v not in remaining:
            continue
        comp = {v}
        queue = [v]
        while queue:
            u = queue.pop(0)
            for w in seed.neighbours(u):
                if w in remaining and w not in comp:
                    comp.add(w)
                    queue.append(w)
        remaining -= comp
        parts.append(comp)
    parts.sort(key=lambda c: min(c))
    return [full_subseed(seed, c) for c in parts]


def exchangeably_connected_components(seed: Seed) -> list[Seed]:
    """Exchangeably connected components, one per class of exchangeable
    variables connected through exchangeable interior vertices; each
    component also contains the coefficients reachable by a length-1 path
    from one of its exchangeable members. Coefficients may belong to
    several components; coefficients adjacent to no exchangeable variable
    belong to none."""
    ex = seed.exchangeable
    classes: list[set[VarId]] = []
    remaining = set(ex)
    for x in sorted(ex):
        if x not in remaining:
            continue
        cls = {x}
        queue = [x]
        while queue:
            u = queue.pop(0)
            for w in seed.neighbours(u):
                if w in ex and w not in cls:
                    cls.add(w)
                    queue.append(w)
        remaining -= cls
        classes.append(cls)
    components = []
    for cls in sorted(classes, key=min):
        labels = set(cls)
        for x in cls:
            labels |= seed.neighbours(x)
        components.append(full_subseed(seed, labels))
    return components


def coproduct(seeds: Sequence[Seed]) -> Seed:
    """Disjoint union of clusters, exchangeable sets, and matrices."""
    seen: set[VarId] = set()
    labels: list[VarId] = []
    values: dict[VarId, LaurentPoly] = {}
    matrix: Matrix = {}
    exchangeable: set[VarId] = set()
    for s in seeds:
        for v in s.labels:
            if v in seen:
                raise LabelCollision(v)
            seen.add(v)
        labels.extend(s.labels)
        values.update(s.values)
        exchangeable |= s.exchangeable
        for v, row in s.matrix.items():
            matrix[v] = dict(row)
    return Seed(tuple(labels), frozenset(exchangeable), matrix, values)


def opposite_seed(seed: Seed) -> Seed:
    matrix = {v: {w: -b for w, b in row.items()} for v, row in seed.matrix.items()}
    return Seed(seed.labels, seed.exchangeable, matrix, dict(seed.values))


# -- similarity ---------------------------------------------------------------


def verify_similarity_bijection(
    s: Seed, t: Seed, bijection: Mapping[VarId, VarId]
) -> bool:
    """Re-verify a similarity witness directly against the definition."""
    if set(bijection) != set(s.labels):
        return False
    if set(bijection.values()) != set(t.labels):
        return False
    if {bijection[x] for x in s.exchangeable} != set(t.exchangeable):
        return False
    t_components = {
        frozenset(c.labels): c for c in exchangeably_connected_components(t)
    }
    for comp in exchangeably_connected_components(s):
        image = frozenset(bijection[v] for v in comp.labels)
        target = t_components.get(image)
        if target is None:
            return False
        ok_plus = all(
            t.b(bijection[v], bijection[w]) == comp.b(v, w)
            for v in comp.labels
            for w in comp.labels
        )
        ok_minus = all(
            t.b(bijection[v], bijection[w]) == -comp.b(v, w)
            for v in comp.labels
            for w in comp.labels
        )
        if not (ok_plus or ok_minus):
            return False
    return True


def check_similar(
    s: Seed, t: Seed, budget: int = 200_000
) -> dict[VarId, VarId] | None:
    """Search for a similarity bijection; None is a definitive 'not similar',
    SearchBudgetExceeded means the search space was not exhausted."""
    s_comps = exchangeably_connected_components(s)
    t_comps = exchangeably_connected_components(t)
    if len(s_comps) != len(t_comps):
        return None
    if len(s.labels) != len(t.labels) or len(s.exchangeable) != len(t.exchangeable):
        return None

    nodes = [0]

    def spend():
        nodes[0] += 1
        if nodes[0] > budget:
            raise SearchBudgetExceeded(
                f"similarity search exceeded budget of {budget}"
            )

    # Components may share coefficient labels, so all component isos extend
    # one global partial bijection.
    assignment: dict[VarId, VarId] = {}
    used: set[VarId] = set()

    def component_iso(a: Seed, b_seed: Seed, sign: int, i: int) -> bool:
        """Extend the global assignment to an iso a -> b_seed (sign-twisted
        matrix equality, exchangeability preserved), then continue with the
        remaining components; backtracks on failure."""
        a_labels = sorted(a.labels, key=lambda v: (-len(a.neighbours(v)), v))
        b_by_flag: dict[bool, list[VarId]] = {True: [], False: []}
        for w in sorted(b_seed.labels):
            b_by_flag[w in b_seed.exchangeable].append(w)
        b_label_set = set(b_seed.labels)

        def extend(k: int) -> bool:
            if k == len(a_labels):
                return match(i + 1)
            v = a_labels[k]
            fixed = assignment.get(v)
            if fixed is not None:
                flag_ok = fixed in b_label_set and (
                    (fixed in b_seed.exchangeable) == (v in a.exchangeable)
                )
                candidates = [fixed] if flag_ok else []
                preassigned = True
            else:
                candidates = b_by_flag[v in a.exchangeable]
                preassigned = False
            for w in candidates:
                if not preassigned and w in used:
                    continue
                spend()
                ok = True
                for v2 in a_labels[:k]:
                    w2 = assignment[v2]
                    if b_seed.b(w, w2) != sign * a.b(v, v2) or b_seed.b(
                        w2, w
                    ) != sign * a.b(v2, v):
                        ok = False
                        break
                if not ok:
                    continue
                if preassigned:
                    if extend(k + 1):
                        return True
                else:
                    assignment[v] = w
                    used.add(w)
                    if extend(k + 1):
                        return True
                    del assignment[v]
                    used.remove(w)
            return False

        return extend(0)

    t_used = [False] * len(t_comps)

    def match(i: int) -> bool:
        if i == len(s_comps):
            return True
        a = s_comps[i]
        for j, b_comp in enumerate(t_comps):
            if t_used[j]:
                continue
            if len(a.labels) != len(b_comp.labels):
                continue
            if len(a.exchangeable) != len(b_comp.exchangeable):
                continue
            for sign in (1, -1):
                spend()
                t_used[j] = True
                if component_iso(a, b_comp, sign, i):
                    return True
                t_used[j] = False
        return False

    if not match(0):
        return None

    bijection = dict(assignment)
    # Coefficients in no exchangeably connected component: unconstrained,
    # matched in canonical order.
    s_rest = sorted(set(s.labels) - set(bijection))
    t_rest = sorted(set(t.labels) - set(bijection.values()))
    if len(s_rest) != len(t_rest):
        return None
    bijection.update(zip(s_rest, t_rest))
    if not verify_similarity_bijection(s, t, bijection):
        return None
    return bijection
