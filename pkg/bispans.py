"""
The bispan category P_G.

A morphism X -> Y is an isomorphism class of diagrams X <-h- A -g-> B -f-> Y.
Classes are stored by a canonical key: for every B-orbit the least triple
(Stab(b), f(b), sorted Stab(b)-orbit invariants of the fiber g^-1(b)) over its
points, where a fiber orbit contributes the least (Stab(a), h(a)) over its points.
"""
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import numpy as np

from config import CheckConfig
from errors import StructureError
from groups import FiniteGroup
from gsets import GMap, GSet, dependent_product, pullback

logger = logging.getLogger(__name__)

FiberKey = Tuple[Tuple[int, ...], int]
OrbitKey = Tuple[Tuple[int, ...], int, Tuple[FiberKey, ...]]


@dataclass(frozen=True, eq=False)
class BispanDiagram:
    """A representative X <-h- A -g-> B -f-> Y"""
    A: GSet
    B: GSet
    h: GMap
    g: GMap
    f: GMap


def _build_diagram(X: GSet, Y: GSet, orbit_data: Sequence[OrbitKey]) -> BispanDiagram:
    group = X.group
    b_parts, a_parts = [], []
    f_table, g_table, h_table = [], [], []
    b_offset = 0
    for stab_b, y, fiber in orbit_data:
        K = frozenset(stab_b)
        if not K <= Y.stabilizer(y):
            raise StructureError("B-orbit stabilizer does not fix its image in the target")
        cosets_K = group.left_cosets(K)
        where_K = {g: k for k, coset in enumerate(cosets_K) for g in coset}
        b_parts.append(GSet.cosets(group, K))
        f_table.extend(Y.act[min(coset)][y] for coset in cosets_K)
        for stab_a, x in fiber:
            L = frozenset(stab_a)
            if not L <= K or not L <= X.stabilizer(x):
                raise StructureError("A-orbit stabilizer must lie in its B-stabilizer and fix its source point")
            cosets_L = group.left_cosets(L)
            a_parts.append(GSet.cosets(group, L))
            for coset in cosets_L:
                c = min(coset)
                g_table.append(b_offset + where_K[c])
                h_table.append(X.act[c][x])
        b_offset += len(cosets_K)
    A, _ = GSet.coproduct(group, a_parts)
    B, _ = GSet.coproduct(group, b_parts)
    return BispanDiagram(A=A, B=B,
                         h=GMap(A, X, h_table, validate=False),
                         g=GMap(A, B, g_table, validate=False),
                         f=GMap(B, Y, f_table, validate=False))


class Bispan:
    """An isomorphism class of bispans X <- A -> B -> Y"""

    def __init__(self, source: GSet, target: GSet, key: Tuple[OrbitKey, ...]):
        self.source = source
        self.target = target
        self.key = key

    @classmethod
    def from_maps(cls, h: GMap, g: GMap, f: GMap) -> 'Bispan':
        if h.src != g.src or g.dst != f.src:
            raise StructureError("Legs do not form a bispan X <- A -> B -> Y")
        A, B = g.src, g.dst
        stab_a = [tuple(sorted(A.stabilizer(a))) for a in range(A.size)]
        fibers: Dict[int, List[int]] = {}
        for a, b in enumerate(g.table):
            fibers.setdefault(b, []).append(a)
        keys = []
        for orbit in B.orbits:
            best = None
            for b in orbit.points:
                K = B.stabilizer(b)
                seen = set()
                invariants = []
                for a in fibers.get(b, []):
                    if a in seen:
                        continue
                    k_orbit = {A.act[k][a] for k in K}
                    seen |= k_orbit
                    invariants.append(min((stab_a[a2], h.table[a2]) for a2 in k_orbit))
                candidate = (tuple(sorted(K)), f.table[b], tuple(sorted(invariants)))
                if best is None or candidate < best:
                    best = candidate
            keys.append(best)
        return cls(h.dst, f.dst, tuple(sorted(keys)))

    @classmethod
    def from_orbit_data(cls, source: GSet, target: GSet, orbit_data: Sequence) -> 'Bispan':
        """Build from (B-stabilizer, target point, [(A-stabilizer, source point), ...]) per B-orbit"""
        data = [(tuple(sorted(K)), int(y), tuple((tuple(sorted(L)), int(x)) for L, x in fiber))
                for K, y, fiber in orbit_data]
        d = _build_diagram(source, target, data)
        return cls.from_maps(d.h, d.g, d.f)

    @classmethod
    def identity(cls, X: GSet) -> 'Bispan':
        ident = GMap.identity(X)
        return cls.from_maps(ident, ident, ident)

    @cached_property
    def diagram(self) -> BispanDiagram:
        return _build_diagram(self.source, self.target, self.key)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Bispan) and self.source == other.source
                and self.target == other.target and self.key == other.key)

    def __hash__(self) -> int:
        return hash((self.source, self.target, self.key))

    def __repr__(self) -> str:
        return f"Bispan({self})"

    def __str__(self) -> str:
        d = self.diagram
        return (f"[{self.source.describe()}] <-h- [{d.A.describe()}] -g-> "
                f"[{d.B.describe()}] -f-> [{self.target.describe()}]")

    @property
    def group(self) -> FiniteGroup:
        return self.source.group

    def middle_size(self) -> int:
        return self.diagram.A.size + self.diagram.B.size

    def to_dict(self) -> Dict:
        G = self.group
        X, Y = self.source, self.target
        return {
            'source': X.to_dict(),
            'target': Y.to_dict(),
            'orbits': [
                {
                    'stabilizer': [G.label(g) for g in stab_b],
                    'image': str(Y.labels[y]),
                    'fiber': [{'stabilizer': [G.label(g) for g in stab_a], 'image': str(X.labels[x])}
                              for stab_a, x in fiber],
                }
                for stab_b, y, fiber in self.key
            ],
            'text': str(self),
        }


# ---------------------------------------------------------------- generators


def t_of(f: GMap) -> Bispan:
    """Transfer along f: X = X = X -f-> Y"""
    ident = GMap.identity(f.src)
    return Bispan.from_maps(ident, ident, f)


def n_of(f: GMap) -> Bispan:
    """Norm along f: X = X -f-> Y = Y"""
    return Bispan.from_maps(GMap.identity(f.src), f, GMap.identity(f.dst))


def r_of(f: GMap) -> Bispan:
    """Restriction along f: Y <-f- X = X = X"""
    ident = GMap.identity(f.src)
    return Bispan.from_maps(f, ident, ident)


def eq(b1: Bispan, b2: Bispan) -> bool:
    return b1 == b2


def compose(b2: Bispan, b1: Bispan) -> Bispan:
    """b2 after b1, normalised to T N R form"""
    if b1.target != b2.source:
        raise StructureError("Bispans are not composable: target and source differ")
    d1, d2 = b1.diagram, b2.diagram

    # R_h2 T_f1 = T_pA R_pB
    P, p_b, p_a = pullback(d1.f, d2.h)
    # R_pB N_g1 = N_qP R_qA
    Q, q_a, q_p = pullback(d1.g, p_b)
    # N_g2 T_pA = T_proj N_leg R_counit
    dist = dependent_product(p_a, d2.g)
    # R_counit N_qP = N_eD R_eQ
    E, e_q, e_d = pullback(q_p, dist.counit)

    h = d1.h.compose(q_a).compose(e_q)
    g = dist.leg.compose(e_d)
    f = d2.f.compose(dist.proj)
    return Bispan.from_maps(h, g, f)


# ------------------------------------------------------------------ sampling


def random_gset(rng: np.random.Generator, group: FiniteGroup, max_orbits: Optional[int] = None,
                max_points: Optional[int] = None, allow_empty: bool = False) -> GSet:
    """A coproduct of a few random orbits G/H"""
    max_orbits = max_orbits or CheckConfig.MAX_SAMPLE_ORBITS
    max_points = max_points or CheckConfig.MAX_SAMPLE_POINTS
    lattice = group.subgroup_lattice
    low = 0 if allow_empty else 1
    n_orbits = int(rng.integers(low, max_orbits + 1))
    parts = []
    budget = max_points
    for _ in range(n_orbits):
        fitting = [i for i in range(len(lattice)) if group.order // lattice.classes[i].order <= budget]
        if not fitting:
            break
        i = fitting[int(rng.integers(len(fitting)))]
        budget -= group.order // lattice.classes[i].order
        parts.append(GSet.orbit_type(group, i))
    return GSet.coproduct(group, parts)[0]


def random_map_into(rng: np.random.Generator, target: GSet, max_orbits: Optional[int] = None,
                    max_points: Optional[int] = None) -> GMap:
    """A random G-map X -> target, X built orbit by orbit over chosen image points"""
    max_orbits = max_orbits or CheckConfig.MAX_SAMPLE_ORBITS
    max_points = max_points or CheckConfig.MAX_SAMPLE_POINTS
    group = target.group
    subgroups = group.subgroup_lattice.subgroups
    chosen = []
    budget = max_points
    n = int(rng.integers(0, max_orbits + 1)) if target.size else 0
    for _ in range(n):
        y = int(rng.integers(target.size))
        stab = target.stabilizer(y)
        options = [S for S in subgroups if S <= stab and group.order // len(S) <= budget]
        if not options:
            continue
        L = options[int(rng.integers(len(options)))]
        budget -= group.order // len(L)
        chosen.append((L, y))
    X, _ = GSet.coproduct(group, [GSet.cosets(group, L) for L, _ in chosen])
    table = []
    for L, y in chosen:
        table.extend(target.act[min(coset)][y] for coset in group.left_cosets(L))
    return GMap(X, target, table, validate=False)


def random_map_from(rng: np.random.Generator, source: GSet) -> GMap:
    """A random G-map source -> Y; each orbit goes to a fresh orbit G/K or to an existing point"""
    group = source.group
    subgroups = group.subgroup_lattice.subgroups
    parts: List[FrozenSet[int]] = []
    assignment = []
    for orbit in source.orbits:
        H = source.stabilizer(orbit.base)
        existing = [(k, p) for k, K in enumerate(parts)
                    for p, coset in enumerate(group.left_cosets(K))
                    if H <= group.conjugate(K, group.inv[min(coset)])]
        if existing and rng.integers(2):
            assignment.append(existing[int(rng.integers(len(existing)))])
            continue
        options = [K for K in subgroups if H <= K]
        parts.append(options[int(rng.integers(len(options)))])
        assignment.append((len(parts) - 1, 0))
    Y, injections = GSet.coproduct(group, [GSet.cosets(group, K) for K in parts])
    table = [0] * source.size
    for orbit, (k, p) in zip(source.orbits, assignment):
        target = injections[k](p)
        for x in orbit.points:
            table[x] = Y.act[orbit.transversal[x]][target]
    return GMap(source, Y, table, validate=False)


def random_bispan(rng: np.random.Generator, source: GSet, target: GSet,
                  max_orbits: Optional[int] = None, max_points: Optional[int] = None) -> Bispan:
    """A random bispan source -> target with small middle objects"""
    max_orbits = max_orbits or CheckConfig.MAX_SAMPLE_ORBITS
    max_points = max_points or CheckConfig.MAX_SAMPLE_POINTS
    group = source.group
    subgroups = group.subgroup_lattice.subgroups
    data = []
    b_budget, a_budget = max_points, max_points
    n_b = int(rng.integers(0, max_orbits + 1)) if target.size else 0
    for _ in range(n_b):
        y = int(rng.integers(target.size))
        stab_y = target.stabilizer(y)
        options = [S for S in subgroups if S <= stab_y and group.order // len(S) <= b_budget]
        if not options:
            continue
        K = options[int(rng.integers(len(options)))]
        b_budget -= group.order // len(K)
        fiber = []
        n_a = int(rng.integers(0, max_orbits + 1)) if source.size else 0
        for _ in range(n_a):
            x = int(rng.integers(source.size))
            inner = K & source.stabilizer(x)
            choices = [S for S in subgroups if S <= inner and group.order // len(S) <= a_budget]
            if not choices:
                continue
            L = choices[int(rng.integers(len(choices)))]
            a_budget -= group.order // len(L)
            fiber.append((L, x))
        data.append((K, y, fiber))
    return Bispan.from_orbit_data(source, target, data)
