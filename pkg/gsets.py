"""
Finite G-sets and equivariant maps.

Points are indices 0..n-1 with opaque labels; act[g][x] is the image of x under g.
Besides the basic constructions this module provides the categorical gadgets the
bispan calculus needs: orbit decompositions, pullbacks and dependent products.
"""
import logging
from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Callable, Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

from config import WorkbenchConfig
from errors import SearchCapExceeded, StructureError
from groups import FiniteGroup, Subgroup

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Orbit:
    """One orbit, with a base point whose stabilizer is exactly the class representative"""
    points: Tuple[int, ...]
    class_index: int
    base: int
    transversal: Dict[int, int]


class OrbitDecomposition:
    """X = coproduct of G/H_i, orbits ordered by least point"""

    def __init__(self, gset: 'GSet'):
        self.gset = gset
        group = gset.group
        lattice = group.subgroup_lattice
        orbit_of = [None] * gset.size
        orbits = []
        for x in range(gset.size):
            if orbit_of[x] is not None:
                continue
            points = tuple(sorted(gset.orbit(x)))
            stab = gset.stabilizer(points[0])
            cls = lattice.class_of(stab)
            d = lattice.conjugator(cls, stab)
            base = gset.act[d][points[0]]
            transversal = {}
            for g in group.elements:
                p = gset.act[g][base]
                if p not in transversal:
                    transversal[p] = g
            for p in points:
                orbit_of[p] = len(orbits)
            orbits.append(Orbit(points=points, class_index=cls, base=base, transversal=transversal))
        self.orbits = tuple(orbits)
        self.orbit_of = tuple(orbit_of)

    def __len__(self) -> int:
        return len(self.orbits)

    def __iter__(self):
        return iter(self.orbits)

    def __getitem__(self, k: int) -> Orbit:
        return self.orbits[k]

    @property
    def types(self) -> Tuple[int, ...]:
        return tuple(o.class_index for o in self.orbits)

    def multiset(self) -> List[Tuple[int, int]]:
        """Sorted (class index, multiplicity) pairs"""
        counts: Dict[int, int] = {}
        for o in self.orbits:
            counts[o.class_index] = counts.get(o.class_index, 0) + 1
        return sorted(counts.items())

    def reassembly(self) -> 'GMap':
        """The isomorphism from the coproduct of G/H_i (one per orbit) onto X"""
        group = self.gset.group
        lattice = group.subgroup_lattice
        parts = [GSet.cosets(group, lattice.rep(o.class_index)) for o in self.orbits]
        total, injections = GSet.coproduct(group, parts)
        table = [0] * total.size
        for o, part, inj in zip(self.orbits, parts, injections):
            cosets = group.left_cosets(lattice.rep(o.class_index))
            for k, coset in enumerate(cosets):
                table[inj(k)] = self.gset.act[min(coset)][o.base]
        return GMap(total, self.gset, table)


class GSet:
    """A finite set with a left action of a finite group"""

    def __init__(self, group: FiniteGroup, labels: Sequence[Hashable], act: Sequence[Sequence[int]],
                 validate: bool = True):
        self.group = group
        self.labels = tuple(labels)
        self.act = tuple(tuple(int(v) for v in row) for row in act)
        self.size = len(self.labels)
        self._index = None
        if validate:
            self._validate()

    def _validate(self):
        G = self.group
        n = self.size
        if len(self.act) != G.order or any(len(row) != n for row in self.act):
            raise StructureError("Action table must have one row per group element and one column per point")
        full = set(range(n))
        for g in G.elements:
            if set(self.act[g]) != full:
                raise StructureError(f"{G.label(g)} does not act by a permutation")
        if any(self.act[0][x] != x for x in range(n)):
            raise StructureError("The identity must act trivially")
        for g in G.elements:
            for h in G.elements:
                gh = self.act[G.m(g, h)]
                ag, ah = self.act[g], self.act[h]
                for x in range(n):
                    if gh[x] != ag[ah[x]]:
                        raise StructureError(
                            f"Action law fails at ({G.label(g)}, {G.label(h)}, {self.labels[x]})")

    def __repr__(self) -> str:
        return f"GSet({self.group.name}, {self.size} points)"

    def __eq__(self, other) -> bool:
        return isinstance(other, GSet) and self.group is other.group and self.act == other.act

    def __hash__(self) -> int:
        return hash((id(self.group), self.act))

    def __len__(self) -> int:
        return self.size

    def index(self, label) -> int:
        if self._index is None:
            self._index = {str(l): i for i, l in enumerate(self.labels)}
        try:
            return self._index[str(label)]
        except KeyError:
            raise StructureError(f"Unknown point {label!r}")

    def stabilizer(self, x: int) -> Subgroup:
        return frozenset(g for g in self.group.elements if self.act[g][x] == x)

    def orbit(self, x: int) -> Subgroup:
        return frozenset(self.act[g][x] for g in self.group.elements)

    @cached_property
    def orbits(self) -> OrbitDecomposition:
        return OrbitDecomposition(self)

    def to_dict(self) -> Dict:
        return {
            'points': [str(l) for l in self.labels],
            'act': {self.group.label(g): [str(self.labels[y]) for y in self.act[g]]
                    for g in self.group.elements},
        }

    def describe(self) -> str:
        """Orbit types, e.g. '2*G/e + G/C2'"""
        if self.size == 0:
            return '0'
        lattice = self.group.subgroup_lattice
        parts = []
        for cls, mult in self.orbits.multiset():
            term = f"G/{lattice.name(cls)}"
            parts.append(term if mult == 1 else f"{mult}*{term}")
        return ' + '.join(parts)

    # ----------------------------------------------------------- constructors

    @classmethod
    def from_function(cls, group: FiniteGroup, labels: Sequence[Hashable],
                      fn: Callable[[int, int], int]) -> 'GSet':
        act = [[fn(g, x) for x in range(len(labels))] for g in group.elements]
        return cls(group, labels, act)

    @classmethod
    def cosets(cls, group: FiniteGroup, subgroup: Iterable[int]) -> 'GSet':
        """G/H with points ordered by least coset element"""
        subgroup = group.check_subgroup(subgroup)
        cosets = group.left_cosets(subgroup)
        where = {g: k for k, coset in enumerate(cosets) for g in coset}
        lattice = group.subgroup_lattice
        suffix = lattice.name(lattice.class_of(subgroup))
        labels = [f"{group.label(min(coset))}{suffix}" for coset in cosets]
        act = [[where[group.m(g, min(coset))] for coset in cosets] for g in group.elements]
        return cls(group, labels, act, validate=False)

    @classmethod
    def orbit_type(cls, group: FiniteGroup, class_index: int) -> 'GSet':
        return cls.cosets(group, group.subgroup_lattice.rep(class_index))

    @classmethod
    def trivial(cls, group: FiniteGroup, n: int = 1) -> 'GSet':
        labels = ['*'] if n == 1 else [f'*{k}' for k in range(n)]
        return cls(group, labels, [list(range(n)) for _ in group.elements], validate=False)

    @classmethod
    def empty(cls, group: FiniteGroup) -> 'GSet':
        return cls(group, [], [[] for _ in group.elements], validate=False)

    @classmethod
    def regular(cls, group: FiniteGroup) -> 'GSet':
        return cls(group, list(group.labels), [list(group.mul[g]) for g in group.elements], validate=False)

    @classmethod
    def natural(cls, group: FiniteGroup) -> 'GSet':
        """The defining action of a permutation group"""
        if group.permutations is None:
            raise StructureError(f"{group.name} was not given by permutations")
        degree = len(group.permutations[0])
        act = [list(group.permutations[g]) for g in group.elements]
        return cls(group, [str(p) for p in range(degree)], act)

    @classmethod
    def coproduct(cls, group: FiniteGroup, parts: Sequence['GSet']) -> Tuple['GSet', List['GMap']]:
        labels = []
        act = [[] for _ in group.elements]
        offsets = []
        for k, part in enumerate(parts):
            if part.group is not group:
                raise StructureError("Coproduct of G-sets over different groups")
            offset = len(labels)
            offsets.append(offset)
            labels.extend(f"{k}:{l}" for l in part.labels)
            for g in group.elements:
                act[g].extend(offset + y for y in part.act[g])
        total = cls(group, labels, act, validate=False)
        injections = [GMap(part, total, [off + x for x in range(part.size)], validate=False)
                      for part, off in zip(parts, offsets)]
        return total, injections

    @classmethod
    def product(cls, left: 'GSet', right: 'GSet') -> Tuple['GSet', 'GMap', 'GMap']:
        point = cls.trivial(left.group)
        return pullback(GMap.constant(left, point), GMap.constant(right, point))


class GMap:
    """An equivariant map between G-sets"""

    def __init__(self, src: GSet, dst: GSet, table: Sequence[int], validate: bool = True):
        self.src = src
        self.dst = dst
        self.table = tuple(int(v) for v in table)
        if validate:
            self._validate()

    def _validate(self):
        if self.src.group is not self.dst.group:
            raise StructureError("Map between G-sets over different groups")
        if len(self.table) != self.src.size or any(not 0 <= y < self.dst.size for y in self.table):
            raise StructureError("Map table does not match its source and target")
        G = self.src.group
        for g in G.elements:
            for x in range(self.src.size):
                if self.table[self.src.act[g][x]] != self.dst.act[g][self.table[x]]:
                    raise StructureError(
                        f"Map is not equivariant at ({G.label(g)}, {self.src.labels[x]})")

    def __call__(self, x: int) -> int:
        return self.table[x]

    def __repr__(self) -> str:
        return f"GMap({self.src.size} -> {self.dst.size})"

    def __eq__(self, other) -> bool:
        return (isinstance(other, GMap) and self.src == other.src and self.dst == other.dst
                and self.table == other.table)

    def __hash__(self) -> int:
        return hash((self.src, self.dst, self.table))

    def compose(self, other: 'GMap') -> 'GMap':
        """self after other"""
        if other.dst != self.src:
            raise StructureError("Maps are not composable")
        return GMap(other.src, self.dst, [self.table[y] for y in other.table], validate=False)

    def fiber(self, y: int) -> List[int]:
        return [x for x, v in enumerate(self.table) if v == y]

    def is_injective(self) -> bool:
        return len(set(self.table)) == len(self.table)

    def is_iso(self) -> bool:
        return self.is_injective() and self.src.size == self.dst.size

    def inverse(self) -> 'GMap':
        if not self.is_iso():
            raise StructureError("Only isomorphisms can be inverted")
        table = [0] * self.dst.size
        for x, y in enumerate(self.table):
            table[y] = x
        return GMap(self.dst, self.src, table, validate=False)

    def is_fold(self) -> bool:
        """Whether every orbit of the source maps bijectively onto its image orbit"""
        return all(len({self.table[p] for p in orbit.points}) == len(orbit.points)
                   for orbit in self.src.orbits)

    def to_dict(self) -> Dict:
        return {'f': {str(self.src.labels[x]): str(self.dst.labels[y]) for x, y in enumerate(self.table)}}

    @classmethod
    def identity(cls, gset: GSet) -> 'GMap':
        return cls(gset, gset, range(gset.size), validate=False)

    @classmethod
    def constant(cls, src: GSet, point: GSet) -> 'GMap':
        """The unique map to a one-point G-set"""
        return cls(src, point, [0] * src.size, validate=False)

    @classmethod
    def from_function(cls, src: GSet, dst: GSet, fn: Callable[[int], int]) -> 'GMap':
        return cls(src, dst, [fn(x) for x in range(src.size)])

    @classmethod
    def orbit_map(cls, group: FiniteGroup, i: int, j: int, c: int) -> 'GMap':
        """psi_c: G/H_i -> G/H_j, gH_i -> gcH_j"""
        lattice = group.subgroup_lattice
        if not lattice.is_valid(i, j, c):
            raise StructureError(f"{group.label(c)} does not define a map G/{lattice.name(i)} -> G/{lattice.name(j)}")
        src, dst = GSet.orbit_type(group, i), GSet.orbit_type(group, j)
        cosets_j = group.left_cosets(lattice.rep(j))
        where = {g: k for k, coset in enumerate(cosets_j) for g in coset}
        table = [where[group.m(min(coset), c)] for coset in group.left_cosets(lattice.rep(i))]
        return cls(src, dst, table, validate=False)


# ---------------------------------------------------------------- limits


def pullback(f: GMap, g: GMap) -> Tuple[GSet, GMap, GMap]:
    """X x_Z Y with its two projections"""
    if f.dst != g.dst:
        raise StructureError("Pullback needs maps with a common codomain")
    X, Y = f.src, g.src
    group = X.group
    by_value: Dict[int, List[int]] = {}
    for y, z in enumerate(g.table):
        by_value.setdefault(z, []).append(y)
    pairs = [(x, y) for x in range(X.size) for y in by_value.get(f.table[x], [])]
    if len(pairs) > WorkbenchConfig.MAX_MIDDLE_POINTS:
        raise SearchCapExceeded(f"Pullback would have {len(pairs)} points")
    pos = {p: k for k, p in enumerate(pairs)}
    act = [[pos[(X.act[h][x], Y.act[h][y])] for x, y in pairs] for h in group.elements]
    labels = [f"({X.labels[x]},{Y.labels[y]})" for x, y in pairs]
    P = GSet(group, labels, act, validate=False)
    p1 = GMap(P, X, [x for x, _ in pairs], validate=False)
    p2 = GMap(P, Y, [y for _, y in pairs], validate=False)
    return P, p1, p2


@dataclass(frozen=True, eq=False)
class DependentProduct:
    """Pi_f(g) together with the maps of the distributor diagram.

    pulled = X x_Y Pi, with legs to_x: pulled -> X and leg: pulled -> Pi;
    counit: pulled -> A evaluates the section, so g . counit = to_x.
    """
    pi: GSet
    proj: GMap
    pulled: GSet
    to_x: GMap
    leg: GMap
    counit: GMap


def dependent_product(g: GMap, f: GMap) -> DependentProduct:
    """Pi_f(g) for g: A -> X and f: X -> Y; points are (y, section of g over f^-1(y))"""
    if g.dst != f.src:
        raise StructureError("dependent_product needs g: A -> X and f: X -> Y")
    A, X, Y = g.src, g.dst, f.dst
    group = X.group
    fibers = [f.fiber(y) for y in range(Y.size)]
    choices = [g.fiber(x) for x in range(X.size)]
    count = 0
    for fiber in fibers:
        n = 1
        for x in fiber:
            n *= len(choices[x])
        count += n
    if count > WorkbenchConfig.MAX_MIDDLE_POINTS:
        raise SearchCapExceeded(f"Dependent product would have {count} points")

    points = []
    for y, fiber in enumerate(fibers):
        for section in product(*(choices[x] for x in fiber)):
            points.append((y, section))
    pos = {p: k for k, p in enumerate(points)}
    slot = {}
    for fiber in fibers:
        for k, x in enumerate(fiber):
            slot[x] = k

    act = []
    for h in group.elements:
        hi = group.inv[h]
        row = []
        for y, section in points:
            y2 = Y.act[h][y]
            moved = tuple(A.act[h][section[slot[X.act[hi][x2]]]] for x2 in fibers[y2])
            row.append(pos[(y2, moved)])
        act.append(row)
    labels = [f"{Y.labels[y]}:[{','.join(str(A.labels[a]) for a in section)}]" for y, section in points]
    pi = GSet(group, labels, act, validate=False)
    proj = GMap(pi, Y, [y for y, _ in points], validate=False)
    pulled, to_x, leg = pullback(f, proj)
    counit = GMap(pulled, A, [points[leg.table[k]][1][slot[to_x.table[k]]] for k in range(pulled.size)],
                  validate=False)
    return DependentProduct(pi=pi, proj=proj, pulled=pulled, to_x=to_x, leg=leg, counit=counit)


# ------------------------------------------------------- isomorphism classes


def gset_iso(X: GSet, Y: GSet) -> Optional[GMap]:
    """Some equivariant bijection X -> Y, or None"""
    if X.group is not Y.group or X.size != Y.size:
        return None
    if X.orbits.multiset() != Y.orbits.multiset():
        return None
    table = [0] * X.size
    pending: Dict[int, List] = {}
    for orbit in Y.orbits:
        pending.setdefault(orbit.class_index, []).append(orbit)
    for orbit in X.orbits:
        target = pending[orbit.class_index].pop(0)
        for p in orbit.points:
            table[p] = Y.act[orbit.transversal[p]][target.base]
    return GMap(X, Y, table, validate=False)


def canonical_form(X: GSet) -> Tuple[GSet, GMap]:
    """The coproduct of G/H_i over the sorted orbit types, and an iso from X onto it"""
    group = X.group
    lattice = group.subgroup_lattice
    parts = [GSet.cosets(group, lattice.rep(cls))
             for cls, mult in X.orbits.multiset() for _ in range(mult)]
    canon, _ = GSet.coproduct(group, parts)
    return canon, gset_iso(X, canon)


def equivariant_maps(src: GSet, dst: GSet, src_base: Optional[GMap] = None,
                     dst_base: Optional[GMap] = None, cap: Optional[int] = None) -> List[GMap]:
    """All G-maps src -> dst, optionally only those over a common base"""
    over = src_base is not None and dst_base is not None
    options = []
    for orbit in src.orbits:
        stab = src.stabilizer(orbit.base)
        candidates = [z for z in range(dst.size)
                      if stab <= dst.stabilizer(z) and (not over or dst_base(z) == src_base(orbit.base))]
        options.append(candidates)
    total = 1
    for c in options:
        total *= len(c)
    limit = cap if cap is not None else WorkbenchConfig.MAX_MIDDLE_POINTS
    if total > limit:
        raise SearchCapExceeded(f"{total} candidate maps exceed the cap {limit}")
    maps = []
    for images in product(*options):
        table = [0] * src.size
        for orbit, z in zip(src.orbits, images):
            for p in orbit.points:
                table[p] = dst.act[orbit.transversal[p]][z]
        maps.append(GMap(src, dst, table, validate=False))
    return maps
