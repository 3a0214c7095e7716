"""
Finite groups, their subgroup-conjugacy lattice, cosets, double cosets and Weyl groups.

Elements are indices 0..n-1 with the identity at 0; labels are kept only for I/O.
Orbit maps G/H_i -> G/H_j are written psi_c: eH_i -> cH_j and exist iff
c^-1 H_i c <= H_j.  They compose as psi_a . psi_b = psi_{ba}.
"""
import logging
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from sympy.combinatorics import Permutation, PermutationGroup

from config import WorkbenchConfig
from errors import InconsistencyError, StructureError

logger = logging.getLogger(__name__)

Subgroup = FrozenSet[int]


def _sorted_key(subset: Iterable[int]) -> Tuple[int, ...]:
    return tuple(sorted(subset))


@dataclass(frozen=True)
class WeylGroup:
    """N_G(H)/H with explicit coset multiplication"""
    subgroup: Subgroup
    normalizer: Subgroup
    cosets: Tuple[Subgroup, ...]
    reps: Tuple[int, ...]
    mul: Tuple[Tuple[int, ...], ...]

    @property
    def order(self) -> int:
        return len(self.cosets)

    def coset_index(self, n: int) -> int:
        for idx, coset in enumerate(self.cosets):
            if n in coset:
                return idx
        raise StructureError(f"Element {n} does not normalize the subgroup")


class FiniteGroup:
    """Finite group presented by a multiplication table with identity at index 0"""

    identity = 0

    def __init__(self, labels: Sequence[str], mul: Sequence[Sequence[int]],
                 name: Optional[str] = None, permutations: Optional[Sequence[Tuple[int, ...]]] = None):
        self.logger = logging.getLogger(__name__)
        self.labels = tuple(str(label) for label in labels)
        self.mul = tuple(tuple(int(v) for v in row) for row in mul)
        self.order = len(self.labels)
        self.name = name or f"G{self.order}"
        self.permutations = tuple(permutations) if permutations is not None else None
        self._validate()
        self.inv = tuple(row.index(0) for row in self.mul)
        self._index = {label: i for i, label in enumerate(self.labels)}
        self._subgroup_groups: Dict[Subgroup, Tuple['FiniteGroup', Tuple[int, ...]]] = {}

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name}, order={self.order})"

    def _validate(self):
        n = self.order
        if n == 0:
            raise StructureError("A group needs at least the identity")
        if n > WorkbenchConfig.MAX_GROUP_ORDER:
            raise StructureError(f"Group order {n} exceeds the supported maximum {WorkbenchConfig.MAX_GROUP_ORDER}")
        if len(set(self.labels)) != n:
            raise StructureError("Element labels must be distinct")
        if len(self.mul) != n or any(len(row) != n for row in self.mul):
            raise StructureError("Multiplication table must be square over the element set")
        full = set(range(n))
        for a in range(n):
            if set(self.mul[a]) != full:
                raise StructureError(f"Row {self.labels[a]} of the multiplication table is not a permutation")
            if set(self.mul[b][a] for b in range(n)) != full:
                raise StructureError(f"Column {self.labels[a]} of the multiplication table is not a permutation")
            if self.mul[0][a] != a or self.mul[a][0] != a:
                raise StructureError(f"{self.labels[0]} is not a two-sided identity")
        for a in range(n):
            row_a = self.mul[a]
            for b in range(n):
                ab = row_a[b]
                row_ab = self.mul[ab]
                row_b = self.mul[b]
                for c in range(n):
                    if row_ab[c] != row_a[row_b[c]]:
                        raise StructureError(
                            f"Multiplication is not associative at "
                            f"({self.labels[a]}, {self.labels[b]}, {self.labels[c]})")

    # ------------------------------------------------------------------ basics

    @property
    def elements(self) -> range:
        return range(self.order)

    def m(self, a: int, b: int) -> int:
        return self.mul[a][b]

    def index(self, label) -> int:
        """Element index for a label (integers are accepted as indices)"""
        if isinstance(label, int) and not isinstance(label, bool) and 0 <= label < self.order:
            return label
        try:
            return self._index[str(label)]
        except KeyError:
            raise StructureError(f"Unknown group element {label!r}")

    def label(self, g: int) -> str:
        return self.labels[g]

    def element_order(self, g: int) -> int:
        k, x = 1, g
        while x != 0:
            x = self.m(x, g)
            k += 1
        return k

    def conjugate(self, subset: Iterable[int], c: int) -> Subgroup:
        """c^-1 S c"""
        ci = self.inv[c]
        return frozenset(self.m(self.m(ci, s), c) for s in subset)

    def generated(self, gens: Iterable[int]) -> Subgroup:
        gens = list(dict.fromkeys(gens))
        found = {0}
        frontier = [0]
        while frontier:
            x = frontier.pop()
            for s in gens:
                y = self.m(x, s)
                if y not in found:
                    found.add(y)
                    frontier.append(y)
        return frozenset(found)

    def is_subgroup(self, subset: Iterable[int]) -> bool:
        subset = frozenset(subset)
        if 0 not in subset or not subset <= set(self.elements):
            return False
        return all(self.m(a, b) in subset for a in subset for b in subset)

    def check_subgroup(self, subset: Iterable[int]) -> Subgroup:
        subset = frozenset(subset)
        if not self.is_subgroup(subset):
            shown = sorted(self.labels[g] for g in subset if 0 <= g < self.order)
            raise StructureError(f"{shown} is not a subgroup of {self.name}")
        return subset

    def normalizer(self, subset: Iterable[int]) -> Subgroup:
        subset = frozenset(subset)
        return frozenset(g for g in self.elements if self.conjugate(subset, g) == subset)

    def is_cyclic(self, subset: Iterable[int]) -> bool:
        subset = frozenset(subset)
        return any(self.generated([g]) == subset for g in subset)

    # ----------------------------------------------------------------- cosets

    def left_cosets(self, subgroup: Iterable[int]) -> List[Subgroup]:
        """Left cosets gH ordered by their least element"""
        subgroup = self.check_subgroup(subgroup)
        seen = set()
        cosets = []
        for g in self.elements:
            if g in seen:
                continue
            coset = frozenset(self.m(g, h) for h in subgroup)
            seen |= coset
            cosets.append(coset)
        return cosets

    def double_cosets(self, left: Iterable[int], right: Iterable[int]) -> List[int]:
        """Least representatives g of the double cosets K g H"""
        left = self.check_subgroup(left)
        right = self.check_subgroup(right)
        seen = set()
        reps = []
        for g in self.elements:
            if g in seen:
                continue
            reps.append(g)
            seen |= {self.m(self.m(k, g), h) for k in left for h in right}
        return reps

    def double_coset(self, left: Iterable[int], g: int, right: Iterable[int]) -> Subgroup:
        return frozenset(self.m(self.m(k, g), h) for k in left for h in right)

    def fiber_cosets(self, small: Iterable[int], big: Iterable[int], c: int) -> Tuple[Tuple[int, Subgroup], ...]:
        """Cosets gH with gc in K (the fiber of eH -> cK over eK), as (least element, coset)"""
        small, big = frozenset(small), frozenset(big)
        if not self.conjugate(small, c) <= big:
            raise StructureError(f"{self.label(c)} does not define an orbit map")
        ci = self.inv[c]
        cosets = {}
        for k in big:
            g = self.m(k, ci)
            coset = frozenset(self.m(g, x) for x in small)
            cosets[min(coset)] = coset
        return tuple(sorted(cosets.items()))

    def weyl_group(self, subgroup: Iterable[int]) -> WeylGroup:
        subgroup = self.check_subgroup(subgroup)
        normalizer = self.normalizer(subgroup)
        seen = set()
        cosets = []
        for n in sorted(normalizer):
            if n in seen:
                continue
            coset = frozenset(self.m(n, h) for h in subgroup)
            seen |= coset
            cosets.append(coset)
        where = {g: idx for idx, coset in enumerate(cosets) for g in coset}
        table = []
        for a in cosets:
            row = []
            for b in cosets:
                targets = {where[self.m(x, y)] for x in a for y in b}
                if len(targets) != 1:
                    raise InconsistencyError("Coset multiplication in N(H)/H is not well defined")
                row.append(targets.pop())
            table.append(tuple(row))
        return WeylGroup(subgroup=subgroup, normalizer=normalizer, cosets=tuple(cosets),
                         reps=tuple(min(c) for c in cosets), mul=tuple(table))

    def subgroup_group(self, subset: Iterable[int]) -> Tuple['FiniteGroup', Tuple[int, ...]]:
        """The subgroup as a group in its own right, with its embedding into self"""
        subset = self.check_subgroup(subset)
        if subset not in self._subgroup_groups:
            embed = tuple(sorted(subset))
            pos = {g: i for i, g in enumerate(embed)}
            mul = [[pos[self.m(a, b)] for b in embed] for a in embed]
            perms = [self.permutations[g] for g in embed] if self.permutations else None
            if subset == frozenset(self.elements):
                name = self.name
            else:
                lattice = self.subgroup_lattice
                cls = lattice.classes[lattice.class_of(subset)]
                name = f"{self.name}:{cls.name}"
            child = FiniteGroup([self.labels[g] for g in embed], mul, name=name, permutations=perms)
            self._subgroup_groups[subset] = (child, embed)
        return self._subgroup_groups[subset]

    @cached_property
    def subgroup_lattice(self) -> 'SubgroupLattice':
        return SubgroupLattice(self)

    def to_dict(self) -> Dict:
        return {
            'name': self.name,
            'elements': list(self.labels),
            'mul': [[self.labels[v] for v in row] for row in self.mul],
            'id': self.labels[0],
        }

    # ----------------------------------------------------------- constructors

    @classmethod
    def from_table(cls, labels: Sequence, mul: Sequence[Sequence], identity, name: Optional[str] = None) -> 'FiniteGroup':
        """Group from a label table; the identity is moved to index 0"""
        labels = [str(label) for label in labels]
        if str(identity) not in labels:
            raise StructureError(f"Identity {identity!r} is not among the elements")
        position = {label: i for i, label in enumerate(labels)}
        order = [position[str(identity)]] + [i for i in range(len(labels)) if labels[i] != str(identity)]
        new_pos = {old: new for new, old in enumerate(order)}
        try:
            table = [[new_pos[position[str(mul[a][b])]] for b in order] for a in order]
        except (KeyError, IndexError):
            raise StructureError("Multiplication table refers to unknown elements or has the wrong shape")
        return cls([labels[i] for i in order], table, name=name)

    @classmethod
    def from_permutations(cls, generators: Sequence[Sequence[Sequence[int]]], name: Optional[str] = None) -> 'FiniteGroup':
        """Close permutation generators (each a list of cycles) into a group"""
        points = [p for gen in generators for cycle in gen for p in cycle]
        degree = max(points) + 1 if points else 1
        perms = []
        for gen in generators:
            cycles = [list(cycle) for cycle in gen if len(cycle) > 1]
            perms.append(Permutation(cycles, size=degree) if cycles else Permutation(list(range(degree))))
        if not perms:
            perms = [Permutation(list(range(degree)))]
        group = PermutationGroup(perms)
        if group.order() > WorkbenchConfig.MAX_GROUP_ORDER:
            raise StructureError(f"Generated group has order {group.order()}, above the supported maximum")
        elements = sorted(group.generate(), key=lambda p: tuple(p.array_form))
        keys = [tuple(p.array_form) for p in elements]
        pos = {k: i for i, k in enumerate(keys)}
        # sympy multiplies left to right; a*b here means "apply b, then a"
        mul = [[pos[tuple((elements[b] * elements[a]).array_form)] for b in range(len(elements))]
               for a in range(len(elements))]
        labels = []
        for p in elements:
            if p.is_Identity:
                labels.append('e')
            else:
                labels.append(''.join('(' + ' '.join(str(x) for x in cyc) + ')' for cyc in p.cyclic_form))
        return cls(labels, mul, name=name, permutations=keys)

    @classmethod
    def cyclic(cls, n: int) -> 'FiniteGroup':
        if n < 1:
            raise StructureError("Cyclic group order must be positive")
        labels = ['e'] + ['g' if k == 1 else f'g^{k}' for k in range(1, n)]
        mul = [[(a + b) % n for b in range(n)] for a in range(n)]
        return cls(labels, mul, name='e' if n == 1 else f'C{n}')

    @classmethod
    def trivial(cls) -> 'FiniteGroup':
        return cls.cyclic(1)

    @classmethod
    def symmetric(cls, n: int) -> 'FiniteGroup':
        if n <= 1:
            return cls.from_permutations([], name='S1')
        if n == 2:
            return cls.from_permutations([[[0, 1]]], name='S2')
        return cls.from_permutations([[list(range(n))], [[0, 1]]], name=f'S{n}')

    @classmethod
    def dihedral(cls, n: int) -> 'FiniteGroup':
        """Symmetries of the n-gon (order 2n)"""
        if n < 3:
            raise StructureError("Dihedral groups need n >= 3")
        reflection = [[i, n - i] for i in range(1, n) if i < n - i]
        return cls.from_permutations([[list(range(n))], reflection], name=f'D{2 * n}')

    @classmethod
    def klein(cls) -> 'FiniteGroup':
        return cls.from_permutations([[[0, 1], [2, 3]], [[0, 2], [1, 3]]], name='V4')

    @classmethod
    def from_name(cls, name: str) -> 'FiniteGroup':
        key = name.strip()
        if key in ('e', '1', 'C1', 'trivial'):
            return cls.trivial()
        if key in ('V4', 'K4'):
            return cls.klein()
        match = re.fullmatch(r'([CSD])(\d+)', key)
        if not match:
            raise StructureError(f"Unknown group name {name!r}")
        kind, n = match.group(1), int(match.group(2))
        if kind == 'C':
            return cls.cyclic(n)
        if kind == 'S':
            return cls.symmetric(n)
        if n % 2:
            raise StructureError(f"Dihedral group order must be even, got {n}")
        return cls.dihedral(n // 2)


@dataclass(frozen=True)
class SubgroupClass:
    """A conjugacy class of subgroups with its canonical representative"""
    index: int
    name: str
    representative: Subgroup
    conjugates: Tuple[Subgroup, ...]
    normalizer: Subgroup

    @property
    def order(self) -> int:
        return len(self.representative)

    def to_dict(self, group: FiniteGroup) -> Dict:
        return {
            'name': self.name,
            'order': self.order,
            'representative': [group.labels[g] for g in sorted(self.representative)],
            'conjugates': len(self.conjugates),
            'normalizer_order': len(self.normalizer),
            'weyl_order': len(self.normalizer) // self.order,
        }


class SubgroupLattice:
    """Subgroup-conjugacy classes of a finite group and the orbit maps between them"""

    def __init__(self, group: FiniteGroup):
        self.group = group
        self.logger = logging.getLogger(__name__)
        self.subgroups = self._all_subgroups()
        self.classes = self._classify(self.subgroups)
        self._class_of = {S: c.index for c in self.classes for S in c.conjugates}
        n = len(self.classes)
        self.leq = tuple(tuple(self._subconjugate(i, j) for j in range(n)) for i in range(n))
        self._names = {c.name: c.index for c in self.classes}
        self._conjugators: Dict[Tuple[int, Subgroup], int] = {}
        self._types: Dict[Tuple[int, int], Tuple[int, ...]] = {}
        self._routes: Dict[Tuple[int, int, int], Tuple[int, int, int]] = {}
        self._fibers: Dict[Tuple[int, int, int], Tuple[Tuple[int, Subgroup], ...]] = {}
        self._weyl: Dict[int, WeylGroup] = {}
        self.logger.debug(f"Built lattice of {group.name}: {len(self.subgroups)} subgroups in {n} classes")

    def __len__(self) -> int:
        return len(self.classes)

    def _all_subgroups(self) -> List[Subgroup]:
        G = self.group
        start = frozenset({0})
        found = {start}
        queue = [start]
        while queue:
            S = queue.pop()
            for g in G.elements:
                if g in S:
                    continue
                T = G.generated(sorted(S) + [g])
                if T not in found:
                    found.add(T)
                    queue.append(T)
        return sorted(found, key=lambda S: (len(S), _sorted_key(S)))

    def _classify(self, subgroups: List[Subgroup]) -> List[SubgroupClass]:
        G = self.group
        assigned = set()
        raw = []
        for S in subgroups:
            if S in assigned:
                continue
            conjugates = sorted({G.conjugate(S, c) for c in G.elements}, key=_sorted_key)
            assigned |= set(conjugates)
            raw.append((S, tuple(conjugates)))

        base_names = []
        for S, _ in raw:
            if len(S) == 1:
                base_names.append('e')
            elif len(S) == G.order:
                base_names.append('G')
            else:
                base_names.append(f"{'C' if G.is_cyclic(S) else 'H'}{len(S)}")
        classes = []
        for idx, (S, conjugates) in enumerate(raw):
            base = base_names[idx]
            same = [k for k, b in enumerate(base_names) if b == base]
            name = base if len(same) == 1 else f"{base}{'abcdefghijklmnopqrstuvwxyz'[same.index(idx)]}"
            classes.append(SubgroupClass(index=idx, name=name, representative=S,
                                         conjugates=conjugates, normalizer=G.normalizer(S)))
        return classes

    def _subconjugate(self, i: int, j: int) -> bool:
        small = self.classes[i].representative
        return any(small <= K for K in self.classes[j].conjugates)

    # ----------------------------------------------------------------- lookup

    @property
    def bottom(self) -> int:
        return 0

    @property
    def top(self) -> int:
        return len(self.classes) - 1

    def rep(self, i: int) -> Subgroup:
        return self.classes[i].representative

    def name(self, i: int) -> str:
        return self.classes[i].name

    def index_of_name(self, name: str) -> int:
        try:
            return self._names[name]
        except KeyError:
            raise StructureError(f"Unknown subgroup class {name!r} of {self.group.name}")

    def class_of(self, subset: Iterable[int]) -> int:
        subset = frozenset(subset)
        try:
            return self._class_of[subset]
        except KeyError:
            raise StructureError(f"{sorted(subset)} is not a subgroup of {self.group.name}")

    def subconjugate(self, i: int, j: int) -> bool:
        return self.leq[i][j]

    def subgroup_index(self, i: int, j: int) -> int:
        return self.classes[j].order // self.classes[i].order

    def weyl(self, i: int) -> WeylGroup:
        if i not in self._weyl:
            self._weyl[i] = self.group.weyl_group(self.rep(i))
        return self._weyl[i]

    def coset_rep(self, i: int, n: int) -> int:
        """Least element of n H_i"""
        return min(self.group.m(n, h) for h in self.rep(i))

    def conjugator(self, i: int, subset: Iterable[int]) -> int:
        """Least d with d^-1 H_i d = S"""
        subset = frozenset(subset)
        key = (i, subset)
        if key not in self._conjugators:
            rep = self.rep(i)
            for d in self.group.elements:
                if self.group.conjugate(rep, d) == subset:
                    self._conjugators[key] = d
                    break
            else:
                raise StructureError(f"{sorted(subset)} is not conjugate to class {self.name(i)}")
        return self._conjugators[key]

    # ------------------------------------------------------------- orbit maps

    def is_valid(self, i: int, j: int, c: int) -> bool:
        """Whether eH_i -> cH_j is a well-defined G-map"""
        return self.group.conjugate(self.rep(i), c) <= self.rep(j)

    def orbit_map_types(self, i: int, j: int) -> Tuple[int, ...]:
        """Least representatives of the N(H_i) c N(H_j) classes of valid c"""
        key = (i, j)
        if key not in self._types:
            G = self.group
            Ni, Nj = self.classes[i].normalizer, self.classes[j].normalizer
            seen = set()
            types = []
            for c in G.elements:
                if c in seen or not self.is_valid(i, j, c):
                    continue
                types.append(c)
                seen |= {G.m(G.m(n, c), m) for n in Ni for m in Nj}
            self._types[key] = tuple(types)
        return self._types[key]

    def route(self, i: int, j: int, c: int) -> Tuple[int, int, int]:
        """Write c = n c0 m with c0 a stored type, n in N(H_i), m in N(H_j)"""
        key = (i, j, c)
        if key not in self._routes:
            if not self.is_valid(i, j, c):
                raise StructureError(
                    f"{self.group.label(c)} does not define an orbit map G/{self.name(i)} -> G/{self.name(j)}")
            G = self.group
            Ni, Nj = self.classes[i].normalizer, self.classes[j].normalizer
            for c0 in self.orbit_map_types(i, j):
                for n in sorted(Ni):
                    m = G.m(G.m(G.inv[c0], G.inv[n]), c)
                    if m in Nj:
                        self._routes[key] = (n, c0, m)
                        break
                if key in self._routes:
                    break
            else:
                raise InconsistencyError(f"No stored orbit-map type covers {G.label(c)}")
        return self._routes[key]

    def fiber_cosets(self, i: int, j: int, c: int) -> Tuple[Tuple[int, Subgroup], ...]:
        """Cosets gH_i lying over eH_j under psi_c, as (least element, coset) pairs"""
        key = (i, j, c)
        if key not in self._fibers:
            self._fibers[key] = self.group.fiber_cosets(self.rep(i), self.rep(j), c)
        return self._fibers[key]

    def to_dict(self) -> Dict:
        return {
            'group': self.group.name,
            'order': self.group.order,
            'classes': [c.to_dict(self.group) for c in self.classes],
            'subconjugate': {
                self.name(i): [self.name(j) for j in range(len(self.classes)) if self.leq[i][j]]
                for i in range(len(self.classes))
            },
        }
