"""
Tambara functors: levelwise rings with restriction, transfer, norm and Weyl conjugation.

Levels are indexed by subgroup-class index i (the level of G/H_i).  An orbit map
psi_c: G/H_i -> G/H_j (eH_i -> cH_j) induces

    res along c: T(G/H_j) -> T(G/H_i)
    tr  along c: T(G/H_i) -> T(G/H_j)
    nm  along c: T(G/H_i) -> T(G/H_j)

and the Weyl action on level i is restriction along psi_n for n in N(H_i).
Values on a G-set are tuples indexed by its orbits, each read at the orbit's base point.
"""
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from bispans import Bispan, compose, n_of, r_of, random_bispan, random_gset, random_map_from, random_map_into, t_of
from config import CheckConfig, SearchConfig
from errors import SearchCapExceeded, StructureError, UnsupportedOperation
from groups import FiniteGroup
from gsets import GMap, GSet
from rings import GRing, Ring, RingHom, is_ring_hom, ring_homs

logger = logging.getLogger(__name__)

StoredKey = Tuple[int, int, int]


class TambaraFunctor(ABC):
    """Base class: subclasses provide levels and the three operations along any valid orbit map"""

    def __init__(self, group: FiniteGroup, name: Optional[str] = None):
        self.group = group
        self.lattice = group.subgroup_lattice
        self.name = name or type(self).__name__
        self.logger = logging.getLogger(__name__)
        self._mrc: Optional[bool] = None

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name} over {self.group.name})"

    @abstractmethod
    def level(self, i: int) -> Ring:
        pass

    @abstractmethod
    def _res_along(self, i: int, j: int, c: int, y):
        pass

    @abstractmethod
    def _tr_along(self, i: int, j: int, c: int, x):
        pass

    @abstractmethod
    def _nm_along(self, i: int, j: int, c: int, x):
        pass

    # ------------------------------------------------------------- public ops

    @property
    def num_levels(self) -> int:
        return len(self.lattice)

    @property
    def enumerable(self) -> bool:
        return all(self.level(i).enumerable for i in range(self.num_levels))

    def levels(self) -> List[Ring]:
        return [self.level(i) for i in range(self.num_levels)]

    def zero(self, i: int):
        return self.level(i).zero

    def one(self, i: int):
        return self.level(i).one

    def check_element(self, i: int, x):
        if not self.level(i).contains(x):
            raise StructureError(f"{x!r} is not an element of level {self.lattice.name(i)} of {self.name}")

    def _along(self, i: int, j: int, along: Optional[int]) -> int:
        if along is None:
            types = self.lattice.orbit_map_types(i, j)
            if not types:
                raise StructureError(
                    f"{self.lattice.name(i)} is not subconjugate to {self.lattice.name(j)} in {self.group.name}")
            return types[0]
        if not self.lattice.is_valid(i, j, along):
            raise StructureError(
                f"{self.group.label(along)} does not define a map G/{self.lattice.name(i)} -> G/{self.lattice.name(j)}")
        return along

    def res(self, i: int, j: int, y, along: Optional[int] = None):
        """Restriction T(G/H_j) -> T(G/H_i)"""
        c = self._along(i, j, along)
        self.check_element(j, y)
        return self._res_along(i, j, c, y)

    def tr(self, i: int, j: int, x, along: Optional[int] = None):
        """Transfer T(G/H_i) -> T(G/H_j)"""
        c = self._along(i, j, along)
        self.check_element(i, x)
        return self._tr_along(i, j, c, x)

    def nm(self, i: int, j: int, x, along: Optional[int] = None):
        """Norm T(G/H_i) -> T(G/H_j)"""
        c = self._along(i, j, along)
        self.check_element(i, x)
        return self._nm_along(i, j, c, x)

    def weyl(self, i: int, n: int, x):
        """Left action of n in N(H_i) on level i"""
        return self._res_along(i, i, n, x)

    def mrc(self) -> bool:
        """Whether every restriction to the bottom level is injective"""
        if self._mrc is None:
            if not self.enumerable:
                raise UnsupportedOperation(f"Cannot decide injectivity of restrictions for {self.name}")
            self._mrc = all(
                len({self._res_along(0, i, self.lattice.orbit_map_types(0, i)[0], y) for y in self.level(i).elements()})
                == self.level(i).size
                for i in range(self.num_levels))
        return self._mrc

    def sample_element(self, rng: np.random.Generator, i: int):
        ring = self.level(i)
        if ring.enumerable:
            elements = ring.elements()
            return elements[int(rng.integers(len(elements)))]
        return self._sample_nonenumerable(rng, i)

    def _sample_nonenumerable(self, rng: np.random.Generator, i: int):
        raise UnsupportedOperation(f"Level {self.lattice.name(i)} of {self.name} cannot be sampled")

    def stored_keys(self) -> List[StoredKey]:
        """(i, j, c) for each subconjugate pair and each orbit-map type"""
        return [(i, j, c) for i in range(self.num_levels) for j in range(self.num_levels)
                for c in self.lattice.orbit_map_types(i, j)]

    def to_table(self) -> 'TableTambara':
        """Tabulate every stored operation; needs enumerable levels"""
        if not self.enumerable:
            raise UnsupportedOperation(f"{self.name} has non-enumerable levels")
        levels = self.levels()
        res, tr, nm = {}, {}, {}
        for i, j, c in self.stored_keys():
            res[(i, j, c)] = {y: self._res_along(i, j, c, y) for y in levels[j].elements()}
            tr[(i, j, c)] = {x: self._tr_along(i, j, c, x) for x in levels[i].elements()}
            nm[(i, j, c)] = {x: self._nm_along(i, j, c, x) for x in levels[i].elements()}
        conj = {}
        for i in range(self.num_levels):
            for n in self.lattice.weyl(i).reps[1:]:
                conj[(i, n)] = {x: self.weyl(i, n, x) for x in levels[i].elements()}
        return TableTambara(self.group, levels, res, tr, nm, conj, name=self.name, validate=False)

    def to_dict(self) -> Dict:
        return self.to_table().to_dict()

    def summary(self) -> Dict:
        return {
            'name': self.name,
            'group': self.group.name,
            'levels': {self.lattice.name(i): self.level(i).describe() for i in range(self.num_levels)},
            'enumerable': self.enumerable,
        }


class TableTambara(TambaraFunctor):
    """A Tambara functor given by explicit tables.

    Tables are stored per orbit-map type (i, j, c0); other orbit maps are routed as
    c = n c0 m with Weyl conjugations on either side.  conj holds the Weyl action for
    nontrivial coset representatives of N(H_i)/H_i.
    """

    def __init__(self, group: FiniteGroup, levels: Sequence[Ring], res: Dict[StoredKey, Dict],
                 tr: Dict[StoredKey, Dict], nm: Dict[StoredKey, Dict], conj: Dict[Tuple[int, int], Dict],
                 name: Optional[str] = None, validate: bool = True):
        super().__init__(group, name=name or 'table')
        self._levels = tuple(levels)
        self.res_tables = res
        self.tr_tables = tr
        self.nm_tables = nm
        self.conj_tables = conj
        if validate:
            self._validate()

    def _validate(self):
        if len(self._levels) != self.num_levels:
            raise StructureError(f"Expected {self.num_levels} levels for {self.group.name}, got {len(self._levels)}")
        for key in self.stored_keys():
            i, j, c = key
            for tables, src in ((self.res_tables, j), (self.tr_tables, i), (self.nm_tables, i)):
                table = tables.get(key)
                if table is None:
                    raise StructureError(f"Missing table for {self.key_name(key)}")
                if set(table) != set(self._levels[src].elements()):
                    raise StructureError(f"Table for {self.key_name(key)} does not cover its source level")
            dst_res, dst_other = self._levels[i], self._levels[j]
            if not all(dst_res.contains(v) for v in self.res_tables[key].values()) or \
                    not all(dst_other.contains(v) for v in self.tr_tables[key].values()) or \
                    not all(dst_other.contains(v) for v in self.nm_tables[key].values()):
                raise StructureError(f"Table for {self.key_name(key)} leaves its target level")
        for i in range(self.num_levels):
            for n in self.lattice.weyl(i).reps[1:]:
                table = self.conj_tables.get((i, n))
                if table is None or set(table) != set(self._levels[i].elements()):
                    raise StructureError(f"Missing or partial Weyl table for {self.lattice.name(i)}@{self.group.label(n)}")

    def key_name(self, key: StoredKey) -> str:
        i, j, c = key
        return f"{self.lattice.name(i)}<{self.lattice.name(j)}@{self.group.label(c)}"

    def level(self, i: int) -> Ring:
        return self._levels[i]

    def weyl(self, i: int, n: int, x):
        rep = self.lattice.coset_rep(i, n)
        if rep == 0:
            return x
        return self.conj_tables[(i, rep)][x]

    def _res_along(self, i: int, j: int, c: int, y):
        if i == j and c in self.lattice.classes[i].normalizer:
            return self.weyl(i, c, y)
        n, c0, m = self.lattice.route(i, j, c)
        return self.weyl(i, n, self.res_tables[(i, j, c0)][self.weyl(j, m, y)])

    def _tr_along(self, i: int, j: int, c: int, x):
        if i == j and c in self.lattice.classes[i].normalizer:
            return self.weyl(i, self.group.inv[c], x)
        n, c0, m = self.lattice.route(i, j, c)
        inv = self.group.inv
        return self.weyl(j, inv[m], self.tr_tables[(i, j, c0)][self.weyl(i, inv[n], x)])

    def _nm_along(self, i: int, j: int, c: int, x):
        if i == j and c in self.lattice.classes[i].normalizer:
            return self.weyl(i, self.group.inv[c], x)
        n, c0, m = self.lattice.route(i, j, c)
        inv = self.group.inv
        return self.weyl(j, inv[m], self.nm_tables[(i, j, c0)][self.weyl(i, inv[n], x)])

    def to_table(self) -> 'TableTambara':
        return self

    def with_table(self, op: str, key: StoredKey, table: Dict) -> 'TableTambara':
        """A copy with one stored table replaced (no validation)"""
        tables = {'res': dict(self.res_tables), 'tr': dict(self.tr_tables), 'nm': dict(self.nm_tables)}
        tables[op][key] = dict(table)
        return TableTambara(self.group, self._levels, tables['res'], tables['tr'], tables['nm'],
                            dict(self.conj_tables), name=f"{self.name}*", validate=False)

    def to_dict(self) -> Dict:
        G = self.group

        def encode_map(table: Dict, src: Ring, dst: Ring) -> List:
            return [[src.encode(a), dst.encode(b)] for a, b in table.items()]

        data = {
            'name': self.name,
            'group': G.to_dict(),
            'levels': {self.lattice.name(i): self.level(i).to_dict() for i in range(self.num_levels)},
            'res': {}, 'tr': {}, 'nm': {}, 'conj': {},
        }
        for key in self.stored_keys():
            i, j, _ = key
            name = self.key_name(key)
            data['res'][name] = encode_map(self.res_tables[key], self.level(j), self.level(i))
            data['tr'][name] = encode_map(self.tr_tables[key], self.level(i), self.level(j))
            data['nm'][name] = encode_map(self.nm_tables[key], self.level(i), self.level(j))
        for (i, n), table in self.conj_tables.items():
            data['conj'][f"{self.lattice.name(i)}@{G.label(n)}"] = encode_map(table, self.level(i), self.level(i))
        data['flags'] = {'enumerable': True, 'mrc': self.mrc()}
        return data


# ------------------------------------------------------------- homomorphisms


class TambaraHom:
    """Levelwise ring maps src(G/H_i) -> dst(G/H_i)"""

    def __init__(self, src: TambaraFunctor, dst: TambaraFunctor, maps: Sequence[RingHom]):
        if src.group is not dst.group:
            raise StructureError("Tambara maps need functors over the same group")
        if len(maps) != src.num_levels:
            raise StructureError(f"Expected {src.num_levels} level maps, got {len(maps)}")
        self.src = src
        self.dst = dst
        self.maps = tuple(maps)

    def __call__(self, i: int, x):
        return self.maps[i](x)

    def __eq__(self, other) -> bool:
        return isinstance(other, TambaraHom) and self.maps == other.maps

    def __hash__(self) -> int:
        return hash(self.maps)

    def compose(self, other: 'TambaraHom') -> 'TambaraHom':
        """self after other"""
        return TambaraHom(other.src, self.dst, [f.compose(g) for f, g in zip(self.maps, other.maps)])

    def kernel(self) -> List[frozenset]:
        return [m.kernel() for m in self.maps]

    def to_dict(self) -> Dict:
        lattice = self.src.lattice
        return {'levels': {lattice.name(i): m.to_dict()['map'] for i, m in enumerate(self.maps)}}

    @classmethod
    def identity(cls, T: TambaraFunctor) -> 'TambaraHom':
        return cls(T, T, [RingHom(R, R, {a: a for a in R.elements()}) for R in T.levels()])

    @classmethod
    def from_functions(cls, src: TambaraFunctor, dst: TambaraFunctor, fns: Sequence) -> 'TambaraHom':
        return cls(src, dst, [RingHom(src.level(i), dst.level(i), {a: fn(a) for a in src.level(i).elements()})
                              for i, fn in enumerate(fns)])


@dataclass
class HomReport:
    """Result of checking a candidate Tambara map"""
    valid: bool
    checked: int = 0
    violations: List[Dict] = field(default_factory=list)

    def to_dict(self) -> Dict:
        return {'valid': self.valid, 'checked': self.checked, 'violations': self.violations}


def _hom_violations(src: TambaraFunctor, dst: TambaraFunctor, maps: Sequence[RingHom],
                    levels: Sequence[int], first_only: bool = False) -> Tuple[int, List[Dict]]:
    """Commutation of maps with every operation whose levels all lie in `levels`"""
    allowed = set(levels)
    lattice = src.lattice
    violations = []
    checked = 0

    def report(op: str, key, x):
        violations.append({'op': op, 'at': key, 'input': repr(x)})

    for i, j, c in src.stored_keys():
        if i not in allowed or j not in allowed:
            continue
        key = f"{lattice.name(i)}<{lattice.name(j)}@{src.group.label(c)}"
        fi, fj = maps[i], maps[j]
        for y in src.level(j).elements():
            checked += 1
            if fi(src._res_along(i, j, c, y)) != dst._res_along(i, j, c, fj(y)):
                report('res', key, y)
                if first_only:
                    return checked, violations
        for x in src.level(i).elements():
            checked += 2
            if fj(src._tr_along(i, j, c, x)) != dst._tr_along(i, j, c, fi(x)):
                report('tr', key, x)
            if fj(src._nm_along(i, j, c, x)) != dst._nm_along(i, j, c, fi(x)):
                report('nm', key, x)
            if first_only and violations:
                return checked, violations
    for i in levels:
        for n in lattice.weyl(i).reps[1:]:
            f = maps[i]
            for x in src.level(i).elements():
                checked += 1
                if f(src.weyl(i, n, x)) != dst.weyl(i, n, f(x)):
                    report('conj', f"{lattice.name(i)}@{src.group.label(n)}", x)
                    if first_only:
                        return checked, violations
    return checked, violations


def check_hom(phi: TambaraHom) -> HomReport:
    """Exhaustive check of levelwise ring-map laws and commutation with res, tr, nm and conj"""
    src, dst = phi.src, phi.dst
    violations = []
    checked = 0
    for i, f in enumerate(phi.maps):
        if f.src is not src.level(i) or f.dst is not dst.level(i):
            violations.append({'op': 'level', 'at': src.lattice.name(i), 'input': 'map between the wrong rings'})
        elif not is_ring_hom(f):
            violations.append({'op': 'ring', 'at': src.lattice.name(i), 'input': 'not a ring homomorphism'})
    if not violations:
        checked, violations = _hom_violations(src, dst, phi.maps, range(src.num_levels))
    report = HomReport(valid=not violations, checked=checked, violations=violations[:20])
    logger.debug(f"check_hom: {checked} checks, {len(violations)} violations")
    return report


def enumerate_homs(S, T: TambaraFunctor, cap: Optional[int] = None) -> List:
    """All Tambara maps S -> T.

    S is either a finite Tambara functor (levelwise ring maps are combined level by level
    and pruned by commutation) or a Presentation (generator assignments filtered by relations).
    """
    from free_poly import Presentation
    if isinstance(S, Presentation):
        return S.homs_to(T, cap=cap)
    cap = cap or SearchConfig.HOM_SEARCH_CAP
    if S.group is not T.group:
        raise StructureError("Tambara maps need functors over the same group")
    candidates = [ring_homs(S.level(i), T.level(i), cap=cap) for i in range(S.num_levels)]
    total = 1
    for c in candidates:
        total *= max(1, len(c))
    logger.debug(f"Hom search {S.name} -> {T.name}: levelwise candidates {[len(c) for c in candidates]}")
    results = []
    explored = 0

    def extend(k: int, chosen: List[RingHom]):
        nonlocal explored
        if k == S.num_levels:
            results.append(TambaraHom(S, T, chosen))
            return
        for f in candidates[k]:
            explored += 1
            if explored > cap:
                raise SearchCapExceeded(f"Hom search exceeded the cap {cap}")
            trial = chosen + [f]
            padded = trial + [None] * (S.num_levels - k - 1)
            _, bad = _hom_violations(S, T, padded, range(k + 1), first_only=True)
            if not bad:
                extend(k + 1, trial)

    extend(0, [])
    logger.info(f"Found {len(results)} Tambara maps {S.name} -> {T.name}")
    return results


def weyl_gring(T: TambaraFunctor) -> GRing:
    """T(G/e) with the group acting through the Weyl action on the bottom level"""
    R = T.level(0)
    action = [{a: T.weyl(0, g, a) for a in R.elements()} for g in T.group.elements]
    return GRing(T.group, R, action)


def equivariant_ring_homs(T: TambaraFunctor, target: GRing, cap: Optional[int] = None) -> List[RingHom]:
    """Ring maps T(G/e) -> S commuting with the group actions"""
    homs = ring_homs(T.level(0), target.base, cap=cap)
    G = T.group
    return [f for f in homs
            if all(f(T.weyl(0, g, a)) == target.act(g, f(a)) for g in G.elements for a in T.level(0).elements())]


# ------------------------------------------------------------ bispan action


def _orbit_routes(f: GMap) -> List[Tuple[int, int, int, int]]:
    """(i, j, c, target orbit) for each source orbit, with the orbit map eH_i -> cH_j"""
    routes = []
    for orbit in f.src.orbits:
        image = f(orbit.base)
        o = f.dst.orbits.orbit_of[image]
        target = f.dst.orbits[o]
        routes.append((orbit.class_index, target.class_index, target.transversal[image], o))
    return routes


def restrict_along(T: TambaraFunctor, f: GMap, values: Sequence) -> Tuple:
    return tuple(T._res_along(i, j, c, values[o]) for i, j, c, o in _orbit_routes(f))


def transfer_along(T: TambaraFunctor, f: GMap, values: Sequence) -> Tuple:
    out = [T.zero(target.class_index) for target in f.dst.orbits]
    for (i, j, c, o), x in zip(_orbit_routes(f), values):
        out[o] = T.level(j).add(out[o], T._tr_along(i, j, c, x))
    return tuple(out)


def norm_along(T: TambaraFunctor, f: GMap, values: Sequence) -> Tuple:
    out = [T.one(target.class_index) for target in f.dst.orbits]
    for (i, j, c, o), x in zip(_orbit_routes(f), values):
        out[o] = T.level(j).mul(out[o], T._nm_along(i, j, c, x))
    return tuple(out)


def eval_bispan(T: TambaraFunctor, b: Bispan, x: Sequence) -> Tuple:
    """T(b) = T_f N_g R_h on values indexed by the source orbits"""
    if b.group is not T.group:
        raise StructureError("Bispan and functor are over different groups")
    source_orbits = b.source.orbits
    if len(x) != len(source_orbits):
        raise StructureError(f"Expected {len(source_orbits)} values, one per source orbit, got {len(x)}")
    for orbit, value in zip(source_orbits, x):
        T.check_element(orbit.class_index, value)
    d = b.diagram
    return transfer_along(T, d.f, norm_along(T, d.g, restrict_along(T, d.h, x)))


# ------------------------------------------------------------ axiom checks


RULES = ('Mackey (R.T)', 'Tambara reciprocity (N.T)', 'Frobenius (N.T along a fold)', 'R.N', 'Weyl', 'functoriality')


@dataclass
class AxiomReport:
    """Both-ways evaluation of random composable bispan pairs"""
    functor: str
    group: str
    seed: int
    budget: int
    pairs_checked: int = 0
    evaluations: int = 0
    skipped: int = 0
    by_rule: Dict[str, int] = field(default_factory=dict)
    violations: List[Dict] = field(default_factory=list)
    violation_count: int = 0

    @property
    def passed(self) -> bool:
        return self.violation_count == 0

    def to_dict(self) -> Dict:
        return {
            'functor': self.functor, 'group': self.group, 'seed': self.seed, 'budget': self.budget,
            'pairs_checked': self.pairs_checked, 'evaluations': self.evaluations, 'skipped': self.skipped,
            'by_rule': dict(sorted(self.by_rule.items())), 'passed': self.passed,
            'violation_count': self.violation_count, 'violations': self.violations,
        }


def _fold(Z: GSet) -> GMap:
    Y, _ = GSet.coproduct(Z.group, [Z, Z])
    return GMap(Y, Z, [x % Z.size for x in range(Y.size)], validate=False)


def _orbit_automorphism(rng: np.random.Generator, group: FiniteGroup) -> GMap:
    lattice = group.subgroup_lattice
    i = int(rng.integers(len(lattice)))
    reps = lattice.weyl(i).reps
    return GMap.orbit_map(group, i, i, reps[int(rng.integers(len(reps)))])


def _sample_pair(rng: np.random.Generator, group: FiniteGroup, rule: str) -> Tuple[Bispan, Bispan]:
    """b1: X -> Y and b2: Y -> Z exercising one composition rule"""
    if rule.startswith('Mackey'):
        f1 = random_map_into(rng, random_gset(rng, group))
        return t_of(f1), r_of(random_map_into(rng, f1.dst))
    if rule.startswith('Tambara'):
        g2 = random_map_into(rng, random_gset(rng, group))
        return t_of(random_map_into(rng, g2.src)), n_of(g2)
    if rule.startswith('Frobenius'):
        g2 = _fold(random_gset(rng, group, max_points=4))
        return t_of(random_map_into(rng, g2.src)), n_of(g2)
    if rule == 'R.N':
        g1 = random_map_into(rng, random_gset(rng, group))
        return n_of(g1), r_of(random_map_into(rng, g1.dst))
    if rule == 'Weyl':
        auto = _orbit_automorphism(rng, group)
        f = random_map_from(rng, auto.src)
        second = (t_of, n_of)[int(rng.integers(2))](f)
        return r_of(auto), second
    X, Y, Z = (random_gset(rng, group) for _ in range(3))
    return random_bispan(rng, X, Y), random_bispan(rng, Y, Z)


def _inputs(T: TambaraFunctor, rng: np.random.Generator, X: GSet, count: int) -> List[Tuple]:
    types = X.orbits.types
    rings = [T.level(i) for i in types]
    if all(R.enumerable for R in rings):
        total = 1
        for R in rings:
            total *= R.size
        if total <= CheckConfig.EXHAUSTIVE_LEVEL_LIMIT:
            return list(product(*(R.elements() for R in rings)))
    return [tuple(T.sample_element(rng, i) for i in types) for _ in range(count)]


def _encode_values(T: TambaraFunctor, X: GSet, values: Sequence) -> List:
    return [T.level(i).encode(v) for i, v in zip(X.orbits.types, values)]


def check_axioms(T: TambaraFunctor, seed: int, budget: Optional[int] = None,
                 samples_per_pair: int = 3, max_reported: int = 20) -> AxiomReport:
    """Compare eval(b2, eval(b1, x)) with eval(compose(b2, b1), x) on seeded random pairs"""
    budget = budget or CheckConfig.DEFAULT_BUDGET
    rng = np.random.default_rng(seed)
    report = AxiomReport(functor=T.name, group=T.group.name, seed=seed, budget=budget)
    for k in range(budget):
        rule = RULES[k % len(RULES)]
        try:
            b1, b2 = _sample_pair(rng, T.group, rule)
            composite = compose(b2, b1)
        except SearchCapExceeded:
            report.skipped += 1
            continue
        report.pairs_checked += 1
        report.by_rule[rule] = report.by_rule.get(rule, 0) + 1
        for x in _inputs(T, rng, b1.source, samples_per_pair):
            report.evaluations += 1
            two_step = eval_bispan(T, b2, eval_bispan(T, b1, x))
            direct = eval_bispan(T, composite, x)
            if two_step != direct:
                report.violation_count += 1
                if len(report.violations) < max_reported:
                    report.violations.append({
                        'rule': rule, 'first': str(b1), 'second': str(b2),
                        'input': _encode_values(T, b1.source, x),
                        'two_step': _encode_values(T, b2.target, two_step),
                        'composed': _encode_values(T, b2.target, direct),
                    })
    if report.passed:
        T.logger.info(f"{T.name}: {report.pairs_checked} bispan pairs, {report.evaluations} evaluations, no violations")
    else:
        T.logger.warning(f"{T.name}: {report.violation_count} violations in {report.evaluations} evaluations")
    return report


def _level_inputs(T: TambaraFunctor, i: int, rng: np.random.Generator, count: int) -> List:
    ring = T.level(i)
    if ring.enumerable and ring.size <= CheckConfig.EXHAUSTIVE_LEVEL_LIMIT ** 2:
        return list(ring.elements())
    return [T.sample_element(rng, i) for _ in range(count)]


def mackey_terms(lattice, i: int, j: int, c: int, k: int, d: int) -> List[Tuple[int, int, int]]:
    """
    Summands of res along (k, j, d) after tr along (i, j, c), one per double coset K'gH' inside H_j
    with K' = d^-1 H_k d and H' = c^-1 H_i c.

    With a = d g c^-1 the summand lives on the orbit of (aH_i, eH_k) in the pullback, whose
    stabilizer is L = aH_ia^-1 & H_k.  Each term (l, u, v) reads tr along eH_l -> uH_k after
    res along eH_l -> vH_i, where u^-1 H_l u = L and v = ua.
    """
    G = lattice.group
    m, inv = G.m, G.inv
    Hi, Hj, Hk = lattice.rep(i), lattice.rep(j), lattice.rep(k)
    terms = []
    for g in G.double_cosets(G.conjugate(Hk, d), G.conjugate(Hi, c)):
        if g not in Hj:
            continue
        a = m(m(d, g), inv[c])
        stabilizer = G.conjugate(Hi, inv[a]) & Hk
        l = lattice.class_of(stabilizer)
        u = lattice.conjugator(l, stabilizer)
        terms.append((l, u, m(u, a)))
    return terms


def check_mackey(T: TambaraFunctor, seed: Optional[int] = None, samples: int = 16) -> List[Dict]:
    """res_K tr_H = sum over double cosets of tr conj res, for every pair of orbit maps into a common orbit"""
    rng = np.random.default_rng(CheckConfig.DEFAULT_SEED if seed is None else seed)
    lattice = T.lattice
    G = T.group
    violations = []
    for i, j, c in T.stored_keys():
        for k in range(T.num_levels):
            Rk = T.level(k)
            for d in lattice.orbit_map_types(k, j):
                terms = mackey_terms(lattice, i, j, c, k, d)
                for x in _level_inputs(T, i, rng, samples):
                    lhs = T._res_along(k, j, d, T._tr_along(i, j, c, x))
                    rhs = T.zero(k)
                    for l, u, v in terms:
                        rhs = Rk.add(rhs, T._tr_along(l, k, u, T._res_along(l, i, v, x)))
                    if lhs != rhs:
                        violations.append({'transfer': f"{lattice.name(i)}<{lattice.name(j)}@{G.label(c)}",
                                           'restriction': f"{lattice.name(k)}<{lattice.name(j)}@{G.label(d)}",
                                           'input': T.level(i).encode(x),
                                           'double_cosets': len(terms)})
    return violations


def check_frobenius(T: TambaraFunctor, seed: Optional[int] = None, samples: int = 16) -> List[Dict]:
    """tr(x * res y) = tr(x) * y along every stored orbit map"""
    rng = np.random.default_rng(CheckConfig.DEFAULT_SEED if seed is None else seed)
    violations = []
    for i, j, c in T.stored_keys():
        Ri, Rj = T.level(i), T.level(j)
        xs = _level_inputs(T, i, rng, samples)
        ys = _level_inputs(T, j, rng, samples)
        for x in xs:
            tx = T._tr_along(i, j, c, x)
            for y in ys:
                if T._tr_along(i, j, c, Ri.mul(x, T._res_along(i, j, c, y))) != Rj.mul(tx, y):
                    violations.append({'at': f"{T.lattice.name(i)}<{T.lattice.name(j)}@{T.group.label(c)}",
                                       'x': Ri.encode(x), 'y': Rj.encode(y)})
    return violations
