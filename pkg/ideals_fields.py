"""
Nakaoka ideals of Tambara functors: closure, verification, quotients, and the
field-like decision procedure.
"""
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from config import CheckConfig
from errors import InconsistencyError, StructureError
from rings import (CornerRing, QuotientRing, RingHom, additive_generators, ideal_generated, is_field,
                   is_nilpotent, primitive_idempotents)
from tambara_core import TableTambara, TambaraFunctor, TambaraHom

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class NakaokaIdeal:
    """One subset per level of a Tambara functor"""
    functor: TambaraFunctor
    levels: Tuple[frozenset, ...]

    def __eq__(self, other) -> bool:
        return isinstance(other, NakaokaIdeal) and self.levels == other.levels

    def __hash__(self) -> int:
        return hash(self.levels)

    def is_zero(self) -> bool:
        T = self.functor
        return all(level == {T.zero(i)} for i, level in enumerate(self.levels))

    def is_unit(self) -> bool:
        return all(T_i.one in level for T_i, level in zip(self.functor.levels(), self.levels))

    def sizes(self) -> List[int]:
        return [len(level) for level in self.levels]

    def to_dict(self) -> Dict:
        T = self.functor
        return {T.lattice.name(i): [T.level(i).encode(a) for a in T.level(i).elements() if a in level]
                for i, level in enumerate(self.levels)}

    @classmethod
    def zero(cls, T: TambaraFunctor) -> 'NakaokaIdeal':
        return cls(T, tuple(frozenset({T.zero(i)}) for i in range(T.num_levels)))

    @classmethod
    def unit(cls, T: TambaraFunctor) -> 'NakaokaIdeal':
        return cls(T, tuple(frozenset(T.level(i).elements()) for i in range(T.num_levels)))


def _close_once(T: TambaraFunctor, levels: List[set]) -> List[set]:
    """One round of every closure clause; returns the enlarged levels"""
    lattice = T.lattice
    extra = [set() for _ in levels]
    gens = [additive_generators(T.level(i), sorted(levels[i], key=T.level(i).position))
            for i in range(T.num_levels)]
    for i in range(T.num_levels):
        for n in lattice.weyl(i).reps[1:]:
            extra[i].update(T.weyl(i, n, a) for a in gens[i])
    for i, j, c in T.stored_keys():
        Ri, Rj = T.level(i), T.level(j)
        extra[i].update(T._res_along(i, j, c, a) for a in gens[j])
        extra[j].update(T._tr_along(i, j, c, a) for a in gens[i])
        for x in Ri.elements():
            base = T._nm_along(i, j, c, x)
            for a in gens[i]:
                extra[j].add(Rj.sub(T._nm_along(i, j, c, Ri.add(x, a)), base))
    return [set(ideal_generated(T.level(i), levels[i] | extra[i])) for i in range(T.num_levels)]


def ideal_closure(T: TambaraFunctor, generators) -> NakaokaIdeal:
    """The least Nakaoka ideal containing the generators ({level: [elements]} or [(level, element)])"""
    pairs = generators.items() if isinstance(generators, dict) else [(i, [x]) for i, x in generators]
    levels = [{T.zero(i)} for i in range(T.num_levels)]
    for i, elements in pairs:
        for x in elements:
            T.check_element(i, x)
            levels[i].add(x)
    levels = [set(ideal_generated(T.level(i), levels[i])) for i in range(T.num_levels)]
    rounds = 0
    while True:
        rounds += 1
        grown = _close_once(T, levels)
        if grown == levels:
            break
        levels = grown
    logger.debug(f"Ideal closure in {T.name} stabilised after {rounds} rounds at sizes {[len(l) for l in levels]}")
    return NakaokaIdeal(T, tuple(frozenset(l) for l in levels))


@dataclass
class IdealReport:
    valid: bool
    clause: Optional[str] = None
    detail: Optional[str] = None

    def __bool__(self) -> bool:
        return self.valid

    def to_dict(self) -> Dict:
        return {'valid': self.valid, 'clause': self.clause, 'detail': self.detail}


def is_ideal(T: TambaraFunctor, ideal) -> IdealReport:
    """Check every clause of a Nakaoka ideal; reports the first violated one"""
    levels = ideal.levels if isinstance(ideal, NakaokaIdeal) else tuple(frozenset(l) for l in ideal)
    lattice = T.lattice
    if len(levels) != T.num_levels:
        return IdealReport(False, 'shape', f"expected {T.num_levels} levels")
    for i, I in enumerate(levels):
        R = T.level(i)
        name = lattice.name(i)
        if not all(R.contains(a) for a in I):
            return IdealReport(False, 'ring ideal', f"level {name} has elements outside the ring")
        if ideal_generated(R, I) != I or R.zero not in I:
            return IdealReport(False, 'ring ideal', f"level {name} is not a ring ideal")
        for n in lattice.weyl(i).reps[1:]:
            for a in I:
                if T.weyl(i, n, a) not in I:
                    return IdealReport(False, 'Weyl', f"{R.encode(a)} at {name} moved out by {T.group.label(n)}")
    for i, j, c in T.stored_keys():
        key = f"{lattice.name(i)}<{lattice.name(j)}@{T.group.label(c)}"
        Ri, Rj = T.level(i), T.level(j)
        for a in levels[j]:
            if T._res_along(i, j, c, a) not in levels[i]:
                return IdealReport(False, 'restriction', f"res {key} of {Rj.encode(a)}")
        for a in levels[i]:
            if T._tr_along(i, j, c, a) not in levels[j]:
                return IdealReport(False, 'transfer', f"tr {key} of {Ri.encode(a)}")
        gens = additive_generators(Ri, sorted(levels[i], key=Ri.position))
        for x in Ri.elements():
            base = T._nm_along(i, j, c, x)
            for a in gens:
                if Rj.sub(T._nm_along(i, j, c, Ri.add(x, a)), base) not in levels[j]:
                    return IdealReport(False, 'norm', f"nm {key}: x = {Ri.encode(x)}, a = {Ri.encode(a)}")
    return IdealReport(True)


def kernel(phi: TambaraHom) -> NakaokaIdeal:
    return NakaokaIdeal(phi.src, tuple(phi.kernel()))


def quotient(T: TambaraFunctor, ideal: NakaokaIdeal) -> Tuple[TableTambara, TambaraHom]:
    """T/I as a table functor, with the projection T -> T/I"""
    report = is_ideal(T, ideal)
    if not report:
        raise StructureError(f"Not a Nakaoka ideal ({report.clause}): {report.detail}")
    levels = [QuotientRing(T.level(i), ideal.levels[i]) for i in range(T.num_levels)]
    res, tr, nm = {}, {}, {}
    for key in T.stored_keys():
        i, j, c = key
        Qi, Qj = levels[i], levels[j]
        res[key] = {y: Qi.reduce(T._res_along(i, j, c, y)) for y in Qj.elements()}
        tr[key] = {x: Qj.reduce(T._tr_along(i, j, c, x)) for x in Qi.elements()}
        nm[key] = {x: Qj.reduce(T._nm_along(i, j, c, x)) for x in Qi.elements()}
    conj = {}
    for i in range(T.num_levels):
        for n in T.lattice.weyl(i).reps[1:]:
            conj[(i, n)] = {x: levels[i].reduce(T.weyl(i, n, x)) for x in levels[i].elements()}
    Q = TableTambara(T.group, levels, res, tr, nm, conj, name=f"{T.name}/I")
    projection = TambaraHom(T, Q, [RingHom(T.level(i), levels[i], {a: levels[i].reduce(a) for a in T.level(i).elements()})
                                   for i in range(T.num_levels)])
    return Q, projection


def enumerate_ideals(T: TambaraFunctor) -> List[NakaokaIdeal]:
    """Every Nakaoka ideal, by closing each known ideal with one more element"""
    start = ideal_closure(T, {})
    found = {start: None}
    queue = [start]
    while queue:
        I = queue.pop(0)
        for i in range(T.num_levels):
            for x in T.level(i).elements():
                if x in I.levels[i]:
                    continue
                generators = {k: list(level) for k, level in enumerate(I.levels)}
                generators[i].append(x)
                J = ideal_closure(T, generators)
                if J not in found:
                    found[J] = None
                    queue.append(J)
    return list(found)


@dataclass
class FieldLikeReport:
    """Decision and witness for the field-like test"""
    field_like: bool
    reason: str
    witness: Optional[NakaokaIdeal] = None
    witness_element: Optional[Dict] = None
    exhaustive: Optional[bool] = None
    ideal_count: Optional[int] = None

    def to_dict(self) -> Dict:
        return {
            'field_like': self.field_like,
            'reason': self.reason,
            'witness_ideal': self.witness.to_dict() if self.witness is not None else None,
            'witness_element': self.witness_element,
            'exhaustive': self.exhaustive,
            'ideal_count': self.ideal_count,
        }


def stable_ideal_witness(T: TambaraFunctor) -> Optional[Tuple[str, object]]:
    """An element of T(G/e) generating a proper nonzero G-stable ideal, or None.

    T(G/e) is the product of its local factors eR over primitive idempotents e; a proper
    nonzero G-stable ideal exists iff some factor is not a field or G does not permute
    the primitive idempotents transitively.
    """
    R = T.level(0)
    G = T.group
    primitives = primitive_idempotents(R)
    for e in primitives:
        corner = CornerRing(R, e)
        if not is_field(corner):
            nilpotent = next(a for a in corner.elements() if a != R.zero and is_nilpotent(corner, a))
            return 'local factor is not a field', nilpotent
    orbit = {T.weyl(0, g, primitives[0]) for g in G.elements}
    if len(orbit) != len(primitives):
        return 'group does not permute the primitive idempotents transitively', primitives[0]
    return None


def _fast_path(T: TambaraFunctor) -> FieldLikeReport:
    R = T.level(0)
    if R.is_zero_ring():
        return FieldLikeReport(False, 'bottom level is the zero ring', NakaokaIdeal.unit(T))
    for i in range(1, T.num_levels):
        for y in T.level(i).elements():
            if y != T.zero(i) and T._res_along(0, i, 0, y) == R.zero:
                witness = ideal_closure(T, {i: [y]})
                return FieldLikeReport(False, f"restriction from {T.lattice.name(i)} to e is not injective",
                                       witness, {'level': T.lattice.name(i), 'element': T.level(i).encode(y)})
    found = stable_ideal_witness(T)
    if found is not None:
        reason, a = found
        return FieldLikeReport(False, reason, ideal_closure(T, {0: [a]}), {'level': 'e', 'element': R.encode(a)})
    return FieldLikeReport(True, 'restrictions to e are injective and T(G/e) has no proper G-stable ideal')


def is_field_like(T: TambaraFunctor, exhaustive: Optional[bool] = None) -> FieldLikeReport:
    """Whether the zero ideal is the only proper Nakaoka ideal.

    The fast path is always run; the exhaustive ideal enumeration also runs when the total
    level size is at most the configured limit (or when forced) and must agree.
    """
    report = _fast_path(T)
    total = sum(T.level(i).size for i in range(T.num_levels))
    run_slow = exhaustive if exhaustive is not None else total <= CheckConfig.FIELDLIKE_EXHAUSTIVE_LIMIT
    if run_slow:
        ideals = enumerate_ideals(T)
        slow = len(ideals) == 2 and not T.level(0).is_zero_ring()
        report.exhaustive = True
        report.ideal_count = len(ideals)
        if slow != report.field_like:
            logger.error(f"Field-like paths disagree on {T.name}: fast={report.field_like}, exhaustive={slow}")
            raise InconsistencyError(f"Fast and exhaustive field-like decisions disagree on {T.name}")
    logger.info(f"{T.name} field-like: {report.field_like} ({report.reason})")
    return report
