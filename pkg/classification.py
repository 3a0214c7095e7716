"""
Structure recognition for Tambara functors.

Decides whether a functor is the fixed-point functor of its bottom level, searches for
a free orbit of orthogonal idempotents (which exhibits T as coinduced from a ring A),
builds maps into coinduced finite fields along a tower, and checks Mackey modules over
coinduced Green functors.
"""
import logging
from dataclasses import dataclass, field
from math import gcd
from typing import Callable, Dict, List, Optional

from config import SearchConfig
from constructions import BurnsideTambara, coinduce, constant
from errors import StructureError, UnsupportedOperation
from gsets import GMap, pullback
from ideals_fields import is_field_like
from rings import (CornerRing, GaloisField, IntegersMod, ProductRing, Ring, RingHom, Subring,
                   additive_generators, characteristic, idempotents, is_field, ring_homs)
from tambara_core import TambaraFunctor, TambaraHom, check_hom, enumerate_homs, restrict_along, transfer_along

logger = logging.getLogger(__name__)


# ------------------------------------------------------------ fixed-point form


@dataclass
class FixedPointFormReport:
    holds: bool
    reason: Optional[str] = None
    level: Optional[str] = None

    def __bool__(self) -> bool:
        return self.holds

    def to_dict(self) -> Dict:
        return {'holds': self.holds, 'reason': self.reason, 'level': self.level}


def check_fixed_point_form(T: TambaraFunctor) -> FixedPointFormReport:
    """Whether restriction identifies every level with the fixed points of T(G/e)"""
    lattice = T.lattice
    if not T.enumerable:
        if isinstance(T, BurnsideTambara):
            for i in range(1, T.num_levels):
                if T.level(i).rank > 1:
                    return FixedPointFormReport(False, f"A({lattice.name(i)}) has rank {T.level(i).rank} "
                                                       f"but the fixed points of A(e) have rank 1", lattice.name(i))
            return FixedPointFormReport(True)
        raise UnsupportedOperation(f"{T.name} has non-enumerable levels")
    R0 = T.level(0)
    for i in range(T.num_levels):
        H = lattice.rep(i)
        fixed = {a for a in R0.elements() if all(T.weyl(0, h, a) == a for h in H)}
        image = [T._res_along(0, i, 0, y) for y in T.level(i).elements()]
        if len(set(image)) != len(image):
            return FixedPointFormReport(False, 'restriction to e is not injective', lattice.name(i))
        if set(image) != fixed:
            return FixedPointFormReport(False, 'image of restriction differs from the fixed points', lattice.name(i))
    return FixedPointFormReport(True)


# ---------------------------------------------------------- coinduced splitting


@dataclass
class SplittingCertificate:
    """A free orbit y_g of orthogonal idempotents summing to 1, and T ~ coinduce(y_e T(G/e))"""
    idempotents: Dict[str, object]
    base: CornerRing
    coinduced: TambaraFunctor
    iso: TambaraHom
    iso_valid: bool
    bijective: bool

    def to_dict(self) -> Dict:
        R = self.base.base
        return {
            'idempotents': {g: R.encode(y) for g, y in self.idempotents.items()},
            'base_ring': {'description': self.base.describe(), 'size': self.base.size,
                          'elements': [R.encode(a) for a in self.base.elements()],
                          'is_field': is_field(self.base)},
            'iso': self.iso.to_dict(),
            'iso_valid': self.iso_valid,
            'bijective': self.bijective,
        }


@dataclass
class SplittingSearch:
    certificate: Optional[SplittingCertificate]
    transcript: Dict = field(default_factory=dict)

    def to_dict(self) -> Dict:
        return {'found': self.certificate is not None,
                'certificate': self.certificate.to_dict() if self.certificate else None,
                'transcript': self.transcript}


def find_coinduced_splitting(T: TambaraFunctor) -> SplittingSearch:
    """Search idempotents e of T(G/e) whose translates g.e are distinct, orthogonal and sum to 1"""
    G = T.group
    R = T.level(0)
    candidates = idempotents(R)
    if len(candidates) > SearchConfig.IDEMPOTENT_CAP:
        raise UnsupportedOperation(f"{len(candidates)} idempotents exceed the search cap")
    transcript = {'idempotents': len(candidates), 'rejected_zero': 0, 'rejected_orbit_size': 0,
                  'rejected_orthogonality': 0, 'rejected_sum': 0}
    for e in candidates:
        if e == R.zero:
            transcript['rejected_zero'] += 1
            continue
        orbit = [T.weyl(0, g, e) for g in G.elements]
        if len(set(orbit)) != G.order:
            transcript['rejected_orbit_size'] += 1
            continue
        if any(R.mul(e, y) != R.zero for y in orbit[1:]):
            transcript['rejected_orthogonality'] += 1
            continue
        if R.sum(orbit) != R.one:
            transcript['rejected_sum'] += 1
            continue
        certificate = _certify(T, e, orbit)
        transcript['accepted'] = R.encode(e)
        logger.info(f"{T.name} splits as coinduced from a ring of size {certificate.base.size}")
        return SplittingSearch(certificate, transcript)
    logger.info(f"{T.name}: no free orbit of orthogonal idempotents among {len(candidates)} idempotents")
    return SplittingSearch(None, transcript)


def _certify(T: TambaraFunctor, e, orbit: List) -> SplittingCertificate:
    G = T.group
    R = T.level(0)
    A = CornerRing(R, e)
    C = coinduce(G, A, name=f"coinduce({A.describe()})")

    def phi(r):
        return tuple(R.mul(e, T.weyl(0, h, r)) for h in G.elements)

    fns = [(lambda x, i=i: phi(T._res_along(0, i, 0, x))) for i in range(T.num_levels)]
    iso = TambaraHom.from_functions(T, C, fns)
    bijective = all(m.is_injective() and len(m.table) == C.level(i).size for i, m in enumerate(iso.maps))
    report = check_hom(iso)
    return SplittingCertificate(idempotents={G.label(g): y for g, y in zip(G.elements, orbit)},
                                base=A, coinduced=C, iso=iso, iso_valid=report.valid, bijective=bijective)


# ------------------------------------------------------------------- verdicts


@dataclass
class ShapeVerdict:
    """CoinducedFromField(A) or NotCoinduced(reason)"""
    kind: str
    reason: str
    field_size: Optional[int] = None
    certificate: Optional[SplittingCertificate] = None

    @property
    def coinduced(self) -> bool:
        return self.kind == 'CoinducedFromField'

    def to_dict(self) -> Dict:
        data = {'verdict': self.kind, 'reason': self.reason}
        if self.certificate is not None:
            data['field_size'] = self.field_size
            data['certificate'] = self.certificate.to_dict()
            data['nullstellensatzian'] = ('coinduced from the finite field of size '
                                          f'{self.field_size}; Nullstellensatzian only in the limit '
                                          'along the closure tower')
        return data


def classify_nullstellensatzian_shape(T: TambaraFunctor) -> ShapeVerdict:
    """Field-like, fixed-point form, coinduced splitting, and a field test on the base ring"""
    if T.level(0).is_zero_ring():
        return ShapeVerdict('NotCoinduced', 'terminal (zero) functor')
    if not T.enumerable:
        form = check_fixed_point_form(T)
        reason = form.reason if not form else 'levels are not finite'
        return ShapeVerdict('NotCoinduced', f"not of fixed-point form: {reason}")
    fieldlike = is_field_like(T)
    if not fieldlike.field_like:
        return ShapeVerdict('NotCoinduced', f"not field-like: {fieldlike.reason}")
    form = check_fixed_point_form(T)
    if not form:
        return ShapeVerdict('NotCoinduced', f"not of fixed-point form at {form.level}: {form.reason}")
    search = find_coinduced_splitting(T)
    certificate = search.certificate
    if certificate is None:
        return ShapeVerdict('NotCoinduced', 'no free orbit of orthogonal idempotents in T(G/e)')
    if not (certificate.iso_valid and certificate.bijective):
        return ShapeVerdict('NotCoinduced', 'splitting idempotents found but the comparison map is not an iso')
    if not is_field(certificate.base):
        return ShapeVerdict('NotCoinduced', 'coinduced, but from a ring that is not a field',
                            field_size=certificate.base.size, certificate=certificate)
    verdict = ShapeVerdict('CoinducedFromField', f"coinduced from a field with {certificate.base.size} elements",
                           field_size=certificate.base.size, certificate=certificate)
    logger.info(f"{T.name}: {verdict.reason}")
    return verdict


# ----------------------------------------------------------- closure tower maps


def _degree(p: int, q: int) -> int:
    d, n = 0, 1
    while n < q:
        n *= p
        d += 1
    if n != q:
        raise StructureError(f"{q} is not a power of {p}")
    return d


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


@dataclass
class ClosureMapReport:
    """The map T -> coinduce(F_{q^m}) and the factoring evidence for smaller tower fields"""
    characteristic: int
    fixed_field_size: int
    target_field_size: int
    hom: TambaraHom
    hom_valid: bool
    embedding: List[List]
    factoring: List[Dict] = field(default_factory=list)

    @property
    def all_factor(self) -> bool:
        return all(entry['all_factor'] for entry in self.factoring)

    def to_dict(self) -> Dict:
        return {
            'characteristic': self.characteristic,
            'fixed_field_size': self.fixed_field_size,
            'target_field_size': self.target_field_size,
            'hom_valid': self.hom_valid,
            'embedding': self.embedding,
            'factoring': self.factoring,
            'all_factor': self.all_factor,
        }


def _adjoint_hom(T: TambaraFunctor, target: GaloisField, rho: RingHom) -> TambaraHom:
    """x -> (h -> rho(h . res x)) into coinduce(target)"""
    G = T.group
    C = coinduce(G, target, name=f"coinduce({target.describe()})")

    def lift(r):
        return tuple(rho(T.weyl(0, h, r)) for h in G.elements)

    fns = [(lambda x, i=i: lift(T._res_along(0, i, 0, x))) for i in range(T.num_levels)]
    return TambaraHom.from_functions(T, C, fns)


def _factors(T: TambaraFunctor, rho: RingHom, rho_other: RingHom, big: GaloisField,
             other: GaloisField) -> bool:
    """Whether iota . rho_other = sigma . rho . g for an embedding sigma and a group element g,
    compared in a common field"""
    common = GaloisField(big.p, _lcm(big.k, other.k))
    iota = other.embedding_into(common)
    base = big.embedding_into(common)
    R = rho.src
    wanted = [iota(rho_other(r)) for r in R.elements()]
    for g in T.group.elements:
        twisted = [rho(T.weyl(0, g, r)) for r in R.elements()]
        for k in range(big.k):
            if all(w == common.frobenius(base(t), k) for w, t in zip(wanted, twisted)):
                return True
    return False


def algebraic_closure_map(T: TambaraFunctor, m: int, tower_cap: Optional[int] = None) -> ClosureMapReport:
    """Map T into coinduce(F_{q^m}) where F_q = T(G/e)^G, and test that maps into coinduced
    finite fields of degree up to tower_cap factor through it"""
    tower_cap = tower_cap or SearchConfig.CLOSURE_TOWER_CAP
    G = T.group
    R = T.level(0)
    fixed = [a for a in R.elements() if all(T.weyl(0, g, a) == a for g in G.elements)]
    F = Subring(R, fixed, validate=False)
    if not is_field(F):
        raise StructureError(f"T(G/e)^G of {T.name} is not a field")
    p = characteristic(F)
    q = F.size
    d = _degree(p, q)
    target = GaloisField(p, d * m)
    homs = ring_homs(R, target)
    if not homs:
        raise StructureError(f"T(G/e) of {T.name} does not embed in GF({target.q}); increase the tower degree")
    rho = homs[0]
    hom = _adjoint_hom(T, target, rho)
    report = ClosureMapReport(characteristic=p, fixed_field_size=q, target_field_size=target.q, hom=hom,
                              hom_valid=check_hom(hom).valid,
                              embedding=rho.to_dict()['map'])
    for degree in range(1, tower_cap + 1):
        other = GaloisField(p, degree)
        C = coinduce(G, other, name=f"coinduce({other.describe()})")
        found = enumerate_homs(T, C)
        outcomes = []
        for psi in found:
            bottom = psi.maps[0]
            rho_other = RingHom(R, other, {r: bottom(r)[0] for r in R.elements()})
            outcomes.append(_factors(T, rho, rho_other, target, other))
        report.factoring.append({'field_size': other.q, 'homs': len(found), 'factoring': sum(outcomes),
                                 'all_factor': all(outcomes)})
    logger.info(f"Closure map of {T.name} into coinduce(GF({target.q})): factoring {report.all_factor}")
    return report


# ----------------------------------------------------------------- Mackey modules


class MackeyModule:
    """Levelwise abelian groups with restriction, transfer and Weyl action, over a Green functor.

    Values of the operations are given by callables (i, j, c, value) exactly as for
    Tambara functors; act(i, r, m) is the action of green level i on module level i.
    """

    def __init__(self, green: TambaraFunctor, levels: List[Ring], res: Callable, tr: Callable,
                 act: Callable, name: str = 'module'):
        self.green = green
        self.group = green.group
        self.lattice = green.lattice
        self._levels = tuple(levels)
        self._res = res
        self._tr = tr
        self._act = act
        self.name = name
        self.logger = logging.getLogger(__name__)

    @property
    def num_levels(self) -> int:
        return len(self._levels)

    def level(self, i: int) -> Ring:
        return self._levels[i]

    def zero(self, i: int):
        return self._levels[i].zero

    def _res_along(self, i: int, j: int, c: int, y):
        return self._res(i, j, c, y)

    def _tr_along(self, i: int, j: int, c: int, x):
        return self._tr(i, j, c, x)

    def weyl(self, i: int, n: int, x):
        return self._res(i, i, n, x)

    def act(self, i: int, r, m):
        return self._act(i, r, m)

    def stored_keys(self):
        return self.green.stored_keys()

    @classmethod
    def from_green(cls, green: TambaraFunctor) -> 'MackeyModule':
        """A Green functor as a module over itself"""
        return cls(green, green.levels(), green._res_along, green._tr_along,
                   lambda i, r, m: green.level(i).mul(r, m), name=f"{green.name} (self)")

    @classmethod
    def direct_sum(cls, first: 'MackeyModule', second: 'MackeyModule') -> 'MackeyModule':
        if first.green is not second.green:
            raise StructureError("Direct sums need modules over the same Green functor")
        levels = [ProductRing([first.level(i), second.level(i)]) for i in range(first.num_levels)]

        def res(i, j, c, y):
            return (first._res(i, j, c, y[0]), second._res(i, j, c, y[1]))

        def tr(i, j, c, x):
            return (first._tr(i, j, c, x[0]), second._tr(i, j, c, x[1]))

        def act(i, r, m):
            return (first.act(i, r, m[0]), second.act(i, r, m[1]))

        return cls(first.green, levels, res, tr, act, name=f"{first.name} + {second.name}")

    @classmethod
    def zero_restriction(cls, group, field_size: int = 2) -> 'MackeyModule':
        """Over constant F_p: every level is F_p, with res = tr = 0 between distinct levels"""
        green = constant(group, IntegersMod(field_size))
        levels = [IntegersMod(field_size) for _ in range(len(group.subgroup_lattice))]

        def res(i, j, c, y):
            return y if i == j else 0

        def tr(i, j, c, x):
            return x if i == j else 0

        return cls(green, levels, res, tr, lambda i, r, m: (r * m) % field_size, name='zero-restriction')

    def check_axioms(self) -> List[Dict]:
        """Additivity, Frobenius identities with the Green action, and the Mackey formula"""
        violations = []
        G = self.group
        green = self.green
        for i, j, c in self.stored_keys():
            key = f"{self.lattice.name(i)}<{self.lattice.name(j)}@{G.label(c)}"
            Mi, Mj = self.level(i), self.level(j)
            for y in Mj.elements():
                for z in additive_generators(Mj):
                    if self._res(i, j, c, Mj.add(y, z)) != Mi.add(self._res(i, j, c, y), self._res(i, j, c, z)):
                        violations.append({'rule': 'res additive', 'at': key})
                        break
            for x in Mi.elements():
                for z in additive_generators(Mi):
                    if self._tr(i, j, c, Mi.add(x, z)) != Mj.add(self._tr(i, j, c, x), self._tr(i, j, c, z)):
                        violations.append({'rule': 'tr additive', 'at': key})
                        break
            for r in green.level(j).elements():
                for m in Mj.elements():
                    if self._res(i, j, c, self.act(j, r, m)) != self.act(i, green._res_along(i, j, c, r),
                                                                          self._res(i, j, c, m)):
                        violations.append({'rule': 'res multiplicative', 'at': key})
                for x in Mi.elements():
                    if self._tr(i, j, c, self.act(i, green._res_along(i, j, c, r), x)) != \
                            self.act(j, r, self._tr(i, j, c, x)):
                        violations.append({'rule': 'Frobenius tr(res(r) m) = r tr(m)', 'at': key})
            for s in green.level(i).elements():
                for m in Mj.elements():
                    if self._tr(i, j, c, self.act(i, s, self._res(i, j, c, m))) != \
                            self.act(j, green._tr_along(i, j, c, s), m):
                        violations.append({'rule': 'Frobenius tr(s res(m)) = tr(s) m', 'at': key})
        for i, j, c in self.stored_keys():
            f = GMap.orbit_map(G, i, j, c)
            for k in range(self.num_levels):
                for d in self.lattice.orbit_map_types(k, j):
                    h = GMap.orbit_map(G, k, j, d)
                    P, to_first, to_second = pullback(f, h)
                    for x in self.level(i).elements():
                        lhs = restrict_along(self, h, transfer_along(self, f, (x,)))
                        rhs = transfer_along(self, to_second, restrict_along(self, to_first, (x,)))
                        if lhs != rhs:
                            violations.append({'rule': 'Mackey', 'at': f"{self.lattice.name(i)}->{self.lattice.name(j)}<-{self.lattice.name(k)}"})
                            break
        return violations


@dataclass
class ModuleDecompositionReport:
    restrictions_injective: bool
    fixed_point_iso: bool
    decomposes: bool
    details: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.restrictions_injective and self.fixed_point_iso and self.decomposes

    def to_dict(self) -> Dict:
        return {'restrictions_injective': self.restrictions_injective, 'fixed_point_iso': self.fixed_point_iso,
                'decomposes': self.decomposes, 'passed': self.passed, 'details': self.details}


def module_decomposition_check(M: MackeyModule) -> ModuleDecompositionReport:
    """Injective restrictions, M ~ fixed points of M(G/e), and M(G/H) split by the coinduced idempotents"""
    G = M.group
    lattice = M.lattice
    details = []
    injective = True
    iso = True
    for i in range(M.num_levels):
        image = [M._res_along(0, i, 0, y) for y in M.level(i).elements()]
        if len(set(image)) != len(image):
            injective = False
            details.append(f"restriction {lattice.name(i)} -> e is not injective")
        H = lattice.rep(i)
        fixed = {a for a in M.level(0).elements() if all(M.weyl(0, h, a) == a for h in H)}
        if set(image) != fixed or len(set(image)) != len(image):
            iso = False
            details.append(f"level {lattice.name(i)} is not the fixed points of M(G/e)")

    decomposes = False
    search = find_coinduced_splitting(M.green)
    if search.certificate is None:
        details.append('the Green functor has no free orbit of idempotents')
    else:
        green = M.green
        y = {g: search.certificate.idempotents[G.label(g)] for g in G.elements}
        decomposes = True
        for i in range(M.num_levels):
            H = lattice.rep(i)
            lift = {green._res_along(0, i, 0, z): z for z in green.level(i).elements()}
            right_cosets = []
            seen = set()
            for g in G.elements:
                if g not in seen:
                    coset = {G.m(h, g) for h in H}
                    seen |= coset
                    right_cosets.append(coset)
            R0 = green.level(0)
            idems = []
            for coset in right_cosets:
                total = R0.sum(y[g] for g in sorted(coset))
                if total not in lift:
                    decomposes = False
                    details.append(f"idempotent for a coset at {lattice.name(i)} does not lift")
                    break
                idems.append(lift[total])
            else:
                level = M.level(i)
                summands = [{M.act(i, z, m) for m in level.elements()} for z in idems]
                split = {tuple(M.act(i, z, m) for z in idems) for m in level.elements()}
                if len(split) != level.size or len({len(s) for s in summands}) != 1:
                    decomposes = False
                    details.append(f"level {lattice.name(i)} does not split into equal summands")
    return ModuleDecompositionReport(injective, iso, decomposes, details)


# ------------------------------------------------------------------- obstruction


@dataclass
class ObstructionReport:
    applies: bool
    killed: List = field(default_factory=list)
    unit_killed: Optional[object] = None

    @property
    def no_homs(self) -> bool:
        return self.unit_killed is not None

    def to_dict(self) -> Dict:
        return {'applies': self.applies, 'killed': self.killed, 'unit_killed': self.unit_killed,
                'conclusion': 'no maps exist' if self.no_homs else 'inconclusive'}


def res_tr_obstruction(S: TambaraFunctor, T: TambaraFunctor) -> ObstructionReport:
    """Elements u of S(G/e) with res tr u = 0, which every map into T must kill when res tr = |G|
    on T(G/e) and |G| is a unit there; a killed unit rules out every map"""
    top = S.lattice.top
    G = S.group
    R = T.level(0)
    order = R.from_int(G.order)
    applies = any(R.mul(order, b) == R.one for b in R.elements()) and all(
        T._res_along(0, top, 0, T._tr_along(0, top, 0, v)) == R.mul(order, v) for v in R.elements())
    if not applies:
        return ObstructionReport(False)
    S0 = S.level(0)
    killed = [u for u in S0.elements()
              if u != S0.zero and S._res_along(0, top, 0, S._tr_along(0, top, 0, u)) == S0.zero]
    unit = next((u for u in killed if any(S0.mul(u, b) == S0.one for b in S0.elements())), None)
    return ObstructionReport(True, [S0.encode(u) for u in killed], None if unit is None else S0.encode(unit))
