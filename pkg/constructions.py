"""
Concrete Tambara functors: Burnside, fixed-point, constant, coinduced, restricted
and relabeled copies.
"""
import logging
from dataclasses import dataclass
from typing import Dict, Optional

import numpy as np

from errors import StructureError, UnsupportedOperation
from groups import FiniteGroup
from rings import (FunctionRing, GRing, IntegersMod, Ring, RingHom, burnside_norm, burnside_ring,
                   ghost_restrict, ghost_transfer, relabeled, ring_homs)
from tambara_core import TambaraFunctor, TambaraHom, enumerate_homs, equivariant_ring_homs, weyl_gring

logger = logging.getLogger(__name__)


class FixedPointTambara(TambaraFunctor):
    """Levels R^H; res is the action, tr and nm sum and multiply over the cosets in a fiber"""

    def __init__(self, gring: GRing, name: Optional[str] = None):
        super().__init__(gring.group, name=name or f"fixed({gring.base.describe()})")
        self.gring = gring

    def level(self, i: int) -> Ring:
        return self.gring.fixed_subring(self.lattice.rep(i))

    def _res_along(self, i: int, j: int, c: int, y):
        return self.gring.act(c, y)

    def _tr_along(self, i: int, j: int, c: int, x):
        R = self.gring.base
        return R.sum(self.gring.act(g, x) for g, _ in self.lattice.fiber_cosets(i, j, c))

    def _nm_along(self, i: int, j: int, c: int, x):
        R = self.gring.base
        return R.prod(self.gring.act(g, x) for g, _ in self.lattice.fiber_cosets(i, j, c))

    def mrc(self) -> bool:
        return True


class CoinducedTambara(FixedPointTambara):
    """C_e^G R: the fixed-point functor of Fun(G, R) with right translation"""

    def __init__(self, group: FiniteGroup, coefficients: Ring, name: Optional[str] = None):
        super().__init__(fun_g_ring(group, coefficients), name=name or f"coinduce({coefficients.describe()})")
        self.coefficients = coefficients

    def diagonal(self, a):
        return (a,) * self.group.order

    def diagonal_hom(self) -> RingHom:
        """R -> T(G/G), a -> (a, ..., a)"""
        top = self.level(self.lattice.top)
        return RingHom(self.coefficients, top, {a: self.diagonal(a) for a in self.coefficients.elements()})


def fun_g_ring(group: FiniteGroup, base: Ring) -> GRing:
    """Fun(G, R) with (g.phi)(h) = phi(hg)"""
    ring = FunctionRing(base, group.labels)
    action = []
    for g in group.elements:
        moved = [group.m(h, g) for h in group.elements]
        action.append({phi: tuple(phi[k] for k in moved) for phi in ring.elements()})
    return GRing(group, ring, action)


def fixed_point(gring: GRing, name: Optional[str] = None) -> FixedPointTambara:
    return FixedPointTambara(gring, name=name)


def constant(group: FiniteGroup, ring: Ring, name: Optional[str] = None) -> FixedPointTambara:
    """The constant functor: every level is R, tr multiplies by the index, nm raises to it"""
    return FixedPointTambara(GRing.trivial(group, ring), name=name or f"constant({ring.describe()})")


def coinduce(group: FiniteGroup, ring: Ring, name: Optional[str] = None) -> CoinducedTambara:
    return CoinducedTambara(group, ring, name=name)


def zero_functor(group: FiniteGroup) -> FixedPointTambara:
    return constant(group, IntegersMod(1), name='zero')


class BurnsideTambara(TambaraFunctor):
    """Levels A(H); operations act on marks and are solved back through the table of marks"""

    def __init__(self, group: FiniteGroup, name: Optional[str] = None):
        super().__init__(group, name=name or f"burnside({group.name})")

    def level(self, i: int) -> Ring:
        return burnside_ring(self.group, self.lattice.rep(i))

    def _res_along(self, i: int, j: int, c: int, y):
        return ghost_restrict(self.level(j), self.level(i), c, y)

    def _tr_along(self, i: int, j: int, c: int, x):
        return ghost_transfer(self.level(i), self.level(j), c, x)

    def _nm_along(self, i: int, j: int, c: int, x):
        # move x to c^-1 H_i c, then norm along the inclusion into H_j
        G = self.group
        conjugated = burnside_ring(G, G.conjugate(self.lattice.rep(i), c))
        moved = ghost_restrict(self.level(i), conjugated, G.inv[c], x)
        return burnside_norm(conjugated, self.level(j), moved)

    def _sample_nonenumerable(self, rng: np.random.Generator, i: int):
        return tuple(int(v) for v in rng.integers(0, 3, size=self.level(i).rank))

    def mrc(self) -> bool:
        return self.group.order == 1

    def to_dict(self):
        return {
            'kind': 'burnside',
            'name': self.name,
            'group': self.group.to_dict(),
            'levels': {self.lattice.name(i): self.level(i).to_dict() for i in range(self.num_levels)},
            'flags': {'enumerable': False, 'mrc': self.mrc()},
        }


def burnside_tambara(group: FiniteGroup) -> BurnsideTambara:
    return BurnsideTambara(group)


class RestrictedTambara(TambaraFunctor):
    """An H-Tambara functor read off a G-Tambara functor at the orbits G/K for K <= H.

    Child level k (subgroup K_k of H) is stored in the coordinates of the G-class
    representative H_j with d^-1 H_j d = K_k; an orbit map psi_c of H-sets becomes
    psi_{d_k c d_l^-1} between representatives.
    """

    def __init__(self, parent: TambaraFunctor, subgroup):
        G = parent.group
        child, embed = G.subgroup_group(subgroup)
        super().__init__(child, name=f"{parent.name}|{child.name}")
        self.parent = parent
        self.embed = embed
        classes, conjugators = [], []
        for k in range(len(child.subgroup_lattice)):
            image = frozenset(embed[x] for x in child.subgroup_lattice.rep(k))
            j = parent.lattice.class_of(image)
            classes.append(j)
            conjugators.append(parent.lattice.conjugator(j, image))
        self.parent_class = tuple(classes)
        self.conjugators = tuple(conjugators)

    def _lift(self, k: int, l: int, c: int) -> int:
        G = self.parent.group
        return G.m(G.m(self.conjugators[k], self.embed[c]), G.inv[self.conjugators[l]])

    def level(self, i: int) -> Ring:
        return self.parent.level(self.parent_class[i])

    def _res_along(self, i: int, j: int, c: int, y):
        return self.parent._res_along(self.parent_class[i], self.parent_class[j], self._lift(i, j, c), y)

    def _tr_along(self, i: int, j: int, c: int, x):
        return self.parent._tr_along(self.parent_class[i], self.parent_class[j], self._lift(i, j, c), x)

    def _nm_along(self, i: int, j: int, c: int, x):
        return self.parent._nm_along(self.parent_class[i], self.parent_class[j], self._lift(i, j, c), x)

    def _sample_nonenumerable(self, rng: np.random.Generator, i: int):
        return self.parent._sample_nonenumerable(rng, self.parent_class[i])

    def mrc(self) -> bool:
        if isinstance(self.parent, BurnsideTambara):
            return self.group.order == 1
        return super().mrc()


def restrict(T: TambaraFunctor, subgroup) -> RestrictedTambara:
    """The underlying H-Tambara functor of T for a subgroup H (given as element indices)"""
    subgroup = T.group.check_subgroup(subgroup)
    return RestrictedTambara(T, subgroup)


class RelabeledTambara(TambaraFunctor):
    """An isomorphic copy of T whose level elements are permuted integer codes"""

    def __init__(self, parent: TambaraFunctor, seed: int):
        super().__init__(parent.group, name=f"{parent.name}~{seed}")
        if not parent.enumerable:
            raise UnsupportedOperation(f"Cannot relabel non-enumerable levels of {parent.name}")
        rng = np.random.default_rng(seed)
        self.parent = parent
        self.seed = seed
        self._levels = tuple(relabeled(parent.level(i), rng) for i in range(parent.num_levels))

    def level(self, i: int) -> Ring:
        return self._levels[i]

    def _res_along(self, i: int, j: int, c: int, y):
        return self._levels[i].code(self.parent._res_along(i, j, c, self._levels[j].original(y)))

    def _tr_along(self, i: int, j: int, c: int, x):
        return self._levels[j].code(self.parent._tr_along(i, j, c, self._levels[i].original(x)))

    def _nm_along(self, i: int, j: int, c: int, x):
        return self._levels[j].code(self.parent._nm_along(i, j, c, self._levels[i].original(x)))

    def to_parent(self) -> TambaraHom:
        """The relabeling isomorphism back onto the original functor"""
        return TambaraHom.from_functions(self, self.parent, [R.original for R in self._levels])


def relabel(T: TambaraFunctor, seed: int) -> RelabeledTambara:
    return RelabeledTambara(T, seed)


def unit_map(T: TambaraFunctor) -> TambaraHom:
    """T -> fixed point functor of T(G/e), given levelwise by restriction to the bottom"""
    target = fixed_point(weyl_gring(T), name=f"fixed({T.name}(G/e))")
    fns = [(lambda x, i=i: T._res_along(0, i, 0, x)) for i in range(T.num_levels)]
    return TambaraHom.from_functions(T, target, fns)


def functor_from_recipe(group: FiniteGroup, kind: str, ring: Optional[Ring] = None,
                        gring: Optional[GRing] = None) -> TambaraFunctor:
    """Build one of the named constructions"""
    if kind == 'burnside':
        return burnside_tambara(group)
    if ring is None and gring is None:
        raise StructureError(f"Construction {kind!r} needs a ring")
    if kind == 'constant':
        return constant(group, ring)
    if kind == 'coinduce':
        return coinduce(group, ring)
    if kind == 'fixed':
        return fixed_point(gring if gring is not None else GRing.trivial(group, ring))
    raise StructureError(f"Unknown construction {kind!r}")


@dataclass
class AdjunctionCounts:
    """Both sides of Hom(T, coinduce(S)) = Hom(T(G/e), S) and Hom(T, fixed(S)) = Hom_G(T(G/e), S)"""
    coinduced_homs: int
    ring_homs: int
    fixed_point_homs: int
    equivariant_ring_homs: int

    @property
    def agree(self) -> bool:
        return self.coinduced_homs == self.ring_homs and self.fixed_point_homs == self.equivariant_ring_homs

    def to_dict(self) -> Dict:
        return {'coinduced_homs': self.coinduced_homs, 'ring_homs': self.ring_homs,
                'fixed_point_homs': self.fixed_point_homs, 'equivariant_ring_homs': self.equivariant_ring_homs,
                'agree': self.agree}


def adjunction_counts(T: TambaraFunctor, gring: GRing) -> AdjunctionCounts:
    """Count maps on both sides of the coinduction and fixed-point adjunctions"""
    if gring.group is not T.group:
        raise StructureError("Adjunction counts need a G-ring over the functor's group")
    S = gring.base
    counts = AdjunctionCounts(
        coinduced_homs=len(enumerate_homs(T, coinduce(T.group, S))),
        ring_homs=len(ring_homs(T.level(0), S)),
        fixed_point_homs=len(enumerate_homs(T, fixed_point(gring))),
        equivariant_ring_homs=len(equivariant_ring_homs(T, gring)),
    )
    if not counts.agree:
        logger.error(f"Adjunction counts disagree for {T.name} and {S.describe()}: {counts.to_dict()}")
    return counts
