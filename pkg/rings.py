"""
Exact coefficient rings.

Enumerable finite commutative rings (Z/n, Galois fields, products, function rings,
table rings, quotients, subrings), rings with a group action, ring homomorphisms,
and Burnside rings computed through their table of marks.
"""
import logging
import weakref
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from itertools import product
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from config import SearchConfig, WorkbenchConfig
from errors import InconsistencyError, SearchCapExceeded, StructureError, UnsupportedOperation
from groups import FiniteGroup, Subgroup

logger = logging.getLogger(__name__)

# Conway polynomials, constant term first, monic
CONWAY_POLYNOMIALS: Dict[Tuple[int, int], Tuple[int, ...]] = {
    (2, 1): (1, 1),
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (2, 5): (1, 0, 1, 0, 0, 1),
    (2, 6): (1, 1, 0, 1, 1, 0, 1),
    (2, 7): (1, 1, 0, 0, 0, 0, 0, 1),
    (2, 8): (1, 0, 1, 1, 1, 0, 0, 0, 1),
    (3, 1): (1, 1),
    (3, 2): (2, 2, 1),
    (3, 3): (1, 2, 0, 1),
    (3, 4): (2, 0, 0, 2, 1),
    (5, 1): (3, 1),
    (5, 2): (2, 4, 1),
    (5, 3): (3, 3, 0, 1),
    (7, 1): (4, 1),
    (7, 2): (3, 6, 1),
    (11, 1): (9, 1),
    (13, 1): (11, 1),
}


class Ring(ABC):
    """A commutative ring with hashable elements"""

    kind = 'ring'
    enumerable = True

    @property
    @abstractmethod
    def zero(self):
        """Additive identity"""

    @property
    @abstractmethod
    def one(self):
        """Multiplicative identity"""

    @property
    @abstractmethod
    def size(self) -> int:
        """Number of elements, computed without enumerating"""

    @abstractmethod
    def add(self, a, b):
        pass

    @abstractmethod
    def neg(self, a):
        pass

    @abstractmethod
    def mul(self, a, b):
        pass

    @abstractmethod
    def _enumerate(self) -> Iterable:
        pass

    @abstractmethod
    def encode(self, a) -> Any:
        """JSON-ready form of an element"""

    @abstractmethod
    def decode(self, obj) -> Any:
        pass

    @abstractmethod
    def to_dict(self) -> Dict:
        pass

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.describe()})"

    def describe(self) -> str:
        return self.kind

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def power(self, a, k: int):
        result, base = self.one, a
        while k > 0:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def from_int(self, n: int):
        result, base = self.zero, self.one
        if n < 0:
            n, base = -n, self.neg(base)
        while n > 0:
            if n & 1:
                result = self.add(result, base)
            base = self.add(base, base)
            n >>= 1
        return result

    def sum(self, items: Iterable):
        total = self.zero
        for item in items:
            total = self.add(total, item)
        return total

    def prod(self, items: Iterable):
        total = self.one
        for item in items:
            total = self.mul(total, item)
        return total

    def elements(self) -> Tuple:
        """All elements in a fixed order; refuses rings above the enumeration cap"""
        if not self.enumerable:
            raise UnsupportedOperation(f"{self.describe()} is not enumerable")
        cached = self.__dict__.get('_elements_cache')
        if cached is None:
            if self.size > WorkbenchConfig.ENUMERATION_CAP:
                raise SearchCapExceeded(
                    f"{self.describe()} has {self.size} elements, above the cap {WorkbenchConfig.ENUMERATION_CAP}")
            cached = tuple(self._enumerate())
            self.__dict__['_elements_cache'] = cached
        return cached

    def contains(self, a) -> bool:
        members = self.__dict__.get('_member_cache')
        if members is None:
            members = frozenset(self.elements())
            self.__dict__['_member_cache'] = members
        return a in members

    def position(self, a) -> int:
        positions = self.__dict__.get('_position_cache')
        if positions is None:
            positions = {x: k for k, x in enumerate(self.elements())}
            self.__dict__['_position_cache'] = positions
        return positions[a]

    def is_zero_ring(self) -> bool:
        return self.zero == self.one


class IntegersMod(Ring):
    """Z/n"""

    kind = 'zmod'

    def __init__(self, n: int):
        if n < 1:
            raise StructureError("Modulus must be positive")
        self.n = n

    def describe(self) -> str:
        return f"Z/{self.n}"

    @property
    def zero(self):
        return 0

    @property
    def one(self):
        return 1 % self.n

    @property
    def size(self) -> int:
        return self.n

    def add(self, a, b):
        return (a + b) % self.n

    def neg(self, a):
        return (-a) % self.n

    def mul(self, a, b):
        return (a * b) % self.n

    def _enumerate(self):
        return range(self.n)

    def encode(self, a):
        return int(a)

    def decode(self, obj):
        if not isinstance(obj, int) or isinstance(obj, bool):
            raise StructureError(f"Expected an integer for Z/{self.n}, got {obj!r}")
        return obj % self.n

    def to_dict(self) -> Dict:
        return {'kind': self.kind, 'n': self.n}


class GaloisField(Ring):
    """GF(p^k); elements are integer codes whose base-p digits are polynomial coefficients"""

    kind = 'gf'

    def __init__(self, p: int, k: int = 1):
        if p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
            raise StructureError(f"{p} is not prime")
        if k < 1:
            raise StructureError("Extension degree must be positive")
        self.p, self.k = p, k
        self.q = p ** k
        if self.q > WorkbenchConfig.ENUMERATION_CAP:
            raise SearchCapExceeded(f"GF({p}^{k}) exceeds the enumeration cap")
        self.logger = logging.getLogger(__name__)
        self._digits = [self._to_digits(a) for a in range(self.q)]
        poly = CONWAY_POLYNOMIALS.get((p, k))
        if poly is None:
            poly = self._search_primitive()
            self.logger.warning(f"No tabulated polynomial for GF({p}^{k}); using {poly}")
        self.modulus = tuple(poly)
        self._exp, self._log = self._build_tables(self.modulus)
        if self._exp is None:
            raise InconsistencyError(f"Polynomial {self.modulus} is not primitive over GF({p})")

    def describe(self) -> str:
        return f"GF({self.q})"

    def _to_digits(self, a: int) -> Tuple[int, ...]:
        digits = []
        for _ in range(self.k):
            digits.append(a % self.p)
            a //= self.p
        return tuple(digits)

    def _from_digits(self, digits: Sequence[int]) -> int:
        code = 0
        for d in reversed(digits):
            code = code * self.p + d
        return code

    def _times_x(self, a: int, modulus: Sequence[int]) -> int:
        digits = [0] + list(self._digits[a])
        top = digits.pop()
        return self._from_digits([(d - top * c) % self.p for d, c in zip(digits, modulus)])

    def _build_tables(self, modulus: Sequence[int]):
        exp = [1]
        for _ in range(self.q - 2):
            nxt = self._times_x(exp[-1], modulus)
            if nxt == 1:
                return None, None
            exp.append(nxt)
        if self.q > 2 and self._times_x(exp[-1], modulus) != 1:
            return None, None
        if len(set(exp)) != self.q - 1:
            return None, None
        return exp, {a: i for i, a in enumerate(exp)}

    def _search_primitive(self) -> Tuple[int, ...]:
        for code in range(self.q):
            candidate = tuple(self._digits[code]) + (1,)
            if candidate[0] == 0:
                continue
            exp, _ = self._build_tables(candidate)
            if exp is not None:
                return candidate
        raise InconsistencyError(f"No primitive polynomial found for GF({self.p}^{self.k})")

    @property
    def zero(self):
        return 0

    @property
    def one(self):
        return 1

    @property
    def size(self) -> int:
        return self.q

    @property
    def characteristic(self) -> int:
        return self.p

    def add(self, a, b):
        da, db = self._digits[a], self._digits[b]
        return self._from_digits([(x + y) % self.p for x, y in zip(da, db)])

    def neg(self, a):
        return self._from_digits([(-x) % self.p for x in self._digits[a]])

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]

    def inverse(self, a):
        if a == 0:
            raise StructureError("Zero has no inverse")
        return self._exp[(-self._log[a]) % (self.q - 1)]

    def primitive_power(self, i: int) -> int:
        return self._exp[i % (self.q - 1)]

    def frobenius(self, a, times: int = 1):
        return self.power(a, self.p ** (times % self.k))

    def _enumerate(self):
        return range(self.q)

    def encode(self, a):
        return int(a)

    def decode(self, obj):
        if not isinstance(obj, int) or isinstance(obj, bool) or not 0 <= obj < self.q:
            raise StructureError(f"Expected an element code 0..{self.q - 1} of GF({self.q}), got {obj!r}")
        return obj

    def to_dict(self) -> Dict:
        return {'kind': self.kind, 'p': self.p, 'k': self.k}

    def polynomial_str(self, a) -> str:
        """The element as a polynomial in the generator x, highest degree first"""
        terms = []
        for i, d in enumerate(self._digits[a]):
            if not d:
                continue
            if i == 0:
                terms.append(str(d))
            else:
                mono = 'x' if i == 1 else f'x^{i}'
                terms.append(mono if d == 1 else f'{d}{mono}')
        return ' + '.join(reversed(terms)) or '0'

    def embedding_into(self, other: 'GaloisField') -> 'RingHom':
        """The embedding GF(p^d) -> GF(p^k) sending x to a root of this field's modulus.

        The root x^((q_k - 1)/(q_d - 1)) is preferred, which is the Conway-compatible choice.
        """
        if other.p != self.p or other.k % self.k:
            raise StructureError(f"GF({self.q}) does not embed in GF({other.q})")
        if self.k == 1:
            return RingHom(self, other, {a: other.from_int(a) for a in range(self.q)})
        preferred = other.primitive_power((other.q - 1) // (self.q - 1))
        candidates = [preferred] + [b for b in other.elements() if b != preferred]
        for beta in candidates:
            value = other.zero
            for c in reversed(self.modulus):
                value = other.add(other.mul(value, beta), other.from_int(c))
            if value == other.zero:
                table = {}
                for a in range(self.q):
                    image = other.zero
                    for d in reversed(self._digits[a]):
                        image = other.add(other.mul(image, beta), other.from_int(d))
                    table[a] = image
                return RingHom(self, other, table)
        raise InconsistencyError(f"No root of the modulus of GF({self.q}) in GF({other.q})")


class ProductRing(Ring):
    """Finite product of rings; elements are tuples"""

    kind = 'product'

    def __init__(self, factors: Sequence[Ring]):
        self.factors = tuple(factors)

    def describe(self) -> str:
        return ' x '.join(f.describe() for f in self.factors) or '0'

    @property
    def zero(self):
        return tuple(f.zero for f in self.factors)

    @property
    def one(self):
        return tuple(f.one for f in self.factors)

    @property
    def size(self) -> int:
        total = 1
        for f in self.factors:
            total *= f.size
        return total

    @property
    def enumerable(self) -> bool:
        return all(f.enumerable for f in self.factors)

    def add(self, a, b):
        return tuple(f.add(x, y) for f, x, y in zip(self.factors, a, b))

    def neg(self, a):
        return tuple(f.neg(x) for f, x in zip(self.factors, a))

    def mul(self, a, b):
        return tuple(f.mul(x, y) for f, x, y in zip(self.factors, a, b))

    def _enumerate(self):
        return product(*(f.elements() for f in self.factors))

    def encode(self, a):
        return [f.encode(x) for f, x in zip(self.factors, a)]

    def decode(self, obj):
        if not isinstance(obj, (list, tuple)) or len(obj) != len(self.factors):
            raise StructureError(f"Expected a list of {len(self.factors)} components, got {obj!r}")
        return tuple(f.decode(x) for f, x in zip(self.factors, obj))

    def to_dict(self) -> Dict:
        return {'kind': self.kind, 'factors': [f.to_dict() for f in self.factors]}


class FunctionRing(ProductRing):
    """Fun(P, R) for a finite point set P, pointwise operations"""

    kind = 'fun'

    def __init__(self, base: Ring, points: Sequence):
        self.base = base
        self.points = tuple(str(p) for p in points)
        super().__init__([base] * len(self.points))

    def describe(self) -> str:
        return f"Fun({len(self.points)}, {self.base.describe()})"

    def to_dict(self) -> Dict:
        return {'kind': self.kind, 'base': self.base.to_dict(), 'points': list(self.points)}


class TableRing(Ring):
    """A ring on 0..n-1 given by addition and multiplication tables"""

    kind = 'table'

    def __init__(self, add_table: Sequence[Sequence[int]], mul_table: Sequence[Sequence[int]],
                 zero: int = 0, one: int = 1, validate: bool = True):
        self.add_table = tuple(tuple(row) for row in add_table)
        self.mul_table = tuple(tuple(row) for row in mul_table)
        self._zero, self._one = zero, one
        n = len(self.add_table)
        self._neg = None
        if any(len(r) != n for r in self.add_table) or len(self.mul_table) != n \
                or any(len(r) != n for r in self.mul_table):
            raise StructureError("Ring tables must be square and of equal size")
        try:
            self._neg = tuple(self.add_table[a].index(zero) for a in range(n))
        except ValueError:
            raise StructureError("Addition table has an element without a negative")
        if validate:
            violations = check_ring_axioms(self)
            if violations:
                raise StructureError(f"Table ring violates {violations[0]}")

    @property
    def zero(self):
        return self._zero

    @property
    def one(self):
        return self._one

    @property
    def size(self) -> int:
        return len(self.add_table)

    def add(self, a, b):
        return self.add_table[a][b]

    def neg(self, a):
        return self._neg[a]

    def mul(self, a, b):
        return self.mul_table[a][b]

    def _enumerate(self):
        return range(self.size)

    def encode(self, a):
        return int(a)

    def decode(self, obj):
        if not isinstance(obj, int) or not 0 <= obj < self.size:
            raise StructureError(f"Expected an element 0..{self.size - 1}, got {obj!r}")
        return obj

    def to_dict(self) -> Dict:
        return {'kind': self.kind, 'add': [list(r) for r in self.add_table],
                'mul': [list(r) for r in self.mul_table], 'zero': self._zero, 'one': self._one}


class Subring(Ring):
    """A subring given by its element set"""

    kind = 'subring'

    def __init__(self, base: Ring, members: Iterable, validate: bool = True):
        self.base = base
        member_set = set(members)
        self._members = tuple(x for x in base.elements() if x in member_set)
        if validate:
            self._check_closed(member_set)

    def _check_closed(self, member_set):
        b = self.base
        if b.zero not in member_set or b.one not in member_set:
            raise StructureError("Subring must contain 0 and 1")
        gens = additive_generators(self.base, self._members)
        for x in self._members:
            if b.neg(x) not in member_set:
                raise StructureError("Subring is not closed under negation")
            for y in gens:
                if b.add(x, y) not in member_set or b.mul(x, y) not in member_set:
                    raise StructureError("Subring is not closed under the ring operations")

    def describe(self) -> str:
        return f"{self.base.describe()}[{len(self._members)}]"

    @property
    def zero(self):
        return self.base.zero

    @property
    def one(self):
        return self.base.one

    @property
    def size(self) -> int:
        return len(self._members)

    def add(self, a, b):
        return self.base.add(a, b)

    def neg(self, a):
        return self.base.neg(a)

    def mul(self, a, b):
        return self.base.mul(a, b)

    def _enumerate(self):
        return self._members

    def encode(self, a):
        return self.base.encode(a)

    def decode(self, obj):
        a = self.base.decode(obj)
        if not self.contains(a):
            raise StructureError(f"{obj!r} is not in the subring")
        return a

    def to_dict(self) -> Dict:
        return {'kind': self.kind, 'base': self.base.to_dict(),
                'elements': [self.base.encode(x) for x in self._members]}


class QuotientRing(Ring):
    """R/I with cosets represented by their first member in R's enumeration order"""

    kind = 'quotient'

    def __init__(self, base: Ring, ideal: Iterable):
        self.base = base
        self.ideal = frozenset(ideal)
        if base.zero not in self.ideal:
            raise StructureError("An ideal must contain zero")
        for a in self.ideal:
            if base.neg(a) not in self.ideal:
                raise StructureError("Ideal is not closed under negation")
        gens = additive_generators(base, self.ideal)
        for a in self.ideal:
            for g in gens:
                if base.add(a, g) not in self.ideal:
                    raise StructureError("Ideal is not closed under addition")
        for r in additive_generators(base):
            for g in gens:
                if base.mul(r, g) not in self.ideal:
                    raise StructureError("Ideal is not closed under multiplication by the ring")
        self._rep = {}
        reps = []
        for x in base.elements():
            if x in self._rep:
                continue
            reps.append(x)
            for a in self.ideal:
                self._rep[base.add(x, a)] = x
        self._reps = tuple(reps)

    def describe(self) -> str:
        return f"{self.base.describe()}/({len(self.ideal)})"

    def reduce(self, a):
        return self._rep[a]

    @property
    def zero(self):
        return self._rep[self.base.zero]

    @property
    def one(self):
        return self._rep[self.base.one]

    @property
    def size(self) -> int:
        return len(self._reps)

    def add(self, a, b):
        return self._rep[self.base.add(a, b)]

    def neg(self, a):
        return self._rep[self.base.neg(a)]

    def mul(self, a, b):
        return self._rep[self.base.mul(a, b)]

    def _enumerate(self):
        return self._reps

    def encode(self, a):
        return self.base.encode(a)

    def decode(self, obj):
        return self._rep[self.base.decode(obj)]

    def to_dict(self) -> Dict:
        return {'kind': self.kind, 'base': self.base.to_dict(),
                'ideal': [self.base.encode(a) for a in self.base.elements() if a in self.ideal]}


class CornerRing(Ring):
    """e R for an idempotent e, with unit e"""

    kind = 'corner'

    def __init__(self, base: Ring, idempotent):
        if base.mul(idempotent, idempotent) != idempotent:
            raise StructureError("Corner rings need an idempotent")
        self.base = base
        self.idempotent = idempotent
        self._members = tuple(dict.fromkeys(base.mul(idempotent, r) for r in base.elements()))

    def describe(self) -> str:
        return f"e*{self.base.describe()}[{len(self._members)}]"

    @property
    def zero(self):
        return self.base.zero

    @property
    def one(self):
        return self.idempotent

    @property
    def size(self) -> int:
        return len(self._members)

    def add(self, a, b):
        return self.base.add(a, b)

    def neg(self, a):
        return self.base.neg(a)

    def mul(self, a, b):
        return self.base.mul(a, b)

    def _enumerate(self):
        return self._members

    def encode(self, a):
        return self.base.encode(a)

    def decode(self, obj):
        a = self.base.decode(obj)
        if self.base.mul(self.idempotent, a) != a:
            raise StructureError(f"{obj!r} is not in the corner ring")
        return a

    def to_dict(self) -> Dict:
        return {'kind': self.kind, 'base': self.base.to_dict(), 'idempotent': self.base.encode(self.idempotent)}


class RelabeledRing(Ring):
    """A copy of a ring whose elements are the codes 0..n-1 in a given order"""

    kind = 'relabeled'

    def __init__(self, base: Ring, order: Sequence):
        self.base = base
        self.order = tuple(order)
        self._code = {x: k for k, x in enumerate(self.order)}
        if len(self._code) != base.size:
            raise StructureError("Relabeling must list every element exactly once")

    def describe(self) -> str:
        return f"relabeled {self.base.describe()}"

    def code(self, x) -> int:
        return self._code[x]

    def original(self, a: int):
        return self.order[a]

    @property
    def zero(self):
        return self._code[self.base.zero]

    @property
    def one(self):
        return self._code[self.base.one]

    @property
    def size(self) -> int:
        return len(self.order)

    def add(self, a, b):
        return self._code[self.base.add(self.order[a], self.order[b])]

    def neg(self, a):
        return self._code[self.base.neg(self.order[a])]

    def mul(self, a, b):
        return self._code[self.base.mul(self.order[a], self.order[b])]

    def _enumerate(self):
        return range(len(self.order))

    def encode(self, a):
        return int(a)

    def decode(self, obj):
        if not isinstance(obj, int) or not 0 <= obj < len(self.order):
            raise StructureError(f"Expected a code 0..{len(self.order) - 1}, got {obj!r}")
        return obj

    def to_dict(self) -> Dict:
        return {'kind': self.kind, 'base': self.base.to_dict(),
                'order': [self.base.encode(x) for x in self.order]}


def relabeled(ring: Ring, rng: np.random.Generator) -> RelabeledRing:
    """A randomly relabeled copy of an enumerable ring"""
    elements = list(ring.elements())
    perm = rng.permutation(len(elements))
    return RelabeledRing(ring, [elements[int(k)] for k in perm])


# ---------------------------------------------------------- homomorphisms


class RingHom:
    """A map between enumerable rings given by its table"""

    def __init__(self, src: Ring, dst: Ring, table: Dict):
        self.src = src
        self.dst = dst
        self.table = dict(table)

    def __call__(self, a):
        return self.table[a]

    def __eq__(self, other) -> bool:
        return isinstance(other, RingHom) and self.src is other.src and self.dst is other.dst \
            and self.table == other.table

    def __hash__(self) -> int:
        return hash((id(self.src), id(self.dst), tuple(sorted(self.table.items(), key=repr))))

    def compose(self, other: 'RingHom') -> 'RingHom':
        """self after other"""
        return RingHom(other.src, self.dst, {a: self.table[b] for a, b in other.table.items()})

    def kernel(self) -> frozenset:
        return frozenset(a for a, b in self.table.items() if b == self.dst.zero)

    def is_injective(self) -> bool:
        return len(set(self.table.values())) == len(self.table)

    def to_dict(self) -> Dict:
        return {'map': [[self.src.encode(a), self.dst.encode(b)] for a, b in self.table.items()]}


def is_ring_hom(hom: RingHom) -> bool:
    R, S = hom.src, hom.dst
    if set(hom.table) != set(R.elements()):
        return False
    if hom(R.one) != S.one:
        return False
    gens = additive_generators(R)
    for a in R.elements():
        fa = hom(a)
        for g in gens:
            if hom(R.add(a, g)) != S.add(fa, hom(g)) or hom(R.mul(a, g)) != S.mul(fa, hom(g)):
                return False
    return True


def additive_span(ring: Ring, generators: Iterable, start: Iterable = None) -> set:
    """The additive subgroup generated by the given elements"""
    span = set(start) if start is not None else {ring.zero}
    span.add(ring.zero)
    for g in generators:
        if g in span:
            continue
        grown = set()
        for s in span:
            x = s
            while x not in grown:
                grown.add(x)
                x = ring.add(x, g)
        span = grown
    return span


def additive_generators(ring: Ring, members: Optional[Iterable] = None) -> List:
    """A small set whose additive span is the given subgroup (or the whole ring)"""
    members = ring.elements() if members is None else members
    gens = []
    span = {ring.zero}
    for x in members:
        if x not in span:
            gens.append(x)
            span = additive_span(ring, [x], span)
    return gens


def ring_generators(ring: Ring) -> List:
    """A small set generating the ring under +, * and 1"""
    gens = []
    span = subring_closure(ring, [])
    for x in ring.elements():
        if x not in span:
            gens.append(x)
            span = subring_closure(ring, gens)
    return gens


def subring_closure(ring: Ring, generators: Iterable) -> set:
    span = {ring.zero, ring.one} | set(generators)
    frontier = list(span)
    while frontier:
        new = []
        known = list(span)
        for a in frontier:
            for b in known:
                for c in (ring.add(a, b), ring.mul(a, b)):
                    if c not in span:
                        span.add(c)
                        new.append(c)
                        known.append(c)
        frontier = new
    return span


def ideal_generated(ring: Ring, generators: Iterable) -> frozenset:
    """The ring ideal generated by a set"""
    generators = list(generators)
    products = {ring.mul(r, s) for s in generators for r in ring.elements()}
    return frozenset(additive_span(ring, sorted(products, key=ring.position)))


def _extend_hom(R: Ring, S: Ring, gens: Sequence, images: Sequence) -> Optional[Dict]:
    if R.is_zero_ring() and not S.is_zero_ring():
        return None
    table = {R.zero: S.zero, R.one: S.one}
    for g, s in zip(gens, images):
        if g in table and table[g] != s:
            return None
        table[g] = s
    known = list(table.items())
    frontier = list(known)
    while frontier:
        new = []
        for a, fa in frontier:
            for b, fb in list(known):
                for c, fc in ((R.add(a, b), S.add(fa, fb)), (R.mul(a, b), S.mul(fa, fb))):
                    seen = table.get(c)
                    if seen is None and c not in table:
                        table[c] = fc
                        new.append((c, fc))
                        known.append((c, fc))
                    elif seen != fc:
                        return None
        frontier = new
    return table if len(table) == R.size else None


def ring_homs(R: Ring, S: Ring, cap: Optional[int] = None) -> List[RingHom]:
    """All unital ring homomorphisms R -> S"""
    cap = cap or SearchConfig.HOM_SEARCH_CAP
    gens = ring_generators(R)
    targets = S.elements()
    total = len(targets) ** len(gens)
    if total > cap:
        raise SearchCapExceeded(f"{total} candidate ring maps exceed the cap {cap}")
    homs = []
    for images in product(targets, repeat=len(gens)):
        table = _extend_hom(R, S, gens, images)
        if table is not None:
            homs.append(RingHom(R, S, table))
    logger.debug(f"Found {len(homs)} ring maps {R.describe()} -> {S.describe()} from {total} candidates")
    return homs


# ----------------------------------------------------------- idempotents


def idempotents(ring: Ring) -> List:
    """All e with e^2 = e"""
    if not ring.enumerable:
        raise UnsupportedOperation(f"Idempotents of {ring.describe()} need an enumerable ring")
    found = [a for a in ring.elements() if ring.mul(a, a) == a]
    if len(found) > SearchConfig.IDEMPOTENT_CAP:
        raise SearchCapExceeded(f"{len(found)} idempotents exceed the cap {SearchConfig.IDEMPOTENT_CAP}")
    return found


def primitive_idempotents(ring: Ring) -> List:
    """Nonzero idempotents with no smaller nonzero idempotent below them"""
    nonzero = [e for e in idempotents(ring) if e != ring.zero]
    return [e for e in nonzero
            if not any(f != e and ring.mul(e, f) == f for f in nonzero)]


def is_nilpotent(ring: Ring, a) -> bool:
    steps = max(1, (ring.size - 1).bit_length())
    x = a
    for _ in range(steps):
        x = ring.mul(x, x)
    return x == ring.zero


def is_field(ring: Ring) -> bool:
    if isinstance(ring, GaloisField):
        return True
    if isinstance(ring, IntegersMod):
        n = ring.n
        return n > 1 and all(n % d for d in range(2, int(n ** 0.5) + 1))
    if ring.is_zero_ring():
        return False
    if len(idempotents(ring)) != 2:
        return False
    return not any(is_nilpotent(ring, a) for a in ring.elements() if a != ring.zero)


def characteristic(ring: Ring) -> int:
    n, x = 1, ring.one
    while x != ring.zero:
        x = ring.add(x, ring.one)
        n += 1
    return n


def check_ring_axioms(ring: Ring) -> List[str]:
    """Exhaustive check of the commutative ring axioms; returns violated clauses"""
    els = ring.elements()
    problems = []
    for a in els:
        if ring.add(a, ring.zero) != a:
            problems.append(f"additive identity at {a!r}")
        if ring.mul(a, ring.one) != a:
            problems.append(f"multiplicative identity at {a!r}")
        if ring.add(a, ring.neg(a)) != ring.zero:
            problems.append(f"negation at {a!r}")
        for b in els:
            if ring.add(a, b) != ring.add(b, a):
                problems.append(f"commutativity of + at ({a!r}, {b!r})")
            if ring.mul(a, b) != ring.mul(b, a):
                problems.append(f"commutativity of * at ({a!r}, {b!r})")
            for c in els:
                if ring.add(ring.add(a, b), c) != ring.add(a, ring.add(b, c)):
                    problems.append(f"associativity of + at ({a!r}, {b!r}, {c!r})")
                if ring.mul(ring.mul(a, b), c) != ring.mul(a, ring.mul(b, c)):
                    problems.append(f"associativity of * at ({a!r}, {b!r}, {c!r})")
                if ring.mul(a, ring.add(b, c)) != ring.add(ring.mul(a, b), ring.mul(a, c)):
                    problems.append(f"distributivity at ({a!r}, {b!r}, {c!r})")
            if len(problems) > 10:
                return problems
    return problems


# --------------------------------------------------------- rings with action


class GRing:
    """A finite commutative ring with a group acting by ring automorphisms"""

    def __init__(self, group: FiniteGroup, base: Ring, action: Optional[Sequence[Dict]] = None,
                 validate: bool = True):
        self.group = group
        self.base = base
        self.trivial_action = action is None
        self.action = None if action is None else tuple(dict(a) for a in action)
        self.logger = logging.getLogger(__name__)
        self._fixed: Dict[Subgroup, Ring] = {}
        if validate and not self.trivial_action:
            self._validate()

    def _validate(self):
        G, R = self.group, self.base
        if len(self.action) != G.order:
            raise StructureError("Need one automorphism per group element")
        elements = R.elements()
        gens = additive_generators(R)
        for g in G.elements:
            phi = self.action[g]
            if len(phi) != len(elements) or set(phi.values()) != set(elements):
                raise StructureError(f"{G.label(g)} does not act by a bijection")
            if phi[R.one] != R.one:
                raise StructureError(f"{G.label(g)} does not fix 1")
            for a in elements:
                for b in gens:
                    if phi[R.add(a, b)] != R.add(phi[a], phi[b]) or phi[R.mul(a, b)] != R.mul(phi[a], phi[b]):
                        raise StructureError(f"{G.label(g)} does not act by ring automorphisms")
        if any(self.action[0][a] != a for a in elements):
            raise StructureError("The identity must act trivially")
        for g in G.elements:
            for h in G.elements:
                gh = self.action[G.m(g, h)]
                pg, ph = self.action[g], self.action[h]
                if any(gh[a] != pg[ph[a]] for a in elements):
                    raise StructureError(f"Action law fails at ({G.label(g)}, {G.label(h)})")

    def act(self, g: int, a):
        if self.trivial_action:
            return a
        return self.action[g][a]

    def fixed_subring(self, subgroup: Iterable[int]) -> Ring:
        """R^H (the base ring itself when H acts trivially)"""
        subgroup = frozenset(subgroup)
        if subgroup not in self._fixed:
            if self.trivial_action or subgroup == {0}:
                ring = self.base
            else:
                members = [a for a in self.base.elements() if all(self.action[h][a] == a for h in subgroup)]
                ring = self.base if len(members) == self.base.size else Subring(self.base, members, validate=False)
            self._fixed[subgroup] = ring
        return self._fixed[subgroup]

    def to_dict(self) -> Dict:
        data = {'base': self.base.to_dict()}
        if not self.trivial_action:
            R = self.base
            data['action'] = {self.group.label(g): [[R.encode(a), R.encode(b)] for a, b in self.action[g].items()]
                              for g in self.group.elements}
        return data

    @classmethod
    def trivial(cls, group: FiniteGroup, base: Ring) -> 'GRing':
        return cls(group, base, None)

    @classmethod
    def from_generator_action(cls, group: FiniteGroup, base: Ring, images: Dict[int, Dict]) -> 'GRing':
        """Extend automorphisms given on generators to the whole group"""
        elements = base.elements()
        action: Dict[int, Dict] = {0: {a: a for a in elements}}
        queue = [0]
        while queue:
            a = queue.pop(0)
            for s, phi in images.items():
                b = group.m(s, a)
                composed = {x: phi[action[a][x]] for x in elements}
                if b in action:
                    if action[b] != composed:
                        raise StructureError("Generator images do not define a group action")
                else:
                    action[b] = composed
                    queue.append(b)
        if len(action) != group.order:
            raise StructureError("Given elements do not generate the group")
        return cls(group, base, [action[g] for g in group.elements])

    @classmethod
    def frobenius(cls, group: FiniteGroup, field: GaloisField, generator: Optional[int] = None) -> 'GRing':
        """A cyclic group acting on GF(p^k) through powers of Frobenius"""
        if generator is None:
            generator = next((g for g in group.elements if group.element_order(g) == group.order), None)
            if generator is None:
                raise StructureError(f"{group.name} is not cyclic")
        n = group.element_order(generator)
        if group.generated([generator]) != frozenset(group.elements) or field.k % n:
            raise StructureError(f"A cyclic group of order {n} cannot act faithfully by Frobenius on {field.describe()}")
        step = field.k // n
        images = {generator: {a: field.frobenius(a, step) for a in field.elements()}}
        return cls.from_generator_action(group, field, images)


# ---------------------------------------------------------- Burnside rings


def _cosets_within(group: FiniteGroup, big: Subgroup, small: Subgroup) -> List[Subgroup]:
    seen = set()
    cosets = []
    for h in sorted(big):
        if h in seen:
            continue
        coset = frozenset(group.m(h, k) for k in small)
        seen |= coset
        cosets.append(coset)
    return cosets


class BurnsideRing(Ring):
    """A(H): integer combinations of H-conjugacy classes of subgroups, multiplied through marks"""

    kind = 'burnside'
    enumerable = False

    def __init__(self, group: FiniteGroup, subgroup: Iterable[int]):
        self.group = group
        self.subgroup = group.check_subgroup(subgroup)
        H = self.subgroup
        inner = [S for S in group.subgroup_lattice.subgroups if S <= H]
        index: Dict[Subgroup, int] = {}
        basis = []
        for S in inner:
            if S in index:
                continue
            for h in H:
                index[group.conjugate(S, h)] = len(basis)
            basis.append(S)
        self.basis = tuple(basis)
        self.rank = len(basis)
        self._basis_index = index
        marks = np.zeros((self.rank, self.rank), dtype=object)
        for i, K in enumerate(basis):
            cosets = _cosets_within(group, H, K)
            for j, L in enumerate(basis):
                marks[i, j] = sum(1 for coset in cosets if group.conjugate(L, min(coset)) <= K)
        self.table_of_marks = marks
        self._one = self.from_marks([1] * self.rank)

    def describe(self) -> str:
        lattice = self.group.subgroup_lattice
        return f"A({lattice.name(lattice.class_of(self.subgroup))})"

    @property
    def basis_names(self) -> List[str]:
        lattice = self.group.subgroup_lattice
        names = [lattice.name(lattice.class_of(K)) for K in self.basis]
        return [n if names.count(n) == 1 else f"{n}#{k}" for k, n in enumerate(names)]

    def basis_index(self, subset: Iterable[int]) -> int:
        try:
            return self._basis_index[frozenset(subset)]
        except KeyError:
            raise StructureError(f"{sorted(subset)} is not a subgroup of the Burnside ring's group")

    def basis_element(self, i: int) -> Tuple[int, ...]:
        return tuple(1 if k == i else 0 for k in range(self.rank))

    @property
    def zero(self):
        return (0,) * self.rank

    @property
    def one(self):
        return self._one

    @property
    def size(self) -> int:
        raise UnsupportedOperation("Burnside rings are infinite")

    def add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def neg(self, a):
        return tuple(-x for x in a)

    def mul(self, a, b):
        return self.from_marks([x * y for x, y in zip(self.marks(a), self.marks(b))])

    def _enumerate(self):
        raise UnsupportedOperation("Burnside rings are infinite")

    def marks(self, x) -> Tuple[int, ...]:
        """Fixed-point counts |X^L| for each basis subgroup L"""
        return tuple(int(v) for v in np.array(list(x), dtype=object).dot(self.table_of_marks))

    def from_marks(self, marks: Sequence[int]) -> Tuple[int, ...]:
        """Back-substitution through the lower-triangular table of marks"""
        M = self.table_of_marks
        x = [0] * self.rank
        for j in reversed(range(self.rank)):
            rest = int(marks[j]) - sum(x[i] * M[i, j] for i in range(j + 1, self.rank))
            if rest % M[j, j]:
                raise InconsistencyError(f"Marks vector {list(marks)} is not the image of a Burnside element")
            x[j] = int(rest // M[j, j])
        return tuple(x)

    def contains(self, a) -> bool:
        return isinstance(a, tuple) and len(a) == self.rank and \
            all(isinstance(v, int) and not isinstance(v, bool) for v in a)

    def is_effective(self, x) -> bool:
        return all(v >= 0 for v in x)

    def encode(self, a):
        return [int(v) for v in a]

    def decode(self, obj):
        if not isinstance(obj, (list, tuple)) or len(obj) != self.rank or \
                not all(isinstance(v, int) and not isinstance(v, bool) for v in obj):
            raise StructureError(f"Expected {self.rank} integer coefficients, got {obj!r}")
        return tuple(obj)

    def to_dict(self) -> Dict:
        G = self.group
        return {'kind': self.kind, 'subgroup': [G.label(g) for g in sorted(self.subgroup)],
                'basis': self.basis_names, 'table_of_marks': self.table_of_marks.tolist()}

    def hset_of(self, x):
        """An H-set whose class is the effective element x"""
        from gsets import GSet
        if not self.is_effective(x):
            raise UnsupportedOperation("Only effective Burnside elements are represented by H-sets")
        child, embed = self.group.subgroup_group(self.subgroup)
        pos = {g: k for k, g in enumerate(embed)}
        parts = []
        for i, count in enumerate(x):
            stab = frozenset(pos[g] for g in self.basis[i])
            parts.extend(GSet.cosets(child, stab) for _ in range(count))
        return GSet.coproduct(child, parts)[0]

    def class_of_hset(self, hset) -> Tuple[int, ...]:
        """Coefficient vector of a finite H-set"""
        child, embed = self.group.subgroup_group(self.subgroup)
        if hset.group is not child:
            raise StructureError("H-set is not over this Burnside ring's subgroup")
        coeffs = [0] * self.rank
        for orbit in hset.orbits:
            stab = frozenset(embed[g] for g in hset.stabilizer(orbit.points[0]))
            coeffs[self.basis_index(stab)] += 1
        return tuple(coeffs)


_burnside_cache: 'weakref.WeakKeyDictionary[FiniteGroup, Dict[Subgroup, BurnsideRing]]' = weakref.WeakKeyDictionary()


def burnside_ring(group: FiniteGroup, subgroup: Iterable[int]) -> BurnsideRing:
    """Shared Burnside ring instance per subgroup"""
    rings = _burnside_cache.setdefault(group, {})
    subgroup = frozenset(subgroup)
    if subgroup not in rings:
        rings[subgroup] = BurnsideRing(group, subgroup)
    return rings[subgroup]


def table_of_marks(group: FiniteGroup, subgroup: Optional[Iterable[int]] = None) -> np.ndarray:
    subgroup = frozenset(group.elements) if subgroup is None else subgroup
    return burnside_ring(group, subgroup).table_of_marks


def mult_induction_oracle(group: FiniteGroup, small: Iterable[int], big: Iterable[int], hset):
    """Map_H(K, X) as a K-set: H-maps phi: K -> X with (k.phi)(k') = phi(k'k)"""
    from gsets import GSet
    small, big = group.check_subgroup(small), group.check_subgroup(big)
    if not small <= big:
        raise StructureError("Multiplicative induction needs H <= K")
    h_group, h_embed = group.subgroup_group(small)
    k_group, k_embed = group.subgroup_group(big)
    if hset.group is not h_group:
        raise StructureError("Input must be a set over the smaller subgroup")
    h_pos = {g: k for k, g in enumerate(h_embed)}
    reps = []
    seen = set()
    for k in sorted(big):
        if k not in seen:
            reps.append(k)
            seen |= {group.m(h, k) for h in small}
    count = hset.size ** len(reps)
    if count > WorkbenchConfig.MAX_MIDDLE_POINTS:
        raise SearchCapExceeded(f"Multiplicative induction would have {count} points")

    def split(g: int) -> Tuple[int, int]:
        for j, r in enumerate(reps):
            h = group.m(g, group.inv[r])
            if h in small:
                return h_pos[h], j
        raise InconsistencyError("Right coset decomposition failed")

    moves = [[split(group.m(r, k_embed[kk])) for r in reps] for kk in k_group.elements]
    points = list(product(range(hset.size), repeat=len(reps)))
    pos = {p: n for n, p in enumerate(points)}
    act = [[pos[tuple(hset.act[h][phi[j]] for h, j in moves[kk])] for phi in points]
           for kk in k_group.elements]
    labels = ['(' + ','.join(str(hset.labels[v]) for v in phi) + ')' for phi in points]
    return GSet(k_group, labels, act, validate=False)


def ghost_restrict(src: BurnsideRing, dst: BurnsideRing, c: int, y):
    """Restriction along eH_i -> cH_j, from A(H_j) to A(H_i)"""
    G = src.group
    m = src.marks(y)
    return dst.from_marks([m[src.basis_index(G.conjugate(L, c))] for L in dst.basis])


def ghost_transfer(src: BurnsideRing, dst: BurnsideRing, c: int, x):
    """Transfer along eH_i -> cH_j, from A(H_i) to A(H_j)"""
    G = src.group
    m = src.marks(x)
    fiber = G.fiber_cosets(src.subgroup, dst.subgroup, c)
    out = []
    for L in dst.basis:
        total = 0
        for g, _ in fiber:
            S = G.conjugate(L, g)
            if S <= src.subgroup:
                total += m[src.basis_index(S)]
        out.append(total)
    return dst.from_marks(out)


def ghost_norm(src: BurnsideRing, dst: BurnsideRing, c: int, x):
    """Norm along eH_i -> cH_j: a product over L-orbits of the fiber cosets"""
    G = src.group
    m = src.marks(x)
    fiber = G.fiber_cosets(src.subgroup, dst.subgroup, c)
    out = []
    for L in dst.basis:
        value = 1
        seen = set()
        for g, coset in fiber:
            if coset in seen:
                continue
            seen |= {frozenset(G.m(l, y) for y in coset) for l in L}
            stab = frozenset(l for l in L if G.m(l, g) in coset)
            value *= m[src.basis_index(G.conjugate(stab, g))]
        out.append(value)
    return dst.from_marks(out)


@dataclass
class NormValidation:
    """Comparison of the ghost norm with multiplicative induction on basis elements"""
    group: str
    pairs_checked: int = 0
    elements_checked: int = 0
    mismatches: List[Dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.mismatches

    def to_dict(self) -> Dict:
        return {'group': self.group, 'pairs_checked': self.pairs_checked,
                'elements_checked': self.elements_checked, 'passed': self.passed,
                'mismatches': self.mismatches}


_norm_validation: 'weakref.WeakKeyDictionary[FiniteGroup, NormValidation]' = weakref.WeakKeyDictionary()


def validate_ghost_norm(group: FiniteGroup) -> NormValidation:
    """Check the ghost norm against Map_H(K, -) on every transitive H-set, for all H <= K"""
    if group in _norm_validation:
        return _norm_validation[group]
    report = NormValidation(group=group.name)
    subgroups = group.subgroup_lattice.subgroups
    for H in subgroups:
        src = burnside_ring(group, H)
        for K in subgroups:
            if not H <= K:
                continue
            dst = burnside_ring(group, K)
            report.pairs_checked += 1
            for i in range(src.rank):
                x = src.basis_element(i)
                expected = dst.class_of_hset(mult_induction_oracle(group, H, K, src.hset_of(x)))
                got = ghost_norm(src, dst, 0, x)
                report.elements_checked += 1
                if got != expected:
                    report.mismatches.append({'small': sorted(H), 'big': sorted(K), 'basis': i,
                                              'ghost': list(got), 'oracle': list(expected)})
    if report.passed:
        logger.info(f"Ghost norm formula verified on {report.elements_checked} basis elements of {group.name}")
    else:
        logger.warning(f"Ghost norm formula failed on {group.name}; virtual norms disabled")
    _norm_validation[group] = report
    return report


def burnside_norm(src: BurnsideRing, dst: BurnsideRing, x):
    """nm_H^K on A(H) -> A(K) for H <= K"""
    if src.group is not dst.group or not src.subgroup <= dst.subgroup:
        raise StructureError("burnside_norm needs H <= K in the same group")
    if validate_ghost_norm(src.group).passed:
        return ghost_norm(src, dst, 0, x)
    if not src.is_effective(x):
        raise UnsupportedOperation("Virtual Burnside norms are disabled for this group")
    return dst.class_of_hset(mult_induction_oracle(src.group, src.subgroup, dst.subgroup, src.hset_of(x)))
