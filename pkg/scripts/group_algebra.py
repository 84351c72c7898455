#!/usr/bin/env python3
"""
Group algebras R[G] for finite abelian G
Coefficients are finite field elements or truncated p-adic ring elements;
provides involution, augmentation, resolvends, unit inversion, square roots
and the character decomposition of cyclic group algebras
"""

import itertools
import logging
from math import lcm
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from sympy import n_order

from errors import DomainError, InternalError, ParameterError, PrecisionError
from finite_field import FqElem, FqField, Subfield, mult_generator, sqrt_ff

logger = logging.getLogger("group_algebra")

_MAX_NEWTON_STEPS = 64


class AbelianGroup:
    """Product of cyclic groups; elements are index tuples, stored by flat index"""

    def __init__(self, orders: Sequence[int]):
        orders = tuple(int(n) for n in orders) or (1,)
        if any(n < 1 for n in orders):
            raise ParameterError(f"cyclic factor orders must be positive: {orders}")
        self.orders = orders
        self.order = int(np.prod(orders))
        self._tuples = list(itertools.product(*[range(n) for n in orders]))
        self._index = {t: i for i, t in enumerate(self._tuples)}
        table = np.zeros((self.order, self.order), dtype=np.int64)
        for i, a in enumerate(self._tuples):
            for j, b in enumerate(self._tuples):
                table[i, j] = self._index[tuple((x + y) % n for x, y, n in zip(a, b, orders))]
        self.table = table
        self.inverses = [self._index[tuple((-x) % n for x, n in zip(a, orders))] for a in self._tuples]

    def __eq__(self, other) -> bool:
        return isinstance(other, AbelianGroup) and self.orders == other.orders

    def __hash__(self) -> int:
        return hash(self.orders)

    def __repr__(self) -> str:
        return "x".join(f"C{n}" for n in self.orders)

    def elements(self) -> List[Tuple[int, ...]]:
        return list(self._tuples)

    def index(self, element: Sequence[int]) -> int:
        key = tuple(int(x) % n for x, n in zip(element, self.orders))
        if len(key) != len(self.orders):
            raise ParameterError(f"{element} is not an element of {self}")
        return self._index[key]

    def element(self, index: int) -> Tuple[int, ...]:
        return self._tuples[index]

    def mul(self, i: int, j: int) -> int:
        return int(self.table[i, j])

    def power(self, i: int, k: int) -> int:
        return self.index(tuple(k * x for x in self._tuples[i]))

    def subgroup(self, generators: Sequence[Sequence[int]]) -> List[int]:
        """Flat indices of the subgroup generated by the given element tuples"""
        members = {0}
        frontier = [0]
        gens = [self.index(g) for g in generators]
        while frontier:
            current = frontier.pop()
            for g in gens:
                nxt = self.mul(current, g)
                if nxt not in members:
                    members.add(nxt)
                    frontier.append(nxt)
        return sorted(members)

    def coset_representatives(self, subgroup: Sequence[int]) -> List[int]:
        """Least flat index of every coset of the subgroup"""
        seen = set()
        reps = []
        for g in range(self.order):
            if g in seen:
                continue
            reps.append(g)
            seen.update(self.mul(g, h) for h in subgroup)
        return reps


def _negligible(c: Any) -> bool:
    # only exact zeros may be skipped; p-adic zeros still carry precision
    return isinstance(c, FqElem) and c.is_zero()


class GroupAlgebraElem:
    """Element sum_g a_g g of R[G]"""

    __slots__ = ("group", "ring", "coeffs")

    def __init__(self, group: AbelianGroup, ring: Any, coeffs: Sequence[Any]):
        if len(coeffs) != group.order:
            raise ParameterError(f"{len(coeffs)} coefficients for a group of order {group.order}")
        self.group = group
        self.ring = ring
        self.coeffs = tuple(coeffs)

    @classmethod
    def zero(cls, group: AbelianGroup, ring: Any) -> "GroupAlgebraElem":
        return cls(group, ring, [ring.zero()] * group.order)

    @classmethod
    def one(cls, group: AbelianGroup, ring: Any) -> "GroupAlgebraElem":
        return cls.basis(group, ring, 0)

    @classmethod
    def basis(cls, group: AbelianGroup, ring: Any, g: int) -> "GroupAlgebraElem":
        coeffs = [ring.zero()] * group.order
        coeffs[g] = ring.one()
        return cls(group, ring, coeffs)

    def _check(self, other: "GroupAlgebraElem") -> None:
        if other.group != self.group:
            raise DomainError(f"group algebras over {self.group} and {other.group}")

    def __add__(self, other: "GroupAlgebraElem") -> "GroupAlgebraElem":
        self._check(other)
        return GroupAlgebraElem(self.group, self.ring, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: "GroupAlgebraElem") -> "GroupAlgebraElem":
        self._check(other)
        return GroupAlgebraElem(self.group, self.ring, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self) -> "GroupAlgebraElem":
        return GroupAlgebraElem(self.group, self.ring, [-a for a in self.coeffs])

    def scale(self, c: Any) -> "GroupAlgebraElem":
        return GroupAlgebraElem(self.group, self.ring, [a * c for a in self.coeffs])

    def __mul__(self, other: Any) -> "GroupAlgebraElem":
        if not isinstance(other, GroupAlgebraElem):
            return self.scale(other)
        self._check(other)
        out = [self.ring.zero()] * self.group.order
        rhs = [(h, b) for h, b in enumerate(other.coeffs) if not _negligible(b)]
        for g, a in enumerate(self.coeffs):
            if _negligible(a):
                continue
            row = self.group.table[g]
            for h, b in rhs:
                k = row[h]
                out[k] = out[k] + a * b
        return GroupAlgebraElem(self.group, self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "GroupAlgebraElem":
        if e < 0:
            return invert_unit(self) ** (-e)
        result = GroupAlgebraElem.one(self.group, self.ring)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, GroupAlgebraElem) or other.group != self.group:
            return NotImplemented
        return all(a == b for a, b in zip(self.coeffs, other.coeffs))

    __hash__ = None

    def __repr__(self) -> str:
        terms = [f"{c!r}*{self.group.element(g)}" for g, c in enumerate(self.coeffs) if not _negligible(c)]
        return "GroupAlgebraElem(" + " + ".join(terms or ["0"]) + ")"

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def involution(self) -> "GroupAlgebraElem":
        """J: coefficient at g moves to g^-1"""
        out = [None] * self.group.order
        for g, c in enumerate(self.coeffs):
            out[self.group.inverses[g]] = c
        return GroupAlgebraElem(self.group, self.ring, out)

    def is_j_fixed(self) -> bool:
        return self.involution() == self

    def augmentation(self) -> Any:
        total = self.ring.zero()
        for c in self.coeffs:
            total = total + c
        return total

    def map_coefficients(self, fn: Callable[[Any], Any], ring: Any) -> "GroupAlgebraElem":
        return GroupAlgebraElem(self.group, ring, [fn(c) for c in self.coeffs])

    def frobenius_power(self) -> "GroupAlgebraElem":
        """The p-th power in characteristic p: sum a_g^p g^p"""
        p = self.ring.p
        out = [self.ring.zero()] * self.group.order
        for g, c in enumerate(self.coeffs):
            if _negligible(c):
                continue
            k = self.group.power(g, p)
            out[k] = out[k] + c.frobenius(1)
        return GroupAlgebraElem(self.group, self.ring, out)


def involution(a: GroupAlgebraElem) -> GroupAlgebraElem:
    return a.involution()


def augmentation(a: GroupAlgebraElem) -> Any:
    return a.augmentation()


def group_act(a: GroupAlgebraElem, x: Any, action: Any) -> Any:
    """a o x = sum_g a_g g(x) for an action exposing conjugate(g, x)"""
    total = None
    for g, c in enumerate(a.coeffs):
        if _negligible(c):
            continue
        term = action.conjugate(g, x) * c
        total = term if total is None else total + term
    return total if total is not None else x * 0


def resolvend_gram(x: Any, action: Any) -> GroupAlgebraElem:
    """R(x) = sum_g Tr(x g(x)) g over the action's coefficient ring"""
    group = action.group
    coeffs = [action.trace(x * action.conjugate(g, x)) for g in range(group.order)]
    r = GroupAlgebraElem(group, action.coefficient_ring, coeffs)
    tr = action.trace(x)
    if not r.augmentation() == tr * tr:
        raise InternalError("augmentation of the resolvend differs from Tr(x)^2")
    if not r.is_j_fixed():
        raise InternalError("resolvend is not fixed by the involution")
    return r


def _p_part(n: int, p: int) -> Tuple[int, int]:
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k, n


def _unipotent_order(w: GroupAlgebraElem, cap: int) -> int:
    """Least p-power t with w^t = 1"""
    one = GroupAlgebraElem.one(w.group, w.ring)
    t = 1
    power = w
    for _ in range(cap + 1):
        if power == one:
            return t
        power = power.frobenius_power()
        t *= w.ring.p
    raise InternalError(f"unipotent element has no p-power order below p^{cap}")


def _unipotent_cap(w: GroupAlgebraElem) -> int:
    return w.ring.degree * w.group.order


def _invert_pgroup(a: GroupAlgebraElem) -> GroupAlgebraElem:
    c = a.augmentation()
    if c.is_zero():
        raise DomainError("element with zero augmentation is not a unit of a p-group algebra")
    c_inv = c.inverse()
    u = a.scale(c_inv)
    t = _unipotent_order(u, _unipotent_cap(u))
    return (u ** (t - 1)).scale(c_inv)


def _invert_characters(a: GroupAlgebraElem, char_data: "CharData") -> GroupAlgebraElem:
    values = char_decompose(a, char_data)
    if any(v.is_zero() for v in values.values()):
        raise DomainError("a character value vanishes: element is not a unit")
    return char_recompose({s: v.inverse() for s, v in values.items()}, char_data)


def _prime_to_p_exponent(group: AbelianGroup, p: int) -> int:
    exponent = 1
    for n in group.orders:
        exponent = lcm(exponent, _p_part(n, p)[1])
    return exponent


def _frobenius_iterate(a: GroupAlgebraElem, k: int) -> GroupAlgebraElem:
    for _ in range(k):
        a = a.frobenius_power()
    return a


def _invert_split(a: GroupAlgebraElem) -> GroupAlgebraElem:
    """Inverse over G = G_p x H with |G_p| = p^k

    b = a^(p^k) is supported on H, and F[H] is a product of fields of degree
    dividing K = ord(q) mod exp(H) over F = F_q. So N = b^(1 + q + ... + q^(K-1))
    has character values in F, N^(q-1) = 1 when b is a unit, and
    a^-1 = a^(p^k - 1) * b^(q + ... + q^(K-1)) * N^(q-2).
    """
    group, ring = a.group, a.ring
    k, _ = _p_part(group.order, ring.p)
    exponent = _prime_to_p_exponent(group, ring.p)
    K = n_order(ring.size, exponent) if exponent > 1 else 1
    b = _frobenius_iterate(a, k)
    one = GroupAlgebraElem.one(group, ring)
    conjugates = one
    image = b
    for _ in range(K - 1):
        image = _frobenius_iterate(image, ring.degree)
        conjugates = conjugates * image
    norm = b * conjugates
    b_inv = conjugates * norm ** (ring.size - 2)
    if b * b_inv != one:
        raise DomainError("element is not a unit of the group algebra")
    logger.debug(f"split inverse over {group}: p-part p^{k}, K={K}")
    return a ** (ring.p ** k - 1) * b_inv


def _is_local(ring: Any) -> bool:
    return hasattr(ring, "residue_field")


def invert_unit(a: GroupAlgebraElem, char_data: Optional["CharData"] = None) -> GroupAlgebraElem:
    """Inverse of a unit; p-adic coefficients lift the residue inverse by Newton"""
    ring = a.ring
    if _is_local(ring):
        return _invert_local(a)
    k, rest = _p_part(a.group.order, ring.p)
    if rest == 1:
        return _invert_pgroup(a)
    if char_data is not None:
        return _invert_characters(a, char_data)
    return _invert_split(a)


def _residue(a: GroupAlgebraElem) -> GroupAlgebraElem:
    return a.map_coefficients(a.ring.residue, a.ring.residue_field)


def _lift(a: GroupAlgebraElem, ring: Any) -> GroupAlgebraElem:
    return a.map_coefficients(ring.lift, ring)


def _invert_local(a: GroupAlgebraElem) -> GroupAlgebraElem:
    ring = a.ring
    z = _lift(invert_unit(_residue(a)), ring)
    one = GroupAlgebraElem.one(a.group, ring)
    two = one.scale(2)
    for step in range(_MAX_NEWTON_STEPS):
        if (a * z - one).is_zero():
            logger.debug(f"group algebra inverse converged after {step} Newton steps")
            return z
        z = z * (two - a * z)
    raise PrecisionError("Newton inversion in the group algebra did not stabilise")


def sqrt_unipotent(w: GroupAlgebraElem) -> GroupAlgebraElem:
    """Square root of w in 1 + J for a p-group algebra in odd characteristic p"""
    if w.ring.p == 2:
        raise DomainError("unipotent square roots need odd characteristic")
    if not w.augmentation().is_one():
        raise DomainError("element is not unipotent (augmentation is not 1)")
    t = _unipotent_order(w, _unipotent_cap(w))
    root = w ** ((t + 1) // 2)
    if root * root != w:
        raise InternalError("unipotent square root check failed")
    if w.is_j_fixed() and not root.is_j_fixed():
        raise InternalError("square root of an involution-fixed element is not fixed")
    return root


def sqrt_modular_pgroup(u: GroupAlgebraElem, base: Subfield,
                        c_root: Optional[FqElem] = None) -> GroupAlgebraElem:
    """c_root * sqrt(u / c) with c the augmentation of u and c_root^2 = c"""
    c = u.augmentation()
    if c.is_zero():
        raise DomainError("element with zero augmentation is not a unit")
    if c_root is None:
        c_root = sqrt_ff(c, base)
    elif c_root * c_root != c:
        raise DomainError("supplied square root of the augmentation is wrong")
    root = sqrt_unipotent(u.scale(c.inverse())).scale(c_root)
    if root * root != u:
        raise InternalError("modular square root check failed")
    return root


def hensel_sqrt(u: GroupAlgebraElem, s0: GroupAlgebraElem) -> GroupAlgebraElem:
    """Newton square root w <- (w + u/w)/2 over a p-adic coefficient ring"""
    ring = u.ring
    if ring.p == 2:
        raise DomainError("Hensel square roots need odd p")
    if not _residue(s0 * s0 - u).is_zero():
        raise DomainError("seed is not a square root of u modulo p")
    half = ring.from_int(2).inverse()
    w = s0
    for step in range(_MAX_NEWTON_STEPS):
        if (w * w - u).is_zero():
            logger.debug(f"Hensel square root converged after {step} steps")
            return w
        w = (w + u * invert_unit(w)).scale(half)
    raise PrecisionError("Hensel square root did not stabilise")


class CharData:
    """Characters of a cyclic group of order d over F_q, grouped into Frobenius orbits"""

    def __init__(self, d: int, base: Subfield):
        p = base.p
        if d < 1 or d % p == 0:
            raise DomainError(f"character decomposition needs gcd(d, p) = 1, got d={d}, p={p}")
        self.d = d
        self.base = base
        self.q = base.size
        self.field: FqField = base.field
        m = base.degree
        self.split_degree = m * (n_order(self.q, d) if d > 1 else 1)
        if self.field.degree % self.split_degree:
            raise ParameterError(f"universe of degree {self.field.degree} lacks the d={d} roots of unity")
        splitting = self.field.subfield(self.split_degree)
        self.zeta = mult_generator(splitting) ** ((splitting.size - 1) // d)
        self.zeta_powers = [self.field.one()]
        for _ in range(d - 1):
            self.zeta_powers.append(self.zeta_powers[-1] * self.zeta)

        self.orbits: Dict[int, List[int]] = {}
        seen = set()
        for s in range(d):
            if s in seen:
                continue
            orbit = [s]
            nxt = s * self.q % d
            while nxt != s:
                orbit.append(nxt)
                nxt = nxt * self.q % d
            seen.update(orbit)
            self.orbits[s] = orbit
        self.representatives = sorted(self.orbits)
        self._rep_of = {t: s for s, orbit in self.orbits.items() for t in orbit}

        self.partner: Dict[int, int] = {}
        self.involution_power: Dict[int, int] = {}
        self.value_field: Dict[int, Subfield] = {}
        self.fixed_field: Dict[int, Subfield] = {}
        for s in self.representatives:
            orbit = self.orbits[s]
            self.value_field[s] = self.field.subfield(m * len(orbit))
            self.partner[s] = self._rep_of[(d - s) % d]
            if self.partner[s] == s:
                j = orbit.index((d - s) % d)
                self.involution_power[s] = j
                if j == 0:
                    self.fixed_field[s] = base
                else:
                    self.fixed_field[s] = self.field.subfield(m * len(orbit) // 2)
        logger.debug(f"CharData d={d} q={self.q}: orbits {list(self.orbits.values())}")

    def representative(self, s: int) -> int:
        return self._rep_of[s % self.d]

    def involution_image(self, s: int, value: FqElem) -> FqElem:
        """Image of a character value at a self-paired s under x -> x^(q^j)"""
        return value.frobenius(self.base.degree * self.involution_power[s])


def char_decompose(a: GroupAlgebraElem, cd: CharData) -> Dict[int, FqElem]:
    """chi_s(a) = sum_j a_j zeta^(sj) for every orbit representative s"""
    if a.group.order != cd.d or len(a.group.orders) != 1:
        raise DomainError(f"character data for C{cd.d} applied to {a.group}")
    values = {}
    for s in cd.representatives:
        total = cd.field.zero()
        for j, c in enumerate(a.coeffs):
            if not c.is_zero():
                total = total + c * cd.zeta_powers[s * j % cd.d]
        if not cd.value_field[s].contains(total):
            raise InternalError(f"character value at s={s} left F_q(chi_s)")
        values[s] = total
    return values


def char_recompose(values: Dict[int, FqElem], cd: CharData) -> GroupAlgebraElem:
    """Inverse discrete Fourier transform from orbit representatives"""
    full: Dict[int, FqElem] = {}
    for s in cd.representatives:
        if s not in values:
            raise DomainError(f"missing character value for s={s}")
        value = values[s]
        if not cd.value_field[s].contains(value):
            raise DomainError(f"value at s={s} is outside F_q(chi_s)")
        for t, member in enumerate(cd.orbits[s]):
            full[member] = value.frobenius(cd.base.degree * t)
    d_inv = cd.field.from_int(cd.d).inverse()
    coeffs = []
    for j in range(cd.d):
        total = cd.field.zero()
        for s in range(cd.d):
            total = total + full[s] * cd.zeta_powers[(-s * j) % cd.d]
        total = total * d_inv
        if not cd.base.contains(total):
            raise InternalError(f"recomposed coefficient {j} is outside F_q")
        coeffs.append(total)
    return GroupAlgebraElem(AbelianGroup([cd.d]), cd.field, coeffs)
