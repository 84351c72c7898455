#!/usr/bin/env python3
"""
Finite field arithmetic for the self-dual basis constructions
Every tower used by one construction lives inside a single universe field
F_{p^m}; subfields are cut out by Frobenius, and moduli and roots are
chosen deterministically (lexicographically least coefficient tuple)
"""

import itertools
import logging
from functools import lru_cache
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np
from sympy import factorint, isprime

from errors import DomainError, InternalError, NotFoundError, ParameterError

logger = logging.getLogger("finite_field")

# gcd is taken once per this many Ben-Or levels
_BEN_OR_BATCH = 8


# ---------------------------------------------------------------------------
# Dense polynomials over F_p as numpy int64 arrays, low-to-high
# ---------------------------------------------------------------------------

def _fp_trim(a: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero(a)
    return a[: nz[-1] + 1] if nz.size else a[:0]


def _fp_pad(a: np.ndarray, length: int) -> np.ndarray:
    out = np.zeros(length, dtype=np.int64)
    out[: a.size] = a
    return out


def _fp_sub(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    n = max(a.size, b.size)
    return _fp_trim((_fp_pad(a, n) - _fp_pad(b, n)) % p)


def _fp_mul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    if a.size == 0 or b.size == 0:
        return np.zeros(0, dtype=np.int64)
    return _fp_trim(np.convolve(a, b) % p)


def _fp_divmod(a: np.ndarray, b: np.ndarray, p: int) -> Tuple[np.ndarray, np.ndarray]:
    a = _fp_trim(np.asarray(a, dtype=np.int64) % p).copy()
    b = _fp_trim(np.asarray(b, dtype=np.int64) % p)
    if b.size == 0:
        raise ZeroDivisionError("division by the zero polynomial")
    db = b.size - 1
    if a.size <= db:
        return a[:0], a
    inv = pow(int(b[-1]), -1, p)
    quotient = np.zeros(a.size - db, dtype=np.int64)
    for k in range(a.size - 1, db - 1, -1):
        c = int(a[k]) * inv % p
        if c:
            quotient[k - db] = c
            a[k - db:k + 1] = (a[k - db:k + 1] - c * b) % p
    return _fp_trim(quotient), _fp_trim(a[:db])


def _fp_gcd(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    a = _fp_trim(np.asarray(a, dtype=np.int64) % p)
    b = _fp_trim(np.asarray(b, dtype=np.int64) % p)
    while b.size:
        a, b = b, _fp_divmod(a, b, p)[1]
    if a.size:
        a = a * pow(int(a[-1]), -1, p) % p
    return a


def _fp_inverse_mod(a: np.ndarray, modulus: np.ndarray, p: int) -> np.ndarray:
    """Inverse of a modulo an irreducible polynomial (extended Euclid)"""
    r0, r1 = _fp_trim(modulus % p), _fp_trim(a % p)
    s0, s1 = np.zeros(0, dtype=np.int64), np.ones(1, dtype=np.int64)
    while r1.size:
        quotient, remainder = _fp_divmod(r0, r1, p)
        r0, r1 = r1, remainder
        s0, s1 = s1, _fp_sub(s0, _fp_mul(quotient, s1, p), p)
    if r0.size != 1:
        raise DomainError("zero has no multiplicative inverse")
    return s0 * pow(int(r0[0]), -1, p) % p


class _PolyReducer:
    """Multiplication in F_p[X]/(modulus) via a precomputed reduction table"""

    def __init__(self, modulus: np.ndarray, p: int):
        self.p = p
        self.m = len(modulus) - 1
        m = self.m
        rows = np.zeros((max(m - 1, 0), m), dtype=np.int64)
        if m > 1:
            row = (-np.asarray(modulus[:m], dtype=np.int64)) % p
            rows[0] = row
            for k in range(1, m - 1):
                top = int(row[-1])
                row = np.concatenate(([0], row[:-1]))
                if top:
                    row = (row + top * rows[0]) % p
                rows[k] = row
        # row k holds X^(m+k) mod modulus
        self.rows = rows

    def one(self) -> np.ndarray:
        out = np.zeros(self.m, dtype=np.int64)
        out[0] = 1
        return out

    def mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        m = self.m
        c = np.convolve(a, b) % self.p
        if c.size < 2 * m - 1:
            c = _fp_pad(c, 2 * m - 1)
        return (c[:m] + c[m:] @ self.rows) % self.p

    def pow(self, a: np.ndarray, e: int) -> np.ndarray:
        result = self.one()
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            e >>= 1
            if e:
                base = self.mul(base, base)
        return result


def _is_irreducible(modulus: np.ndarray, p: int) -> bool:
    """Ben-Or test with early exit"""
    m = len(modulus) - 1
    if m <= 1:
        return m == 1
    if modulus[0] % p == 0:
        return False
    reducer = _PolyReducer(modulus, p)
    x = _fp_pad(np.array([0, 1], dtype=np.int64), m)
    h = x.copy()
    acc = reducer.one()
    for i in range(1, m // 2 + 1):
        h = reducer.pow(h, p)
        acc = reducer.mul(acc, (h - x) % p)
        if i % _BEN_OR_BATCH == 0 or i == m // 2:
            if _fp_gcd(modulus, acc, p).size > 1:
                return False
            acc = reducer.one()
    return True


def _rref_mod_p(matrix: np.ndarray, p: int) -> Tuple[np.ndarray, List[int]]:
    a = np.array(matrix, dtype=np.int64) % p
    n_rows, n_cols = a.shape
    pivots: List[int] = []
    r = 0
    for c in range(n_cols):
        if r == n_rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        a[r] = a[r] * pow(int(a[r, c]), -1, p) % p
        col = a[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            a[hit] = (a[hit] - np.outer(col[hit], a[r])) % p
        pivots.append(c)
        r += 1
    return a[:r], pivots


def _nullspace_mod_p(matrix: np.ndarray, p: int) -> np.ndarray:
    reduced, pivots = _rref_mod_p(matrix, p)
    n_cols = matrix.shape[1]
    pivot_set = set(pivots)
    free = [c for c in range(n_cols) if c not in pivot_set]
    basis = np.zeros((len(free), n_cols), dtype=np.int64)
    for i, col in enumerate(free):
        basis[i, col] = 1
        if pivots:
            basis[i, pivots] = (-reduced[:, col]) % p
    return basis


def rank_mod_p(matrix: np.ndarray, p: int) -> int:
    if matrix.size == 0:
        return 0
    return len(_rref_mod_p(matrix, p)[1])


def _log_p(size: int, p: int) -> int:
    k = 0
    while size > 1 and size % p == 0:
        size //= p
        k += 1
    if size != 1:
        raise ParameterError(f"{size} is not a power of {p}")
    return k


# ---------------------------------------------------------------------------
# Fields and elements
# ---------------------------------------------------------------------------

class FqField:
    """The universe field F_p[Y]/(modulus)"""

    def __init__(self, p: int, modulus: Sequence[int]):
        if not isprime(p):
            raise ParameterError(f"characteristic {p} is not prime")
        if len(modulus) < 2 or int(modulus[-1]) % p != 1:
            raise ParameterError("modulus must be monic of degree at least 1")
        self.p = p
        self.modulus: Tuple[int, ...] = tuple(int(c) % p for c in modulus)
        self.degree = len(self.modulus) - 1
        if p * p * max(self.degree, 2) >= 2 ** 62:
            raise ParameterError(f"p={p} too large for int64 field arithmetic")
        self._modulus_array = np.array(self.modulus, dtype=np.int64)
        self._reducer = _PolyReducer(self._modulus_array, p)
        self._frobenius: Dict[int, np.ndarray] = {}
        self._subfields: Dict[int, "Subfield"] = {}

    @classmethod
    def from_modulus(cls, p: int, modulus: Sequence[int]) -> "FqField":
        """Build a field from an explicit modulus, checking irreducibility"""
        field = cls(p, modulus)
        if not _is_irreducible(field._modulus_array, p):
            raise ParameterError(f"modulus {list(modulus)} is reducible over F_{p}")
        return field

    @property
    def size(self) -> int:
        return self.p ** self.degree

    def __eq__(self, other) -> bool:
        return isinstance(other, FqField) and (self.p, self.modulus) == (other.p, other.modulus)

    def __hash__(self) -> int:
        return hash((self.p, self.modulus))

    def __repr__(self) -> str:
        return f"FqField(p={self.p}, degree={self.degree}, modulus={list(self.modulus)})"

    def element(self, coeffs: Sequence[int]) -> "FqElem":
        arr = np.zeros(self.degree, dtype=np.int64)
        values = np.asarray(coeffs, dtype=np.int64) % self.p
        if values.size > self.degree:
            raise DomainError(f"{values.size} coefficients for a degree-{self.degree} field")
        arr[: values.size] = values
        return FqElem(self, arr)

    def zero(self) -> "FqElem":
        return FqElem(self, np.zeros(self.degree, dtype=np.int64))

    def one(self) -> "FqElem":
        return self.from_int(1)

    def from_int(self, k: int) -> "FqElem":
        arr = np.zeros(self.degree, dtype=np.int64)
        arr[0] = k % self.p
        return FqElem(self, arr)

    def gen(self) -> "FqElem":
        """The class of Y"""
        if self.degree == 1:
            return self.from_int(-self.modulus[0])
        return self.element([0, 1])

    def elements(self) -> Iterator["FqElem"]:
        return self.full().elements()

    def full(self) -> "Subfield":
        return self.subfield(self.degree)

    def prime_subfield(self) -> "Subfield":
        return self.subfield(1)

    def subfield(self, k: int) -> "Subfield":
        if k < 1 or self.degree % k:
            raise ParameterError(f"F_{{{self.p}^{k}}} is not a subfield of F_{{{self.p}^{self.degree}}}")
        if k not in self._subfields:
            self._subfields[k] = Subfield(self, k)
        return self._subfields[k]

    def _frobenius_pow2(self, i: int) -> np.ndarray:
        """Matrix of x -> x^(p^(2^i)) on coefficient vectors"""
        if i in self._frobenius:
            return self._frobenius[i]
        m, p = self.degree, self.p
        if i == 0:
            y_p = self._reducer.pow(self.gen().coeffs, p) if m > 1 else np.ones(1, dtype=np.int64)
            mat = np.zeros((m, m), dtype=np.int64)
            column = self._reducer.one()
            for k in range(m):
                mat[:, k] = column
                column = self._reducer.mul(column, y_p)
        else:
            half = self._frobenius_pow2(i - 1)
            mat = (half @ half) % p
        self._frobenius[i] = mat
        return mat

    def frobenius_matrix(self, j: int) -> np.ndarray:
        """Matrix of x -> x^(p^j) on coefficient vectors"""
        j %= self.degree
        mat = np.eye(self.degree, dtype=np.int64)
        i = 0
        while j:
            if j & 1:
                mat = (self._frobenius_pow2(i) @ mat) % self.p
            j >>= 1
            i += 1
        return mat

    def apply_frobenius(self, coeffs: np.ndarray, j: int) -> np.ndarray:
        j %= self.degree
        i = 0
        while j:
            if j & 1:
                coeffs = (self._frobenius_pow2(i) @ coeffs) % self.p
            j >>= 1
            i += 1
        return coeffs

    def _mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self._reducer.mul(a, b)


class FqElem:
    """Element of a universe field, as F_p coefficients of 1, Y, ..., Y^(m-1)"""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FqField, coeffs: np.ndarray):
        self.field = field
        coeffs.flags.writeable = False
        self.coeffs = coeffs

    def _coerce(self, other) -> "FqElem":
        if isinstance(other, FqElem):
            if other.field is not self.field and other.field != self.field:
                raise DomainError("elements of different universe fields")
            return other
        if isinstance(other, (int, np.integer)):
            return self.field.from_int(int(other))
        return NotImplemented

    def __add__(self, other) -> "FqElem":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FqElem(self.field, (self.coeffs + other.coeffs) % self.field.p)

    __radd__ = __add__

    def __sub__(self, other) -> "FqElem":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FqElem(self.field, (self.coeffs - other.coeffs) % self.field.p)

    def __rsub__(self, other) -> "FqElem":
        return (-self) + other

    def __neg__(self) -> "FqElem":
        return FqElem(self.field, (-self.coeffs) % self.field.p)

    def __mul__(self, other) -> "FqElem":
        if isinstance(other, (int, np.integer)):
            return FqElem(self.field, (self.coeffs * (int(other) % self.field.p)) % self.field.p)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FqElem(self.field, self.field._mul(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def inverse(self) -> "FqElem":
        if self.is_zero():
            raise DomainError("zero has no multiplicative inverse")
        inv = _fp_inverse_mod(self.coeffs, self.field._modulus_array, self.field.p)
        return FqElem(self.field, _fp_pad(inv, self.field.degree))

    def __truediv__(self, other) -> "FqElem":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __pow__(self, e: int) -> "FqElem":
        if e < 0:
            return self.inverse() ** (-e)
        return FqElem(self.field, self.field._reducer.pow(self.coeffs, e))

    def frobenius(self, j: int = 1) -> "FqElem":
        """x^(p^j)"""
        j %= self.field.degree
        if j == 0:
            return self
        return FqElem(self.field, self.field.apply_frobenius(self.coeffs, j))

    def is_zero(self) -> bool:
        return not self.coeffs.any()

    def is_one(self) -> bool:
        return self.coeffs[0] == 1 and not self.coeffs[1:].any()

    def key(self) -> Tuple[int, ...]:
        return tuple(int(c) for c in self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, np.integer)):
            other = self.field.from_int(int(other))
        if not isinstance(other, FqElem):
            return NotImplemented
        return self.field == other.field and np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self) -> int:
        return hash((self.field.modulus, self.coeffs.tobytes()))

    def __repr__(self) -> str:
        return f"FqElem({list(self.key())})"


class Subfield:
    """Elements x of a universe field with x^(p^k) = x

    The F_p-basis is the reduced row echelon basis of ker(Phi^k - 1), so
    enumerating coordinate tuples in lexicographic order enumerates the
    subfield in lexicographic coefficient order.
    """

    def __init__(self, field: FqField, k: int):
        self.field = field
        self.degree = k
        self.p = field.p
        self.size = field.p ** k
        if k == field.degree:
            self.basis = np.eye(k, dtype=np.int64)
        else:
            shifted = (field.frobenius_matrix(k) - np.eye(field.degree, dtype=np.int64)) % field.p
            self.basis, _ = _rref_mod_p(_nullspace_mod_p(shifted, field.p), field.p)
        if self.basis.shape[0] != k:
            raise InternalError(f"subfield of degree {k} has dimension {self.basis.shape[0]}")
        logger.debug(f"Subfield F_{self.p}^{k} of {field}")

    def __eq__(self, other) -> bool:
        return isinstance(other, Subfield) and self.field == other.field and self.degree == other.degree

    def __hash__(self) -> int:
        return hash((self.field, self.degree))

    def __repr__(self) -> str:
        return f"Subfield(F_{self.p}^{self.degree} in degree {self.field.degree})"

    def contains(self, x: FqElem) -> bool:
        return x.frobenius(self.degree) == x

    def require(self, x: FqElem, what: str = "element") -> None:
        if not self.contains(x):
            raise DomainError(f"{what} does not lie in F_{self.p}^{self.degree}")

    def element(self, coords: Sequence[int]) -> FqElem:
        arr = (np.asarray(coords, dtype=np.int64) @ self.basis) % self.p
        return FqElem(self.field, arr)

    def basis_elements(self) -> List[FqElem]:
        return [FqElem(self.field, row.copy()) for row in self.basis]

    def elements(self) -> Iterator[FqElem]:
        for coords in itertools.product(range(self.p), repeat=self.degree):
            yield self.element(coords)

    def nonzero_elements(self) -> Iterator[FqElem]:
        it = self.elements()
        next(it)
        return it


FieldLike = Union[FqField, Subfield]


def _as_subfield(field: FieldLike) -> Subfield:
    return field.full() if isinstance(field, FqField) else field


@lru_cache(maxsize=None)
def make_field(p: int, m: int) -> FqField:
    """F_{p^m} with the lexicographically least monic irreducible modulus"""
    if not isprime(p):
        raise ParameterError(f"characteristic {p} is not prime")
    if m < 1:
        raise ParameterError(f"field degree must be positive, got {m}")
    if m == 1:
        return FqField(p, (0, 1))
    # (c0, ..., c_{m-1}) in lexicographic order; c0 = 0 is divisible by Y
    for tail in itertools.product(range(1, p), *[range(p)] * (m - 1)):
        modulus = np.array(tail + (1,), dtype=np.int64)
        if _is_irreducible(modulus, p):
            logger.debug(f"make_field({p}, {m}): modulus {list(modulus)}")
            return FqField(p, tuple(int(c) for c in modulus))
    raise InternalError(f"no irreducible polynomial of degree {m} over F_{p}")


def frobenius_pow(x: FqElem, t: int, base_size: int) -> FqElem:
    """x^(base_size^t)"""
    return x.frobenius(_log_p(base_size, x.field.p) * t)


def rel_trace(x: FqElem, sub_size: int, rel_degree: int) -> FqElem:
    """Trace from the degree-rel_degree extension of F_{sub_size} down to F_{sub_size}"""
    k = _log_p(sub_size, x.field.p)
    if x.frobenius(k * rel_degree) != x:
        raise DomainError(f"element is outside the degree-{rel_degree} extension of F_{sub_size}")
    total = x
    conjugate = x
    for _ in range(rel_degree - 1):
        conjugate = conjugate.frobenius(k)
        total = total + conjugate
    if total.frobenius(k) != total:
        raise InternalError("trace left the target subfield")
    return total


def is_square(a: FqElem, field: Optional[FieldLike] = None) -> bool:
    sub = _as_subfield(field or a.field)
    sub.require(a)
    if a.is_zero() or a.field.p == 2:
        return True
    return (a ** ((sub.size - 1) // 2)).is_one()


def _lex_min(*candidates: FqElem) -> FqElem:
    return min(candidates, key=lambda c: c.key())


def sqrt_ff(a: FqElem, field: Optional[FieldLike] = None) -> FqElem:
    """Square root in the given subfield, lexicographically smaller branch"""
    sub = _as_subfield(field or a.field)
    sub.require(a)
    if a.is_zero():
        return a
    if a.field.p == 2:
        return a ** (sub.size // 2)
    if not is_square(a, sub):
        raise DomainError(f"{a} is not a square in F_{sub.p}^{sub.degree}")
    # Tonelli-Shanks
    odd, two_adic = sub.size - 1, 0
    while odd % 2 == 0:
        odd //= 2
        two_adic += 1
    non_residue = next(z for z in sub.nonzero_elements() if not is_square(z, sub))
    m = two_adic
    c = non_residue ** odd
    t = a ** odd
    r = a ** ((odd + 1) // 2)
    while not t.is_one():
        i, t2 = 0, t
        while not t2.is_one():
            t2 = t2 * t2
            i += 1
        b = c ** (2 ** (m - i - 1))
        m = i
        c = b * b
        t = t * c
        r = r * b
    if r * r != a:
        raise InternalError("square root check failed")
    return _lex_min(r, -r)


def mult_generator(field: FieldLike) -> FqElem:
    """Lexicographically least element of multiplicative order size - 1"""
    sub = _as_subfield(field)
    order = sub.size - 1
    cofactors = [order // q for q in factorint(order)]
    for x in sub.nonzero_elements():
        if all(not (x ** c).is_one() for c in cofactors):
            return x
    raise InternalError("multiplicative group has no generator")


def multiplicative_order(x: FqElem, group_order: int) -> int:
    """Order of x given a multiple of it"""
    order = group_order
    for q, e in factorint(group_order).items():
        for _ in range(e):
            if (x ** (order // q)).is_one():
                order //= q
            else:
                break
    return order


def is_normal(x: FqElem, base: Subfield, degree: int) -> bool:
    """Conjugates x^(Q^i), i < degree, independent over the base of size Q"""
    rows = []
    conjugate = x
    basis = base.basis_elements()
    for _ in range(degree):
        rows.extend((b * conjugate).coeffs for b in basis)
        conjugate = conjugate.frobenius(base.degree)
    return rank_mod_p(np.array(rows), x.field.p) == base.degree * degree


# ---------------------------------------------------------------------------
# Polynomials over a universe field
# ---------------------------------------------------------------------------

class FqPoly:
    """Dense polynomial over a universe field, coefficients low-to-high"""

    def __init__(self, field: FqField, coeffs: Sequence[FqElem]):
        cs = list(coeffs)
        while cs and cs[-1].is_zero():
            cs.pop()
        self.field = field
        self.coeffs: Tuple[FqElem, ...] = tuple(cs)

    @classmethod
    def from_ints(cls, field: FqField, coeffs: Sequence[int]) -> "FqPoly":
        return cls(field, [field.from_int(c) for c in coeffs])

    @classmethod
    def x(cls, field: FqField) -> "FqPoly":
        return cls(field, [field.zero(), field.one()])

    @classmethod
    def constant(cls, c: FqElem) -> "FqPoly":
        return cls(c.field, [c])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self) -> FqElem:
        return self.coeffs[-1]

    def coefficient(self, i: int) -> FqElem:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.field.zero()

    def __eq__(self, other) -> bool:
        return isinstance(other, FqPoly) and self.coeffs == other.coeffs

    def __repr__(self) -> str:
        return f"FqPoly({[list(c.key()) for c in self.coeffs]})"

    def _lift(self, other) -> "FqPoly":
        if isinstance(other, FqPoly):
            return other
        if isinstance(other, FqElem):
            return FqPoly.constant(other)
        if isinstance(other, (int, np.integer)):
            return FqPoly.constant(self.field.from_int(int(other)))
        return NotImplemented

    def __add__(self, other) -> "FqPoly":
        other = self._lift(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return FqPoly(self.field, [self.coefficient(i) + other.coefficient(i) for i in range(n)])

    def __sub__(self, other) -> "FqPoly":
        other = self._lift(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return FqPoly(self.field, [self.coefficient(i) - other.coefficient(i) for i in range(n)])

    def __neg__(self) -> "FqPoly":
        return FqPoly(self.field, [-c for c in self.coeffs])

    def __mul__(self, other) -> "FqPoly":
        other = self._lift(other)
        if self.is_zero() or other.is_zero():
            return FqPoly(self.field, [])
        out = [self.field.zero()] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return FqPoly(self.field, out)

    __rmul__ = __mul__

    def __divmod__(self, other: "FqPoly") -> Tuple["FqPoly", "FqPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        rem = list(self.coeffs)
        d = other.degree
        if len(rem) - 1 < d:
            return FqPoly(self.field, []), self
        inv = other.leading().inverse()
        quotient = [self.field.zero()] * (len(rem) - d)
        for k in range(len(rem) - 1, d - 1, -1):
            c = rem[k] * inv
            if c.is_zero():
                continue
            quotient[k - d] = c
            for i, b in enumerate(other.coeffs):
                rem[k - d + i] = rem[k - d + i] - c * b
        return FqPoly(self.field, quotient), FqPoly(self.field, rem[:d])

    def __floordiv__(self, other: "FqPoly") -> "FqPoly":
        return divmod(self, other)[0]

    def __mod__(self, other: "FqPoly") -> "FqPoly":
        return divmod(self, other)[1]

    def monic(self) -> "FqPoly":
        if self.is_zero():
            return self
        inv = self.leading().inverse()
        return FqPoly(self.field, [c * inv for c in self.coeffs])

    def gcd(self, other: "FqPoly") -> "FqPoly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def __call__(self, x: FqElem) -> FqElem:
        acc = self.field.zero()
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def frobenius_coefficients(self, j: int) -> "FqPoly":
        """Apply x -> x^(p^j) to every coefficient"""
        return FqPoly(self.field, [c.frobenius(j) for c in self.coeffs])


def _pth_power_mod(h: FqPoly, g: FqPoly) -> FqPoly:
    """h^p mod g, using (sum a_i X^i)^p = sum a_i^p X^(ip)"""
    p = h.field.p
    if h.is_zero():
        return h
    terms = [h.field.zero()] * (h.degree * p + 1)
    for i, a in enumerate(h.coeffs):
        terms[i * p] = a.frobenius(1)
    return FqPoly(h.field, terms) % g


def _trace_poly_mod(delta: FqElem, g: FqPoly, k: int) -> FqPoly:
    """sum_{j<k} (delta X)^(p^j) mod g"""
    u = FqPoly(g.field, [g.field.zero(), delta]) % g
    total = u
    for _ in range(k - 1):
        u = _pth_power_mod(u, g)
        total = total + u
    return total


def _split_roots(g: FqPoly, sub: Subfield, deltas: List[FqElem]) -> List[FqElem]:
    if g.degree <= 0:
        return []
    if g.degree == 1:
        return [-(g.coeffs[0] / g.coeffs[1])]
    for idx, delta in enumerate(deltas):
        trace_poly = _trace_poly_mod(delta, g, sub.degree)
        parts: List[FqPoly] = []
        rest = g
        for c in range(sub.p):
            factor = rest.gcd(trace_poly - c)
            if factor.degree > 0:
                parts.append(factor)
                rest = rest // factor
            if rest.degree == 0:
                break
        if len(parts) > 1:
            roots: List[FqElem] = []
            for part in parts:
                roots.extend(_split_roots(part, sub, deltas[idx + 1:]))
            return roots
    raise InternalError("trace splitting failed to separate roots")


def roots_in(f: FqPoly, field: FieldLike) -> List[FqElem]:
    """All roots of f in the (sub)field, lexicographically sorted"""
    sub = _as_subfield(field)
    if f.is_zero():
        raise DomainError("the zero polynomial has every element as a root")
    f = f.monic()
    if f.degree == 0:
        return []
    x = FqPoly.x(f.field)
    power = x % f
    for _ in range(sub.degree):
        power = _pth_power_mod(power, f)
    g = f.gcd(power - x)
    roots = _split_roots(g, sub, sub.basis_elements())
    return sorted(roots, key=lambda r: r.key())


def find_root(f: FqPoly, field: FieldLike) -> FqElem:
    """Lexicographically least root of f in the (sub)field"""
    roots = roots_in(f, field)
    if not roots:
        sub = _as_subfield(field)
        raise NotFoundError(f"{f} has no root in F_{sub.p}^{sub.degree}")
    return roots[0]


def minimal_polynomial(x: FqElem, base: Optional[Subfield] = None) -> FqPoly:
    """Product of X - c over the distinct conjugates of x over the base"""
    base = base or x.field.prime_subfield()
    poly = FqPoly(x.field, [x.field.one()])
    conjugate = x
    while True:
        poly = poly * FqPoly(x.field, [-conjugate, x.field.one()])
        conjugate = conjugate.frobenius(base.degree)
        if conjugate == x:
            break
    for c in poly.coeffs:
        base.require(c, "minimal polynomial coefficient")
    return poly


def embed(x: FqElem, target: FqField) -> FqElem:
    """Image of x in another presentation: least root of its F_p-minimal polynomial"""
    if x.field.p != target.p:
        raise ParameterError("embedding between different characteristics")
    mp = minimal_polynomial(x)
    ints = [int(c.coeffs[0]) for c in mp.coeffs]
    return find_root(FqPoly.from_ints(target, ints), target)


def discrete_log(target: FqElem, base: FqElem, order: int) -> int:
    """k with base^k = target, baby-step giant-step in a cyclic group of the given order"""
    step = int(order ** 0.5) + 1
    table: Dict[Tuple[int, ...], int] = {}
    current = target.field.one()
    for j in range(step):
        table.setdefault(current.key(), j)
        current = current * base
    giant = base ** (order - step % order) if order else base
    gamma = target
    for i in range(step + 1):
        j = table.get(gamma.key())
        if j is not None:
            return (i * step + j) % order
        gamma = gamma * giant
    raise NotFoundError("element is not in the cyclic subgroup")
