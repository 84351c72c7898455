#!/usr/bin/env python3
"""
Truncated p-adic arithmetic over unramified extensions of Q_p and
Eisenstein extensions of them
An element of W_F[t]/(h) is an integer matrix (y-degree by t-degree)
scaled by a power of p and known modulo an absolute power of p
"""

import logging
from dataclasses import dataclass, field
from functools import lru_cache, reduce
from math import gcd
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from sympy import isprime

from errors import (
    DomainError,
    ExistenceError,
    InternalError,
    ParameterError,
    PrecisionError,
    WEAK_RAMIFICATION_CRITERION,
)
from finite_field import FqElem, embed, make_field, mult_generator
from group_algebra import AbelianGroup

logger = logging.getLogger("padic")

DEFAULT_PRECISION = 48
DEFAULT_GUARD = 8
_MAX_NEWTON_STEPS = 64


def _vp(n: int, p: int) -> int:
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def _split_int(k: int, p: int) -> Tuple[int, int]:
    """k = p^a * u with u prime to p"""
    if k == 0:
        raise DomainError("zero has no p-adic unit part")
    a = _vp(k, p)
    return a, k // p ** a


def _power_sums(h: Sequence[int]) -> List[int]:
    """Power sums s_0..s_{e-1} of the roots of a monic h (Newton identities)"""
    e = len(h) - 1
    c = [h[e - i] for i in range(e + 1)]
    sums = [e]
    for k in range(1, e):
        total = k * c[k] + sum(c[i] * sums[k - i] for i in range(1, k))
        sums.append(-total)
    return sums


def _zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=object)


class LocalRing:
    """W_F[t]/(h): W_F unramified of degree F over Z_p, h Eisenstein of degree e"""

    def __init__(self, p: int, unram_degree: int, eisenstein: Sequence[int] = (0, 1),
                 prec: int = DEFAULT_PRECISION):
        if not isprime(p) or p == 2:
            raise ParameterError(f"local rings need an odd prime, got p={p}")
        if unram_degree < 1 or prec < 1:
            raise ParameterError("unramified degree and precision must be positive")
        h = tuple(int(c) for c in eisenstein)
        if len(h) < 2 or h[-1] != 1:
            raise ParameterError(f"{list(h)} is not monic of positive degree")
        e = len(h) - 1
        if h != (0, 1):
            if any(c % p for c in h[:-1]) or h[0] % (p * p) == 0:
                raise ParameterError(f"{list(h)} is not Eisenstein at p={p}")
        self.p = p
        self.F = unram_degree
        self.e = e
        self.h = h
        self.prec = prec
        self.residue_field = make_field(p, unram_degree)
        self.mu = tuple(int(c) for c in self.residue_field.modulus)
        self._h_low = np.array(h[:e], dtype=object)
        self._mu_low = np.array(self.mu[: self.F], dtype=object)
        self.power_sums = _power_sums(h)
        self._sigma: Dict[int, np.ndarray] = {}
        self._embeddings: Dict[Tuple, "LocalElem"] = {}

    @property
    def key(self) -> Tuple:
        return (self.p, self.F, self.h, self.prec)

    @property
    def degree(self) -> int:
        return self.F * self.e

    def __eq__(self, other) -> bool:
        return isinstance(other, LocalRing) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return f"LocalRing(p={self.p}, F={self.F}, h={list(self.h)}, prec={self.prec})"

    # -- construction -------------------------------------------------------

    def element(self, coeffs: Any, shift: int = 0, prec: Optional[int] = None) -> "LocalElem":
        arr = _zeros(self.F, self.e)
        src = np.array(coeffs, dtype=object)
        if src.ndim == 1:
            src = src.reshape(-1, 1)
        arr[: src.shape[0], : src.shape[1]] = src
        arr = np.vectorize(int, otypes=[object])(arr)
        return LocalElem(self, arr, shift, self.prec + shift if prec is None else prec)

    def zero(self) -> "LocalElem":
        return LocalElem(self, _zeros(self.F, self.e), self.prec, self.prec)

    def one(self) -> "LocalElem":
        return self.from_int(1)

    def from_int(self, k: int, prec: Optional[int] = None) -> "LocalElem":
        arr = _zeros(self.F, self.e)
        arr[0, 0] = int(k)
        return LocalElem(self, arr, 0, self.prec if prec is None else prec)

    def constant(self, vector: Sequence[int], shift: int = 0, prec: Optional[int] = None) -> "LocalElem":
        """Element of W_F scaled by p^shift"""
        arr = _zeros(self.F, self.e)
        for a, c in enumerate(vector):
            arr[a, 0] = int(c)
        return LocalElem(self, arr, shift, self.prec + shift if prec is None else prec)

    def gen_t(self, prec: Optional[int] = None) -> "LocalElem":
        prec = self.prec if prec is None else prec
        if self.e == 1:
            return self.from_int(-self.h[0], prec)
        arr = _zeros(self.F, self.e)
        arr[0, 1] = 1
        return LocalElem(self, arr, 0, prec)

    def gen_y(self) -> "LocalElem":
        if self.F == 1:
            return self.from_int(-self.mu[0])
        arr = _zeros(self.F, self.e)
        arr[1, 0] = 1
        return LocalElem(self, arr, 0, self.prec)

    def residue(self, x: "LocalElem") -> FqElem:
        """Reduction modulo the maximal ideal"""
        if x.is_zero() or x.shift > 0:
            return self.residue_field.zero()
        if x.shift < 0:
            raise DomainError("element is not integral")
        return self.residue_field.element([int(c) % self.p for c in x.coeffs[:, 0]])

    def lift(self, y: FqElem, prec: Optional[int] = None) -> "LocalElem":
        if y.field != self.residue_field:
            raise DomainError("residue element from a different field")
        return self.constant([int(c) for c in y.coeffs], 0, prec)

    # -- raw arithmetic on coefficient matrices -------------------------------

    def _reduce_raw(self, prod: np.ndarray) -> np.ndarray:
        rows, cols = prod.shape
        e, F = self.e, self.F
        for j in range(cols - 1, e - 1, -1):
            column = prod[:, j]
            if any(column):
                prod[:, j - e:j] -= np.outer(column, self._h_low)
        prod = prod[:, :e]
        for i in range(rows - 1, F - 1, -1):
            row = prod[i]
            if any(row):
                prod[i - F:i, :] -= np.outer(self._mu_low, row)
        return prod[:F]

    def _mul_raw(self, a: np.ndarray, b: np.ndarray, modulus: int) -> np.ndarray:
        F, e = self.F, self.e
        prod = _zeros(2 * F - 1, 2 * e - 1)
        for i, j in zip(*np.nonzero(a)):
            prod[i:i + F, j:j + e] += a[i, j] * b
        return self._reduce_raw(prod) % modulus

    # -- Frobenius on the unramified part ------------------------------------

    def unramified(self) -> "LocalRing":
        if self.h == (0, 1):
            return self
        return local_ring(self.p, self.F, (0, 1), self.prec)

    def sigma_matrix(self, j: int) -> np.ndarray:
        """Matrix of the j-th power of the Frobenius lift on W_F coefficient vectors"""
        j %= self.F
        if j in self._sigma:
            return self._sigma[j]
        modulus = self.p ** self.prec
        if j == 0:
            mat = np.identity(self.F, dtype=object)
        elif j == 1:
            unram = self.unramified()
            y = unram.gen_y()
            image = hensel_root(list(self.mu), y ** self.p)
            mat = _zeros(self.F, self.F)
            column = unram.one()
            for a in range(self.F):
                mat[:, a] = _integral_vector(column, self.prec)
                column = column * image
        else:
            mat = (self.sigma_matrix(1) @ self.sigma_matrix(j - 1)) % modulus
        self._sigma[j] = mat
        return mat

    def apply_sigma(self, x: "LocalElem", j: int) -> "LocalElem":
        if j % self.F == 0 or x.is_zero():
            return x
        return LocalElem(self, (self.sigma_matrix(j) @ x.coeffs) % self.p ** x.digits, x.shift, x.prec)

    # -- embeddings ------------------------------------------------------------

    def unramified_image(self, source: "LocalRing") -> "LocalElem":
        """Image of the unramified generator of source: Hensel lift of its residue embedding"""
        if source.key in self._embeddings:
            return self._embeddings[source.key]
        unram = self.unramified()
        y_bar = embed(source.residue_field.gen(), self.residue_field)
        image = hensel_root(list(source.mu), unram.lift(y_bar))
        self._embeddings[source.key] = image
        return image


def _integral_vector(x: "LocalElem", prec: int) -> List[int]:
    """W_F coordinates of an integral element of an unramified ring, mod p^prec"""
    if x.is_zero():
        return [0] * x.ring.F
    if x.shift < 0:
        raise DomainError("element is not integral")
    scale = x.ring.p ** x.shift
    return [int(c) * scale % x.ring.p ** prec for c in x.coeffs[:, 0]]


@lru_cache(maxsize=None)
def local_ring(p: int, unram_degree: int, eisenstein: Tuple[int, ...] = (0, 1),
               prec: int = DEFAULT_PRECISION) -> LocalRing:
    return LocalRing(p, unram_degree, eisenstein, prec)


class LocalElem:
    """p^shift * sum c_ab y^a t^b, known modulo p^prec"""

    __slots__ = ("ring", "coeffs", "shift", "prec")

    def __init__(self, ring: LocalRing, coeffs: np.ndarray, shift: int, prec: int):
        self.ring = ring
        digits = prec - shift
        if digits <= 0:
            self.coeffs = _zeros(ring.F, ring.e)
            self.shift = prec
            self.prec = prec
            return
        p = ring.p
        coeffs = coeffs % p ** digits
        g = reduce(gcd, (int(c) for c in coeffs.flat), 0)
        if g == 0:
            self.coeffs = _zeros(ring.F, ring.e)
            self.shift = prec
            self.prec = prec
            return
        k = _vp(g, p)
        if k:
            coeffs = coeffs // p ** k
            shift += k
        self.coeffs = coeffs
        self.shift = shift
        self.prec = prec

    @property
    def digits(self) -> int:
        return self.prec - self.shift

    def is_zero(self) -> bool:
        """Zero to the known precision"""
        return self.shift >= self.prec

    def _coerce(self, other: Any) -> "LocalElem":
        if isinstance(other, LocalElem):
            if other.ring is not self.ring and other.ring != self.ring:
                raise DomainError(f"elements of {self.ring} and {other.ring}")
            return other
        if isinstance(other, (int, np.integer)):
            return self.ring.from_int(int(other), max(self.prec, self.ring.prec))
        raise TypeError(f"cannot combine LocalElem with {type(other).__name__}")

    def _aligned(self, other: "LocalElem") -> Tuple[np.ndarray, np.ndarray, int, int]:
        p = self.ring.p
        s = min(self.shift, other.shift)
        a = self.coeffs * p ** (self.shift - s) if self.shift > s else self.coeffs
        b = other.coeffs * p ** (other.shift - s) if other.shift > s else other.coeffs
        return a, b, s, min(self.prec, other.prec)

    def __add__(self, other: Any) -> "LocalElem":
        other = self._coerce(other)
        a, b, s, prec = self._aligned(other)
        return LocalElem(self.ring, a + b, s, prec)

    __radd__ = __add__

    def __sub__(self, other: Any) -> "LocalElem":
        other = self._coerce(other)
        a, b, s, prec = self._aligned(other)
        return LocalElem(self.ring, a - b, s, prec)

    def __rsub__(self, other: Any) -> "LocalElem":
        return self._coerce(other) - self

    def __neg__(self) -> "LocalElem":
        return LocalElem(self.ring, -self.coeffs, self.shift, self.prec)

    def _scale_int(self, k: int) -> "LocalElem":
        if k == 0:
            return self.ring.zero()
        a, u = _split_int(k, self.ring.p)
        return LocalElem(self.ring, self.coeffs * u, self.shift + a, self.prec + a)

    def __mul__(self, other: Any) -> "LocalElem":
        if isinstance(other, (int, np.integer)):
            return self._scale_int(int(other))
        other = self._coerce(other)
        shift = self.shift + other.shift
        prec = min(self.shift + other.prec, other.shift + self.prec)
        if prec <= shift:
            return LocalElem(self.ring, _zeros(self.ring.F, self.ring.e), prec, prec)
        raw = self.ring._mul_raw(self.coeffs, other.coeffs, self.ring.p ** (prec - shift))
        return LocalElem(self.ring, raw, shift, prec)

    __rmul__ = __mul__

    def __truediv__(self, other: Any) -> "LocalElem":
        if isinstance(other, (int, np.integer)):
            a, u = _split_int(int(other), self.ring.p)
            if self.is_zero():
                return LocalElem(self.ring, self.coeffs, self.shift - a, self.prec - a)
            inv = pow(u, -1, self.ring.p ** self.digits)
            return LocalElem(self.ring, self.coeffs * inv, self.shift - a, self.prec - a)
        return self * self._coerce(other).inverse()

    def __pow__(self, e: int) -> "LocalElem":
        if e < 0:
            return self.inverse() ** (-e)
        result = None
        base = self
        while e:
            if e & 1:
                result = base if result is None else result * base
            e >>= 1
            if e:
                base = base * base
        return self.ring.one() if result is None else result

    def __eq__(self, other: Any) -> bool:
        try:
            return (self - self._coerce(other)).is_zero()
        except (TypeError, DomainError):
            return NotImplemented

    __hash__ = None

    def __repr__(self) -> str:
        rows = [[int(c) for c in row] for row in self.coeffs]
        return f"LocalElem(p^{self.shift} * {rows} + O(p^{self.prec}))"

    def valuation(self) -> int:
        """Valuation in units of the uniformiser t (v(p) = e)"""
        if self.is_zero():
            raise PrecisionError(f"element is indistinguishable from 0 modulo p^{self.prec}")
        p, e = self.ring.p, self.ring.e
        first = next(b for b in range(e) if any(int(c) % p for c in self.coeffs[:, b]))
        return e * self.shift + first

    def p_valuation(self) -> int:
        """Valuation of the scaled coefficient matrix in powers of p"""
        if self.is_zero():
            raise PrecisionError(f"element is indistinguishable from 0 modulo p^{self.prec}")
        return self.shift

    def inverse(self) -> "LocalElem":
        if self.is_zero():
            raise PrecisionError("cannot invert an element indistinguishable from 0")
        ring = self.ring
        e = ring.e
        offset = self.valuation() - e * self.shift
        unit = LocalElem(ring, self.coeffs, 0, self.digits)
        w = (e - offset) % e
        if w:
            unit = unit * ring.gen_t(unit.prec) ** w
        extra = unit.shift
        unit = LocalElem(ring, unit.coeffs, 0, unit.prec - extra)
        inv = _invert_unit(unit)
        if w:
            inv = inv * ring.gen_t(inv.prec) ** w
        total = self.shift + extra
        return LocalElem(ring, inv.coeffs, inv.shift - total, inv.prec - total)

    def integral_matrix(self) -> List[List[int]]:
        """Coefficients of p^-shift * self, as nested int lists"""
        return [[int(c) for c in row] for row in self.coeffs]


def _invert_unit(u: LocalElem) -> LocalElem:
    """Newton z <- z(2 - uz) from the residue inverse"""
    ring = u.ring
    residue = ring.residue(u)
    if residue.is_zero():
        raise DomainError("element is not a unit")
    z = ring.lift(residue.inverse(), u.prec)
    one = ring.from_int(1, u.prec)
    for _ in range(_MAX_NEWTON_STEPS):
        if (u * z - one).is_zero():
            return z
        z = z * (2 * one - u * z)
    raise PrecisionError("Newton inversion did not stabilise")


def _horner(coeffs: Sequence[Any], x: LocalElem) -> LocalElem:
    ring = x.ring
    prec = max(x.prec, ring.prec)
    acc = LocalElem(ring, _zeros(ring.F, ring.e), prec, prec)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _coefficient_precision(poly: Sequence[Any], default: int) -> int:
    return min([c.prec for c in poly if isinstance(c, LocalElem)] + [default])


def hensel_root(poly: Sequence[Any], x0: LocalElem) -> LocalElem:
    """Newton lift of an approximate root of poly (coefficients low-to-high)

    Iterates are treated as exact at the working precision plus enough extra
    digits to absorb the division by h'(x). The loop stops once the residual
    pins the root down modulo p^target, or once the correction vanishes.
    """
    ring = x0.ring
    e = ring.e
    deriv = [c * i for i, c in enumerate(poly)][1:]
    value = _horner(poly, x0)
    if value.is_zero():
        return x0
    slope = _horner(deriv, x0)
    if slope.is_zero() or value.valuation() <= 2 * slope.valuation():
        raise DomainError("Hensel condition v(h(x0)) > 2 v(h'(x0)) fails")
    slope_val = slope.valuation()
    target = _coefficient_precision(poly, ring.prec)
    work = target + 2 * -(-slope_val // e) + 2
    x = LocalElem(ring, x0.coeffs, x0.shift, work)
    for step in range(_MAX_NEWTON_STEPS):
        value = _horner(poly, x)
        if value.is_zero() or value.valuation() - slope_val >= e * target:
            break
        correction = value / _horner(deriv, x)
        if correction.is_zero():
            break
        moved = x - correction
        x = LocalElem(ring, moved.coeffs, moved.shift, work)
    else:
        raise PrecisionError("Hensel lifting did not stabilise")
    value_val = e * value.prec if value.is_zero() else value.valuation()
    known = min(target, (value_val - slope_val) // e)
    logger.debug(f"hensel_root: {step} steps, root known to p^{known}")
    return LocalElem(ring, x.coeffs, x.shift, known)


def teichmuller(u: FqElem, ring: LocalRing) -> LocalElem:
    """The root of unity in the ring congruent to u"""
    if u.is_zero():
        raise DomainError("zero has no Teichmuller lift")
    q = ring.residue_field.size
    x = ring.lift(u)
    for _ in range(ring.prec + 2):
        nxt = x ** q
        if nxt == x:
            return nxt
        x = nxt
    raise PrecisionError("Teichmuller iteration did not stabilise")


def trace_t(x: LocalElem) -> LocalElem:
    """Trace from W_F[t]/(h) to W_F"""
    ring = x.ring
    if x.is_zero():
        return x
    column = sum((x.coeffs[:, b] * s for b, s in enumerate(ring.power_sums)), _zeros(ring.F, 1)[:, 0])
    return ring.constant(list(column), x.shift, x.prec)


def trace_to_base(x: LocalElem, base_degree: int) -> LocalElem:
    """Trace down to the unramified subring of degree base_degree"""
    ring = x.ring
    if ring.F % base_degree:
        raise ParameterError(f"W_{base_degree} is not a subring of W_{ring.F}")
    y = trace_t(x)
    total = y
    for j in range(1, ring.F // base_degree):
        total = total + ring.apply_sigma(y, base_degree * j)
    return total


def subfield_trace(x: LocalElem, index: int, base_degree: int = 1) -> LocalElem:
    """Trace to the base from a subfield of the given index in the ring's field"""
    return trace_to_base(x, base_degree) / index


def _determinant(matrix: List[List[LocalElem]]) -> LocalElem:
    """Elimination with least-valuation pivots"""
    rows = [list(r) for r in matrix]
    n = len(rows)
    ring = rows[0][0].ring
    det = ring.one()
    for col in range(n):
        candidates = [r for r in range(col, n) if not rows[r][col].is_zero()]
        if not candidates:
            return ring.zero()
        pivot_row = min(candidates, key=lambda r: rows[r][col].valuation())
        if pivot_row != col:
            rows[col], rows[pivot_row] = rows[pivot_row], rows[col]
            det = -det
        pivot = rows[col][col]
        det = det * pivot
        inv = pivot.inverse()
        for r in range(col + 1, n):
            if rows[r][col].is_zero():
                continue
            factor = rows[r][col] * inv
            rows[r] = [a - factor * b for a, b in zip(rows[r], rows[col])]
    return det


def norm_t(x: LocalElem) -> LocalElem:
    """Norm from W_F[t]/(h) to W_F, as an element of the unramified ring"""
    ring = x.ring
    unram = ring.unramified()
    if ring.e == 1:
        return unram.constant(list(x.coeffs[:, 0]), x.shift, x.prec)
    t = ring.gen_t()
    columns = []
    z = x
    for _ in range(ring.e):
        columns.append([unram.constant(list(z.coeffs[:, b]), z.shift, z.prec) for b in range(ring.e)])
        z = z * t
    matrix = [[columns[j][b] for j in range(ring.e)] for b in range(ring.e)]
    return _determinant(matrix)


def trace_norm(x: LocalElem, base_degree: int = 1) -> Tuple[LocalElem, LocalElem]:
    """Trace and norm down to W_base_degree, both returned in the ring of x"""
    ring = x.ring
    trace = trace_to_base(x, base_degree)
    n = norm_t(x)
    unram = n.ring
    total = n
    for j in range(1, ring.F // base_degree):
        total = total * unram.apply_sigma(n, base_degree * j)
    norm = ring.constant(list(total.coeffs[:, 0]), total.shift, total.prec)
    return trace, norm


def embed_into(x: LocalElem, target: LocalRing) -> LocalElem:
    """Move x into a ring with a larger unramified part"""
    src = x.ring
    if src == target:
        return x
    if src.p != target.p or target.F % src.F:
        raise ParameterError(f"cannot embed {src} into {target}")
    if src.h != (0, 1) and src.h != target.h:
        raise ParameterError(f"{src} and {target} have different Eisenstein parts")
    if x.is_zero():
        return LocalElem(target, _zeros(target.F, target.e), x.prec, x.prec)
    if src.F == 1:
        image_y = None
    elif src.F == target.F:
        image_y = target.gen_y()
    else:
        image_y = target.constant(_integral_vector(target.unramified_image(src), target.prec))
    t = target.gen_t()
    integral = target.zero()
    for b in reversed(range(src.e)):
        column = [int(c) for c in x.coeffs[:, b]]
        value = target.from_int(column[0]) if image_y is None else _horner(column, image_y)
        integral = value if b == src.e - 1 else integral * t + value
    return LocalElem(target, integral.coeffs, integral.shift + x.shift,
                     x.shift + min(integral.prec, x.digits))


def congruent(x: LocalElem, y: LocalElem, absolute: int) -> bool:
    """x = y modulo p^absolute; the rings may differ only in working precision"""
    rx, ry = x.ring, y.ring
    if (rx.p, rx.F, rx.h) != (ry.p, ry.F, ry.h):
        raise ParameterError(f"cannot compare elements of {rx} and {ry}")
    if min(x.prec, y.prec) < absolute:
        raise PrecisionError(f"elements are known to p^{min(x.prec, y.prec)}, below p^{absolute}")
    p = rx.p
    s = min(x.shift, y.shift, absolute)
    diff = x.coeffs * p ** (x.shift - s) - y.coeffs * p ** (y.shift - s)
    modulus = p ** (absolute - s)
    return all(int(c) % modulus == 0 for c in diff.flat)


def different_valuation(ring: LocalRing) -> int:
    """v(h'(t)) for the Eisenstein part of the ring"""
    if ring.h == (0, 1):
        return 0
    deriv = [c * i for i, c in enumerate(ring.h)][1:]
    return _horner(deriv, ring.gen_t()).valuation()


@dataclass
class LocalAutomorphism:
    """sum C_b t^b -> sum sigma^j(C_b) T^b"""

    ring: LocalRing
    frob_power: int = 0
    t_image: Optional[LocalElem] = None
    label: Tuple[int, ...] = ()

    def apply(self, x: LocalElem) -> LocalElem:
        ring = self.ring
        if x.ring != ring:
            raise DomainError("automorphism applied to an element of another ring")
        if x.is_zero():
            return x
        y = ring.apply_sigma(x, self.frob_power)
        if self.t_image is None or ring.e == 1:
            return y
        integral = None
        for b in reversed(range(ring.e)):
            column = ring.constant(list(y.coeffs[:, b]), 0, y.digits)
            integral = column if integral is None else integral * self.t_image + column
        return LocalElem(ring, integral.coeffs, integral.shift + y.shift, integral.prec + y.shift)

    __call__ = apply


def relative_norm(x: LocalElem, automorphisms: Sequence[LocalAutomorphism]) -> LocalElem:
    result = x.ring.one()
    for a in automorphisms:
        result = result * a.apply(x)
    return result


@dataclass(frozen=True)
class LocalBase:
    """K: the unramified extension of Q_p of degree f"""

    p: int
    f: int = 1
    prec: int = DEFAULT_PRECISION
    guard: int = DEFAULT_GUARD

    def __post_init__(self):
        if not isprime(self.p) or self.p == 2:
            raise ParameterError(f"local constructions need an odd prime, got p={self.p}")
        if self.f < 1:
            raise ParameterError(f"unramified degree must be positive, got f={self.f}")
        if self.guard < 0 or self.prec <= self.guard:
            raise ParameterError(f"precision {self.prec} must exceed guard {self.guard}")

    @property
    def q(self) -> int:
        return self.p ** self.f

    @property
    def modulus(self) -> Tuple[int, ...]:
        return make_field(self.p, self.f).modulus

    @property
    def target_precision(self) -> int:
        return self.prec - self.guard

    def ring(self) -> LocalRing:
        return local_ring(self.p, self.f, (0, 1), self.prec)


@dataclass
class LocalExtension:
    """L/K with its ring presentation, Galois group and ramification data"""

    base: LocalBase
    kind: str
    ring: LocalRing
    e: int
    f_rel: int
    different: int
    group: Optional[AbelianGroup] = None
    automorphisms: List[LocalAutomorphism] = field(default_factory=list)
    valuation_scale: int = 1
    trace_index: int = 1
    parameters: Dict[str, Any] = field(default_factory=dict)

    @property
    def degree(self) -> int:
        return self.e * self.f_rel

    @property
    def inverse_different_root(self) -> int:
        """v_L(A_{L/K}) = -v_L(D_{L/K}) / 2"""
        if self.different % 2:
            raise ExistenceError(f"v_L(D) = {self.different} is odd", WEAK_RAMIFICATION_CRITERION)
        return -self.different // 2

    @property
    def coefficient_ring(self) -> LocalRing:
        return self.ring

    def conjugate(self, g: int, x: LocalElem) -> LocalElem:
        return self.automorphisms[g].apply(x)

    def trace(self, x: LocalElem) -> LocalElem:
        return subfield_trace(x, self.trace_index, self.base.f)

    def valuation(self, x: LocalElem) -> int:
        v = x.valuation()
        if v % self.valuation_scale:
            raise InternalError(f"ring valuation {v} is not a multiple of {self.valuation_scale}")
        return v // self.valuation_scale


def _eisenstein_binomial(d: int, p: int) -> Tuple[int, ...]:
    """t^d + p, so that t^d = tau = -p"""
    return (p,) + (0,) * (d - 1) + (1,)


def _check_tame_degree(base: LocalBase, d: int) -> None:
    if d < 1:
        raise ParameterError(f"degree must be positive, got {d}")
    if d % 2 == 0:
        raise ExistenceError(f"tame degree {d} is even", WEAK_RAMIFICATION_CRITERION)
    if (base.q - 1) % d:
        raise ParameterError(f"d={d} does not divide q-1={base.q - 1}: no Kummer extension")


def _root_of_unity(ring: LocalRing, base: LocalBase, d: int) -> LocalElem:
    residue_base = ring.residue_field.subfield(base.f)
    zeta = mult_generator(residue_base) ** ((base.q - 1) // d)
    return teichmuller(zeta, ring)


def build_extension(base: LocalBase, kind: str, parameter: Any = None) -> LocalExtension:
    """Descriptor of an unramified, tame, Eisenstein, wild or compositum extension of K"""
    p, f = base.p, base.f
    if kind == "unramified":
        d = int(parameter)
        if d < 1:
            raise ParameterError(f"degree must be positive, got {d}")
        ring = local_ring(p, f * d, (0, 1), base.prec)
        autos = [LocalAutomorphism(ring, f * k, None, (k,)) for k in range(d)]
        return LocalExtension(base, kind, ring, 1, d, 0, AbelianGroup([d]), autos,
                              parameters={"d": d})
    if kind == "tame":
        d = int(parameter)
        _check_tame_degree(base, d)
        ring = local_ring(p, f, _eisenstein_binomial(d, p), base.prec)
        omega = _root_of_unity(ring, base, d)
        t = ring.gen_t()
        autos = [LocalAutomorphism(ring, 0, omega ** k * t, (k,)) for k in range(d)]
        ext = LocalExtension(base, kind, ring, d, 1, d - 1, AbelianGroup([d]), autos,
                             parameters={"d": d})
        if different_valuation(ring) != d - 1:
            raise InternalError("tame different disagrees with Hilbert's formula")
        return ext
    if kind == "eisenstein":
        h = tuple(int(c) for c in parameter)
        ring = local_ring(p, f, h, base.prec)
        return LocalExtension(base, kind, ring, ring.e, 1, different_valuation(ring),
                              parameters={"h": list(h)})
    if kind == "compositum":
        d_un, d_tot = (int(v) for v in parameter)
        if d_un < 1:
            raise ParameterError(f"degree must be positive, got {d_un}")
        _check_tame_degree(base, d_tot)
        ring = local_ring(p, f * d_un, _eisenstein_binomial(d_tot, p), base.prec)
        omega = _root_of_unity(ring, base, d_tot)
        t = ring.gen_t()
        group = AbelianGroup([d_un, d_tot])
        autos = [LocalAutomorphism(ring, f * a, omega ** b * t, (a, b)) for a, b in group.elements()]
        return LocalExtension(base, kind, ring, d_tot, d_un, d_tot - 1, group, autos,
                              parameters={"d_un": d_un, "d_tot": d_tot})
    if kind == "wild":
        from lubin_tate import build_wild_extension
        return build_wild_extension(base)
    raise ParameterError(f"unknown extension kind {kind!r}")
