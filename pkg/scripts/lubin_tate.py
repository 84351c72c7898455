#!/usr/bin/env python3
"""
Lubin-Tate data for f(X) = X^p + pX over Q_p
Builds the second division field as Z_p[t]/(g), g = (X^p + pX)^(p-1) + p,
the endomorphism series [u]_f, and the Galois conjugates of its uniformiser
"""

import logging
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

import numpy as np
from sympy import Poly, symbols

from errors import DomainError, InternalError, ParameterError
from finite_field import mult_generator
from group_algebra import AbelianGroup
from padic import (
    LocalAutomorphism,
    LocalBase,
    LocalElem,
    LocalExtension,
    LocalRing,
    different_valuation,
    hensel_root,
    local_ring,
    relative_norm,
    teichmuller,
)

logger = logging.getLogger("lubin_tate")


def _truncated_mul(a: np.ndarray, b: np.ndarray, modulus: int) -> np.ndarray:
    """Product of power series truncated to the common length"""
    length = len(a)
    out = np.zeros(length, dtype=object)
    for i in np.nonzero(a)[0]:
        out[i:] += a[i] * b[: length - i]
    return out % modulus


class LubinTateData:
    """Division field K_{p,2} for K = Q_p and its Galois action"""

    def __init__(self, base: LocalBase):
        if base.f != 1:
            raise ParameterError(f"Lubin-Tate data is only built for q = p, got f={base.f}")
        p = base.p
        self.base = base
        self.p = p
        self.q = p
        x = symbols("X")
        g = Poly((x ** p + p * x) ** (p - 1) + p, x)
        self.g: Tuple[int, ...] = tuple(int(c) for c in reversed(g.all_coeffs()))
        self.ring: LocalRing = local_ring(p, 1, self.g, base.prec)
        self.alpha = self.ring.gen_t()
        # discarded terms c_k alpha^k, k > D, then sit above v(g'(alpha)) and Newton recovers the root
        self.degree_bound = 2 * self.q ** 2 - 3 * self.q + 2
        self.work_digits = base.prec + self.degree_bound + 2
        self._modulus = p ** self.work_digits
        self._series: Dict[int, List[int]] = {}
        self._f_powers = self._powers_of_f()
        self._conjugates = None
        self._torsion = None
        logger.debug(f"Lubin-Tate ring for p={p}: degree {len(self.g) - 1}, series degree {self.degree_bound}")

    def _powers_of_f(self) -> List[np.ndarray]:
        length = self.degree_bound + 1
        f = np.zeros(length, dtype=object)
        f[1] = self.p
        if self.p < length:
            f[self.p] += 1
        powers = [None, f]
        for _ in range(2, length):
            powers.append(_truncated_mul(powers[-1], f, self._modulus))
        return powers

    def series(self, u: int, degree: Optional[int] = None) -> List[int]:
        """Coefficients c_0..c_deg of [u]_f, reduced modulo p^work_digits"""
        degree = self.degree_bound if degree is None else degree
        if degree < 1 or degree > self.degree_bound:
            raise ParameterError(f"series degree must lie in 1..{self.degree_bound}")
        key = u % self._modulus
        if key not in self._series:
            self._series[key] = self._build_series(key)
        return self._series[key][: degree + 1]

    def _build_series(self, u: int) -> List[int]:
        p, mod = self.p, self._modulus
        length = self.degree_bound + 1
        coeffs = np.zeros(length, dtype=object)
        coeffs[1] = u
        for k in range(1, self.degree_bound):
            power = coeffs
            for _ in range(p - 1):
                power = _truncated_mul(power, coeffs, mod)
            lhs = (power + p * coeffs) % mod
            rhs = np.zeros(length, dtype=object)
            for i in range(1, k + 1):
                if coeffs[i]:
                    rhs = rhs + coeffs[i] * self._f_powers[i]
            numerator = int((lhs[k + 1] - rhs[k + 1]) % mod)
            if numerator % p:
                raise InternalError(f"series coefficient {k + 1} of [{u}]_f is not integral")
            coeffs[k + 1] = numerator // p * pow(p ** k - 1, -1, mod) % mod
        logger.debug(f"series [{u}]_f built to degree {self.degree_bound}")
        return [int(c) for c in coeffs]

    def check_commutes(self, u: int, degree: int) -> bool:
        """f o [u]_f == [u]_f o f modulo X^(degree+1)"""
        mod = self._modulus // self.p ** (degree + 1)
        coeffs = np.array(self.series(u), dtype=object)
        length = len(coeffs)
        power = coeffs
        for _ in range(self.p - 1):
            power = _truncated_mul(power, coeffs, self._modulus)
        lhs = (power + self.p * coeffs) % self._modulus
        rhs = np.zeros(length, dtype=object)
        for i in range(1, length):
            if coeffs[i]:
                rhs = rhs + coeffs[i] * self._f_powers[i]
        return all((lhs[k] - rhs[k]) % mod == 0 for k in range(degree + 1))

    def evaluate(self, coeffs: List[int], x: LocalElem) -> LocalElem:
        acc = self.ring.zero()
        for c in reversed(coeffs):
            acc = acc * x + c
        return acc

    def endomorphism_image(self, u: int) -> LocalElem:
        """[u]_f(alpha), refined to a root of g"""
        approx = self.evaluate(self.series(u), self.alpha)
        return hensel_root(list(self.g), approx)

    def gamma_conjugates(self) -> List[LocalElem]:
        """[(1+p)^j mod p^2]_f(alpha) for j < p"""
        if self._conjugates is None:
            p = self.p
            self._conjugates = [self.endomorphism_image(pow(1 + p, j, p * p)) for j in range(p)]
        return self._conjugates

    def torsion_automorphisms(self) -> List[LocalAutomorphism]:
        """t -> omega t for the (q-1)-th roots of unity omega; they fix M"""
        if self._torsion is None:
            gen = mult_generator(self.ring.residue_field)
            self._torsion = []
            for k in range(self.q - 1):
                omega = teichmuller(gen ** k, self.ring)
                self._torsion.append(LocalAutomorphism(self.ring, 0, omega * self.alpha, (k,)))
        return self._torsion

    def is_root_of_g(self, beta: LocalElem) -> bool:
        """g(beta) = 0 modulo p^(N - guard)"""
        value = self.evaluate(list(self.g), beta)
        return value.shift >= self.base.target_precision

    def in_fixed_field(self, x: LocalElem) -> bool:
        """x lies in M when every torsion automorphism fixes it"""
        return all(a.apply(x) == x for a in self.torsion_automorphisms())

    def alpha_norm_to_fixed_field(self) -> LocalElem:
        return relative_norm(self.alpha, self.torsion_automorphisms())


@lru_cache(maxsize=None)
def lubin_tate_data(base: LocalBase) -> LubinTateData:
    return LubinTateData(base)


def lubin_tate_series(u: int, ltd: LubinTateData, degree: int) -> List[int]:
    """[u]_f truncated after X^degree, with its commutation checked"""
    coeffs = ltd.series(u, degree)
    if coeffs[1] % ltd.p ** ltd.base.prec != u % ltd.p ** ltd.base.prec:
        raise InternalError(f"[{u}]_f does not start with {u}X")
    if not ltd.check_commutes(u, degree):
        raise InternalError(f"[{u}]_f does not commute with f to degree {degree}")
    return coeffs


def build_wild_extension(base: LocalBase) -> LocalExtension:
    """M/K of degree q inside K_{p,2}, with Galois group generated by [1+p]_f"""
    ltd = lubin_tate_data(base)
    q = ltd.q
    expected = (q - 2) + (q - 1) * 2 * (q - 1)
    if different_valuation(ltd.ring) != expected:
        raise InternalError(f"different of K_(p,2)/K is not {expected}")
    for beta in ltd.gamma_conjugates():
        if not ltd.is_root_of_g(beta):
            raise DomainError("a computed conjugate is not a root of g")
    autos = [LocalAutomorphism(ltd.ring, 0, beta, (j,)) for j, beta in enumerate(ltd.gamma_conjugates())]
    return LocalExtension(
        base, "wild", ltd.ring, q, 1, 2 * (q - 1), AbelianGroup([q]), autos,
        valuation_scale=q - 1, trace_index=q - 1,
        parameters={"g": list(ltd.g), "gamma_generator": 1 + ltd.p, "series_degree": ltd.degree_bound},
    )
