#!/usr/bin/env python3
"""
Self-dual normal basis generators for finite field extensions
Semaev towers for p-power degrees, character decompositions for odd
prime powers prime to p, the characteristic 2 cases, and an exhaustive
oracle for tiny fields
"""

import logging
from dataclasses import dataclass, field
from math import lcm
from typing import Any, Dict, Iterator, List, Optional

from sympy import factorint, isprime, n_order

from errors import (
    EXPONENT_FOUR_CRITERION,
    ODD_DEGREE_CRITERION,
    DomainError,
    ExistenceError,
    InternalError,
    ParameterError,
    VerificationError,
)
from finite_field import (
    FqElem,
    FqPoly,
    Subfield,
    discrete_log,
    find_root,
    is_normal,
    is_square,
    make_field,
    minimal_polynomial,
    mult_generator,
    rel_trace,
    roots_in,
    sqrt_ff,
)
from group_algebra import (
    AbelianGroup,
    CharData,
    GroupAlgebraElem,
    char_decompose,
    char_recompose,
    group_act,
    invert_unit,
    resolvend_gram,
    sqrt_modular_pgroup,
)

logger = logging.getLogger("sdnb_finite")

BRUTE_FORCE_LIMIT = 3 ** 5

SQRT_CONVENTION = "square roots take the lexicographically smaller branch"
ROOT_CONVENTION = "polynomial roots are the lexicographically least root in the target field"
CONSTANT_CONVENTION = ("the constant term of xi is the lexicographically least element of F_q1 "
                       "with nonzero trace to F_q, paired with the least theta giving a normal trace")


class FiniteExtension:
    """F_{Q^n} / F_Q inside a universe field, Galois group C_n generated by x -> x^Q"""

    def __init__(self, base: Subfield, n: int):
        if n < 1:
            raise ParameterError(f"extension degree must be positive, got {n}")
        if base.field.degree % (base.degree * n):
            raise ParameterError(f"universe of degree {base.field.degree} cannot hold a degree-{n} extension of {base}")
        self.base = base
        self.n = n
        self.group = AbelianGroup([n])
        self.top = base.field.subfield(base.degree * n)

    @property
    def coefficient_ring(self):
        return self.base.field

    def conjugate(self, g: int, x: FqElem) -> FqElem:
        return x.frobenius(self.base.degree * g)

    def trace(self, x: FqElem) -> FqElem:
        return rel_trace(x, self.base.size, self.n)


@dataclass
class GramReport:
    entries: List[FqElem]
    failures: List[int]

    @property
    def passed(self) -> bool:
        return not self.failures


def verify_gram_ff(x: FqElem, extension: FiniteExtension) -> GramReport:
    """Tr(x * x^(Q^i)) against delta_{0,i}; the full Gram matrix is G-invariant"""
    entries = []
    failures = []
    for g in range(extension.n):
        value = extension.trace(x * extension.conjugate(g, x))
        entries.append(value)
        expected = 1 if g == 0 else 0
        if value != expected:
            failures.append(g)
    if failures:
        logger.debug(f"Gram check failed at indices {failures}")
    return GramReport(entries, failures)


@dataclass
class SelfDualCertificateFF:
    """A generator with its Gram row and normality flag"""

    base: Subfield
    n: int
    generator: FqElem
    gram: GramReport
    normal: bool
    route: str
    parts: List[Dict[str, Any]] = field(default_factory=list)
    conventions: List[str] = field(default_factory=list)

    @property
    def p(self) -> int:
        return self.base.p

    @property
    def q(self) -> int:
        return self.base.size

    @property
    def m(self) -> int:
        return self.base.degree

    @property
    def universe(self):
        return self.base.field

    @property
    def passed(self) -> bool:
        return self.gram.passed and self.normal


def _certify(base: Subfield, n: int, x: FqElem, route: str,
             parts: Optional[List[Dict[str, Any]]] = None,
             conventions: Optional[List[str]] = None) -> SelfDualCertificateFF:
    ext = FiniteExtension(base, n)
    ext.top.require(x, "generator")
    report = verify_gram_ff(x, ext)
    normal = is_normal(x, base, n)
    cert = SelfDualCertificateFF(base, n, x, report, normal, route, parts or [], conventions or [])
    if not report.passed:
        raise VerificationError(f"{route}: Gram row differs from the identity at {report.failures}")
    if not normal:
        raise VerificationError(f"{route}: generator is not normal")
    return cert


def check_existence_ff(p: int, n: int) -> None:
    """Raise ExistenceError when F_{q^n}/F_q has no self-dual normal basis"""
    if n < 1:
        raise ParameterError(f"extension degree must be positive, got {n}")
    if p == 2:
        if n % 4 == 0:
            raise ExistenceError(f"degree {n} is divisible by 4", EXPONENT_FOUR_CRITERION)
    elif n % 2 == 0:
        raise ExistenceError(f"degree {n} is even", ODD_DEGREE_CRITERION)


def universe_degree(p: int, m: int, n: int) -> int:
    """Degree over F_p of a field holding every tower used for F_{p^(mn)}/F_{p^m}"""
    q = p ** m
    degree = m * n
    for r, i in factorint(n).items():
        if r != p:
            degree = lcm(degree, m * n_order(q, r) * r ** i)
    return degree


def base_subfield(p: int, m: int, n: int) -> Subfield:
    """F_{p^m} inside a universe large enough for the degree-n constructions"""
    if not isprime(p):
        raise ParameterError(f"characteristic {p} is not prime")
    if m < 1:
        raise ParameterError(f"base degree must be positive, got {m}")
    universe = make_field(p, universe_degree(p, m, n))
    logger.debug(f"universe for p={p} m={m} n={n}: degree {universe.degree}")
    return universe.subfield(m)


# ---------------------------------------------------------------------------
# p-power degrees: Semaev towers
# ---------------------------------------------------------------------------

@dataclass
class SemaevState:
    base: Subfield
    step: int
    eta: FqElem
    poly: Optional[FqPoly]
    eta0: FqElem
    tower: List[FqElem] = field(default_factory=list)


def _p_part(n: int, p: int):
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k, n


def _semaev_poly(eta: FqElem) -> FqPoly:
    """X^p - eta X^(p-1) + eta^(2p-1)"""
    p = eta.field.p
    one, zero = eta.field.one(), eta.field.zero()
    coeffs = [zero] * (p + 1)
    coeffs[0] = eta ** (2 * p - 1)
    coeffs[p - 1] = coeffs[p - 1] - eta
    coeffs[p] = one
    return FqPoly(eta.field, coeffs)


def semaev_eta(base: Subfield, n: int) -> SemaevState:
    """Normal basis generator of F_{q^(p^n)} over F_q from the Semaev tower"""
    p, m = base.p, base.degree
    universe = base.field
    if n < 0:
        raise ParameterError(f"tower height must be non-negative, got {n}")
    if universe.degree % (m * p ** n):
        raise ParameterError(f"universe of degree {universe.degree} lacks the degree-{m * p ** n} tower")

    a, _ = _p_part(m, p)
    if a == 0:
        eta0 = universe.one()
    else:
        # bootstrap from the p-power subfield F' of F_q
        eta0 = semaev_eta(universe.prime_subfield(), a).eta
    if rel_trace(eta0, p, m).is_zero():
        raise InternalError("starting element has zero trace to F_p")

    eta = eta0
    poly = None
    tower = [eta0]
    for i in range(1, n + 1):
        level = universe.subfield(m * p ** (i - 1))
        poly = _semaev_poly(eta)
        if roots_in(poly, level):
            raise InternalError(f"Semaev polynomial at step {i} has a root one level down")
        nxt = find_root(poly, universe.subfield(m * p ** i))
        if rel_trace(nxt, level.size, p) != eta:
            raise InternalError(f"trace of eta_{i} one level down is not eta_{i - 1}")
        if rel_trace(nxt, base.size, p ** i).is_zero():
            raise InternalError(f"trace of eta_{i} to F_q vanishes")
        logger.debug(f"Semaev step {i}: eta = {nxt}")
        eta = nxt
        tower.append(eta)
    return SemaevState(base, n, eta, poly, eta0, tower)


def semaev_minimal_polynomial(state: SemaevState) -> FqPoly:
    """prod_{j < p^(n-1)} f_n^(q^j), the minimal polynomial of eta_n over F_q"""
    if state.step == 0:
        return minimal_polynomial(state.eta, state.base)
    p, m = state.base.p, state.base.degree
    result = FqPoly(state.eta.field, [state.eta.field.one()])
    for j in range(p ** (state.step - 1)):
        result = result * state.poly.frobenius_coefficients(m * j)
    return result


def selfdual_p_power(base: Subfield, n: int) -> SelfDualCertificateFF:
    """1/sqrt(R(eta)) o eta for the Semaev generator of F_{q^(p^n)}"""
    if base.p == 2:
        raise DomainError("characteristic 2 goes through selfdual_char2")
    state = semaev_eta(base, n)
    ext = FiniteExtension(base, base.p ** n)
    r = resolvend_gram(state.eta, ext)
    trace = ext.trace(state.eta)
    w = sqrt_modular_pgroup(r, base, c_root=trace)
    x = group_act(invert_unit(w), state.eta, ext)
    logger.debug(f"p-power part of degree {ext.n}: generator {x}")
    return _certify(base, ext.n, x, "ff-p-power",
                    [{"kind": "p-power", "degree": ext.n}], [ROOT_CONVENTION])


# ---------------------------------------------------------------------------
# Odd prime power degrees prime to p
# ---------------------------------------------------------------------------

@dataclass
class PPrimeState:
    base: Subfield
    d: int
    v: int
    q1: int
    zeta: FqElem
    theta: FqElem
    representatives: List[int]
    xi: FqElem
    eta: FqElem
    constant: FqElem
    theta_index: int = 0

    @property
    def adjusted(self) -> bool:
        """True when xi departs from the sum of theta^s over all representatives"""
        return not self.constant.is_one() or self.theta_index > 0


def _constant_terms(small: Subfield, base: Subfield, v: int) -> Iterator[FqElem]:
    """1 first when Tr(1) = v is nonzero in F_q, then the rest of F_q1 with nonzero trace, lex order"""
    one = small.field.one()
    if v % small.p:
        yield one
    for c in small.nonzero_elements():
        if not c.is_one() and not rel_trace(c, base.size, v).is_zero():
            yield c


def _orbit_representatives(d: int, multiplier: int) -> List[int]:
    reps, seen = [], set()
    for s in range(d):
        if s in seen:
            continue
        reps.append(s)
        t = s
        while t not in seen:
            seen.add(t)
            t = t * multiplier % d
    return reps


def pprime_eta(base: Subfield, r: int, i: int) -> PPrimeState:
    """Tr_{F_{q1^d}/F_{q^d}}(sum_{s in S_q1} theta^s) with theta^d a generator of F_q1"""
    p = base.p
    if r == p or r == 2 or not isprime(r):
        raise ParameterError(f"r={r} must be an odd prime different from p={p}")
    if i < 1:
        raise ParameterError(f"exponent must be positive, got {i}")
    d = r ** i
    q, m = base.size, base.degree
    v = n_order(q, r)
    q1 = q ** v
    universe = base.field
    if universe.degree % (m * v * d):
        raise ParameterError(f"universe of degree {universe.degree} lacks F_(q1^d) of degree {m * v * d}")
    small = universe.subfield(m * v)
    big = universe.subfield(m * v * d)

    zeta = mult_generator(small)
    c = mult_generator(big)
    theta0 = c ** ((big.size - 1) // (d * (q1 - 1)))
    k = discrete_log(zeta, theta0 ** d, q1 - 1)
    omega = c ** ((big.size - 1) // d)
    roots = []
    candidate = theta0 ** k
    for _ in range(d):
        roots.append(candidate)
        candidate = candidate * omega
    roots.sort(key=lambda e: e.key())
    if roots[0] ** d != zeta:
        raise InternalError("theta is not a root of X^d - zeta")

    reps = _orbit_representatives(d, q1)
    # Tr(1) = v vanishes when p | v, so the constant orbit may need another coefficient
    for constant in _constant_terms(small, base, v):
        for index, theta in enumerate(roots):
            xi = constant
            for s in reps:
                if s:
                    xi = xi + theta ** s
            eta = rel_trace(xi, q ** d, v)
            if is_normal(eta, base, d):
                logger.debug(f"p' generator d={d}: v={v}, q1={q1}, |S_q1|={len(reps)}, constant {constant}")
                return PPrimeState(base, d, v, q1, zeta, theta, reps, xi, eta, constant, index)
    raise InternalError(f"no trace of a theta-sum is normal for d={d}")


@dataclass
class VsVector:
    values: Dict[int, FqElem]
    cases: Dict[int, str]
    n: Optional[int] = None


def _least_negative_square(p: int) -> int:
    prime = make_field(p, 1)
    return next(k for k in range(1, p) if is_square(prime.from_int(-k)))


def pprime_vs(r: GroupAlgebraElem, cd: CharData, v0: Optional[FqElem] = None) -> VsVector:
    """Components v_s with v_s J(v_s) = chi_s(R) for every orbit representative s"""
    values = char_decompose(r, cd)
    if any(a.is_zero() for a in values.values()):
        raise DomainError("a character value of R vanishes: R is not a unit")
    universe = cd.field
    out: Dict[int, FqElem] = {}
    cases: Dict[int, str] = {}
    n_used = None
    for s in cd.representatives:
        a = values[s]
        partner = cd.partner[s]
        if s == 0:
            out[s] = v0 if v0 is not None else sqrt_ff(a, cd.base)
            cases[s] = "zero"
        elif partner != s:
            if s < partner:
                out[s], out[partner] = a, universe.one()
                cases[s] = cases[partner] = "paired"
            continue
        else:
            fixed = cd.fixed_field[s]
            full = cd.value_field[s]
            fixed.require(a, f"chi_{s}(R)")
            if universe.p == 2 or is_square(a, fixed):
                out[s] = sqrt_ff(a, fixed)
                cases[s] = "fixed-case-1"
            elif not is_square(-a, fixed):
                out[s] = sqrt_ff(-a, full)
                cases[s] = "fixed-case-2"
            else:
                n_used = _least_negative_square(universe.p)
                if n_used == 1:
                    raise InternalError("-a is a square while -1 is a square in F_p")
                prime = universe.prime_subfield()
                root_n1 = sqrt_ff(universe.from_int(n_used - 1), prime)
                root_mn = sqrt_ff(universe.from_int(-n_used), prime)
                out[s] = (root_n1 * sqrt_ff(a, full) + sqrt_ff(-a, fixed)) / root_mn
                cases[s] = "fixed-case-3"
        if s == 0 or partner == s:
            image = out[s] if s == 0 else cd.involution_image(s, out[s])
            if out[s] * image != a:
                raise InternalError(f"v_s J(v_s) differs from chi_s(R) at s={s} ({cases[s]})")
    return VsVector(out, cases, n_used)


def selfdual_pprime(base: Subfield, r: int, i: int) -> SelfDualCertificateFF:
    """v^-1 o eta with v J(v) = R(eta), v assembled from its character components"""
    state = pprime_eta(base, r, i)
    ext = FiniteExtension(base, state.d)
    resolvend = resolvend_gram(state.eta, ext)
    cd = CharData(state.d, base)
    vs = pprime_vs(resolvend, cd, v0=ext.trace(state.eta))
    v = char_recompose(vs.values, cd)
    if v * v.involution() != resolvend:
        raise InternalError("v J(v) differs from R(eta)")
    x = group_act(invert_unit(v, cd), state.eta, ext)
    logger.debug(f"p' part d={state.d}: cases {sorted(set(vs.cases.values()))}")
    conventions = [ROOT_CONVENTION]
    if any(c.startswith("fixed-case") for c in vs.cases.values()):
        conventions.append(SQRT_CONVENTION)
    if state.adjusted:
        conventions.append(CONSTANT_CONVENTION)
    part = {"kind": "p-prime", "degree": state.d, "r": r, "v": state.v,
            "cases": sorted(set(vs.cases.values())), "constant_adjusted": state.adjusted}
    return _certify(base, state.d, x, "ff-p-prime", [part], conventions)


# ---------------------------------------------------------------------------
# Characteristic 2 and composite degrees
# ---------------------------------------------------------------------------

def _trace_one_element(base: Subfield) -> FqElem:
    """Lexicographically least xi in F_{q^2} with Tr(xi) = 1"""
    quadratic = base.field.subfield(2 * base.degree)
    for xi in quadratic.nonzero_elements():
        if rel_trace(xi, base.size, 2).is_one():
            return xi
    raise InternalError("no element of trace 1 in the quadratic extension")


def _odd_parts(base: Subfield, n: int) -> List[SelfDualCertificateFF]:
    parts = []
    for r, i in sorted(factorint(n).items()):
        if r == base.p:
            parts.append(selfdual_p_power(base, i))
        else:
            parts.append(selfdual_pprime(base, r, i))
    return parts


def _combine(base: Subfield, n: int, parts: List[SelfDualCertificateFF], route: str,
             extra: Optional[List[Dict[str, Any]]] = None, factor: Optional[FqElem] = None) -> SelfDualCertificateFF:
    x = base.field.one() if factor is None else factor
    details = list(extra or [])
    conventions = {ROOT_CONVENTION}
    for part in parts:
        x = x * part.generator
        details.extend(part.parts)
        conventions.update(part.conventions)
    return _certify(base, n, x, route, details, sorted(conventions))


def selfdual_char2(base: Subfield, n: int) -> SelfDualCertificateFF:
    """Characteristic 2: a trace-one quadratic element times the odd-degree parts"""
    if base.p != 2:
        raise DomainError(f"selfdual_char2 needs characteristic 2, got p={base.p}")
    check_existence_ff(2, n)
    even = n % 2 == 0
    odd = n // 2 if even else n
    parts = _odd_parts(base, odd)
    extra = []
    xi = None
    if even:
        xi = _trace_one_element(base)
        extra.append({"kind": "quadratic", "degree": 2})
        logger.debug(f"quadratic part: xi = {xi}")
    return _combine(base, n, parts, "ff-char2", extra, xi)


def construct_selfdual(p: int, m: int, n: int) -> SelfDualCertificateFF:
    """Self-dual normal basis generator of F_{p^(mn)} over F_{p^m}"""
    if not isprime(p):
        raise ParameterError(f"characteristic {p} is not prime")
    check_existence_ff(p, n)
    base = base_subfield(p, m, n)
    if n == 1:
        return _certify(base, 1, base.field.one(), "ff-trivial")
    if p == 2:
        return selfdual_char2(base, n)
    parts = _odd_parts(base, n)
    if len(parts) == 1:
        return parts[0]
    return _combine(base, n, parts, "ff-product")


def brute_force_selfdual(p: int, m: int) -> List[FqElem]:
    """Every self-dual element of F_{p^m} over F_p, by exhaustion"""
    if not isprime(p):
        raise ParameterError(f"characteristic {p} is not prime")
    if m < 1 or p ** m > BRUTE_FORCE_LIMIT:
        raise ParameterError(f"exhaustive search is limited to fields of at most {BRUTE_FORCE_LIMIT} elements")
    universe = make_field(p, m)
    base = universe.prime_subfield()
    ext = FiniteExtension(base, m)
    found = []
    for x in universe.elements():
        if verify_gram_ff(x, ext).passed:
            if not is_normal(x, base, m):
                raise InternalError(f"self-dual element {x} is not normal")
            found.append(x)
    logger.debug(f"oracle F_{p}^{m}: {len(found)} self-dual elements")
    return found
