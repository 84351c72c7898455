#!/usr/bin/env python3
"""
Self-dual integral normal bases of the square root of the inverse different
Tame Kummer generators, unramified lifts, the Lubin-Tate wild case and
products and traces in compositum extensions, each checked to precision
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Union

from sympy import factorint

from errors import (
    WEAK_RAMIFICATION_CRITERION,
    ExistenceError,
    InternalError,
    ParameterError,
    PrecisionError,
    VerificationError,
)
from finite_field import embed
from group_algebra import (
    GroupAlgebraElem,
    group_act,
    hensel_sqrt,
    invert_unit,
    resolvend_gram,
    sqrt_modular_pgroup,
)
from lubin_tate import lubin_tate_data
from padic import LocalBase, LocalElem, LocalExtension, build_extension, embed_into
from sdnb_finite import SQRT_CONVENTION, construct_selfdual, semaev_eta

logger = logging.getLogger("sdnb_local")


@dataclass
class TracedExtension:
    """L = (L')^H for an extension L'/K and a subgroup H with L'/L unramified"""

    parent: LocalExtension
    subgroup: List[int]
    representatives: List[int]

    @property
    def base(self) -> LocalBase:
        return self.parent.base

    @property
    def kind(self) -> str:
        return "traced"

    @property
    def ring(self):
        return self.parent.ring

    @property
    def degree(self) -> int:
        return len(self.representatives)

    @property
    def e(self) -> int:
        return self.parent.e

    @property
    def f_rel(self) -> int:
        return self.degree // self.parent.e

    @property
    def different(self) -> int:
        return self.parent.different

    @property
    def inverse_different_root(self) -> int:
        return self.parent.inverse_different_root

    @property
    def parameters(self) -> Dict[str, Any]:
        params = dict(self.parent.parameters)
        params["subgroup"] = [list(self.parent.group.element(h)) for h in self.subgroup]
        return params

    def conjugate(self, k: int, x: LocalElem) -> LocalElem:
        return self.parent.conjugate(self.representatives[k], x)

    def trace(self, x: LocalElem) -> LocalElem:
        return self.parent.trace(x) / len(self.subgroup)

    def valuation(self, x: LocalElem) -> int:
        return self.parent.valuation(x)


Extension = Union[LocalExtension, TracedExtension]


@dataclass
class LocalGramReport:
    entries: List[LocalElem]
    failures: List[int]
    deviation: Optional[int]
    margin: int
    target: int

    @property
    def passed(self) -> bool:
        return not self.failures


def _group_size(extension: Extension) -> int:
    if isinstance(extension, TracedExtension):
        return extension.degree
    return extension.group.order


def verify_gram_local(x: LocalElem, extension: Extension) -> LocalGramReport:
    """Tr(x g(x)) against delta_{1,g} modulo p^(N - guard) for every g"""
    target = extension.base.target_precision
    entries, failures = [], []
    deviation = None
    margin = None
    for g in range(_group_size(extension)):
        value = extension.trace(x * extension.conjugate(g, x))
        entries.append(value)
        diff = value - (1 if g == 0 else 0)
        known = diff.prec
        margin = known - target if margin is None else min(margin, known - target)
        if not diff.is_zero():
            deviation = diff.shift if deviation is None else min(deviation, diff.shift)
        if diff.shift < target:
            failures.append(g)
    if margin < 0:
        logger.warning(f"Gram margin {margin} below the target p^{target}")
        raise PrecisionError(f"Gram entries are known to {margin + target} digits, "
                             f"below the target {target}; rerun with a larger precision")
    if failures:
        logger.debug(f"local Gram check failed at {failures}, deviation p^{deviation}")
    return LocalGramReport(entries, failures, deviation, margin, target)


@dataclass
class SelfDualCertificateLocal:
    extension: Extension
    generator: LocalElem
    valuation: int
    expected_valuation: int
    gram: LocalGramReport
    route: str
    notes: Dict[str, Any] = field(default_factory=dict)
    conventions: List[str] = field(default_factory=list)
    alternates: Dict[str, LocalElem] = field(default_factory=dict)

    @property
    def base(self) -> LocalBase:
        return self.extension.base

    @property
    def passed(self) -> bool:
        return self.gram.passed and self.valuation == self.expected_valuation


def _certify_local(extension: Extension, x: LocalElem, route: str,
                   notes: Optional[Dict[str, Any]] = None,
                   conventions: Optional[List[str]] = None) -> SelfDualCertificateLocal:
    expected = extension.inverse_different_root
    valuation = extension.valuation(x)
    report = verify_gram_local(x, extension)
    cert = SelfDualCertificateLocal(extension, x, valuation, expected, report, route,
                                    notes or {}, conventions or [])
    if valuation != expected:
        raise VerificationError(f"{route}: v_L(x) = {valuation}, expected {expected}")
    if not report.passed:
        raise VerificationError(f"{route}: Gram row differs from the identity at {report.failures}")
    logger.debug(f"{route}: certificate passes with margin {report.margin}")
    return cert


def _normalise(x: LocalElem, extension: LocalExtension, seed: GroupAlgebraElem) -> LocalElem:
    """w^-1 o x with w^2 = R(x) lifted from the residue seed"""
    r = resolvend_gram(x, extension)
    ring = extension.coefficient_ring
    w = hensel_sqrt(r, seed.map_coefficients(ring.lift, ring))
    if not w.is_j_fixed():
        raise InternalError("Hensel square root is not fixed by the involution")
    return group_act(invert_unit(w), x, extension)


def _residue_algebra(a: GroupAlgebraElem) -> GroupAlgebraElem:
    return a.map_coefficients(a.ring.residue, a.ring.residue_field)


def _unipotent_seed(extension: LocalExtension, x: LocalElem) -> GroupAlgebraElem:
    """sqrt of R(x) mod p in the residue group algebra, augmentation root Tr(x)"""
    ring = extension.coefficient_ring
    residue_r = _residue_algebra(resolvend_gram(x, extension))
    residue_base = ring.residue_field.subfield(extension.base.f)
    c_root = ring.residue(extension.trace(x))
    return sqrt_modular_pgroup(residue_r, residue_base, c_root)


def tame_generator(base: LocalBase, d: int) -> SelfDualCertificateLocal:
    """x = (1 - tau) / d * (1 - t)^-1 * t^((1-d)/2) with t^d = tau = -p"""
    ext = build_extension(base, "tame", d)
    ring = ext.ring
    tau = -base.p
    t = ring.gen_t()
    t_inv = t ** (d - 1) / tau
    x = (1 - t).inverse() * (1 - tau) / d * t_inv ** ((d - 1) // 2)
    logger.debug(f"tame generator for d={d}: v_L(x) = {ext.valuation(x)}")
    return _certify_local(ext, x, "tame")


def _p_power_exponent(d: int, p: int) -> Optional[int]:
    k = 0
    while d % p == 0:
        d //= p
        k += 1
    return k if d == 1 else None


def unram_generator(base: LocalBase, d: int) -> SelfDualCertificateLocal:
    """Lift of a residue normal or self-dual generator, renormalised by a Hensel square root"""
    if d % 2 == 0:
        raise ExistenceError(f"unramified degree {d} is even", WEAK_RAMIFICATION_CRITERION)
    ext = build_extension(base, "unramified", d)
    ring = ext.ring
    if d == 1:
        return _certify_local(ext, ring.one(), "unram-trivial")
    residue = ring.residue_field
    k = _p_power_exponent(d, base.p)
    if k is not None:
        state = semaev_eta(residue.subfield(base.f), k)
        x = ring.lift(state.eta)
        seed = _unipotent_seed(ext, x)
        return _certify_local(ext, _normalise(x, ext, seed), "unram-p")
    cert = construct_selfdual(base.p, base.f, d)
    eta = embed(cert.generator, residue)
    x = ring.lift(eta)
    seed = GroupAlgebraElem.one(ext.group, residue)
    route = "unram-pprime" if len(factorint(d)) == 1 else "unram-composite"
    return _certify_local(ext, _normalise(x, ext, seed), route,
                          {"residue_route": cert.route}, cert.conventions)


def wild_generator(base: LocalBase, trace_to: Optional[int] = None) -> SelfDualCertificateLocal:
    """Self-dual normalisation of x = alpha^(q-1)/p in M/K, M the degree-q subfield of K_{p,2}

    With q = p the fixed field L equals M, so the direct and traced variants
    coincide by construction; the traced one is stored as an alternate.
    """
    if base.f != 1:
        raise ParameterError("the wild construction is only implemented for q = p")
    if trace_to not in (None, 1):
        raise ParameterError("for q = p the only admissible subgroup H is trivial (L = M)")
    ext = build_extension(base, "wild")
    ltd = lubin_tate_data(base)
    q = ltd.q
    x = ltd.alpha ** (q - 1) / base.p
    if not ltd.in_fixed_field(x):
        raise InternalError("alpha^(q-1)/p is not fixed by the torsion automorphisms")

    norm = ltd.alpha_norm_to_fixed_field()
    expected_norm = -(ltd.alpha ** (q - 1))
    if norm.valuation() != expected_norm.valuation() or norm != expected_norm:
        raise VerificationError("N(alpha) to M differs from -alpha^(q-1)")

    # L = M for q = p: the trace to L is the identity, so the traced
    # normalisation is the direct one and is recorded without recomputation
    first = _normalise(x, ext, _unipotent_seed(ext, x))
    notes = {
        "variants_coincide": True,
        "alpha_norm_valuation": norm.valuation(),
        "series_degree": ltd.degree_bound,
    }
    cert = _certify_local(ext, first, "wild-direct", notes, [SQRT_CONVENTION])
    cert.alternates["wild-traced"] = first
    return cert


def _embedded_generator(cert: SelfDualCertificateLocal, target: LocalExtension) -> LocalElem:
    return embed_into(cert.generator, target.ring)


def compose_and_trace(cert_un: SelfDualCertificateLocal, cert_tot: SelfDualCertificateLocal,
                      generators: Sequence[Sequence[int]] = ()) -> SelfDualCertificateLocal:
    """Tr_{L'/L}(x_un x_tot) for L' the compositum and L = (L')^H"""
    un, tot = cert_un.extension, cert_tot.extension
    if not isinstance(un, LocalExtension) or un.kind != "unramified":
        raise ParameterError("first certificate must be over an unramified extension")
    if not isinstance(tot, LocalExtension) or tot.kind != "tame":
        raise ParameterError("second certificate must be over a tame totally ramified extension")
    if un.base != tot.base:
        raise ParameterError("certificates are over different base fields")
    d_un, d_tot = un.f_rel, tot.e
    ext = build_extension(un.base, "compositum", (d_un, d_tot))
    y = _embedded_generator(cert_un, ext) * _embedded_generator(cert_tot, ext)
    group = ext.group
    subgroup = group.subgroup(generators)
    if len(subgroup) == group.order and group.order > 1:
        raise ParameterError("H is the whole group: the trace lands in K")
    for h in subgroup:
        a, b = group.element(h)
        if h and a == 0:
            raise ParameterError(f"H meets the inertia subgroup at {(a, b)}")
    if len(subgroup) == 1:
        return _certify_local(ext, y, "compositum", {"d_un": d_un, "d_tot": d_tot},
                              sorted(set(cert_un.conventions) | set(cert_tot.conventions)))
    z = ext.conjugate(subgroup[0], y)
    for h in subgroup[1:]:
        z = z + ext.conjugate(h, y)
    traced = TracedExtension(ext, subgroup, group.coset_representatives(subgroup))
    logger.debug(f"trace-down over H of order {len(subgroup)}: degree {traced.degree}")
    return _certify_local(traced, z, "trace-down",
                          {"d_un": d_un, "d_tot": d_tot, "subgroup_order": len(subgroup)},
                          sorted(set(cert_un.conventions) | set(cert_tot.conventions)))
