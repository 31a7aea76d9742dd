"""
Independent re-check of certificates written by ``approx``.

Only the exact arithmetic, the torus layer and (for Spin pairs) the Clifford
product are used here. Nothing from the constructions package is imported, so a
certificate that passes has been checked by a second code path.
"""

import logging
from typing import Any, Dict, List, Mapping, Optional, Set

from ..errors import SpinLabError
from ..schemas.report_schemas import VerificationResult
from ..algebra.arith import OIdeal, factor, mod_rational, parse_rational
from ..algebra.clifford import Multivector, QuadForm, gp, reverse
from ..algebra.tori import (
    SPLIT,
    TorusElem,
    Trivialization,
    is_integral_at,
    is_unit_in_order,
    rho_apply,
    splitting_type,
    support,
)

# Set up logger
logger = logging.getLogger(__name__)

# Torus name -> support key, per certificate kind
SUPPORT_KEYS = {
    "unit": {"z": "R"},
    "pair": {"z1": "R1", "z2": "R2"},
}


class _Checks:
    """Running tally of named checks."""

    def __init__(self, kind: str):
        self.kind = kind
        self.count = 0
        self.failures: List[str] = []

    def check(self, ok: bool, message: str) -> bool:
        self.count += 1
        if not ok:
            self.failures.append(message)
        return ok

    def result(self) -> VerificationResult:
        return VerificationResult(
            kind=self.kind, valid=not self.failures, checks=self.count, failures=self.failures
        )


def _torus(checks: _Checks, name: str, data: Mapping[str, Any], t: int) -> Optional[TorusElem]:
    try:
        z = TorusElem.from_dict(data)
    except SpinLabError as e:
        checks.check(False, f"{name}: {e}")
        return None
    checks.check(z.t == t, f"{name} lies in T_{z.t}, expected T_{t}")
    return z


def _disjoint(checks: _Checks, sets: Dict[str, Set[int]]) -> None:
    names = list(sets)
    for i, left in enumerate(names):
        for right in names[i + 1:]:
            common = sorted(sets[left] & sets[right])
            checks.check(not common, f"{left} and {right} share {common}")


def _check_approx(checks: _Checks, data: Mapping[str, Any]) -> Dict[str, TorusElem]:
    """Checks of an ApproxCertificate; returns the parsed torus elements."""
    kind = data.get("kind")
    t = int(data["t"])
    ideal = OIdeal(int(data["ideal"]))
    targets = [parse_rational(str(a)) for a in data["targets"]]
    names = list(SUPPORT_KEYS[kind])
    checks.check(len(targets) == len(names), f"{kind} certificate needs {len(names)} targets")

    tori: Dict[str, TorusElem] = {}
    for name in names:
        record = data.get("tori", {}).get(name)
        if not checks.check(record is not None, f"missing torus element {name}"):
            continue
        z = _torus(checks, name, record, t)
        if z is not None:
            tori[name] = z

    trivs: Dict[tuple, Trivialization] = {}
    for record in data.get("trivializations", []):
        try:
            triv = Trivialization.from_dict(record)
        except SpinLabError as e:
            checks.check(False, f"trivialization {record}: {e}")
            continue
        checks.check(triv.t == t, f"trivialization at {triv.p} is for t = {triv.t}")
        trivs[(triv.p, triv.k)] = triv

    seen = set()
    for record in data.get("congruences", []):
        name, p, k = record["torus"], int(record["p"]), int(record["k"])
        z, triv = tori.get(name), trivs.get((p, k))
        if not checks.check(z is not None and triv is not None, f"congruence {name} mod {p}^{k} has no data"):
            continue
        target = parse_rational(str(record["target"]))
        index = names.index(name)
        checks.check(index < len(targets) and target == targets[index], f"{name} has the wrong target")
        try:
            lhs = rho_apply(z, triv)
            rhs = mod_rational(target, triv.modulus)
        except SpinLabError as e:
            checks.check(False, f"rho_{p}({name}): {e}")
            continue
        checks.check(lhs == int(record["lhs"]), f"rho_{p}({name}) = {lhs}, recorded {record['lhs']}")
        checks.check(rhs == int(record["rhs"]), f"target of {name} mod {p}^{k} is {rhs}, recorded {record['rhs']}")
        checks.check(lhs == rhs, f"rho_{p}({name}) = {lhs} differs from {rhs} mod {p}^{k}")
        seen.add((name, p, k))

    for name in names:
        for p, e in ideal.factorization().items():
            checks.check((name, p, e) in seen, f"no congruence for {name} at {p}^{e}")

    ideal_primes = set(ideal.primes())
    supports: Dict[str, Set[int]] = {}
    for name, key in SUPPORT_KEYS[kind].items():
        recorded = set(int(q) for q in data.get("supports", {}).get(key, []))
        if name in tori:
            actual = set(support(tori[name])) - ideal_primes
            checks.check(recorded == actual, f"support {key} is {sorted(actual)}, recorded {sorted(recorded)}")
        supports[key] = recorded
    sets = {"P(I)": ideal_primes, **supports}
    if kind == "pair":
        sets["P(t)"] = set(factor(t)) - {2}
        if "z2" in tori:
            for q in supports.get("R1", ()):
                checks.check(is_integral_at(tori["z2"], q), f"z2 is not integral on R1 at {q}")
    _disjoint(checks, sets)

    if data.get("integral_everywhere"):
        for name, z in tori.items():
            checks.check(is_unit_in_order(z), f"{name} is not in T_t(Z[1/2])")
    return tori


def _check_vectors(checks: _Checks, form: QuadForm, v: List[List[str]], u: List[List[str]], t: int) -> None:
    vs = [[parse_rational(c) for c in vec] for vec in v]
    us = [[parse_rational(c) for c in vec] for vec in u]
    for i, vec in enumerate(vs):
        checks.check(form.value(vec) == 1, f"V{i + 1} does not have norm 1")
    for i, vec in enumerate(us):
        checks.check(form.value(vec) == t, f"U{i + 1} does not have norm {t}")
    every = vs + us
    for i, a in enumerate(every):
        for b in every[i + 1:]:
            checks.check(form.bilinear(a, b) == 0, "plane vectors are not mutually orthogonal")


def _is_spin_norm_one(g: Multivector) -> bool:
    return g.is_even() and gp(g, reverse(g)) == 1


def _check_spinpair(checks: _Checks, data: Mapping[str, Any]) -> None:
    t, dim = int(data["t"]), int(data["dim"])
    form = QuadForm.f_a(dim)
    z1 = _torus(checks, "z1", data["z1"], t)
    z2 = _torus(checks, "z2", data["z2"], t)

    g1 = Multivector.from_json(form, data["g1"])
    g2 = Multivector.from_json(form, data["g2"])
    checks.check(_is_spin_norm_one(g1), "g1 is not even with g1 g1' = 1")
    checks.check(_is_spin_norm_one(g2), "g2 is not even with g2 g2' = 1")
    commute = gp(g1, g2) == gp(g2, g1)
    checks.check(commute, "g1 and g2 do not commute")
    checks.check(bool(data.get("commute")) == commute, "recorded commute flag is wrong")
    _check_vectors(checks, form, data["v"], data["u"], t)

    for record in data.get("integrality", []):
        p = int(record["p"])
        kind = splitting_type(t, p)
        checks.check(kind == record["splitting"], f"{p} is {kind}, recorded {record['splitting']}")
        for name, z in (("z1", z1), ("z2", z2)):
            if z is None:
                continue
            integral = is_integral_at(z, p)
            checks.check(integral == record[f"{name}_integral"], f"integrality of {name} at {p} is wrong")
            if kind != SPLIT:
                checks.check(integral, f"{name} is not integral at the non-split prime {p}")

    approx = data.get("approx")
    if approx:
        tori = _check_approx(checks, approx)
        for name, z in (("z1", z1), ("z2", z2)):
            if z is not None and name in tori:
                checks.check(tori[name] == z, f"{name} differs from the approximation certificate")


def certificate_kind(data: Mapping[str, Any]) -> str:
    if "g1" in data and "g2" in data:
        return "spinpair"
    return str(data.get("kind", "unknown"))


def verify_certificate(data: Mapping[str, Any]) -> VerificationResult:
    """Re-check every recorded congruence, support and integrality claim.

    Args:
        data: Certificate as loaded from JSON

    Returns:
        VerificationResult listing the failed checks
    """
    kind = certificate_kind(data)
    checks = _Checks(kind)
    try:
        if kind == "spinpair":
            _check_spinpair(checks, data)
        elif kind in SUPPORT_KEYS:
            _check_approx(checks, data)
        else:
            checks.check(False, f"unknown certificate kind {kind!r}")
    except (KeyError, TypeError, ValueError, SpinLabError) as e:
        checks.check(False, f"malformed certificate: {e}")

    result = checks.result()
    logger.info(f"Verified {kind} certificate: {result.checks} checks, {len(result.failures)} failures")
    return result


