"""Brute-force verification suites for the linear-algebra statements.

Every suite is a pure function of its parameters and a seed. Failures are
recorded with machine-reloadable inputs (matrices as decimal-string JSON), so
a failing case can be replayed directly through the library.
"""

from __future__ import annotations

import logging
import random
import time
from dataclasses import dataclass, field
from itertools import product
from math import gcd
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from sympy import primerange

from cyclotomic import (
    cyclotomic_prime_power,
    exceptional_difference,
    groupring_bound,
    n_prime_set,
    n_set,
    prime_power_orders,
    root_minus_one_membership,
    sharpness_scan,
    valuation_threshold,
)
from errors import InvariantViolation, PreconditionError, UnknownSuiteError
from exterior import wedge_functoriality_check, wedge_power, wedge_powers
from families import (
    gen_briefly_unstable_family,
    gen_example62,
    gen_example62_sign,
    gen_semistable_family,
    random_unimodular,
    random_unimodular_residue,
    random_unitriangular,
)
from inertia import (
    NOT_SEMISTABLE,
    check_cohomology_criterion,
    classify,
    fixed_space_trivial,
    integer_verdict,
    reduce_representation,
)
from linalg import (
    ExactMatrix,
    companion_matrix,
    det,
    direct_sum,
    entries_divisible,
    identity,
    jordan_block,
    mat_pow,
    mat_pow_mod,
    residue_array,
    residue_matmul,
)
from spectral import (
    is_neg_unipotent,
    is_unipotent,
    jordan_partition_by_bisection,
    jordan_partition_unipotent,
    level2_check,
    level2_evidence,
    power_vanishes_mod_prime,
    unipotent_echelon,
)

_log = logging.getLogger("monodromy.verification")


# ── Reports ────────────────────────────────────────────────────────

@dataclass
class CaseFailure:
    case: Dict[str, Any]
    message: str

    def to_json(self) -> Dict[str, Any]:
        return {"case": self.case, "message": self.message}


@dataclass
class SuiteReport:
    name: str
    seed: int = 0
    cases: int = 0
    passed: int = 0
    failures: List[CaseFailure] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures and self.passed == self.cases

    def record(self, case: Dict[str, Any], ok: bool, message: str = "") -> bool:
        self.cases += 1
        if ok:
            self.passed += 1
        else:
            self.failures.append(CaseFailure(case, message or "check failed"))
            _log.debug("%s: case failed: %s %s", self.name, message, case)
        return ok

    def note(self, text: str):
        self.notes.append(text)

    def absorb(self, other: "SuiteReport"):
        self.cases += other.cases
        self.passed += other.passed
        self.failures.extend(other.failures)
        self.notes.extend(other.notes)

    def to_json(self) -> Dict[str, Any]:
        # wall time stays out of the canonical body
        return {
            "suite": self.name,
            "seed": self.seed,
            "cases": self.cases,
            "passed": self.passed,
            "ok": self.ok,
            "failures": [f.to_json() for f in self.failures],
            "notes": list(self.notes),
        }

    def to_text(self) -> str:
        status = "ok" if self.ok else "FAILED"
        lines = [f"{self.name}: {self.passed}/{self.cases} passed, {status} ({self.wall_time:.2f} s, seed {self.seed})"]
        for f in self.failures[:20]:
            lines.append(f"  FAIL {f.message}: {f.case}")
        for n in self.notes:
            lines.append(f"  note: {n}")
        return "\n".join(lines)


def _m(a: ExactMatrix) -> List[List[str]]:
    return a.to_json()


# ── Level-2 lemma ──────────────────────────────────────────────────

def _unipotent_shapes(dim: int) -> List[Tuple[ExactMatrix, int]]:
    """Unipotent Jordan shapes of dimension dim with their echelon."""
    shapes = [(direct_sum(jordan_block(2), identity(dim - 2)) if dim > 2 else jordan_block(2), 2)]
    if dim >= 4:
        shapes.append((direct_sum(jordan_block(2), jordan_block(2), *([identity(dim - 4)] if dim > 4 else [])), 2))
    if dim >= 3:
        shapes.append((direct_sum(jordan_block(3), identity(dim - 3)) if dim > 3 else jordan_block(3), 3))
    if dim >= 4:
        shapes.append((jordan_block(dim), dim))
    return shapes


def verify_level2lem(dim_max: int = 6, m_max: int = 6, trials: int = 3, seed: int = 0) -> SuiteReport:
    """Unipotent g: (g^m - 1)^2 = 0 for all m exactly when the echelon is at most 2; same for -g with (g + 1)^2."""
    report = SuiteReport("level2lem", seed)
    rng = random.Random(seed)
    for dim in range(2, dim_max + 1):
        for base, echelon in _unipotent_shapes(dim):
            for _ in range(trials):
                p, p_inv = random_unimodular(dim, rng)
                g = p @ base @ p_inv
                case = {"g": _m(g)}
                if not report.record(case, unipotent_echelon(g) == echelon, f"conjugate lost echelon {echelon}"):
                    continue
                expected = echelon <= 2
                h = -g
                neg = level2_evidence(h)
                report.record(case, neg.neg_unipotent and neg.neg_square_zero == expected,
                              "(-g + 1)^2 = 0 does not track the echelon")
                for m in range(1, m_max + 1):
                    ok = level2_check(g, m) == expected
                    if m % 2 == 0:
                        ok = ok and level2_check(h, m) == expected
                    report.record(dict(case, m=m), ok, f"level-2 test disagrees with echelon {echelon}")
    return report


# ── Exterior powers of echelon-2 symplectic operators ──────────────

def _check_wedge_unipotency_descends(report: SuiteReport, g: ExactMatrix, wedges: Sequence[ExactMatrix]):
    for k, w in enumerate(wedges, 1):
        if not is_unipotent(w):
            continue
        ok = is_unipotent(g) if k % 2 else (is_unipotent(g) or is_neg_unipotent(g))
        report.record({"part": "iv", "g": _m(g), "k": k}, ok, "unipotent wedge over a non-±unipotent operator")


def verify_lin(d_max: int = 3, trials: int = 100, seed: int = 0) -> SuiteReport:
    """(∧^k g - 1)^(k+1) = 0 for (g - 1)^2 = 0, all k; for (g + 1)^2 = 0 and k even; scalars and descent."""
    report = SuiteReport("lin", seed)
    rng = random.Random(seed)
    for d in range(1, d_max + 1):
        top = 2 * d - 1
        for _ in range(trials):
            g = gen_semistable_family(d, rng.randrange(2 ** 31), conjugate=True).tame
            h = -g
            g_wedges = wedge_powers(g, top)
            h_wedges = wedge_powers(h, top)
            for k, w in enumerate(g_wedges, 1):
                report.record({"part": "i", "g": _m(g), "k": k},
                              mat_pow(w.shift(-1), k + 1).is_zero(), "(∧^k g - 1)^(k+1) != 0")
            for k, w in enumerate(h_wedges, 1):
                if k % 2 == 0:
                    report.record({"part": "ii", "g": _m(h), "k": k},
                                  mat_pow(w.shift(-1), k + 1).is_zero(), "(∧^k g - 1)^(k+1) != 0 for -unipotent g")
            for gamma in (2, -2, 3):
                report.record({"part": "iii", "g": _m(g), "gamma": gamma},
                              not is_unipotent(g.scale(gamma)), "a non-unit scalar multiple is unipotent")
            _check_wedge_unipotency_descends(report, g, g_wedges)
            _check_wedge_unipotency_descends(report, h, h_wedges)
    for rep in (gen_example62(3, 1), gen_example62(5, 1)):
        g = rep.tame
        wedges = wedge_powers(g, g.dim - 1)
        report.record({"part": "iv", "g": _m(g), "k": 1}, not is_unipotent(wedges[0]), "∧^1 of a twist is unipotent")
        _check_wedge_unipotency_descends(report, g, wedges)
    return report


# ── Jordan blocks of exterior powers in characteristic ell ─────────

def verify_newlinlem(ells: Iterable[int] = (5, 7, 11), seed: int = 0) -> SuiteReport:
    """∧^r of one unipotent (ell-1)-block mod ell: all blocks of size ell but one of size 1 or ell-1."""
    report = SuiteReport("newlinlem", seed)
    rng = random.Random(seed)
    for ell in ells:
        if ell < 5:
            raise PreconditionError(f"the Jordan-block suite needs ell >= 5 (got {ell})")
        a = jordan_block(ell - 1)
        for r in range(2, ell - 2):
            w = wedge_power(a, r)
            case = {"ell": ell, "r": r}
            part = jordan_partition_unipotent(w, ell)
            others = [b for b in part.blocks if b != ell]
            report.record(case, part.dim == w.dim and len(others) == 1 and others[0] in (1, ell - 1),
                          f"unexpected Jordan partition {list(part.blocks)}")
            report.record(case, not power_vanishes_mod_prime(w, ell - 1, ell), "(∧^r A - 1)^(ell-1) = 0 mod ell")

            arr = residue_array(w.rows, ell)
            p, p_inv = random_unimodular_residue(w.dim, ell, rng)
            conj = residue_matmul(residue_matmul(p, arr, ell), p_inv, ell)
            second = jordan_partition_by_bisection(conj, ell)
            report.record(case, second == part,
                          f"oracles disagree: rank sequence {list(part.blocks)} vs bisection {list(second.blocks)}")
            report.note(f"ell={ell} r={r} dim={w.dim}: remaining block {others[0] if others else '-'}")
    return report


def verify_unip(ell: int = 5, dim: int = 6, k_list: Optional[Sequence[int]] = None,
                trials: int = 3, seed: int = 0) -> SuiteReport:
    """A = J_(ell-1) ⊕ unipotent remainder, conjugated: (∧^k A - 1)^(ell-1) != 0 mod ell."""
    report = SuiteReport("unip", seed)
    if ell < 5:
        raise PreconditionError(f"the unipotent exterior-power suite needs ell >= 5 (got {ell})")
    if dim < ell:
        raise PreconditionError(f"dim={dim} leaves no room next to a Jordan block of size {ell - 1}")
    ks = list(k_list) if k_list is not None else list(range(2, dim - 1))
    if any(not 2 <= k <= dim - 2 for k in ks):
        raise PreconditionError(f"every k must satisfy 2 <= k <= dim-2 = {dim - 2}")
    rng = random.Random(seed)
    for _ in range(trials):
        rest = random_unitriangular(dim - (ell - 1), rng)
        p, p_inv = random_unimodular(dim, rng)
        a = p @ direct_sum(jordan_block(ell - 1), rest) @ p_inv
        if not report.record({"ell": ell, "a": _m(a)}, not power_vanishes_mod_prime(a, ell - 2, ell),
                             "(A - 1)^(ell-2) = 0 mod ell"):
            continue
        wedges = wedge_powers(a, max(ks)) if ks else []
        for k in ks:
            report.record({"ell": ell, "a": _m(a), "k": k},
                          not power_vanishes_mod_prime(wedges[k - 1], ell - 1, ell),
                          "(∧^k A - 1)^(ell-1) = 0 mod ell")
    return report


def verify_unipex_contrapositive(ell: int, k: int, m: int = 1, trials: int = 2, seed: int = 0) -> SuiteReport:
    """g = C(Phi_ell) ⊕ I: g^ell unipotent, ∧^k g not, and (∧^k g - 1)^(m(ell-1)) not in ell^m M."""
    report = SuiteReport("unipex", seed)
    if ell < 5 or m < 1 or k < 2:
        raise PreconditionError("the contrapositive suite needs ell >= 5, m >= 1 and k >= 2")
    extra = max(2, k + 2 - (ell - 1))
    base = direct_sum(companion_matrix(cyclotomic_prime_power(ell, 1)), identity(extra))
    rng = random.Random(seed)
    variants = [base]
    for _ in range(trials):
        p, p_inv = random_unimodular(base.dim, rng)
        variants.append(p @ base @ p_inv)
    modulus = ell ** m
    for g in variants:
        w = wedge_power(g, k)
        case = {"ell": ell, "k": k, "m": m, "g": _m(g)}
        report.record(case, not is_unipotent(g) and is_unipotent(mat_pow(g, ell)),
                      "g should be non-unipotent with g^ell unipotent")
        report.record(case, not is_unipotent(w), "∧^k g is unipotent")
        report.record(case, not entries_divisible(mat_pow_mod(w.shift(-1), m * (ell - 1), modulus), modulus),
                      f"(∧^k g - 1)^{m * (ell - 1)} is divisible by {modulus}")
    return report


# ── Sharpness of the exceptional set ───────────────────────────────

def example_condition_holds(ell: int, m: int, r: int) -> bool:
    return m * (ell - 1) < r or (ell == 2 and r == m) or (ell == 3 and r == 2 * m)


def verify_example_sharpness(ell: int, m: int, r: int, k_list: Optional[Sequence[int]] = None) -> SuiteReport:
    """The twisted product passes the mod ell^m criterion yet is neither semistable nor purely additive."""
    report = SuiteReport("example")
    if not example_condition_holds(ell, m, r):
        raise PreconditionError(
            f"(ell, m, r) = ({ell}, {m}, {r}) needs m(ell-1) < r, or ell = 2 and r = m, or ell = 3 and r = 2m"
        )
    rep = gen_example62_sign(1) if ell == 2 else gen_example62(ell, 1)
    n = ell ** m
    verdict = integer_verdict(rep)
    fixed = fixed_space_trivial(rep)
    for k in (k_list if k_list is not None else range(1, rep.dim)):
        case = {"ell": ell, "m": m, "r": r, "k": k}
        report.record(case, check_cohomology_criterion(rep, k, r, n).passed,
                      f"(rho_k(sigma) - 1)^{r} is not divisible by {n}")
        report.record(case, verdict.verdict == NOT_SEMISTABLE and not fixed.passed,
                      f"integer verdict {verdict.verdict} with trivial fixed space {fixed.passed}")
    return report


# ── Exceptional sets and cyclotomic bounds ─────────────────────────

def verify_bounds(degree_cap: int = 100, seed: int = 0) -> SuiteReport:
    """Valuation law for (zeta - 1)^r, nesting of N(r) and N'(r), and the sharpness scan."""
    report = SuiteReport("bounds", seed)
    for ell in (2, 3, 5, 7):
        for s in (1, 2):
            if ell ** (s - 1) * (ell - 1) > degree_cap:
                continue
            for m in (1, 2, 3):
                threshold = valuation_threshold(ell, s, m)
                try:
                    report.record({"ell": ell, "s": s, "m": m}, groupring_bound(ell, s, m) == threshold)
                except InvariantViolation as e:
                    report.record({"ell": ell, "s": s, "m": m}, False, str(e))
                for r in range(1, 25):
                    report.record({"ell": ell, "s": s, "m": m, "r": r},
                                  root_minus_one_membership(ell, s, r, ell ** m) == (r >= threshold),
                                  f"membership disagrees with the threshold {threshold}")
    for r in range(1, 21):
        diff = {int(ell) ** (r // (ell - 1)) for ell in primerange(5, r + 2) if r % (ell - 1) == 0}
        report.record({"r": r}, n_set(r).issubset(n_set(r + 1)), "N(r) is not contained in N(r+1)")
        report.record({"r": r}, n_prime_set(r).issubset(n_set(r)), "N'(r) is not contained in N(r)")
        report.record({"r": r}, set(exceptional_difference(r)) == diff, "N(r) \\ N'(r) is not the ell >= 5 boundary")
    orders = prime_power_orders(None, degree_cap)
    for r in range(1, 7):
        members = n_set(r)
        for n in range(2, 31):
            witness = sharpness_scan(r, n, None, degree_cap)
            report.record({"r": r, "n": n}, (witness is not None) == (n in members),
                          f"scan witness {witness} disagrees with N({r})")
    report.note(f"scanned {len(orders)} prime-power orders up to degree {degree_cap}")
    return report


# ── Cauchy-Binet and scalar laws ───────────────────────────────────

def verify_functoriality(pairs: int = 200, dim_max: int = 8, seed: int = 0) -> SuiteReport:
    report = SuiteReport("functoriality", seed)
    rng = random.Random(seed)
    for _ in range(pairs):
        dim = rng.randint(2, dim_max)
        k = rng.randint(1, dim)
        a, _ = random_unimodular(dim, rng)
        b, _ = random_unimodular(dim, rng)
        report.record({"a": _m(a), "b": _m(b), "k": k}, wedge_functoriality_check(a, b, k),
                      "∧^k(ab) != ∧^k(a) ∧^k(b)")
        wedge = wedge_power(a, k)
        for gamma in (-1, 2):
            report.record({"a": _m(a), "k": k, "gamma": gamma},
                          wedge_power(a.scale(gamma), k) == wedge.scale(gamma ** k), "scaling law fails")
        for gamma in (1, -1, 2):
            report.record({"dim": dim, "k": k, "gamma": gamma},
                          wedge_power(identity(dim).scale(gamma), k).is_identity() == (gamma ** k == 1),
                          "scalar kernel law fails")
    return report


# ── Classifier agreement ───────────────────────────────────────────

def verify_classifier(n_max: int = 50, k_values: Sequence[int] = (1, 2, 3), r_offsets: Sequence[int] = (1, 2),
                      seed: int = 0) -> SuiteReport:
    """Residue-mode and integer-mode classify agree with the integer verdict for n outside the exceptional set.

    r runs over k + offset, so the default covers k < r <= k + 2.
    """
    report = SuiteReport("classifier", seed)
    families = [
        gen_semistable_family(2, seed, conjugate=True),
        gen_briefly_unstable_family(2, seed, conjugate=True),
        gen_briefly_unstable_family(2, seed, conjugate=True, wild_sign=True),
        gen_example62(3, 1),
    ]
    for rep in families:
        expected = integer_verdict(rep).verdict
        dets = [det(g) for _, g in rep.generators()]
        for k, offset in product(k_values, r_offsets):
            r = k + offset
            exceptional = n_prime_set(r) if 2 <= k <= rep.dim - 2 else n_set(r)
            for n in range(1, n_max + 1):
                if n in exceptional or any(gcd(d, n) != 1 for d in dets):
                    continue
                residue = classify(reduce_representation(rep, n), k, r, n).verdict
                integral = classify(rep, k, r, n).verdict
                report.record({"family": rep.label, "k": k, "r": r, "n": n},
                              residue == expected and integral == expected,
                              f"expected {expected}, residue mode {residue}, integer mode {integral}")
    return report


# ── Registry ───────────────────────────────────────────────────────

def _suite_unip(seed: int) -> SuiteReport:
    report = SuiteReport("unip", seed)
    for ell, dim in ((5, 6), (5, 7), (7, 8)):
        report.absorb(verify_unip(ell, dim, [k for k in range(2, dim - 1) if k <= 6], seed=seed))
    return report


def _suite_unipex(seed: int) -> SuiteReport:
    report = SuiteReport("unipex", seed)
    for ell, k in ((5, 2), (5, 3), (7, 2)):
        report.absorb(verify_unipex_contrapositive(ell, k, 1, seed=seed))
    return report


def _suite_example(seed: int) -> SuiteReport:
    report = SuiteReport("example", seed)
    for ell, m, r in ((3, 1, 3), (2, 2, 2), (3, 1, 2)):
        report.absorb(verify_example_sharpness(ell, m, r))
    return report


SUITES: Dict[str, Callable[[int], SuiteReport]] = {
    "level2lem": lambda seed: verify_level2lem(seed=seed),
    "lin": lambda seed: verify_lin(seed=seed),
    "newlinlem": lambda seed: verify_newlinlem(seed=seed),
    "unip": _suite_unip,
    "unipex": _suite_unipex,
    "example": _suite_example,
    "bounds": lambda seed: verify_bounds(seed=seed),
    "classifier": lambda seed: verify_classifier(seed=seed),
    "functoriality": lambda seed: verify_functoriality(seed=seed),
}


def resolve_suites(names: Sequence[str]) -> List[str]:
    out: List[str] = []
    for name in names:
        if name == "all":
            picked = list(SUITES)
        elif name in SUITES:
            picked = [name]
        else:
            raise UnknownSuiteError(f"unknown suite {name!r}; choose one of: all, {', '.join(SUITES)}")
        out.extend(p for p in picked if p not in out)
    return out


def run_suites(
    names: Sequence[str],
    seed: int = 0,
    on_suite: Optional[Callable[[int, int, str], None]] = None,
) -> List[SuiteReport]:
    """Run the named suites in registry order of the request.

    Args:
        names: Suite names, or "all".
        seed: Seed handed to every suite; recorded in each report.
        on_suite: Optional callback invoked before each suite as
            ``on_suite(index, total, name)``.
    """
    picked = resolve_suites(names)
    reports = []
    for idx, name in enumerate(picked, 1):
        if on_suite is not None:
            on_suite(idx, len(picked), name)
        started = time.perf_counter()
        report = SUITES[name](seed)
        report.wall_time = time.perf_counter() - started
        _log.info("suite %s: %d/%d passed in %.2f s", name, report.passed, report.cases, report.wall_time)
        reports.append(report)
    return reports
