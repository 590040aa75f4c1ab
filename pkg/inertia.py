"""Simulated inertia images and the semistability decision procedures.

An ``InertiaRep`` is a finitely generated matrix group: the image of a tame
generator tau plus a finite list of wild generators, in one of two coefficient
modes:

* integer: exact integer representatives of ell-adic operators (determinant
  ±1). The group may be infinite, so criteria are checked on the elements
  tau^i and w*tau^i for i up to a word bound.
* residue: matrices over Z/NZ. The generated group is finite and every
  criterion runs over its full breadth-first closure.

Verdicts are ``Classification`` values carrying per-element evidence in a
deterministic order.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, replace
from math import comb, gcd
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

from sympy import isprime
from typing_extensions import Final, Literal

from config import get_settings
from cyclotomic import n_prime_set, n_set
from errors import (
    ClosureCapExceeded,
    DimensionCapExceeded,
    InvariantViolation,
    NotInvertibleError,
    NotPrimeError,
    PreconditionError,
    RepresentationFileError,
)
from exterior import cohomology_action, cohomology_action_mod
from linalg import (
    ExactMatrix,
    det,
    entries_divisible,
    identity,
    is_symplectic,
    is_symplectic_mod,
    mat_mul_mod,
    mat_pow,
    mat_pow_mod,
    matrix_from_json,
    rank_over_rationals,
    rank_rows_mod_prime,
)
from spectral import is_neg_unipotent, is_quasi_unipotent, is_unipotent

_log = logging.getLogger("monodromy.inertia")

Verdict = Literal["SemistablePattern", "BrieflyUnstablePattern", "NotSemistablePattern", "Indeterminate"]

SEMISTABLE: Final = "SemistablePattern"
BRIEFLY_UNSTABLE: Final = "BrieflyUnstablePattern"
NOT_SEMISTABLE: Final = "NotSemistablePattern"
INDETERMINATE: Final = "Indeterminate"

THEOREM_GALOIS: Final = "Galois criterion: (sigma - 1)^2 = 0 on the Tate module for every inertia element"
THEOREM_BRIEFLY: Final = "briefly unstable criterion: every inertia element is ±unipotent and the inertia invariants vanish"
THEOREM_COHOMOLOGY: Final = "mod-n criterion: (sigma - 1)^r kills H^k mod n for every inertia element"
THEOREM_SHARP: Final = "sharp exceptional set: for 2 <= k <= dim-2 only n in N'(r) escape the mod-n criterion"
THEOREM_IDENTITY: Final = "identity criterion: inertia acting trivially on H^k mod n, n >= 3"


# ── Data model ─────────────────────────────────────────────────────

@dataclass(frozen=True)
class CoefficientMode:
    kind: Literal["integer", "residue"]
    modulus: int

    def __post_init__(self):
        if self.kind == "integer":
            if not isprime(self.modulus):
                raise NotPrimeError(f"integer mode needs a prime ell (got {self.modulus})")
        elif self.kind == "residue":
            if self.modulus < 2:
                raise PreconditionError(f"residue mode needs a modulus n >= 2 (got {self.modulus})")
        else:
            raise PreconditionError(f"unknown coefficient mode {self.kind!r}")

    @classmethod
    def integer(cls, ell: int) -> "CoefficientMode":
        return cls("integer", ell)

    @classmethod
    def residue(cls, n: int) -> "CoefficientMode":
        return cls("residue", n)

    @property
    def is_integer(self) -> bool:
        return self.kind == "integer"

    def to_json(self) -> Dict[str, Any]:
        key = "ell" if self.is_integer else "n"
        return {self.kind: {key: self.modulus}}

    def __str__(self) -> str:
        return f"integer (ell = {self.modulus})" if self.is_integer else f"residue (n = {self.modulus})"


@dataclass(frozen=True)
class InertiaRep:
    mode: CoefficientMode
    tame: ExactMatrix
    wild: Tuple[ExactMatrix, ...] = ()
    form: Optional[ExactMatrix] = None
    label: str = ""

    def __post_init__(self):
        dim = self.tame.dim
        if dim % 2:
            raise PreconditionError(f"representation dimension must be even (got {dim})")
        for name, g in self.generators()[1:]:
            if g.dim != dim:
                raise PreconditionError(f"generator {name} has dimension {g.dim}, expected {dim}")
        if self.form is not None and self.form.dim != dim:
            raise PreconditionError(f"symplectic form has dimension {self.form.dim}, expected {dim}")

    @property
    def dim(self) -> int:
        return self.tame.dim

    def generators(self) -> List[Tuple[str, ExactMatrix]]:
        return [("tau", self.tame)] + [(f"w{j}", w) for j, w in enumerate(self.wild, 1)]

    def negated(self) -> "InertiaRep":
        return replace(self, tame=-self.tame, wild=tuple(-w for w in self.wild))


@dataclass(frozen=True)
class Evidence:
    word: str
    test: str
    passed: bool

    def to_json(self) -> Dict[str, Any]:
        return {"word": self.word, "test": self.test, "pass": self.passed}


@dataclass(frozen=True)
class CheckResult:
    passed: bool
    evidence: Tuple[Evidence, ...]

    def __bool__(self) -> bool:
        return self.passed


def _collect(evidence: List[Evidence]) -> CheckResult:
    return CheckResult(all(e.passed for e in evidence), tuple(evidence))


@dataclass(frozen=True)
class Classification:
    verdict: Verdict
    reason: str
    theorem: str
    evidence: Tuple[Evidence, ...] = ()
    caveats: Tuple[str, ...] = ()

    def to_json(self) -> Dict[str, Any]:
        return {
            "verdict": self.verdict,
            "reason": self.reason,
            "theorem": self.theorem,
            "evidence": [e.to_json() for e in self.evidence],
            "caveats": list(self.caveats),
        }

    def to_text(self) -> str:
        lines = [f"verdict: {self.verdict}", f"reason:  {self.reason}", f"theorem: {self.theorem}"]
        failed = [e for e in self.evidence if not e.passed]
        lines.append(f"evidence: {len(self.evidence)} checks, {len(failed)} failed")
        for e in failed[:10]:
            lines.append(f"  FAIL {e.word}: {e.test}")
        for c in self.caveats:
            lines.append(f"caveat: {c}")
        return "\n".join(lines)


# ── Validation and conversion ──────────────────────────────────────

def validate_representation(rep: InertiaRep) -> InertiaRep:
    """Invertibility, quasi-unipotency (integer mode) and form preservation."""
    n = rep.mode.modulus
    for name, g in rep.generators():
        d = det(g)
        if rep.mode.is_integer:
            if d not in (1, -1):
                raise NotInvertibleError(f"generator {name} is not invertible over the coefficient ring Z (det = {d})")
            if not is_quasi_unipotent(g).is_quasi_unipotent:
                raise PreconditionError(f"generator {name} is not quasi-unipotent")
        elif gcd(d, n) != 1:
            raise NotInvertibleError(f"generator {name} is not invertible over the coefficient ring Z/{n}Z")
        if rep.form is not None:
            keeps = is_symplectic(g, rep.form) if rep.mode.is_integer else is_symplectic_mod(g, rep.form, n)
            if not keeps:
                raise PreconditionError(f"generator {name} does not preserve the declared symplectic form")
    return rep


def reduce_representation(rep: InertiaRep, n: int) -> InertiaRep:
    """The same generators read in residue mode mod n."""
    return InertiaRep(
        mode=CoefficientMode.residue(n),
        tame=rep.tame.reduce_mod(n),
        wild=tuple(w.reduce_mod(n) for w in rep.wild),
        form=rep.form.reduce_mod(n) if rep.form is not None else None,
        label=f"{rep.label} mod {n}".strip(),
    )


def representation_to_json(rep: InertiaRep) -> Dict[str, Any]:
    return {
        "dim": rep.dim,
        "mode": rep.mode.to_json(),
        "tame": rep.tame.to_json(),
        "wild": [w.to_json() for w in rep.wild],
        "form": rep.form.to_json() if rep.form is not None else None,
        "label": rep.label,
    }


def _parse_mode(raw: Any) -> CoefficientMode:
    if not isinstance(raw, dict) or len(raw) != 1:
        raise RepresentationFileError('"mode" must be {"integer": {"ell": p}} or {"residue": {"n": n}}')
    kind, body = next(iter(raw.items()))
    key = {"integer": "ell", "residue": "n"}.get(kind)
    if key is None or not isinstance(body, dict) or not isinstance(body.get(key), int) or isinstance(body.get(key), bool):
        raise RepresentationFileError(f'"mode" entry {kind!r} must carry an integer "{key or "ell"}"')
    return CoefficientMode(kind, body[key])


def representation_from_json(data: Any, max_dim: int = 0) -> InertiaRep:
    if not isinstance(data, dict):
        raise RepresentationFileError("a representation must be a JSON object")
    dim = data.get("dim")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 2:
        raise RepresentationFileError('"dim" must be an even integer >= 2')
    if max_dim and dim > max_dim:
        raise DimensionCapExceeded(
            f"representation dimension {dim} exceeds the configured cap {max_dim} "
            f"(raise MONODROMY_MAX_DIM to allow it)"
        )
    if "tame" not in data:
        raise RepresentationFileError('representation is missing the "tame" matrix')
    wild_raw = data.get("wild") or []
    if not isinstance(wild_raw, list):
        raise RepresentationFileError('"wild" must be a list of matrices')
    label = data.get("label") or ""
    if not isinstance(label, str):
        raise RepresentationFileError('"label" must be a string')
    tame = matrix_from_json(data["tame"], max_dim)
    if tame.dim != dim:
        raise RepresentationFileError(f'"tame" has dimension {tame.dim} but "dim" says {dim}')
    form_raw = data.get("form")
    rep = InertiaRep(
        mode=_parse_mode(data.get("mode")),
        tame=tame,
        wild=tuple(matrix_from_json(w, max_dim) for w in wild_raw),
        form=matrix_from_json(form_raw, max_dim) if form_raw is not None else None,
        label=label,
    )
    return validate_representation(rep)


def canonical_json(obj: Any) -> str:
    """Stable text for reports and representation files: sorted keys, two-space indent."""
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def dump_representation(rep: InertiaRep) -> str:
    return canonical_json(representation_to_json(rep))


def dump_classification(result: "Classification") -> str:
    return canonical_json(result.to_json())


def load_representation(path: Union[str, Path], max_dim: int = 0) -> InertiaRep:
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise RepresentationFileError(f"cannot read representation file {path}: {e}") from e
    rep = representation_from_json(data, max_dim)
    if rep.form is None:
        _log.warning("%s declares no symplectic form; verdicts carry a caveat", path)
    return rep


# ── Element sets ───────────────────────────────────────────────────

def _power_word(name: str, i: int) -> str:
    return name if i == 1 else f"{name}^{i}"


def _format_word(letters: Tuple[str, ...]) -> str:
    if not letters:
        return "1"
    parts: List[str] = []
    run_name, run_len = letters[0], 0
    for name in letters:
        if name == run_name:
            run_len += 1
        else:
            parts.append(_power_word(run_name, run_len))
            run_name, run_len = name, 1
    parts.append(_power_word(run_name, run_len))
    return "*".join(parts)


def _word_bound(word_bound: Optional[int]) -> int:
    bound = get_settings().word_bound if word_bound is None else word_bound
    if bound < 0:
        raise PreconditionError(f"the word bound must be >= 0 (got {bound})")
    return bound


def checked_elements(rep: InertiaRep, word_bound: Optional[int] = None) -> List[Tuple[str, ExactMatrix]]:
    """tau^i for 1 <= i <= max(bound, 1), then w_j * tau^i for 0 <= i <= bound.

    tau itself is always checked, even with a zero bound.
    """
    bound = _word_bound(word_bound)
    powers = [identity(rep.dim)]
    for _ in range(max(bound, 1)):
        powers.append(powers[-1] @ rep.tame)
    out = [(_power_word("tau", i), powers[i]) for i in range(1, max(bound, 1) + 1)]
    for j, w in enumerate(rep.wild, 1):
        for i in range(bound + 1):
            word = f"w{j}" if i == 0 else f"w{j}*{_power_word('tau', i)}"
            out.append((word, w @ powers[i]))
    return out


@dataclass(frozen=True)
class ClosureElement:
    word: str
    matrix: ExactMatrix
    action: Optional[ExactMatrix] = None


def _check_modulus(rep: InertiaRep, n: int):
    if n < 1:
        raise PreconditionError(f"n must be a positive integer (got {n})")
    if not rep.mode.is_integer and rep.mode.modulus % n:
        raise PreconditionError(
            f"n={n} must divide the modulus {rep.mode.modulus} of a residue-mode representation"
        )


def closure_elements(rep: InertiaRep, n: int, cap: Optional[int] = None,
                     k: Optional[int] = None) -> List[ClosureElement]:
    """Breadth-first closure of the generators mod n, identity first.

    With k given, each element also carries its action on H^k mod n, built
    multiplicatively from the generators' actions.
    """
    _check_modulus(rep, n)
    cap = get_settings().closure_cap if cap is None else cap
    gens = [(name, g.reduce_mod(n)) for name, g in rep.generators()]
    for name, g in gens:
        if gcd(det(g), n) != 1:
            raise NotInvertibleError(f"generator {name} is not invertible over the coefficient ring Z/{n}Z")
    actions = [cohomology_action_mod(g, k, n) for _, g in gens] if k else None

    start = identity(rep.dim).reduce_mod(n)
    start_action = identity(comb(rep.dim, k)).reduce_mod(n) if k else None
    elements = [start]
    element_actions = [start_action]
    letters: List[Tuple[str, ...]] = [()]
    seen = {start}
    i = 0
    while i < len(elements):
        x = elements[i]
        for gi, (name, g) in enumerate(gens):
            y = mat_mul_mod(x, g, n)
            if y in seen:
                continue
            if len(elements) >= cap:
                raise ClosureCapExceeded(
                    f"group closure mod {n} has more than {cap} elements; increase the closure cap (--cap)"
                )
            seen.add(y)
            elements.append(y)
            letters.append(letters[i] + (name,))
            element_actions.append(mat_mul_mod(element_actions[i], actions[gi], n) if k else None)
        i += 1
    _log.debug("closure mod %d of %r: %d elements", n, rep.label, len(elements))
    return [ClosureElement(_format_word(w), m, a) for w, m, a in zip(letters, elements, element_actions)]


def group_closure(rep: InertiaRep, n: int, cap: Optional[int] = None) -> List[ExactMatrix]:
    return [e.matrix for e in closure_elements(rep, n, cap)]


# ── Integer-mode criteria ──────────────────────────────────────────

def _require_integer(rep: InertiaRep, what: str):
    if not rep.mode.is_integer:
        raise PreconditionError(f"{what} needs an integer-mode representation")


def check_tate_criterion(rep: InertiaRep, word_bound: Optional[int] = None) -> CheckResult:
    _require_integer(rep, "the Galois criterion")
    evidence = []
    for word, g in checked_elements(rep, word_bound):
        nil = g.shift(-1)
        evidence.append(Evidence(word, "(g-1)^2 = 0", (nil @ nil).is_zero()))
    return _collect(evidence)


def check_pm_unipotent(rep: InertiaRep, word_bound: Optional[int] = None) -> CheckResult:
    _require_integer(rep, "the ±unipotent test")
    evidence = []
    for word, g in checked_elements(rep, word_bound):
        if is_unipotent(g):
            evidence.append(Evidence(word, "g unipotent", True))
        elif is_neg_unipotent(g):
            evidence.append(Evidence(word, "-g unipotent", True))
        else:
            evidence.append(Evidence(word, "g or -g unipotent", False))
    return _collect(evidence)


def fixed_space_trivial(rep: InertiaRep, ell: Optional[int] = None) -> CheckResult:
    """Common kernel of g - I over the generators, exactly over Q, cross-checked mod ell."""
    _require_integer(rep, "the fixed-space test")
    ell = rep.mode.modulus if ell is None else ell
    stacked = [row for _, g in rep.generators() for row in g.shift(-1).rows]
    rank_q = rank_over_rationals(stacked)
    rank_ell = rank_rows_mod_prime(stacked, ell)
    if rank_ell > rank_q:
        raise InvariantViolation(f"rank mod {ell} ({rank_ell}) exceeds the rank over Q ({rank_q})")
    words = ",".join(name for name, _ in rep.generators())
    evidence = (
        Evidence(words, "no common fixed vector over Q", rank_q == rep.dim),
        Evidence(words, f"no common fixed vector mod {ell}", rank_ell == rep.dim),
    )
    return CheckResult(rank_q == rep.dim, evidence)


def check_integer_cohomology(rep: InertiaRep, k: int, signed: bool = False,
                             word_bound: Optional[int] = None) -> CheckResult:
    """(rho_k(g) - 1)^(k+1) = 0 exactly on the checked elements (signed: or (rho_k(g) + 1)^(k+1) = 0)."""
    _require_integer(rep, "the integral cohomology test")
    _check_degree(rep, k)
    bound = _word_bound(word_bound)
    tau_action = cohomology_action(rep.tame, k)
    powers = [identity(tau_action.dim)]
    for _ in range(max(bound, 1)):
        powers.append(powers[-1] @ tau_action)
    elements = [(_power_word("tau", i), powers[i]) for i in range(1, max(bound, 1) + 1)]
    for j, w in enumerate(rep.wild, 1):
        w_action = cohomology_action(w, k)
        for i in range(bound + 1):
            word = f"w{j}" if i == 0 else f"w{j}*{_power_word('tau', i)}"
            elements.append((word, w_action @ powers[i]))
    evidence = []
    for word, m in elements:
        if mat_pow(m.shift(-1), k + 1).is_zero():
            evidence.append(Evidence(word, f"(M-1)^{k + 1} = 0", True))
        elif signed and mat_pow(m.shift(1), k + 1).is_zero():
            evidence.append(Evidence(word, f"(M+1)^{k + 1} = 0", True))
        else:
            evidence.append(Evidence(word, f"(M∓1)^{k + 1} = 0" if signed else f"(M-1)^{k + 1} = 0", False))
    return _collect(evidence)


# ── Mod-n criterion ────────────────────────────────────────────────

def _check_degree(rep: InertiaRep, k: int):
    if not 1 <= k <= rep.dim - 1:
        raise PreconditionError(f"k={k} must satisfy 1 <= k <= dim-1 = {rep.dim - 1}")


def check_cohomology_criterion(rep: InertiaRep, k: int, r: int, n: int, signed: bool = False,
                               cap: Optional[int] = None) -> CheckResult:
    """(sigma - 1)^r H^k mod n = 0 for every sigma in the closure mod n.

    signed also accepts (sigma + 1)^r H^k mod n = 0 element by element.
    """
    _check_degree(rep, k)
    if r < 1:
        raise PreconditionError(f"r must be a positive integer (got {r})")
    evidence = []
    for el in closure_elements(rep, n, cap, k):
        m = el.action
        if entries_divisible(mat_pow_mod(m.shift(-1), r, n), n):
            evidence.append(Evidence(el.word, f"(M-1)^{r} = 0 mod {n}", True))
        elif signed and entries_divisible(mat_pow_mod(m.shift(1), r, n), n):
            evidence.append(Evidence(el.word, f"(M+1)^{r} = 0 mod {n}", True))
        else:
            test = f"(M-1)^{r} or (M+1)^{r} = 0 mod {n}" if signed else f"(M-1)^{r} = 0 mod {n}"
            evidence.append(Evidence(el.word, test, False))
    return _collect(evidence)


# ── Verdicts ───────────────────────────────────────────────────────

def _caveats(rep: InertiaRep, verdict: str, used_integer_data: bool, bound: int) -> Tuple[str, ...]:
    out = []
    if used_integer_data:
        out.append(f"integer-mode checks cover tau^i and w*tau^i for i <= {bound} only")
    if rep.form is None:
        out.append("no symplectic form declared: testing only the scalars ±1 is justified for symplectic operators")
    if verdict == BRIEFLY_UNSTABLE:
        out.append("residue characteristic 2 is not modelled (the henselian hypothesis has no matrix counterpart)")
        if not rep.mode.is_integer:
            out.append("briefly unstable pattern read off mod-n data only; no integer representative to confirm it")
    return tuple(out)


def integer_verdict(rep: InertiaRep, word_bound: Optional[int] = None) -> Classification:
    """The ell-adic verdict: Galois criterion, then the briefly unstable criterion."""
    bound = _word_bound(word_bound)
    tate = check_tate_criterion(rep, bound)
    if tate:
        return Classification(
            SEMISTABLE, "(g-1)^2 = 0 for every checked element", THEOREM_GALOIS,
            tate.evidence, _caveats(rep, SEMISTABLE, True, bound),
        )
    pm = check_pm_unipotent(rep, bound)
    fixed = fixed_space_trivial(rep)
    evidence = tate.evidence + pm.evidence + fixed.evidence
    if pm and fixed:
        return Classification(
            BRIEFLY_UNSTABLE, "every checked element is unipotent or -unipotent and no vector is fixed",
            THEOREM_BRIEFLY, evidence, _caveats(rep, BRIEFLY_UNSTABLE, True, bound),
        )
    reason = "some element is neither unipotent nor -unipotent" if not pm else "inertia fixes a nonzero vector"
    return Classification(NOT_SEMISTABLE, reason, THEOREM_BRIEFLY, evidence,
                          _caveats(rep, NOT_SEMISTABLE, True, bound))


def _decide(rep: InertiaRep, k: int, r: int, n: int, cap: Optional[int], word_bound: Optional[int],
            theorem: str) -> Classification:
    bound = _word_bound(word_bound)
    in_window = 2 <= k <= rep.dim - 2
    exceptional = n_prime_set(r) if in_window else n_set(r)
    set_name = f"N'({r})" if in_window else f"N({r})"
    if n in exceptional:
        return Classification(
            INDETERMINATE,
            f"n={n} lies in {set_name} = {exceptional}; the sharpness construction shows the criterion cannot decide there",
            THEOREM_SHARP if in_window else theorem,
            (), _caveats(rep, INDETERMINATE, False, bound),
        )

    def verdict(v: str, reason: str, evidence, thm: str = theorem, integer_used: bool = False):
        return Classification(v, reason, thm, tuple(evidence), _caveats(rep, v, integer_used, bound))

    unsigned = check_cohomology_criterion(rep, k, r, n, False, cap)
    evidence = list(unsigned.evidence)
    kills = f"(sigma-1)^{r} kills H^{k} mod {n}"

    if k % 2 == 1:
        if unsigned:
            return verdict(SEMISTABLE, f"{kills} for every element", evidence)
        signed = check_cohomology_criterion(rep, k, r, n, True, cap)
        evidence += signed.evidence
        if not signed:
            return verdict(NOT_SEMISTABLE, f"neither (sigma-1)^{r} nor (sigma+1)^{r} kills H^{k} mod {n} for some element", evidence)
        if not rep.mode.is_integer:
            return verdict(BRIEFLY_UNSTABLE, f"(sigma∓1)^{r} kills H^{k} mod {n} for every element", evidence)
        pm = check_pm_unipotent(rep, bound)
        fixed = fixed_space_trivial(rep)
        evidence += list(pm.evidence) + list(fixed.evidence)
        if pm and fixed:
            return verdict(BRIEFLY_UNSTABLE, "signed criterion holds and the integer data are ±unipotent without invariants",
                           evidence, THEOREM_BRIEFLY, True)
        return verdict(NOT_SEMISTABLE, "signed criterion holds but the integer data are not ±unipotent without invariants",
                       evidence, THEOREM_BRIEFLY, True)

    if not unsigned:
        return verdict(NOT_SEMISTABLE, f"{kills} fails for some element", evidence)

    if rep.mode.is_integer:
        tate = check_tate_criterion(rep, bound)
        evidence += tate.evidence
        if tate:
            return verdict(SEMISTABLE, f"{kills} and (g-1)^2 = 0 on the integer data", evidence, THEOREM_GALOIS, True)
        pm = check_pm_unipotent(rep, bound)
        fixed = fixed_space_trivial(rep)
        evidence += list(pm.evidence) + list(fixed.evidence)
        if pm and fixed:
            return verdict(BRIEFLY_UNSTABLE, f"{kills}; the integer data are ±unipotent without invariants",
                           evidence, THEOREM_BRIEFLY, True)
        return verdict(NOT_SEMISTABLE, f"{kills} but the integer data fit neither pattern", evidence, THEOREM_BRIEFLY, True)

    # even k kills the sign; H^1 with r = 2 separates the two patterns when n is outside N(2).
    # For r >= 3, N(2) lies inside the exceptional set already, so only the identity criterion lands here.
    if n in n_set(2):
        return verdict(INDETERMINATE, f"{kills}: semistable or briefly unstable, and n={n} lies in N(2) "
                       f"so H^1 cannot separate them (identity criterion on residue data, "
                       f"outside the exceptional set N(1))", evidence)
    h1 = check_cohomology_criterion(rep, 1, 2, n, False, cap)
    evidence += h1.evidence
    if h1:
        return verdict(SEMISTABLE, f"{kills} and (sigma-1)^2 kills H^1 mod {n}", evidence)
    h1_signed = check_cohomology_criterion(rep, 1, 2, n, True, cap)
    evidence += h1_signed.evidence
    if h1_signed:
        return verdict(BRIEFLY_UNSTABLE, f"{kills} and (sigma∓1)^2 kills H^1 mod {n}", evidence)
    return verdict(NOT_SEMISTABLE, f"{kills} but H^1 mod {n} fits neither pattern", evidence)


def classify(rep: InertiaRep, k: int, r: int, n: int, cap: Optional[int] = None,
             word_bound: Optional[int] = None) -> Classification:
    """Decide the reduction pattern from the action on H^k mod n."""
    if not 1 <= k < rep.dim:
        raise PreconditionError(f"k={k} must satisfy 1 <= k < dim = {rep.dim}")
    if k >= r:
        raise PreconditionError(f"k={k} must be smaller than r={r}")
    if n < 1:
        raise PreconditionError(f"n must be a positive integer (got {n})")
    result = _decide(rep, k, r, n, cap, word_bound, THEOREM_COHOMOLOGY)
    _log.info("classify %r k=%d r=%d n=%d -> %s", rep.label, k, r, n, result.verdict)
    return result


def check_raynaud(rep: InertiaRep, k: int, n: int, cap: Optional[int] = None,
                  word_bound: Optional[int] = None) -> Classification:
    """The r = 1 row of the decision table: inertia acting trivially on H^k mod n.

    For even k on residue-mode data this is the one path that can answer
    Indeterminate with n outside N(1): n in {3, 4} lies in N(2), and H^1 mod n
    cannot tell the semistable pattern from its quadratic twist there.
    """
    _check_degree(rep, k)
    if n < 3:
        raise PreconditionError(f"the identity criterion needs n >= 3 (got {n})")
    return _decide(rep, k, 1, n, cap, word_bound, THEOREM_IDENTITY)
