"""Catalogue of continued-fraction identities and the verification engine.

Each entry pairs CF[a, b] with a closed form over the base constants. The left
side is always evaluated by the convergent recurrence; entries belonging to
the H family are also evaluated through H (with a contiguous-relation ladder,
then a Moebius map for tails of the family), and entries with a particular
solution through the solution series. All left-hand routes must agree before
the closed form is compared.
"""

from __future__ import annotations

import json
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Iterable

from .bigfloat import FloatApprox, agree_digits, working_precision
from .cf_engine import CFSpec, eval_cf, h_family_spec
from .constants import MAX_DIGITS, ClosedFormConstant, eval_closed_form
from .errors import BudgetExceeded, CFLabError, RegistryError
from .exact import render_rational
from .hfun import HParams, h_anywhere
from .petkovsek import HypergeometricTerm, RationalFunction, Recurrence2, certify, hyper_solve, make_term
from .polyparse import PolySyntaxError, parse_poly
from .solution_series import cf_from_solution

GUARD_DIGITS = 3
MAX_ITER = 400_000
REQUIRED = ("id", "a_text", "b_text", "rhs")


@dataclass(frozen=True)
class Variant:
    label: str
    rhs: ClosedFormConstant
    why: str = ""


@dataclass(frozen=True)
class ConjectureEntry:
    id: str
    a_text: str
    b_text: str
    rhs: ClosedFormConstant
    source: str = ""
    family: str = ""
    h_params: HParams | None = None
    h_shift: int = 0
    h_eval: HParams | None = None
    h_mobius: tuple[Fraction, Fraction, Fraction, Fraction] | None = None
    solution: HypergeometricTerm | None = None
    alt_rhs: tuple[Variant, ...] = ()
    notes: str = ""

    @property
    def cf(self) -> CFSpec:
        return CFSpec(parse_poly(self.a_text), parse_poly(self.b_text))

    def to_json(self) -> dict:
        def hp(p):
            return None if p is None else [render_rational(p.alpha), render_rational(p.beta), render_rational(p.gamma)]

        sol = None
        if self.solution is not None:
            sol = {**self.solution.ratio.to_json(), "y0": render_rational(self.solution.y0)}
        return {
            "id": self.id,
            "family": self.family,
            "a_text": self.a_text,
            "b_text": self.b_text,
            "rhs": self.rhs.to_json(),
            "rhs_text": str(self.rhs),
            "source": self.source,
            "h_params": hp(self.h_params),
            "h_shift": self.h_shift,
            "h_eval": hp(self.h_eval),
            "h_mobius": None if self.h_mobius is None else [render_rational(c) for c in self.h_mobius],
            "solution": sol,
            "alt_rhs": [{"label": v.label, "rhs": v.rhs.to_json(), "why": v.why} for v in self.alt_rhs],
            "notes": self.notes,
        }


def id_key(entry_id: str):
    """Natural order: cor2.2 before cor2.10, then the thm entries."""
    return tuple(int(t) if t.isdigit() else t for t in re.split(r"(\d+)", entry_id))


# -- loading ----------------------------------------------------------------------


def _fail(eid: str, fld: str, msg: str):
    raise RegistryError(f"entry {eid!r}, field {fld!r}: {msg}")


def _hparams(eid: str, fld: str, raw) -> HParams | None:
    if raw is None:
        return None
    if not isinstance(raw, list) or len(raw) != 3:
        _fail(eid, fld, "expected [alpha, beta, gamma]")
    try:
        return HParams(*(Fraction(str(x)) for x in raw))
    except (ValueError, ZeroDivisionError) as exc:
        _fail(eid, fld, str(exc))


def _closed_form(eid: str, fld: str, raw) -> ClosedFormConstant:
    try:
        return ClosedFormConstant.from_json(raw)
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        _fail(eid, fld, f"bad closed form: {exc}")


def entry_from_json(raw: dict) -> ConjectureEntry:
    if not isinstance(raw, dict):
        raise RegistryError(f"entry must be an object, got {type(raw).__name__}")
    eid = raw.get("id", "<missing id>")
    for fld in REQUIRED:
        if fld not in raw:
            _fail(eid, fld, "missing")
    for fld in ("a_text", "b_text"):
        try:
            parse_poly(raw[fld])
        except PolySyntaxError as exc:
            _fail(eid, fld, str(exc))
    sol = None
    if raw.get("solution"):
        s = raw["solution"]
        try:
            sol = make_term(RationalFunction.parse(s["num"], s.get("den", "1")), Fraction(s.get("y0", "1")))
        except (KeyError, PolySyntaxError, ValueError, ZeroDivisionError) as exc:
            _fail(eid, "solution", str(exc))
    mob = raw.get("h_mobius")
    if mob is not None:
        if not isinstance(mob, list) or len(mob) != 4:
            _fail(eid, "h_mobius", "expected four rationals")
        mob = tuple(Fraction(str(c)) for c in mob)
    alts = tuple(
        Variant(v.get("label", "alternate"), _closed_form(eid, "alt_rhs", v["rhs"]), v.get("why", ""))
        for v in raw.get("alt_rhs", [])
    )
    return ConjectureEntry(
        id=eid,
        a_text=raw["a_text"],
        b_text=raw["b_text"],
        rhs=_closed_form(eid, "rhs", raw["rhs"]),
        source=raw.get("source", ""),
        family=raw.get("family", ""),
        h_params=_hparams(eid, "h_params", raw.get("h_params")),
        h_shift=int(raw.get("h_shift", 0)),
        h_eval=_hparams(eid, "h_eval", raw.get("h_eval")),
        h_mobius=mob,
        solution=sol,
        alt_rhs=alts,
        notes=raw.get("notes", ""),
    )


def check_entry(e: ConjectureEntry) -> None:
    """Load-time consistency: degrees, H-family expansion, certified solution."""
    cf = e.cf
    if not cf.balanced_degrees:
        _fail(e.id, "b_text", f"deg b = {cf.b.degree} is not twice deg a = {cf.a.degree}")
    if e.h_params is not None:
        fam = h_family_spec(e.h_params.alpha, e.h_params.beta, e.h_params.gamma)
        s = e.h_shift
        if fam.a.shift(s) != cf.a or fam.b.shift(s) != cf.b:
            _fail(e.id, "h_params", f"H{e.h_params} shifted by {s} does not reproduce a and b")
        if e.h_eval is None or e.h_mobius is None:
            _fail(e.id, "h_eval", "H-family entries need h_eval and h_mobius")
    if e.solution is not None:
        if not certify(Recurrence2.from_cf(cf.a, cf.b), e.solution):
            _fail(e.id, "solution", f"ratio {e.solution.ratio} does not solve the recurrence")


def _builtin_text() -> str:
    return resources.files("cflab").joinpath("data/registry.json").read_text(encoding="utf-8")


def load_registry(path: str | Path | None = None, extend_builtin: bool = False) -> list[ConjectureEntry]:
    """Built-in entries, or those of ``path`` (optionally overriding/extending the built-ins)."""
    texts = []
    if path is None or extend_builtin:
        texts.append(_builtin_text())
    if path is not None:
        texts.append(Path(path).read_text(encoding="utf-8"))
    merged: dict[str, ConjectureEntry] = {}
    for text in texts:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise RegistryError(f"registry is not valid JSON: {exc}") from exc
        raw_entries = data.get("entries") if isinstance(data, dict) else data
        if not isinstance(raw_entries, list):
            raise RegistryError("registry needs an 'entries' array")
        for raw in raw_entries:
            e = entry_from_json(raw)
            check_entry(e)
            merged[e.id] = e
    return sorted(merged.values(), key=lambda e: id_key(e.id))


def find_entry(entries: Iterable[ConjectureEntry], entry_id: str) -> ConjectureEntry:
    for e in entries:
        if e.id == entry_id:
            return e
    raise RegistryError(f"no entry with id {entry_id!r}")


# -- verification ---------------------------------------------------------------------


@dataclass
class VerificationReport:
    id: str
    digits: int
    cf_value: FloatApprox | None = None
    rhs_value: FloatApprox | None = None
    matched_digits: int = 0
    methods_used: list[str] = field(default_factory=list)
    passed: bool = False
    anomalies: list[str] = field(default_factory=list)
    error: str | None = None

    def to_json(self) -> dict:
        shown = self.digits + 5

        def dec(x):
            return None if x is None else x.to_decimal(shown)

        return {
            "id": self.id,
            "digits": self.digits,
            "cf_value": dec(self.cf_value),
            "rhs_value": dec(self.rhs_value),
            "matched_digits": self.matched_digits,
            "methods_used": list(self.methods_used),
            "pass": self.passed,
            "anomalies": list(self.anomalies),
            "error": self.error,
        }


def _h_route(e: ConjectureEntry, digits: int) -> FloatApprox:
    # the ladder route reaches H through contiguous relations and a different fraction
    H = h_anywhere(e.h_eval, digits, route="ladder")
    c0, c1, c2, c3 = e.h_mobius
    prec = working_precision(digits)
    ex = lambda c: FloatApprox.exact(c, prec)  # noqa: E731
    return (H * ex(c0) + ex(c1)) / (H * ex(c2) + ex(c3))


def verify(e: ConjectureEntry, digits: int = 20, max_iter: int = MAX_ITER) -> VerificationReport:
    if digits < 1:
        raise ValueError("digits must be at least 1")
    rep = VerificationReport(e.id, digits)
    if digits > MAX_DIGITS:
        raise BudgetExceeded(f"{digits} digits exceeds the {MAX_DIGITS}-digit budget")
    work = digits + GUARD_DIGITS
    cf = e.cf
    values: dict[str, FloatApprox] = {}
    values["eval_cf"] = eval_cf(cf, work, max_iter=max_iter).as_approx()
    if e.h_eval is not None:
        values["h_function"] = _h_route(e, work)
    if e.solution is not None:
        values["particular_solution"] = cf_from_solution(cf, e.solution, work, max_terms=max_iter)
    rep.methods_used = list(values)
    lhs = values["eval_cf"]
    rep.cf_value = lhs
    methods_agree = True
    for name, v in values.items():
        if name == "eval_cf":
            continue
        d = agree_digits(lhs, v)
        if d < digits:
            methods_agree = False
            rep.anomalies.append(f"{name} agrees with eval_cf to only {d} digits")
    rhs = eval_closed_form(e.rhs, work + 2)
    rep.rhs_value = rhs
    rep.matched_digits = agree_digits(lhs, rhs)
    for v in e.alt_rhs:
        alt = agree_digits(lhs, eval_closed_form(v.rhs, work + 2))
        primary_ok = rep.matched_digits >= digits
        alt_ok = alt >= digits
        if primary_ok and not alt_ok:
            verdict = f"catalogued value {e.rhs} matches; alternate {v.rhs} does not ({alt} digits)"
        elif alt_ok and not primary_ok:
            verdict = (f"alternate {v.rhs} matches to {alt} digits; catalogued value {e.rhs} "
                       f"does not ({rep.matched_digits} digits)")
        elif alt_ok and primary_ok:
            verdict = f"both {e.rhs} and alternate {v.rhs} match at this precision"
        else:
            verdict = f"neither {e.rhs} nor alternate {v.rhs} matches"
        rep.anomalies.append("variant check: " + verdict)
    rep.passed = methods_agree and rep.matched_digits >= digits
    return rep


def verify_safe(e: ConjectureEntry, digits: int, max_iter: int = MAX_ITER) -> VerificationReport:
    """verify, with errors recorded in the report instead of raised."""
    try:
        return verify(e, digits, max_iter)
    except (CFLabError, ZeroDivisionError) as exc:
        rep = VerificationReport(e.id, digits)
        rep.error = f"{type(exc).__name__}: {exc}"
        return rep


def _verify_job(args) -> VerificationReport:
    entry_json, digits, max_iter = args
    return verify_safe(entry_from_json(entry_json), digits, max_iter)


def verify_all(entries: list[ConjectureEntry] | None = None, digits: int = 20, parallelism: int = 1,
               max_iter: int = MAX_ITER) -> tuple[list[VerificationReport], dict]:
    """Verify every entry; reports come back ordered by id whatever the schedule."""
    entries = load_registry() if entries is None else entries
    if parallelism > 1:
        jobs = [(e.to_json(), digits, max_iter) for e in entries]
        with ProcessPoolExecutor(max_workers=parallelism) as pool:
            reports = list(pool.map(_verify_job, jobs))
    else:
        reports = [verify_safe(e, digits, max_iter) for e in entries]
    reports.sort(key=lambda r: id_key(r.id))
    summary = {
        "digits": digits,
        "total": len(reports),
        "passed": sum(r.passed for r in reports),
        "failed": [r.id for r in reports if not r.passed],
    }
    return reports, summary


def reports_json(reports: list[VerificationReport], summary: dict) -> str:
    """Deterministic JSON: sorted keys, no timings."""
    return json.dumps({"reports": [r.to_json() for r in reports], "summary": summary},
                      indent=2, sort_keys=True) + "\n"


def rediscover(e: ConjectureEntry) -> bool:
    """True iff the Hyper search finds the entry's stored solution ratio."""
    if e.solution is None:
        return False
    cf = e.cf
    return any(t.ratio == e.solution.ratio for t in hyper_solve(Recurrence2.from_cf(cf.a, cf.b)))
