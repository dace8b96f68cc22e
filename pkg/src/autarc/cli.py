"""Command-line interface: scenarios, the count cache, and JSON / LaTeX reports.

Settings resolve as command-line flags, then ``AUTARC_*`` environment
variables, then the scenario file, then built-in defaults.  Reports are
deterministic; timestamps and run information go to a separate metadata file
(``<out>.meta.json``) so that re-runs against a warm cache are byte-identical.

Exit codes: 0 success, 1 computational failure (budget, no fit, failed
certification or suite), 2 usage or validation error.
"""

from __future__ import annotations

import argparse
import fcntl
import hashlib
import json
import logging
import os
import sys
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import __version__
from .autoarc import (SchemePresentation, algebra_summary, aut_presentation, endo_presentation,
                      hom_presentation, jet_presentation)
from .count import (DEFAULT_BUDGET, BudgetExceeded, CountSample, InsufficientSamples,
                    NonPolynomialOrInsufficient, certify, count_points, first_primes, interpolate_class)
from .fatpoints import (AdmissibleSystem, NotAtOrigin, germ_truncation, monomial_fatpoint,
                        translate_germ)
from .motive import MotivicClass
from .polyring import ParseError, format_monomial, format_poly, is_prime, parse_poly
from .quotient import EmptyAlgebra, NotZeroDimensional, quotient_algebra
from .suites import SUITES, run_suite
from .zeta import (CertificationFailed, MotivicSeries, NoFit, NormalizationPolicy,
                   classical_igusa_series, fit_rational, smooth_fiber_series)

log = logging.getLogger("autarc")

ENV_PREFIX = "AUTARC_"
POLICIES = ("raw", "degree", "explicit", "paper")


class ValidationError(ValueError):
    """Bad input: exit code 2."""


class CacheError(RuntimeError):
    """A cache record contradicts the presentation or count being stored."""


# -- scenario -------------------------------------------------------------------------

@dataclass
class Scenario:
    """Everything a zeta run needs, loadable from a single JSON file."""

    germ: Optional[str] = None
    monomial: Optional[Tuple[int, int]] = None
    vars: Tuple[str, ...] = ("x", "y")
    levels: int = 2
    series: str = "auto"
    y0_class: str = "1"
    fiber_dim: int = 0
    primes: Tuple[int, ...] = ()
    claimed: Dict[str, str] = field(default_factory=dict)
    degree_bound: Optional[int] = None
    budget: int = DEFAULT_BUDGET
    policy: Dict = field(default_factory=lambda: {"kind": "degree"})
    outputs: Dict[str, str] = field(default_factory=dict)

    @classmethod
    def from_json(cls, data: Dict) -> "Scenario":
        unknown = set(data) - set(cls.__dataclass_fields__)
        if unknown:
            raise ValidationError(f"unknown scenario fields: {sorted(unknown)}")
        data = dict(data)
        for key in ("vars", "primes"):
            if key in data:
                data[key] = tuple(data[key])
        if data.get("monomial") is not None:
            data["monomial"] = tuple(data["monomial"])
        if "claimed" in data:
            data["claimed"] = {str(k): v for k, v in data["claimed"].items()}
        return cls(**data)

    def to_json(self) -> Dict:
        out = asdict(self)
        out["vars"] = list(self.vars)
        out["primes"] = list(self.primes)
        if self.monomial is not None:
            out["monomial"] = list(self.monomial)
        return out

    @property
    def digest(self) -> str:
        text = json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode()).hexdigest()

    def validate(self) -> None:
        if (self.germ is None) == (self.monomial is None):
            raise ValidationError("scenario needs exactly one of 'germ' and 'monomial'")
        if self.monomial is not None and (len(self.monomial) != 2 or min(self.monomial) < 1):
            raise ValidationError("monomial must be [d, n] with d, n >= 1")
        if self.levels < 0:
            raise ValidationError("levels must be non-negative")
        if self.series not in ("auto", "classical"):
            raise ValidationError("series must be 'auto' or 'classical'")
        if self.series == "classical" and self.germ is None:
            raise ValidationError("the classical series needs a germ")
        bad = [q for q in self.primes if not is_prime(q)]
        if bad:
            raise ValidationError(f"not prime: {bad}")
        if self.budget < 1:
            raise ValidationError("budget must be positive")
        if self.germ is not None:
            self.germ_poly()
        MotivicClass.parse(self.y0_class)
        for k, v in self.claimed.items():
            if not k.isdigit() or int(k) > self.levels:
                raise ValidationError(f"claimed class for level {k!r} is out of range")
            MotivicClass.parse(v)
        pol = self.normalization()
        if pol.kind == "explicit" and len(pol.n) < self.levels + 1:
            raise ValidationError(f"explicit policy needs {self.levels + 1} exponents")
        if pol.kind == "paper" and len(pol.e) < self.levels + 1:
            raise ValidationError(f"paper policy needs {self.levels + 1} values of e")

    def germ_poly(self):
        return parse_poly(self.germ, self.vars)

    def system(self) -> AdmissibleSystem:
        if self.germ is not None:
            return AdmissibleSystem(germ=self.germ_poly())
        return AdmissibleSystem(monomial_dim=self.monomial[0])

    def normalization(self) -> NormalizationPolicy:
        try:
            return NormalizationPolicy.from_json(self.policy)
        except ValueError as exc:
            raise ValidationError(str(exc)) from exc

    def claimed_classes(self) -> Dict[int, MotivicClass]:
        return {int(k): MotivicClass.parse(v) for k, v in self.claimed.items()}


# -- count cache ----------------------------------------------------------------------

class CountCache:
    """Append-only JSON-lines store of counts keyed by (presentation digest, q).

    Each record carries the full canonical presentation so that a digest
    collision is detected instead of silently reusing a count.  Budget
    failures are stored too; they are only reused when the new budget is not
    larger than the one that failed.
    """

    def __init__(self, path: Optional[str]):
        self.path = path
        self.records: Dict[Tuple[str, int], Dict] = {}
        self.hits = 0
        self.misses = 0
        if path and os.path.exists(path):
            self._load()

    def _load(self):
        with open(self.path) as fh:
            for line in fh:
                line = line.strip()
                if line:
                    self._index(json.loads(line))

    def _index(self, rec: Dict):
        key = (rec["digest"], rec["q"])
        old = self.records.get(key)
        if old and old["status"] == "ok" and rec["status"] == "ok" and old["count"] != rec["count"]:
            raise CacheError(f"conflicting counts for {key}: {old['count']} vs {rec['count']}")
        if old is None or old["status"] != "ok":
            self.records[key] = rec

    def lookup(self, pres: SchemePresentation, q: int, budget: int) -> Optional[int]:
        rec = self.records.get((pres.digest, q))
        if rec is None:
            return None
        if rec["presentation"] != pres.canonical_text():
            raise CacheError(f"digest collision for {pres.digest[:12]} at q={q}")
        if rec["status"] == "ok":
            self.hits += 1
            log.info("cache hit %s q=%d", pres.digest[:12], q)
            return rec["count"]
        if rec["budget"] >= budget:
            self.hits += 1
            log.info("cache hit (budget exceeded) %s q=%d", pres.digest[:12], q)
            raise BudgetExceeded(rec["budget"])
        return None

    def store(self, pres: SchemePresentation, q: int, count: Optional[int], budget: int):
        rec = {"digest": pres.digest, "q": q, "presentation": pres.canonical_text(),
               "status": "ok" if count is not None else "budget_exceeded",
               "count": count, "budget": budget,
               "recorded": datetime.now(timezone.utc).isoformat(timespec="seconds")}
        old = self.records.get((pres.digest, q))
        if old and old["status"] == "ok":
            if rec["status"] == "ok" and old["count"] != count:
                raise CacheError(f"refusing to overwrite count {old['count']} with {count}")
            return
        self._index(rec)
        if not self.path:
            return
        with open(self.path, "a") as fh:
            fcntl.flock(fh, fcntl.LOCK_EX)
            try:
                fh.write(json.dumps(rec, sort_keys=True) + "\n")
                fh.flush()
                os.fsync(fh.fileno())
            finally:
                fcntl.flock(fh, fcntl.LOCK_UN)

    def counter(self, budget: int, jobs: int = 1):
        def count(pres: SchemePresentation, q: int) -> int:
            hit = self.lookup(pres, q, budget)
            if hit is not None:
                return hit
            self.misses += 1
            try:
                n = count_points(pres, q, budget, jobs=jobs)
            except BudgetExceeded:
                self.store(pres, q, None, budget)
                raise
            self.store(pres, q, n, budget)
            return n
        return count


# -- settings -------------------------------------------------------------------------

@dataclass
class Settings:
    cache: Optional[str] = None
    primes: Tuple[int, ...] = ()
    budget: int = DEFAULT_BUDGET
    policy: Optional[str] = None
    policy_n: Tuple[int, ...] = ()
    policy_e: Tuple[int, ...] = ()
    policy_dim: Optional[int] = None
    fmt: str = "json"
    jobs: int = 1


def _int_list(text) -> Tuple[int, ...]:
    if isinstance(text, (list, tuple)):
        return tuple(int(x) for x in text)
    try:
        return tuple(int(x) for x in str(text).replace(" ", "").split(",") if x)
    except ValueError as exc:
        raise ValidationError(f"expected a comma-separated integer list, got {text!r}") from exc


def _str_list(text: str) -> Tuple[str, ...]:
    return tuple(x.strip() for x in text.split(",") if x.strip())


def resolve_settings(args, scenario: Optional[Scenario], env=os.environ) -> Settings:
    """flags > AUTARC_* environment > scenario file > defaults."""
    s = Settings()
    if scenario is not None:
        s.primes = tuple(scenario.primes)
        s.budget = scenario.budget
    for name, conv in [("CACHE", str), ("PRIMES", _int_list), ("BUDGET", int), ("POLICY", str),
                       ("JOBS", int)]:
        val = env.get(ENV_PREFIX + name)
        if val:
            try:
                setattr(s, name.lower(), conv(val))
            except ValueError as exc:
                raise ValidationError(f"{ENV_PREFIX}{name}: {exc}") from exc
    if env.get(ENV_PREFIX + "LATEX", "") not in ("", "0"):
        s.fmt = "latex"
    if env.get(ENV_PREFIX + "JSON", "") not in ("", "0"):
        s.fmt = "json"
    for name in ("cache", "budget", "policy", "jobs", "policy_dim"):
        val = getattr(args, name, None)
        if val is not None:
            setattr(s, name, val)
    for name in ("primes", "policy_n", "policy_e"):
        val = getattr(args, name, None)
        if val is not None:
            setattr(s, name, _int_list(val))
    if getattr(args, "fmt", None):
        s.fmt = args.fmt
    if s.policy is not None and s.policy not in POLICIES:
        raise ValidationError(f"unknown policy {s.policy!r}")
    if any(not is_prime(q) for q in s.primes):
        raise ValidationError(f"not all primes: {list(s.primes)}")
    if s.budget < 1 or s.jobs < 1:
        raise ValidationError("budget and jobs must be positive")
    return s


# -- inputs ---------------------------------------------------------------------------

def _read_json(path: str):
    """Load a JSON file; a report's ``result`` payload is unwrapped."""
    try:
        with open(path) as fh:
            data = json.load(fh)
            if isinstance(data, dict) and "command" in data and "result" in data:
                return data["result"]
            return data
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path} is not valid JSON: {exc}") from exc


def _germ(text: str, vars: Sequence[str], translate: Optional[str]):
    f = parse_poly(text, vars)
    if translate:
        try:
            point = [Fraction(c) for c in _str_list(translate)]
        except ValueError as exc:
            raise ValidationError(f"bad translation point {translate!r}") from exc
        if len(point) != len(vars):
            raise ValidationError("translation point needs one coordinate per variable")
        f = translate_germ(f, point)
    return f


def _algebra(args):
    """The algebra selected by --germ/--level, --monomial or --ideal."""
    chosen = [x for x in ("germ", "monomial", "ideal") if getattr(args, x, None)]
    if len(chosen) != 1:
        raise ValidationError("give exactly one of --germ, --monomial, --ideal")
    vars = _str_list(args.vars)
    if args.germ:
        if args.level is None:
            raise ValidationError("--germ needs --level")
        return germ_truncation(_germ(args.germ, vars, args.translate), args.level).algebra
    if args.monomial:
        d, n = _int_list(args.monomial)
        return monomial_fatpoint(d, n).algebra
    return quotient_algebra([parse_poly(g, vars) for g in args.ideal])


def _presentation(path: str) -> SchemePresentation:
    data = _read_json(path)
    if "presentation" in data:
        data = data["presentation"]
    try:
        return SchemePresentation.from_json(data)
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"{path} is not a presentation: {exc}") from exc


# -- commands -------------------------------------------------------------------------

def _fatpoint_report(fp) -> Dict:
    out = algebra_summary(fp.algebra)
    out.update({"level": fp.level, "origin": fp.origin})
    return out


def cmd_truncate(args, settings, ctx):
    vars = _str_list(args.vars)
    fp = germ_truncation(_germ(args.poly, vars, args.translate), args.level)
    rep = _fatpoint_report(fp)
    tex = r"\mathrm{basis}: " + ", ".join(format_monomial(m, fp.algebra.vars) for m in fp.algebra.basis)
    return rep, tex + rf",\quad \mathrm{{rank}} = {fp.rank}"


def _pres_out(pres):
    eqs = r" \\ ".join(format_poly(e) + " &= 0" for e in pres.equations)
    return pres.to_json(), r"\begin{aligned}" + eqs + r"\end{aligned}"


def cmd_endo(args, settings, ctx):
    return _pres_out(endo_presentation(_algebra(args)))


def cmd_aut(args, settings, ctx):
    return _pres_out(aut_presentation(_algebra(args)))


def cmd_hom(args, settings, ctx):
    tvars = _str_list(args.target_vars)
    target = [parse_poly(t, tvars) for t in args.target or []]
    return _pres_out(hom_presentation(_algebra(args), target, tvars))


def cmd_jet(args, settings, ctx):
    vars = _str_list(args.vars)
    return _pres_out(jet_presentation(_germ(args.poly, vars, args.translate), args.order))


def cmd_count(args, settings, ctx):
    pres = _presentation(args.presentation)
    if not settings.primes:
        raise ValidationError("count needs --primes")
    counter = ctx["cache"].counter(settings.budget, settings.jobs)
    samples = []
    for q in settings.primes:
        try:
            samples.append({"q": q, "count": counter(pres, q)})
        except BudgetExceeded as exc:
            samples.append({"q": q, "status": "budget_exceeded", "budget": exc.budget})
            ctx["failed"] = True
    rep = {"digest": pres.digest, "samples": samples}
    rows = " \\\\ ".join(f"{s['q']} & {s.get('count', 'budget exceeded')}" for s in samples)
    return rep, r"\begin{tabular}{rr} q & \#X(\mathbb{F}_q) \\ " + rows + r"\end{tabular}"


def cmd_class(args, settings, ctx):
    if args.samples:
        data = _read_json(args.samples)
        raw = data.get("samples", data) if isinstance(data, dict) else data
        samples = [CountSample(s["q"], s["count"]) for s in raw if "count" in s]
        bound = args.degree_bound if args.degree_bound is not None else len(samples) - 2
        res = interpolate_class(samples, bound)
        rep = {"mode": "interpolate", "class": str(res.cls), "degree_bound": bound,
               "used": [s.q for s in res.used], "holdout": [list(h) for h in res.holdout]}
        return rep, res.cls.latex()
    if not args.presentation:
        raise ValidationError("class needs a presentation file or --samples")
    pres = _presentation(args.presentation)
    counter = ctx["cache"].counter(settings.budget, settings.jobs)
    if args.claimed:
        claimed = MotivicClass.parse(args.claimed)
        primes = settings.primes or (2, 3)
        cert = certify(pres, claimed, primes, counter=counter)
        rep = {"mode": "certify", "claimed": str(claimed), "passed": cert.passed,
               "verdicts": [{"q": q, "count": n, "expected": int(e), "ok": ok} for q, n, e, ok in cert.verdicts]}
        if not cert.passed:
            ctx["failed"] = True
        return rep, claimed.latex()
    bound = args.degree_bound if args.degree_bound is not None else pres.nvars
    primes = settings.primes or tuple(first_primes(bound + 2))
    samples = [CountSample(q, counter(pres, q), pres.digest) for q in primes]
    res = interpolate_class(samples, bound)
    rep = {"mode": "interpolate", "class": str(res.cls), "degree_bound": bound,
           "used": [s.q for s in res.used], "holdout": [list(h) for h in res.holdout]}
    return rep, res.cls.latex()


def _scenario_for_zeta(args, ctx) -> Scenario:
    sc = ctx["scenario"] or Scenario()
    data = sc.to_json()
    if args.germ:
        data["germ"], data["monomial"] = args.germ, None
    if args.monomial:
        data["monomial"], data["germ"] = list(_int_list(args.monomial)), None
    for key in ("levels", "series", "y0_class", "fiber_dim", "degree_bound"):
        val = getattr(args, key, None)
        if val is not None:
            data[key] = val
    if args.vars:
        data["vars"] = list(_str_list(args.vars))
    for item in args.claim or []:
        level, _, cls = item.partition("=")
        data.setdefault("claimed", {})[level.strip()] = cls.strip()
    return Scenario.from_json(data)


def cmd_zeta(args, settings, ctx):
    sc = _scenario_for_zeta(args, ctx)
    policy = dict(sc.policy) if isinstance(sc.policy, dict) else {"kind": sc.policy}
    if settings.policy:
        policy["kind"] = settings.policy
    if settings.policy_n:
        policy["n"] = list(settings.policy_n)
    if settings.policy_e:
        policy["e"] = list(settings.policy_e)
    if settings.policy_dim is not None:
        policy["dim"] = settings.policy_dim
    sc.policy = policy
    if settings.primes:
        sc.primes = settings.primes
    sc.budget = settings.budget
    sc.validate()
    counter = ctx["cache"].counter(sc.budget, settings.jobs)
    primes = list(sc.primes) or None
    if sc.series == "classical":
        series = classical_igusa_series(sc.germ_poly(), sc.fiber_dim, sc.levels, primes, sc.claimed_classes(),
                                        sc.degree_bound, sc.budget, counter)
    else:
        series = smooth_fiber_series(MotivicClass.parse(sc.y0_class), sc.fiber_dim, sc.system(), sc.levels,
                                     sc.normalization(), "auto", primes, sc.claimed_classes(),
                                     sc.degree_bound, sc.budget, counter)
    ctx["scenario_digest"] = sc.digest
    rep = {"scenario": sc.to_json(), "series": series.to_json(), "latex": series.latex()}
    for kind, path in sc.outputs.items():
        _write(path, series.latex() + "\n" if kind == "latex" else _dump(rep))
    return rep, series.latex()


def cmd_fit(args, settings, ctx):
    data = _read_json(args.series)
    if "series" in data:
        data = data["series"]
    try:
        series = MotivicSeries.from_json(data)
    except (KeyError, ValueError) as exc:
        raise ValidationError(f"{args.series} is not a series: {exc}") from exc
    form = fit_rational(series, args.max_a, args.max_b, args.max_factors, args.max_num_degree)
    rep = {"form": form.to_json(), "matches": form.expand(series.truncation) == series,
           "truncation": series.truncation, "latex": form.latex()}
    return rep, form.latex()


def cmd_verify(args, settings, ctx):
    if args.suite != "all" and args.suite not in SUITES:
        raise ValidationError(f"unknown suite {args.suite!r}; known: all, {', '.join(SUITES)}")
    counter = ctx["cache"].counter(settings.budget, settings.jobs)
    results = run_suite(args.suite, counter)
    rows = []
    for suite, checks in results.items():
        for c in checks:
            rows.append({"suite": suite, **c.to_json()})
    passed = all(r["passed"] for r in rows)
    if not passed:
        ctx["failed"] = True
    for r in rows:
        print(f"{'PASS' if r['passed'] else 'FAIL'}  {r['suite']}: {r['name']}", file=sys.stderr)
    body = " \\\\ ".join(f"{r['suite']} & {r['name']} & {'pass' if r['passed'] else 'FAIL'}" for r in rows)
    return {"suite": args.suite, "passed": passed, "checks": rows}, \
        r"\begin{tabular}{lll} " + body.replace("^", r"\^{}").replace("#", r"\#") + r"\end{tabular}"


# -- parser ---------------------------------------------------------------------------

def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("global options")
    g.add_argument("--scenario", help="JSON scenario file")
    g.add_argument("--cache", help="JSON-lines count cache")
    g.add_argument("--primes", help="comma-separated primes, e.g. 2,3,5")
    g.add_argument("--budget", type=int, help="search node budget per count")
    g.add_argument("--policy", choices=POLICIES, help="normalization policy")
    g.add_argument("--policy-n", help="explicit exponents n_i")
    g.add_argument("--policy-e", help="e_i for the paper-style policy")
    g.add_argument("--policy-dim", type=int, help="dim for the paper-style policy")
    fmt = g.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json", help="JSON output (default)")
    fmt.add_argument("--latex", dest="fmt", action="store_const", const="latex", help="LaTeX output")
    g.add_argument("--jobs", type=int, help="worker processes per count")
    g.add_argument("--out", help="write the report here (metadata goes to <out>.meta.json)")
    g.add_argument("-v", "--verbose", action="store_true")
    return p


def _source_args(p):
    p.add_argument("--germ", help="plane germ f(x, y) vanishing at the origin")
    p.add_argument("--level", type=int, help="truncation level i for --germ")
    p.add_argument("--monomial", help="d,n for k[x_1..x_d]/m^n")
    p.add_argument("--ideal", action="append", help="ideal generator (repeatable), with --vars")
    p.add_argument("--vars", default="x,y", help="variable names (default x,y)")
    p.add_argument("--translate", help="move this point to the origin first, e.g. 1,0")


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="autarc", description=__doc__.splitlines()[0],
                                     epilog="Global options are given after the command name.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("truncate", parents=[common], help="m-adic truncation of a plane germ")
    p.add_argument("poly")
    p.add_argument("level", type=int)
    p.add_argument("--vars", default="x,y")
    p.add_argument("--translate", help="move this point to the origin first, e.g. 1,0")
    p.set_defaults(func=cmd_truncate)

    for name, fn, text in [("endo", cmd_endo, "presentation of End(B)"),
                           ("aut", cmd_aut, "presentation of Aut(B)")]:
        p = sub.add_parser(name, parents=[common], help=text)
        _source_args(p)
        p.set_defaults(func=fn)

    p = sub.add_parser("hom", parents=[common], help="presentation of Hom(Spec B, V(target))")
    _source_args(p)
    p.add_argument("--target", action="append", help="target equation (repeatable; none means affine space)")
    p.add_argument("--target-vars", required=True, help="target coordinates, e.g. u,v")
    p.set_defaults(func=cmd_hom)

    p = sub.add_parser("jet", parents=[common], help="jet-space presentation of V(f)")
    p.add_argument("poly")
    p.add_argument("order", type=int)
    p.add_argument("--vars", default="x,y")
    p.add_argument("--translate", help="move this point to the origin first, e.g. 1,0")
    p.set_defaults(func=cmd_jet)

    p = sub.add_parser("count", parents=[common], help="F_q point counts of a presentation")
    p.add_argument("presentation")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("class", parents=[common], help="interpolate or certify a class")
    p.add_argument("presentation", nargs="?")
    p.add_argument("--samples", help="samples JSON (as written by count)")
    p.add_argument("--claimed", help="class to certify, e.g. 'L^2 - L'")
    p.add_argument("--degree-bound", type=int)
    p.set_defaults(func=cmd_class)

    p = sub.add_parser("zeta", parents=[common], help="assemble a motivic series from a scenario")
    p.add_argument("--germ")
    p.add_argument("--monomial")
    p.add_argument("--vars")
    p.add_argument("--levels", type=int)
    p.add_argument("--series", choices=("auto", "classical"))
    p.add_argument("--y0-class")
    p.add_argument("--fiber-dim", type=int)
    p.add_argument("--degree-bound", type=int)
    p.add_argument("--claim", action="append", help="LEVEL=CLASS, certified instead of interpolated")
    p.set_defaults(func=cmd_zeta)

    p = sub.add_parser("fit", parents=[common], help="fit a rational form to a series")
    p.add_argument("series")
    p.add_argument("--max-a", type=int, default=8)
    p.add_argument("--max-b", type=int, default=4)
    p.add_argument("--max-factors", type=int, default=2)
    p.add_argument("--max-num-degree", type=int, default=8)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("verify", parents=[common], help="run a named verification suite")
    p.add_argument("suite", help="one of: all, " + ", ".join(SUITES))
    p.set_defaults(func=cmd_verify)
    return parser


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _write(path: str, text: str):
    with open(path, "w") as fh:
        fh.write(text)


VALIDATION = (ValidationError, ParseError, NotAtOrigin, NotZeroDimensional, EmptyAlgebra, InsufficientSamples)
COMPUTATION = (BudgetExceeded, NoFit, CertificationFailed, NonPolynomialOrInsufficient, CacheError)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    started = datetime.now(timezone.utc).isoformat(timespec="seconds")
    try:
        scenario_path = args.scenario or os.environ.get(ENV_PREFIX + "SCENARIO")
        scenario = Scenario.from_json(_read_json(scenario_path)) if scenario_path else None
        settings = resolve_settings(args, scenario)
        ctx = {"scenario": scenario, "cache": CountCache(settings.cache), "failed": False}
        report, tex = args.func(args, settings, ctx)
    except COMPUTATION as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except VALIDATION as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    text = tex + "\n" if settings.fmt == "latex" else _dump({"command": args.command, "result": report})
    if args.out:
        _write(args.out, text)
        meta = {"started": started, "finished": datetime.now(timezone.utc).isoformat(timespec="seconds"),
                "version": __version__, "argv": list(argv if argv is not None else sys.argv[1:]),
                "cache": {"path": settings.cache, "hits": ctx["cache"].hits, "misses": ctx["cache"].misses}}
        if "scenario_digest" in ctx:
            meta["scenario_digest"] = ctx["scenario_digest"]
        _write(args.out + ".meta.json", _dump(meta))
    else:
        sys.stdout.write(text)
    log.info("cache hits %d, misses %d", ctx["cache"].hits, ctx["cache"].misses)
    return 1 if ctx["failed"] else 0


if __name__ == "__main__":
    sys.exit(main())
