"""Job files and the classify -> delta -> build -> verify -> reduce -> verdict pipeline.

A job is a JSON object::

    {"context": {"p": 5, "e": 2, "cap": 16, "m": null},
     "params": {...}                  # one point, or
     "points": [{...}, ...],          # an explicit list, or
     "grid": {"family": "zero", "lambda": [...], "lambda_tilde": [...],
              "L1": [...], "L2": [...], "mode": "product" | "zip",
              "exact_zero": ["L2"]},
     "region": "H03", "target_prec": "5/2", "max_iter": 20}

p-adic entries use the padic JSON forms (an integer, a list of pi-adic
coefficients, or {"digits", "known_prec", "shift"}).  Every point is
validated while parsing, so a malformed job produces no partial report.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction

from . import breuil, limits, sdm
from .families import (REGIONS, FamilyParams, ParameterError, classify_region, has_submodule,
                       in_irreducible_domain, validate)
from .padic import IndeterminateError, PadicContext, PrecisionError

STAGES = ("classify", "delta", "build", "verify", "reduce", "verdict")
VERB_STAGES = {
    "classify": ("classify",),
    "delta": ("classify", "delta"),
    "build": ("classify", "delta", "build"),
    "verify": ("classify", "delta", "build", "verify"),
    "reduce": ("classify", "delta", "build", "verify", "reduce"),
    "verdict": STAGES,
    "sweep": STAGES,
}
PARAM_KEYS = ("lambda", "lambda_tilde", "L1", "L2")


class JobError(ValueError):
    """A job file that cannot be parsed; the message names the offending field."""


@dataclass
class Job:
    ctx: PadicContext
    points: list[FamilyParams]
    m: int | None = None
    region: str | None = None
    target_prec: Fraction | None = None
    max_iter: int = 20
    stages: tuple = STAGES
    cross_check: bool = True


@dataclass
class PointReport:
    index: int
    params: FamilyParams
    stages: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {"index": self.index, "params": self.params.to_json(), "ok": self.ok,
                "failures": self.failures, **self.stages}


# parsing


def _need(obj, key, where, kind=None):
    if not isinstance(obj, dict) or key not in obj:
        raise JobError(f"{where}: missing field {key!r}")
    val = obj[key]
    if kind is not None and not isinstance(val, kind):
        raise JobError(f"{where}.{key}: expected {kind.__name__}, got {type(val).__name__}")
    return val


def _int_field(obj, key, where, default=None, lo=None):
    if key not in obj or obj[key] is None:
        if default is None and lo is not None:
            raise JobError(f"{where}: missing field {key!r}")
        return default
    val = obj[key]
    if isinstance(val, bool) or not isinstance(val, int):
        raise JobError(f"{where}.{key}: expected an integer")
    if lo is not None and val < lo:
        raise JobError(f"{where}.{key}: must be at least {lo}")
    return val


def _point(ctx, data, where) -> FamilyParams:
    if not isinstance(data, dict):
        raise JobError(f"{where}: expected an object")
    for k in ("family",) + PARAM_KEYS:
        _need(data, k, where)
    try:
        params = FamilyParams.from_json(ctx, data)
        return validate(params)
    except (ParameterError, PrecisionError, TypeError, ValueError, KeyError) as exc:
        raise JobError(f"{where}: {exc}") from None


def _grid(ctx, grid, where) -> list[FamilyParams]:
    if not isinstance(grid, dict):
        raise JobError(f"{where}: expected an object")
    fam = _need(grid, "family", where, str)
    mode = grid.get("mode", "product")
    axes = []
    for k in PARAM_KEYS:
        vals = _need(grid, k, where, list)
        if not vals:
            raise JobError(f"{where}.{k}: empty axis")
        axes.append(vals)
    if mode == "product":
        combos = list(itertools.product(*axes))
    elif mode == "zip":
        if len({len(a) for a in axes}) != 1:
            raise JobError(f"{where}: zip mode needs axes of equal length")
        combos = list(zip(*axes))
    else:
        raise JobError(f"{where}.mode: expected 'product' or 'zip'")
    exact = grid.get("exact_zero", [])
    out = []
    for n, combo in enumerate(combos):
        data = {"family": fam, "exact_zero": exact, **dict(zip(PARAM_KEYS, combo))}
        out.append(_point(ctx, data, f"{where}[{n}]"))
    return out


def parse_job(data, cap: int | None = None, fil_depth: int | None = None,
              max_iter: int | None = None, stages=None) -> Job:
    """Validate a decoded job object; command-line overrides win over the file."""
    if not isinstance(data, dict):
        raise JobError("job: expected a JSON object")
    c = _need(data, "context", "job", dict)
    p = _int_field(c, "p", "context", lo=5)
    e = _int_field(c, "e", "context", default=1, lo=1)
    cap = cap if cap is not None else _int_field(c, "cap", "context", default=16, lo=1)
    m = fil_depth if fil_depth is not None else _int_field(c, "m", "context")
    try:
        ctx = PadicContext(p, e, cap)
    except ValueError as exc:
        raise JobError(f"context: {exc}") from None
    if m is not None and m <= p:
        raise JobError(f"context.m: truncation depth must exceed p = {p}")
    sources = [k for k in ("params", "points", "grid") if k in data]
    if len(sources) != 1:
        raise JobError("job: give exactly one of 'params', 'points', 'grid'")
    src = sources[0]
    if src == "params":
        points = [_point(ctx, data["params"], "params")]
    elif src == "points":
        pts = _need(data, "points", "job", list)
        if not pts:
            raise JobError("points: empty list")
        points = [_point(ctx, d, f"points[{n}]") for n, d in enumerate(pts)]
    else:
        points = _grid(ctx, data["grid"], "grid")
    region = data.get("region")
    if region is not None:
        fams = {pt.family for pt in points}
        if not any(region in REGIONS[f] for f in fams):
            raise JobError(f"region: {region!r} is not a region of family {sorted(fams)}")
    tp = data.get("target_prec")
    try:
        tp = None if tp is None else Fraction(str(tp))
    except ValueError:
        raise JobError(f"target_prec: cannot read {data['target_prec']!r} as a rational") from None
    mi = max_iter if max_iter is not None else _int_field(data, "max_iter", "job", default=20, lo=1)
    st = tuple(stages) if stages is not None else tuple(data.get("stages", STAGES))
    for s in st:
        if s not in STAGES:
            raise JobError(f"stages: unknown stage {s!r}")
    return Job(ctx, points, m, region, tp, mi, st, bool(data.get("cross_check", True)))


def load_job(text: str, **overrides) -> Job:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise JobError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return parse_job(data, **overrides)


# running

_ERRORS = (ParameterError, PrecisionError, IndeterminateError, ValueError, ZeroDivisionError)


def _fail(rep: PointReport, stage: str, what: str, margin=None):
    rep.failures.append({"stage": stage, "check": what,
                         "margin": None if margin is None else str(margin)})


def _verification_failures(rep, region, ver):
    for r in ver.reports:
        for c in r.failures():
            _fail(rep, "verify", f"{region}: {r.title}: {c.name}", c.margin)


def run_point(job: Job, index: int, params: FamilyParams) -> PointReport:
    rep = PointReport(index, params)
    want = set(job.stages)
    st = rep.stages
    regions: list[str] = []
    in_domain = in_irreducible_domain(params)
    try:
        sub = has_submodule(params)
    except IndeterminateError as exc:
        sub = None
        st["submodule_error"] = str(exc)
    cls = {"in_domain": in_domain, "submodule": sub}
    if in_domain:
        try:
            regions = sorted(classify_region(params))
        except _ERRORS as exc:
            cls["error"] = str(exc)
            if "classify" in want:
                _fail(rep, "classify", str(exc))
    if job.region is not None:
        if job.region in regions or not in_domain:
            regions = [job.region] if in_domain else []
        else:
            cls["requested_region"] = job.region
            _fail(rep, "classify", f"parameters not in requested region {job.region}")
            regions = []
    cls["regions"] = regions
    if "classify" in want:
        st["classify"] = cls
    S = None
    if want & {"build", "verify", "reduce"} and regions:
        S = sdm.working_ring(job.ctx, job.m)

    deltas = {}
    if want & {"delta", "build", "verify", "reduce"}:
        out = {}
        for r in regions:
            if r not in sdm.DELTA_REGIONS:
                continue
            try:
                d, cert = limits.delta(limits.KIND_OF[r], params, job.target_prec, job.max_iter)
                deltas[r] = d
                out[r] = {"delta": d.to_json(), "certificate": cert.to_json()}
                if cert.refuted():
                    bad = next(x for x in cert.records if False in (x.gap_ok, x.vG_eq_vH, x.part2_ok))
                    _fail(rep, "delta", f"{r}: certificate refuted at step {bad.m}",
                          bad.gap.lb - bad.bound)
            except _ERRORS as exc:
                out[r] = {"error": str(exc)}
                _fail(rep, "delta", f"{r}: {exc}")
        if "delta" in want:
            st["delta"] = out

    modules = {}
    if want & {"build", "verify", "reduce"}:
        out = {}
        for r in regions:
            if r in sdm.DELTA_REGIONS and r not in deltas:
                out[r] = {"error": "no limit Delta"}
                continue
            try:
                M = sdm.build(params, r, deltas.get(r), S=S)
                modules[r] = M
                out[r] = M.to_json() if "build" in want else {"built": True}
            except _ERRORS as exc:
                out[r] = {"error": str(exc)}
                _fail(rep, "build", f"{r}: {exc}")
        if "build" in want:
            st["build"] = out

    verified = {}
    if want & {"verify", "reduce"}:
        out = {}
        for r, M in modules.items():
            try:
                ver = sdm.verify(M, job.cross_check)
                verified[r] = ver
                out[r] = {"ok": ver.ok, "reports": [x.to_json() for x in ver.reports]}
                _verification_failures(rep, r, ver)
            except _ERRORS as exc:
                out[r] = {"error": str(exc)}
                _fail(rep, "verify", f"{r}: {exc}")
        if "verify" in want:
            st["verify"] = out

    reduced = {}
    if "reduce" in want:
        out = {}
        for r, ver in verified.items():
            if not ver.ok:
                out[r] = {"error": "lattice failed verification"}
                continue
            try:
                B = breuil.reduce(ver)
                exp = breuil.expected_shape(params, r)
                match = breuil.shapes_match(B, exp)
                reduced[r] = B
                out[r] = {"module": B.to_json(), "shape": breuil.SHAPE_OF[r],
                          "matches_expected": match, "degenerate": exp.degenerate}
                if not match:
                    _fail(rep, "reduce", f"{r}: reduction differs from the tabulated shape")
            except _ERRORS as exc:
                out[r] = {"error": str(exc)}
                _fail(rep, "reduce", f"{r}: {exc}")
        st["reduce"] = out

    if "verdict" in want:
        try:
            ver = breuil.classify_irreducible(params)
            out = ver.to_json()
            agree = {}
            for r, B in reduced.items():
                mv = breuil.module_verdict(B)
                agree[r] = mv.irreducible == ver.irreducible and mv.i == ver.i
                if not agree[r]:
                    _fail(rep, "verdict", f"{r}: module verdict {mv.clause} disagrees with {ver.clause}")
            if agree:
                out["module_agrees"] = agree
            st["verdict"] = out
        except _ERRORS as exc:
            st["verdict"] = {"error": str(exc)}
            _fail(rep, "verdict", str(exc))
    return rep


@dataclass
class JobReport:
    job: Job
    points: list[PointReport]

    @property
    def ok(self) -> bool:
        return all(pt.ok for pt in self.points)

    def summary(self) -> dict:
        verdicts = {"irreducible": 0, "reducible": 0, "error": 0}
        for pt in self.points:
            vd = pt.stages.get("verdict")
            if vd is None:
                continue
            if "error" in vd:
                verdicts["error"] += 1
            else:
                verdicts["irreducible" if vd["irreducible"] else "reducible"] += 1
        return {"points": len(self.points), "ok": sum(pt.ok for pt in self.points),
                "failed": sum(not pt.ok for pt in self.points),
                "verdicts": verdicts if any(verdicts.values()) else None}

    def to_json(self) -> dict:
        c = self.job.ctx
        return {"context": {"p": c.p, "e": c.e, "cap": c.cap,
                            "m": self.job.m if self.job.m is not None else sdm.working_depth(c.p)},
                "stages": list(self.job.stages), "ok": self.ok,
                "summary": self.summary(),
                "points": [pt.to_json() for pt in self.points]}


def run(job: Job) -> JobReport:
    """Run every point; a failing point is recorded and the sweep goes on."""
    reports = []
    for n, params in enumerate(job.points):
        try:
            reports.append(run_point(job, n, params))
        except Exception as exc:  # isolation: an unexpected error stays with its point
            rep = PointReport(n, params)
            _fail(rep, "internal", f"{type(exc).__name__}: {exc}")
            reports.append(rep)
    return JobReport(job, reports)


def dumps(obj) -> str:
    """Deterministic JSON text."""
    return json.dumps(obj, indent=2, sort_keys=True, default=str) + "\n"


def describe(report: JobReport) -> str:
    """A short human summary, one line per point."""
    c = report.job.ctx
    lines = [f"p={c.p} e={c.e} cap={c.cap} stages={','.join(report.job.stages)}"]
    for pt in report.points:
        st = pt.stages
        regs = st.get("classify", {}).get("regions")
        bits = [f"point {pt.index}: {pt.params.family}"]
        if regs is not None:
            bits.append("regions=" + (",".join(regs) or "-"))
        if "verify" in st:
            bits.append("verify=" + ",".join(
                f"{r}:{'ok' if x.get('ok') else 'FAIL'}" for r, x in sorted(st["verify"].items())) or "-")
        vd = st.get("verdict")
        if vd is not None and "error" not in vd:
            bits.append(("irreducible" if vd["irreducible"] else "reducible") + f" ({vd['clause']})")
        bits.append("ok" if pt.ok else f"FAILED ({len(pt.failures)})")
        lines.append("  ".join(bits))
        for f in pt.failures:
            m = "" if f["margin"] is None else f" margin {f['margin']}"
            lines.append(f"    {f['stage']}: {f['check']}{m}")
    s = report.summary()
    lines.append(f"{s['ok']}/{s['points']} points ok")
    return "\n".join(lines)
