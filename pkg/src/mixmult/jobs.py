"""Declarative job files, task execution, and report emission.

Job grammar (format version 1), one ``key: value`` per line, ``#`` comments:

    version: 1
    ring: d=2 p=1
    A: [2,0]                      # optional x-ideal generators
    F: [1,0]@1 [0,1]@1            # term vectors x^a e_j, written [a]@j
    E1: [2,0]@1 [0,3]@1
    task: lengths n=1..4 p=0..1 r=0..2
    task: mixed j=0 k0=1 k=1
    task: br E=E1 j=0
    task: check-fc mode=weak source=1 candidate=[1,0]@1
    task: check-superficial source=1 candidate=[1,0]@1
    task: check-jr g1=[1,0]@1,[0,1]@1
    task: verify-saturated j=0 k0=1 k=1 seq=1:[1,0]@1
    task: verify-height j=0 k0=1 k=1 seq=1:[1,0]@1
    task: verify-reduction j=0 k0=1 k=1 ys=[1,0]@1 xs=1:[0,1]@1
    task: verify-superficial k0=1 k=1 seq=1:[1,0]@1
    task: verify-module-family j=0 seq=1:[1,0]@1;1:[0,1]@1
    task: oracle-regen out=expected.json

Values never contain whitespace.  Ranges are inclusive (``0..4``), integer
lists are comma-separated, candidate sequences are ``source:[term]@c``
joined by ``;``.  Reports are emitted as aligned text (``human``), stable
JSON (``structured``), or CSV length tables (``csv-tables``); identical
job + tool version gives byte-identical structured output apart from the
``volatile`` section.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field

from mixmult import __version__
from mixmult.cache import LengthCache
from mixmult.corpus import CORPUS_SPECS
from mixmult.engine import GridSpec, Setup, fill_table
from mixmult.errors import (
    ArityError,
    JobError,
    MixmultError,
    ParseError,
    UnknownReference,
)
from mixmult.harness import (
    verify_generated_reduction,
    verify_height_quotient,
    verify_module_family,
    verify_saturated_quotient,
    verify_superficial_reduction,
)
from mixmult.multiplicity import (
    MultiIndex,
    WindowPolicy,
    buchsbaum_rim_vector,
    multiplicity_report,
)
from mixmult.oracle import regenerate_expected
from mixmult.sequences import (
    Candidate,
    CheckWindow,
    check_fc1,
    check_fc2,
    check_fc3,
    check_joint_reduction,
    check_sequence,
    check_superficial,
    check_superficial_sequence,
)

FORMAT_VERSION = 1

VERIFY_KINDS = (
    "verify-saturated",
    "verify-height",
    "verify-reduction",
    "verify-superficial",
    "verify-module-family",
)
TASK_KINDS = (
    "lengths",
    "mixed",
    "br",
    "check-fc",
    "check-superficial",
    "check-jr",
    "oracle-regen",
) + VERIFY_KINDS


@dataclass
class Task:
    kind: str
    params: dict
    line: int


@dataclass
class JobSpec:
    d: int
    p: int
    a_terms: list
    f_terms: list
    e_terms: list
    tasks: list[Task]

    @property
    def q(self) -> int:
        return len(self.e_terms)

    def canonical_text(self) -> str:
        lines = [f"version: {FORMAT_VERSION}", f"ring: d={self.d} p={self.p}"]
        if self.a_terms:
            lines.append("A: " + " ".join(_render_xvec(x) for x in self.a_terms))
        lines.append("F: " + " ".join(_render_term(t) for t in self.f_terms))
        for i, terms in enumerate(self.e_terms, start=1):
            lines.append(f"E{i}: " + " ".join(_render_term(t) for t in terms))
        for task in self.tasks:
            lines.append(f"task: {task.kind}" + _render_params(task.params))
        return "\n".join(lines) + "\n"


def _render_xvec(x) -> str:
    return "[" + ",".join(str(v) for v in x) + "]"


def _render_term(t) -> str:
    x, c = t
    return f"{_render_xvec(x)}@{c}"


def _render_candidate(c) -> str:
    src, term = c
    return f"{src}:{_render_term(term)}"


def _render_params(params: dict) -> str:
    out = []
    for key in sorted(params):
        val = params[key]
        if isinstance(val, str):
            text = val
        elif isinstance(val, range):
            text = f"{val.start}..{val.stop - 1}"
        elif isinstance(val, int):
            text = str(val)
        elif isinstance(val, list) and val and isinstance(val[0], range):
            text = ",".join(f"{r.start}..{r.stop - 1}" for r in val)
        elif isinstance(val, list) and val and isinstance(val[0], tuple) and len(val[0]) == 2 and isinstance(val[0][1], tuple):
            text = ";".join(_render_candidate(c) for c in val)
        elif isinstance(val, list) and val and isinstance(val[0], tuple):
            text = ",".join(_render_term(t) for t in val)
        elif isinstance(val, list):
            text = ",".join(str(v) for v in val)
        elif isinstance(val, tuple):
            text = _render_term(val)
        else:
            text = str(val)
        out.append(f" {key}={text}")
    return "".join(out)


# -- parsing ----------------------------------------------------------------


def _split_toplevel(text: str, sep: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p for p in parts if p != ""]


def _parse_xvec(text: str, line: int) -> tuple[int, ...]:
    if not (text.startswith("[") and text.endswith("]")):
        raise ParseError(line, f"expected an exponent vector like [1,0], got {text!r}")
    try:
        return tuple(int(v) for v in text[1:-1].split(",") if v != "")
    except ValueError:
        raise ParseError(line, f"non-integer exponent in {text!r}") from None


def _parse_term(text: str, line: int) -> tuple[tuple[int, ...], int]:
    if "@" not in text:
        raise ParseError(line, f"expected a term like [1,0]@1, got {text!r}")
    vec, comp = text.rsplit("@", 1)
    try:
        return _parse_xvec(vec, line), int(comp)
    except ValueError:
        raise ParseError(line, f"non-integer component in {text!r}") from None


def _parse_candidate(text: str, line: int):
    if ":" not in text:
        raise ParseError(line, f"expected source:[term]@c, got {text!r}")
    src, term = text.split(":", 1)
    try:
        return int(src), _parse_term(term, line)
    except ValueError:
        raise ParseError(line, f"non-integer source in {text!r}") from None


def _parse_range(text: str, line: int) -> range:
    if ".." in text:
        lo, hi = text.split("..", 1)
        try:
            return range(int(lo), int(hi) + 1)
        except ValueError:
            raise ParseError(line, f"bad range {text!r}") from None
    try:
        v = int(text)
    except ValueError:
        raise ParseError(line, f"bad range {text!r}") from None
    return range(v, v + 1)


def _parse_task_params(kind: str, tokens: list[str], line: int) -> dict:
    params: dict = {}
    for tok in tokens:
        if "=" not in tok:
            raise ParseError(line, f"task parameter {tok!r} is not key=value")
        key, val = tok.split("=", 1)
        if key in ("j", "k0", "source", "base", "window", "kmax", "threshold"):
            try:
                params[key] = int(val)
            except ValueError:
                raise ParseError(line, f"parameter {key} must be an integer") from None
        elif key in ("n", "p"):
            params[key] = _parse_range(val, line)
        elif key == "r":
            params[key] = [_parse_range(part, line) for part in _split_toplevel(val, ",")]
        elif key == "k":
            params[key] = [int(v) for v in _split_toplevel(val, ",")] if val else []
        elif key == "candidate":
            params[key] = _parse_term(val, line)
        elif key in ("seq", "xs"):
            params[key] = [_parse_candidate(part, line) for part in _split_toplevel(val, ";")]
        elif key in ("ys", "g1s") or key.startswith("g"):
            params[key] = [_parse_term(part, line) for part in _split_toplevel(val, ",")]
        elif key in ("mode", "E", "out"):
            params[key] = val
        else:
            raise ParseError(line, f"unknown parameter {key!r} for task {kind}")
    return params


def parse_job(text: str) -> JobSpec:
    d = p = None
    a_terms: list = []
    f_terms: list = []
    e_terms: dict[int, list] = {}
    tasks: list[Task] = []
    seen_version = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise ParseError(lineno, "expected 'key: value'")
        key, val = (part.strip() for part in line.split(":", 1))
        if key == "version":
            if val != str(FORMAT_VERSION):
                raise ParseError(lineno, f"unsupported format version {val!r}")
            seen_version = True
        elif key == "ring":
            fields = dict(tok.split("=", 1) for tok in val.split() if "=" in tok)
            try:
                d, p = int(fields["d"]), int(fields["p"])
            except (KeyError, ValueError):
                raise ParseError(lineno, "ring line must read ring: d=<int> p=<int>") from None
        elif key == "A":
            a_terms = [(_parse_xvec(tok, lineno), lineno) for tok in val.split()]
        elif key == "F":
            f_terms = [(_parse_term(tok, lineno), lineno) for tok in val.split()]
        elif key.startswith("E"):
            try:
                idx = int(key[1:])
            except ValueError:
                raise ParseError(lineno, f"unknown section {key!r}") from None
            e_terms[idx] = [(_parse_term(tok, lineno), lineno) for tok in val.split()]
        elif key == "task":
            tokens = val.split()
            if not tokens:
                raise ParseError(lineno, "empty task line")
            kind = tokens[0]
            if kind not in TASK_KINDS:
                raise ParseError(lineno, f"unknown task kind {kind!r}")
            tasks.append(Task(kind, _parse_task_params(kind, tokens[1:], lineno), lineno))
        else:
            raise ParseError(lineno, f"unknown section {key!r}")

    if not seen_version:
        raise ParseError(1, "missing 'version:' line")
    if d is None:
        raise ParseError(1, "missing 'ring:' line")
    if sorted(e_terms) != list(range(1, len(e_terms) + 1)):
        raise ParseError(1, "E sections must be numbered E1, E2, ... without gaps")

    # arity and reference validation
    def check_xvec(vec, lineno):
        if len(vec) != d:
            raise ArityError(lineno, f"exponent vector {list(vec)} has arity {len(vec)}, ring has d={d}")

    def check_term(term, lineno):
        vec, comp = term
        check_xvec(vec, lineno)
        if not 1 <= comp <= p:
            raise ArityError(lineno, f"component {comp} out of range 1..{p}")

    a_clean = []
    for vec, lineno in a_terms:
        check_xvec(vec, lineno)
        a_clean.append(vec)
    f_clean = []
    for term, lineno in f_terms:
        check_term(term, lineno)
        f_clean.append(term)
    e_clean = []
    for idx in sorted(e_terms):
        cleaned = []
        for term, lineno in e_terms[idx]:
            check_term(term, lineno)
            cleaned.append(term)
        e_clean.append(cleaned)

    spec = JobSpec(d, p, a_clean, f_clean, e_clean, tasks)
    _validate_references(spec)
    return spec


def _validate_references(spec: JobSpec):
    q = spec.q
    for task in spec.tasks:
        pr = task.params
        if "E" in pr:
            name = pr["E"]
            if name != "F" and not (
                name.startswith("E") and name[1:].isdigit() and 1 <= int(name[1:]) <= q
            ):
                raise UnknownReference(task.line, f"task references undeclared module {name!r}")
        for key in ("seq", "xs"):
            for src, _ in pr.get(key, []):
                lo = 0 if task.kind in ("verify-module-family", "check-fc") else 1
                if not lo <= src <= q:
                    raise UnknownReference(task.line, f"candidate source {src} has no module")
        if "source" in pr and not 1 <= pr["source"] <= q:
            raise UnknownReference(task.line, f"candidate source {pr['source']} has no module")
        if "k" in pr and len(pr["k"]) != q:
            raise ArityError(task.line, f"k has {len(pr['k'])} entries, job declares q={q}")
        for key in pr:
            if key.startswith("g") and key[1:].isdigit() and int(key[1:]) > q:
                raise UnknownReference(task.line, f"group {key} has no module")
        if "r" in pr and len(pr["r"]) != q:
            raise ArityError(task.line, f"r has {len(pr['r'])} ranges, job declares q={q}")


# -- execution ----------------------------------------------------------------


@dataclass
class RunOptions:
    window: int | None = None
    base: int | None = None
    kmax: int = 64
    threads: int = 1
    seed: int = 0
    cache: LengthCache | None = None


@dataclass
class Report:
    job_echo: str
    results: list = field(default_factory=list)
    warnings: list = field(default_factory=list)
    volatile: dict = field(default_factory=dict)

    @property
    def failed(self) -> bool:
        for res in self.results:
            if "error" in res:
                return True
            payload = res.get("result", {})
            if isinstance(payload, dict) and payload.get("verdict") == "refuted":
                return True
        return False

    def payload(self, include_volatile: bool = True) -> dict:
        out = {
            "format": f"mixmult-report/{FORMAT_VERSION}",
            "tool_version": __version__,
            "job": self.job_echo,
            "results": self.results,
            "warnings": self.warnings,
        }
        if include_volatile:
            out["volatile"] = self.volatile
        return out


def _policy(options: RunOptions, params: dict) -> WindowPolicy:
    return WindowPolicy(
        base=params.get("base", options.base),
        span=params.get("window", options.window) or 3,
    )


def _window(setup: Setup, options: RunOptions, params: dict) -> CheckWindow:
    from mixmult.sequences import default_window

    win = default_window(setup)
    thr = params.get("threshold")
    span = params.get("window", options.window)
    if thr is not None or span is not None:
        win = CheckWindow(threshold=thr if thr is not None else win.threshold,
                          span=span or win.span)
    return win


def _candidates(setup: Setup, pairs) -> list[Candidate]:
    return [Candidate(src, setup.ctx.term(x, c)) for src, (x, c) in pairs]


def _multi_index(params: dict) -> MultiIndex:
    return MultiIndex(
        j=params.get("j", 0), k0=params.get("k0", 0), k=tuple(params.get("k", []))
    )


def _run_task(spec: JobSpec, setup: Setup, task: Task, options: RunOptions) -> dict:
    pr = task.params
    kind = task.kind
    policy = _policy(options, pr)
    if kind == "lengths":
        grid = GridSpec(
            tuple(pr.get("n", range(0, 4))),
            tuple(pr.get("p", range(0, 1))),
            tuple(tuple(r) for r in pr.get("r", [range(0, 1)] * spec.q)),
        )
        table = fill_table(setup, grid, threads=options.threads)
        return {
            "axes": {"n": list(grid.n_values), "p": list(grid.p_values),
                     "r": [list(v) for v in grid.r_values]},
            "rows": [list(row) for row in table.rows()],
        }
    if kind == "mixed":
        indices = None
        if "k0" in pr or "j" in pr or "k" in pr:
            indices = [_multi_index(pr)]
        return multiplicity_report(setup, indices, policy).payload()
    if kind == "br":
        name = pr.get("E", "F")
        mod = setup.f if name == "F" else setup.e_list[int(name[1:]) - 1]
        pair = setup.pair(new_f=mod)
        if "j" in pr:
            vec = buchsbaum_rim_vector(pair, pr["j"], policy)
            return {"module": name, "e": vec, "j": pr["j"], "value": vec[pr["j"]]}
        from mixmult.multiplicity import detect_degree

        deg = detect_degree(pair, policy)
        return {"module": name, "degree": deg, "e": buchsbaum_rim_vector(pair, deg, policy)}
    if kind == "check-fc":
        window = _window(setup, options, pr)
        mode = pr.get("mode", "weak")
        if "seq" in pr:
            return check_sequence(setup, _candidates(setup, pr["seq"]), mode=mode,
                                  window=window).payload()
        cand = Candidate(pr["source"], setup.ctx.term(*pr["candidate"]))
        reports = [check_fc1(setup, cand, window), check_fc2(setup, cand)]
        if mode == "fc":
            reports.append(check_fc3(setup, cand))
        return {"checks": [r.payload() for r in reports],
                "verdict": "pass" if all(r.passed for r in reports) else "fail"}
    if kind == "check-superficial":
        window = _window(setup, options, pr)
        if "seq" in pr:
            return check_superficial_sequence(setup, _candidates(setup, pr["seq"]),
                                              window).payload()
        cand = Candidate(pr["source"], setup.ctx.term(*pr["candidate"]))
        return check_superficial(setup, cand, window).payload()
    if kind == "check-jr":
        window = _window(setup, options, pr)
        groups = []
        for i in range(1, spec.q + 1):
            key = f"g{i}"
            if key not in pr:
                break
            groups.append([setup.ctx.term(x, c) for x, c in pr[key]])
        return check_joint_reduction(setup, groups, window).payload()
    if kind in VERIFY_KINDS:
        window = _window(setup, options, pr)
        if kind == "verify-saturated":
            case = verify_saturated_quotient(setup, _candidates(setup, pr.get("seq", [])),
                                             _multi_index(pr), window, policy)
        elif kind == "verify-height":
            case = verify_height_quotient(setup, _candidates(setup, pr.get("seq", [])),
                                          _multi_index(pr), window, policy)
        elif kind == "verify-reduction":
            case = verify_generated_reduction(
                setup,
                [setup.ctx.term(x, c) for x, c in pr.get("ys", [])],
                _candidates(setup, pr.get("xs", [])),
                _multi_index(pr),
                g1s=[setup.ctx.term(x, c) for x, c in pr.get("g1s", [])],
                window=window, policy=policy)
        elif kind == "verify-superficial":
            case = verify_superficial_reduction(setup, _candidates(setup, pr.get("seq", [])),
                                                _multi_index(pr), window, policy)
        else:
            case = verify_module_family(
                spec.d, spec.p, spec.e_terms,
                [(src, x, c) for src, (x, c) in pr.get("seq", [])],
                pr.get("j", 0), window, policy, kmax=options.kmax)
        return case.payload()
    if kind == "oracle-regen":
        outered = regenerate_expected(CORPUS_SPECS, pr.get("out"))
        return {"written": pr.get("out"), "setups": sorted(outered["setups"])}
    raise JobError(task.line, f"unhandled task kind {kind!r}")


def run_job(spec: JobSpec, options: RunOptions | None = None) -> Report:
    options = options or RunOptions()
    started = time.monotonic()
    setup = Setup.build(spec.d, spec.p, spec.a_terms, spec.f_terms, spec.e_terms,
                        kmax=options.kmax)
    if options.cache is not None:
        setup.persistent_cache = options.cache
    report = Report(job_echo=JobSpec(spec.d, spec.p, spec.a_terms, spec.f_terms,
                                     spec.e_terms, spec.tasks).canonical_text())
    if options.cache is not None:
        report.warnings.extend(options.cache.warnings)
    timings = []
    for i, task in enumerate(spec.tasks):
        t0 = time.monotonic()
        entry = {"task": i + 1, "kind": task.kind}
        try:
            entry["result"] = _run_task(spec, setup, task, options)
        except MixmultError as exc:
            entry["error"] = {"type": type(exc).__name__, "message": str(exc)}
        report.results.append(entry)
        timings.append({"task": i + 1, "seconds": round(time.monotonic() - t0, 6)})

    audit = _audit_cache(spec, options)
    if audit is not None:
        report.volatile["cache_audit"] = audit["summary"]
        if audit["mismatches"]:
            report.results.append({"task": "cache-audit",
                                   "error": {"type": "CacheMismatch",
                                             "message": f"{audit['mismatches']} cached cells disagree"}})
    report.volatile["timing"] = timings
    report.volatile["elapsed_seconds"] = round(time.monotonic() - started, 6)
    return report


def _audit_cache(spec: JobSpec, options: RunOptions):
    """Recompute a 1% sample of this run's cache hits from scratch."""
    cache = options.cache
    if cache is None or not cache.hits:
        return None
    fresh = Setup.build(spec.d, spec.p, spec.a_terms, spec.f_terms, spec.e_terms,
                        kmax=options.kmax)
    rng = random.Random(options.seed)
    own = [h for h in cache.hits if h[0] == fresh.fingerprint]
    sample_size = max(1, len(own) // 100) if own else 0
    sample = rng.sample(own, min(sample_size, len(own))) if own else []
    mismatches = 0
    for _, cell, value in sample:
        if fresh.h_value(cell[0], cell[1], cell[2]) != value:
            mismatches += 1
    return {"summary": {"hits": len(own), "checked": len(sample)}, "mismatches": mismatches}


# -- emission ----------------------------------------------------------------


def emit(report: Report, fmt: str = "structured") -> bytes:
    if fmt == "structured":
        return (json.dumps(report.payload(), indent=2, sort_keys=True) + "\n").encode()
    if fmt == "human":
        return _emit_human(report).encode()
    if fmt == "csv-tables":
        return _emit_csv(report).encode()
    raise MixmultError(f"unknown format {fmt!r}")


def _emit_human(report: Report) -> str:
    lines = [f"mixmult report (tool {__version__})", ""]
    for res in report.results:
        head = f"task {res['task']}: {res.get('kind', '?')}"
        lines.append(head)
        lines.append("-" * len(head))
        if "error" in res:
            lines.append(f"  ERROR {res['error']['type']}: {res['error']['message']}")
        else:
            for ln in json.dumps(res["result"], indent=2, sort_keys=True).splitlines():
                lines.append("  " + ln)
        lines.append("")
    for w in report.warnings:
        lines.append(f"warning: {w}")
    return "\n".join(lines) + "\n"


def _emit_csv(report: Report) -> str:
    blocks = []
    for res in report.results:
        if res.get("kind") != "lengths" or "result" not in res:
            continue
        axes = res["result"]["axes"]
        q = len(axes["r"])
        header = ",".join(["n", "p"] + [f"r{i + 1}" for i in range(q)] + ["value"])
        rows = [",".join(str(v) for v in row) for row in res["result"]["rows"]]
        blocks.append(f"# task {res['task']}\n" + "\n".join([header] + rows))
    return ("\n\n".join(blocks) + "\n") if blocks else "# no length tables\n"
