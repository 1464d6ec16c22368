"""Sweep orchestration: identities, theorem bounds, certification, falsification.

Work is split into per-instance tasks described by plain tuples of ids and
numbers, so they can be shipped to worker processes. Results come back as
row dicts (see :mod:`fracineq.harness.report`) and are sorted before
serialisation, which makes the output independent of the worker count.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .. import __version__
from ..bounds import (
    REMARKS,
    THEOREMS,
    evaluate_instance,
    paper_bound,
    remark_applies,
    remark_bound,
    remark_reduction_check,
)
from ..errors import DomainError, FracIneqError
from ..identities import lemma1_residual, lemma2_residual
from ..preinvex import Instance, certify_lambda_preinvex, get_function, get_map
from .config import SweepConfig, env_jobs
from .report import RunReport, row_sort_key

__all__ = [
    "REMARK_TOL",
    "run_verify_identities",
    "run_verify_theorems",
    "run_certify",
    "run_falsify",
    "parse_theorems",
]

REMARK_TOL = 1e-12
_CAUGHT = (FracIneqError, ValueError, ArithmeticError, KeyError)


def parse_theorems(spec) -> tuple[str, ...]:
    """``"T1,T4"`` or an iterable of names -> validated, ordered tuple."""
    if spec is None:
        return THEOREMS
    items = spec.split(",") if isinstance(spec, str) else list(spec)
    names = []
    for item in items:
        name = str(item).strip().upper()
        if not name:
            continue
        if name not in THEOREMS:
            raise DomainError(f"unknown theorem {item!r}; choose from {', '.join(THEOREMS)}")
        if name not in names:
            names.append(name)
    return tuple(sorted(names))


def _params(fn_id, map_id, a, b, alpha, lam=None, q=None):
    out = {"fn": fn_id, "map": map_id, "a": a, "b": b, "alpha": alpha}
    if lam is not None:
        out["lambda"] = lam
    if q is not None:
        out["q"] = q
    return out


def _error_row(key, exc, **extra):
    row = {"kind": "error", "key": key, "status": "error", **extra,
           "error": type(exc).__name__, "message": str(exc)}
    return row


def _instance(fn_id, map_id, a, b, alpha, lam=0.5, q=2.0):
    return Instance(get_function(fn_id), get_map(map_id), a, b, alpha, lam, q)


# -- identities ---------------------------------------------------------------


def _identity_task(task):
    fn_id, map_id, a, b, alpha, qcfg = task
    key = f"{fn_id}|{map_id}|a={a!r}|b={b!r}|alpha={alpha!r}"
    params = _params(fn_id, map_id, a, b, alpha)
    try:
        inst = _instance(fn_id, map_id, a, b, alpha)
    except _CAUGHT as exc:
        return [_error_row(key, exc, **params)]
    rows = []
    for lemma, fn in (("L1", lemma1_residual), ("L2", lemma2_residual)):
        try:
            r = fn(inst, qcfg)
        except _CAUGHT as exc:
            rows.append(_error_row(key, exc, lemma=lemma, **params))
            continue
        rows.append({
            "kind": "identity", "key": key, "status": r.status, "lemma": lemma, **params,
            "lhs": r.lhs, "rhs": r.rhs, "residual": r.residual, "abs_residual": r.abs_residual,
            "combined_quadrature_error": r.combined_quadrature_error,
        })
    return rows


# -- theorems -----------------------------------------------------------------


def _bound_row(rep, params):
    return {
        "kind": "bound", "key": rep.key, "status": rep.status,
        "theorem": rep.theorem, "mode": rep.mode, **params,
        "gap": rep.gap, "paper_bound": rep.paper_bound, "oracle_bound": rep.oracle_bound,
        "oracle_bound_loose": rep.oracle_bound_loose, "slack_ratio": rep.slack_ratio,
        "bound_holds_oracle": rep.bound_holds_oracle, "bound_holds_paper": rep.bound_holds_paper,
        "paper_vs_oracle_rel_diff": rep.paper_vs_oracle_rel_diff,
        "paper_below_oracle": rep.paper_below_oracle, "certified": rep.certified,
        "tolerance": rep.tolerance, "gap_error": rep.gap_error, "oracle_error": rep.oracle_error,
        "notes": list(rep.notes),
    }


def _remark_rows(inst, theorem, params):
    rows = []
    for (th, variant) in sorted(REMARKS):
        if th != theorem or not remark_applies(th, variant, inst):
            continue
        mode = REMARKS[(th, variant)][2]
        full = remark_reduction_check(th, inst, variant, "full")
        pref = remark_reduction_check(th, inst, variant, "prefactor")
        rows.append({
            "kind": "remark", "key": inst.key, "status": "pass" if full <= REMARK_TOL else "flag",
            "theorem": th, "mode": mode, "variant": variant, **params,
            "general_bound": paper_bound(th, inst, mode), "remark_bound": remark_bound(th, variant, inst),
            "rel_diff": full, "rel_diff_prefactor": pref,
        })
    return rows


def _theorem_task(task):
    fn_id, map_id, a, b, alpha, lam, q, theorems, qcfg, grid = task
    params = _params(fn_id, map_id, a, b, alpha, lam, q)
    key = f"{fn_id}|{map_id}|a={a!r}|b={b!r}|alpha={alpha!r}|lambda={lam!r}|q={q!r}"
    try:
        inst = _instance(fn_id, map_id, a, b, alpha, lam, q)
    except _CAUGHT as exc:
        return [_error_row(key, exc, **params)]
    try:
        reports = evaluate_instance(inst, theorems, qcfg, grid)
        rows = [_bound_row(r, params) for r in reports]
        for th in theorems:
            rows.extend(_remark_rows(inst, th, params))
        return rows
    except _CAUGHT:
        pass
    # redo theorem by theorem so one failure does not hide the others
    rows = []
    for th in theorems:
        try:
            rows.extend(_bound_row(r, params) for r in evaluate_instance(inst, (th,), qcfg, grid))
            rows.extend(_remark_rows(inst, th, params))
        except _CAUGHT as exc:
            rows.append(_error_row(inst.key, exc, theorem=th, **params))
    return rows


# -- execution ----------------------------------------------------------------


def _run_tasks(worker, tasks, jobs):
    if jobs is None:
        jobs = env_jobs()
    if jobs <= 1 or len(tasks) < 2:
        out = [worker(t) for t in tasks]
    else:
        chunk = max(1, len(tasks) // (4 * jobs))
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            out = list(pool.map(worker, tasks, chunksize=chunk))
    return [row for rows in out for row in rows]


def _report(command, cfg, rows, t0, extra=None, sort=True):
    if sort:
        rows = sorted(rows, key=row_sort_key)
    return RunReport(
        command=command,
        tool_version=__version__,
        config_echo=cfg.to_dict() if cfg is not None else {},
        results=rows,
        wall_time=time.perf_counter() - t0,
        extra=extra or {},
    )


def run_verify_identities(cfg: SweepConfig, *, jobs: int | None = None) -> RunReport:
    """Check both identities on every distinct (function, map, a, b, alpha)."""
    t0 = time.perf_counter()
    seen = sorted({c[:5] for c in cfg.combinations()})
    tasks = [(*c, cfg.quadrature) for c in seen]
    return _report("identities", cfg, _run_tasks(_identity_task, tasks, jobs), t0)


def run_verify_theorems(cfg: SweepConfig, theorems=None, *, jobs: int | None = None) -> RunReport:
    """Bound reports (plus remark rows where they apply) for each instance."""
    t0 = time.perf_counter()
    names = parse_theorems(theorems)
    if not names:
        return _report("theorems", cfg, [], t0)
    tasks = [(*c, names, cfg.quadrature, cfg.certification_grid) for c in cfg.combinations()]
    return _report("theorems", cfg, _run_tasks(_theorem_task, tasks, jobs), t0)


def run_certify(fn_id: str, map_id: str, lam: float, domain=(0.5, 1.5), *, order: int = 0,
                power: float = 1.0, grid=None, cfg: SweepConfig | None = None) -> RunReport:
    """Grid-certify ``|f^(order)|^power`` as lambda-preinvex on ``domain``."""
    t0 = time.perf_counter()
    fn = get_function(fn_id)
    mp = get_map(map_id)
    target = fn.magnitude(order, power) if (order or power != 1.0) else fn
    grid = grid or (cfg.certification_grid if cfg else None)
    kwargs = {} if grid is None else {"grid": tuple(grid)}
    rep = certify_lambda_preinvex(target, mp, lam, tuple(domain), **kwargs)
    u, v, t = rep.argmax
    row = {
        "kind": "certification", "status": rep.status,
        "key": f"{fn_id}|{map_id}|lambda={lam!r}|order={order}|power={power!r}"
               f"|domain=[{domain[0]!r}, {domain[1]!r}]",
        "fn": fn_id, "map": map_id, "lambda": float(lam), "certified": rep.passed,
        "max_violation": rep.max_violation, "argmax_u": u, "argmax_v": v, "argmax_t": t,
        "grid_u": rep.grid_sizes[0], "grid_v": rep.grid_sizes[1], "grid_t": rep.grid_sizes[2],
        "tolerance": rep.tolerance, "notes": [rep.qualifier],
    }
    return _report("certify", cfg, [row], t0)


# -- falsification ------------------------------------------------------------


def _draw(rng, spec, trials):
    draws = []
    for i in range(trials):
        fn_id = spec.functions[int(rng.integers(len(spec.functions)))]
        map_id = spec.maps[int(rng.integers(len(spec.maps)))]
        a = float(rng.uniform(*spec.a))
        length = float(rng.uniform(*spec.length))
        alpha = float(rng.uniform(*spec.alpha))
        lam = float(rng.uniform(*spec.lam))
        q = float(rng.uniform(*spec.q))
        draws.append((i, fn_id, map_id, a, a + length, alpha, lam, q))
    return draws


def _falsify_task(task):
    i, fn_id, map_id, a, b, alpha, lam, q, qcfg, grid = task
    params = _params(fn_id, map_id, a, b, alpha, lam, q)
    try:
        inst = _instance(fn_id, map_id, a, b, alpha, lam, q)
        reports = evaluate_instance(inst, THEOREMS, qcfg, grid)
    except _CAUGHT as exc:
        return [("error", i, params, exc)]
    out = []
    for r in reports:
        if r.mode != "as_stated":
            continue  # the oracle does not depend on the mode
        out.append(("bound", i, params, r))
    return out


def _falsify_row(i, params, r, status):
    slack = r.slack_ratio
    return {
        "kind": "falsify", "key": r.key, "status": status, "theorem": r.theorem, "trial": i,
        **params, "gap": r.gap, "oracle_bound": r.oracle_bound, "slack_ratio": slack,
        "bound_holds_oracle": r.bound_holds_oracle, "certified": r.certified,
        "tolerance": r.tolerance,
    }


def run_falsify(cfg: SweepConfig, trials: int, seed: int, *, jobs: int | None = None) -> RunReport:
    """Random search for certified instances where the gap beats the oracle.

    Results hold every violation plus the ``top_k`` tightest certified
    (instance, theorem) pairs by ``gap / oracle_bound``. Instances where
    both vanish (constant functions) form the exact-equality class and are
    only counted.
    """
    if not isinstance(trials, int) or trials < 1:
        raise DomainError(f"trials must be a positive integer, got {trials!r}")
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    spec = cfg.falsify
    tasks = [(*d, cfg.quadrature, cfg.certification_grid) for d in _draw(rng, spec, trials)]
    records = _run_tasks(_falsify_task, tasks, jobs)

    rows, ranked = [], []
    stats = {"trials": trials, "seed": seed, "evaluated": 0, "certified": 0, "exploratory": 0,
             "exact_equality": 0, "violations": 0, "errors": 0, "max_slack_ratio": None}
    for kind, i, params, payload in records:
        if kind == "error":
            stats["errors"] += 1
            key = f"trial={i}|{params['fn']}|{params['map']}"
            rows.append(_error_row(key, payload, trial=i, **params))
            continue
        r = payload
        stats["evaluated"] += 1
        if not r.certified:
            stats["exploratory"] += 1
            continue
        stats["certified"] += 1
        if not r.bound_holds_oracle:
            stats["violations"] += 1
            rows.append(_falsify_row(i, params, r, "fail"))
            continue
        slack = r.slack_ratio
        if slack is None:
            stats["exact_equality"] += 1
            continue
        ranked.append((-slack, i, r.theorem, params, r))
    ranked.sort(key=lambda x: (x[0], x[1], x[2]))
    if ranked:
        stats["max_slack_ratio"] = -ranked[0][0]
    # violations and errors in trial order, then the top-k in ranking order
    rows.sort(key=lambda row: row["trial"])
    rows.extend(_falsify_row(i, params, r, "pass") for _, i, _, params, r in ranked[: spec.top_k])
    extra = {"falsify": stats}
    return _report("falsify", cfg, rows, t0, extra, sort=False)

