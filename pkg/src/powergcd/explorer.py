"""Enumerate gcd-closed sets and run validation campaigns and frontier searches.

Enumeration is a depth-first search that appends candidates in increasing
order.  A candidate x is rejected as soon as its gcd with some chosen
element is missing: that gcd is smaller than x, so it can never be added
later.  The order of output is therefore lexicographic on sorted tuples,
and splitting the search by first element keeps that order when the
subtrees are processed in parallel and concatenated.
"""
import json
import logging
import os
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from math import gcd
from typing import Optional

from .arith import _divisors
from .divisibility import (
    ALL_KINDS,
    PairKind,
    check_double_gtd_divisibility,
    check_single_gtd_divisibility,
    check_triple_gtd_divisibility,
    validate_theorems,
)
from .errors import ConfigInvalid
from .structure import (
    GcdSet,
    _condition_g,
    check_interval_lcm_rule,
    check_triple_gtd_identities,
    closure_class,
    gtd_table,
    is_gcd_closed,
)

log = logging.getLogger(__name__)

MODES = ("all-gcd-closed", "factor-closed-only", "divisor-lattice")

INFO, WARN, CRITICAL = "INFO", "WARN", "CRITICAL"


@dataclass(frozen=True)
class EnumConfig:
    max_element: int = 12
    max_size: Optional[int] = None  # None: no bound beyond the candidates
    mode: str = "all-gcd-closed"
    modulus: Optional[int] = None  # the M of divisor-lattice mode
    filter_max_gtd: Optional[int] = None
    filter_condition_g: Optional[bool] = None

    def validate(self):
        if not isinstance(self.max_element, int) or self.max_element < 1:
            raise ConfigInvalid(f"max_element must be >= 1, got {self.max_element!r}")
        if self.max_size is not None and (
                not isinstance(self.max_size, int) or self.max_size < 1):
            raise ConfigInvalid(f"max_size must be >= 1, got {self.max_size!r}")
        if self.mode not in MODES:
            raise ConfigInvalid(f"unknown mode {self.mode!r}; expected one of {MODES}")
        if self.mode == "divisor-lattice" and (self.modulus is None or self.modulus < 1):
            raise ConfigInvalid("divisor-lattice mode needs a positive modulus")
        return self

    @property
    def size_bound(self):
        return len(self.candidates()) if self.max_size is None else self.max_size

    def candidates(self):
        if self.mode == "divisor-lattice":
            return [d for d in _divisors(self.modulus) if d <= self.max_element]
        return list(range(1, self.max_element + 1))


def _dfs(candidates, max_size, start, prefix, factor_closed):
    chosen = list(prefix)
    members = set(chosen)

    def rec(i):
        for k in range(i, len(candidates)):
            x = candidates[k]
            if not _admissible(x, chosen, members, factor_closed):
                continue
            chosen.append(x)
            members.add(x)
            yield tuple(chosen)
            if len(chosen) < max_size:
                yield from rec(k + 1)
            chosen.pop()
            members.discard(x)

    yield from rec(start)


def _admissible(x, chosen, members, factor_closed):
    if factor_closed:
        return all(d in members for d in _divisors(x)[:-1])
    return all(gcd(x, e) in members for e in chosen)


def _jobs(cfg):
    """Split the search into independent pieces, listed in output order.

    ``(k,)`` stands for the one-element set of candidate k alone, and
    ``(k, j)`` for the whole subtree of sets starting with candidates k, j.
    Concatenating the pieces in this order reproduces the serial order.
    """
    cands = cfg.candidates()
    factor_closed = cfg.mode == "factor-closed-only"
    for k, x in enumerate(cands):
        if not _admissible(x, (), set(), factor_closed):
            continue
        yield (k,)
        if cfg.size_bound < 2:
            continue
        for j in range(k + 1, len(cands)):
            if _admissible(cands[j], (x,), {x}, factor_closed):
                yield (k, j)


def _subtree(cfg, job):
    cands = cfg.candidates()
    prefix = tuple(cands[k] for k in job)
    yield prefix
    if len(job) == 2 and cfg.size_bound > 2:
        yield from _dfs(cands, cfg.size_bound, job[1] + 1, prefix,
                        cfg.mode == "factor-closed-only")


def _keep(cfg, S):
    if cfg.filter_max_gtd is not None:
        if max(len(g) for g in gtd_table(S)) != cfg.filter_max_gtd:
            return False
    if cfg.filter_condition_g is not None:
        if _condition_g(S).holds != cfg.filter_condition_g:
            return False
    return True


def enumerate_gcd_closed(cfg):
    """Yield every gcd-closed set allowed by ``cfg`` exactly once, in order."""
    cfg.validate()
    if cfg.mode == "factor-closed-only":
        yield from enumerate_factor_closed(cfg)
        return
    yield from _enumerate(cfg)


def _enumerate(cfg):
    for job in _jobs(cfg):
        for t in _subtree(cfg, job):
            S = GcdSet(t)
            if _keep(cfg, S):
                yield S


def enumerate_factor_closed(cfg):
    """Yield the divisibility down-sets of the candidates, up to max_size."""
    cfg.validate()
    if cfg.mode != "factor-closed-only":
        cfg = replace(cfg, mode="factor-closed-only")
    yield from _enumerate(cfg)


# -- campaigns -------------------------------------------------------------

def _gtd_max(S):
    return max(len(g) for g in gtd_table(S))


def examine(S, powers, kinds):
    """Every check the campaign runs on one set, as a plain dict."""
    S = GcdSet(S)
    closed = is_gcd_closed(S)
    g_ok = _condition_g(S).holds
    out = {
        "set": list(S),
        "max_gtd": _gtd_max(S),
        "condition_G": g_ok,
        "class": closure_class(S),
        "verdicts": [],
        "lemma_violations": [],
        "singular": 0,
    }
    if closed:
        for v in check_interval_lcm_rule(S):
            out["lemma_violations"].append({"rule": "interval-lcm", "data": list(v)})
        if g_ok:
            for v in check_triple_gtd_identities(S):
                out["lemma_violations"].append(
                    {"rule": "triple-gtd identity", "data": [v[0], list(v[1]), v[2], v[3]]})
    for a, b in powers:
        tc = validate_theorems(S, a, b, kinds)
        for kind, rep in tc.reports.items():
            if rep.status != "Decided":
                out["singular"] += 1
            out["verdicts"].append({
                "a": a, "b": b, "pair_kind": kind.value,
                "hypotheses_met": tc.hypotheses_met,
                "integral": rep.integral,
                "status": rep.status,
                "witness": rep.to_dict()["witness"],
            })
        if closed and b % a == 0:
            checks = [check_single_gtd_divisibility(S, a, b),
                      check_double_gtd_divisibility(S, a, b)]
            if g_ok:
                checks.append(check_triple_gtd_divisibility(S, a, b))
            for found in checks:
                for v in found:
                    d = v.to_dict()
                    d.update(a=a, b=b)
                    out["lemma_violations"].append(d)
    return out


@dataclass
class CampaignSummary:
    sets_examined: int = 0
    hypothesis_breakdown: Counter = field(default_factory=Counter)
    violations: list = field(default_factory=list)
    informational: list = field(default_factory=list)
    singular_divisors: int = 0
    verdicts_checked: int = 0
    runtime_stats: dict = field(default_factory=dict)

    def content(self):
        """Everything except timing; two runs with one config agree on this."""
        return {
            "sets_examined": self.sets_examined,
            "hypothesis_breakdown": dict(sorted(self.hypothesis_breakdown.items())),
            "violations": self.violations,
            "informational": self.informational,
            "singular_divisors": self.singular_divisors,
            "verdicts_checked": self.verdicts_checked,
        }

    def to_dict(self):
        d = self.content()
        d["violation_count"] = len(self.violations)
        d["informational_count"] = len(self.informational)
        d["runtime_stats"] = self.runtime_stats
        return d

    def add(self, res):
        self.sets_examined += 1
        key = f"max_gtd={res['max_gtd']}|G={'yes' if res['condition_G'] else 'no'}|{res['class']}"
        self.hypothesis_breakdown[key] += 1
        self.singular_divisors += res["singular"]
        for v in res["verdicts"]:
            self.verdicts_checked += 1
            if v["integral"] is False:
                rec = {"set": res["set"], "a": v["a"], "b": v["b"],
                       "pair_kind": v["pair_kind"], "witness": v["witness"]}
                (self.violations if v["hypotheses_met"] else self.informational).append(rec)
        for lv in res["lemma_violations"]:
            self.violations.append({"set": res["set"], **lv})


def _normalize_powers(powers):
    out = []
    for a, b in powers:
        if a < 1 or b < 1:
            raise ConfigInvalid(f"powers must be positive, got {a}:{b}")
        out.append((int(a), int(b)))
    return out


def _examine_subtree(args):
    cfg, job, powers, kinds = args
    results = []
    for t in _subtree(cfg, job):
        S = GcdSet(t)
        if _keep(cfg, S):
            results.append(examine(S, powers, kinds))
    return results


def _examine_many(args):
    sets, powers, kinds = args
    return [examine(S, powers, kinds) for S in sets]


def _results(cfg, powers, kinds, threads, sets=None):
    """Per-set results in canonical order, computed with ``threads`` workers."""
    if sets is not None:
        if threads <= 1:
            for S in sets:
                yield examine(S, powers, kinds)
            return
        chunks = [sets[i::threads] for i in range(threads)]
        with ProcessPoolExecutor(threads) as pool:
            parts = list(pool.map(_examine_many, [(c, powers, kinds) for c in chunks]))
        merged = sorted((r for p in parts for r in p), key=lambda r: r["set"])
        yield from merged
        return
    if threads <= 1:
        for S in _enumerate(cfg):
            yield examine(S, powers, kinds)
        return
    jobs = [(cfg, job, powers, kinds) for job in _jobs(cfg)]
    with ProcessPoolExecutor(threads) as pool:
        for part in pool.map(_examine_subtree, jobs, chunksize=4):
            yield from part


def run_campaign(cfg=None, powers=((1, 2),), kinds=ALL_KINDS, threads=1, sets=None):
    """Validate the divisibility theorems and lemma checks over a corpus.

    The corpus is either the enumeration described by ``cfg`` or an explicit
    list ``sets``.  Non-integral verdicts on sets meeting the hypotheses (a |
    b, gcd-closed, condition G, max |G(x)| <= 3) and every lemma-check
    failure are violations; other non-integral verdicts are informational.
    """
    if sets is None:
        if cfg is None:
            raise ConfigInvalid("give a config or an explicit list of sets")
        cfg.validate()
    else:
        sets = sorted(GcdSet(S) for S in sets)
    powers = _normalize_powers(powers)
    kinds = tuple(PairKind.parse(k) for k in kinds)
    summary = CampaignSummary()
    t0 = time.perf_counter()
    for res in _results(cfg, powers, kinds, threads, sets):
        summary.add(res)
    dt = time.perf_counter() - t0
    summary.runtime_stats = {
        "seconds": round(dt, 3),
        "sets_per_second": round(summary.sets_examined / dt, 1) if dt > 0 else None,
        "threads": threads,
    }
    return summary


# -- frontier search -------------------------------------------------------

def on_frontier(S):
    """Sets outside the proven range: condition G with max |G| >= 4, or G failing."""
    S = GcdSet(S)
    if not is_gcd_closed(S):
        return False
    g_ok = _condition_g(S).holds
    return (g_ok and _gtd_max(S) >= 4) or not g_ok


def _frontier_findings(S, powers):
    S = GcdSet(S)
    g_ok = _condition_g(S).holds
    found = []
    for a, b in powers:
        for kind in ALL_KINDS:
            rep = validate_theorems(S, a, b, (kind,)).reports[kind]
            if rep.status != "Decided":
                severity = WARN
            elif rep.integral:
                continue
            elif g_ok and b % a == 0:
                severity = CRITICAL
            else:
                severity = INFO
            found.append({"set": list(S), "a": a, "b": b, "pair_kind": kind.value,
                          "severity": severity, "witness": rep.to_dict()["witness"]})
    return found


def _frontier_subtree(args):
    cfg, job, powers = args
    out = []
    n = 0
    for t in _subtree(cfg, job):
        S = GcdSet(t)
        if not _keep(cfg, S):
            continue
        n += 1
        if on_frontier(S):
            out.extend(_frontier_findings(S, powers))
    return n, out


def _job_key(job):
    return ",".join(map(str, job))


def search_frontier(cfg, powers=((1, 2),), out_path=None, threads=1, resume=False):
    """Look for divisibility failures on sets the theorems do not cover.

    Findings are appended to ``out_path`` (one JSON object per line) as each
    DFS subtree completes; ``<out_path>.progress`` records finished subtrees
    so an interrupted search restarted with ``resume=True`` skips them.
    Returns every finding, including those read back on resume.
    """
    cfg.validate()
    powers = _normalize_powers(powers)
    for a, b in powers:
        if b % a:
            raise ConfigInvalid(f"frontier search needs a | b, got {a}:{b}")
    done = set()  # finished jobs, as "k" or "k,j"
    findings = []
    progress_path = None
    if out_path is not None:
        progress_path = f"{out_path}.progress"
        if resume and os.path.exists(progress_path):
            with open(progress_path) as fh:
                done = {line.strip() for line in fh if line.strip()}
            if os.path.exists(out_path):
                with open(out_path) as fh:
                    findings = [json.loads(line) for line in fh if line.strip()]
        elif not resume:
            for p in (out_path, progress_path):
                if os.path.exists(p):
                    os.remove(p)

    jobs = [(cfg, job, powers) for job in _jobs(cfg) if _job_key(job) not in done]

    def sink(job, part):
        findings.extend(part)
        if out_path is None:
            return
        with open(out_path, "a") as fh:
            for f in part:
                fh.write(json.dumps(f) + "\n")
        with open(progress_path, "a") as fh:
            fh.write(_job_key(job) + "\n")

    if threads <= 1:
        for job in jobs:
            _, part = _frontier_subtree(job)
            sink(job[1], part)
    else:
        with ProcessPoolExecutor(threads) as pool:
            for job, (_, part) in zip(jobs, pool.map(_frontier_subtree, jobs, chunksize=4)):
                sink(job[1], part)
    findings.sort(key=lambda f: (f["set"], f["a"], f["b"], f["pair_kind"]))
    return findings

