import json
from itertools import combinations

import pytest

from powergcd.errors import ConfigInvalid
from powergcd.explorer import (
    CRITICAL,
    INFO,
    WARN,
    EnumConfig,
    enumerate_factor_closed,
    enumerate_gcd_closed,
    on_frontier,
    run_campaign,
    search_frontier,
)
from powergcd.structure import GcdSet, _condition_g, is_factor_closed, is_gcd_closed, max_gtd


def brute_force(n, predicate):
    out = set()
    for mask in range(1, 1 << n):
        S = GcdSet([i + 1 for i in range(n) if mask >> i & 1])
        if predicate(S):
            out.add(S)
    return out


def test_small_counts():
    assert len(list(enumerate_gcd_closed(EnumConfig(4, 4)))) == 12
    assert list(enumerate_gcd_closed(EnumConfig(1))) == [(1,)]
    assert GcdSet([1, 2, 3, 6]) in set(enumerate_gcd_closed(EnumConfig(6, filter_max_gtd=2)))
    assert list(enumerate_factor_closed(EnumConfig(3))) == [(1,), (1, 2), (1, 2, 3), (1, 3)]
    assert list(enumerate_factor_closed(EnumConfig(1))) == [(1,)]


@pytest.mark.parametrize("n", range(1, 11))
def test_dfs_matches_brute_force(n):
    got = list(enumerate_gcd_closed(EnumConfig(n)))
    assert len(got) == len(set(got))
    assert set(got) == brute_force(n, is_gcd_closed)
    assert got == sorted(got)
    fc = list(enumerate_factor_closed(EnumConfig(n)))
    assert set(fc) == brute_force(n, is_factor_closed)


def test_size_bound_and_filters():
    for S in enumerate_gcd_closed(EnumConfig(12, 3)):
        assert len(S) <= 3 and is_gcd_closed(S)
    bounded = set(enumerate_gcd_closed(EnumConfig(10, 4)))
    assert bounded == {S for S in brute_force(10, is_gcd_closed) if len(S) <= 4}
    for S in enumerate_gcd_closed(EnumConfig(12, filter_condition_g=False)):
        assert not _condition_g(S).holds
    for S in enumerate_gcd_closed(EnumConfig(12, filter_max_gtd=2)):
        assert max_gtd(S) == 2


def test_divisor_lattice_mode():
    sets = list(enumerate_gcd_closed(EnumConfig(30, mode="divisor-lattice", modulus=30)))
    divs = {1, 2, 3, 5, 6, 10, 15, 30}
    want = {GcdSet(c) for r in range(1, 9) for c in combinations(sorted(divs), r)
            if is_gcd_closed(GcdSet(c))}
    assert set(sets) == want


@pytest.mark.parametrize("kwargs", [dict(max_element=0), dict(max_element=5, max_size=0),
                                    dict(mode="everything"), dict(mode="divisor-lattice")])
def test_bad_configs(kwargs):
    with pytest.raises(ConfigInvalid):
        list(enumerate_gcd_closed(EnumConfig(**kwargs)))


def test_campaign_examples():
    s = run_campaign(EnumConfig(1), [(1, 2)])
    assert s.sets_examined == 1 and s.violations == []
    s = run_campaign(EnumConfig(4), [(2, 3)])
    assert s.violations == []
    assert any(f["set"] == [1, 2] and f["witness"]["value"] == "-4/3"
               for f in s.informational)


def test_campaign_is_clean_on_small_corpus():
    s = run_campaign(EnumConfig(14, 5), [(1, 2), (2, 4)])
    assert s.violations == []
    assert sum(s.hypothesis_breakdown.values()) == s.sets_examined
    assert json.loads(json.dumps(s.to_dict()))["violation_count"] == 0


def test_campaign_is_deterministic_across_workers():
    cfg = EnumConfig(12, 5)
    one = run_campaign(cfg, [(1, 2), (1, 1)])
    again = run_campaign(cfg, [(1, 2), (1, 1)])
    two = run_campaign(cfg, [(1, 2), (1, 1)], threads=2)
    assert one.content() == again.content() == two.content()


def test_campaign_over_explicit_sets():
    sets = [GcdSet([1, 2, 3, 12]), GcdSet([1, 2, 4])]
    s = run_campaign(None, [(1, 2)], sets=sets)
    assert s.sets_examined == 2
    assert s.violations == []
    with pytest.raises(ConfigInvalid):
        run_campaign(None, [(1, 2)])
    with pytest.raises(ConfigInvalid):
        run_campaign(EnumConfig(3), [(0, 2)])


def test_frontier_membership():
    assert on_frontier([1, 2, 3, 12])
    assert not on_frontier([1, 2, 3, 6])
    assert on_frontier([1, 2, 3, 5, 6, 7, 10, 14, 15, 21, 35, 30, 42, 70, 105, 210])


def test_frontier_examples(tmp_path):
    assert search_frontier(EnumConfig(1), [(1, 2)]) == []
    with pytest.raises(ConfigInvalid):
        search_frontier(EnumConfig(4), [(2, 3)])
    found = search_frontier(EnumConfig(16, 6), [(1, 1), (1, 2)])
    assert found and all(f["severity"] in (INFO, WARN, CRITICAL) for f in found)
    assert not any(f["severity"] == CRITICAL for f in found)
    for f in found:
        S = GcdSet(f["set"])
        assert on_frontier(S) and not _condition_g(S).holds


def test_frontier_flags_singular_divisor():
    S = [1, 2, 3, 4, 5, 6, 10, 45, 180]
    found = search_frontier(EnumConfig(180, 9, mode="divisor-lattice", modulus=180,
                                       filter_max_gtd=4), [(1, 2)])
    assert any(f["set"] == S and f["severity"] == WARN for f in found)


def test_frontier_results_file_and_resume(tmp_path):
    out = tmp_path / "found.jsonl"
    cfg = EnumConfig(14, 5)
    first = search_frontier(cfg, [(1, 1)], out_path=str(out))
    lines = [json.loads(x) for x in out.read_text().splitlines()]
    assert len(lines) == len(first)
    assert all(set(x) == {"set", "a", "b", "pair_kind", "severity", "witness"} for x in lines)
    # pretend the run stopped after half the jobs
    progress = (tmp_path / "found.jsonl.progress").read_text().splitlines()
    keep = progress[: len(progress) // 2]
    kept_lines = [x for x in lines if _job_key(x, cfg) in keep]
    out.write_text("".join(json.dumps(x) + "\n" for x in kept_lines))
    (tmp_path / "found.jsonl.progress").write_text("".join(k + "\n" for k in keep))
    resumed = search_frontier(cfg, [(1, 1)], out_path=str(out), resume=True)
    assert resumed == first


def _job_key(finding, cfg):
    # one-element sets are never on the frontier, so every finding comes
    # from the subtree named by its first two elements
    cands = cfg.candidates()
    return ",".join(str(cands.index(x)) for x in finding["set"][:2])
