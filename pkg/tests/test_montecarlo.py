import json
import math

import numpy as np
import pytest

from linfbound.bounds import BoundSpec, Method
from linfbound.distributions import (
    Distribution,
    InvalidArgument,
    cumulative_table,
    draw_counts,
    rep_seed,
    uniform,
    zipf,
)
from linfbound.montecarlo import (
    DeltaRule,
    ExperimentConfig,
    cell_seed,
    composition_count,
    compositions,
    exact_coverage,
    exact_quantile,
    oracle_quantile,
    run_coverage,
    spec_at,
    topk_experiment,
)

FAST = tuple(BoundSpec(m, 0.05) for m in (Method.BASELINE, Method.TH2, Method.TH4, Method.TH3_UB1))


def cfg(dist=None, ns=(50, 200), reps=300, seed=7, methods=FAST, k=None, delta=DeltaRule()):
    return ExperimentConfig(dist or zipf(20, 1.1), "t", ns, delta, methods, reps, seed, k)


class TestConfig:
    def test_sorted_n(self):
        with pytest.raises(InvalidArgument):
            cfg(ns=(200, 50))

    def test_reps_positive(self):
        with pytest.raises(InvalidArgument):
            cfg(reps=0)

    def test_k_range(self):
        with pytest.raises(InvalidArgument):
            cfg(dist=uniform(3), k=4)

    def test_delta_rule(self):
        assert DeltaRule.parse("1/n^2").delta(100) == 1e-4
        assert DeltaRule.parse("0.1").delta(100) == 0.1
        with pytest.raises(InvalidArgument):
            DeltaRule.parse("often")

    def test_spec_at_keeps_split(self):
        s = spec_at(BoundSpec(Method.TH2, 0.05), 1e-4)
        assert s.delta1 == pytest.approx(0.99e-4) and s.delta2 == pytest.approx(1e-6)

    def test_hash_stable_and_sensitive(self):
        assert cfg().config_hash == cfg().config_hash
        assert cfg().config_hash != cfg(seed=8).config_hash


class TestRunCoverage:
    def test_deterministic_distribution(self):
        rep = run_coverage(cfg(dist=Distribution([1.0]), ns=(10, 100)))
        for c in rep.cells:
            if not c.skipped:
                assert c.coverage_rate == 1.0
                assert c.oracle_quantile == 0.0

    def test_skipped_cells(self):
        rep = run_coverage(cfg(ns=(50, 200)))
        c = rep.cell(Method.TH4, 50)
        assert c.skipped and "theorem precondition" in c.skipped and "81" in c.skipped
        assert not rep.cell(Method.TH4, 200).skipped

    def test_determinism(self):
        a, b = run_coverage(cfg()), run_coverage(cfg())
        assert a.to_json() == b.to_json()

    def test_thread_equivalence(self):
        a = run_coverage(cfg(reps=700), threads=1)
        b = run_coverage(cfg(reps=700), threads=4)
        assert a.to_json() == b.to_json()

    def test_counts_integral(self):
        for c in run_coverage(cfg()).cells:
            if not c.skipped:
                assert c.coverage_rate * c.reps == pytest.approx(round(c.coverage_rate * c.reps))

    def test_decaying_delta_column(self):
        rep = run_coverage(cfg(ns=(100, 1000), reps=20, delta=DeltaRule("inverse-n-squared")))
        assert {c.delta for c in rep.cells if c.n == 1000} == {1e-6}

    def test_oracle_below_th2(self):
        rep = run_coverage(cfg(dist=zipf(100, 1.1), ns=(100, 1000), reps=1000))
        for n in (100, 1000):
            c = rep.cell(Method.TH2, n)
            assert c.oracle_quantile <= c.mean_radius

    def test_csv_json(self, tmp_path):
        rep = run_coverage(cfg(reps=20))
        paths = rep.write(tmp_path, "x")
        assert all(rep.config.config_hash in p.name for p in paths)
        lines = paths[0].read_text().splitlines()
        assert len(lines) == 1 + len(rep.cells)
        data = json.loads(paths[1].read_text())
        assert data["config"]["reps"] == 20 and len(data["cells"]) == len(rep.cells)


class TestOracleQuantile:
    def test_degenerate(self):
        assert oracle_quantile(Distribution([1.0]), 10, 0.05, 100, 1) == 0.0

    def test_exact_tiny(self):
        p = uniform(2)
        assert exact_quantile(p, 4, 0.25) == 0.25
        assert oracle_quantile(p, 4, 0.25, 4000, 3) == 0.25

    def test_warns_on_few_reps(self):
        with pytest.warns(UserWarning):
            oracle_quantile(uniform(3), 10, 0.01, 50, 1)


class TestExact:
    def test_compositions(self):
        c = compositions(8, 3)
        assert c.shape == (composition_count(8, 3), 3) == (45, 3)
        assert np.all(c.sum(axis=1) == 8)
        assert len({tuple(r) for r in c}) == 45

    def test_limit(self):
        with pytest.raises(InvalidArgument):
            compositions(100, 10)

    def test_degenerate(self):
        assert exact_coverage(Distribution([1.0]), 12, BoundSpec(Method.BASELINE, 0.05)) == 1.0

    def test_th2_conservative(self):
        assert exact_coverage(Distribution([0.9, 0.1]), 20, BoundSpec(Method.TH2, 0.1)) >= 0.9

    def test_matches_monte_carlo(self):
        p = uniform(2)
        spec = BoundSpec(Method.TH1_ORACLE, 0.05, m=4)
        ex = exact_coverage(p, 10, spec)
        rep = run_coverage(ExperimentConfig(p, "x", (10,), DeltaRule(), (spec,), 20_000, 5))
        mc = rep.cell(Method.TH1_ORACLE, 10).coverage_rate
        assert abs(mc - ex) <= 4 * math.sqrt(ex * (1 - ex) / 20_000)

    def test_meta_trials(self):
        # |MC - exact| <= 4 sigma in at least 99 of 100 independent meta-trials
        p = Distribution([0.7, 0.3])
        spec = BoundSpec(Method.TH1_ORACLE, 0.2, m=2)
        ex = exact_coverage(p, 6, spec)
        assert 0 < ex < 1
        reps = 400
        hits = 0
        for t in range(100):
            mc = run_coverage(ExperimentConfig(p, "x", (6,), DeltaRule("fixed", 0.2), (spec,), reps, 1000 + t))
            hits += abs(mc.cell(Method.TH1_ORACLE, 6).coverage_rate - ex) <= 4 * math.sqrt(ex * (1 - ex) / reps)
        assert hits >= 99


class TestTopk:
    def test_requires_k(self):
        with pytest.raises(InvalidArgument):
            topk_experiment(cfg())

    def test_full_k_matches(self):
        c = cfg(dist=zipf(15, 1.1), k=15)
        full, top = run_coverage(c), topk_experiment(c)
        for a, b in zip(full.cells, top.cells):
            assert a.covered == b.covered
            if not b.skipped:
                assert b.topk_covered == b.covered

    def test_topk_dominates_per_rep(self):
        rep = topk_experiment(cfg(dist=zipf(50, 1.0), ns=(100,), k=3, reps=400), keep_per_rep=True)
        r = rep.per_rep[100]
        assert np.all(r["topk"] <= r["sup"])
        for c in rep.cells:
            if not c.skipped:
                assert c.topk_covered >= c.covered

    def test_tie_break_ascending(self):
        rep = topk_experiment(cfg(dist=uniform(4), ns=(4,), k=2, reps=200, methods=(BoundSpec(Method.BASELINE, 0.05),)))
        ids = rep.topk_ids[4]
        cdf = cumulative_table(uniform(4).probs)
        for r in range(20):
            c = draw_counts(cdf, 4, rep_seed(cell_seed(7, 4), r))
            order = sorted(range(4), key=lambda i: (-c[i], i))[:2]
            assert list(ids[r]) == order

    def test_naive_cp_collapses(self):
        c = ExperimentConfig(uniform(5000), "naive", (100,), DeltaRule(), (BoundSpec(Method.BASELINE, 0.05),),
                             200, 1, k=1)
        ref = topk_experiment(c).references[0]
        assert ref.naive_cp_top1_coverage == 0.0

    def test_reference_lines(self):
        rep = topk_experiment(cfg(dist=zipf(30, 1.1), ns=(500,), k=5))
        ref = rep.references[0]
        assert ref.oracle_top1 <= ref.oracle_topk <= ref.oracle_full
        assert ref.selective_lb > 0
