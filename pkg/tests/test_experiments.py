import json
import os

import numpy as np
import pytest

from quadmaps.densities import zeta_mass_p1
from quadmaps.experiments import (
    ExperimentConfig,
    coupling_and_kemperman_check,
    coupling_violations,
    fidis_gof_experiment,
    profile_experiment,
    radius_experiment,
    sample_radius_row,
    sample_scaled_midheights,
    sample_seed,
    tail_experiment,
    wl_successes,
)


def _cfg(tmp_path, name=None, **kw):
    out = str(tmp_path / name) if name else None
    base = dict(sizes=(16,), samples=50, seed=7, out=out, jobs=1, params={})
    base.update(kw)
    return ExperimentConfig(**base)


class TestConfig:
    def test_json_round_trip(self):
        cfg = ExperimentConfig(sizes=(4, 8), samples=10, seed=3, out="x.csv", jobs=2)
        again = ExperimentConfig.from_json(cfg.to_json())
        assert again == cfg

    def test_seed_derivation_pure(self):
        assert sample_seed(7, 16, 3) == sample_seed(7, 16, 3)
        assert sample_seed(7, 16, 3) != sample_seed(7, 16, 4)
        assert sample_seed(7, 16, 3) != sample_seed(7, 32, 3)


class TestRadius:
    def test_n1_split(self):
        # the two one-face maps have radius 1 and 2 with equal probability
        rows = [sample_radius_row(1, sample_seed(0, 1, i)) for i in range(400)]
        rs = {r.r for r in rows}
        assert rs == {1, 2}
        frac = sum(1 for r in rows if r.r == 1) / len(rows)
        assert 0.4 < frac < 0.6

    def test_assertions_and_csv(self, tmp_path):
        cfg = _cfg(tmp_path, "radius.csv", sizes=(16, 32), samples=40)
        out = radius_experiment(cfg)
        lines = open(cfg.out).read().splitlines()
        assert lines[0] == "n,seed,r,m,M,mu,scaled"
        assert len(lines) == 1 + 2 * 40
        assert set(out["summary"]) == {"16", "32"}
        summary = json.load(open(cfg.out + ".summary.json"))
        assert summary["kind"] == "radius"
        assert summary["config"]["seed"] == 7

    def test_determinism_across_jobs(self, tmp_path):
        outs = []
        for jobs in (1, 2, 4):
            cfg = _cfg(tmp_path, f"radius{jobs}.csv", sizes=(24,), samples=30, jobs=jobs)
            radius_experiment(cfg)
            outs.append(open(cfg.out, "rb").read())
        assert outs[0] == outs[1] == outs[2]


class TestProfile:
    def test_monotone_and_saturating(self, tmp_path):
        grid = [0.1 * i for i in range(40)]
        cfg = _cfg(tmp_path, "profile.csv", sizes=(64,), samples=30)
        out = profile_experiment(cfg, grid)
        curve = out["curves"][64]
        assert (np.diff(curve) >= -1e-12).all()
        assert curve[-1] > 0.99  # beyond almost every sample's max label
        assert curve[0] <= 1.0 / 65 + 1e-9

    def test_saturates_beyond_max_label(self):
        from quadmaps.blossom import sample_well_labelled_coupled
        from quadmaps.labelled import label_scale

        rng = np.random.default_rng(77)
        w, _ = sample_well_labelled_coupled(40, rng)
        mu = w.max_label
        labels = w.labels()
        cum = np.cumsum(np.bincount(labels, minlength=mu + 1)[1:])
        x = mu / label_scale(40) + 1e-9
        j = int(np.floor(label_scale(40) * x))
        assert cum[min(j, mu) - 1] / 41 == 1.0

    def test_csv_schema(self, tmp_path):
        cfg = _cfg(tmp_path, "profile.csv", sizes=(16,), samples=5)
        profile_experiment(cfg, [0.0, 0.5, 1.0])
        lines = open(cfg.out).read().splitlines()
        assert lines[0] == "n,x,F"
        assert len(lines) == 4


class TestCoupling:
    def test_violation_detector(self):
        w = np.array([1, 2, 3])
        u = np.array([0, 1, 2])
        assert not coupling_violations(w, u)
        assert coupling_violations(np.array([1, 9, 9]), np.array([0, 0, 1]))

    def test_report(self, tmp_path):
        cfg = _cfg(tmp_path, "coupling.json", sizes=(2, 8), samples=4000)
        rep = coupling_and_kemperman_check(cfg)
        assert rep["2"]["violations"] == 0
        assert rep["2"]["expected"] == pytest.approx(0.5)
        assert rep["8"]["expected"] == pytest.approx(0.2)
        assert rep["2"]["pass"] and rep["8"]["pass"]

    def test_wl_fraction_fast_path(self):
        rng = np.random.default_rng(5)
        hits = wl_successes(2, 20_000, rng)
        frac = hits / 20_000
        assert abs(frac - 0.5) < 0.02


class TestTail:
    def test_monotone_with_intervals(self, tmp_path):
        cfg = _cfg(tmp_path, "tail.csv", sizes=(64,), samples=400)
        rep = tail_experiment(cfg, [0.0, 0.5, 1.0, 2.0, 4.0])
        entries = rep["64"]
        assert entries[0]["p_hat"] > 0.9  # sup starts at the root's 0
        ps = [e["p_hat"] for e in entries]
        assert all(a >= b for a, b in zip(ps, ps[1:]))
        lines = open(cfg.out).read().splitlines()
        assert lines[0] == "n,y,p_hat,ci_lo,ci_hi,exp_minus_y"


class TestMidheights:
    def test_matches_exact_distribution(self):
        # modest n: compare the sampler to the ballot-count law of E(n)
        from quadmaps.walks import count_ballot

        n = 30
        rng = np.random.default_rng(11)
        xs = sample_scaled_midheights(n, 30_000, rng, 0.5)
        heights = np.rint(xs * np.sqrt(2 * n)).astype(int)
        assert ((heights >= 0) & (heights % 2 == n % 2)).all()
        total = count_ballot(2 * n, 0)
        probs = {
            h: count_ballot(n, h) ** 2 / total for h in range(n % 2, n + 1, 2)
        }
        # chi-square over observed support
        obs = {}
        for h in heights:
            obs[int(h)] = obs.get(int(h), 0) + 1
        support = [h for h, p in probs.items() if p * len(xs) >= 20]
        o = np.array([obs.get(h, 0) for h in support], dtype=float)
        e = np.array([probs[h] * len(xs) for h in support])
        chi2 = float(((o - e) ** 2 / e).sum())
        from scipy import stats

        assert stats.chi2.sf(chi2, len(support) - 1) > 1e-4

    def test_zeta_agrees_at_moderate_n(self):
        from quadmaps.densities import chi_square_gof
        from quadmaps.experiments import lattice_edges

        n = 4000
        rng = np.random.default_rng(12)
        xs = sample_scaled_midheights(n, 20_000, rng, 0.5)
        edges = lattice_edges(n, n, (0.3, 1.8), 16)
        obs, _ = np.histogram(xs, bins=edges)
        exp = np.array([zeta_mass_p1(a, b, 0.5) for a, b in zip(edges, edges[1:])])
        stat, p = chi_square_gof(obs, exp)
        assert p > 1e-4


class TestFidis:
    def test_p1_report(self, tmp_path):
        cfg = _cfg(
            tmp_path,
            "fidis.json",
            sizes=(2000,),
            samples=4000,
            params={"label_samples": 800},
        )
        rep = fidis_gof_experiment(cfg, [0.5], bins=12, window=(0.3, 1.6))
        entry = rep["2000"]
        assert entry["p_value"] > 1e-4
        assert entry["cond_var_ratio"] == pytest.approx(1.0, abs=0.15)

    def test_p2_report(self, tmp_path):
        cfg = _cfg(tmp_path, None, sizes=(500,), samples=300)
        rep = fidis_gof_experiment(cfg, [0.3, 0.6])
        entry = rep["500"]
        assert 0.5 < entry["binary_shape_fraction"] <= 1.0

    def test_binary_fraction_increases(self):
        fracs = []
        for n in (50, 2000):
            cfg = ExperimentConfig(sizes=(n,), samples=400, seed=3, out=None, jobs=1)
            rep = fidis_gof_experiment(cfg, [0.3, 0.6])
            fracs.append(rep[str(n)]["binary_shape_fraction"])
        assert fracs[1] >= fracs[0]

    def test_p_validation(self):
        cfg = ExperimentConfig(sizes=(10,), samples=5, seed=1, out=None, jobs=1)
        with pytest.raises(ValueError):
            fidis_gof_experiment(cfg, [0.2, 0.4, 0.6])


class TestEvalDensities:
    def test_wrapper(self):
        from quadmaps.experiments import eval_limit_densities

        out = eval_limit_densities([0.5], [], [0.5], lengths=[1.0], ks=[0.0])
        assert out["zeta"] == pytest.approx(1.9358, abs=2e-4)
        assert out["xi"] == pytest.approx(1.0 / np.sqrt(2 * np.pi), rel=1e-9)
