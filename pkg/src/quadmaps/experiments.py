"""Monte-Carlo harness: radius scaling, scaled profiles, coupling and
positivity-fraction checks, deviation tails, and finite-dimensional
goodness-of-fit against the closed-form limit densities.

Reproducibility contract: the seed of sample ``idx`` at size ``n`` is
derived from (master seed, n, idx) alone, and results are merged in task
order, so a run writes byte-identical CSVs at any parallelism width.
Samples are streamed; nothing proportional to the sample count is held
beyond scalar statistics and the per-sample scaled values.
"""

from __future__ import annotations

import hashlib
import json
import multiprocessing as mp
from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional, Sequence

import numpy as np

from ._backend import backend_name, kernels
from .bijection import quad_radius_fast
from .blossom import sample_well_labelled_coupled
from .densities import chi_square_gof, wilson_interval, xi, zeta, zeta_mass_p1
from .labelled import label_scale, sample_embedded
from .trees import extract_shape, sample_dyck_steps, PlaneTree

__all__ = [
    "ExperimentError",
    "ExperimentConfig",
    "RadiusSample",
    "radius_experiment",
    "profile_experiment",
    "coupling_and_kemperman_check",
    "tail_experiment",
    "fidis_gof_experiment",
    "eval_limit_densities",
    "sample_radius_row",
    "wl_successes",
    "sample_scaled_midheights",
    "coupling_violations",
]



class ExperimentError(RuntimeError):
    """Hard per-sample assertion failure, with the offending seed context."""


@dataclass(frozen=True)
class ExperimentConfig:
    """Sizes, sample counts, master seed, output prefix and worker count."""

    sizes: tuple[int, ...]
    samples: int
    seed: int
    out: Optional[str] = None
    jobs: int = 1
    params: dict = field(default_factory=dict)

    @classmethod
    def from_json(cls, text: str) -> "ExperimentConfig":
        d = json.loads(text)
        return cls(
            sizes=tuple(int(x) for x in d["sizes"]),
            samples=int(d["samples"]),
            seed=int(d["seed"]),
            out=d.get("out"),
            jobs=int(d.get("jobs", 1)),
            params=dict(d.get("params", {})),
        )

    def to_json(self) -> str:
        return json.dumps(
            {
                "sizes": list(self.sizes),
                "samples": self.samples,
                "seed": self.seed,
                "out": self.out,
                "jobs": self.jobs,
                "params": self.params,
            },
            sort_keys=True,
        )


def sample_seed(master: int, n: int, idx: int) -> int:
    """Per-sample seed: a pure function of (master, size, index)."""
    ss = np.random.SeedSequence((master, n, idx))
    return int(ss.generate_state(1, np.uint64)[0])


def _rng(master: int, n: int, idx: int) -> np.random.Generator:
    return np.random.default_rng(sample_seed(master, n, idx))


def _map_ordered(fn: Callable, tasks: list, jobs: int) -> Iterator:
    """Apply fn over tasks, results in task order regardless of jobs."""
    if jobs <= 1:
        yield from map(fn, tasks)
        return
    chunk = max(1, len(tasks) // (jobs * 8))
    with mp.get_context("fork").Pool(jobs) as pool:
        yield from pool.imap(fn, tasks, chunksize=chunk)


def _run_id(cfg: ExperimentConfig, kind: str) -> str:
    payload = f"{kind}|{cfg.to_json()}|{backend_name()}"
    return hashlib.sha1(payload.encode()).hexdigest()[:12]


def _write_summary(path: str, kind: str, cfg: ExperimentConfig, body: dict) -> None:
    doc = {
        "kind": kind,
        "run_id": _run_id(cfg, kind),
        "backend": backend_name(),
        "config": json.loads(cfg.to_json()),
        "results": body,
    }
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


# ---------------------------------------------------------------------------
# per-sample primitives


def coupling_violations(w_labels: np.ndarray, u_labels: np.ndarray) -> bool:
    """True if the cumulated-distribution sandwich or the 3-bound fails.

    For every k >= 1 the coupled pair must satisfy
    cumU(k-2) <= cumW(k) <= cumU(k+2), where cumW counts W-labels <= k and
    cumU counts U-labels <= min(U) + k - 1.
    """
    mu = int(w_labels.max())
    m = int(u_labels.min())
    big_m = int(u_labels.max())
    if abs(mu - (big_m - m)) > 3:
        return True
    n1 = len(w_labels)
    kmax = max(mu, big_m - m + 1) + 3
    cw = np.zeros(kmax + 1, dtype=np.int64)
    cw_counts = np.bincount(w_labels, minlength=mu + 1)
    np.cumsum(cw_counts, out=cw[: mu + 1])
    cw[mu + 1 :] = n1
    cu = np.zeros(kmax + 3, dtype=np.int64)
    cu_counts = np.bincount(u_labels - m, minlength=big_m - m + 1)
    np.cumsum(cu_counts, out=cu[1 : big_m - m + 2])
    cu[big_m - m + 2 :] = n1

    def cum_u(k: np.ndarray) -> np.ndarray:
        return cu[np.clip(k, 0, len(cu) - 1)]

    ks = np.arange(1, kmax + 1)
    lam = cw[ks]
    if (cum_u(ks - 2) > lam).any() or (lam > cum_u(ks + 2)).any():
        return True
    return False


@dataclass(frozen=True)
class RadiusSample:
    n: int
    seed: int
    r: int
    m: int
    M: int
    mu: int
    scaled: float


def sample_radius_row(n: int, seed: int) -> RadiusSample:
    """One coupled sample: quadrangulation built (edge structure), BFS
    radius computed, identities r = mu and the coupling bounds asserted."""
    rng = np.random.default_rng(seed)
    w, u = sample_well_labelled_coupled(n, rng)
    r, profile = quad_radius_fast(w)
    w_labels = w.labels()
    u_labels = u.labels()
    mu = int(w_labels.max())
    m = int(u_labels.min())
    big_m = int(u_labels.max())
    if r != mu:
        raise ExperimentError(f"radius {r} != max label {mu} (seed={seed}, n={n})")
    if coupling_violations(w_labels, u_labels):
        raise ExperimentError(f"coupling bound violated (seed={seed}, n={n})")
    counts = np.bincount(w_labels, minlength=mu + 1)[1:]
    if len(counts) != len(profile) or (counts != profile).any():
        raise ExperimentError(f"profile != label distribution (seed={seed}, n={n})")
    return RadiusSample(
        n=n, seed=seed, r=r, m=m, M=big_m, mu=mu, scaled=r / n**0.25
    )


def _radius_task(args: tuple[int, int, int]) -> RadiusSample:
    master, n, idx = args
    return sample_radius_row(n, sample_seed(master, n, idx))


def radius_experiment(cfg: ExperimentConfig) -> dict:
    """CSV of per-sample radius rows plus a per-size moment summary."""
    rows_out = None
    if cfg.out:
        rows_out = open(cfg.out, "w")
        rows_out.write("n,seed,r,m,M,mu,scaled\n")
    summary: dict = {}
    per_n_scaled: dict[int, np.ndarray] = {}
    try:
        for n in cfg.sizes:
            tasks = [(cfg.seed, n, i) for i in range(cfg.samples)]
            scaled = np.empty(cfg.samples, dtype=np.float64)
            for i, row in enumerate(_map_ordered(_radius_task, tasks, cfg.jobs)):
                scaled[i] = row.scaled
                if rows_out:
                    rows_out.write(
                        f"{row.n},{row.seed},{row.r},{row.m},{row.M},{row.mu},{row.scaled!r}\n"
                    )
            per_n_scaled[n] = scaled
            qs = np.quantile(scaled, [0.05, 0.25, 0.5, 0.75, 0.95])
            summary[str(n)] = {
                "samples": cfg.samples,
                "mean": float(scaled.mean()),
                "var": float(scaled.var(ddof=1)) if cfg.samples > 1 else 0.0,
                "quantiles": {
                    "q05": qs[0], "q25": qs[1], "q50": qs[2], "q75": qs[3], "q95": qs[4]
                },
            }
    finally:
        if rows_out:
            rows_out.close()
    if cfg.out:
        _write_summary(cfg.out + ".summary.json", "radius", cfg, summary)
    return {"summary": summary, "scaled": per_n_scaled}


def _profile_task(args: tuple[int, int, int, tuple[float, ...]]) -> np.ndarray:
    master, n, idx, grid = args
    rng = _rng(master, n, idx)
    w, _ = sample_well_labelled_coupled(n, rng)
    labels = w.labels()
    mu = int(labels.max())
    cum = np.zeros(mu + 1, dtype=np.int64)
    np.cumsum(np.bincount(labels, minlength=mu + 1)[1:], out=cum[1:])
    j = np.floor(label_scale(n) * np.asarray(grid)).astype(np.int64)
    return cum[np.clip(j, 0, mu)] / (n + 1)


def profile_experiment(cfg: ExperimentConfig, grid: Sequence[float]) -> dict:
    """Averaged scaled-profile curves F_n on a grid (CSV rows n,x,F);
    the per-sample curves are averaged on the fly."""
    grid = tuple(float(x) for x in grid)
    curves: dict[int, np.ndarray] = {}
    for n in cfg.sizes:
        tasks = [(cfg.seed, n, i, grid) for i in range(cfg.samples)]
        acc = np.zeros(len(grid), dtype=np.float64)
        for curve in _map_ordered(_profile_task, tasks, cfg.jobs):
            if (np.diff(curve) < 0).any():
                raise ExperimentError(f"non-monotone F_n curve at n={n}")
            acc += curve
        curves[n] = acc / cfg.samples
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write("n,x,F\n")
            for n in cfg.sizes:
                for x, f in zip(grid, curves[n]):
                    fh.write(f"{n},{x!r},{f!r}\n")
        _write_summary(
            cfg.out + ".summary.json",
            "profile",
            cfg,
            {str(n): {"grid": list(grid), "F": curves[n].tolist()} for n in cfg.sizes},
        )
    return {"grid": grid, "curves": curves}


def _coupling_task(args: tuple[int, int, int]) -> tuple[bool, bool]:
    master, n, idx = args
    rng = _rng(master, n, idx)
    w, u = sample_well_labelled_coupled(n, rng)
    w_labels = w.labels()
    u_labels = u.labels()
    if coupling_violations(w_labels, u_labels):
        raise ExperimentError(
            f"coupling inequality violated (seed={sample_seed(master, n, idx)}, n={n})"
        )
    return True, bool(u_labels.min() >= 1)


def coupling_and_kemperman_check(cfg: ExperimentConfig) -> dict:
    """Per-pair coupling assertions plus the positivity-fraction check:
    the fraction of uniform embedded trees that are well-labelled carries a
    3-sigma Wilson interval around 2/(n+2)."""
    report = {}
    for n in cfg.sizes:
        tasks = [(cfg.seed, n, i) for i in range(cfg.samples)]
        wl = 0
        for _, is_wl in _map_ordered(_coupling_task, tasks, cfg.jobs):
            wl += int(is_wl)
        lo, hi = wilson_interval(wl, cfg.samples)
        expected = 2.0 / (n + 2)
        report[str(n)] = {
            "samples": cfg.samples,
            "violations": 0,
            "wl_fraction": wl / cfg.samples,
            "ci_lo": lo,
            "ci_hi": hi,
            "expected": expected,
            "pass": lo <= expected <= hi,
        }
    if cfg.out:
        _write_summary(cfg.out, "coupling", cfg, report)
    return report


def _tail_task(args: tuple[int, int, int]) -> int:
    master, n, idx = args
    rng = _rng(master, n, idx)
    u = sample_embedded(n, rng, root_label=0)
    _, hi = kernels.label_extrema(u.tree.steps, u.inc, 0)
    return hi


def tail_experiment(cfg: ExperimentConfig, ys: Sequence[float]) -> dict:
    """Empirical P(sup of the scaled label walk > (8/9)^(1/4) y) with Wilson
    intervals, reported next to exp(-y); monitored, never gated."""
    ys = [float(y) for y in ys]
    rows = []
    report = {}
    for n in cfg.sizes:
        tasks = [(cfg.seed, n, i) for i in range(cfg.samples)]
        sups = np.fromiter(
            _map_ordered(_tail_task, tasks, cfg.jobs), dtype=np.int64, count=cfg.samples
        )
        entries = []
        prev = None
        for y in ys:
            thresh = (8.0 / 9.0) ** 0.5 * n**0.25 * y
            hits = int((sups > thresh).sum())
            p_hat = hits / cfg.samples
            if prev is not None and p_hat > prev + 1e-12:
                raise ExperimentError(f"tail not monotone at n={n}, y={y}")
            prev = p_hat
            lo, hi = wilson_interval(hits, cfg.samples)
            entries.append(
                {"y": y, "p_hat": p_hat, "ci_lo": lo, "ci_hi": hi,
                 "exp_minus_y": float(np.exp(-y))}
            )
            rows.append((n, y, p_hat, lo, hi, float(np.exp(-y))))
        report[str(n)] = entries
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write("n,y,p_hat,ci_lo,ci_hi,exp_minus_y\n")
            for n, y, p, lo, hi, e in rows:
                fh.write(f"{n},{y!r},{p!r},{lo!r},{hi!r},{e!r}\n")
        _write_summary(cfg.out + ".summary.json", "tail", cfg, report)
    return report


# ---------------------------------------------------------------------------
# batched helpers (hot paths shared with the acceptance suite)


def wl_successes(n: int, draws: int, rng: np.random.Generator, batch: int = 4096) -> int:
    """Number of uniform embedded trees (root label 1) out of ``draws``
    whose labels stay positive."""
    base = np.empty(2 * n + 1, dtype=np.int8)
    base[:n] = 1
    base[n:] = -1
    hits = 0
    done = 0
    while done < draws:
        b = min(batch, draws - done)
        words = np.tile(base, (b, 1))
        words = rng.permuted(words, axis=1)
        sums = np.cumsum(words, axis=1, dtype=np.int32)
        p1 = np.argmin(sums, axis=1) + 1
        cols = (p1[:, None] + np.arange(2 * n)[None, :]) % (2 * n + 1)
        steps = np.take_along_axis(words, cols, axis=1)
        incs = rng.integers(-1, 2, size=(b, n), dtype=np.int8)
        inc_full = np.zeros((b, n + 1), dtype=np.int8)
        inc_full[:, 1:] = incs
        lo, _ = kernels.batch_label_extrema(steps, inc_full, 1)
        hits += int((lo >= 1).sum())
        done += b
    return hits


def sample_scaled_midheights(
    n: int,
    draws: int,
    rng: np.random.Generator,
    tau: float = 0.5,
    batch: int = 64,
) -> np.ndarray:
    """Samples of the scaled contour height at time floor(2n tau), drawn by
    the rotation closure without materializing the trees."""
    big_l = 2 * n + 1
    t = int(np.floor(2 * n * tau))
    out = np.empty(draws, dtype=np.float64)
    done = 0
    scale = float(np.sqrt(2.0 * n))
    while done < draws:
        b = min(batch, draws - done)
        words = np.full((b, big_l), -1, dtype=np.int8)
        for i in range(b):
            words[i, rng.choice(big_l, n, replace=False)] = 1
        sums = np.cumsum(words, axis=1, dtype=np.int32)
        p1 = np.argmin(sums, axis=1) + 1  # position of the unique low record
        w_p1 = np.take_along_axis(sums, (p1 - 1)[:, None], axis=1)[:, 0]
        j = p1 + t
        wrap = j > big_l
        j_idx = np.where(wrap, j - big_l, j)
        w_j = np.where(
            j_idx == 0,
            0,
            np.take_along_axis(sums, np.maximum(j_idx - 1, 0)[:, None], axis=1)[:, 0],
        )
        # wrapping past the end adds the walk's total drift of -1
        e_t = w_j - w_p1 - wrap.astype(np.int32)
        out[done : done + b] = e_t / scale
        done += b
    return out


def lattice_edges(
    n: int, t: int, window: tuple[float, float], bins: int
) -> np.ndarray:
    """Histogram edges for scaled heights at contour time t, aligned so
    every bin covers the same number of height-lattice points (heights at
    time t share t's parity, so naive bins alias)."""
    scale = float(np.sqrt(2.0 * n))
    parity = t % 2
    h_lo = int(np.ceil(window[0] * scale))
    h_lo += (h_lo - parity) % 2
    h_hi = int(np.floor(window[1] * scale))
    h_hi -= (h_hi - parity) % 2
    npoints = (h_hi - h_lo) // 2 + 1
    if npoints < bins:
        raise ExperimentError(f"window holds {npoints} lattice points < {bins} bins")
    per = npoints // bins
    edges_h = h_lo - 1 + 2 * per * np.arange(bins + 1)
    return edges_h / scale


_MIDHEIGHT_CHUNK = 1024


def _midheight_task(args: tuple[int, int, int, float, int]) -> np.ndarray:
    master, n, chunk, tau, count = args
    return sample_scaled_midheights(n, count, _rng(master, n, chunk), tau)


def _midheights_parallel(cfg: ExperimentConfig, n: int, tau: float) -> np.ndarray:
    """Scaled mid-heights in deterministic chunks: chunk i is seeded by
    (master, n, i), so the merged sample is identical at any width."""
    tasks = []
    left = cfg.samples
    chunk = 0
    while left > 0:
        c = min(_MIDHEIGHT_CHUNK, left)
        tasks.append((cfg.seed, n, chunk, tau, c))
        left -= c
        chunk += 1
    return np.concatenate(list(_map_ordered(_midheight_task, tasks, cfg.jobs)))


def _fidis_pair_task(args: tuple[int, int, int, tuple[float, ...]]) -> tuple:
    """One embedded tree: scaled heights/labels at the marked times, the
    inter-time contour minimum (p = 2), and binary-shape flag."""
    master, n, idx, taus = args
    rng = _rng(master, n, idx)
    steps = sample_dyck_steps(n, rng)
    inc = np.zeros(n + 1, dtype=np.int8)
    inc[1:] = rng.integers(-1, 2, size=n, dtype=np.int8)
    tree = PlaneTree(steps, validate=False)
    heights = np.zeros(2 * n + 1, dtype=np.int64)
    np.cumsum(steps, out=heights[1:])
    labels = kernels.labels_from_parent(tree.parent, inc, 0)
    contour = tree.contour
    ts = [int(np.floor(2 * n * tau)) for tau in taus]
    e_vals = [int(heights[t]) for t in ts]
    v_vals = [int(labels[contour[t]]) for t in ts]
    if len(ts) == 1:
        return e_vals, v_vals, None, None
    m1 = int(heights[ts[0] : ts[1] + 1].min())
    shape = extract_shape(tree, ts)
    return e_vals, v_vals, m1, shape.is_binary


def eval_limit_densities(
    x: Sequence[float],
    m: Sequence[float],
    tau: Sequence[float],
    lengths: Optional[Sequence[float]] = None,
    ks: Optional[Sequence[float]] = None,
) -> dict:
    """Exact evaluation of the closed-form densities: the height/minimum
    density at (x, m, tau) and, when (lengths, ks) are given, the Gaussian
    label factor."""
    out = {"zeta": zeta(x, m, tau)}
    if lengths is not None or ks is not None:
        out["xi"] = xi(lengths or [], ks or [])
    return out


def fidis_gof_experiment(
    cfg: ExperimentConfig,
    taus: Sequence[float],
    bins: int = 40,
    window: tuple[float, float] = (0.2, 2.2),
) -> dict:
    """Finite-dimensional goodness-of-fit at p = len(taus) in {1, 2}.

    p = 1: chi-square of the scaled mid-height histogram against the
    closed-form density on a compact window, plus the conditional variance
    of the scaled label given the height (the Gaussian factor predicts
    variance = height exactly).  p = 2 additionally reports the inter-time
    minimum fit and the frequency of binary shapes.
    """
    taus = tuple(float(t) for t in taus)
    p = len(taus)
    if p not in (1, 2):
        raise ValueError("finite-dimensional checks are implemented for p in {1, 2}")
    report: dict = {}
    for n in cfg.sizes:
        if p == 1:
            e_samples = _midheights_parallel(cfg, n, taus[0])
            edges = lattice_edges(n, int(np.floor(2 * n * taus[0])), window, bins)
            observed, _ = np.histogram(e_samples, bins=edges)
            expected = np.array(
                [zeta_mass_p1(edges[i], edges[i + 1], taus[0]) for i in range(bins)]
            )
            stat, pval = chi_square_gof(observed, expected)
            # conditional variance of the scaled label given the height
            nv = min(cfg.samples, int(cfg.params.get("label_samples", 2000)))
            tasks = [(cfg.seed, n, i, taus) for i in range(nv)]
            es = np.empty(nv)
            vs = np.empty(nv)
            for i, (ev, vv, _, _) in enumerate(
                _map_ordered(_fidis_pair_task, tasks, cfg.jobs)
            ):
                es[i] = ev[0]
                vs[i] = vv[0]
            sel = es > 0
            ratio = float(
                np.mean((vs[sel] / label_scale(n)) ** 2 / (es[sel] / np.sqrt(2.0 * n)))
            )
            report[str(n)] = {
                "p": 1,
                "chi2": stat,
                "p_value": pval,
                "window": list(window),
                "bins": bins,
                "cond_var_ratio": ratio,
            }
        else:
            tasks = [(cfg.seed, n, i, taus) for i in range(cfg.samples)]
            x1 = np.empty(cfg.samples)
            m1 = np.empty(cfg.samples)
            binary = 0
            for i, (ev, _, mv, is_bin) in enumerate(
                _map_ordered(_fidis_pair_task, tasks, cfg.jobs)
            ):
                x1[i] = ev[0] / np.sqrt(2.0 * n)
                m1[i] = mv / np.sqrt(2.0 * n)
                binary += int(is_bin)
            report[str(n)] = {
                "p": 2,
                "binary_shape_fraction": binary / cfg.samples,
                "x1_mean": float(x1.mean()),
                "m1_mean": float(m1.mean()),
            }
    if cfg.out:
        _write_summary(cfg.out, "fidis", cfg, report)
    return report
