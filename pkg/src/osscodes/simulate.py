"""Monte Carlo BLER sweeps and the analytic comparison / table reports.

Trials are addressed by index inside the counter-based stream
``(seed, point_index)``. A sweep walks fixed-size chunks of trial indices
in order, optionally evaluating a wave of chunks on a process pool, and
stops at the exact trial where the error target is reached. The rows it
returns therefore do not depend on the number of workers.
"""
from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.stats import binomtest

from .analysis.bler import bler_single_layer_exact, bler_two_layer_bound
from .analysis.fbl import awgn_capacity, normal_approx_rate
from .analysis.gains import effective_coding_gain, gain_report_for_spec
from .channel import RngStream, box_muller, normal_words, sigma_from_ebn0, sigma_from_snr, snr_from_sigma
from .decoder import DECODERS
from .encoder import encode_batch
from .errors import AnalyticUnavailable, SpecError, UnsupportedN
from .spec import CodeSpec, ValidatedSpec, code_rate, two_layer_pm, validate_spec

CSV_COLUMNS = ("ebn0_db", "snr_db", "trials", "errors", "bler", "ci_low", "ci_high", "seed", "stream_id")
DEFAULT_CHUNK = 1000


@dataclass
class SweepPlan:
    spec: CodeSpec
    ebn0_grid_db: Sequence[float]
    max_trials: int = 100_000
    target_errors: int = 100
    seed: int = 0
    decoder: str = "emap_ssc"
    chunk_size: int = DEFAULT_CHUNK

    def validate(self) -> ValidatedSpec:
        vs = validate_spec(self.spec)
        grid = list(self.ebn0_grid_db)
        if not grid:
            raise SpecError("Eb/N0 grid is empty")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise SpecError("Eb/N0 grid must be strictly increasing")
        if self.max_trials < 1000:
            raise SpecError("max_trials must be at least 1000")
        if self.target_errors < 20:
            raise SpecError("target_errors must be at least 20")
        if self.decoder not in DECODERS:
            raise SpecError(f"unknown decoder {self.decoder!r}")
        if self.chunk_size < 1:
            raise SpecError("chunk_size must be positive")
        return vs


@dataclass(frozen=True)
class BlerPoint:
    ebn0_db: float
    snr_db: float
    trials: int
    errors: int
    bler: float
    ci_low: float
    ci_high: float
    seed: int
    stream_id: int

    @property
    def std_error(self) -> float:
        return math.sqrt(self.bler * (1.0 - self.bler) / self.trials)


def wilson_interval(errors: int, trials: int, level: float = 0.95) -> tuple[float, float]:
    ci = binomtest(errors, trials).proportion_ci(confidence_level=level, method="wilson")
    return float(ci.low), float(ci.high)


def words_per_trial(vs: ValidatedSpec) -> tuple[int, int, int]:
    bit_words = (vs.total_bits + 63) // 64
    noise_words = normal_words(vs.n)
    total = bit_words + noise_words
    return bit_words, noise_words, total + (-total % 4)


def _bits_from_words(words: np.ndarray, count: int) -> np.ndarray:
    j = np.arange(count)
    shifts = (63 - (j % 64)).astype(np.uint64)
    return ((words[:, j // 64] >> shifts) & np.uint64(1)).astype(np.uint8)


def simulate_chunk(vs: ValidatedSpec, decoder: str, sigma: float, seed: int, stream_id: int,
                   start: int, count: int) -> np.ndarray:
    """Block-error indicators for trials ``[start, start + count)`` of one stream."""
    bit_words, noise_words, width = words_per_trial(vs)
    raw = RngStream(seed, stream_id).raw_block(start, count, width)
    bits = _bits_from_words(raw[:, :bit_words], vs.total_bits)
    noise = box_muller(raw[:, bit_words:bit_words + noise_words], vs.n)
    codewords, _, _ = encode_batch(vs, bits)
    result = DECODERS[decoder](vs, codewords + sigma * noise, sigma)
    return np.any(result.bits != bits, axis=1) | (result.flags != 0)


def _point(vs: ValidatedSpec, plan: SweepPlan, index: int, ebn0_db: float, pool, wave: int) -> BlerPoint:
    sigma = sigma_from_ebn0(vs, ebn0_db)
    trials = errors = 0
    starts = list(range(0, plan.max_trials, plan.chunk_size))
    done = False
    for w0 in range(0, len(starts), wave):
        batch = [(s, min(plan.chunk_size, plan.max_trials - s)) for s in starts[w0:w0 + wave]]
        args = [(vs, plan.decoder, sigma, plan.seed, index, s, c) for s, c in batch]
        if pool is None:
            outcomes = [simulate_chunk(*a) for a in args]
        else:
            outcomes = list(pool.map(simulate_chunk, *zip(*args)))
        for flags in outcomes:
            need = plan.target_errors - errors
            hits = np.cumsum(flags)
            if hits.size and hits[-1] >= need:
                used = int(np.searchsorted(hits, need)) + 1
                trials += used
                errors += need
                done = True
                break
            trials += flags.size
            errors += int(hits[-1]) if hits.size else 0
        if done:
            break
    low, high = wilson_interval(errors, trials)
    return BlerPoint(float(ebn0_db), snr_from_sigma(vs, sigma), trials, errors, errors / trials,
                     low, high, plan.seed, index)


def run_sweep(plan: SweepPlan, workers: int = 1) -> list[BlerPoint]:
    vs = plan.validate()
    if workers <= 1:
        return [_point(vs, plan, i, e, None, 1) for i, e in enumerate(plan.ebn0_grid_db)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return [_point(vs, plan, i, e, pool, workers) for i, e in enumerate(plan.ebn0_grid_db)]


def points_to_csv(points: Iterable[BlerPoint]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for p in points:
        writer.writerow([repr(getattr(p, c)) for c in CSV_COLUMNS])
    return buf.getvalue()


def points_to_json(points: Iterable[BlerPoint]) -> list[dict]:
    return [asdict(p) for p in points]


# ---------------------------------------------------------------- analytic comparison


def analytic_model(spec: CodeSpec | ValidatedSpec):
    """Return ``(kind, fn(sigma))`` for specs covered by a closed-form result."""
    vs = validate_spec(spec)
    layers = vs.layers
    if all(len(l.alphabet) == 1 for l in layers) and layers[0].alphabet[0] > 0:
        a = layers[0].alphabet[0]
        if len(layers) == 1 and layers[0].k < vs.n:
            k = layers[0].k
            return "exact", lambda sigma: bler_single_layer_exact(vs.n, k, sigma / a)
        if len(layers) == 2 and layers[1].alphabet[0] == -a and layers[0].k == layers[1].k \
                and 2 * layers[0].k < vs.n:
            k = layers[0].k
            return "upper_bound", lambda sigma: bler_two_layer_bound(vs.n, k, sigma / a)
    raise AnalyticUnavailable("no closed-form BLER for this code shape")


def compare_report(plan: SweepPlan, workers: int = 1, points: list[BlerPoint] | None = None) -> list[dict]:
    """Monte Carlo BLER next to the exact value or upper bound at every grid point."""
    vs = plan.validate()
    kind, model = analytic_model(vs)
    if points is None:
        points = run_sweep(plan, workers)
    rows = []
    for p in points:
        value = model(sigma_from_ebn0(vs, p.ebn0_db))
        if kind == "exact":
            covered = p.ci_low <= value <= p.ci_high
        else:
            covered = p.bler <= value + 3.0 * p.std_error
        rows.append({
            "ebn0_db": p.ebn0_db, "mc_bler": p.bler, "ci_low": p.ci_low, "ci_high": p.ci_high,
            "trials": p.trials, "errors": p.errors, "analytic_value": value, "kind": kind,
            "covered": bool(covered),
        })
    return rows


# ---------------------------------------------------------------- coding gain table

# Reed-Muller and Golay rows are literature values, reproduced as printed.
CITED_GAINS = {
    "RM [64,7,16]": (5.4, 4.4),
    "Golay [64,22,16]": (7.4, 6.0),
    "RM [128,8,64]": (6.0, 4.9),
    "Golay [128,29,32]": (8.6, 6.9),
    "RM [256,9,128]": (6.5, 5.4),
    "Golay [256,37,64]": (9.7, 7.6),
}

# Two-layer OSS rows of the comparison table and the block length realising each.
# [256,16,2] needs N=257: with N=256 the second layer only carries 7 bits.
OSS_TABLE_ROWS = {
    "OSS [65,12,2]": 65,
    "OSS [129,14,2]": 129,
    "OSS [256,16,2]": 257,
}


def default_gain_rows() -> list[tuple[str, object]]:
    rows: list[tuple[str, object]] = []
    cited = list(CITED_GAINS)
    for i, n in enumerate(OSS_TABLE_ROWS.values()):
        rows.append(("oss_two_layer", n))
        rows.extend(("cited", c) for c in cited[2 * i:2 * i + 2])
    return rows


def gain_table(rows: Sequence[tuple[str, object]]) -> list[dict]:
    """One gain row per ``(kind, N | spec | label)`` entry."""
    out = []
    for kind, arg in rows:
        if kind == "cited":
            if arg not in CITED_GAINS:
                raise UnsupportedN(f"no cited gains for {arg!r}")
            nominal, eff = CITED_GAINS[arg]
            out.append({"code": arg, "kind": kind, "nominal_gain_db": nominal,
                        "effective_gain_db": eff, "d_min_sq": None,
                        "nearest_neighbors_per_bit": None, "source": "cited"})
            continue
        if kind == "spec":
            vs = validate_spec(arg)
            report = gain_report_for_spec(vs)
            label = f"OSS [{vs.n},{vs.total_bits}]"
        else:
            report = effective_coding_gain(kind, int(arg))
            if kind == "oss_two_layer":
                label = f"OSS [{arg},{validate_spec(two_layer_pm(int(arg))).total_bits},2]"
            else:
                label = f"{kind} N={arg}"
        out.append({"code": label, "kind": kind, **asdict(report), "source": "computed"})
    return out


# ---------------------------------------------------------------- finite blocklength table


def fbl_table(snr_db: float, epsilon: float, n_grid: Sequence[int], specs: Sequence[CodeSpec] = (),
              trials: int = 20_000, seed: int = 0, decoder: str = "emap_ssc") -> list[dict]:
    """Normal-approximation rate per N and the best OSS spec meeting ``epsilon`` at that SNR."""
    snr = 10.0 ** (snr_db / 10.0)
    validated = [validate_spec(s) for s in specs]
    rows = []
    for n in n_grid:
        row = {"n": int(n), "capacity": awgn_capacity(snr),
               "normal_approx_rate": normal_approx_rate(snr, int(n), epsilon),
               "oss_rate": None, "oss_bler": None, "oss_trials": None}
        candidates = sorted((v for v in validated if v.n == n), key=lambda v: -code_rate(v))
        for idx, vs in enumerate(candidates):
            sigma = sigma_from_snr(vs, snr_db)
            flags = simulate_chunk(vs, decoder, sigma, seed, idx, 0, trials)
            bler = float(flags.mean())
            if bler <= epsilon:
                row.update(oss_rate=code_rate(vs), oss_bler=bler, oss_trials=trials)
                break
        rows.append(row)
    return rows
