"""Recovery-rate comparison of a structured frame against Gaussian baselines."""
from __future__ import annotations

import csv
import hashlib
import io
import json
import logging
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import coherence, density
from .errors import FrameIOError, InvalidParams, NumericalFailure
from .frame import build_frame, gaussian_frame, max_admissible_k
from .solver import DEFAULT_THRESHOLD_DB, run_trials
from .svgplot import line_plot
from .unitary import UNITARY_KINDS, make_unitary

log = logging.getLogger(__name__)

CSV_COLUMNS = ("kind", "m", "k", "r", "s", "trials", "successes", "rate", "mean_snr_db",
               "seed", "config_hash")
# Fields that change where/how fast a run happens but not its results.
_NON_SEMANTIC = ("workers", "prefix")
_GAUSSIAN_TAG = 0x6A55


@dataclass
class ExperimentConfig:
    m: int = 5
    k: int = 5
    r: int = 1
    unitary: str = "dft"
    unitary_file: str | None = None
    s_min: int = 1
    s_max: int | None = None  # None -> d
    trials: int = 200
    seed: int = 7
    snr_threshold_db: float = DEFAULT_THRESHOLD_DB
    success_threshold: float = 0.90
    gaussian: bool = True
    workers: int = 1
    prefix: str = "experiment"

    @property
    def d(self) -> int:
        return self.m * self.k

    def validate(self) -> None:
        kmax = max_admissible_k(self.m)
        if not 1 <= self.r < self.k <= kmax:
            raise InvalidParams(
                f"need 1 <= r < k <= {kmax} (smallest prime-power factor of m={self.m}),"
                f" got r={self.r}, k={self.k}"
            )
        if self.unitary not in UNITARY_KINDS:
            raise InvalidParams(f"unknown unitary {self.unitary!r}")
        if self.s_min < 1:
            raise InvalidParams("s_min must be >= 1")
        if self.resolved_s_max() > self.d or self.resolved_s_max() < self.s_min:
            raise InvalidParams(f"sparsity range must lie within [1, {self.d}]")
        if self.trials < 1:
            raise InvalidParams("trials must be >= 1")
        if not 0 < self.success_threshold <= 1:
            raise InvalidParams("success threshold must lie in (0, 1]")

    def resolved_s_max(self) -> int:
        return self.d if self.s_max is None else self.s_max

    def semantic_dict(self) -> dict:
        out = asdict(self)
        for key in _NON_SEMANTIC:
            out.pop(key)
        out["s_max"] = self.resolved_s_max()
        return out

    def config_hash(self) -> str:
        blob = json.dumps(self.semantic_dict(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]

    def gaussian_seed(self) -> int:
        return int(np.random.SeedSequence([self.seed, _GAUSSIAN_TAG]).generate_state(1)[0])


@dataclass
class LevelResult:
    kind: str
    s: int
    trials: int
    successes: int
    rate: float
    mean_snr_db: float
    singular: int = 0


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    levels: list[LevelResult] = field(default_factory=list)
    frames: dict = field(default_factory=dict)

    def rates(self, kind: str) -> dict[int, float]:
        return {lv.s: lv.rate for lv in self.levels if lv.kind == kind}

    def largest_good_level(self, kind: str) -> int:
        """Largest ``s`` whose rate reaches the success threshold (0 if none)."""
        good = [s for s, rate in self.rates(kind).items()
                if rate >= self.config.success_threshold]
        return max(good, default=0)

    def to_dict(self) -> dict:
        cfg = self.config
        return {
            "tool_version": __version__,
            "config": cfg.semantic_dict(),
            "config_hash": cfg.config_hash(),
            "seeds": {
                "master": cfg.seed,
                "gaussian_matrix": cfg.gaussian_seed() if cfg.gaussian else None,
                "trial_scheme": "numpy SeedSequence([master, s, trial]); shared by all matrix kinds",
            },
            "frames": self.frames,
            "levels": [_clean(asdict(lv)) for lv in self.levels],
            "largest_good_level": {
                kind: self.largest_good_level(kind) for kind in self.frames
            },
        }


def _ratio(x) -> str:
    return f"{x.numerator}/{x.denominator}"


def _clean(d: dict) -> dict:
    return {k: (None if isinstance(v, float) and math.isnan(v) else v) for k, v in d.items()}


def run_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    cfg.validate()
    U = make_unitary(cfg.unitary, cfg.k, cfg.unitary_file)
    F = build_frame(cfg.m, cfg.k, cfg.r, U)
    mu = coherence(F)
    bound = F.coherence_bound
    if mu > bound + 1e-12:
        raise NumericalFailure(f"measured coherence {mu} exceeds bound {bound}")
    d, M = F.shape
    matrices = {"structured": F.to_dense()}
    result = ExperimentResult(cfg)
    result.frames["structured"] = {
        "d": d, "M": M, "Q": F.Q, "unitary": F.unitary_kind, "alpha": F.alpha,
        "coherence": mu, "coherence_bound": bound, "density": _ratio(density(F)),
        "factors": list(F.factors),
    }
    if cfg.gaussian:
        G = gaussian_frame(d, M, cfg.gaussian_seed())
        matrices["gaussian"] = G
        result.frames["gaussian"] = {
            "d": d, "M": M, "coherence": coherence(G), "column_normalized": True,
            "density": _ratio(density(G)), "seed": cfg.gaussian_seed(),
        }

    for kind, A in matrices.items():
        for s in range(cfg.s_min, cfg.resolved_s_max() + 1):
            st = run_trials(A, s, cfg.trials, cfg.seed, cfg.snr_threshold_db,
                            on_singular="fail", workers=cfg.workers)
            log.info("%s s=%d rate=%.3f", kind, s, st.rate)
            result.levels.append(
                LevelResult(kind, s, st.trials, st.successes, st.rate, st.mean_snr_db, st.singular)
            )
    return result


def render_csv(result: ExperimentResult) -> str:
    cfg = result.config
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(CSV_COLUMNS)
    h = cfg.config_hash()
    for lv in result.levels:
        mean = "nan" if math.isnan(lv.mean_snr_db) else f"{lv.mean_snr_db:.6f}"
        w.writerow([lv.kind, cfg.m, cfg.k, cfg.r, lv.s, lv.trials, lv.successes,
                    f"{lv.rate:.6f}", mean, cfg.seed, h])
    return buf.getvalue()


def render_svg(result: ExperimentResult) -> str:
    """Success rate vs sparsity, keeping only levels at or above the threshold."""
    cfg = result.config
    thr = cfg.success_threshold
    series = {}
    for kind in result.frames:
        label = f"UOB{cfg.m}" if kind == "structured" else f"Gaussian {cfg.d}x{result.frames[kind]['M']}"
        series[label] = [(s, rate) for s, rate in sorted(result.rates(kind).items()) if rate >= thr]
    title = f"m={cfg.m} k={cfg.k} r={cfg.r} {cfg.unitary}, {cfg.trials} trials/level"
    comment = f"iuntf {__version__} seed={cfg.seed} config_hash={cfg.config_hash()}"
    return line_plot(series, (cfg.s_min, cfg.resolved_s_max()), title,
                     y_range=(max(0.0, thr - 0.1), 1.0), comment=comment)


def write_outputs(result: ExperimentResult, out_dir) -> dict[str, Path]:
    """Write ``<prefix>.csv``, ``.json`` and ``.svg``; returns the paths."""
    out_dir = Path(out_dir)
    prefix = result.config.prefix
    paths = {ext: out_dir / f"{prefix}.{ext}" for ext in ("csv", "json", "svg")}
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        paths["csv"].write_text(render_csv(result), newline="")
        paths["json"].write_text(json.dumps(result.to_dict(), indent=2, sort_keys=True) + "\n")
        paths["svg"].write_text(render_svg(result))
    except OSError as exc:
        raise FrameIOError(f"cannot write experiment outputs to {out_dir}: {exc}") from exc
    return paths
