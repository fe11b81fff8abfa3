"""End-to-end orchestration: fetch, ingest, fleet, model, simulate, stats.

Each stage reads its inputs and writes its outputs as the documented file
formats under one output directory, so stages can be re-run independently
and everything downstream of the cache is reproducible byte for byte: fixed
float formatting, derived seeds, sorted iteration orders, and a manifest
with content hashes instead of timestamps.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
from dataclasses import dataclass, field
from datetime import date, timedelta
from pathlib import Path
from typing import Callable, NamedTuple, Sequence

import numpy as np

from . import io as okio
from .errors import InvalidInputError, OutageKitError, ParseError, StatsError, UsageError
from .fetch import DOC_TYPES, FetchClient
from .fleet import fleet_outage_pmf, pmf_stats, pool_unit_sizes, synthesize_fleet
from .ingest import (
    Channel,
    HourlyOutageSeries,
    deduplicate,
    filter_reports,
    parse_document,
    unit_series,
    zone_aggregate,
)
from .markov import RNG_NAME, simulate_fleet, simulation_metadata
from .stats import (
    REPORT_LAGS_HOURS,
    SummaryStats,
    WinterWindow,
    autocorrelation,
    reconciliation_error,
    sample_stats,
    season_label_to_year,
    weekly_profile,
    winter_window,
)
from .timeseries import HourRange, format_utc, parse_utc
from .types import FUEL_PARAMS, FUEL_PARAMS_VERSION, Fuel
from .zones import eic_for_zone

logger = logging.getLogger(__name__)

TOKEN_ENV_VAR = "ENTSOE_API_TOKEN"

PLOT_KINDS = ("histogram", "seasonal", "timeseries")

# Disjoint seed branches so fleet synthesis, simulation and plot draws never
# share RNG streams.
_STREAM_FLEET = 101
_STREAM_SIM = 102
_STREAM_PLOT = 103

_CONFIG_KEYS = {
    "zones",
    "seasons",
    "period",
    "cache_dir",
    "output_dir",
    "registry_path",
    "model_params_path",
    "demand_path",
    "api_token",
    "seed",
    "rate_limit_s",
    "retries",
    "zone_eic",
    "histogram_bin_mw",
    "timeseries_draws",
}


@dataclass(frozen=True)
class PipelineConfig:
    """Everything a pipeline run depends on, except the cache contents.

    Evaluation periods are normally winter seasons (labels like "16/17");
    ``period`` overrides them with one explicit hourly range, which is how
    small bundled corpora are processed.  ``api_token`` is excluded from the
    config hash and the manifest so the secret never reaches an artifact.
    """

    zones: tuple[str, ...]
    seasons: tuple[str, ...] = ()
    period: HourRange | None = None
    cache_dir: Path = Path("cache")
    output_dir: Path = Path("out")
    registry_path: Path | None = None
    model_params_path: Path | None = None
    demand_path: Path | None = None
    api_token: str = ""
    seed: int = 0
    rate_limit_s: float = 0.5
    retries: int = 3
    zone_eic: dict[str, str] = field(default_factory=dict)
    histogram_bin_mw: int = 500
    timeseries_draws: int = 3

    def __post_init__(self) -> None:
        if not self.zones:
            raise InvalidInputError("config needs at least one zone")
        if len(set(self.zones)) != len(self.zones):
            raise InvalidInputError("duplicate zones in config")
        if not self.seasons and self.period is None:
            raise InvalidInputError("config needs seasons or an explicit period")
        if self.histogram_bin_mw < 1:
            raise InvalidInputError("histogram_bin_mw must be >= 1")
        if self.timeseries_draws < 1:
            raise InvalidInputError("timeseries_draws must be >= 1")

    @classmethod
    def from_file(cls, path: Path | str) -> "PipelineConfig":
        """Load a JSON config; relative paths resolve against the file."""
        path = Path(path)
        try:
            raw = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, ValueError) as exc:
            raise InvalidInputError(f"cannot read config {path}: {exc}") from exc
        if not isinstance(raw, dict):
            raise InvalidInputError(f"{path}: config must be a JSON object")
        unknown = sorted(set(raw) - _CONFIG_KEYS)
        if unknown:
            raise InvalidInputError(f"{path}: unknown config keys {unknown}")
        # Resolve against the config file so the run is independent of the
        # working directory and the config hash is stable however the config
        # path was spelled.
        base = path.resolve().parent

        def resolve(key: str, default: str | None = None) -> Path | None:
            value = raw.get(key, default)
            if value is None:
                return None
            p = Path(value)
            return p if p.is_absolute() else base / p

        period = None
        if raw.get("period") is not None:
            p = raw["period"]
            try:
                period = HourRange(parse_utc(p["start"]), int(p["hours"]))
            except (KeyError, TypeError) as exc:
                raise InvalidInputError(
                    f"{path}: period must be {{'start': <iso utc>, 'hours': <int>}}"
                ) from exc
        token = raw.get("api_token") or os.environ.get(TOKEN_ENV_VAR, "")
        return cls(
            zones=tuple(raw.get("zones", ())),
            seasons=tuple(raw.get("seasons", ())),
            period=period,
            cache_dir=resolve("cache_dir", "cache"),
            output_dir=resolve("output_dir", "out"),
            registry_path=resolve("registry_path"),
            model_params_path=resolve("model_params_path"),
            demand_path=resolve("demand_path"),
            api_token=token,
            seed=int(raw.get("seed", 0)),
            rate_limit_s=float(raw.get("rate_limit_s", 0.5)),
            retries=int(raw.get("retries", 3)),
            zone_eic=dict(raw.get("zone_eic", {})),
            histogram_bin_mw=int(raw.get("histogram_bin_mw", 500)),
            timeseries_draws=int(raw.get("timeseries_draws", 3)),
        )

    def public_dict(self) -> dict:
        """Config as JSON-ready data with the secret removed."""
        return {
            "zones": list(self.zones),
            "seasons": list(self.seasons),
            "period": None
            if self.period is None
            else {"start": format_utc(self.period.start), "hours": self.period.n_hours},
            "cache_dir": str(self.cache_dir),
            "output_dir": str(self.output_dir),
            "registry_path": None if self.registry_path is None else str(self.registry_path),
            "model_params_path": None
            if self.model_params_path is None
            else str(self.model_params_path),
            "demand_path": None if self.demand_path is None else str(self.demand_path),
            "seed": self.seed,
            "rate_limit_s": self.rate_limit_s,
            "retries": self.retries,
            "zone_eic": dict(sorted(self.zone_eic.items())),
            "histogram_bin_mw": self.histogram_bin_mw,
            "timeseries_draws": self.timeseries_draws,
        }

    def sha256(self) -> str:
        canonical = json.dumps(self.public_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


class Evaluation(NamedTuple):
    """One evaluation period: a label, its hourly range, and stat windows.

    ``windows`` is None for an explicit period override, meaning the whole
    range is treated as a single statistics window.
    """

    label: str
    slug: str
    range: HourRange
    windows: tuple[WinterWindow, ...] | None


def evaluations(config: PipelineConfig) -> list[Evaluation]:
    if config.period is not None:
        return [Evaluation("period", "period", config.period, None)]
    evs = []
    for label in config.seasons:
        window = winter_window(season_label_to_year(label))
        evs.append(Evaluation(label, label.replace("/", "-"), window.span, (window,)))
    return evs


def days_in(rng: HourRange) -> list[date]:
    first = rng.start.date()
    last = (rng.end - timedelta(hours=1)).date()
    return [
        date.fromordinal(o) for o in range(first.toordinal(), last.toordinal() + 1)
    ]


def _child_seed(seed: int, *branch: int) -> int:
    ss = np.random.SeedSequence((seed, *branch))
    return int(ss.generate_state(2, dtype=np.uint64)[0])


# -- artifact layout ----------------------------------------------------


def series_path(config: PipelineConfig, zone: str, slug: str) -> Path:
    return config.output_dir / f"series_{zone}_{slug}.csv"


def fleet_path(config: PipelineConfig, zone: str) -> Path:
    return config.output_dir / f"fleet_{zone}.csv"


def pmf_path(config: PipelineConfig, zone: str) -> Path:
    return config.output_dir / f"pmf_{zone}.csv"


def sim_path(config: PipelineConfig, zone: str, slug: str) -> Path:
    return config.output_dir / f"sim_{zone}_{slug}.csv"


def stats_path(config: PipelineConfig) -> Path:
    return config.output_dir / "stats.csv"


def manifest_path(config: PipelineConfig) -> Path:
    return config.output_dir / "manifest.json"


def _stage_artifacts(config: PipelineConfig) -> list[Path]:
    paths: list[Path] = []
    for zone in config.zones:
        paths.append(fleet_path(config, zone))
        paths.append(pmf_path(config, zone))
        for ev in evaluations(config):
            paths.append(series_path(config, zone, ev.slug))
            sim = sim_path(config, zone, ev.slug)
            paths.extend((sim, okio.sidecar_for(sim)))
    paths.append(stats_path(config))
    return paths


# -- stages -------------------------------------------------------------


def _client(config: PipelineConfig) -> FetchClient:
    return FetchClient(
        config.api_token,
        config.cache_dir,
        rate_limit_s=config.rate_limit_s,
        retries=config.retries,
    )


def stage_fetch(config: PipelineConfig) -> int:
    """Ensure every zone-day of every evaluation period is in the cache."""
    client = _client(config)
    fetched = 0
    for zone in config.zones:
        eic = eic_for_zone(zone, config.zone_eic)
        for ev in evaluations(config):
            for day in days_in(ev.range):
                for doc_type in DOC_TYPES:
                    client.fetch_day(zone, day, doc_type, eic=eic)
                    fetched += 1
    return fetched


def _parse_zone_period(
    client: FetchClient, config: PipelineConfig, zone: str, ev: Evaluation
) -> list:
    eic = eic_for_zone(zone, config.zone_eic)
    reports = []
    for day in days_in(ev.range):
        for doc_type in DOC_TYPES:
            for page, payload in enumerate(client.fetch_day(zone, day, doc_type, eic=eic)):
                try:
                    reports.extend(parse_document(payload, zone_eic=config.zone_eic))
                except ParseError as exc:
                    raise ParseError(
                        f"{client._page_path(zone, day, doc_type, page)}: {exc}"
                    ) from exc
    return reports


def _zero_series(zone: str, channel: Channel, rng: HourRange) -> HourlyOutageSeries:
    zeros = np.zeros(rng.n_hours, dtype=np.float64)
    return HourlyOutageSeries(
        subject=zone,
        channel=channel,
        start=rng.start,
        o_min_mw=zeros,
        o_mean_mw=zeros.copy(),
        o_max_mw=zeros.copy(),
    )


def stage_ingest(config: PipelineConfig) -> list[Path]:
    """Parse cached documents into reconciled per-zone hourly series CSVs."""
    client = _client(config)
    config.output_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    for zone in config.zones:
        for ev in evaluations(config):
            reports = filter_reports(deduplicate(_parse_zone_period(client, config, zone, ev)))
            by_unit: dict[str, list] = {}
            for r in reports:
                by_unit.setdefault(r.unit_id, []).append(r)
            per_channel: dict[Channel, list[HourlyOutageSeries]] = {c: [] for c in Channel}
            for unit_id in sorted(by_unit):
                series = unit_series(by_unit[unit_id], ev.range)
                for channel, s in series.items():
                    per_channel[channel].append(s)
            zone_series = {
                channel: zone_aggregate(series_list, zone=zone)
                if series_list
                else _zero_series(zone, channel, ev.range)
                for channel, series_list in per_channel.items()
            }
            target = series_path(config, zone, ev.slug)
            okio.write_zone_series(zone_series, target)
            written.append(target)
            logger.info(
                "ingested %s %s: %d reports, %d units", zone, ev.label, len(reports), len(by_unit)
            )
    return written


def _load_params(config: PipelineConfig) -> tuple[dict[Fuel, object], str]:
    if config.model_params_path is None:
        return dict(FUEL_PARAMS), FUEL_PARAMS_VERSION
    return okio.load_fuel_params(config.model_params_path)


def stage_fleet(config: PipelineConfig) -> list[Path]:
    """Synthesize one representative fleet per zone from the unit registry.

    Size pools are pooled across all registry zones (a zone with few units
    still draws from a representative size distribution); capacity targets
    are per zone.
    """
    if config.registry_path is None:
        raise InvalidInputError("fleet stage needs registry_path in the config")
    registry = okio.read_registry(config.registry_path)
    pools = pool_unit_sizes((r.fuel, r.capacity_mw) for r in registry)
    params, _ = _load_params(config)
    config.output_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    for zone_idx, zone in enumerate(config.zones):
        targets: dict[Fuel, int] = {}
        for row in registry:
            if row.zone == zone:
                targets[row.fuel] = targets.get(row.fuel, 0) + row.capacity_mw
        if not targets:
            raise InvalidInputError(
                f"{config.registry_path}: registry has no units for zone {zone}"
            )
        fleet = synthesize_fleet(
            targets, pools, params, _child_seed(config.seed, _STREAM_FLEET, zone_idx), zone=zone
        )
        target = fleet_path(config, zone)
        okio.write_fleet(fleet, target)
        written.append(target)
        logger.info(
            "fleet %s: %d units, %d MW", zone, len(fleet.units), fleet.total_capacity_mw
        )
    return written


def stage_model(config: PipelineConfig) -> list[Path]:
    """Convolve each zone fleet into its capacity-outage PMF CSV."""
    written: list[Path] = []
    for zone in config.zones:
        fleet = okio.read_fleet(fleet_path(config, zone))
        pmf = fleet_outage_pmf(fleet)
        target = pmf_path(config, zone)
        okio.write_pmf(pmf, target)
        written.append(target)
    return written


def stage_simulate(config: PipelineConfig) -> list[Path]:
    """Run the two-state chain over each evaluation period for each zone."""
    written: list[Path] = []
    for zone_idx, zone in enumerate(config.zones):
        fleet = okio.read_fleet(fleet_path(config, zone))
        for ev_idx, ev in enumerate(evaluations(config)):
            seed = _child_seed(config.seed, _STREAM_SIM, zone_idx, ev_idx)
            sim = simulate_fleet(fleet, ev.range.n_hours, seed, start=ev.range.start)
            meta = simulation_metadata(fleet, ev.range.n_hours, seed, ev.range.start)
            meta["evaluation"] = ev.label
            target = sim_path(config, zone, ev.slug)
            okio.write_sim_series(sim, meta, target)
            written.append(target)
    return written


def _pooled_stats(
    per_ev: Sequence[tuple[object, WinterWindow | None]],
) -> tuple[float, float, dict[int, float]]:
    """Pooled mean/IQR and window-averaged ACF over (series, window) pairs."""
    samples = []
    acfs: list[dict[int, float]] = []
    for series, window in per_ev:
        values = series.o_mean_mw if isinstance(series, HourlyOutageSeries) else series.values_mw
        if window is not None:
            values = values[window.indices_in(series.range)]
        samples.append(values)
        try:
            acfs.append(
                autocorrelation(series, None if window is None else [window], REPORT_LAGS_HOURS)
            )
        except StatsError:
            pass  # zero-variance window (e.g. an all-zero channel)
    mean, iqr = sample_stats(np.concatenate(samples))
    acf: dict[int, float] = {}
    if acfs:
        acf = {lag: float(np.mean([a[lag] for a in acfs])) for lag in REPORT_LAGS_HOURS}
    return mean, iqr, acf


def stage_stats(config: PipelineConfig) -> Path:
    """Comparison statistics CSV: empirical channels vs model vs simulation.

    Mean and IQR pool the hourly samples of all evaluation windows; the
    reconciliation error is the worst (maximum) across windows; the ACF is
    the unweighted mean across windows.  Model and simulated rows carry the
    Total channel, which is what the availability parameters describe.
    """
    rows: list[okio.StatsRow] = []
    for zone_idx, zone in enumerate(config.zones):
        empirical: dict[str, dict[Channel, HourlyOutageSeries]] = {}
        for ev in evaluations(config):
            empirical[ev.slug] = okio.read_zone_series(
                series_path(config, zone, ev.slug), zone=zone
            )
        for channel in Channel:
            per_ev = []
            recon_errors: list[float] = []
            for ev in evaluations(config):
                s = empirical[ev.slug][channel]
                windows = ev.windows or (None,)
                for window in windows:
                    per_ev.append((s, window))
                    try:
                        recon_errors.append(reconciliation_error(s, window))
                    except StatsError:
                        pass  # channel has no outage mass in this window
            mean, iqr, acf = _pooled_stats(per_ev)
            rows.append(
                okio.StatsRow(
                    zone=zone,
                    channel=channel.value,
                    source="empirical",
                    stats=SummaryStats(
                        mean_mw=mean,
                        iqr_mw=iqr,
                        recon_error=max(recon_errors) if recon_errors else None,
                        acf=acf,
                    ),
                )
            )
        pmf = okio.read_pmf(pmf_path(config, zone))
        model_mean, model_iqr = pmf_stats(pmf)
        rows.append(
            okio.StatsRow(
                zone=zone,
                channel=Channel.TOTAL.value,
                source="model",
                stats=SummaryStats(
                    mean_mw=model_mean, iqr_mw=model_iqr, recon_error=None, acf={}
                ),
            )
        )
        sim_pairs = []
        for ev in evaluations(config):
            sim, _ = okio.read_sim_series(sim_path(config, zone, ev.slug))
            for window in ev.windows or (None,):
                sim_pairs.append((sim, window))
        sim_mean, sim_iqr, sim_acf = _pooled_stats(sim_pairs)
        rows.append(
            okio.StatsRow(
                zone=zone,
                channel=Channel.TOTAL.value,
                source="simulated",
                stats=SummaryStats(
                    mean_mw=sim_mean, iqr_mw=sim_iqr, recon_error=None, acf=sim_acf
                ),
            )
        )
    target = stats_path(config)
    okio.write_stats_csv(rows, target)
    return target


def _sha256_file(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def write_manifest(config: PipelineConfig, fuel_params_version: str) -> Path:
    """Record config hash, seed, versions, and a content hash per artifact.

    Deliberately contains no wall-clock timestamps: two runs on the same
    inputs must produce byte-identical manifests.
    """
    artifacts = {
        str(p.relative_to(config.output_dir)): _sha256_file(p)
        for p in sorted(_stage_artifacts(config))
        if p.exists()
    }
    manifest = {
        "tool": "outagekit",
        "config_sha256": config.sha256(),
        "seed": config.seed,
        "zones": list(config.zones),
        "evaluations": [ev.label for ev in evaluations(config)],
        "fuel_params_version": fuel_params_version,
        "rng": RNG_NAME,
        "artifacts": artifacts,
    }
    target = manifest_path(config)
    target.write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    return target


_STAGES: tuple[tuple[str, Callable[[PipelineConfig], object]], ...] = (
    ("fetch", stage_fetch),
    ("ingest", stage_ingest),
    ("fleet", stage_fleet),
    ("model", stage_model),
    ("simulate", stage_simulate),
    ("stats", stage_stats),
)


def run_pipeline(config: PipelineConfig) -> Path:
    """Run every stage in order and write the manifest; returns its path."""
    for name, stage in _STAGES:
        logger.info("stage %s", name)
        try:
            stage(config)
        except OutageKitError as exc:
            raise type(exc)(f"{name} stage: {exc}") from exc
    _, version = _load_params(config)
    return write_manifest(config, version)


# -- plot-ready data ----------------------------------------------------


def emit_plot_data(config: PipelineConfig, kind: str) -> list[Path]:
    """Export plot-ready CSVs from existing artifacts.

    Kinds: ``histogram`` (hourly outage frequencies vs the model PMF, binned
    in GW), ``seasonal`` (52-week outage and optional demand profiles) and
    ``timeseries`` (empirical series next to independent simulated draws).
    """
    if kind == "histogram":
        emitted = _emit_histograms(config)
    elif kind == "seasonal":
        emitted = _emit_seasonal(config)
    elif kind == "timeseries":
        emitted = _emit_timeseries(config)
    else:
        raise UsageError(f"unknown plot-data kind {kind!r}; expected one of {PLOT_KINDS}")
    _extend_manifest(config, emitted)
    return emitted


def _empirical_window_values(
    config: PipelineConfig, zone: str, channel: Channel
) -> np.ndarray:
    chunks = []
    for ev in evaluations(config):
        series = okio.read_zone_series(series_path(config, zone, ev.slug), zone=zone)[channel]
        for window in ev.windows or (None,):
            if window is None:
                chunks.append(series.o_mean_mw)
            else:
                chunks.append(series.o_mean_mw[window.indices_in(series.range)])
    return np.concatenate(chunks)


def _emit_histograms(config: PipelineConfig) -> list[Path]:
    written = []
    width = config.histogram_bin_mw
    for zone in config.zones:
        totals = _empirical_window_values(config, zone, Channel.TOTAL)
        forced = _empirical_window_values(config, zone, Channel.FORCED)
        pmf = okio.read_pmf(pmf_path(config, zone))
        top = max(float(totals.max()), float(forced.max()), float(pmf.max_outage_mw))
        n_bins = max(1, int(np.floor(top / width)) + 1)
        edges = np.arange(n_bins + 1) * float(width)
        freq_total = np.histogram(totals, bins=edges)[0] / totals.size
        freq_forced = np.histogram(forced, bins=edges)[0] / forced.size
        # bin the PMF by padding the support up to a whole number of bins
        padded = np.zeros(n_bins * width, dtype=np.float64)
        padded[: pmf.probabilities.size] = pmf.probabilities
        model_prob = padded.reshape(n_bins, width).sum(axis=1)
        lines = ["bin_gw,freq_total,freq_forced,model_prob"]
        lines.extend(
            f"{edges[i] / 1000.0:.3f},{float(freq_total[i])!r},"
            f"{float(freq_forced[i])!r},{float(model_prob[i])!r}"
            for i in range(n_bins)
        )
        target = config.output_dir / f"plot_histogram_{zone}.csv"
        target.write_text("\n".join(lines) + "\n", encoding="utf-8")
        written.append(target)
    return written


def _emit_seasonal(config: PipelineConfig) -> list[Path]:
    evs = evaluations(config)
    year_long = [ev for ev in evs if ev.range.n_hours >= 8760]
    if not year_long:
        raise UsageError(
            "seasonal plot data needs an evaluation period of at least one full "
            "year; configure 'period' accordingly"
        )
    demand = okio.read_demand(config.demand_path) if config.demand_path else None
    written = []
    for zone in config.zones:
        ev = year_long[0]
        series = okio.read_zone_series(series_path(config, zone, ev.slug), zone=zone)[
            Channel.TOTAL
        ]
        if demand is None:
            outage = weekly_profile(series).tolist()
            header = "week,outage"
            rows = [f"{week + 1},{outage[week]!r}" for week in range(52)]
        else:
            outage_arr, demand_arr = weekly_profile(series, demand)
            outage, demand_vals = outage_arr.tolist(), demand_arr.tolist()
            header = "week,outage,demand"
            rows = [
                f"{week + 1},{outage[week]!r},{demand_vals[week]!r}" for week in range(52)
            ]
        target = config.output_dir / f"plot_seasonal_{zone}.csv"
        target.write_text("\n".join([header, *rows]) + "\n", encoding="utf-8")
        written.append(target)
    return written


def _emit_timeseries(config: PipelineConfig) -> list[Path]:
    written = []
    draws = config.timeseries_draws
    for zone_idx, zone in enumerate(config.zones):
        fleet = okio.read_fleet(fleet_path(config, zone))
        for ev_idx, ev in enumerate(evaluations(config)):
            series = okio.read_zone_series(series_path(config, zone, ev.slug), zone=zone)[
                Channel.TOTAL
            ]
            sims = [
                simulate_fleet(
                    fleet,
                    ev.range.n_hours,
                    _child_seed(config.seed, _STREAM_PLOT, zone_idx, ev_idx, k),
                    start=ev.range.start,
                )
                for k in range(draws)
            ]
            header = "timestamp_utc,empirical_mw," + ",".join(
                f"sim{k + 1}_mw" for k in range(draws)
            )
            lines = [header]
            for i, hour in enumerate(ev.range.hours()):
                sim_cells = ",".join(f"{s.values_mw[i]:.0f}" for s in sims)
                lines.append(f"{format_utc(hour)},{series.o_mean_mw[i]:.3f},{sim_cells}")
            target = config.output_dir / f"plot_timeseries_{zone}_{ev.slug}.csv"
            target.write_text("\n".join(lines) + "\n", encoding="utf-8")
            written.append(target)
    return written


def _extend_manifest(config: PipelineConfig, paths: Sequence[Path]) -> None:
    """Add freshly emitted files to the manifest, if one exists."""
    target = manifest_path(config)
    if not target.exists():
        return
    manifest = json.loads(target.read_text(encoding="utf-8"))
    for p in paths:
        manifest["artifacts"][str(p.relative_to(config.output_dir))] = _sha256_file(p)
    manifest["artifacts"] = dict(sorted(manifest["artifacts"].items()))
    target.write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
