from __future__ import annotations

import json

import numpy as np
import pytest

from outagekit.errors import InvalidInputError
from outagekit.fleet import CapacityOutagePMF, fleet_outage_pmf
from outagekit.ingest import Channel, HourlyOutageSeries
from outagekit.io import (
    RegistryRow,
    StatsRow,
    ZONE_SERIES_HEADER,
    load_fuel_params,
    read_demand,
    read_fleet,
    read_pmf,
    read_registry,
    read_sim_series,
    read_zone_series,
    sidecar_for,
    stats_header,
    write_fleet,
    write_pmf,
    write_registry,
    write_sim_series,
    write_stats_csv,
    write_zone_series,
)
from outagekit.stats import SummaryStats
from outagekit.timeseries import HourlySeries
from outagekit.types import FUEL_PARAMS, Fleet, Fuel

from conftest import T0, make_unit


# -- registry ----------------------------------------------------------------


def test_registry_round_trip(tmp_path):
    rows = [
        RegistryRow("AA", Fuel.CCGT, 400),
        RegistryRow("AA", Fuel.NUCLEAR, 1200),
        RegistryRow("BB", Fuel.COAL, 600),
    ]
    path = tmp_path / "registry.csv"
    write_registry(rows, path)
    assert read_registry(path) == rows
    assert path.read_text().startswith("zone,fuel,capacity_mw\nAA,CCGT,400\n")


def test_registry_rejects_unknown_fuel(tmp_path):
    path = tmp_path / "registry.csv"
    path.write_text("zone,fuel,capacity_mw\nAA,Fusion,100\n")
    with pytest.raises(InvalidInputError, match="Fusion"):
        read_registry(path)


def test_registry_rejects_bad_capacity(tmp_path):
    path = tmp_path / "registry.csv"
    path.write_text("zone,fuel,capacity_mw\nAA,CCGT,0\n")
    with pytest.raises(InvalidInputError, match="positive"):
        read_registry(path)


def test_registry_rejects_missing_columns(tmp_path):
    path = tmp_path / "registry.csv"
    path.write_text("zone,capacity_mw\nAA,100\n")
    with pytest.raises(InvalidInputError, match="missing columns"):
        read_registry(path)


def test_registry_rejects_empty(tmp_path):
    path = tmp_path / "registry.csv"
    path.write_text("zone,fuel,capacity_mw\n")
    with pytest.raises(InvalidInputError, match="no rows"):
        read_registry(path)


# -- fleet -------------------------------------------------------------------


def test_fleet_round_trip(tmp_path):
    fleet = Fleet(
        zone="AA",
        units=(
            make_unit("AA-CCGT-000", 400, 0.9, 50.0),
            make_unit("AA-CCGT-001", 250, 0.9, 50.0),
            make_unit("AA-Nuclear-000", 600, 0.81, 150.0, Fuel.NUCLEAR),
        ),
    )
    path = tmp_path / "fleet.csv"
    write_fleet(fleet, path)
    back = read_fleet(path)
    assert back == fleet  # positional ids regenerate identically


def test_fleet_availability_survives_round_trip_exactly(tmp_path):
    # availabilities and repair times are written with repr, so values that
    # are not exactly representable still round-trip bit for bit
    fleet = Fleet(zone="Z", units=(make_unit("Z-CCGT-000", 100, 0.8613841, 41.77),))
    path = tmp_path / "fleet.csv"
    write_fleet(fleet, path)
    back = read_fleet(path)
    assert back.units[0].availability == 0.8613841
    assert back.units[0].mttr_hours == 41.77


def test_fleet_empty_rejected(tmp_path):
    path = tmp_path / "fleet.csv"
    path.write_text("zone,fuel,capacity_mw,availability,mttr_hours\n")
    with pytest.raises(InvalidInputError, match="no units"):
        read_fleet(path)


# -- PMF ---------------------------------------------------------------------


def test_pmf_round_trip_is_bitwise(tmp_path):
    fleet = Fleet(
        zone="Z",
        units=(make_unit("a", 3, 0.9), make_unit("b", 5, 0.77), make_unit("c", 2, 0.985)),
    )
    pmf = fleet_outage_pmf(fleet)
    path = tmp_path / "pmf.csv"
    write_pmf(pmf, path)
    back = read_pmf(path)
    assert back.probabilities.tolist() == pmf.probabilities.tolist()


def test_pmf_file_shape(tmp_path):
    pmf = CapacityOutagePMF(probabilities=np.array([0.9, 0.0, 0.1]))
    path = tmp_path / "pmf.csv"
    write_pmf(pmf, path)
    assert path.read_text() == "outage_mw,probability\n0,0.9\n1,0.0\n2,0.1\n"


def test_pmf_rejects_gappy_grid(tmp_path):
    path = tmp_path / "pmf.csv"
    path.write_text("outage_mw,probability\n0,0.9\n2,0.1\n")
    with pytest.raises(InvalidInputError, match="contiguous"):
        read_pmf(path)


# -- zone series -------------------------------------------------------------


def _zone_channels(n: int = 4) -> dict[Channel, HourlyOutageSeries]:
    rng = np.random.default_rng(1)
    out = {}
    for channel in Channel:
        lo = np.round(rng.uniform(0, 100, size=n), 3)
        hi = lo + np.round(rng.uniform(0, 50, size=n), 3)
        out[channel] = HourlyOutageSeries(
            subject="AA", channel=channel, start=T0,
            o_min_mw=lo, o_mean_mw=(lo + hi) / 2, o_max_mw=hi,
        )
    return out


def test_zone_series_round_trip(tmp_path):
    channels = _zone_channels()
    path = tmp_path / "series.csv"
    write_zone_series(channels, path)
    back = read_zone_series(path, zone="AA")
    for channel in Channel:
        np.testing.assert_allclose(
            back[channel].o_mean_mw, channels[channel].o_mean_mw, atol=5e-4
        )
        assert back[channel].subject == "AA"
        assert back[channel].start == T0


def test_zone_series_header_and_formatting(tmp_path):
    channels = _zone_channels(1)
    path = tmp_path / "series.csv"
    write_zone_series(channels, path)
    lines = path.read_text().splitlines()
    assert lines[0] == ZONE_SERIES_HEADER
    assert lines[1].startswith("2030-01-07T00:00:00Z,")
    # every value cell has exactly three decimals
    for cell in lines[1].split(",")[1:]:
        assert len(cell.split(".")[1]) == 3


def test_zone_series_requires_all_channels(tmp_path):
    channels = _zone_channels()
    del channels[Channel.PLANNED]
    with pytest.raises(InvalidInputError, match="Planned"):
        write_zone_series(channels, tmp_path / "series.csv")


def test_zone_series_requires_aligned_periods(tmp_path):
    channels = _zone_channels()
    short = channels[Channel.TOTAL]
    channels[Channel.TOTAL] = HourlyOutageSeries(
        subject="AA", channel=Channel.TOTAL, start=short.start,
        o_min_mw=short.o_min_mw[:-1], o_mean_mw=short.o_mean_mw[:-1],
        o_max_mw=short.o_max_mw[:-1],
    )
    with pytest.raises(InvalidInputError, match="different periods"):
        write_zone_series(channels, tmp_path / "series.csv")


def test_zone_series_empty_file_rejected(tmp_path):
    path = tmp_path / "series.csv"
    path.write_text(ZONE_SERIES_HEADER + "\n")
    with pytest.raises(InvalidInputError, match="no rows"):
        read_zone_series(path)


# -- simulated series --------------------------------------------------------


def test_sim_series_round_trip_with_sidecar(tmp_path):
    series = HourlySeries(start=T0, values_mw=np.array([0.0, 100.0, 100.0, 0.0]))
    meta = {"seed": 7, "rng": "numpy.random.Generator(PCG64)"}
    path = tmp_path / "sim.csv"
    write_sim_series(series, meta, path)
    back, back_meta = read_sim_series(path)
    np.testing.assert_array_equal(back.values_mw, series.values_mw)
    assert back.start == T0
    assert back_meta == meta
    assert sidecar_for(path).name == "sim.csv.meta.json"


def test_sim_series_without_sidecar(tmp_path):
    path = tmp_path / "sim.csv"
    path.write_text("timestamp_utc,outage_mw\n2030-01-07T00:00:00Z,5.0\n")
    series, meta = read_sim_series(path)
    assert series.values_mw.tolist() == [5.0]
    assert meta == {}


# -- statistics CSV ----------------------------------------------------------


def test_stats_csv_layout(tmp_path):
    rows = [
        StatsRow("AA", "Total", "empirical",
                 SummaryStats(120.5, 80.0, 0.0123456789,
                              {1: 0.97, 6: 0.9, 24: 0.75, 168: 0.5})),
        StatsRow("AA", "Total", "model",
                 SummaryStats(119.0, 100.0, None, {})),
    ]
    path = tmp_path / "stats.csv"
    write_stats_csv(rows, path)
    lines = path.read_text().splitlines()
    assert lines[0] == stats_header()
    assert lines[0] == (
        "zone,channel,source,mean_mw,iqr_mw,recon_error,acf_1h,acf_6h,acf_24h,acf_168h"
    )
    assert lines[1] == "AA,Total,empirical,120.5,80.0,0.012346,0.97,0.9,0.75,0.5"
    # statistics that do not apply are empty cells, not zeros
    assert lines[2] == "AA,Total,model,119.0,100.0,,,,,"


def test_stats_csv_rounds_to_six_decimals(tmp_path):
    rows = [StatsRow("Z", "Total", "empirical",
                     SummaryStats(1 / 3, 2 / 3, None, {1: 1 / 7}))]
    path = tmp_path / "stats.csv"
    write_stats_csv(rows, path)
    line = path.read_text().splitlines()[1]
    assert line == "Z,Total,empirical,0.333333,0.666667,,0.142857,,,"


# -- fuel parameter table ----------------------------------------------------


def test_load_fuel_params(tmp_path):
    path = tmp_path / "params.json"
    path.write_text(json.dumps({
        "version": "test-override",
        "fuels": {
            "CCGT": {"availability": 0.92, "mttr_hours": 45},
            "Nuclear": {"availability": 0.85, "mttr_hours": 120},
        },
    }))
    table, version = load_fuel_params(path)
    assert version == "test-override"
    assert table[Fuel.CCGT].availability == 0.92
    assert table[Fuel.NUCLEAR].mttr_hours == 120.0
    assert Fuel.COAL not in table


def test_load_fuel_params_matches_builtin_shape(tmp_path):
    path = tmp_path / "params.json"
    path.write_text(json.dumps({
        "version": "full",
        "fuels": {
            fuel.value: {"availability": p.availability, "mttr_hours": p.mttr_hours}
            for fuel, p in FUEL_PARAMS.items()
        },
    }))
    table, _ = load_fuel_params(path)
    assert table == FUEL_PARAMS


def test_load_fuel_params_bad_shapes(tmp_path):
    path = tmp_path / "params.json"
    path.write_text(json.dumps({"fuels": {}}))
    with pytest.raises(InvalidInputError, match="no fuels"):
        load_fuel_params(path)
    path.write_text(json.dumps(["not", "an", "object"]))
    with pytest.raises(InvalidInputError, match="fuels"):
        load_fuel_params(path)
    path.write_text(json.dumps({"fuels": {"CCGT": {"availability": 0.9}}}))
    with pytest.raises(InvalidInputError, match="mttr_hours"):
        load_fuel_params(path)
    path.write_text(json.dumps({"fuels": {"Geothermal": {"availability": 0.9, "mttr_hours": 1}}}))
    with pytest.raises(InvalidInputError, match="Geothermal"):
        load_fuel_params(path)


# -- demand ------------------------------------------------------------------


def test_read_demand(tmp_path):
    path = tmp_path / "demand.csv"
    path.write_text(
        "timestamp_utc,demand_mw\n"
        "2030-01-07T00:00:00Z,41000.5\n"
        "2030-01-07T01:00:00Z,39875.0\n"
    )
    series = read_demand(path)
    assert series.start == T0
    assert series.values_mw.tolist() == [41000.5, 39875.0]


def test_read_demand_empty_rejected(tmp_path):
    path = tmp_path / "demand.csv"
    path.write_text("timestamp_utc,demand_mw\n")
    with pytest.raises(InvalidInputError, match="no rows"):
        read_demand(path)


def test_read_demand_missing_column(tmp_path):
    path = tmp_path / "demand.csv"
    path.write_text("timestamp_utc,load\n2030-01-07T00:00:00Z,1\n")
    with pytest.raises(InvalidInputError, match="demand_mw"):
        read_demand(path)
