from __future__ import annotations

from datetime import datetime, timedelta, timezone

import pytest

from outagekit.ingest import OutageReport, ReportKind, ReportStatus
from outagekit.types import Fuel, GeneratorUnit

T0 = datetime(2030, 1, 7, 0, 0, tzinfo=timezone.utc)


def make_unit(
    uid: str = "u1",
    capacity_mw: int = 100,
    availability: float = 0.9,
    mttr_hours: float = 50.0,
    fuel: Fuel = Fuel.CCGT,
) -> GeneratorUnit:
    return GeneratorUnit(
        id=uid,
        fuel=fuel,
        capacity_mw=capacity_mw,
        availability=availability,
        mttr_hours=mttr_hours,
    )


def make_report(
    report_id: str = "r1",
    revision: int = 1,
    unit_id: str = "u1",
    nominal_mw: float = 400.0,
    start_h: float = 0.0,
    end_h: float = 1.0,
    unavailable_mw: float = 100.0,
    kind: ReportKind = ReportKind.FORCED,
    status: ReportStatus = ReportStatus.ACTIVE,
    fuel=Fuel.CCGT,
    zone: str = "AA",
) -> OutageReport:
    """Report builder with hour offsets relative to the shared T0 origin."""
    return OutageReport(
        report_id=report_id,
        revision=revision,
        unit_id=unit_id,
        zone=zone,
        fuel=fuel,
        nominal_mw=nominal_mw,
        start=T0 + timedelta(hours=start_h),
        end=T0 + timedelta(hours=end_h),
        unavailable_mw=unavailable_mw,
        kind=kind,
        status=status,
    )


@pytest.fixture(scope="session")
def corpus(tmp_path_factory) -> dict:
    """Synthetic two-zone corpus built once per session.

    Returns the config path plus the parsed config, ready for pipeline runs.
    """
    import corpusgen

    from outagekit.pipeline import PipelineConfig

    root = tmp_path_factory.mktemp("corpus")
    config_path = corpusgen.build_corpus(root)
    return {
        "root": root,
        "config_path": config_path,
        "config": PipelineConfig.from_file(config_path),
    }
