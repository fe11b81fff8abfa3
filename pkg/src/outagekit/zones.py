"""Balancing-zone codes and their EIC area identifiers.

The built-in table covers the Northwest European zones this toolkit is
normally run for.  It is a default, not a registry: pipeline configuration
can add or override entries, since bidding-zone versus control-area codes
differ between data providers for some countries.
"""

from __future__ import annotations

#: zone code -> EIC area code used in API calls and document domains.
DEFAULT_ZONE_EIC: dict[str, str] = {
    "GB": "10YGB----------A",
    "BE": "10YBE----------2",
    "DE": "10Y1001A1001A83F",
    "DK": "10Y1001A1001A65H",
    "ES": "10YES-REE------0",
    "FR": "10YFR-RTE------C",
    "IE": "10YIE-1001A00010",
    "NL": "10YNL----------L",
    "NO": "10YNO-0--------C",
}


def zone_for_eic(eic: str, extra: dict[str, str] | None = None) -> str:
    """Zone code for an EIC area code; unknown codes pass through unchanged."""
    table = dict(DEFAULT_ZONE_EIC)
    if extra:
        table.update(extra)
    reverse = {v: k for k, v in table.items()}
    return reverse.get(eic, eic)


def eic_for_zone(zone: str, extra: dict[str, str] | None = None) -> str | None:
    table = dict(DEFAULT_ZONE_EIC)
    if extra:
        table.update(extra)
    return table.get(zone)
