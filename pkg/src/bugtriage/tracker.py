"""REST client for pulling raw reports out of a Bugzilla-style tracker.

Fetched reports have no intention/label; they are written to the annotation
CSV variant for manual labeling. Connection settings come from flags or the
``BUGTRIAGE_TRACKER_URL`` / ``BUGTRIAGE_TRACKER_TOKEN`` environment
variables.
"""

from __future__ import annotations

import requests

from .corpus import BugReport, Dataset
from .errors import TrackerHttpError, TrackerNetworkError, TrackerPayloadError

ENV_URL = "BUGTRIAGE_TRACKER_URL"
ENV_TOKEN = "BUGTRIAGE_TRACKER_TOKEN"

_REQUIRED = ("id", "product", "component", "severity", "summary")


def _report_from_payload(bug: dict, position: int) -> BugReport:
    for key in _REQUIRED:
        if key not in bug:
            raise TrackerPayloadError(f"bug #{position} in payload is missing {key!r}")
    reporter = bug.get("creator") or bug.get("reporter")
    if not reporter:
        raise TrackerPayloadError(f"bug #{position} in payload is missing 'creator'")
    return BugReport(
        id=str(bug["id"]),
        product=str(bug["product"]),
        component=str(bug["component"]),
        reporter=str(reporter),
        severity=str(bug["severity"]),
        summary=str(bug["summary"]),
        intention=None,
        label=None,
    )


def fetch_tracker(
    base_url: str,
    status: str = "RESOLVED",
    resolution: str = "FIXED",
    token: str | None = None,
    limit: int | None = None,
    timeout: float = 30.0,
    session: requests.Session | None = None,
) -> Dataset:
    """GET ``{base_url}/rest/bug`` filtered by status/resolution.

    Returns an unlabeled Dataset. Network failures, non-2xx responses and
    malformed payloads raise distinct, retryable-flagged errors.
    """
    if not status or not resolution:
        raise ValueError("status and resolution filters are required")
    params: dict[str, str] = {"status": status, "resolution": resolution}
    if limit is not None:
        params["limit"] = str(limit)
    if token:
        params["api_key"] = token
    url = base_url.rstrip("/") + "/rest/bug"
    http = session or requests
    try:
        resp = http.get(url, params=params, timeout=timeout)
    except requests.RequestException as exc:
        raise TrackerNetworkError(f"request to {url} failed: {exc}") from exc
    if not 200 <= resp.status_code < 300:
        raise TrackerHttpError(f"{url} returned HTTP {resp.status_code}", status=resp.status_code)
    try:
        payload = resp.json()
    except ValueError as exc:
        raise TrackerPayloadError(f"{url} returned a non-JSON body") from exc
    if not isinstance(payload, dict) or not isinstance(payload.get("bugs"), list):
        raise TrackerPayloadError(f"{url} payload has no 'bugs' list")
    reports = tuple(_report_from_payload(b, i) for i, b in enumerate(payload["bugs"]))
    return Dataset(reports=reports, source=url)
