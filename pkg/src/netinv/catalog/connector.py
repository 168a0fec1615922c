"""Scheduled catalog synchronization into the context graph."""

from __future__ import annotations

import json
import logging
import threading
from collections import deque
from dataclasses import dataclass, field
from datetime import datetime, timezone

from ..context.model import Attribute, Entity
from ..context.store import ContextStore
from ..errors import NetinvError, NotFoundError, ValidationError
from ..ids import module_urn_parts
from ..platform.model import revision_is_date
from .client import CatalogClient
from .model import (
    CATALOG_OWNED_ATTRIBUTES,
    CatalogModuleRecord,
    map_catalog_record,
    merge_policy,
)

log = logging.getLogger(__name__)

MIN_INTERVAL = 60.0


@dataclass
class ConnectorConfig:
    base_url: str
    interval: float = 24 * 3600.0
    page_size: int = 500
    enabled: bool = True

    def validate(self) -> None:
        if not self.base_url:
            raise ValidationError("catalog base URL must be set")
        if self.interval < MIN_INTERVAL:
            raise ValidationError(f"catalog interval must be at least {MIN_INTERVAL:.0f} s")
        if self.page_size < 1:
            raise ValidationError("catalog page size must be positive")


@dataclass
class SyncReport:
    fetched: int = 0
    upserted: int = 0
    unchanged: int = 0
    failed: int = 0
    started_at: str = ""
    finished_at: str = ""
    errors: list[str] = field(default_factory=list)

    def check(self) -> None:
        if self.fetched != self.upserted + self.unchanged + self.failed:
            raise NetinvError("sync counters do not add up")

    def to_json(self) -> dict:
        return {
            "fetched": self.fetched,
            "upserted": self.upserted,
            "unchanged": self.unchanged,
            "failed": self.failed,
            "startedAt": self.started_at,
            "finishedAt": self.finished_at,
            "errors": self.errors,
        }


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="milliseconds")


def _canonical_attrs(attrs: dict[str, list[Attribute]], names: set[str]) -> str:
    doc = {}
    for name in sorted(names):
        instances = attrs.get(name)
        if instances:
            entity = Entity(id="urn:ngsi-ld:Module:x:unknown", type="Module")
            entity.attributes = {name: instances}
            doc[name] = entity.sorted_canonical()[name]
    return json.dumps(doc, sort_keys=True)


class CatalogConnector:
    def __init__(self, store: ContextStore, config: ConnectorConfig | None = None):
        self._store = store
        self.config = config
        self._reports: deque[SyncReport] = deque(maxlen=50)
        self._run_lock = threading.Lock()
        self._stop = threading.Event()
        self._thread: threading.Thread | None = None

    # -- one synchronization run ---------------------------------------------------

    def sync(self, config: ConnectorConfig | None = None) -> SyncReport:
        config = config or self.config
        if config is None:
            raise ValidationError("catalog connector is not configured")
        report = SyncReport(started_at=_now())
        if not self._run_lock.acquire(blocking=False):
            report.errors.append("sync already in progress; skipped")
            report.finished_at = _now()
            return report
        try:
            client = CatalogClient(config.base_url, page_size=config.page_size)
            try:
                for page in client.iter_pages():
                    self._apply_page(page, report)
            except NetinvError as exc:
                report.errors.append(str(exc))
                log.warning("catalog sync aborted: %s", exc)
        finally:
            self._run_lock.release()
            report.finished_at = _now()
            report.check()
            self._reports.append(report)
        return report

    def _apply_page(self, page: list[dict], report: SyncReport) -> None:
        for raw in page:
            report.fetched += 1
            try:
                record = CatalogModuleRecord.from_json(raw)
                entity = map_catalog_record(record)
                directive = merge_policy(entity)
                changed = self._apply_directive(directive)
            except ValidationError as exc:
                report.failed += 1
                report.errors.append(f"record rejected: {exc}")
                continue
            if changed:
                report.upserted += 1
            else:
                report.unchanged += 1

    def _apply_directive(self, directive) -> bool:
        self._materialize_reference_targets(directive.attributes)
        try:
            stored = self._store.get_entity(directive.entity_id)
        except NotFoundError:
            self._store.upsert_entity(
                Entity(
                    id=directive.entity_id,
                    type=directive.entity_type,
                    attributes=directive.attributes,
                ),
                mode="merge",
            )
            return True
        compare_names = set(directive.attributes) | (
            set(CATALOG_OWNED_ATTRIBUTES) & set(stored.attributes)
        )
        before = _canonical_attrs(stored.attributes, compare_names)
        after = _canonical_attrs(directive.attributes, compare_names)
        if before == after:
            return False
        self._store.patch_attributes(directive.entity_id, directive.attributes)
        # catalog-owned attributes missing from the new record are stale
        for name in set(CATALOG_OWNED_ATTRIBUTES) & set(stored.attributes):
            if name in directive.attributes:
                continue
            for inst in stored.attributes[name]:
                self._store.drop_attribute_instance(directive.entity_id, name, inst.dataset_id)
        return True

    def _materialize_reference_targets(self, attrs: dict[str, list[Attribute]]) -> None:
        """Dependency targets unknown to the graph become placeholder modules."""
        for name in ("hasDependencies", "hasDependents"):
            for inst in attrs.get(name, []):
                target = inst.object
                if self._store.has_entity(target):
                    continue
                ref_name, ref_revision = module_urn_parts(target)
                attributes = {
                    "name": [Attribute.property(ref_name)],
                    "placeholder": [Attribute.property(True)],
                }
                if ref_revision:
                    attributes["revision"] = [Attribute.property(ref_revision)]
                    if not revision_is_date(ref_revision):
                        attributes["revisionKnown"] = [Attribute.property(False)]
                else:
                    attributes["revisionKnown"] = [Attribute.property(False)]
                self._store.upsert_entity(
                    Entity(id=target, type="Module", attributes=attributes), mode="merge"
                )

    # -- scheduling --------------------------------------------------------------

    def reports(self, limit: int = 10) -> list[dict]:
        return [report.to_json() for report in list(self._reports)[-limit:]]

    def start_scheduler(self) -> None:
        if self.config is None or not self.config.enabled:
            return
        self.config.validate()
        self._stop.clear()
        self._thread = threading.Thread(
            target=run_schedule,
            args=(self.sync, self.config.interval, self._stop),
            daemon=True,
        )
        self._thread.start()

    def stop_scheduler(self) -> None:
        self._stop.set()
        if self._thread is not None:
            self._thread.join(timeout=2.0)
            self._thread = None


def run_schedule(sync_fn, interval: float, stop: threading.Event) -> int:
    """Invoke sync_fn immediately and then every interval until stopped.

    A failing run never stops the loop; runs are sequential by construction,
    so two syncs can never overlap. Returns the number of completed runs."""
    runs = 0
    while not stop.is_set():
        try:
            sync_fn()
        except Exception:
            log.exception("scheduled catalog sync failed")
        runs += 1
        if stop.wait(interval):
            break
    return runs
