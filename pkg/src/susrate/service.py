"""Read-only HTTP API for the catalog and precomputed indices.

The privacy split lives here: this service only ever ships
user-independent numbers (catalog metadata, association breakdowns,
sustainability indices).  Preference scores and ratings exist solely on
the client, so no route accepts them; an integration test walks the
OpenAPI schema to keep it that way.

Requests are served from an immutable snapshot; reloads build a new
snapshot off to the side and swap it in atomically.
"""

from __future__ import annotations

import logging
import threading
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

from fastapi import FastAPI, HTTPException, Request
from fastapi.middleware.cors import CORSMiddleware

from .rating import RatingConfig, RatingEngine
from .store import LoadedOntology, load_ontology

DEFAULT_PAGE_SIZE = 50
PAGE_SIZE_CAP = 500

logger = logging.getLogger("susrate.service")


@dataclass(frozen=True)
class Snapshot:
    loaded: LoadedOntology
    engine: RatingEngine


def tag_detail_payload(engine: RatingEngine, product_id: str) -> dict:
    """User-independent association breakdown for one product.

    Everything a client needs to rebuild indices and product-tag
    contribution shares locally: per-tag association rows, per-aspect
    aggregates, normalized values, references, and aspect membership.
    """
    ontology = engine.ontology
    product = ontology.products[product_id]
    tags = [
        {
            "id": tid,
            "name": ontology.product_tags[tid].name,
            "associations": {
                wid: ontology.association(
                    ontology.product_tags[tid], ontology.preference_tags[wid]
                )
                for wid in engine.pref_tag_ids
            },
        }
        for tid in sorted(product.tag_ids)
    ]
    membership: dict[str, list[str]] = {wid: [] for wid in engine.pref_tag_ids}
    for pid, preference in ontology.preferences.items():
        for wid in sorted(preference.tag_ids):
            membership[wid].append(pid)
    pref_tags = [
        {
            "id": wid,
            "name": ontology.preference_tags[wid].name,
            "preference_ids": membership[wid],
            "aggregate": engine.aggregate(product_id, wid),
            "effective_aggregate": engine.effective_aggregate(product_id, wid),
            "normalized": engine.normalized_association(product_id, wid),
            "reference_positive": engine.references[wid][0],
            "reference_negative": engine.references[wid][1],
        }
        for wid in engine.pref_tag_ids
    ]
    return {"product_id": product_id, "tags": tags, "preference_tags": pref_tags}


class ServiceState:
    """Current snapshot plus single-writer reload discipline."""

    def __init__(
        self,
        ontology_path: Optional[Union[str, Path]] = None,
        cfg: Optional[RatingConfig] = None,
        page_size_cap: int = PAGE_SIZE_CAP,
    ) -> None:
        self.ontology_path = Path(ontology_path) if ontology_path else None
        self.cfg = cfg or RatingConfig()
        self.page_size_cap = page_size_cap
        self._snapshot: Optional[Snapshot] = None
        self._building = False
        self._write_lock = threading.Lock()

    @property
    def snapshot(self) -> Optional[Snapshot]:
        return self._snapshot

    @property
    def building(self) -> bool:
        return self._building

    def install(self, loaded: LoadedOntology) -> Snapshot:
        """Build the index cache for a loaded ontology and swap it in."""
        with self._write_lock:
            self._building = True
            try:
                snapshot = Snapshot(loaded, RatingEngine(loaded.ontology, self.cfg))
                self._snapshot = snapshot
            finally:
                self._building = False
        return snapshot

    def reload(self) -> Snapshot:
        if self.ontology_path is None:
            raise RuntimeError("no ontology path configured")
        return self.install(load_ontology(self.ontology_path))


def create_app(state: ServiceState) -> FastAPI:
    app = FastAPI(title="sustainability index service", version="1.0")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["GET", "POST"],
        allow_headers=["*"],
    )
    app.state.service = state

    @app.middleware("http")
    async def log_request(request: Request, call_next):
        # Deliberately no client address or identifier in the log line.
        start = time.perf_counter()
        response = await call_next(request)
        logger.info(
            "method=%s path=%s status=%d duration_ms=%.1f",
            request.method,
            request.url.path,
            response.status_code,
            (time.perf_counter() - start) * 1e3,
        )
        return response

    def current() -> Snapshot:
        snapshot = state.snapshot
        if snapshot is None:
            if state.building:
                raise HTTPException(503, detail="index cache building")
            raise HTTPException(503, detail="no ontology loaded")
        return snapshot

    @app.get("/v1/health")
    def health() -> dict:
        snapshot = state.snapshot
        if snapshot is None:
            status = "building" if state.building else "empty"
            return {"status": status, "ontology_version": None, "cache": status}
        cache = "building" if state.building else "ready"
        return {
            "status": "ok",
            "ontology_version": snapshot.loaded.version,
            "cache": cache,
        }

    @app.get("/v1/preferences")
    def preferences() -> list[dict]:
        snapshot = current()
        return [
            {
                "id": p.id,
                "statement": p.statement,
                "description": p.description,
                "category": p.category,
                "strict": p.strict,
            }
            for p in snapshot.loaded.ontology.preferences.values()
        ]

    @app.get("/v1/products")
    def products(
        category: Optional[str] = None,
        page: str = "1",
        page_size: str = str(DEFAULT_PAGE_SIZE),
    ) -> dict:
        snapshot = current()
        try:
            page_number = int(page)
            size = int(page_size)
        except ValueError:
            raise HTTPException(400, detail="pagination values must be integers")
        if page_number < 1 or size < 1 or size > state.page_size_cap:
            raise HTTPException(
                400,
                detail=f"page must be >= 1 and page_size in [1, {state.page_size_cap}]",
            )
        catalog = [
            p
            for p in snapshot.loaded.ontology.products.values()
            if category is None or p.category_id == category
        ]
        start = (page_number - 1) * size
        items = catalog[start : start + size]
        return {
            "page": page_number,
            "page_size": size,
            "total": len(catalog),
            "ontology_version": snapshot.loaded.version,
            "items": [
                {
                    "id": p.id,
                    "name": p.name,
                    "category_id": p.category_id,
                    "unit_price": None if p.unit_price is None else str(p.unit_price),
                }
                for p in items
            ],
        }

    @app.get("/v1/products/{product_id}/indices")
    def indices(product_id: str) -> dict:
        snapshot = current()
        if product_id not in snapshot.loaded.ontology.products:
            raise HTTPException(404, detail=f"unknown product {product_id!r}")
        return {
            "product_id": product_id,
            "ontology_version": snapshot.loaded.version,
            "indices": snapshot.engine.indices(product_id),
        }

    @app.get("/v1/products/{product_id}/tag-detail")
    def tag_detail(product_id: str) -> dict:
        snapshot = current()
        if product_id not in snapshot.loaded.ontology.products:
            raise HTTPException(404, detail=f"unknown product {product_id!r}")
        payload = tag_detail_payload(snapshot.engine, product_id)
        payload["ontology_version"] = snapshot.loaded.version
        return payload

    @app.post("/v1/admin/reload")
    def reload() -> dict:
        try:
            snapshot = state.reload()
        except RuntimeError as exc:
            raise HTTPException(409, detail=str(exc))
        return {"status": "ok", "ontology_version": snapshot.loaded.version}

    return app


def create_app_for_path(
    ontology_path: Union[str, Path],
    cfg: Optional[RatingConfig] = None,
    page_size_cap: int = PAGE_SIZE_CAP,
) -> FastAPI:
    state = ServiceState(ontology_path, cfg, page_size_cap)
    state.reload()
    return create_app(state)
