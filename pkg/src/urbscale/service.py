"""JSON-over-HTTP facade for the explorer UI.

Data is loaded once at startup into an immutable snapshot; planes are built
lazily per (dependent, variogram, grid) key and cached until restart.
Endpoints never mutate the snapshot, so concurrent identical requests return
identical bodies. Errors are JSON ``{code, message}`` with stable codes.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from . import __version__, pipeline
from .errors import InsufficientDataError, UrbscaleError
from .ingest import DEFAULT_POPULATION_TOLERANCE, load_cities
from .kriging import PlanningPlane, build_plane
from .scaling import DEFAULT_CLASSES, city_spectrum
from .scenario import ScenarioDelta, evaluate_scenario


@dataclass
class SessionState:
    """Immutable data snapshot plus a once-initialized plane cache."""

    records: dict
    c: int = DEFAULT_CLASSES
    variogram: str = "exponential"
    grid: tuple[int, int] = (100, 100)
    _planes: dict = field(default_factory=dict)
    _lock: threading.Lock = field(default_factory=threading.Lock)

    @classmethod
    def load(
        cls,
        blocks_dir: str,
        observables: str,
        c: int = DEFAULT_CLASSES,
        tolerance: float = DEFAULT_POPULATION_TOLERANCE,
        variogram: str = "exponential",
        grid: tuple[int, int] = (100, 100),
        jobs: int | None = None,
    ) -> "SessionState":
        cities = load_cities(blocks_dir, observables)
        records = pipeline.analyze_cities(cities, c=c, tolerance=tolerance, jobs=jobs)
        return cls(records=records, c=c, variogram=variogram, grid=grid)

    def plane(self, dependent: str) -> PlanningPlane:
        key = (dependent, self.variogram, self.grid)
        with self._lock:
            if key not in self._planes:
                rows = pipeline.metrics_rows(self.records)
                samples = pipeline.plane_samples(rows, dependent)
                self._planes[key] = build_plane(
                    samples,
                    nx=self.grid[0],
                    ny=self.grid[1],
                    kind=self.variogram,
                    dependent=dependent,
                )
            return self._planes[key]


class ScenarioRequest(BaseModel):
    city_id: str
    delta: dict
    dependent: str = "gas_per_area"


def _error(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"code": code, "message": message})


def create_app(state: SessionState | None, ui_dir: str | None = None) -> FastAPI:
    """Build the app around a loaded snapshot (``None`` = 503 on every API)."""
    app = FastAPI(title="urbscale", version=__version__)

    @app.middleware("http")
    async def version_header(request: Request, call_next):
        response = await call_next(request)
        response.headers["X-Urbscale-Version"] = __version__
        return response

    @app.exception_handler(UrbscaleError)
    async def urbscale_error(request: Request, exc: UrbscaleError):
        return _error(422, exc.code, exc.message)

    @app.exception_handler(RequestValidationError)
    async def invalid_request(request: Request, exc: RequestValidationError):
        return _error(422, "invalid-request", str(exc))

    def require_state() -> SessionState:
        if state is None:
            raise _NotLoaded()
        return state

    class _NotLoaded(Exception):
        pass

    @app.exception_handler(_NotLoaded)
    async def not_loaded(request: Request, exc: _NotLoaded):
        return _error(503, "not-loaded", "no datasets loaded")

    @app.get("/api/health")
    def health():
        return {"status": "ok", "version": __version__, "loaded": state is not None}

    @app.get("/api/cities")
    def cities():
        st = require_state()
        out = []
        for city_id in sorted(st.records):
            record = st.records[city_id]
            ind = record.indicator
            out.append(
                {
                    "city_id": city_id,
                    "ds": None if ind is None else ind.scaling.ds,
                    "mean_density": None if ind is None else ind.mean_density,
                    "status": record.report.status,
                    "error": record.error,
                }
            )
        return {"cities": out}

    @app.get("/api/plane")
    def plane(dependent: str = "gas_per_area"):
        st = require_state()
        if dependent not in pipeline.DEPENDENT_VARIABLES:
            return _error(
                400,
                "unknown-dependent",
                f"dependent must be one of {list(pipeline.DEPENDENT_VARIABLES)}",
            )
        try:
            built = st.plane(dependent)
        except InsufficientDataError as exc:
            return _error(422, exc.code, exc.message)
        body = built.to_dict()
        rows = pipeline.metrics_rows(st.records)
        body["cities"] = [
            {
                "city_id": r.city_id,
                "x_std": (r.mean_density - built.x_mean) / built.x_std,
                "y_std": (r.ds - built.y_mean) / built.y_std,
                "mean_density": r.mean_density,
                "ds": r.ds,
                "z": r.get(dependent),
            }
            for r in rows
            if r.get(dependent) is not None
        ]
        return body

    @app.post("/api/scenario")
    def scenario(req: ScenarioRequest):
        st = require_state()
        if req.city_id not in st.records:
            return _error(404, "unknown-city", f"no city {req.city_id!r}")
        if req.dependent not in pipeline.DEPENDENT_VARIABLES:
            return _error(
                400,
                "unknown-dependent",
                f"dependent must be one of {list(pipeline.DEPENDENT_VARIABLES)}",
            )
        delta = ScenarioDelta.from_dict(req.delta)
        plane = st.plane(req.dependent)
        outcome = evaluate_scenario(
            st.records[req.city_id].dataset, delta, plane, c=st.c
        )
        return {"city_id": req.city_id, **outcome.to_dict()}

    @app.get("/api/spectrum")
    def spectrum(city_id: str):
        st = require_state()
        if city_id not in st.records:
            return _error(404, "unknown-city", f"no city {city_id!r}")
        bands, _ = city_spectrum(st.records[city_id].dataset, c=st.c)
        return {
            "city_id": city_id,
            "bands": [
                {
                    "density_rhoj": b.density_rhoj,
                    "area_aj": b.area_aj,
                    "color_bin": b.color_bin,
                }
                for b in bands
            ],
        }

    if ui_dir:
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
