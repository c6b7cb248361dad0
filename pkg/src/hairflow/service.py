"""HTTP/JSON session service for the interactive select-preview-accept loop.

A session accumulates uploaded artifacts (rgb, cloud, mask), an estimated
orientation field, and planned paths with their metrics and trajectories.
Accepting a path records the decision; nothing blocks on the user. State
is in-memory, optionally mirrored to HAIRFLOW_DATA_DIR as the standard
file formats.

Error contract: 404 unknown-session/unknown-path, 409 missing-prerequisite,
422 domain errors (start-outside-hair, ...), 400 malformed bodies, each as
{"code": ..., "message": ...}.
"""

import os
import pathlib
import threading
import uuid

from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse

from . import formats
from .errors import (
    DegeneratePlaneError,
    DegenerateTangentError,
    EmptyGoalError,
    EmptyMaskError,
    FormatError,
    HairflowError,
    NoValidDepthError,
    PathOutOfBoundsError,
    StartOutsideHairError,
    TooFewPointsError,
    UnreachableGoalError,
    ZeroLengthSegmentError,
)
from .color import rgb_to_hue, to_grayscale
from .filters import CoherenceParams
from .mesh import plan_mesh
from .orientation import OrientationParams, field_from_image
from .planning import PathParams, metrics, plan
from .trajectory import TrajectoryParams, generate as generate_trajectory

ERROR_CODES = frozenset({
    "unknown-session", "unknown-path", "missing-prerequisite", "malformed-body",
    "start-outside-hair", "degenerate-plane", "too-few-3d-points",
    "degenerate-tangent", "zero-length-segment", "empty-mask", "unreachable-goal",
    "invalid-params",
})

_DOMAIN_422 = {
    StartOutsideHairError: "start-outside-hair",
    DegeneratePlaneError: "degenerate-plane",
    TooFewPointsError: "too-few-3d-points",
    DegenerateTangentError: "degenerate-tangent",
    ZeroLengthSegmentError: "zero-length-segment",
    EmptyMaskError: "empty-mask",
    NoValidDepthError: "empty-mask",
    EmptyGoalError: "empty-mask",
    UnreachableGoalError: "unreachable-goal",
    PathOutOfBoundsError: "invalid-params",
}


class ApiError(Exception):
    def __init__(self, status, code, message):
        assert code in ERROR_CODES
        self.status = status
        self.code = code
        self.message = message
        super().__init__(message)


class Session:
    """Mutable per-session state; all access under self.lock."""

    def __init__(self, sid):
        self.id = sid
        self.lock = threading.Lock()
        self.rgb = None
        self.cloud = None
        self.mask = None
        self.field = None
        self.paths = {}      # pid -> (PixelPath, PathMetrics, planner name)
        self.poses = {}      # pid -> PosePath
        self.accepted = None
        self.next_path = 1

    def summary(self):
        return {
            "id": self.id,
            "has_rgb": self.rgb is not None,
            "has_cloud": self.cloud is not None,
            "has_mask": self.mask is not None,
            "has_field": self.field is not None,
            "paths": {
                pid: {
                    "planner": planner,
                    "n_points": len(path),
                    "metrics": m.to_dict(),
                    "has_trajectory": pid in self.poses,
                }
                for pid, (path, m, planner) in self.paths.items()
            },
            "accepted": self.accepted,
        }


class Store:
    def __init__(self, data_dir=None):
        self._lock = threading.Lock()
        self._sessions = {}
        self.data_dir = data_dir

    def create(self):
        sid = uuid.uuid4().hex[:12]
        with self._lock:
            self._sessions[sid] = Session(sid)
        return self._sessions[sid]

    def get(self, sid):
        with self._lock:
            session = self._sessions.get(sid)
        if session is None:
            raise ApiError(404, "unknown-session", f"no session {sid!r}")
        return session

    def persist(self, session, name, data):
        if not self.data_dir:
            return
        root = pathlib.Path(self.data_dir) / session.id
        root.mkdir(parents=True, exist_ok=True)
        path = root / name
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(data)


def _require(session, what, **have):
    missing = [name for name, value in have.items() if value is None]
    if missing:
        raise ApiError(409, "missing-prerequisite",
                       f"{what} requires {', '.join(missing)} to be uploaded first")


async def _body(request):
    return await request.body()


async def _json_body(request, required=(), optional=()):
    import json

    raw = await request.body()
    try:
        obj = json.loads(raw) if raw else {}
    except json.JSONDecodeError as exc:
        raise ApiError(400, "malformed-body", f"invalid JSON body: {exc}") from None
    if not isinstance(obj, dict):
        raise ApiError(400, "malformed-body", "body must be a JSON object")
    for key in required:
        if key not in obj:
            raise ApiError(400, "malformed-body", f"missing field {key!r}")
    unknown = set(obj) - set(required) - set(optional)
    if unknown:
        raise ApiError(400, "malformed-body", f"unknown fields {sorted(unknown)}")
    return obj


def create_app(data_dir=None, static_dir=None):
    app = FastAPI(title="hairflow", docs_url=None, redoc_url=None)
    store = Store(data_dir=data_dir or os.environ.get("HAIRFLOW_DATA_DIR"))

    @app.exception_handler(ApiError)
    async def _api_error(request, exc):
        return JSONResponse(status_code=exc.status,
                            content={"code": exc.code, "message": exc.message})

    @app.exception_handler(HairflowError)
    async def _domain_error(request, exc):
        for klass, code in _DOMAIN_422.items():
            if isinstance(exc, klass):
                return JSONResponse(status_code=422, content={"code": code, "message": str(exc)})
        return JSONResponse(status_code=400, content={"code": "malformed-body", "message": str(exc)})

    @app.post("/sessions", status_code=201)
    async def create_session():
        return {"id": store.create().id}

    @app.get("/sessions/{sid}")
    async def get_session(sid: str):
        session = store.get(sid)
        with session.lock:
            return session.summary()

    @app.put("/sessions/{sid}/rgb", status_code=204)
    async def put_rgb(sid: str, request: Request):
        session = store.get(sid)
        data = await _body(request)
        try:
            rgb = formats.read_ppm(data)
        except FormatError as exc:
            raise ApiError(400, "malformed-body", f"{exc.field}: {exc}") from None
        with session.lock:
            session.rgb = rgb
            session.field = None  # a new image invalidates any cached field
            store.persist(session, "rgb.ppm", data)
        return Response(status_code=204)

    @app.put("/sessions/{sid}/cloud", status_code=204)
    async def put_cloud(sid: str, request: Request):
        session = store.get(sid)
        data = await _body(request)
        try:
            cloud = formats.read_ocd(data)
        except FormatError as exc:
            raise ApiError(400, "malformed-body", f"{exc.field}: {exc}") from None
        with session.lock:
            session.cloud = cloud
            store.persist(session, "cloud.ocd", data)
        return Response(status_code=204)

    @app.put("/sessions/{sid}/mask", status_code=204)
    async def put_mask(sid: str, request: Request):
        session = store.get(sid)
        data = await _body(request)
        try:
            mask = formats.binary_mask_from_pgm(data)
        except FormatError as exc:
            raise ApiError(400, "malformed-body", f"{exc.field}: {exc}") from None
        with session.lock:
            session.mask = mask
            store.persist(session, "mask.pgm", data)
        return Response(status_code=204)

    @app.post("/sessions/{sid}/segment-fallback")
    async def segment_fallback(sid: str, request: Request):
        session = store.get(sid)
        body = await _json_body(request, required=("hue_lo", "hue_hi", "val_hi"))
        with session.lock:
            _require(session, "segment-fallback", rgb=session.rgb)
            hue, defined = rgb_to_hue(session.rgb)
            value = session.rgb.max(axis=2)
            lo, hi, vmax = float(body["hue_lo"]), float(body["hue_hi"]), float(body["val_hi"])
            if lo <= hi:
                hue_in = (hue >= lo) & (hue <= hi)
            else:  # wrapped range, e.g. 330..30
                hue_in = (hue >= lo) | (hue <= hi)
            mask = (value <= vmax) & (hue_in | ~defined)
            session.mask = mask
            store.persist(session, "mask.pgm", formats.binary_mask_to_pgm(mask))
            return {"width": mask.shape[1], "height": mask.shape[0],
                    "hair_pixels": int(mask.sum())}

    @app.post("/sessions/{sid}/orient")
    async def orient(sid: str, request: Request):
        session = store.get(sid)
        body = await _json_body(request, optional=(
            "k_delta", "k_avg", "shock_k_delta", "shock_k_e", "shock_k_m",
            "shock_c_blend", "shock_iterations"))
        with session.lock:
            _require(session, "orient", rgb=session.rgb)
            try:
                oparams = OrientationParams(
                    k_delta=int(body.get("k_delta", 3)),
                    k_avg=int(body.get("k_avg", 5)),
                )
                cparams = CoherenceParams(
                    k_delta=int(body.get("shock_k_delta", 7)),
                    k_e=int(body.get("shock_k_e", 11)),
                    k_m=int(body.get("shock_k_m", 3)),
                    c_blend=float(body.get("shock_c_blend", 0.9)),
                    iterations=int(body.get("shock_iterations", 3)),
                )
            except ValueError as exc:
                raise ApiError(400, "malformed-body", str(exc)) from None
            session.field = field_from_image(to_grayscale(session.rgb), cparams, oparams)
            store.persist(session, "field.orf", formats.write_orf(session.field))
            return {"field_id": "field", "width": session.field.shape[1],
                    "height": session.field.shape[0]}

    @app.get("/sessions/{sid}/field")
    async def get_field(sid: str):
        session = store.get(sid)
        with session.lock:
            _require(session, "field download", field=session.field)
            return Response(content=formats.write_orf(session.field),
                            media_type="application/octet-stream")

    @app.post("/sessions/{sid}/paths")
    async def post_path(sid: str, request: Request):
        session = store.get(sid)
        body = await _json_body(request, required=("x", "y"),
                                optional=("planner", "step_px", "max_steps", "goal_fraction",
                                          "edge_max_m"))
        planner = body.get("planner", "field")
        if planner not in ("field", "mesh"):
            raise ApiError(400, "malformed-body", f"planner must be 'field' or 'mesh', got {planner!r}")
        try:
            start = (float(body["x"]), float(body["y"]))
        except (TypeError, ValueError):
            raise ApiError(400, "malformed-body", "x and y must be numbers") from None
        with session.lock:
            if planner == "field":
                _require(session, "field planning", mask=session.mask, field=session.field)
                try:
                    params = PathParams(step_px=float(body.get("step_px", 6.0)),
                                        max_steps=int(body.get("max_steps", 1000)))
                except ValueError as exc:
                    raise ApiError(400, "malformed-body", str(exc)) from None
                path = plan(session.field, session.mask, start, params)
            else:
                _require(session, "mesh planning", mask=session.mask, cloud=session.cloud)
                path = plan_mesh(session.mask, session.cloud, start,
                                 goal_fraction=float(body.get("goal_fraction", 0.1)),
                                 edge_max_m=float(body.get("edge_max_m", 0.05)))
            m = metrics(path, session.field)
            pid = f"p{session.next_path}"
            session.next_path += 1
            session.paths[pid] = (path, m, planner)
            store.persist(session, f"paths/{pid}.json", formats.write_path_json(path))
            return {"path_id": pid, "path": formats.path_to_dict(path),
                    "metrics": m.to_dict(), "planner": planner}

    @app.post("/sessions/{sid}/paths/{pid}/trajectory")
    async def post_trajectory(sid: str, pid: str, request: Request):
        session = store.get(sid)
        body = await _json_body(request, optional=("speed_mps", "lookup_radius_px"))
        with session.lock:
            if pid not in session.paths:
                raise ApiError(404, "unknown-path", f"no path {pid!r} in session {sid!r}")
            _require(session, "trajectory", mask=session.mask, cloud=session.cloud)
            try:
                params = TrajectoryParams(speed_mps=float(body.get("speed_mps", 0.03)),
                                          lookup_radius_px=int(body.get("lookup_radius_px", 5)))
            except ValueError as exc:
                raise ApiError(400, "malformed-body", str(exc)) from None
            path = session.paths[pid][0]
            poses = generate_trajectory(path, session.mask, session.cloud, params)
            session.poses[pid] = poses
            store.persist(session, f"poses/{pid}.json", formats.write_pose_json(poses))
            return formats.pose_path_to_dict(poses)

    @app.post("/sessions/{sid}/paths/{pid}/accept")
    async def accept(sid: str, pid: str):
        session = store.get(sid)
        with session.lock:
            if pid not in session.paths:
                raise ApiError(404, "unknown-path", f"no path {pid!r} in session {sid!r}")
            session.accepted = pid
            return {"accepted": pid}

    if static_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")

    return app
