"""Readers and writers for the wire formats.

    PGM "P5"   grayscale raster, maxval 255. Mask semantics: 255 = hair.
    PPM "P6"   color raster, 3 bytes/pixel.
    ORF1       orientation field: magic, u32 LE width/height, then
               width*height f32 LE theta radians in [0, pi) row-major,
               then the same-size f32 coherence map in [0, 1].
    OCD1       organized cloud: magic, u32 LE width/height, then
               width*height (x, y, z) f32 LE triples in meters; an
               all/any-NaN triple marks an invalid pixel.
    JSON       path {"step_px", "points": [{"x", "y"}, ...]} and
               pose {"poses": [{"position", "orientation_quat", "time_s"}]}.

write(read(x)) is bit-exact for integer rasters and exact at f32
precision for the binary float payloads. Intensity is quantized
(round + clip to u8) only when writing PGM/PPM. Trailing bytes after a
complete payload are ignored on read.
"""

import json
import struct

import numpy as np

from .errors import (
    DimensionOverflowError,
    FormatError,
    MalformedHeaderError,
    TruncatedPayloadError,
)
from .model import OrganizedCloud, OrientationField, PathMetrics, PixelPath, PosePath

MAX_PIXELS = 1 << 28

_WS = b" \t\r\n\x0b\x0c"

# largest f32 strictly below float64 pi; thetas that round up to f32(pi)
# are clamped here so the [0, pi) invariant survives quantization
_F32_BELOW_PI = np.nextafter(np.float32(np.pi), np.float32(0.0))


def _next_token(data, pos, field):
    while pos < len(data):
        c = data[pos : pos + 1]
        if c == b"#":
            nl = data.find(b"\n", pos)
            if nl < 0:
                raise MalformedHeaderError(field, f"unterminated comment before {field}")
            pos = nl + 1
        elif c in _WS:
            pos += 1
        else:
            break
    if pos >= len(data):
        raise MalformedHeaderError(field, f"header ends before {field}")
    start = pos
    while pos < len(data) and data[pos : pos + 1] not in _WS and data[pos : pos + 1] != b"#":
        pos += 1
    return pos, data[start:pos]


def _parse_pnm_header(data, magic):
    if data[:2] != magic:
        raise MalformedHeaderError("magic", f"expected {magic!r}, got {data[:2]!r}")
    pos = 2
    values = {}
    for field in ("width", "height", "maxval"):
        pos, tok = _next_token(data, pos, field)
        try:
            values[field] = int(tok)
        except ValueError:
            raise MalformedHeaderError(field, f"non-integer {field} token {tok!r}") from None
    if values["width"] < 1:
        raise MalformedHeaderError("width", f"width must be >= 1, got {values['width']}")
    if values["height"] < 1:
        raise MalformedHeaderError("height", f"height must be >= 1, got {values['height']}")
    if values["maxval"] != 255:
        raise MalformedHeaderError("maxval", f"maxval must be 255, got {values['maxval']}")
    if values["width"] * values["height"] > MAX_PIXELS:
        raise DimensionOverflowError(
            "width*height", f"{values['width']}x{values['height']} exceeds {MAX_PIXELS} pixels"
        )
    # exactly one whitespace byte separates the header from the raster
    if pos >= len(data) or data[pos : pos + 1] not in _WS:
        raise MalformedHeaderError("maxval", "missing separator after maxval")
    return values["width"], values["height"], pos + 1


def read_pgm(data):
    """Parse P5 bytes into a float64 (h, w) array with values in [0, 255]."""
    w, h, pos = _parse_pnm_header(data, b"P5")
    need = w * h
    payload = data[pos : pos + need]
    if len(payload) < need:
        raise TruncatedPayloadError("payload", f"need {need} bytes, got {len(payload)}")
    return np.frombuffer(payload, dtype=np.uint8).reshape(h, w).astype(np.float64)


def write_pgm(img):
    """Serialize a (h, w) array to P5, quantizing with round + clip to u8."""
    arr = np.asarray(img, dtype=np.float64)
    if arr.ndim != 2 or arr.size == 0:
        raise ValueError(f"pgm image must be 2-D non-empty, got shape {arr.shape}")
    quant = np.clip(np.rint(arr), 0, 255).astype(np.uint8)
    h, w = quant.shape
    return b"P5\n%d %d\n255\n" % (w, h) + quant.tobytes()


def read_ppm(data):
    """Parse P6 bytes into a float64 (h, w, 3) array with values in [0, 255]."""
    w, h, pos = _parse_pnm_header(data, b"P6")
    need = w * h * 3
    payload = data[pos : pos + need]
    if len(payload) < need:
        raise TruncatedPayloadError("payload", f"need {need} bytes, got {len(payload)}")
    return np.frombuffer(payload, dtype=np.uint8).reshape(h, w, 3).astype(np.float64)


def write_ppm(img):
    """Serialize a (h, w, 3) array to P6, quantizing with round + clip to u8."""
    arr = np.asarray(img, dtype=np.float64)
    if arr.ndim != 3 or arr.shape[2] != 3 or arr.shape[0] == 0:
        raise ValueError(f"ppm image must have shape (h, w, 3), got {arr.shape}")
    quant = np.clip(np.rint(arr), 0, 255).astype(np.uint8)
    h, w = quant.shape[:2]
    return b"P6\n%d %d\n255\n" % (w, h) + quant.tobytes()


def soft_mask_to_pgm(mask):
    """Write a [0, 1] soft mask as P5 scaled by 255."""
    return write_pgm(np.asarray(mask, dtype=np.float64) * 255.0)


def soft_mask_from_pgm(data):
    """Read a P5 raster back into a [0, 1] soft mask."""
    return read_pgm(data) / 255.0


def binary_mask_to_pgm(mask):
    """Write a boolean mask as P5 (255 = hair, 0 = background)."""
    return write_pgm(np.where(np.asarray(mask, dtype=bool), 255.0, 0.0))


def binary_mask_from_pgm(data):
    """Read a P5 raster as a boolean mask (threshold at the u8 midpoint)."""
    return read_pgm(data) >= 128.0


def _parse_binary_header(data, magic):
    if data[:4] != magic:
        raise MalformedHeaderError("magic", f"expected {magic!r}, got {data[:4]!r}")
    if len(data) < 12:
        raise MalformedHeaderError("width", "header ends before width/height")
    w, h = struct.unpack_from("<II", data, 4)
    if w < 1:
        raise MalformedHeaderError("width", f"width must be >= 1, got {w}")
    if h < 1:
        raise MalformedHeaderError("height", f"height must be >= 1, got {h}")
    if w * h > MAX_PIXELS:
        raise DimensionOverflowError("width*height", f"{w}x{h} exceeds {MAX_PIXELS} pixels")
    return w, h, 12


def read_orf(data):
    """Parse ORF1 bytes into an OrientationField."""
    w, h, pos = _parse_binary_header(data, b"ORF1")
    need = w * h * 4
    if len(data) < pos + 2 * need:
        raise TruncatedPayloadError(
            "payload", f"need {2 * need} payload bytes, got {len(data) - pos}"
        )
    theta = np.frombuffer(data, dtype="<f4", count=w * h, offset=pos)
    coher = np.frombuffer(data, dtype="<f4", count=w * h, offset=pos + need)
    theta = theta.astype(np.float64).reshape(h, w)
    coher = coher.astype(np.float64).reshape(h, w)
    if not np.all(np.isfinite(theta)) or theta.min() < 0.0 or theta.max() >= np.pi:
        raise FormatError("theta", "theta payload must be finite and in [0, pi)")
    if not np.all(np.isfinite(coher)) or coher.min() < 0.0 or coher.max() > 1.0:
        raise FormatError("coherence", "coherence payload must be finite and in [0, 1]")
    return OrientationField(theta=theta, coherence=coher)


def write_orf(field):
    """Serialize an OrientationField to ORF1 bytes (f32 LE payload)."""
    h, w = field.shape
    theta32 = field.theta.astype("<f4")
    np.minimum(theta32, _F32_BELOW_PI, out=theta32)
    coher32 = np.minimum(field.coherence.astype("<f4"), np.float32(1.0))
    return b"ORF1" + struct.pack("<II", w, h) + theta32.tobytes() + coher32.tobytes()


def read_ocd(data):
    """Parse OCD1 bytes into an OrganizedCloud (any-NaN triple = invalid)."""
    w, h, pos = _parse_binary_header(data, b"OCD1")
    need = w * h * 3 * 4
    if len(data) < pos + need:
        raise TruncatedPayloadError("payload", f"need {need} payload bytes, got {len(data) - pos}")
    pts = np.frombuffer(data, dtype="<f4", count=w * h * 3, offset=pos)
    pts = pts.astype(np.float64).reshape(h, w, 3)
    try:
        return OrganizedCloud.from_points(pts)
    except ValueError as exc:
        raise FormatError("points", str(exc)) from None


def write_ocd(cloud):
    """Serialize an OrganizedCloud to OCD1 bytes; invalid pixels become NaN triples."""
    h, w = cloud.shape
    pts = cloud.points.astype("<f4").copy()
    pts[~cloud.valid] = np.nan
    return b"OCD1" + struct.pack("<II", w, h) + pts.tobytes()


def dumps_json(obj):
    """Canonical JSON serialization used for every JSON artifact in the toolkit."""
    return (json.dumps(obj, indent=2, allow_nan=False) + "\n").encode("utf-8")


def _loads_json(data, what):
    try:
        return json.loads(data.decode("utf-8") if isinstance(data, (bytes, bytearray)) else data)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise MalformedHeaderError(what, f"invalid JSON: {exc}") from None


def path_to_dict(path):
    return {
        "step_px": path.step_px,
        "points": [{"x": float(x), "y": float(y)} for x, y in path.points],
    }


def path_from_dict(obj):
    if not isinstance(obj, dict) or "points" not in obj:
        raise MalformedHeaderError("points", "path JSON requires a 'points' array")
    if "step_px" not in obj:
        raise MalformedHeaderError("step_px", "path JSON requires 'step_px'")
    raw = obj["points"]
    if not isinstance(raw, list) or not raw:
        raise MalformedHeaderError("points", "'points' must be a non-empty array")
    try:
        pts = np.array([[float(p["x"]), float(p["y"])] for p in raw], dtype=np.float64)
        path = PixelPath(points=pts, step_px=float(obj["step_px"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError("points", f"invalid path points: {exc}") from None
    return path


def write_path_json(path):
    return dumps_json(path_to_dict(path))


def read_path_json(data):
    return path_from_dict(_loads_json(data, "path"))


def pose_path_to_dict(poses):
    return {
        "poses": [
            {
                "position": [float(v) for v in poses.positions[i]],
                "orientation_quat": [float(v) for v in poses.quaternions[i]],
                "time_s": float(poses.times[i]),
            }
            for i in range(len(poses))
        ]
    }


def pose_path_from_dict(obj):
    if not isinstance(obj, dict) or "poses" not in obj or not isinstance(obj["poses"], list):
        raise MalformedHeaderError("poses", "pose JSON requires a 'poses' array")
    try:
        pos = np.array([p["position"] for p in obj["poses"]], dtype=np.float64)
        qua = np.array([p["orientation_quat"] for p in obj["poses"]], dtype=np.float64)
        tms = np.array([p["time_s"] for p in obj["poses"]], dtype=np.float64)
        return PosePath(positions=pos, quaternions=qua, times=tms)
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError("poses", f"invalid pose entries: {exc}") from None


def write_pose_json(poses):
    return dumps_json(pose_path_to_dict(poses))


def read_pose_json(data):
    return pose_path_from_dict(_loads_json(data, "poses"))


def metrics_to_dict(metrics: PathMetrics):
    return metrics.to_dict()
