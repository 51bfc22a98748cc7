"""JSON encodings of models, readings, scenes and dynamic models."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .dynamic import DynamicModel
from .geometry import ConvexPolygon, Disk, GeometryError, GeomSensor, Scene
from .model import ModelError, StaticModel, validate


def _names(value, what: str) -> list[str]:
    if not isinstance(value, list) or not all(isinstance(x, str) for x in value):
        raise ModelError(f"{what} must be a list of strings")
    return value


def model_from_dict(data: Any) -> StaticModel:
    """Decode and validate a static model.  Raises :class:`ModelError`."""
    if not isinstance(data, dict):
        raise ModelError("a model must be a JSON object")
    unknown = set(data) - {"sensors", "zones", "necessary", "unnecessary"}
    if unknown:
        raise ModelError(f"unexpected model field(s): {', '.join(sorted(unknown))}")
    sensors = _names(data.get("sensors", []), "sensors")
    zones = data.get("zones", [])
    if not isinstance(zones, list):
        raise ModelError("zones must be a list of lists of sensor names")
    zones = [_names(z, "each zone") for z in zones]
    problems = []
    if len(set(sensors)) != len(sensors):
        problems.append("duplicate sensor names")
    as_sets = [frozenset(z) for z in zones]
    seen = set()
    for z in as_sets:
        if z in seen:
            problems.append(f"duplicate zone {{{','.join(sorted(z))}}}")
        seen.add(z)
    m = StaticModel(
        frozenset(sensors),
        frozenset(as_sets),
        frozenset(_names(data.get("necessary", []), "necessary")),
        frozenset(_names(data.get("unnecessary", []), "unnecessary")),
    )
    problems += validate(m)
    if problems:
        raise ModelError("; ".join(problems))
    return m


def model_to_dict(m: StaticModel) -> dict:
    return {
        "sensors": m.sorted_sensors(),
        "zones": [sorted(z) for z in m.sorted_zones()],
        "necessary": sorted(m.necessary),
        "unnecessary": sorted(m.unnecessary),
    }


def readings_from_dict(data: Any) -> dict[str, int]:
    if not isinstance(data, dict) or not isinstance(data.get("counts"), dict):
        raise ValueError('readings must look like {"counts": {"sensor": count, ...}}')
    counts = {}
    for s, c in data["counts"].items():
        if isinstance(c, bool) or not isinstance(c, int) or c < 0:
            raise ValueError(f"count for {s} must be a non-negative integer")
        counts[s] = c
    return counts


def readings_to_dict(counts: dict) -> dict:
    return {"counts": {s: counts[s] for s in sorted(counts)}}


def scene_from_dict(data: Any) -> Scene:
    if not isinstance(data, dict) or not isinstance(data.get("sensors"), list):
        raise GeometryError("a scene must have a list of sensors")
    sensors = []
    for entry in data["sensors"]:
        if not isinstance(entry, dict) or "id" not in entry:
            raise GeometryError("every scene sensor needs an id")
        if "disk" in entry:
            d = entry["disk"]
            shape = Disk(float(d["cx"]), float(d["cy"]), float(d["r"]))
        elif "polygon" in entry:
            shape = ConvexPolygon(tuple((float(x), float(y)) for x, y in entry["polygon"]))
        else:
            raise GeometryError(f"sensor {entry['id']} needs a disk or a polygon")
        sensors.append(GeomSensor(entry["id"], shape))
    targets = data.get("targets", [])
    return Scene(tuple(sensors), tuple((float(x), float(y)) for x, y in targets))


def scene_to_dict(scene: Scene) -> dict:
    out = []
    for s in scene.sensors:
        if isinstance(s.shape, Disk):
            out.append({"id": s.id, "disk": {"cx": s.shape.cx, "cy": s.shape.cy, "r": s.shape.r}})
        else:
            out.append({"id": s.id, "polygon": [list(v) for v in s.shape.vertices]})
    return {"sensors": out, "targets": [list(t) for t in scene.targets]}


def dynamic_from_dict(data: Any, base: Path | None = None) -> DynamicModel:
    """Decode a dynamic model; world models are inline objects or paths relative to ``base``."""
    if not isinstance(data, dict) or not isinstance(data.get("worlds"), dict):
        raise ModelError("a dynamic model needs a 'worlds' object")
    assign = {}
    for w, entry in data["worlds"].items():
        if not isinstance(entry, dict) or "model" not in entry:
            raise ModelError(f"world {w} needs a 'model'")
        ref = entry["model"]
        if isinstance(ref, str):
            path = Path(ref) if base is None else Path(base) / ref
            try:
                ref = json.loads(path.read_text())
            except (OSError, json.JSONDecodeError) as exc:
                raise ModelError(f"world {w}: cannot read model {path}: {exc}") from exc
        try:
            assign[w] = model_from_dict(ref)
        except ModelError as exc:
            raise ModelError(f"world {w}: {exc}") from exc
    transitions = data.get("transitions", [])
    if not isinstance(transitions, list) or not all(
        isinstance(e, list) and len(e) == 2 and all(isinstance(x, str) for x in e) for e in transitions
    ):
        raise ModelError("transitions must be a list of [from, to] world pairs")
    return DynamicModel.build(assign, [tuple(e) for e in transitions]).checked()


def dynamic_to_dict(d: DynamicModel) -> dict:
    return {
        "worlds": {w: {"model": model_to_dict(d.assign[w])} for w in d.worlds},
        "transitions": [list(e) for e in sorted(d.transitions)],
    }
