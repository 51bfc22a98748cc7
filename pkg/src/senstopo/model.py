"""Static topology models.

A model is a finite set of sensor names together with a set of zones.  A
zone is the non-empty set of sensors covering some region of space, so the
range of a sensor is simply the set of zones it belongs to.  Models may
also carry two disjoint sets of marks (necessary / unnecessary) which the
non-destructive reduction uses instead of deleting sensors.

Models are immutable; every operation returns a new value.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import AbstractSet, Iterable, Mapping

Zone = frozenset  # frozenset[str]


class ModelError(ValueError):
    """Raised for malformed models or inadmissible operations on them."""


class UnknownSensorError(ModelError):
    def __init__(self, sensor: str):
        super().__init__(f"unknown sensor {sensor!r}")
        self.sensor = sensor


def _zone_key(z: AbstractSet[str]) -> tuple:
    return (len(z), sorted(z))


@dataclass(frozen=True)
class StaticModel:
    """A static topology model ``(S, Z, N, U)``.

    The constructor only normalises containers; use :func:`validate` to check
    the well-formedness conditions (or :meth:`checked` to raise on them).
    """

    sensors: frozenset = field(default_factory=frozenset)
    zones: frozenset = field(default_factory=frozenset)
    necessary: frozenset = field(default_factory=frozenset)
    unnecessary: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "sensors", frozenset(self.sensors))
        object.__setattr__(self, "zones", frozenset(frozenset(z) for z in self.zones))
        object.__setattr__(self, "necessary", frozenset(self.necessary))
        object.__setattr__(self, "unnecessary", frozenset(self.unnecessary))

    @classmethod
    def from_zones(
        cls,
        zones: Iterable[Iterable[str]],
        sensors: Iterable[str] | None = None,
        necessary: Iterable[str] = (),
        unnecessary: Iterable[str] = (),
    ) -> "StaticModel":
        """Build a model, taking the sensor set from the zones unless given."""
        zones = [frozenset(z) for z in zones]
        if sensors is None:
            sensors = frozenset().union(*zones) if zones else frozenset()
        return cls(frozenset(sensors), frozenset(zones), frozenset(necessary), frozenset(unnecessary))

    def checked(self) -> "StaticModel":
        problems = validate(self)
        if problems:
            raise ModelError("; ".join(problems))
        return self

    @property
    def is_empty(self) -> bool:
        return not self.sensors

    @property
    def size(self) -> int:
        return len(self.sensors)

    @property
    def is_marked(self) -> bool:
        return bool(self.necessary or self.unnecessary)

    @cached_property
    def _ranges(self) -> Mapping[str, frozenset]:
        ranges: dict[str, set] = {s: set() for s in self.sensors}
        for z in self.zones:
            for s in z:
                if s in ranges:
                    ranges[s].add(z)
        return {s: frozenset(zs) for s, zs in ranges.items()}

    def sorted_sensors(self) -> list[str]:
        return sorted(self.sensors)

    def sorted_zones(self) -> list[frozenset]:
        return sorted(self.zones, key=_zone_key)

    def with_marks(self, necessary: Iterable[str] = (), unnecessary: Iterable[str] = ()) -> "StaticModel":
        return StaticModel(self.sensors, self.zones, frozenset(necessary), frozenset(unnecessary))

    def unmarked(self) -> "StaticModel":
        return StaticModel(self.sensors, self.zones)

    def __repr__(self) -> str:
        zones = ", ".join("{" + ",".join(sorted(z)) + "}" for z in self.sorted_zones())
        text = f"StaticModel(sensors={{{','.join(self.sorted_sensors())}}}, zones=[{zones}]"
        if self.is_marked:
            text += f", N={{{','.join(sorted(self.necessary))}}}, U={{{','.join(sorted(self.unnecessary))}}}"
        return text + ")"


EMPTY_MODEL = StaticModel()


def sense(m: StaticModel, s: str) -> frozenset:
    """The range of sensor ``s``: every zone of ``m`` containing it."""
    try:
        return m._ranges[s]
    except KeyError:
        raise UnknownSensorError(s) from None


def validate(m: StaticModel) -> list[str]:
    """Return a description of every violated well-formedness condition.

    An empty list means the model is well-formed.
    """
    problems = []
    for z in m.sorted_zones():
        if not z:
            problems.append("empty zone")
            continue
        stray = sorted(z - m.sensors)
        if stray:
            problems.append(f"zone {{{','.join(sorted(z))}}} mentions unknown sensor(s) {', '.join(stray)}")
    covered = frozenset().union(*m.zones) if m.zones else frozenset()
    for s in sorted(m.sensors - covered):
        problems.append(f"sensor {s} covered by no zone")
    for s in sorted(m.necessary & m.unnecessary):
        problems.append(f"sensor {s} marked both necessary and unnecessary")
    for s in sorted((m.necessary | m.unnecessary) - m.sensors):
        problems.append(f"mark on unknown sensor {s}")
    for s in sorted(m.sensors):
        if not isinstance(s, str) or not s:
            problems.append(f"invalid sensor name {s!r}")
    return problems


def reduce_by(m: StaticModel, removed: Iterable[str]) -> StaticModel:
    """The reduction of ``m`` by a proper subset of its sensors.

    Zones lose the removed sensors; zones that become empty are dropped so
    the result stays well-formed.  Marks are restricted to the survivors.
    """
    removed = frozenset(removed)
    unknown = removed - m.sensors
    if unknown:
        raise UnknownSensorError(sorted(unknown)[0])
    if removed == m.sensors:
        raise ModelError("reduction must remove a proper subset of the sensors")
    if not removed:
        return m
    zones = {z - removed for z in m.zones}
    zones.discard(frozenset())
    return StaticModel(
        m.sensors - removed,
        frozenset(zones),
        m.necessary - removed,
        m.unnecessary - removed,
    )


def topologically_equivalent(m1: StaticModel, m2: StaticModel) -> bool:
    """Same sensors and zones (hence same ranges); marks are ignored."""
    return m1.sensors == m2.sensors and m1.zones == m2.zones
