"""Scene files: a space, named chart points and a task list, stored as JSON.

Complex numbers are ``[re, im]`` pairs and matrices nested row-major arrays::

    {"space": {"k": 1, "m": 1},
     "points": [{"name": "a", "matrix": [[[0.0, 0.0]]]}, ...],
     "tasks": [{"kind": "area", "triangle": ["a", "b", "c"]}, ...]}
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .chart import SpaceParams, as_chart_point

TASK_KINDS = ("area", "classify", "verify", "sphere", "sample")


class SceneError(ValueError):
    pass


def encode_matrix(Z) -> list:
    Z = np.asarray(Z, dtype=complex)
    return [[[float(x.real), float(x.imag)] for x in row] for row in Z]


def decode_matrix(data) -> np.ndarray:
    try:
        arr = np.asarray(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise SceneError(f"matrix is not a nested array of numbers: {exc}") from exc
    if arr.ndim != 3 or arr.shape[-1] != 2:
        raise SceneError(f"matrix must be rows of [re, im] pairs, got shape {arr.shape}")
    return arr[..., 0] + 1j * arr[..., 1]


@dataclass
class Scene:
    space: SpaceParams
    points: dict = field(default_factory=dict)
    tasks: list = field(default_factory=list)

    def __eq__(self, other):
        if not isinstance(other, Scene):
            return NotImplemented
        return (
            self.space == other.space
            and list(self.points) == list(other.points)
            and all(np.array_equal(self.points[n], other.points[n]) for n in self.points)
            and self.tasks == other.tasks
        )

    def point(self, name):
        try:
            return self.points[name]
        except KeyError:
            raise SceneError(f"unknown point {name!r}") from None

    @classmethod
    def from_dict(cls, data) -> "Scene":
        if not isinstance(data, dict):
            raise SceneError("scene must be an object")
        try:
            space = SpaceParams(int(data["space"]["k"]), int(data["space"]["m"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise SceneError(f"bad or missing space: {exc}") from exc
        points = {}
        for entry in data.get("points", []):
            try:
                name = entry["name"]
                Z = decode_matrix(entry["matrix"])
            except (KeyError, TypeError) as exc:
                raise SceneError(f"bad point entry {entry!r}") from exc
            if name in points:
                raise SceneError(f"duplicate point name {name!r}")
            try:
                points[name] = as_chart_point(Z, space)
            except ValueError as exc:
                raise SceneError(f"point {name!r}: {exc}") from exc
        tasks = list(data.get("tasks", []))
        for task in tasks:
            if not isinstance(task, dict) or task.get("kind") not in TASK_KINDS:
                raise SceneError(f"bad task {task!r}")
            for key in ("triangle", "pair"):
                for name in task.get(key, []):
                    if name not in points:
                        raise SceneError(f"task refers to unknown point {name!r}")
        return cls(space, points, tasks)

    def to_dict(self) -> dict:
        return {
            "space": {"k": self.space.k, "m": self.space.m},
            "points": [{"name": n, "matrix": encode_matrix(Z)} for n, Z in self.points.items()],
            "tasks": self.tasks,
        }

    @classmethod
    def loads(cls, text) -> "Scene":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SceneError(f"scene is not valid JSON: {exc}") from exc
        return cls.from_dict(data)

    @classmethod
    def load(cls, path) -> "Scene":
        try:
            with open(path, encoding="utf-8") as fh:
                return cls.loads(fh.read())
        except OSError as exc:
            raise SceneError(str(exc)) from exc

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2)
