"""Exception hierarchy shared across the engine.

Every error carries a stable machine-readable ``code`` so the CLI and the
session protocol can report it without string matching.
"""

from __future__ import annotations


class EngineError(Exception):
    """Base class for all validation/contract errors raised by the engine."""

    code = "engine_error"


class FrameError(EngineError):
    """A landmark frame failed structural validation."""

    code = "bad_message"


class DegenerateFinger(EngineError):
    """Finger joint triple contains coincident points; the angle is undefined."""

    code = "degenerate_finger"


class ParseError(EngineError):
    """Tabular input is structurally broken (ragged row, inconsistent keys)."""

    code = "parse_error"

    def __init__(self, message: str, row: int):
        super().__init__(message)
        self.row = row  # 1-based data row number


class ColumnTypeError(EngineError):
    """A column mixes incompatible value types."""

    code = "column_type_error"

    def __init__(self, message: str, column: str):
        super().__init__(message)
        self.column = column


class EmptyDataset(EngineError):
    code = "empty_dataset"


class DegenerateDomain(EngineError):
    """Scale domain has zero extent (or no categories)."""

    code = "degenerate_domain"


class SpecError(EngineError):
    """A chart spec does not match the bound dataset."""

    code = "spec_error"

    def __init__(self, message: str, field: str | None = None):
        super().__init__(message)
        self.field = field


class EmptyGraph(EngineError):
    code = "empty_graph"


class UnknownNode(EngineError):
    code = "unknown_node"

    def __init__(self, node_id: str):
        super().__init__(f"unknown node id: {node_id!r}")
        self.node_id = node_id


class IncompleteSeries(EngineError):
    """An entity is missing an observation at some time value."""

    code = "incomplete_series"

    def __init__(self, entity: str, time_value: object):
        super().__init__(f"entity {entity!r} has no observation at time {time_value!r}")
        self.entity = entity
        self.time_value = time_value


class DegenerateTime(EngineError):
    """Fewer than two distinct time values."""

    code = "degenerate_time"


class SchemaError(EngineError):
    """A story document does not match the published schema."""

    code = "schema_error"

    def __init__(self, message: str, path: str = ""):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


class DuplicateId(SchemaError):
    code = "duplicate_id"

    def __init__(self, scene_id: str):
        super().__init__(f"duplicate scene id {scene_id!r}")
        self.scene_id = scene_id


class UnsupportedGesture(SchemaError):
    code = "unsupported_gesture"

    def __init__(self, scene_id: str, gesture: str):
        super().__init__(f"gesture {gesture!r} is not supported by scene {scene_id!r}")
        self.scene_id = scene_id
        self.gesture = gesture


class MissingData(SchemaError):
    code = "missing_data"

    def __init__(self, path: str):
        super().__init__(f"data file not found: {path}")
        self.data_path = path


class UnknownScene(EngineError):
    code = "unknown_scene"

    def __init__(self, scene_id: str):
        super().__init__(f"unknown scene id: {scene_id!r}")
        self.scene_id = scene_id


class ReplayError(EngineError):
    """A trace line could not be parsed."""

    code = "replay_error"

    def __init__(self, message: str, line: int):
        super().__init__(f"trace line {line}: {message}")
        self.line = line
