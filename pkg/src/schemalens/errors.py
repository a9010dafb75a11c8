"""Exception hierarchy shared across the toolkit.

Every error raised on a contract boundary derives from SchemaLensError so
callers (and the CLI) can catch one base type and map it to exit code 2.
"""

from __future__ import annotations


class SchemaLensError(Exception):
    """Base class for all toolkit errors."""


class IoError(SchemaLensError):
    """A directory or file could not be read."""


class CorpusError(SchemaLensError):
    """The corpus as a whole is unusable (e.g. no schema files found)."""


class ParseError(SchemaLensError):
    """A schema file is malformed. Carries the offending file id."""

    def __init__(self, file_id: str, message: str):
        super().__init__(f"{file_id}: {message}")
        self.file_id = file_id


class UnknownRef(SchemaLensError):
    """A $ref names a file or fragment that does not exist in the corpus."""


class MergeConflict(SchemaLensError):
    """allOf branches disagree on the shape of a shared property."""


class UnknownCollection(SchemaLensError):
    """A named collection (or referenced type) is not present in the graph."""


class TypeAbsent(SchemaLensError):
    """A type-scoped metric was asked about a type the scope does not contain."""


class UnknownCriterionMetric(SchemaLensError):
    """A criterion references a metric name the engine does not implement."""


class SchemaUnresolved(SchemaLensError):
    """validate() was handed something that is not a resolved schema tree."""


class NoBranch(SchemaLensError):
    """Event dispatch found no oneOf branch for the message's eventName."""


class AmbiguousBranch(SchemaLensError):
    """Event dispatch matched more than one oneOf branch (corpus defect)."""


class UnknownSchema(SchemaLensError):
    """A manifest lookup used a schema-set name that is not registered."""


class UnknownScenario(SchemaLensError):
    """A scenario id outside the bundled 1..14 range was requested."""
