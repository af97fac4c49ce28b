"""Typed error vocabulary shared by the whole package.

Every failure the engine can signal deliberately is one of these classes,
so callers (and the CLI's JSON error emitter) can dispatch on type.
"""

from __future__ import annotations


class MeanlabError(Exception):
    """Base class for all deliberate engine errors."""

    code = "error"

    def payload(self) -> dict:
        return {"code": self.code, "message": str(self)}


class ParseError(MeanlabError):
    """Set-expression text is malformed.

    Carries the character position, the derived line/column (1-based),
    and the token kinds that would have been accepted there.
    """

    code = "parse_error"

    def __init__(self, message: str, position: int, *, line: int = 1,
                 column: int | None = None, expected: tuple[str, ...] = ()):
        loc = f"line {line}, column {column if column is not None else position + 1}"
        super().__init__(f"{message} (at {loc})")
        self.position = position
        self.line = line
        self.column = column if column is not None else position + 1
        self.expected = tuple(expected)

    def payload(self) -> dict:
        out = {"code": self.code, "message": str(self),
               "position": self.position, "line": self.line,
               "column": self.column}
        if self.expected:
            out["expected"] = list(self.expected)
        return out


class OverlappingClusterWindows(MeanlabError):
    code = "overlapping_cluster_windows"


class UnrepresentableResult(MeanlabError):
    code = "unrepresentable_result"


class ZeroScale(MeanlabError):
    code = "zero_scale"


class UnsupportedDepth(MeanlabError):
    code = "unsupported_depth"


class InfiniteLevel(MeanlabError):
    code = "infinite_level"


class EmptyDerivedSet(MeanlabError):
    code = "empty_derived_set"


class NotFinite(MeanlabError):
    code = "not_finite"


class NullSet(MeanlabError):
    code = "null_set"


class OutsideSupport(MeanlabError):
    code = "outside_support"


class NotCompact(MeanlabError):
    code = "not_compact"


class DomainViolation(MeanlabError):
    code = "domain_violation"


class DomainExit(MeanlabError):
    """A probe slice left the mean's domain during differentiation."""

    code = "domain_exit"


class EmptySlice(MeanlabError):
    code = "empty_slice"


class DegenerateSet(MeanlabError):
    code = "degenerate_set"


class EmptySet(MeanlabError):
    code = "empty_set"


class NoConvergence(MeanlabError):
    """Limit schedule exhausted without the required agreement window.

    Carries the raw and accelerated traces so callers can report honest
    partial results instead of inventing a limit.
    """

    code = "no_convergence"

    def __init__(self, message: str, trace=None):
        super().__init__(message)
        self.trace = trace or []

    def payload(self) -> dict:
        return {"code": self.code, "message": str(self), "steps": len(self.trace)}


class UnsupportedMean(MeanlabError):
    code = "unsupported_mean"


class BadParameters(MeanlabError):
    code = "bad_parameters"


class BadConfig(MeanlabError):
    code = "bad_config"


class NotApplicable(MeanlabError):
    code = "not_applicable"
