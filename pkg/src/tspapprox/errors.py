"""Exception hierarchy.

Each family maps to a CLI exit code: input problems exit 2, infeasible or
over-capacity requests exit 3, broken internal invariants exit 4.
"""

from __future__ import annotations


class TspApproxError(Exception):
    exit_code = 1
    kind = "error"

    def to_dict(self) -> dict:
        return {"error": self.kind, "message": str(self)}


class InputError(TspApproxError, ValueError):
    """Malformed or out-of-domain input."""

    exit_code = 2
    kind = "input"


class NonSquareMatrixError(InputError):
    kind = "non_square"


class AsymmetricWeightsError(InputError):
    kind = "asymmetric"

    def __init__(self, i: int, j: int, a: float, b: float):
        super().__init__(f"weights[{i}][{j}]={a!r} differs from weights[{j}][{i}]={b!r}")
        self.i, self.j = i, j


class NonPositiveWeightError(InputError):
    kind = "nonpositive_weight"

    def __init__(self, i: int, j: int, value: float):
        super().__init__(f"weight ({i}, {j}) = {value!r} is not a positive finite number")
        self.i, self.j, self.value = i, j, value


class MetricViolationError(InputError):
    kind = "metric_violation"

    def __init__(self, violations: list):
        first = violations[0]
        super().__init__(
            f"{len(violations)} triangle-inequality violation(s); first: "
            f"{first.source}->{first.via}->{first.target} beats the direct edge by {first.deficit!r}"
        )
        self.violations = violations


class TsplibError(InputError):
    kind = "tsplib"

    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line, self.column = line, column

    def to_dict(self) -> dict:
        d = super().to_dict()
        d.update(line=self.line, column=self.column)
        return d


class InfeasibleError(TspApproxError):
    """The request has no solution (disconnected graph, odd degrees, ...)."""

    exit_code = 3
    kind = "infeasible"


class DisconnectedGraphError(InfeasibleError):
    kind = "disconnected"

    def __init__(self, u: int, v: int):
        super().__init__(f"vertex {v} is unreachable from vertex {u}")
        self.pair = (u, v)


class CapacityError(TspApproxError):
    exit_code = 3
    kind = "capacity"


class DefectError(TspApproxError, AssertionError):
    """An internal invariant failed; always a bug."""

    exit_code = 4
    kind = "defect"
