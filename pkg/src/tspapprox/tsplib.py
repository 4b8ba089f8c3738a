"""Reader and writer for the symmetric-TSP subset of TSPLIB.

Supported: ``TYPE: TSP`` with ``EDGE_WEIGHT_TYPE`` ``EUC_2D`` (node
coordinates) or ``EXPLICIT`` in ``FULL_MATRIX`` / ``LOWER_DIAG_ROW`` form.
"""

from __future__ import annotations

import math
import re
import warnings

import numpy as np

from .errors import InputError, MetricViolationError, TsplibError
from .instance import TAU_METRIC, MetricInstance, validate_metric

_SPEC_KEYS = {
    "NAME", "TYPE", "COMMENT", "DIMENSION", "EDGE_WEIGHT_TYPE",
    "EDGE_WEIGHT_FORMAT", "NODE_COORD_TYPE", "DISPLAY_DATA_TYPE",
}
_SECTIONS = {"NODE_COORD_SECTION", "EDGE_WEIGHT_SECTION", "DISPLAY_DATA_SECTION", "EOF"}
_TOKEN = re.compile(r"\S+")


class RoundingWarning(UserWarning):
    """Integer rounding of EUC_2D distances broke the triangle inequality."""


def nint(x: float) -> int:
    """TSPLIB nearest-integer rounding, halves rounded up."""
    return int(math.floor(x + 0.5))


class _Cursor:
    def __init__(self, text: str):
        self.lines = text.splitlines()
        self.i = 0

    def tokens(self, lineno: int):
        return [(m.group(), m.start() + 1) for m in _TOKEN.finditer(self.lines[lineno])]

    def data_tokens(self, count: int, what: str) -> list[tuple[str, int, int]]:
        """Consume ``count`` (token, line, column) triples spanning whole lines."""
        out: list[tuple[str, int, int]] = []
        while len(out) < count:
            if self.i >= len(self.lines):
                raise TsplibError(f"{what}: expected {count} values, found {len(out)}", self.i, 1)
            toks = self.tokens(self.i)
            if toks and toks[0][0].rstrip(":").upper() in _SECTIONS | _SPEC_KEYS:
                raise TsplibError(f"{what}: expected {count} values, found {len(out)}", self.i + 1, 1)
            for tok, col in toks:
                if len(out) == count:
                    raise TsplibError(f"{what}: more values than expected", self.i + 1, col)
                out.append((tok, self.i + 1, col))
            self.i += 1
        return out


def _number(tok: str, line: int, col: int) -> float:
    try:
        v = float(tok)
    except ValueError:
        raise TsplibError(f"non-numeric token {tok!r}", line, col) from None
    if not math.isfinite(v):
        raise TsplibError(f"non-finite value {tok!r}", line, col)
    return v


def _integer(tok: str, line: int, col: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise TsplibError(f"expected an integer, got {tok!r}", line, col) from None


def parse_tsplib(text: str, exact_euclidean: bool = False, validate: bool = True,
                 tau_metric: float = TAU_METRIC) -> MetricInstance:
    """Parse TSPLIB text into a :class:`MetricInstance`.

    ``EUC_2D`` distances are rounded with :func:`nint` unless
    ``exact_euclidean``. With ``validate`` on, a triangle-inequality
    violation raises, except when it comes from rounding, in which case a
    :class:`RoundingWarning` is issued instead.
    """
    cur = _Cursor(text)
    spec: dict[str, tuple[str, int, int]] = {}
    coords: dict[int, tuple[float, float]] | None = None
    matrix: np.ndarray | None = None

    def need_dim(line: int) -> int:
        if "DIMENSION" not in spec:
            raise TsplibError("DIMENSION must precede data sections", line, 1)
        val, l, c = spec["DIMENSION"]
        n = _integer(val, l, c)
        if n < 1:
            raise TsplibError(f"DIMENSION must be positive, got {n}", l, c)
        return n

    while cur.i < len(cur.lines):
        raw = cur.lines[cur.i]
        line = cur.i + 1
        stripped = raw.strip()
        if not stripped:
            cur.i += 1
            continue
        col0 = raw.index(stripped[0]) + 1
        if ":" in stripped:
            key, _, value = stripped.partition(":")
        else:
            key, value = stripped, ""
        key = key.strip().upper()
        value = value.strip()
        if key == "EOF":
            break
        if key in _SPEC_KEYS:
            if not value:
                raise TsplibError(f"{key} has no value", line, col0)
            vcol = raw.index(value, raw.index(":") + 1) + 1 if ":" in raw else col0
            spec[key] = (value, line, vcol)
            if key == "TYPE" and value.upper() != "TSP":
                raise TsplibError(f"unsupported TYPE {value!r} (only TSP)", line, vcol)
            if key == "EDGE_WEIGHT_TYPE" and value.upper() not in ("EUC_2D", "EXPLICIT"):
                raise TsplibError(f"unsupported EDGE_WEIGHT_TYPE {value!r}", line, vcol)
            if key == "EDGE_WEIGHT_FORMAT" and value.upper() not in ("FULL_MATRIX", "LOWER_DIAG_ROW"):
                raise TsplibError(f"unsupported EDGE_WEIGHT_FORMAT {value!r}", line, vcol)
            cur.i += 1
            continue
        if key == "NODE_COORD_SECTION":
            n = need_dim(line)
            cur.i += 1
            coords = {}
            toks = cur.data_tokens(3 * n, "NODE_COORD_SECTION")
            for r in range(n):
                (ti, li, ci), (tx, lx, cx), (ty, ly, cy) = toks[3 * r: 3 * r + 3]
                idx = _integer(ti, li, ci)
                if not 1 <= idx <= n or idx in coords:
                    raise TsplibError(f"node id {idx} out of range or repeated", li, ci)
                coords[idx] = (_number(tx, lx, cx), _number(ty, ly, cy))
            continue
        if key == "EDGE_WEIGHT_SECTION":
            n = need_dim(line)
            fmt = spec.get("EDGE_WEIGHT_FORMAT", ("", line, 1))[0].upper()
            if fmt not in ("FULL_MATRIX", "LOWER_DIAG_ROW"):
                raise TsplibError("EDGE_WEIGHT_SECTION needs EDGE_WEIGHT_FORMAT FULL_MATRIX or LOWER_DIAG_ROW", line, col0)
            cur.i += 1
            matrix = np.zeros((n, n))
            if fmt == "FULL_MATRIX":
                cells = [(i, j) for i in range(n) for j in range(n)]
            else:
                cells = [(i, j) for i in range(n) for j in range(i + 1)]
            for (i, j), (tok, l, c) in zip(cells, cur.data_tokens(len(cells), "EDGE_WEIGHT_SECTION")):
                v = _number(tok, l, c)
                if fmt == "FULL_MATRIX":
                    matrix[i, j] = v
                else:
                    matrix[i, j] = matrix[j, i] = v
            continue
        if key == "DISPLAY_DATA_SECTION":
            n = need_dim(line)
            cur.i += 1
            cur.data_tokens(3 * n, "DISPLAY_DATA_SECTION")
            continue
        raise TsplibError(f"unsupported keyword {key!r}", line, col0)

    if "TYPE" not in spec:
        raise TsplibError("missing TYPE", len(cur.lines) or 1, 1)
    if "EDGE_WEIGHT_TYPE" not in spec:
        raise TsplibError("missing EDGE_WEIGHT_TYPE", len(cur.lines) or 1, 1)
    ewt, ewt_line, ewt_col = spec["EDGE_WEIGHT_TYPE"]
    rounded = False
    if ewt.upper() == "EUC_2D":
        if coords is None:
            raise TsplibError("EUC_2D requires NODE_COORD_SECTION", ewt_line, ewt_col)
        pts = np.array([coords[i + 1] for i in range(len(coords))])
        dist = np.hypot(pts[:, None, 0] - pts[None, :, 0], pts[:, None, 1] - pts[None, :, 1])
        if exact_euclidean:
            weights = dist
        else:
            weights = np.floor(dist + 0.5)
            rounded = True
    else:
        if matrix is None:
            raise TsplibError("EXPLICIT requires EDGE_WEIGHT_SECTION", ewt_line, ewt_col)
        weights = matrix
    np.fill_diagonal(weights, 0.0)
    m = MetricInstance(weights)

    if validate:
        violations = validate_metric(m.weights, tau_metric)
        if violations:
            if not rounded:
                raise MetricViolationError(violations)
            warnings.warn(
                f"EUC_2D rounding broke the triangle inequality on {len(violations)} triple(s)",
                RoundingWarning,
                stacklevel=2,
            )
    return m


def _fmt(v: float) -> str:
    if v.is_integer() and abs(v) < 2**53:
        return str(int(v))
    return repr(v)


def write_tsplib(m: MetricInstance, name: str = "instance", fmt: str = "FULL_MATRIX") -> str:
    """Serialise as an EXPLICIT TSPLIB file; values round-trip exactly."""
    fmt = fmt.upper()
    if fmt not in ("FULL_MATRIX", "LOWER_DIAG_ROW"):
        raise InputError(f"unsupported EDGE_WEIGHT_FORMAT {fmt!r}")
    n = m.n
    w = m.weights.tolist()
    out = [
        f"NAME : {name}",
        "TYPE : TSP",
        f"DIMENSION : {n}",
        "EDGE_WEIGHT_TYPE : EXPLICIT",
        f"EDGE_WEIGHT_FORMAT : {fmt}",
        "EDGE_WEIGHT_SECTION",
    ]
    for i in range(n):
        row = w[i] if fmt == "FULL_MATRIX" else w[i][: i + 1]
        out.append(" ".join(_fmt(float(x)) for x in row))
    out.append("EOF")
    return "\n".join(out) + "\n"
