"""The ``ANET1`` point file.

Layout::

    ANET1
    key=value          (q, d, D, N, format, then provenance: m, n, t, seed, ...)
    # key=value        (comment block: verification results and similar)
    end
    <N records, one per line: d digit strings separated by single spaces>

Digit strings are contiguous characters for ``q <= 10`` (``format=contiguous``)
and comma-separated decimals otherwise (``format=comma``).
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import BinaryIO

import numpy as np

from .points import PointSet
from .radix_map import pack_digit_array

MAGIC = "ANET1"
REQUIRED = ("q", "d", "D", "N")
_CHUNK = 1 << 18


class PointFileError(ValueError):
    pass


@dataclass
class PointFile:
    points: PointSet
    params: dict[str, str] = field(default_factory=dict)
    comments: dict[str, str] = field(default_factory=dict)

    def get_int(self, key: str) -> int | None:
        v = self.params.get(key)
        return None if v is None else int(v)


def _format_name(q: int) -> str:
    return "contiguous" if q <= 10 else "comma"


def write_pointfile(path_or_fh, pf: PointFile) -> None:
    ps = pf.points
    header = {"q": ps.q, "d": ps.d, "D": ps.D, "N": len(ps), "format": _format_name(ps.q)}
    for k, v in pf.params.items():
        if k not in header:
            header[k] = v
    lines = [MAGIC] + [f"{k}={v}" for k, v in header.items()]
    lines += [f"# {k}={v}" for k, v in pf.comments.items()]
    lines.append("end")
    head = ("\n".join(lines) + "\n").encode("ascii")
    if isinstance(path_or_fh, (str, bytes)) or hasattr(path_or_fh, "__fspath__"):
        with open(path_or_fh, "wb") as fh:
            fh.write(head)
            _write_body(fh, ps)
    else:
        path_or_fh.write(head)
        _write_body(path_or_fh, ps)


def _write_body(fh: BinaryIO, ps: PointSet) -> None:
    N, d, D = len(ps), ps.d, ps.D
    for lo in range(0, N, _CHUNK):
        digits = ps[lo : lo + _CHUNK].digits()
        if ps.q <= 10:
            rec = np.empty((digits.shape[0], d, D + 1), dtype=np.uint8)
            rec[:, :, :D] = digits + ord("0")
            rec[:, :, D] = ord(" ")
            rec[:, -1, D] = ord("\n")
            fh.write(rec.tobytes())
        else:
            out = io.StringIO()
            for row in digits:
                out.write(" ".join(",".join(map(str, c)) for c in row.tolist()))
                out.write("\n")
            fh.write(out.getvalue().encode("ascii"))


def _read_header(fh: BinaryIO):
    first = fh.readline().decode("ascii", "replace").strip()
    if first != MAGIC:
        raise PointFileError(f"not an {MAGIC} file (magic {first!r})")
    params, comments = {}, {}
    while True:
        raw = fh.readline()
        if not raw:
            raise PointFileError("header is not terminated by 'end'")
        line = raw.decode("ascii", "replace").strip()
        if line == "end":
            break
        target = params
        if line.startswith("#"):
            target, line = comments, line[1:].strip()
        if "=" not in line:
            raise PointFileError(f"malformed header line {line!r}")
        k, v = line.split("=", 1)
        target[k.strip()] = v.strip()
    for k in REQUIRED:
        if k not in params:
            raise PointFileError(f"header lacks {k}")
    return params, comments


def read_pointfile(path) -> PointFile:
    with open(path, "rb") as fh:
        params, comments = _read_header(fh)
        body = fh.read()
    try:
        q, d, D, N = (int(params[k]) for k in REQUIRED)
    except ValueError:
        raise PointFileError("non-integer q, d, D or N in header") from None
    if q <= 10:
        width = d * (D + 1)
        if len(body) != N * width:
            raise PointFileError(
                f"body has {len(body)} bytes, expected {N} records of {width} bytes"
            )
        rec = np.frombuffer(body, dtype=np.uint8).reshape(N, d, D + 1)
        seps = rec[:, :, D]
        if N and (np.any(seps[:, :-1] != ord(" ")) or np.any(seps[:, -1] != ord("\n"))):
            raise PointFileError("malformed record separators")
        digits = rec[:, :, :D].astype(np.int16) - ord("0")
    else:
        lines = body.decode("ascii").splitlines()
        if len(lines) != N:
            raise PointFileError(f"body has {len(lines)} records, expected {N}")
        try:
            digits = np.array(
                [[[int(c) for c in s.split(",")] for s in ln.split(" ")] for ln in lines],
                dtype=np.int16,
            ).reshape(N, d, D)
        except ValueError:
            raise PointFileError("malformed record") from None
    if np.any(digits < 0) or np.any(digits >= q):
        raise PointFileError(f"digit out of range for q={q}")
    codes = pack_digit_array(digits.astype(np.uint8), q)
    return PointFile(PointSet(codes.reshape(N, d), q, D), params, comments)
