"""CSV / JSON serialization of coefficient tables and normality data.

Exact quantities are always written as strings; reals are written with 20
significant digits.
"""

from __future__ import annotations

import contextlib
import csv
import io
import json
import os
import sys
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from typing import IO

from qmaj.analysis import ks_to_normal, normal_cdf, standardize
from qmaj.errors import DomainError, QmajError
from qmaj.moments import check_family, d_poly
from qmaj.qpoly import DEFAULT_PRECISION, QPoly, real_context, to_real

REAL_DIGITS = 20
TABLE_HEADER = ("family", "n", "k", "coefficient")
NORMALITY_HEADER = ("kind", "family", "n", "x", "pmf", "cdf_empirical", "cdf_normal", "ks")
FORMATS = ("csv", "json")

__all__ = [
    "ExportError",
    "TableRow",
    "NormalityRow",
    "NormalityBlock",
    "format_real",
    "table_rows",
    "write_table",
    "export_table",
    "read_table",
    "normality_block",
    "write_normality",
    "export_normality",
]


class ExportError(QmajError, OSError):
    """Output destination could not be written."""


@dataclass(frozen=True)
class TableRow:
    family: str
    n: int
    k: int
    coefficient: int


@dataclass(frozen=True)
class NormalityRow:
    family: str
    n: int
    x: str
    pmf: str
    cdf_empirical: str
    cdf_normal: str


@dataclass(frozen=True)
class NormalityBlock:
    family: str
    n: int
    rows: tuple[NormalityRow, ...]
    ks: str


def format_real(value) -> str:
    ctx = real_context(max(DEFAULT_PRECISION, REAL_DIGITS))
    return ctx.nstr(ctx.convert(value), REAL_DIGITS)


def _check_format(fmt: str) -> str:
    if fmt not in FORMATS:
        raise DomainError(f"format must be one of {FORMATS}, got {fmt!r}")
    return fmt


@contextlib.contextmanager
def _open_destination(destination: str | os.PathLike | IO[str] | None) -> Iterator[IO[str]]:
    if destination is None or destination == "-":
        yield sys.stdout
        return
    if hasattr(destination, "write"):
        yield destination  # type: ignore[misc]
        return
    path = os.fspath(destination)
    # build in memory first so a failed export leaves no partial file
    buf = io.StringIO()
    yield buf
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())
    except OSError as exc:
        raise ExportError(f"cannot write {path}: {exc.strerror or exc}") from exc


def table_rows(family: str, n_max: int) -> list[TableRow]:
    """One row per nonzero coefficient of d_n(q) for 1 <= n <= n_max."""
    fam = check_family(family)
    if n_max < 0:
        raise DomainError(f"n_max must be non-negative, got {n_max}")
    return [
        TableRow(fam, n, k, c)
        for n in range(1, n_max + 1)
        for k, c in d_poly(fam, n).items()
    ]


def write_table(rows: Sequence[TableRow], family: str, fmt: str, stream: IO[str]) -> None:
    if _check_format(fmt) == "csv":
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(TABLE_HEADER)
        for r in rows:
            writer.writerow((r.family, r.n, r.k, str(r.coefficient)))
    else:
        doc = {
            "family": family,
            "rows": [{"n": r.n, "k": r.k, "coefficient": str(r.coefficient)} for r in rows],
        }
        json.dump(doc, stream, indent=2)
        stream.write("\n")


def export_table(family: str, n_max: int, fmt: str = "csv", destination=None) -> int:
    """Write the coefficient table for n <= n_max; returns the number of rows."""
    fam = check_family(family)
    _check_format(fmt)
    rows = table_rows(fam, n_max)
    with _open_destination(destination) as stream:
        write_table(rows, fam, fmt, stream)
    return len(rows)


def read_table(source: str | os.PathLike | IO[str], fmt: str = "json") -> dict[int, QPoly]:
    """Parse an exported table back into {n: polynomial}."""
    if hasattr(source, "read"):
        text = source.read()  # type: ignore[union-attr]
    else:
        with open(source, encoding="utf-8") as fh:
            text = fh.read()
    counts: dict[int, dict[int, int]] = {}
    if _check_format(fmt) == "json":
        records = [(r["n"], r["k"], r["coefficient"]) for r in json.loads(text)["rows"]]
    else:
        reader = csv.DictReader(io.StringIO(text))
        records = [(r["n"], r["k"], r["coefficient"]) for r in reader]
    for n, k, c in records:
        counts.setdefault(int(n), {})[int(k)] = int(c)
    return {n: QPoly.from_mapping(m) for n, m in counts.items()}


def normality_block(family: str, n: int, precision: int = DEFAULT_PRECISION) -> NormalityBlock:
    """Standardized support points with exact pmf, empirical CDF and Phi, plus the KS distance."""
    dist = standardize(family, n, precision)
    ctx = real_context(precision)
    rows = []
    for x, p, cum in zip(dist.support, dist.probs, dist.cdf()):
        rows.append(
            NormalityRow(
                family=dist.family,
                n=n,
                x=format_real(x),
                pmf=f"{p.numerator}/{p.denominator}",
                cdf_empirical=format_real(to_real(ctx, cum)),
                cdf_normal=format_real(normal_cdf(x, precision)),
            )
        )
    return NormalityBlock(dist.family, n, tuple(rows), format_real(ks_to_normal(dist)))


def _block_json(block: NormalityBlock) -> dict:
    return {
        "family": block.family,
        "n": block.n,
        "ks": block.ks,
        "rows": [
            {"x": r.x, "pmf": r.pmf, "cdf_empirical": r.cdf_empirical, "cdf_normal": r.cdf_normal}
            for r in block.rows
        ],
    }


def write_normality(blocks: Sequence[NormalityBlock], fmt: str, stream: IO[str], extra: dict | None = None) -> None:
    """CSV: one ``point`` row per support point and a ``ks`` trailer per block.

    JSON: a single block is written as one object, several as ``{"results": [...]}``.
    """
    if _check_format(fmt) == "csv":
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(NORMALITY_HEADER)
        for b in blocks:
            for r in b.rows:
                writer.writerow(("point", r.family, r.n, r.x, r.pmf, r.cdf_empirical, r.cdf_normal, ""))
            writer.writerow(("ks", b.family, b.n, "", "", "", "", b.ks))
        return
    if len(blocks) == 1 and not extra:
        doc = _block_json(blocks[0])
    else:
        doc = {"results": [_block_json(b) for b in blocks]}
        doc.update(extra or {})
    json.dump(doc, stream, indent=2)
    stream.write("\n")


def export_normality(
    family: str, n: int, precision: int = DEFAULT_PRECISION, fmt: str = "csv", destination=None
) -> int:
    """Write the normality data for one n; returns the number of support-point rows."""
    _check_format(fmt)
    block = normality_block(family, n, precision)
    with _open_destination(destination) as stream:
        write_normality([block], fmt, stream)
    return len(block.rows)
