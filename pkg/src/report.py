"""Serialize bound reports and result records as JSON or CSV.

Rational quantities are always written as "p/q" strings (whole values
too, e.g. "6/1") so output re-parses to the exact value; counts and indices
stay ints. ``decimal=True`` switches to decimal text at a chosen number of
significant digits. Interval results are written as the decimal midpoint,
with the exact endpoints kept in JSON.
"""
import csv
import io
import json
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence

import mpmath

from .bounds import BoundReport, Enclosure
from .errors import UsageError
from .exactcore import DensePoly
from .families import ClosedForm

REPORT_COLUMNS = ("name", "lhs", "rhs", "holds", "sharp", "strict", "context")
DEFAULT_DIGITS = 20


def rational_text(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def decimal_text(x: Fraction, digits: int = DEFAULT_DIGITS) -> str:
    with mpmath.workdps(digits + 10):
        return mpmath.nstr(mpmath.mpf(x.numerator) / x.denominator, digits)


def render_value(value: Any, decimal: bool = False, digits: int = DEFAULT_DIGITS) -> Any:
    # plain ints are counts and indices; only Fractions are quantities
    if isinstance(value, (bool, int, float)) or value is None:
        return value
    if isinstance(value, Fraction):
        return decimal_text(value, digits) if decimal else rational_text(value)
    if isinstance(value, Enclosure):
        return decimal_text(value.mid, digits)
    if isinstance(value, ClosedForm):
        return str(value)
    if isinstance(value, DensePoly):
        return [render_value(c, decimal, digits) for c in value.coeffs]
    if isinstance(value, Mapping):
        return {k: render_value(v, decimal, digits) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [render_value(v, decimal, digits) for v in value]
    return value


def _quantity(value: Any) -> Any:
    if isinstance(value, int) and not isinstance(value, bool):
        return Fraction(value)
    return value


def report_to_dict(report: BoundReport, decimal: bool = False,
                   digits: int = DEFAULT_DIGITS) -> Dict[str, Any]:
    out = {
        "name": report.name,
        "lhs": render_value(_quantity(report.lhs), decimal, digits),
        "rhs": render_value(_quantity(report.rhs), decimal, digits),
        "holds": report.holds,
        "sharp": report.sharp,
        "strict": report.strict,
        "context": dict(report.context),
    }
    for side in ("lhs", "rhs"):
        value = getattr(report, side)
        if isinstance(value, Enclosure):
            out[f"{side}_interval"] = [rational_text(value.lo), rational_text(value.hi)]
            out[f"{side}_bits"] = value.bits
    return out


def _cell(value: Any) -> str:
    if value is None:
        return "undecided"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (dict, list)):
        return json.dumps(value, sort_keys=True, separators=(",", ":"))
    return str(value)


def _csv(columns: Sequence[str], rows: Iterable[Mapping[str, Any]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(row[c]) if c in row else "" for c in columns])
    return buf.getvalue()


def emit_report(reports: Sequence[BoundReport], fmt: str = "json", decimal: bool = False,
                digits: int = DEFAULT_DIGITS) -> str:
    rows = [report_to_dict(r, decimal, digits) for r in reports]
    if fmt == "json":
        return json.dumps(rows, indent=2)
    if fmt == "csv":
        return _csv(REPORT_COLUMNS, rows)
    raise UsageError(f"unknown format {fmt!r}")


def emit_records(records: Sequence[Mapping[str, Any]], fmt: str = "json",
                 decimal: bool = False, digits: int = DEFAULT_DIGITS) -> str:
    """Free-form result records; CSV columns follow first appearance of each key."""
    rows = [render_value(r, decimal, digits) for r in records]
    if fmt == "json":
        return json.dumps(rows, indent=2)
    if fmt == "csv":
        columns: List[str] = []
        for row in rows:
            columns.extend(k for k in row if k not in columns)
        return _csv(columns, rows)
    raise UsageError(f"unknown format {fmt!r}")


def verdict_exit_code(verdicts: Iterable[Optional[bool]]) -> int:
    """1 if anything is violated, else 3 if anything is undecided, else 0."""
    verdicts = list(verdicts)
    if any(v is False for v in verdicts):
        return 1
    if any(v is None for v in verdicts):
        return 3
    return 0


def parse_rational(text: Any) -> Fraction:
    if isinstance(text, (int, Fraction)) and not isinstance(text, bool):
        return Fraction(text)
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"not a rational number: {text!r}") from None


def parse_rational_list(text: str) -> List[Fraction]:
    """A JSON array or a comma-separated list of integers and "p/q" rationals."""
    text = text.strip()
    if text.startswith("["):
        try:
            items = json.loads(text)
        except json.JSONDecodeError as exc:
            raise UsageError(f"malformed JSON list: {exc}") from None
        if not isinstance(items, list):
            raise UsageError("expected a JSON array")
    else:
        items = [t for t in text.replace("\n", ",").split(",") if t.strip()]
    if not items:
        raise UsageError("empty coefficient list")
    return [parse_rational(item) for item in items]
