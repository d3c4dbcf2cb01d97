"""Wire helpers: complex numbers as [re, im] pairs, exact fractions as
strings, deterministic JSON and CSV artifacts."""

import csv
import io
import json
from fractions import Fraction
from typing import Annotated, Any, Dict, Iterable, List, Optional, Sequence

from pydantic import PlainSerializer, PlainValidator


def parse_complex(value: Any) -> complex:
    if isinstance(value, bool):
        raise ValueError("booleans are not complex numbers")
    if isinstance(value, (int, float, complex)):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, dict) and {"re", "im"} <= set(value):
        return complex(float(value["re"]), float(value["im"]))
    if isinstance(value, str):
        return complex(value.replace(" ", ""))
    if hasattr(value, "__complex__"):
        return complex(value)
    raise ValueError(f"cannot read a complex number from {value!r}")


def complex_pair(value: complex) -> List[float]:
    value = complex(value)
    return [float(value.real), float(value.imag)]


def parse_fraction(value: Any) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError("booleans are not fractions")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return Fraction(int(value[0]), int(value[1]))
    raise ValueError(f"exact values must be integers, 'p/q' strings or [p, q] pairs, got {value!r}")


ComplexValue = Annotated[
    complex,
    PlainValidator(parse_complex),
    PlainSerializer(complex_pair, return_type=list, when_used="json"),
]

FractionValue = Annotated[
    Fraction,
    PlainValidator(parse_fraction),
    PlainSerializer(str, return_type=str, when_used="json"),
]


def dump_json(payload: Any) -> str:
    """Deterministic JSON text (sorted keys, shortest float repr)."""
    return json.dumps(payload, sort_keys=True, indent=2, allow_nan=True) + "\n"


def dump_csv(
    header: Sequence[str],
    rows: Iterable[Sequence[Any]],
    seed: Optional[int] = None,
    notes: Optional[Dict[str, Any]] = None,
) -> str:
    buffer = io.StringIO()
    if seed is not None:
        buffer.write(f"# seed={seed}\n")
    for key, value in (notes or {}).items():
        buffer.write(f"# {key}={_cell(value)}\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(list(header))
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buffer.getvalue()


def _cell(value: Any) -> Any:
    if isinstance(value, float):
        return repr(value)
    if value is None:
        return ""
    return value
