"""Loading lambda, sequence and matrix specifications from the command line.

A specification is inline JSON, ``builtin:<name>``, a bare lambda family
name, or a path to a JSON file.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .matrices import MatrixOracle, matrix_from_spec
from .numerics import LambdaSequence
from .spaces import SequenceOracle, sequence_from_spec


class SpecError(ValueError):
    pass


def _decode(text: str, source: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"{source}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def load_document(text: str, what: str) -> Any:
    text = text.strip()
    if not text:
        raise SpecError(f"empty {what} specification")
    if text[0] in "{[":
        return _decode(text, f"inline {what} spec")
    if text.startswith("builtin:"):
        return {"kind": "builtin", "name": text[len("builtin:"):]}
    path = Path(text)
    if path.is_file():
        return _decode(path.read_text(), str(path))
    return None


def _build(doc: Any, what: str, build):
    try:
        return build(doc)
    except SpecError:
        raise
    except (ValueError, TypeError, KeyError, ZeroDivisionError) as exc:
        raise SpecError(f"invalid {what} spec: {exc}") from None


def load_lambda(text: str) -> LambdaSequence:
    doc = load_document(text, "lambda")
    if doc is None:
        doc = {"family": text.strip()}
    return _build(doc, "lambda", LambdaSequence.from_spec)


def load_sequence(text: str, lam: LambdaSequence) -> SequenceOracle:
    doc = load_document(text, "sequence")
    if doc is None:
        raise SpecError(f"sequence spec {text!r} is not JSON, builtin:<name> or a file")
    return _build(doc, "sequence", lambda d: sequence_from_spec(d, lam))


def load_matrix(text: str, lam: LambdaSequence) -> MatrixOracle:
    doc = load_document(text, "matrix")
    if doc is None:
        raise SpecError(f"matrix spec {text!r} is not JSON, builtin:<name> or a file")
    return _build(doc, "matrix", lambda d: matrix_from_spec(d, lam))
