"""
Input file schemas for the command-line tool.
Channel files and state specifications, validated with pydantic.
"""
import json
from pathlib import Path
from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from channels import KrausChannel
from exceptions import InvariantViolation
from linalg2 import STATE_TOL, DensityOp

MAX_KRAUS = 8

# [re, im]
ComplexPair = Tuple[float, float]
ComplexMatrix = List[List[ComplexPair]]


def _to_matrix(entries: ComplexMatrix) -> np.ndarray:
    return np.array([[re + 1j * im for re, im in row] for row in entries], dtype=complex)


def _check_shape(entries: ComplexMatrix, name: str) -> ComplexMatrix:
    if len(entries) != 2 or any(len(row) != 2 for row in entries):
        raise ValueError(f"{name} must be a 2x2 matrix of [re, im] pairs")
    return entries


class ChannelSpecFile(BaseModel):
    """{"name": ..., "kraus": [2x2 matrices of [re, im] pairs, row-major]}"""

    model_config = ConfigDict(extra="forbid")

    name: Optional[str] = None
    kraus: List[ComplexMatrix] = Field(min_length=1, max_length=MAX_KRAUS)

    @field_validator("kraus")
    @classmethod
    def _kraus_shapes(cls, value: List[ComplexMatrix]) -> List[ComplexMatrix]:
        for i, entries in enumerate(value):
            _check_shape(entries, f"Kraus operator {i}")
        return value

    def to_channel(self) -> KrausChannel:
        return KrausChannel(tuple(_to_matrix(k) for k in self.kraus), name=self.name or "")


class StateSpec(BaseModel):
    """Either a Bloch vector or a 2x2 density matrix of [re, im] pairs."""

    model_config = ConfigDict(extra="forbid")

    bloch: Optional[Tuple[float, float, float]] = None
    matrix: Optional[ComplexMatrix] = None

    @model_validator(mode="after")
    def _exactly_one(self) -> "StateSpec":
        if (self.bloch is None) == (self.matrix is None):
            raise ValueError("state needs exactly one of 'bloch' or 'matrix'")
        if self.matrix is not None:
            _check_shape(self.matrix, "state matrix")
        return self

    @classmethod
    def parse_flag(cls, text: str) -> "StateSpec":
        """Parse the --state flag form "bloch:x,y,z"."""
        kind, _, body = text.partition(":")
        if kind.strip().lower() != "bloch" or not body:
            raise InvariantViolation("state_flag", f"expected 'bloch:x,y,z', got {text!r}")
        try:
            values = tuple(float(v) for v in body.split(","))
        except ValueError as e:
            raise InvariantViolation("state_flag", f"non-numeric Bloch component in {text!r}") from e
        return _validated(cls, {"bloch": values})

    def to_density(self, tol: float = STATE_TOL) -> DensityOp:
        """Density operator of the spec; matrix input is accepted within tol."""
        if self.bloch is not None:
            return DensityOp.from_bloch(self.bloch)
        return DensityOp.from_matrix(_to_matrix(self.matrix), tol)


def _validated(model, data):
    try:
        return model.model_validate(data)
    except ValidationError as e:
        raise InvariantViolation("schema", f"{model.__name__}: {e.errors()[0]['msg']}") from e


def _load_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise InvariantViolation("json", f"{path}: {e}") from e


def load_channel_file(path) -> ChannelSpecFile:
    return _validated(ChannelSpecFile, _load_json(path))


def load_state_file(path) -> StateSpec:
    return _validated(StateSpec, _load_json(path))
