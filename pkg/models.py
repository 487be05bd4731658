"""
Request and report schemas shared by the CLI and the JSON API.

Exact numbers travel as {"n": ..., "coeffs": ["p/q", ...]} over the power basis
of Q(2cos π/2n); nothing is ever rounded on the wire.
"""
from __future__ import annotations

from typing import Any, Dict, List, Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from algnum import RealCycNumber, cyc_context, matrix_to_json, parse_rational
from armodel import ARModel, Indec
from chebrings import FoldingType, RingElt, chebyshev_ring
from config import Config


def _type_name(value: str) -> str:
    return FoldingType.parse(value).name


# -------------------------
# Exact values
# -------------------------
class CycNumberModel(BaseModel):
    """An element of Q(2cos π/2n)"""
    model_config = ConfigDict(frozen=True)

    n: int = Field(..., ge=2)
    coeffs: List[str]

    @field_validator('coeffs')
    @classmethod
    def check_rationals(cls, value: List[str]) -> List[str]:
        for c in value:
            try:
                parse_rational(c)
            except (ValueError, ZeroDivisionError):
                raise ValueError(f"not a rational number: {c!r}") from None
        return value

    @model_validator(mode='after')
    def check_degree(self) -> 'CycNumberModel':
        degree = cyc_context(self.n).degree
        if len(self.coeffs) != degree:
            raise ValueError(f"expected {degree} coefficients for n={self.n}, got {len(self.coeffs)}")
        return self

    @classmethod
    def from_value(cls, x: RealCycNumber) -> 'CycNumberModel':
        return cls(**x.to_json())

    def to_value(self) -> RealCycNumber:
        return RealCycNumber.from_json(self.model_dump())


class RingEltModel(BaseModel):
    """An element of the hat-ring of a folding type, by its non-zero coordinates"""
    model_config = ConfigDict(frozen=True)

    type: str
    coords: Dict[str, int] = Field(default_factory=dict)

    @field_validator('type')
    @classmethod
    def normalize_type(cls, value: str) -> str:
        return _type_name(value)

    @model_validator(mode='after')
    def check_labels(self) -> 'RingEltModel':
        ring = chebyshev_ring(FoldingType.parse(self.type))
        unknown = [label for label in self.coords if label not in ring.index]
        if unknown:
            raise ValueError(f"unknown basis labels for {self.type}: {', '.join(unknown)}")
        return self

    @classmethod
    def from_value(cls, r: RingElt) -> 'RingEltModel':
        return cls(**r.to_json())

    def to_value(self) -> RingElt:
        ring = chebyshev_ring(FoldingType.parse(self.type))
        result = ring.zero()
        for label, c in self.coords.items():
            if c:
                result = result + ring.element(label) * c
        return result


class IndecModel(BaseModel):
    """An indecomposable object of one of the three categories"""
    model_config = ConfigDict(frozen=True)

    type: str
    layer: Literal['module', 'derived', 'cluster'] = 'module'
    vertex: str
    m: int = 0
    shift: int = 0
    shifted_projective: bool = False
    name: Optional[str] = None

    @field_validator('type')
    @classmethod
    def normalize_type(cls, value: str) -> str:
        return _type_name(value)

    @classmethod
    def from_value(cls, model: ARModel, x: Indec) -> 'IndecModel':
        return cls(type=model.folding.ftype.name, layer=x.layer, vertex=x.vertex, m=x.m,
                   shift=x.shift, shifted_projective=x.shifted_projective, name=model.name(x))

    def to_value(self) -> Indec:
        return Indec(self.layer, self.vertex, self.m, self.shift, self.shifted_projective)


class MatrixModel(BaseModel):
    """A matrix with integer or exact entries"""
    model_config = ConfigDict(frozen=True)

    rows: List[List[Union[int, CycNumberModel]]]

    @field_validator('rows')
    @classmethod
    def check_rectangular(cls, value):
        if len({len(row) for row in value}) > 1:
            raise ValueError("rows have different lengths")
        return value

    @classmethod
    def from_value(cls, M) -> 'MatrixModel':
        rows = []
        for row in np.asarray(M, dtype=object):
            rows.append([CycNumberModel.from_value(v) if isinstance(v, RealCycNumber) else int(v)
                         for v in row])
        return cls(rows=rows)

    def to_value(self) -> np.ndarray:
        exact = any(isinstance(v, CycNumberModel) for row in self.rows for v in row)
        if not exact:
            return np.array(self.rows, dtype=np.int64).reshape(len(self.rows), -1)
        n = next(v.n for row in self.rows for v in row if isinstance(v, CycNumberModel))
        ctx = cyc_context(n)
        return np.array([[v.to_value() if isinstance(v, CycNumberModel) else ctx.coerce(v) for v in row]
                         for row in self.rows], dtype=object)


# -------------------------
# Run configuration
# -------------------------
class RunConfig(BaseModel):
    """Validated input of a verification run"""
    types: List[str] = Field(default_factory=list)
    all_types: bool = False
    depth: int = Field(Config.DEFAULT_DEPTH, ge=0)
    seed: int = Config.DEFAULT_SEED
    words: int = Field(Config.DEFAULT_WORDS, ge=0)
    word_length: int = Field(Config.DEFAULT_WORD_LENGTH, ge=1)
    golden: Optional[Literal['appendix']] = None
    output: Optional[str] = None
    svg_dir: Optional[str] = None
    emit: List[Literal['json', 'table', 'svg']] = Field(default_factory=lambda: ['table'])

    @field_validator('types')
    @classmethod
    def normalize_types(cls, value: List[str]) -> List[str]:
        out = []
        for text in value:
            name = _type_name(text)
            if name not in out:
                out.append(name)
        return out

    @model_validator(mode='after')
    def check_selection(self) -> 'RunConfig':
        if not self.types and not self.all_types and self.golden is None:
            raise ValueError("no folding type selected: pass a type, all_types or golden")
        return self

    @classmethod
    def from_config(cls, cfg=Config, **overrides) -> 'RunConfig':
        """Defaults from a configuration class, overridden by the given fields"""
        values = dict(depth=cfg.DEFAULT_DEPTH, seed=cfg.DEFAULT_SEED, words=cfg.DEFAULT_WORDS,
                      word_length=cfg.DEFAULT_WORD_LENGTH)
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

    def selected_types(self, cfg=Config) -> List[str]:
        if self.all_types:
            return list(cfg.VERIFY_TYPES)
        if self.types:
            return list(self.types)
        # golden runs without a type cover both appendix foldings
        return ['A7', 'D5']


# -------------------------
# Reports
# -------------------------
class CheckResult(BaseModel):
    """Outcome of one named check on one folding type"""
    name: str
    type: Optional[str] = None
    passed: bool
    checked: int = 0
    failures: List[str] = Field(default_factory=list)
    witness: Optional[Dict[str, Any]] = None
    detail: Dict[str, Any] = Field(default_factory=dict)
    seconds: float = 0.0


class VerifyReport(BaseModel):
    """The machine-readable result of a verification run"""
    schema_version: str = Config.REPORT_SCHEMA_VERSION
    config: RunConfig
    checks: List[CheckResult] = Field(default_factory=list)
    ok: bool = True

    @model_validator(mode='after')
    def compute_ok(self) -> 'VerifyReport':
        self.ok = all(c.passed for c in self.checks)
        return self

    def failed(self) -> List[CheckResult]:
        return [c for c in self.checks if not c.passed]


def to_jsonable(value):
    """Exact values, ring elements and matrices in their wire form, recursively"""
    if isinstance(value, (RealCycNumber, RingElt)):
        return value.to_json()
    if isinstance(value, BaseModel):
        return value.model_dump(mode='json')
    if isinstance(value, np.ndarray):
        if value.ndim == 2:
            return matrix_to_json(value)
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    return value
