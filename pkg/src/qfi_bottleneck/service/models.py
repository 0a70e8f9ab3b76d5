"""Request and response schemas, plus builders mapping them to core objects.

Generator and probe documents are discriminated on their "type" field and
keep the on-wire spellings ("pauli", "tensor", "case", "appendix-b";
"hurwitz", "amplitudes", "named") stable across releases.
"""

import math
from typing import Any, Dict, List, Literal, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, Field, field_validator

from .. import generators, probes

MAX_SEED = 2 ** 64 - 1


class PauliGenerator(BaseModel):
    type: Literal["pauli"]
    c: List[List[float]]

    @field_validator("c")
    @classmethod
    def _square(cls, v):
        if len(v) != 4 or any(len(row) != 4 for row in v):
            raise ValueError("c must be a 4x4 coefficient table")
        return v


class TensorGenerator(BaseModel):
    type: Literal["tensor"]
    m: List[float]
    t1: float
    n: List[float]
    t2: float

    @field_validator("m", "n")
    @classmethod
    def _direction(cls, v):
        if len(v) != 3:
            raise ValueError("direction needs 3 components")
        if not any(x != 0.0 for x in v):
            raise ValueError("direction must be nonzero")
        return v


class CaseGenerator(BaseModel):
    type: Literal["case"]
    t1: float
    t2: float


class AppendixBGenerator(BaseModel):
    type: Literal["appendix-b"]
    t22: float
    t33: float


Generator = Union[PauliGenerator, TensorGenerator, CaseGenerator, AppendixBGenerator]


class HurwitzProbe(BaseModel):
    type: Literal["hurwitz"]
    theta: List[float]
    phi: List[float]

    @field_validator("theta")
    @classmethod
    def _theta_range(cls, v):
        if any(not 0.0 <= x <= math.pi / 2.0 for x in v):
            raise ValueError("theta angles must lie in [0, pi/2]")
        return v

    @field_validator("phi")
    @classmethod
    def _lengths(cls, v, info):
        if any(not 0.0 <= x < 2.0 * math.pi for x in v):
            raise ValueError("phi angles must lie in [0, 2 pi)")
        theta = info.data.get("theta")
        if theta is not None:
            if len(v) != len(theta):
                raise ValueError("theta and phi must have equal length")
            n = (len(theta) + 1).bit_length() - 1
            if len(theta) + 1 != 2 ** n:
                raise ValueError("angle count must be 2^n - 1 for n qubits")
        return v


class AmplitudesProbe(BaseModel):
    type: Literal["amplitudes"]
    re: List[float]
    im: List[float]

    @field_validator("im")
    @classmethod
    def _shape(cls, v, info):
        re = info.data.get("re")
        if re is not None:
            if len(v) != len(re):
                raise ValueError("re and im must have equal length")
            if len(re) not in (4, 16):
                raise ValueError("amplitude vectors must have length 4 or 16")
            norm = math.sqrt(sum(a * a for a in re) + sum(b * b for b in v))
            if abs(norm - 1.0) > 1e-6:
                raise ValueError("amplitudes must be normalized within 1e-6")
        return v


class NamedProbe(BaseModel):
    type: Literal["named"]
    label: str
    phi: Optional[float] = None
    theta: Optional[float] = None
    t2_sign: Optional[float] = None
    branch: Optional[int] = None
    pair: Optional[int] = None

    @field_validator("label")
    @classmethod
    def _known(cls, v):
        if v not in probes.NAMED_LABELS:
            raise ValueError("label must be one of %s" % (probes.NAMED_LABELS,))
        return v


Probe = Union[HurwitzProbe, AmplitudesProbe, NamedProbe]


def build_generator(model: Generator):
    if isinstance(model, PauliGenerator):
        return generators.make_pauli(np.asarray(model.c, dtype=float))
    if isinstance(model, TensorGenerator):
        m_hat, _ = generators.normalized_direction(model.m)
        n_hat, _ = generators.normalized_direction(model.n)
        return generators.make_tensor(m_hat, model.t1, n_hat, model.t2)
    if isinstance(model, CaseGenerator):
        return generators.make_case(model.t1, model.t2)
    return generators.make_diagonal_coupling(model.t22, model.t33)


def build_probe(model: Probe):
    if isinstance(model, HurwitzProbe):
        n = (len(model.theta) + 1).bit_length() - 1
        return probes.hurwitz_state(model.theta, model.phi, n)
    if isinstance(model, AmplitudesProbe):
        amps = np.asarray(model.re, dtype=float) + 1j * np.asarray(model.im, dtype=float)
        n = 2 if amps.size == 4 else 4
        return probes.ProbeState(n, amps, normalize=True,
                                 provenance={"kind": "amplitudes"})
    params = {k: v for k, v in (("phi", model.phi), ("theta", model.theta),
                                ("t2_sign", model.t2_sign), ("branch", model.branch),
                                ("pair", model.pair)) if v is not None}
    return probes.named_probe(model.label, **params)


class QfiRequest(BaseModel):
    generator: Generator = Field(discriminator="type")
    probe: Probe = Field(discriminator="type")
    alpha_points: int = Field(default=201, ge=2, le=100001)


class ContourRequest(BaseModel):
    theta: float = math.pi / 4.0
    sign: Literal[-1, 1] = 1
    tplus_min: float = 0.0
    tplus_max: float = 3.0
    tplus_points: int = Field(default=13, ge=1, le=10001)
    alpha_points: int = Field(default=201, ge=2, le=100001)


class OptimizeRequest(BaseModel):
    generator: Generator = Field(discriminator="type")
    alpha: float
    sampler: Literal["grid", "haar", "separable", "candidates",
                     "candidates+grid"] = "candidates+grid"
    budget: Optional[int] = Field(default=None, ge=1)
    seed: int = Field(default=0, ge=0, le=MAX_SEED)
    grid: Optional[Tuple[int, int]] = None
    target: Literal["bottleneck", "full"] = "bottleneck"


class TwoCopyRequest(BaseModel):
    generator: Generator = Field(discriminator="type")
    probe: Probe = Field(discriminator="type")
    alpha_points: int = Field(default=201, ge=2, le=100001)


class ContinuityRequest(BaseModel):
    state_trials: int = Field(default=1000, ge=0, le=100000)
    generator_trials: int = Field(default=500, ge=0, le=100000)
    eps: float = Field(default=1e-3, gt=0.0, lt=1.0)
    seed: int = Field(default=0, ge=0, le=MAX_SEED)
    path_check: bool = True


class ConjectureRequest(BaseModel):
    trials: int = Field(default=200, ge=1, le=100000)
    seed: int = Field(default=0, ge=0, le=MAX_SEED)
    threshold: float = Field(default=0.99, gt=0.0, le=1.0)
    alpha_points: int = Field(default=16, ge=2, le=10001)
    grid: Tuple[int, int] = (4, 8)
    budget: Optional[int] = Field(default=None, ge=1)


class AppendixBRequest(BaseModel):
    t22: float
    t33: float
    alpha_points: int = Field(default=201, ge=2, le=100001)


class ReportResponse(BaseModel):
    columns: List[str]
    rows: List[List[Any]]
    meta: Dict[str, Any]
