"""Problem specs: one pydantic model per kind; unknown fields are rejected."""

from __future__ import annotations

from typing import Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field

Entry = Union[str, int, list[Union[str, int]]]

KINDS = ("flatness", "locus", "family-locus", "zpdrive", "gaussmanin", "degree-bound", "atypical")


class Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class ChartModel(Strict):
    vars: list[str]
    ideal: list[str] = []


class ConnectionModel(Strict):
    rank: int = Field(ge=1)
    base: ChartModel
    matrices: list[list[list[Entry]]]


class TensorModel(Strict):
    a: int = Field(ge=0)
    b: int = Field(ge=0)
    section: list[Entry]


class FamilyModel(Strict):
    params: list[str]
    ideal: list[str]
    param_ideal: list[str] = []


class TorsorFields(Strict):
    connection: ConnectionModel
    invariant_tensors: list[TensorModel] = []
    base_point: Optional[list[Union[str, int]]] = None
    group_dimension: Optional[int] = None


class FlatnessPayload(Strict):
    connection: ConnectionModel


class LocusPayload(TorsorFields):
    family: FamilyModel
    e: int = Field(default=1, ge=0)


class FamilyLocusPayload(LocusPayload):
    h: FamilyModel


class ZPPayload(TorsorFields):
    families: list[FamilyModel] = Field(min_length=1)
    dim_S: int = Field(ge=0)
    dim_flag: int = Field(ge=0)
    dim_H: Optional[int] = None
    weakly_special: list[FamilyModel] = []
    e: int = Field(default=1, ge=0)


class GaussManinPayload(Strict):
    N: int
    exponents: list[int]
    points: list[str]
    params: list[str] = []
    characters: Optional[list[int]] = None
    verify_points: int = Field(default=3, ge=1)


class StageModel(Strict):
    kappa: int = Field(ge=0)
    r: int = Field(ge=0)


class DegreeBoundPayload(Strict):
    deg_V: int = Field(ge=0)
    kappa: Optional[int] = Field(default=None, ge=0)
    r: Optional[int] = Field(default=None, ge=0)
    steps: int = Field(default=1, ge=0)
    stages: Optional[list[StageModel]] = None


class AtypicalPayload(Strict):
    dim_U: int
    dim_V: int
    dim_P: int
    dim_L: int
    dim_H: int


PAYLOADS = {
    "flatness": FlatnessPayload,
    "locus": LocusPayload,
    "family-locus": FamilyLocusPayload,
    "zpdrive": ZPPayload,
    "gaussmanin": GaussManinPayload,
    "degree-bound": DegreeBoundPayload,
    "atypical": AtypicalPayload,
}


class ProblemSpec(Strict):
    kind: Literal["flatness", "locus", "family-locus", "zpdrive", "gaussmanin", "degree-bound", "atypical"]
    payload: dict
    seed: int = 0
