"""Request and response models for the service API (and the CLI that wraps it)."""

from __future__ import annotations

from typing import Any, Literal

from pydantic import BaseModel, Field

GenKind = Literal["random", "hypercube", "complete-greedy", "subset-aux", "tuple-aux"]
CheckName = Literal[
    "proper",
    "ratio",
    "interpolation",
    "sidorenko",
    "bipartite-mindeg",
    "sparsity",
    "key-lemma",
    "dyadic",
    "tuple-bound",
    "subset-bound",
    "krr-count",
    "mono-matchings",
    "step1",
    "step2",
    "almost-regular",
    "blowup-biregular",
]
FinderName = Literal[
    "good-cycle", "rainbow-cycle", "theta", "even-cycle", "blowup", "colour-iso"
]
RelationName = Literal["equality", "same-colour"]


class Meta(BaseModel):
    tool: str
    version: str
    command: str
    config: dict[str, Any]
    guards: dict[str, Any]
    seed: int | None = None
    timestamp: str | None = None


class GenRequest(BaseModel):
    kind: GenKind
    n: int | None = None
    p: float | None = None
    m: int | None = None
    r: int | None = None
    seed: int = 0
    document: str | None = None
    input_path: str | None = None
    output_format: str | None = None
    no_timestamp: bool = False


class GenResponse(BaseModel):
    meta: Meta
    document: str
    stats: dict[str, Any]


class VerifyRequest(BaseModel):
    check: CheckName
    document: str
    k: int = 2
    ell: int = 0
    kmax: int = 4
    r: int = 2
    relation: RelationName = "equality"
    eps: float = 0.5
    c: float = 1.0
    base_n: int | None = None
    seed: int = 0
    budget: int | None = None
    input_path: str | None = None
    output_format: str | None = None
    no_timestamp: bool = False


class VerifyResponse(BaseModel):
    meta: Meta
    passed: bool
    details: dict[str, Any]


class SearchRequest(BaseModel):
    finder: FinderName
    document: str
    k: int | None = None
    t: int = 2
    r: int = 2
    seed: int = 0
    budget: int = 10**6
    exact_max_n: int = 64
    input_path: str | None = None
    output_format: str | None = None
    no_timestamp: bool = False


class SearchResponse(BaseModel):
    meta: Meta
    status: Literal["found", "certified-absent", "inconclusive"]
    witness: dict[str, Any] | None
    details: dict[str, Any]


class SweepRequest(BaseModel):
    family: Literal["keylemma"] = "keylemma"
    nmax: int = 6
    ks: list[int] = Field(default_factory=lambda: [2])
    colour_seeds: list[int] = Field(default_factory=lambda: [101, 202, 303])
    connected_only: bool = True
    max_graphs: int | None = None
    processes: int = 1
    output_format: str | None = None
    no_timestamp: bool = False


class SweepResponse(BaseModel):
    meta: Meta
    columns: list[str]
    rows: list[list[Any]]
    all_passed: bool


class VersionResponse(BaseModel):
    tool: str
    version: str
