"""Pydantic request/response models.

Conventions: flat snake_case keys, exact rationals rendered as strings in
"num/den" form (or "N" for integers, "inf"), JSON reports round-trip into
their model types.
"""
from __future__ import annotations

from typing import List, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator

from ..order import DEFAULT_STEP_LIMIT, ERat


class _Request(BaseModel):
    model_config = ConfigDict(extra="forbid")

    step_budget: int = Field(default=DEFAULT_STEP_LIMIT, ge=1)


def _rational(text: str) -> str:
    ERat.parse(text)  # raises ValueError on junk
    return text


# --- sieve ------------------------------------------------------------------


class SieveRequest(_Request):
    count: int = Field(ge=1)


class SieveResponse(BaseModel):
    count: int
    primes: List[int]
    exhausted: bool
    # Verification of the produced prefix; None when exhaustion preempted it.
    bound: Optional[int] = None
    sound: Optional[bool] = None
    complete: Optional[bool] = None
    sorted: Optional[bool] = None
    nodup: Optional[bool] = None
    productive_to: Optional[int] = None


# --- regex ------------------------------------------------------------------


class RegexMatchRequest(_Request):
    pattern: str
    text: str
    alphabet: str = "ab"


class RegexMatchResponse(BaseModel):
    pattern: str
    text: str
    alphabet: str
    accept: bool


class RegexEquivRequest(_Request):
    left: str
    right: str
    depth: int = Field(default=6, ge=0)
    alphabet: str = "ab"


class RegexEquivResponse(BaseModel):
    left: str
    right: str
    depth: int
    alphabet: str
    equal: bool
    counterexample: Optional[str] = None  # "" is a real witness; None means equal


class RegexLawsRequest(_Request):
    depth: int = Field(default=4, ge=0)
    trials: int = Field(default=50, ge=1)
    seed: int = 0
    alphabet: str = "ab"


class LawFailureModel(BaseModel):
    axiom: str
    trial: int
    lhs: str
    rhs: str
    word: str


class AxiomResultModel(BaseModel):
    name: str
    checked: int
    failures: List[LawFailureModel]


class OrderIdentityModel(BaseModel):
    trials: int
    matches_a_plus_b_eq_b: int
    matches_a_plus_b_eq_a: int


class RegexLawsResponse(BaseModel):
    depth: int
    trials: int
    seed: int
    alphabet: str
    axioms: List[AxiomResultModel]
    order_identity: OrderIdentityModel
    total_failures: int


# --- expectation bounds -----------------------------------------------------


class WpRequest(_Request):
    dist: str
    event: str
    fuel: int = Field(ge=0)
    eps: Optional[str] = None

    @field_validator("eps")
    @classmethod
    def _check_eps(cls, v: Optional[str]) -> Optional[str]:
        return None if v is None else _rational(v)


class WpResponse(BaseModel):
    dist: str
    event: str
    fuel: int
    wp_lower: str
    wlp_upper: str
    eps: Optional[str] = None
    converged: Optional[bool] = None
    converged_at_fuel: Optional[int] = None


# --- sampling ---------------------------------------------------------------


class SampleRequest(_Request):
    dist: str
    n: int = Field(ge=1)
    seed: int = 0


class SampleResponse(BaseModel):
    dist: str
    n: int
    seed: int
    # One entry per draw; None marks a draw that produced no value.
    values: List[Optional[Union[bool, int]]]
    n_diverged: int
    n_exhausted: int
    total_bits: int


class EquidistRequest(_Request):
    dist: str
    event: str
    n: int = Field(ge=1)
    seed: int = 0
    tol: str = "1/100"

    @field_validator("tol")
    @classmethod
    def _check_tol(cls, v: str) -> str:
        t = ERat.parse(v)
        if t.is_infinite or t == ERat(0):
            raise ValueError("tolerance must be finite and positive")
        return v


class EquidistResponse(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    dist: str
    event: str
    seed: int
    n_samples: int
    n_diverged: int
    empirical_freq: float
    wp_lower: str
    wlp_upper: str
    tolerance: str
    passed: bool = Field(validation_alias="pass", serialization_alias="pass")
