"""Request/response models and handlers shared by the HTTP app and the CLI."""

from .models import (
    EquidistRequest,
    EquidistResponse,
    RegexEquivRequest,
    RegexEquivResponse,
    RegexLawsRequest,
    RegexLawsResponse,
    RegexMatchRequest,
    RegexMatchResponse,
    SampleRequest,
    SampleResponse,
    SieveRequest,
    SieveResponse,
    WpRequest,
    WpResponse,
)
from .handlers import (
    BracketNotConverged,
    run_equidist,
    run_regex_equiv,
    run_regex_laws,
    run_regex_match,
    run_sample,
    run_sieve,
    run_wp,
)

__all__ = [
    "BracketNotConverged",
    "EquidistRequest",
    "EquidistResponse",
    "RegexEquivRequest",
    "RegexEquivResponse",
    "RegexLawsRequest",
    "RegexLawsResponse",
    "RegexMatchRequest",
    "RegexMatchResponse",
    "SampleRequest",
    "SampleResponse",
    "SieveRequest",
    "SieveResponse",
    "WpRequest",
    "WpResponse",
    "run_equidist",
    "run_regex_equiv",
    "run_regex_laws",
    "run_regex_match",
    "run_sample",
    "run_sieve",
    "run_wp",
]
