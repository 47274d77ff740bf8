from .runner import GuardExceeded, Options, SpecError, canonical_json, canonicalize, input_hash, run, validate
from .schemas import KINDS, PAYLOADS, ProblemSpec

__all__ = ["GuardExceeded", "KINDS", "Options", "PAYLOADS", "ProblemSpec", "SpecError", "canonical_json",
           "canonicalize", "input_hash", "run", "validate"]
