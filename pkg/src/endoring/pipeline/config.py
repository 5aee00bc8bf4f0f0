"""Run configuration shared by the pipeline and the command line."""

from __future__ import annotations

import hashlib
import math
from dataclasses import asdict, dataclass, replace

from ..cm.classgroup import BSGS_BUDGET
from ..cm.orders import SMALL_PRIME_BOUND
from ..errors import InputError
from ..genus2.curve import COUNT_BUDGET
from ..genus2.torsion import TORSION_BUDGET
from ..relations import DEFAULT_EPSILON, DEFAULT_GAMMA, GENUS, RelationGenParams

DESK_REPETITION_CAP = 40


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    gamma: float = DEFAULT_GAMMA
    epsilon: float = DEFAULT_EPSILON
    repetitions: int | None = None
    repetition_cap: int | None = None
    relation_method: str = "alg1"
    small_prime_bound: int = SMALL_PRIME_BOUND
    backend: str = "simulated"
    local: bool = True
    torsion_budget: int = TORSION_BUDGET
    bsgs_budget: int = BSGS_BUDGET
    count_budget: int = COUNT_BUDGET
    threads: int = 1

    def __post_init__(self):
        if self.relation_method not in ("alg1", "bsgs"):
            raise InputError("relation_method must be 'alg1' or 'bsgs'")
        if self.backend not in ("simulated", "concrete"):
            raise InputError("backend must be 'simulated' or 'concrete'")
        for name in ("torsion_budget", "bsgs_budget", "count_budget", "small_prime_bound", "threads"):
            if getattr(self, name) <= 0:
                raise InputError(f"{name} must be positive")
        if self.repetitions is not None and self.repetitions <= 0:
            raise InputError("repetitions must be positive")

    @classmethod
    def desk(cls, **kw) -> "RunConfig":
        """Settings for simulated worlds: BSGS relations and at most 40 repetitions."""
        kw.setdefault("relation_method", "bsgs")
        kw.setdefault("repetition_cap", DESK_REPETITION_CAP)
        return cls(**kw)

    def repetition_count(self, q: int) -> int:
        n = self.repetitions or math.ceil(5 * GENUS * GENUS * math.log2(q))
        if self.repetition_cap is not None:
            n = min(n, self.repetition_cap)
        return n

    def relation_params(self, seed: int) -> RelationGenParams:
        return RelationGenParams(self.gamma, self.epsilon, seed)

    def derive_seed(self, *parts) -> int:
        h = hashlib.sha256(repr((self.seed,) + parts).encode()).digest()
        return int.from_bytes(h[:8], "big")

    def with_(self, **kw) -> "RunConfig":
        return replace(self, **kw)

    def to_json(self) -> dict:
        out = {}
        for k, v in asdict(self).items():
            if isinstance(v, bool) or v is None or isinstance(v, str):
                out[k] = v
            elif isinstance(v, float):
                out[k] = repr(v)
            else:
                out[k] = str(v)
        return out

    @classmethod
    def from_json(cls, d: dict) -> "RunConfig":
        kw = {}
        for k, v in d.items():
            if v is None or isinstance(v, bool) or k in ("relation_method", "backend"):
                kw[k] = v
            elif k in ("gamma", "epsilon"):
                kw[k] = float(v)
            else:
                kw[k] = int(v)
        return cls(**kw)
