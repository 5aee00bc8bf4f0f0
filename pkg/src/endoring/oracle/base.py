"""Interface shared by isogeny oracles."""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Hashable

from ..cm.ideals import PrimeIdeal
from ..errors import OracleError
from ..relations import Relation


class OracleCapabilityError(OracleError):
    """The backend cannot evaluate the requested isogeny."""


@dataclass(frozen=True)
class VarietyHandle:
    backend: str
    key: Hashable
    payload: Any = None

    def __eq__(self, other):
        return isinstance(other, VarietyHandle) and (self.backend, self.key) == (other.backend, other.key)

    def __hash__(self):
        return hash((self.backend, self.key))


class IsogenyOracle(ABC):
    name = "abstract"

    @abstractmethod
    def start(self) -> VarietyHandle:
        """Handle of the variety whose endomorphism ring is sought."""

    @abstractmethod
    def apply_isogeny(self, h: VarietyHandle, P: PrimeIdeal, exponent: int = 1) -> VarietyHandle:
        """Target of the isogeny attached to the image of P^exponent."""

    def is_isomorphic(self, h1: VarietyHandle, h2: VarietyHandle) -> bool:
        if h1.backend != h2.backend:
            raise OracleError("handles from different backends")
        return h1.key == h2.key

    def relation_holds(self, h: VarietyHandle, r: Relation) -> bool:
        """Whether the isogeny chain of r maps h to an isomorphic variety."""
        cur = h
        for P, e in r.entries:
            cur = self.apply_isogeny(cur, P, e)
        return self.is_isomorphic(cur, h)

    def describe(self) -> dict:
        return {"backend": self.name}
