"""
Three-valued truth for catalog matching.
Kleene connectives: No dominates conjunction, Yes dominates disjunction.
"""
from enum import Enum
from typing import Iterable


class Truth(str, Enum):
    YES = "Yes"
    NO = "No"
    UNKNOWN = "Unknown"

    @classmethod
    def from_bool(cls, value: bool) -> "Truth":
        return cls.YES if value else cls.NO

    @staticmethod
    def all(args: Iterable["Truth"]) -> "Truth":
        args = list(args)
        if any(a is Truth.NO for a in args):
            return Truth.NO
        if any(a is Truth.UNKNOWN for a in args):
            return Truth.UNKNOWN
        return Truth.YES

    @staticmethod
    def any(args: Iterable["Truth"]) -> "Truth":
        args = list(args)
        if any(a is Truth.YES for a in args):
            return Truth.YES
        if any(a is Truth.UNKNOWN for a in args):
            return Truth.UNKNOWN
        return Truth.NO

    def negate(self) -> "Truth":
        if self is Truth.YES:
            return Truth.NO
        if self is Truth.NO:
            return Truth.YES
        return Truth.UNKNOWN

    def is_yes(self) -> bool:
        return self is Truth.YES

    def is_no(self) -> bool:
        return self is Truth.NO

    def is_unknown(self) -> bool:
        return self is Truth.UNKNOWN
