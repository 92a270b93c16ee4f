"""
Helper Utilities Module

This module provides small helpers shared by the grmbot modules: enumeration
budgets read from the environment, and the hex packing used to print truth
tables.
"""
import os

from grmbot.utils.errors import BudgetExceeded, SizeBudgetExceeded


class Budget:
    """
    Enumeration and memory budgets.

    The codeword budget bounds exhaustive enumerations and oracle searches;
    the points budget bounds truth-table sizes. Both read their defaults from
    the environment at call time so a test or a CLI run can override them.
    """

    DEFAULT_CODEWORDS = 2**31
    DEFAULT_POINTS = 2**24

    @staticmethod
    def _from_env(name: str, default: int) -> int:
        value = os.getenv(name)
        if value is None or value.strip() == "":
            return default
        try:
            budget = int(value)
        except ValueError:
            raise ValueError(f"{name} must be an integer, got '{value}'")
        if budget <= 0:
            raise ValueError(f"{name} must be positive, got {budget}")
        return budget

    @staticmethod
    def codewords(override: int = None) -> int:
        if override is not None:
            return int(override)
        return Budget._from_env("GRMW_BUDGET", Budget.DEFAULT_CODEWORDS)

    @staticmethod
    def points(override: int = None) -> int:
        if override is not None:
            return int(override)
        return Budget._from_env("GRMW_POINTS_BUDGET", Budget.DEFAULT_POINTS)

    @staticmethod
    def check_codewords(count: int, override: int = None, what: str = "enumeration") -> None:
        """
        Reject a search whose size exceeds the codeword budget.

        Args:
            count: Number of items the search would visit.
            override: Explicit budget, otherwise GRMW_BUDGET or the default.
            what: Label used in the error message.

        Raises:
            BudgetExceeded: If count is larger than the budget.
        """
        limit = Budget.codewords(override)
        if count > limit:
            raise BudgetExceeded(f"{what} needs {count} items, budget is {limit}")

    @staticmethod
    def check_points(count: int, override: int = None) -> None:
        limit = Budget.points(override)
        if count > limit:
            raise SizeBudgetExceeded(
                f"truth table needs {count} points, budget is {limit}"
            )


class Hex:
    """Fixed-width hexadecimal packing of element codes."""

    @staticmethod
    def width(q: int) -> int:
        return len(format(q - 1, "x"))

    @staticmethod
    def pack(values, q: int) -> str:
        width = Hex.width(q)
        return "".join(format(int(v), f"0{width}x") for v in values)

    @staticmethod
    def unpack(text: str, q: int) -> list:
        width = Hex.width(q)
        if len(text) % width:
            raise ValueError(f"hex string length {len(text)} is not a multiple of {width}")
        return [int(text[i:i + width], 16) for i in range(0, len(text), width)]
