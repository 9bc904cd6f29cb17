"""
Action formula syntax tree.

Propositional formulas over action letters. A formula is evaluated against
the set of letters played in one turn under the total valuation: letters in
the set are true, every other letter is false.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union


@dataclass(frozen=True)
class Var:
    """Atomic action letter."""

    name: str

    def holds(self, act: frozenset[str]) -> bool:
        return self.name in act

    def atoms(self) -> frozenset[str]:
        return frozenset((self.name,))

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Const:
    """Boolean constant (`true` / `false`)."""

    value: bool

    def holds(self, act: frozenset[str]) -> bool:
        return self.value

    def atoms(self) -> frozenset[str]:
        return frozenset()

    def __str__(self) -> str:
        return "true" if self.value else "false"


@dataclass(frozen=True)
class Not:
    """Negation."""

    operand: Formula

    def holds(self, act: frozenset[str]) -> bool:
        return not self.operand.holds(act)

    def atoms(self) -> frozenset[str]:
        return self.operand.atoms()

    def __str__(self) -> str:
        inner = str(self.operand)
        if isinstance(self.operand, (And, Or)):
            inner = f"({inner})"
        return f"!{inner}"


@dataclass(frozen=True)
class And:
    """Conjunction."""

    left: Formula
    right: Formula

    def holds(self, act: frozenset[str]) -> bool:
        return self.left.holds(act) and self.right.holds(act)

    def atoms(self) -> frozenset[str]:
        return self.left.atoms() | self.right.atoms()

    def __str__(self) -> str:
        left = f"({self.left})" if isinstance(self.left, Or) else str(self.left)
        right = f"({self.right})" if isinstance(self.right, (And, Or)) else str(self.right)
        return f"{left} & {right}"


@dataclass(frozen=True)
class Or:
    """Disjunction."""

    left: Formula
    right: Formula

    def holds(self, act: frozenset[str]) -> bool:
        return self.left.holds(act) or self.right.holds(act)

    def atoms(self) -> frozenset[str]:
        return self.left.atoms() | self.right.atoms()

    def __str__(self) -> str:
        right = f"({self.right})" if isinstance(self.right, Or) else str(self.right)
        return f"{self.left} | {right}"


Formula = Union[Var, Const, Not, And, Or]

TRUE = Const(True)
FALSE = Const(False)
