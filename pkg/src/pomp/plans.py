"""Concurrent nonlinear plans: steps, orderings, links and bindings."""
from __future__ import annotations

from dataclasses import dataclass, field

from .bindings import BindingStore
from .model import ConcurrencyItem, Literal, Step, Term
from .ordering import OrderingStore

INITIAL = 0
FINAL = -1


def label(step_id: int) -> str:
    if step_id == INITIAL:
        return "A0"
    if step_id == FINAL:
        return "Ainf"
    return f"A{step_id}"


def parse_label(text: str) -> int:
    if text == "A0":
        return INITIAL
    if text in ("Ainf", "A_inf", "Ainfinity"):
        return FINAL
    if text.startswith("A") and text[1:].isdigit():
        return int(text[1:])
    raise ValueError(f"bad step label {text!r}")


@dataclass(frozen=True)
class CausalLink:
    producer: int
    condition: Literal
    consumer: int

    def __str__(self) -> str:
        return f"{label(self.producer)} --{self.condition}--> {label(self.consumer)}"


@dataclass(frozen=True)
class Nonconcurrency:
    """No instance of ``item`` may share a tick with step ``anchor``."""

    item: ConcurrencyItem
    anchor: int


@dataclass
class ConcurrentPlan:
    steps: dict[int, Step]
    orderings: OrderingStore
    bindings: BindingStore
    links: list[CausalLink] = field(default_factory=list)
    nonconc: list[Nonconcurrency] = field(default_factory=list)
    agents: tuple[Term, ...] = ()
    name: str = "plan"

    @property
    def n(self) -> int:
        return len(self.agents)

    def actions(self) -> list[Step]:
        """Non-fictitious steps in id order."""
        return [self.steps[k] for k in sorted(self.steps) if self.steps[k].kind == "action"]

    def resolve(self, term: Term) -> Term:
        return self.bindings._rep(term)

    def ground(self, step: Step) -> Step:
        return Step(step.id, step.schema, tuple(self.resolve(a) for a in step.args),
                    step.kind, step.name)

    def variables(self) -> list[Term]:
        out: list[Term] = []
        for s in self.actions():
            for a in self.ground(s).args:
                if a.startswith("?") and a not in out:
                    out.append(a)
        return out

    def relation(self, a: int, b: int) -> frozenset[str]:
        return self.orderings.relation(a, b)
