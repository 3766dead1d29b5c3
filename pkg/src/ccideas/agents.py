"""Agent kinds, acquaintance graph and mailbox message passing.

Seven agent kinds make up the runtime: the four workshop-facing kinds
(organizer ORA, solver participant SPA, creative-technological expert
CTEA, industrial manager IMA) plus the three computation agents that
rank idea cards (semantic model knowledge SMKA, width-semantic-distance
WSDA, comparative similarity CSA).

The acquaintance graph fixes who may talk to whom: the four core kinds
are fully connected among each other, and only CTEA and SPA reach the
three semantic agents. Any other delivery is an acquaintance violation.
Each agent owns its mailbox; per-(sender, recipient) delivery order is
preserved and sequence numbers increase monotonically.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import EngineError


class AgentKind(Enum):
    ORA = "ORA"
    SPA = "SPA"
    CTEA = "CTEA"
    IMA = "IMA"
    SMKA = "SMKA"
    WSDA = "WSDA"
    CSA = "CSA"


class Performative(Enum):
    REQUEST = "Request"
    INFORM = "Inform"
    PROPOSE = "Propose"
    SUBMIT = "Submit"
    RESULT = "Result"


_CORE = (AgentKind.CTEA, AgentKind.ORA, AgentKind.SPA, AgentKind.IMA)
_SEMANTIC = (AgentKind.SMKA, AgentKind.WSDA, AgentKind.CSA)

#: Symmetric edge set: unordered pairs of distinct kinds allowed to talk.
ACQUAINTANCE_EDGES: frozenset[frozenset[AgentKind]] = frozenset(
    {frozenset({a, b}) for i, a in enumerate(_CORE) for b in _CORE[i + 1:]}
    | {frozenset({a, s}) for a in (AgentKind.CTEA, AgentKind.SPA) for s in _SEMANTIC}
)


def acquaintance_allows(sender: AgentKind, recipient: AgentKind) -> bool:
    return sender is not recipient and frozenset({sender, recipient}) in ACQUAINTANCE_EDGES


class AcquaintanceViolation(EngineError):
    def __init__(self, sender: AgentKind, recipient: AgentKind):
        super().__init__(
            f"no acquaintance edge between {sender.value} and {recipient.value}",
            sender=sender.value, recipient=recipient.value,
        )


class UnknownAgent(EngineError):
    def __init__(self, agent_id: str):
        super().__init__(f"unknown agent {agent_id!r}", agent=agent_id)


@dataclass(frozen=True)
class AgentDescriptor:
    """Runtime identity of one agent.

    SPA binds an actor and a team; ORA/CTEA/IMA bind an actor; the
    semantic agents are pure computation and bind nothing.
    """

    id: str
    kind: AgentKind
    bound_actor: str | None = None
    bound_team: str | None = None

    def __post_init__(self):
        if self.kind is AgentKind.SPA:
            if not (self.bound_actor and self.bound_team):
                raise ValueError(f"SPA {self.id} must bind an actor and a team")
        elif self.kind in (AgentKind.ORA, AgentKind.CTEA, AgentKind.IMA):
            if not self.bound_actor or self.bound_team:
                raise ValueError(f"{self.kind.value} {self.id} must bind an actor only")
        elif self.bound_actor or self.bound_team:
            raise ValueError(f"{self.kind.value} {self.id} binds nothing")


@dataclass(frozen=True)
class AgentMessage:
    from_agent: str
    to_agent: str
    performative: Performative
    payload: dict = None  # type: ignore[assignment]
    seq: int = 0


class MailboxRouter:
    """Registry of agents plus their mailboxes.

    Mutations are expected to come from one owner (the engine command
    loop); ``delivered`` keeps the full audit trail in delivery order.
    """

    def __init__(self):
        self.agents: dict[str, AgentDescriptor] = {}
        self.mailboxes: dict[str, list[AgentMessage]] = {}
        self.delivered: list[AgentMessage] = []
        self._seq = 0

    def add(self, descriptor: AgentDescriptor) -> AgentDescriptor:
        if descriptor.id in self.agents:
            raise ValueError(f"duplicate agent id {descriptor.id}")
        self.agents[descriptor.id] = descriptor
        self.mailboxes[descriptor.id] = []
        return descriptor

    def agent(self, agent_id: str) -> AgentDescriptor:
        try:
            return self.agents[agent_id]
        except KeyError:
            raise UnknownAgent(agent_id) from None

    def of_kind(self, kind: AgentKind) -> list[AgentDescriptor]:
        return [a for a in self.agents.values() if a.kind is kind]

    def send(self, from_agent: str, to_agent: str, performative: Performative,
             payload: dict | None = None) -> AgentMessage:
        """Deliver a message, enforcing the acquaintance graph."""
        sender = self.agent(from_agent)
        recipient = self.agent(to_agent)
        if not acquaintance_allows(sender.kind, recipient.kind):
            raise AcquaintanceViolation(sender.kind, recipient.kind)
        self._seq += 1
        message = AgentMessage(from_agent, to_agent, performative,
                               payload or {}, seq=self._seq)
        self.mailboxes[to_agent].append(message)
        self.delivered.append(message)
        return message
