from __future__ import annotations

import itertools

import pytest

from ccideas.agents import (
    ACQUAINTANCE_EDGES,
    AcquaintanceViolation,
    AgentDescriptor,
    AgentKind,
    MailboxRouter,
    Performative,
    UnknownAgent,
    acquaintance_allows,
)

CORE = {AgentKind.ORA, AgentKind.SPA, AgentKind.CTEA, AgentKind.IMA}
SEMANTIC = {AgentKind.SMKA, AgentKind.WSDA, AgentKind.CSA}


class TestAcquaintanceGraph:
    def test_exactly_twelve_edges(self):
        assert len(ACQUAINTANCE_EDGES) == 12

    def test_core_kinds_fully_connected(self):
        for a, b in itertools.combinations(CORE, 2):
            assert acquaintance_allows(a, b)
            assert acquaintance_allows(b, a)

    def test_semantic_agents_reach_only_ctea_and_spa(self):
        for s in SEMANTIC:
            assert acquaintance_allows(AgentKind.CTEA, s)
            assert acquaintance_allows(AgentKind.SPA, s)
            assert not acquaintance_allows(AgentKind.ORA, s)
            assert not acquaintance_allows(AgentKind.IMA, s)

    def test_semantic_agents_not_connected_to_each_other(self):
        for a, b in itertools.combinations(SEMANTIC, 2):
            assert not acquaintance_allows(a, b)

    def test_same_kind_never_connected(self):
        for kind in AgentKind:
            assert not acquaintance_allows(kind, kind)

    def test_edge_enumeration_matches_rule(self):
        expected = {frozenset(p) for p in itertools.combinations(CORE, 2)}
        expected |= {frozenset({a, s})
                     for a in (AgentKind.CTEA, AgentKind.SPA) for s in SEMANTIC}
        assert ACQUAINTANCE_EDGES == frozenset(expected)


class TestAgentDescriptor:
    def test_spa_binds_actor_and_team(self):
        AgentDescriptor("spa_1", AgentKind.SPA, bound_actor="a1", bound_team="t1")
        with pytest.raises(ValueError):
            AgentDescriptor("spa_1", AgentKind.SPA, bound_actor="a1")

    def test_staff_agents_bind_actor_only(self):
        AgentDescriptor("ora_1", AgentKind.ORA, bound_actor="a1")
        with pytest.raises(ValueError):
            AgentDescriptor("ora_1", AgentKind.ORA)
        with pytest.raises(ValueError):
            AgentDescriptor("ima_1", AgentKind.IMA, bound_actor="a1", bound_team="t1")

    def test_semantic_agents_bind_nothing(self):
        AgentDescriptor("smka_1", AgentKind.SMKA)
        with pytest.raises(ValueError):
            AgentDescriptor("csa_1", AgentKind.CSA, bound_actor="a1")


@pytest.fixture
def router() -> MailboxRouter:
    r = MailboxRouter()
    r.add(AgentDescriptor("ora_1", AgentKind.ORA, bound_actor="org"))
    r.add(AgentDescriptor("spa_1", AgentKind.SPA, bound_actor="a1", bound_team="t1"))
    r.add(AgentDescriptor("spa_2", AgentKind.SPA, bound_actor="a2", bound_team="t1"))
    r.add(AgentDescriptor("ima_1", AgentKind.IMA, bound_actor="m1"))
    r.add(AgentDescriptor("csa_1", AgentKind.CSA))
    r.add(AgentDescriptor("wsda_1", AgentKind.WSDA))
    return r


class TestMailboxRouter:
    def test_spa_to_csa_delivered(self, router):
        message = router.send("spa_1", "csa_1", Performative.REQUEST, {"cards": []})
        assert router.mailboxes["csa_1"] == [message]

    def test_ima_to_wsda_rejected(self, router):
        with pytest.raises(AcquaintanceViolation) as err:
            router.send("ima_1", "wsda_1", Performative.REQUEST)
        assert err.value.detail["sender"] == "IMA"
        assert router.mailboxes["wsda_1"] == []

    def test_ora_to_spa_delivered(self, router):
        router.send("ora_1", "spa_1", Performative.INFORM, {"assignment": "t1"})
        assert len(router.mailboxes["spa_1"]) == 1

    def test_spa_to_spa_rejected(self, router):
        with pytest.raises(AcquaintanceViolation):
            router.send("spa_1", "spa_2", Performative.INFORM)

    def test_unknown_agent(self, router):
        with pytest.raises(UnknownAgent):
            router.send("spa_1", "ghost", Performative.INFORM)

    def test_seq_monotone_and_order_preserved(self, router):
        first = router.send("ora_1", "spa_1", Performative.INFORM, {"n": 1})
        second = router.send("ora_1", "spa_1", Performative.INFORM, {"n": 2})
        third = router.send("spa_1", "ora_1", Performative.INFORM, {"n": 3})
        assert first.seq < second.seq < third.seq
        inbox = router.mailboxes["spa_1"]
        assert [m.payload["n"] for m in inbox] == [1, 2]

    def test_duplicate_agent_id_rejected(self, router):
        with pytest.raises(ValueError):
            router.add(AgentDescriptor("ora_1", AgentKind.ORA, bound_actor="x"))

    def test_delivered_audit_trail_covers_all_messages(self, router):
        router.send("ora_1", "spa_1", Performative.INFORM)
        router.send("spa_1", "csa_1", Performative.REQUEST)
        kinds = [(router.agents[m.from_agent].kind, router.agents[m.to_agent].kind)
                 for m in router.delivered]
        for sender, recipient in kinds:
            assert acquaintance_allows(sender, recipient)
