"""Interactive design sessions: decisions, consequences, constraints, advice.

A session's derived state (selected, params, pending, violations, advice,
state-hash) is a pure function of the knowledge base and the decision log;
every decision triggers a full recomputation, so deselects have no
incremental shortcuts observable in behavior.  Required concepts are never
auto-selected: they surface in `pending` and take an explicit
accept-consequence decision, keeping the designer in the loop.
"""

import hashlib
import json
import re
from collections import deque
from dataclasses import dataclass

from . import facets
from .errors import (ParseError, StaleSequence, UnknownConcept, UnknownParamValue,
                     UnknownStartSymbol, UnknownTokenSlot, UnresolvedDesign)
from .kb import advice_condition_holds, kb_hash

ACTIONS = ("select", "deselect", "set-param", "accept-consequence", "rename-token")


@dataclass(frozen=True)
class Decision:
    seq: int
    action: str
    concept: str
    param: str = None
    value: str = None
    slot: str = None
    new: str = None

    def to_json(self):
        out = {"seq": self.seq, "action": self.action, "concept": self.concept}
        if self.action == "set-param":
            out["param"] = self.param
            out["value"] = self.value
        if self.action == "rename-token":
            out["slot"] = self.slot
            out["new"] = self.new
        return out


def decision_from_json(obj):
    if not isinstance(obj, dict) or obj.get("action") not in ACTIONS:
        raise ValueError("bad decision record %r" % (obj,))
    return Decision(seq=int(obj["seq"]), action=obj["action"], concept=obj["concept"],
                    param=obj.get("param"), value=obj.get("value"),
                    slot=obj.get("slot"), new=obj.get("new"))


def decisions_to_json(log):
    """Canonical decision-log text (same canonical form the state hash uses)."""
    return json.dumps([d.to_json() for d in log], sort_keys=True, separators=(",", ":"))


def decisions_from_json(text):
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError("not valid JSON: %s" % e.msg, line=e.lineno, column=e.colno) from e
    return [decision_from_json(d) for d in raw]


@dataclass(frozen=True)
class ConstraintViolation:
    kind: str              # conflict | unsatisfied-hole | unknown-id
    members: tuple
    message: str

    def key(self):
        return (self.kind, self.members, self.message)

    def to_json(self):
        return {"kind": self.kind, "members": list(self.members), "message": self.message}


@dataclass(frozen=True)
class DesignSession:
    kb: object
    kb_ref: str
    log: tuple
    selected: frozenset
    selection_order: tuple
    params: dict           # (concept, param) -> value
    renames: dict          # (concept, slot) -> new spelling
    pending: tuple
    violations: tuple
    advice_active: tuple
    state_hash: str


@dataclass(frozen=True)
class SessionUpdate:
    session: DesignSession
    newly_pending: tuple
    newly_violated: tuple
    newly_advised: tuple
    cleared: dict

    def to_json(self):
        return {"newly-pending": list(self.newly_pending),
                "newly-violated": [v.to_json() for v in self.newly_violated],
                "newly-advised": list(self.newly_advised),
                "cleared": self.cleared}


@dataclass(frozen=True)
class ResolvedBlock:
    concept_id: str
    params: tuple          # ((name, value), ...)
    syntax: tuple
    formatting: tuple
    typing: tuple
    evaluation: tuple


@dataclass(frozen=True)
class LanguageDesign:
    kb_ref: str
    log: tuple
    name: str
    start: str
    blocks: tuple          # ResolvedBlock, sorted by concept id
    selected_ids: tuple    # every selected concept, attributes included


def open_session(kb):
    return _derive(kb, ())


def apply_decision(session, decision):
    """Validate and apply one decision; returns the new session plus a delta."""
    _check_decision(session, decision)
    new = _derive(session.kb, session.log + (decision,), kb_ref=session.kb_ref)
    old_vio = {v.key() for v in session.violations}
    new_vio = {v.key() for v in new.violations}
    return SessionUpdate(
        session=new,
        newly_pending=tuple(p for p in new.pending if p not in session.pending),
        newly_violated=tuple(v for v in new.violations if v.key() not in old_vio),
        newly_advised=tuple(a for a in new.advice_active if a not in session.advice_active),
        cleared={
            "pending": [p for p in session.pending if p not in new.pending],
            "violations": [v.to_json() for v in session.violations if v.key() not in new_vio],
            "advice": [a for a in session.advice_active if a not in new.advice_active],
        })


def replay(kb, log):
    """Fold apply_decision over an opened session; errors carry the failing seq."""
    session = open_session(kb)
    for d in log:
        try:
            session = apply_decision(session, d).session
        except Exception as e:
            if hasattr(e, "details"):
                e.details["seq"] = d.seq
            raise
    return session


@dataclass(frozen=True)
class DiagnosticsReport:
    violations: tuple
    pending: tuple
    advice: tuple          # (id, message, severity)
    selected_by_kind: dict

    @property
    def ok(self):
        return not self.violations

    def to_json(self):
        return {"violations": [v.to_json() for v in self.violations],
                "pending": list(self.pending),
                "advice": [{"id": i, "message": m, "severity": s} for i, m, s in self.advice],
                "selected": self.selected_by_kind}


def diagnostics(session):
    kb = session.kb
    by_kind = {}
    for cid in sorted(session.selected):
        by_kind.setdefault(kb.concepts[cid].kind, []).append(cid)
    advice = tuple((a.id, a.message, a.severity)
                   for a in kb.advice if a.id in session.advice_active)
    return DiagnosticsReport(session.violations, session.pending, advice, by_kind)


def finalize(session, name, start):
    """Instantiate all selected building blocks into a LanguageDesign.

    Requires no violations and no pending consequences; hole coverage is
    checked against the selected set alone, since nothing pending will be
    part of the design.
    """
    kb = session.kb
    final_violations = list(_conflict_violations(kb, session.selected))
    final_violations += _hole_violations(kb, session.selected, session.selected)
    if final_violations or session.pending:
        raise UnresolvedDesign([v.to_json() for v in final_violations], session.pending)
    blocks = []
    defined = set()
    for cid in sorted(session.selected):
        concept = kb.concepts[cid]
        if concept.kind != "building-block":
            continue
        params = concept.default_params()
        for (pcid, pname), value in session.params.items():
            if pcid == cid:
                params[pname] = value
        renames = {slot: new for (rcid, slot), new in session.renames.items() if rcid == cid}
        resolved = {}
        for kind, items in (("syntax", concept.facets.syntax),
                            ("formatting", concept.facets.formatting),
                            ("typing", concept.facets.typing),
                            ("evaluation", concept.facets.evaluation)):
            texts = []
            for t in items:
                if not t.active(params):
                    continue
                texts.append(_substitute(t.text, params, renames))
            resolved[kind] = tuple(texts)
        blocks.append(ResolvedBlock(cid, tuple(sorted(params.items())),
                                    resolved["syntax"], resolved["formatting"],
                                    resolved["typing"], resolved["evaluation"]))
        for text in resolved["syntax"]:
            defined.add(facets.parse_production(text).lhs)
    if start not in defined:
        raise UnknownStartSymbol(start, defined)
    return LanguageDesign(session.kb_ref, session.log, name, start, tuple(blocks),
                          tuple(sorted(session.selected)))


# --- internals ---------------------------------------------------------------

def _check_decision(session, d):
    expected = len(session.log) + 1
    if d.seq != expected:
        raise StaleSequence(d.seq, expected)
    if d.action not in ACTIONS:
        raise ValueError("unknown action %r" % d.action)
    concept = session.kb.concepts.get(d.concept)
    if concept is None:
        raise UnknownConcept(d.concept)
    if d.action == "set-param":
        decl = concept.parameter(d.param)
        if decl is None or d.value not in decl.values:
            raise UnknownParamValue(d.concept, d.param, d.value)
    if d.action == "rename-token":
        if not d.new or re.search(r"\s", d.new):
            raise UnknownTokenSlot(d.concept, d.new)
        if concept.facets is None or not _has_literal(concept, d.slot):
            raise UnknownTokenSlot(d.concept, d.slot)


def _has_literal(concept, slot):
    needle = '"%s"' % slot
    for t in list(concept.facets.syntax) + list(concept.facets.formatting):
        if needle in t.text:
            return True
    return False


def _derive(kb, log, kb_ref=None):
    """Derived state is a pure function of (kb, log)."""
    order, params, renames = [], {}, {}
    for d in log:
        if d.action in ("select", "accept-consequence"):
            if d.concept not in order:
                order.append(d.concept)
        elif d.action == "deselect":
            if d.concept in order:
                order.remove(d.concept)
            params = {k: v for k, v in params.items() if k[0] != d.concept}
            renames = {k: v for k, v in renames.items() if k[0] != d.concept}
        elif d.action == "set-param":
            params[(d.concept, d.param)] = d.value
        elif d.action == "rename-token":
            renames[(d.concept, d.slot)] = d.new
    selected = frozenset(order)
    pending = _pending(kb, order, selected)
    violations = list(_conflict_violations(kb, selected))
    violations += _hole_violations(kb, selected, selected | set(pending))
    advice = tuple(a.id for a in kb.advice if advice_condition_holds(a.condition, selected))
    state_hash = _state_hash(selected, params, pending, violations)
    return DesignSession(kb=kb, kb_ref=kb_ref or kb_hash(kb), log=tuple(log),
                         selected=selected, selection_order=tuple(order),
                         params=dict(params), renames=dict(renames),
                         pending=tuple(pending), violations=tuple(violations),
                         advice_active=advice, state_hash=state_hash)


def _pending(kb, order, selected):
    """Requires-closure minus selected, breadth-first from the selection order,
    ties broken lexicographically."""
    requires = kb.requires()
    visited = set(selected)
    queue = deque(order)
    pending = []
    while queue:
        cid = queue.popleft()
        for req in requires.get(cid, ()):
            if req not in visited:
                visited.add(req)
                queue.append(req)
                pending.append(req)
    return pending


def _conflict_violations(kb, selected):
    for pair in sorted(kb.conflict_pairs(), key=sorted):
        members = tuple(sorted(pair))
        if len(members) == 2 and members[0] in selected and members[1] in selected:
            yield ConstraintViolation("conflict", members,
                                      "%s conflicts with %s" % members)


def _hole_violations(kb, selected, coverage_set):
    """Holes of selected building blocks not defined by any concept in coverage_set."""
    covered = set()
    for cid in coverage_set:
        concept = kb.concepts.get(cid)
        if concept is not None and concept.kind == "building-block":
            covered |= kb.defined_nonterminals(cid)
    out = []
    for cid in sorted(selected):
        concept = kb.concepts[cid]
        if concept.kind != "building-block":
            continue
        for hole in concept.facets.holes:
            if hole in covered:
                continue
            candidates = [c for c in kb.nonterminal_definers(hole) if c != cid]
            out.append(ConstraintViolation(
                "unsatisfied-hole", tuple([cid] + candidates),
                "%s needs a definition of %s%s" % (
                    cid, hole,
                    " (could come from: %s)" % ", ".join(candidates) if candidates else "")))
    return out


def _state_hash(selected, params, pending, violations):
    state = {
        "selected": sorted(selected),
        "params": sorted([cid, p, v] for (cid, p), v in params.items()),
        "pending": list(pending),
        "violations": sorted((v.to_json() for v in violations),
                             key=lambda v: (v["kind"], v["members"], v["message"])),
    }
    blob = json.dumps(state, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


def _substitute(text, params, renames):
    for name in sorted(params, key=len, reverse=True):
        text = text.replace("$" + name, params[name])
    for slot, new in sorted(renames.items()):
        text = text.replace('"%s"' % slot, '"%s"' % new)
    leftover = re.search(r"\$([a-z][a-z0-9-]*)", text)
    if leftover and leftover.group(1) != "self":
        raise ValueError("template still contains $%s after substitution" % leftover.group(1))
    return text
