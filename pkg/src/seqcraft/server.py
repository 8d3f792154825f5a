"""A newline-delimited JSON protocol for driving proof sessions.

One request object per line, one response object per line.  Requests name a
command; every response echoes the request's ``session`` and ``seq`` fields
and carries ``"ok"``.  Failures come back as ``{"ok": false, "error":
<code>, "detail": <text>}`` and never terminate the connection.

Commands:

    {"cmd": "create_session", "logic": <name, .logic path, or inline text>}
        -> {"ok": true, "session": <id>, "logic": <name>,
            "rules": [{"name", "section", "premises", "conclusion"}...]}
    {"cmd": "set_goal", "session": s, "goal": <judgment text>,
     "hyps": [<judgment text>...], "exists": [<var>...]}
        -> {"ok": true, ..., "state": State}
        With "exists", the named goal variables become synthesis
        metavariables straight away.
    {"cmd": "apply_tactic", "session": s, "subgoal": i,
     "tactic": <script-grammar text, e.g. "ruleseq Ax">} -> state
    {"cmd": "undo", "session": s} -> previous state
    {"cmd": "state", "session": s} -> state
    {"cmd": "extract", "session": s} -> statement and witness bindings
    {"cmd": "replay", "session": s} -> {"valid": <bool>, "detail": <str>}

A State is {"subgoals": [{"hyps": [...], "target": ...}], "metas": [...],
"inst": [{"var": ..., "term": ...}], "done": <bool>}; all terms and
judgments are rendered strings in the session logic's syntax.

The server speaks this protocol over a TCP socket (``serve_tcp``) or over
stdin/stdout (``serve_stdio``).  Sessions are independent; requests are
handled one at a time.
"""

from __future__ import annotations

import json
import socketserver
import sys
import threading
from dataclasses import dataclass, field

from .errors import (
    EngineError,
    KernelError,
    ParseError,
    ScriptError,
    SignatureError,
    SortError,
    TacticFailure,
)
from .kernel import GoalState, qed, replay_report, set_goal, undo
from .logic import LogicSpec, parse_logic
from .script import load_logic, parse_tactic_line
from .tactics import meta_exists


def error_code(e: Exception) -> str:
    """A stable machine-readable tag for an engine failure."""
    if isinstance(e, SignatureError):
        return "unknown_rule" if "unknown rule" in str(e) else "signature_error"
    for cls, code in (
        (TacticFailure, "tactic_failed"),
        (ParseError, "parse_error"),
        (ScriptError, "bad_tactic"),
        (SortError, "sort_error"),
        (KernelError, "kernel_error"),
    ):
        if isinstance(e, cls):
            return code
    return "error"


class ProtocolError(EngineError):
    """A request that never reaches the engine: bad shape, bad session."""

    def __init__(self, code: str, detail: str):
        self.code = code
        super().__init__(detail)


def state_to_json(spec: LogicSpec, state: GoalState) -> dict:
    return {
        "subgoals": [
            {
                "hyps": [spec.print_judgment(h) for h in g.hyps],
                "target": spec.print_judgment(g.target),
            }
            for g in state.subgoals
        ],
        "metas": [m.name for m in state.metas],
        "inst": [
            {"var": v.name, "term": spec.print_term(t)}
            for v, t in sorted(state.inst.items(), key=lambda it: it[0].name)
        ],
        "done": state.done,
    }


def rules_to_json(spec: LogicSpec) -> list[dict]:
    return [
        {
            "name": r.name,
            "section": r.section,
            "premises": [spec.print_judgment(p) for p in r.premises],
            "conclusion": spec.print_judgment(r.conclusion),
        }
        for r in spec.rules.values()
    ]


@dataclass
class Session:
    spec: LogicSpec
    history: list[GoalState] = field(default_factory=list)

    @property
    def current(self) -> GoalState:
        if not self.history:
            raise ProtocolError("no_goal", "no goal set")
        return self.history[-1]


class ProtocolEngine:
    """Session store plus the request dispatcher.  Thread-safe."""

    def __init__(self):
        self._sessions: dict[str, Session] = {}
        self._counter = 0
        self._lock = threading.Lock()

    def handle_line(self, line: str) -> str:
        try:
            req = json.loads(line)
            if not isinstance(req, dict):
                raise ValueError("request must be a JSON object")
        except ValueError as e:
            return json.dumps(
                {"ok": False, "error": "bad_request", "detail": str(e)}
            )
        base = {k: req[k] for k in ("session", "seq") if k in req}
        try:
            with self._lock:
                out = self._dispatch(req)
        except ProtocolError as e:
            out = {"ok": False, "error": e.code, "detail": str(e)}
        except EngineError as e:
            out = {"ok": False, "error": error_code(e), "detail": str(e)}
        else:
            out = {"ok": True, **out}
        return json.dumps({**base, **out}, ensure_ascii=False)

    # -- commands -----------------------------------------------------------

    def _dispatch(self, req: dict) -> dict:
        cmd = req.get("cmd")
        if cmd == "create_session":
            return self._create(req)
        handler = {
            "set_goal": self._set_goal,
            "apply_tactic": self._apply,
            "undo": self._undo,
            "state": self._state,
            "extract": self._extract,
            "replay": self._replay,
        }.get(cmd)
        if handler is None:
            raise ProtocolError("unknown_command", f"unknown command {cmd!r}")
        return handler(self._session(req), req)

    def _session(self, req: dict) -> Session:
        sid = req.get("session")
        if sid not in self._sessions:
            raise ProtocolError("unknown_session", f"unknown session {sid!r}")
        return self._sessions[sid]

    def _create(self, req: dict) -> dict:
        text = req.get("logic")
        if not isinstance(text, str):
            raise ProtocolError("bad_request", "create_session needs a logic")
        try:
            spec = parse_logic(text) if "\n" in text else load_logic(text)
        except ScriptError as e:
            raise ProtocolError("unknown_logic", str(e)) from e
        self._counter += 1
        sid = f"s{self._counter}"
        self._sessions[sid] = Session(spec)
        return {"session": sid, "logic": spec.name, "rules": rules_to_json(spec)}

    def _set_goal(self, ses: Session, req: dict) -> dict:
        goal = req.get("goal")
        if not isinstance(goal, str):
            raise ProtocolError("bad_request", "set_goal needs a goal string")
        hyps = [ses.spec.parse_goal(h) for h in req.get("hyps", [])]
        witnesses = tuple(str(w) for w in req.get("exists", []))
        state = set_goal(ses.spec, hyps, ses.spec.parse_goal(goal), witnesses=witnesses)
        if witnesses:
            state = meta_exists(witnesses)(state, 0)
        ses.history = [state]
        return {"state": state_to_json(ses.spec, state)}

    def _apply(self, ses: Session, req: dict) -> dict:
        tactic = req.get("tactic")
        if not isinstance(tactic, str):
            raise ProtocolError("bad_request", "apply_tactic needs a tactic line")
        subgoal = req.get("subgoal", 0)
        if not isinstance(subgoal, int):
            raise ProtocolError("bad_request", "subgoal must be an integer")
        state = parse_tactic_line(ses.spec, tactic.strip())(ses.current, subgoal)
        ses.history.append(state)
        return {"state": state_to_json(ses.spec, state)}

    def _undo(self, ses: Session, req: dict) -> dict:
        ses.current
        if len(ses.history) == 1:
            raise ProtocolError("nothing_to_undo", "nothing to undo")
        ses.history = undo(ses.history)
        return {"state": state_to_json(ses.spec, ses.current)}

    def _state(self, ses: Session, req: dict) -> dict:
        return {"state": state_to_json(ses.spec, ses.current)}

    def _extract(self, ses: Session, req: dict) -> dict:
        thm = qed(ses.current)
        return {
            "statement": ses.spec.print_judgment(thm.statement),
            "witnesses": [
                {"var": v.name, "term": ses.spec.print_term(t)}
                for v, t in thm.witness_bindings
            ],
        }

    def _replay(self, ses: Session, req: dict) -> dict:
        thm = qed(ses.current)
        valid, detail = replay_report(ses.spec, thm)
        return {"valid": valid, "detail": detail}


def serve_stdio(stdin=None, stdout=None) -> None:
    """Serve until EOF on the input stream."""
    engine = ProtocolEngine()
    stdin = stdin if stdin is not None else sys.stdin
    stdout = stdout if stdout is not None else sys.stdout
    for line in stdin:
        if not line.strip():
            continue
        stdout.write(engine.handle_line(line) + "\n")
        stdout.flush()


class _Handler(socketserver.StreamRequestHandler):
    def handle(self):
        for raw in self.rfile:
            line = raw.decode("utf-8", errors="replace")
            if not line.strip():
                continue
            out = self.server.engine.handle_line(line) + "\n"
            self.wfile.write(out.encode("utf-8"))
            self.wfile.flush()


class _Server(socketserver.ThreadingTCPServer):
    allow_reuse_address = True
    daemon_threads = True


def make_tcp_server(port: int, host: str = "127.0.0.1") -> _Server:
    server = _Server((host, port), _Handler)
    server.engine = ProtocolEngine()
    return server


def serve_tcp(port: int, host: str = "127.0.0.1") -> None:
    with make_tcp_server(port, host) as server:
        server.serve_forever()
