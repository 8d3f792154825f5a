"""Command line entry points.

    seqcraft prove <logic> <script>       run a proof script
    seqcraft repl <logic>                 interactive proving
    seqcraft serve --port N [--stdio]     JSON protocol service

Exit codes: 0 success, 1 a proof step or replay failed, 2 parse or usage
errors.  ``prove`` prints every intermediate goal state, replays each
finished theorem, and reports witnesses for ``exists`` goals.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import EngineError, KernelError, ScriptError, TacticFailure
from .kernel import GoalState, qed, replay_report, set_goal, undo
from .logic import LogicSpec
from .render import render_state, render_theorem, render_witnesses
from .script import load_logic, parse_tactic_line, run_script_file
from .server import serve_stdio, serve_tcp
from .tactics import meta_exists

_REPL_HELP = """commands:
  g <judgment>         set the goal
  exists <var> ...     restate the goal with synthesis variables
  e <tactic line>      apply a tactic to subgoal 0 (e.g. e ruleseq Ax)
  b                    undo the last step
  p                    print the current state
  top_thm              close the proof and print the theorem
  quit                 leave"""


def _cmd_prove(args: argparse.Namespace) -> int:
    try:
        spec = load_logic(args.logic)
    except ScriptError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    path = Path(args.script)
    if not path.exists():
        print(f"error: no such script {args.script!r}", file=sys.stderr)
        return 2

    current = None

    def watch(name: str, state: GoalState) -> None:
        nonlocal current
        if name != current:
            current = name
            print(f"theorem {name}")
        print(render_state(spec, state))

    try:
        result = run_script_file(path, spec, watch)
    except ScriptError as e:
        print(f"error: {e}", file=sys.stderr)
        proof_failure = isinstance(e.__cause__, (TacticFailure, KernelError))
        return 1 if proof_failure else 2
    status = 0
    for name, thm in result.theorems:
        ok, why = replay_report(spec, thm)
        if not ok:
            print(f"error: theorem {name} failed replay: {why}", file=sys.stderr)
            status = 1
            continue
        print(f"proved {name}: {spec.print_judgment(thm.statement)}")
        for line in render_witnesses(spec, thm):
            print(f"  {line}")
    return status


def repl(spec: LogicSpec, stdin=None, stdout=None) -> int:
    """Line-at-a-time proving; states render after every successful step."""
    stdin = stdin if stdin is not None else sys.stdin
    stdout = stdout if stdout is not None else sys.stdout

    def say(text: str) -> None:
        print(text, file=stdout)

    say(f"logic {spec.name}; type 'help' for commands")
    history: list[GoalState] = []

    def top() -> GoalState:
        if not history:
            raise KernelError("no goal set")
        return history[-1]

    for rawline in stdin:
        line = rawline.strip()
        if not line:
            continue
        head = line.split()[0]
        try:
            if head == "quit":
                break
            if head == "help":
                say(_REPL_HELP)
            elif head == "g":
                state = set_goal(spec, [], spec.parse_goal(line[2:].strip()))
                history = [state]
                say(render_state(spec, state))
            elif head == "exists":
                if top().trace:
                    raise KernelError("exists must come right after setting the goal")
                names = tuple(line.split()[1:])
                state = set_goal(spec, [], top().original, witnesses=names)
                state = meta_exists(names)(state, 0)
                history = [state]
                say(render_state(spec, state))
            elif head == "e":
                parts = line.split(None, 1)
                if len(parts) < 2:
                    raise ScriptError("e needs a tactic line, e.g. 'e ruleseq Ax'")
                state = parse_tactic_line(spec, parts[1].strip())(top(), 0)
                history.append(state)
                say(render_state(spec, state))
            elif head == "b":
                top()
                history = undo(history)
                say(render_state(spec, history[-1]) if history else "no goal")
            elif head == "p":
                say(render_state(spec, top()))
            elif head == "top_thm":
                say(render_theorem(spec, qed(top())))
            else:
                raise ScriptError(f"unknown command {head!r}, try 'help'")
        except EngineError as e:
            say(f"error: {e}")
    return 0


def _cmd_repl(args: argparse.Namespace) -> int:
    try:
        spec = load_logic(args.logic)
    except ScriptError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    return repl(spec)


def _cmd_serve(args: argparse.Namespace) -> int:
    if args.stdio:
        serve_stdio()
    else:
        serve_tcp(args.port)
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="seqcraft",
        description="Prove sequents in user-declared logics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("prove", help="run a proof script and print its theorems")
    p.add_argument("logic", help="shipped logic name or .logic path")
    p.add_argument("script", help="path to a .proof script")
    p.set_defaults(fn=_cmd_prove)

    p = sub.add_parser("repl", help="prove interactively")
    p.add_argument("logic", help="shipped logic name or .logic path")
    p.set_defaults(fn=_cmd_repl)

    p = sub.add_parser("serve", help="speak the JSON protocol")
    how = p.add_mutually_exclusive_group(required=True)
    how.add_argument("--port", type=int, help="listen on a local TCP port")
    how.add_argument("--stdio", action="store_true", help="serve one client on stdin/stdout")
    p.set_defaults(fn=_cmd_serve)

    args = parser.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
