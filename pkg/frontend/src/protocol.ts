/**
 * Types for the newline-delimited JSON proof protocol.
 *
 * Every request carries a client-chosen `seq`; the matching response echoes
 * `seq` and `session`. Failures arrive as `{ok: false, error, detail}` and
 * never close the connection. All term and judgment fields are strings
 * rendered by the server; the client never builds or rewrites them.
 */

export interface SubgoalView {
  hyps: string[];
  target: string;
}

export interface ProtocolState {
  subgoals: SubgoalView[];
  metas: string[];
  inst: { var: string; term: string }[];
  done: boolean;
}

export interface RuleInfo {
  name: string;
  section: string;
  premises: string[];
  conclusion: string;
}

export interface WitnessBinding {
  var: string;
  term: string;
}

export type Request =
  | { cmd: "create_session"; logic: string }
  | { cmd: "set_goal"; session: string; goal: string; exists?: string[]; hyps?: string[] }
  | { cmd: "apply_tactic"; session: string; subgoal: number; tactic: string }
  | { cmd: "undo"; session: string }
  | { cmd: "state"; session: string }
  | { cmd: "extract"; session: string }
  | { cmd: "replay"; session: string };

interface ReplyBase {
  session?: string;
  seq?: number;
}

export interface ErrorReply extends ReplyBase {
  ok: false;
  error: string;
  detail: string;
}

export interface CreateSessionReply extends ReplyBase {
  ok: true;
  session: string;
  logic: string;
  rules: RuleInfo[];
}

export interface StateReply extends ReplyBase {
  ok: true;
  state: ProtocolState;
}

export interface ExtractReply extends ReplyBase {
  ok: true;
  statement: string;
  witnesses: WitnessBinding[];
}

export interface ReplayReply extends ReplyBase {
  ok: true;
  valid: boolean;
  detail: string;
}

export type Reply =
  | ErrorReply
  | CreateSessionReply
  | StateReply
  | ExtractReply
  | ReplayReply;

export function isError(reply: Reply): reply is ErrorReply {
  return reply.ok === false;
}

export class ProtocolFailure extends Error {
  readonly code: string;
  readonly detail: string;

  constructor(reply: ErrorReply) {
    super(`${reply.error}: ${reply.detail}`);
    this.code = reply.error;
    this.detail = reply.detail;
  }
}
