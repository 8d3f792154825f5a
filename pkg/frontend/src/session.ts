/**
 * A proof session client: serialized requests, a local history mirror.
 *
 * The client keeps the list of states the server has shown it. After every
 * response the mirror is checked against the server's answer, so a drifting
 * client fails loudly instead of displaying stale goals. All proof content
 * stays server-rendered strings.
 */

import {
  CreateSessionReply,
  ExtractReply,
  ProtocolFailure,
  ProtocolState,
  ReplayReply,
  Reply,
  Request,
  RuleInfo,
  StateReply,
  isError,
} from "./protocol.js";
import { LineTransport } from "./transport.js";

interface Waiter {
  resolve: (reply: Reply) => void;
  reject: (err: Error) => void;
}

export class ProofClient {
  private seq = 0;
  private closed = false;
  private readonly waiting: Waiter[] = [];
  private queue: Promise<unknown> = Promise.resolve();

  session = "";
  logic = "";
  rules: RuleInfo[] = [];
  history: ProtocolState[] = [];

  constructor(private readonly transport: LineTransport) {
    transport.onLine((line) => {
      const waiter = this.waiting.shift();
      if (!waiter) return;
      try {
        waiter.resolve(JSON.parse(line) as Reply);
      } catch (err) {
        waiter.reject(err instanceof Error ? err : new Error(String(err)));
      }
    });
    transport.onClose(() => {
      this.closed = true;
      for (const waiter of this.waiting.splice(0)) {
        waiter.reject(new Error("connection closed"));
      }
    });
  }

  get current(): ProtocolState | null {
    return this.history.length > 0 ? this.history[this.history.length - 1]! : null;
  }

  /** One request on the wire at a time; replies resolve in send order. */
  request(req: Request): Promise<Reply> {
    const run = this.queue.then(
      () =>
        new Promise<Reply>((resolve, reject) => {
          if (this.closed) {
            reject(new Error("connection closed"));
            return;
          }
          this.waiting.push({ resolve, reject });
          this.transport.send(JSON.stringify({ ...req, seq: this.seq++ }));
        }),
    );
    this.queue = run.catch(() => undefined);
    return run;
  }

  private async expectOk<T extends Reply>(req: Request): Promise<T> {
    const reply = await this.request(req);
    if (isError(reply)) throw new ProtocolFailure(reply);
    return reply as T;
  }

  async createSession(logic: string): Promise<RuleInfo[]> {
    const reply = await this.expectOk<CreateSessionReply>({
      cmd: "create_session",
      logic,
    });
    this.session = reply.session;
    this.logic = reply.logic;
    this.rules = reply.rules;
    this.history = [];
    return reply.rules;
  }

  async setGoal(goal: string, exists: string[] = []): Promise<ProtocolState> {
    const reply = await this.expectOk<StateReply>({
      cmd: "set_goal",
      session: this.session,
      goal,
      ...(exists.length > 0 ? { exists } : {}),
    });
    this.history = [reply.state];
    return reply.state;
  }

  async applyTactic(tactic: string, subgoal = 0): Promise<ProtocolState> {
    const reply = await this.expectOk<StateReply>({
      cmd: "apply_tactic",
      session: this.session,
      subgoal,
      tactic,
    });
    this.history.push(reply.state);
    return reply.state;
  }

  async undo(): Promise<ProtocolState> {
    const reply = await this.expectOk<StateReply>({
      cmd: "undo",
      session: this.session,
    });
    this.history.pop();
    this.verifyMirror(reply.state);
    return reply.state;
  }

  async state(): Promise<ProtocolState> {
    const reply = await this.expectOk<StateReply>({
      cmd: "state",
      session: this.session,
    });
    this.verifyMirror(reply.state);
    return reply.state;
  }

  async extract(): Promise<ExtractReply> {
    return this.expectOk<ExtractReply>({ cmd: "extract", session: this.session });
  }

  async replay(): Promise<ReplayReply> {
    return this.expectOk<ReplayReply>({ cmd: "replay", session: this.session });
  }

  async close(): Promise<void> {
    await this.transport.close();
  }

  private verifyMirror(state: ProtocolState): void {
    const mirrored = this.current;
    if (!mirrored || JSON.stringify(mirrored) !== JSON.stringify(state)) {
      throw new Error("history mirror out of sync with server state");
    }
  }
}
