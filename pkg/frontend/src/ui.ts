/**
 * Browser wiring: connects the page to a proof engine over a WebSocket that
 * carries the newline protocol. The page never interprets formulas; it posts
 * tactic text and shows whatever strings come back.
 */

import { ProtocolFailure, ProtocolState, RuleInfo } from "./protocol.js";
import { groupRules, renderState, renderWitnesses, ruleCard } from "./render.js";
import { ProofClient } from "./session.js";
import { WebSocketTransport } from "./transport.js";

function element<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (!found) throw new Error(`missing element #${id}`);
  return found as T;
}

export class App {
  private readonly client: ProofClient;
  private busy = false;
  private done = false;

  private readonly logicInput = element<HTMLInputElement>("logic");
  private readonly connectButton = element<HTMLButtonElement>("connect");
  private readonly goalInput = element<HTMLInputElement>("goal");
  private readonly existsInput = element<HTMLInputElement>("exists");
  private readonly goalButton = element<HTMLButtonElement>("set-goal");
  private readonly subgoalInput = element<HTMLInputElement>("subgoal");
  private readonly bindingInput = element<HTMLInputElement>("bindings");
  private readonly tacticInput = element<HTMLInputElement>("tactic");
  private readonly tacticButton = element<HTMLButtonElement>("apply");
  private readonly undoButton = element<HTMLButtonElement>("undo");
  private readonly extractButton = element<HTMLButtonElement>("extract");
  private readonly palette = element<HTMLDivElement>("palette");
  private readonly stateView = element<HTMLPreElement>("state");
  private readonly resultView = element<HTMLPreElement>("result");
  private readonly errorView = element<HTMLDivElement>("error");

  constructor(url: string) {
    this.client = new ProofClient(new WebSocketTransport(url));
    this.connectButton.addEventListener("click", () => this.connect());
    this.goalButton.addEventListener("click", () => this.setGoal());
    this.tacticButton.addEventListener("click", () =>
      this.apply(this.tacticInput.value.trim()),
    );
    this.undoButton.addEventListener("click", () => this.undo());
    this.extractButton.addEventListener("click", () => this.extract());
    this.setBusy(false);
  }

  private setBusy(busy: boolean): void {
    this.busy = busy;
    const hasSession = this.client.session !== "";
    this.connectButton.disabled = busy;
    this.goalButton.disabled = busy || !hasSession;
    this.tacticButton.disabled = busy || !hasSession;
    this.undoButton.disabled = busy || !hasSession;
    this.extractButton.disabled = busy || !hasSession || !this.done;
    for (const button of this.palette.querySelectorAll("button")) {
      button.disabled = busy || !hasSession;
    }
  }

  /** Serializes UI actions: one request in flight, controls locked meanwhile. */
  private async run(action: () => Promise<void>): Promise<void> {
    if (this.busy) return;
    this.setBusy(true);
    this.errorView.textContent = "";
    try {
      await action();
    } catch (err) {
      this.errorView.textContent =
        err instanceof ProtocolFailure
          ? `${err.code}: ${err.detail}`
          : String(err);
    } finally {
      this.setBusy(false);
    }
  }

  private connect(): Promise<void> {
    return this.run(async () => {
      const rules = await this.client.createSession(this.logicInput.value.trim());
      this.showPalette(rules);
      this.done = false;
      this.stateView.textContent = `logic ${this.client.logic} loaded`;
      this.resultView.textContent = "";
    });
  }

  private setGoal(): Promise<void> {
    return this.run(async () => {
      const exists = this.existsInput.value.trim();
      const state = await this.client.setGoal(
        this.goalInput.value.trim(),
        exists === "" ? [] : exists.split(/[\s,]+/),
      );
      this.showState(state);
      this.resultView.textContent = "";
    });
  }

  /** A palette click applies `ruleseq`; filled bindings switch to `rule_seqtac`. */
  private tacticFor(ruleName: string): string {
    const bindings = this.bindingInput.value.trim();
    if (bindings === "") return `ruleseq ${ruleName}`;
    return `rule_seqtac [${bindings}] ${ruleName}`;
  }

  private apply(tactic: string): Promise<void> {
    return this.run(async () => {
      if (tactic === "") return;
      const subgoal = Number.parseInt(this.subgoalInput.value, 10) || 0;
      this.showState(await this.client.applyTactic(tactic, subgoal));
    });
  }

  private undo(): Promise<void> {
    return this.run(async () => {
      this.showState(await this.client.undo());
    });
  }

  private extract(): Promise<void> {
    return this.run(async () => {
      const result = await this.client.extract();
      const lines = [`proved: ${result.statement}`];
      for (const line of renderWitnesses(result.witnesses)) {
        lines.push(`  ${line}`);
      }
      const replay = await this.client.replay();
      lines.push(replay.valid ? "replay: valid" : `replay failed: ${replay.detail}`);
      this.resultView.textContent = lines.join("\n");
    });
  }

  private showState(state: ProtocolState): void {
    this.done = state.done === true;
    this.stateView.textContent = renderState(state);
  }

  private showPalette(rules: RuleInfo[]): void {
    this.palette.replaceChildren();
    for (const [section, sectionRules] of groupRules(rules)) {
      const heading = document.createElement("h3");
      heading.textContent = section;
      this.palette.append(heading);
      for (const rule of sectionRules) {
        const button = document.createElement("button");
        button.textContent = rule.name;
        button.title = ruleCard(rule);
        button.addEventListener("click", () => this.apply(this.tacticFor(rule.name)));
        this.palette.append(button);
      }
    }
  }
}

export function start(): void {
  const url = `ws://${window.location.hostname}:8765`;
  new App(url);
}
