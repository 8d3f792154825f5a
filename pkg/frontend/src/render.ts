/**
 * Pure text layout for proof states.
 *
 * Every formula, hypothesis, and witness arrives as a server-rendered string
 * and passes through verbatim. These helpers only arrange those strings into
 * cards, so the display can never disagree with the engine about notation.
 */

import { ProtocolState, RuleInfo, WitnessBinding } from "./protocol.js";

const RULE_LINE = "─";

/** One subgoal as a card: hypotheses above an inference line, target below. */
export function subgoalCard(state: ProtocolState, index: number): string[] {
  const subgoal = state.subgoals[index];
  if (!subgoal) return [];
  const width = Math.max(
    subgoal.target.length,
    ...subgoal.hyps.map((h) => h.length),
    8,
  );
  const lines = [`subgoal ${index}`];
  for (const hyp of subgoal.hyps) lines.push(`  ${hyp}`);
  if (subgoal.hyps.length > 0) lines.push(`  ${RULE_LINE.repeat(width)}`);
  lines.push(`  ${subgoal.target}`);
  return lines;
}

/** Metavariables still open plus the instantiations found so far. */
export function witnessPanel(state: ProtocolState): string[] {
  const lines: string[] = [];
  if (state.metas.length > 0) {
    lines.push(`open: ${state.metas.map((m) => `?${m}`).join(", ")}`);
  }
  for (const binding of state.inst) {
    lines.push(`?${binding.var} := ${binding.term}`);
  }
  return lines;
}

export function renderState(state: ProtocolState): string {
  if (
    !state ||
    !Array.isArray(state.subgoals) ||
    !Array.isArray(state.metas) ||
    !Array.isArray(state.inst)
  ) {
    return "invalid state";
  }
  const lines: string[] = [];
  if (state.done) {
    lines.push("no subgoals");
  } else {
    state.subgoals.forEach((_, i) => {
      lines.push(...subgoalCard(state, i));
    });
  }
  lines.push(...witnessPanel(state));
  return lines.join("\n");
}

export function renderWitnesses(witnesses: WitnessBinding[]): string[] {
  return witnesses.map((w) => `${w.var} := ${w.term}`);
}

/** Rules grouped by section, preserving the order the server sent. */
export function groupRules(rules: RuleInfo[]): Map<string, RuleInfo[]> {
  const groups = new Map<string, RuleInfo[]>();
  for (const rule of rules) {
    const bucket = groups.get(rule.section);
    if (bucket) bucket.push(rule);
    else groups.set(rule.section, [rule]);
  }
  return groups;
}

/** A rule shown as premises over a line over the conclusion. */
export function ruleCard(rule: RuleInfo): string {
  if (rule.premises.length === 0) return `${rule.name}: ${rule.conclusion}`;
  const width = Math.max(
    rule.conclusion.length,
    ...rule.premises.map((p) => p.length),
  );
  return [
    `${rule.name}:`,
    ...rule.premises.map((p) => `  ${p}`),
    `  ${RULE_LINE.repeat(width)}`,
    `  ${rule.conclusion}`,
  ].join("\n");
}
