/** HTML renderers: pure string builders over the view state. */

import { STATUS_COLORS } from "./colors.js";
import { renderGraphSvg } from "./graph.js";
import { effectiveCourseConcepts, type ViewState } from "./state.js";
import type { LoStatusValue } from "./types.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function renderOverlayPane(state: ViewState): string {
  if (!state.model) {
    return `<p class="hint">Load a course to see the concept map.</p>`;
  }
  const parts: string[] = [];
  if (state.overlay?.no_statement) {
    parts.push(
      `<div class="banner banner-no-statement" data-banner="no-statement">` +
        `No statement possible yet: none of your recorded evidence touches this course. ` +
        `Take a check below to get a first picture.</div>`,
    );
  }
  parts.push(renderGraphSvg(state.model, effectiveCourseConcepts(state), state.overlay));
  parts.push(renderStatusList(state));
  return parts.join("\n");
}

function renderStatusList(state: ViewState): string {
  if (!state.model) {
    return "";
  }
  const statuses = state.overlay?.statuses ?? {};
  const course = new Set(effectiveCourseConcepts(state));
  const rows: string[] = ['<ul class="status-list">'];
  for (const concept of [...state.model.concepts].sort((a, b) => a.id.localeCompare(b.id))) {
    for (const lo of concept.outcomes) {
      const status = statuses[lo.id];
      const label: string = status ?? "Unknown";
      const color = STATUS_COLORS[(status ?? "Unknown") as LoStatusValue];
      const canAssess = course.has(concept.id);
      rows.push(
        `<li><span class="chip" data-status-for="${escapeHtml(lo.id)}" data-status="${label}" ` +
          `style="background:${color}">${label}</span> ` +
          `<strong>${escapeHtml(lo.id)}</strong> - ${escapeHtml(lo.description)}` +
          (status === "Suspected"
            ? ` <em class="note">(presumed missing: a dependent outcome failed; not yet probed)</em>`
            : "") +
          (status === "Unknown" ? ` <em class="note">(no evidence yet)</em>` : "") +
          (canAssess
            ? ` <button data-action="start-assessment" data-lo="${escapeHtml(lo.id)}">Check</button>`
            : "") +
          `</li>`,
      );
    }
  }
  rows.push("</ul>");
  return rows.join("\n");
}

export function renderAssessmentPane(state: ViewState): string {
  const session = state.session;
  if (!session) {
    return `<p class="hint">Pick an outcome and press Check to start a short adaptive probe.</p>`;
  }
  if (session.status !== "Active" || !session.item) {
    const result = session.result;
    if (!result) {
      return "";
    }
    return (
      `<div class="session-result" data-session-result>` +
      `<p>Check finished (${session.status}): <strong>${escapeHtml(result.lo_id)}</strong> ` +
      `localized at level <strong>${result.localized_level}</strong>` +
      `${result.exact ? "" : " (not exact)"} after ${result.items_used} item(s).</p></div>`
    );
  }
  const item = session.item;
  const [a, b] = session.interval;
  const options = item.options
    .map(
      (option, index) =>
        `<li><label><input type="checkbox" data-action="toggle-option" data-index="${index}" ` +
        `${state.chosen.includes(index) ? "checked" : ""}/> ${escapeHtml(option)}</label></li>`,
    )
    .join("\n");
  return (
    `<div class="item-card" data-item="${escapeHtml(item.id)}">` +
    `<p class="interval" data-interval>Confirmed level ${a}, still possible up to ${b}.</p>` +
    `<p class="stem">${escapeHtml(item.stem)}</p>` +
    `<ul class="options">${options}</ul>` +
    `<button data-action="submit-answer">Submit answer</button>` +
    `<span class="hint">time limit ${item.max_seconds}s</span></div>`
  );
}

export function renderPlansPane(state: ViewState): string {
  if (!state.plans) {
    return "";
  }
  const plans = state.plans.plans;
  const blocks = plans.map((plan, index) => {
    const label =
      plan.variant_of === null
        ? "Direct path"
        : `Alternative via supporting unit ${escapeHtml(plan.variant_of)}`;
    const steps =
      plan.steps.length === 0
        ? "<em>Nothing to do - the target is already achieved.</em>"
        : plan.steps.map((s) => `<span class="step">${escapeHtml(s)}</span>`).join(" &rarr; ");
    const selected = index === state.selectedPlan ? " plan-selected" : "";
    return (
      `<div class="plan${selected}" data-plan-index="${index}" ` +
      `data-variant-of="${plan.variant_of === null ? "" : escapeHtml(plan.variant_of)}">` +
      `<label><input type="radio" name="plan" data-action="select-plan" data-index="${index}" ` +
      `${index === state.selectedPlan ? "checked" : ""}/> ${label}</label>` +
      `<p class="steps">${steps}</p>` +
      `<p class="hint">${plan.unmet_lo_count} outcome(s) still to close</p></div>`
    );
  });
  return `<div class="plans" data-plan-count="${plans.length}">${blocks.join("\n")}</div>`;
}

export function renderResourcesPane(state: ViewState): string {
  if (!state.plans || state.plans.resources.length === 0) {
    return "";
  }
  const tagNote =
    state.preferenceTags.length > 0
      ? `<p class="hint">ranked for your preferences: ${state.preferenceTags
          .map(escapeHtml)
          .join(", ")}</p>`
      : "";
  const groups = state.plans.resources.map((rec) => {
    const rows = rec.ranked
      .map(
        (res) =>
          `<li><a href="${escapeHtml(res.uri)}" target="_blank" rel="noopener">` +
          `${escapeHtml(res.title)}</a> <span class="kind">[${res.kind}]</span> ` +
          `<button data-action="pick-resource" data-lo="${escapeHtml(rec.lo_id)}" ` +
          `data-resource="${escapeHtml(res.id)}">I like this kind</button></li>`,
      )
      .join("\n");
    return `<div class="resource-group" data-resources-for="${escapeHtml(rec.lo_id)}">` +
      `<h4>For ${escapeHtml(rec.lo_id)}</h4><ol>${rows}</ol></div>`;
  });
  return tagNote + groups.join("\n");
}

export function renderChallengePane(state: ViewState): string {
  if (!state.challenge) {
    return "";
  }
  const c = state.challenge;
  return (
    `<div class="banner banner-challenge" data-banner="challenge">` +
    `Strong run on <strong>${escapeHtml(c.concept_id)}</strong>! ` +
    `Try level ${c.next_level} next, with the time frame compressed to ` +
    `${Math.round(c.time_factor * 100)}%.</div>`
  );
}

export function renderErrorPane(state: ViewState): string {
  if (!state.error) {
    return "";
  }
  return `<div class="banner banner-error" data-banner="error">${escapeHtml(state.error)}</div>`;
}
