/**
 * Session summary and history view models: fixed section order, one-decimal
 * percentage labels, newest-first history.
 */

import type { SummaryBody } from "./protocol.js";

export const SECTION_ORDER = [
  "bow_height",
  "bow_angle",
  "hand_posture",
  "elbow_posture",
] as const;

export const SECTION_TITLES: Record<(typeof SECTION_ORDER)[number], string> = {
  bow_height: "Bow height",
  bow_angle: "Bow angle",
  hand_posture: "Hand posture",
  elbow_posture: "Elbow posture",
};

export interface SummaryBar {
  className: string;
  count: number;
  rawLabel: string;
  normalizedLabel: string | null;
  representativeTms: number | null;
}

export interface SummarySection {
  name: string;
  title: string;
  bars: SummaryBar[];
}

export function formatPct(value: number): string {
  return `${value.toFixed(1)}%`;
}

export function summaryView(summary: SummaryBody): SummarySection[] {
  return SECTION_ORDER.filter((name) => name in summary.sections).map((name) => ({
    name,
    title: SECTION_TITLES[name],
    bars: Object.entries(summary.sections[name]).map(([className, entry]) => ({
      className,
      count: entry.count,
      rawLabel: formatPct(entry.raw_pct),
      normalizedLabel: entry.normalized_pct === null ? null : formatPct(entry.normalized_pct),
      representativeTms: entry.representative_t_ms,
    })),
  }));
}

export interface HistoryEntry {
  sessionId: string;
  startedAt: string;
  totalFrames: number;
}

/** History endpoint returns oldest-first; the list shows newest-first. */
export function historyView(
  records: Array<{ session_id: string; started_at: string; summary: SummaryBody }>,
): HistoryEntry[] {
  return records
    .map((r) => ({
      sessionId: r.session_id,
      startedAt: r.started_at,
      totalFrames: r.summary.total_frames,
    }))
    .sort((a, b) => (a.startedAt < b.startedAt ? 1 : a.startedAt > b.startedAt ? -1 : 0));
}
