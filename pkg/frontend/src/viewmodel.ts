/** Pure view model: server snapshot + instance -> what to draw.
 *
 * The UI never infers verdicts or legality; both come verbatim from
 * the last server snapshot.
 */

import { computeLayout, type Layout } from "./layout";
import type { InstanceDoc, SnapshotDoc } from "./types";

export interface RouteView {
  id: string;
  occupiedBy: string | null;
  color: string | null;
  /** Legal allocations that include this partial route. */
  actions: { train: string; route: string }[];
}

export interface BannerView {
  status: "live" | "dead" | "unknown";
  label: string;
  cssClass: string;
  flipped: boolean;
}

export interface ViewModel {
  layout: Layout;
  routes: RouteView[];
  banner: BannerView;
  history: string[];
  undoEnabled: boolean;
  trains: { id: string; color: string }[];
}

const PALETTE = ["#2563eb", "#db2777", "#d97706", "#059669", "#7c3aed"];

export function trainColors(instance: InstanceDoc): Map<string, string> {
  const colors = new Map<string, string>();
  instance.trains.forEach((t, k) => colors.set(t.id, PALETTE[k % PALETTE.length]));
  return colors;
}

export function buildViewModel(
  instance: InstanceDoc,
  snapshot: SnapshotDoc,
  previous?: SnapshotDoc,
): ViewModel {
  const colors = trainColors(instance);
  const byRoute = new Map<string, { train: string; route: string }[]>();
  for (const a of snapshot.legal_actions) {
    const route = instance.infrastructure.elementary_routes.find((e) => e.id === a.route);
    for (const part of route?.parts ?? [a.route]) {
      byRoute.set(part, [...(byRoute.get(part) ?? []), { train: a.train, route: a.route }]);
    }
  }
  const routes = instance.infrastructure.partial_routes.map((r) => {
    const occupiedBy = snapshot.state.occ[r.id] ?? null;
    return {
      id: r.id,
      occupiedBy,
      color: occupiedBy ? (colors.get(occupiedBy) ?? null) : null,
      actions: byRoute.get(r.id) ?? [],
    };
  });

  const status = snapshot.verdict.status;
  const flipped = previous !== undefined && previous.verdict.status === "live" && status === "dead";
  const label =
    `${status.toUpperCase()} · steps ${snapshot.verdict.steps}` +
    ` · ${snapshot.verdict.time_s.toFixed(3)} s` +
    (flipped ? " · this move made the deadlock unavoidable" : "");
  return {
    layout: computeLayout(instance.infrastructure),
    routes,
    banner: { status, label, cssClass: `banner banner-${status}`, flipped },
    history: snapshot.history.map((h) => `${h.train} → ${h.elementary_route}`),
    undoEnabled: snapshot.history.length > 0,
    trains: instance.trains.map((t) => ({ id: t.id, color: colors.get(t.id)! })),
  };
}
