/** Schematic layout: longest-path layering of the route graph.
 *
 * Delimiters get integer layers (longest path from the boundary);
 * each partial route becomes a horizontal segment between its entry
 * and exit layers. Overlapping segments are stacked into lanes by
 * greedy interval coloring, so parallel station tracks and opposite
 * directions render side by side.
 */

import type { InfrastructureDoc } from "./types";

export interface RouteSegment {
  id: string;
  x0: number;
  x1: number;
  lane: number;
}

export interface Layout {
  segments: Map<string, RouteSegment>;
  layers: number;
  lanes: number;
}

export function layerDelimiters(infra: InfrastructureDoc): Map<string, number> {
  const indeg = new Map<string, number>();
  const out = new Map<string, string[]>();
  for (const d of infra.delimiters) {
    indeg.set(d, 0);
    out.set(d, []);
  }
  for (const r of infra.partial_routes) {
    if (r.entry !== null && r.exit !== null) {
      out.get(r.entry)!.push(r.exit);
      indeg.set(r.exit, (indeg.get(r.exit) ?? 0) + 1);
    }
  }
  const layer = new Map<string, number>();
  const queue = infra.delimiters.filter((d) => indeg.get(d) === 0);
  for (const d of queue) layer.set(d, 1);
  while (queue.length > 0) {
    const d = queue.shift()!;
    for (const e of out.get(d) ?? []) {
      layer.set(e, Math.max(layer.get(e) ?? 1, layer.get(d)! + 1));
      indeg.set(e, indeg.get(e)! - 1);
      if (indeg.get(e) === 0) queue.push(e);
    }
  }
  return layer;
}

export function computeLayout(infra: InfrastructureDoc): Layout {
  const layer = layerDelimiters(infra);
  const spans: { id: string; x0: number; x1: number }[] = [];
  for (const r of infra.partial_routes) {
    let x0 = r.entry !== null ? layer.get(r.entry)! : null;
    let x1 = r.exit !== null ? layer.get(r.exit)! : null;
    if (x0 === null && x1 === null) {
      x0 = 0;
      x1 = 1;
    } else if (x0 === null) {
      x0 = x1! - 1;
    } else if (x1 === null) {
      x1 = x0 + 1;
    }
    spans.push({ id: r.id, x0: Math.min(x0, x1!), x1: Math.max(x0, x1!) });
  }

  // Group routes into chains (maximal entry/exit-linked runs) so a
  // line keeps one lane across all its layers; at a branch the
  // lexicographically first continuation stays in the chain.
  const byId = new Map(infra.partial_routes.map((r) => [r.id, r]));
  const spanById = new Map(spans.map((s) => [s.id, s]));
  const unassigned = new Set(spans.map((s) => s.id));
  const heads = [...spans].sort((a, b) => a.x0 - b.x0 || a.id.localeCompare(b.id));
  const chains: string[][] = [];
  for (const head of heads) {
    if (!unassigned.has(head.id)) continue;
    const chain = [head.id];
    unassigned.delete(head.id);
    let exit = byId.get(head.id)!.exit;
    while (exit !== null) {
      const next = [...unassigned]
        .filter((id) => byId.get(id)!.entry === exit)
        .sort()[0];
      if (next === undefined) break;
      chain.push(next);
      unassigned.delete(next);
      exit = byId.get(next)!.exit;
    }
    chains.push(chain);
  }

  const laneEnds: number[] = [];
  const segments = new Map<string, RouteSegment>();
  for (const chain of chains) {
    const x0 = Math.min(...chain.map((id) => spanById.get(id)!.x0));
    const x1 = Math.max(...chain.map((id) => spanById.get(id)!.x1));
    let lane = laneEnds.findIndex((end) => end <= x0);
    if (lane === -1) {
      lane = laneEnds.length;
      laneEnds.push(0);
    }
    laneEnds[lane] = x1;
    for (const id of chain) {
      segments.set(id, { ...spanById.get(id)!, lane });
    }
  }
  const layers = Math.max(0, ...spans.map((s) => s.x1));
  return { segments, layers, lanes: laneEnds.length };
}
