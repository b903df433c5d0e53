/**
 * Force-directed layout with a collapsed fallback for large graphs.
 *
 * Above `maxRenderedNodes` the raw layout is unreadable (game graphs grow
 * geometrically), so vertices are grouped into one blob node per gadget
 * copy (by gadget_id tag), keeping the picture navigable.
 */

import type { GraphJson } from './types.js';

export const DEFAULT_MAX_RENDERED_NODES = 800;

export interface LayoutNode {
  id: string;
  label: string;
  role: string;
  /** number of collapsed vertices represented (1 for plain vertices) */
  weight: number;
  x: number;
  y: number;
  vx: number;
  vy: number;
}

export interface LayoutEdge {
  source: string;
  target: string;
  weight: number;
}

export interface LayoutGraph {
  nodes: LayoutNode[];
  edges: LayoutEdge[];
  collapsed: boolean;
}

/** Deterministic pseudo-random in [0, 1) from a string seed. */
function hash01(seed: string): number {
  let h = 2166136261;
  for (let i = 0; i < seed.length; i++) {
    h ^= seed.charCodeAt(i);
    h = Math.imul(h, 16777619);
  }
  return ((h >>> 0) % 100000) / 100000;
}

function makeNode(id: string, label: string, role: string, weight: number): LayoutNode {
  const angle = hash01(id) * 2 * Math.PI;
  const radius = 0.25 + hash01(id + '#r') * 0.5;
  return {
    id,
    label,
    role,
    weight,
    x: 0.5 + radius * Math.cos(angle) * 0.5,
    y: 0.5 + radius * Math.sin(angle) * 0.5,
    vx: 0,
    vy: 0,
  };
}

export function buildLayoutGraph(
  graph: GraphJson,
  maxRenderedNodes: number = DEFAULT_MAX_RENDERED_NODES,
): LayoutGraph {
  if (graph.vertices.length <= maxRenderedNodes) {
    const nodes = graph.vertices.map((v) =>
      makeNode(String(v.id), String(v.id), v.tag.role, 1),
    );
    const edges = graph.edges.map(([a, b]) => ({
      source: String(a),
      target: String(b),
      weight: 1,
    }));
    return { nodes, edges, collapsed: false };
  }
  return collapseByGadget(graph);
}

/** One blob per gadget copy; ungrouped vertices stay individual. */
export function collapseByGadget(graph: GraphJson): LayoutGraph {
  const groupOf = new Map<number, string>();
  const groupSize = new Map<string, number>();
  const groupRole = new Map<string, string>();
  for (const v of graph.vertices) {
    const gid = v.tag.gadget_id;
    const key = gid ? `gadget:${gid}` : `v:${v.id}`;
    groupOf.set(v.id, key);
    groupSize.set(key, (groupSize.get(key) ?? 0) + 1);
    if (!groupRole.has(key) || v.tag.role === 'reveal-x') {
      groupRole.set(key, gid ? 'gadget-blob' : v.tag.role);
    }
  }
  const nodes: LayoutNode[] = [];
  for (const [key, size] of groupSize) {
    const label = key.startsWith('gadget:')
      ? `${key.slice('gadget:'.length)} (${size})`
      : key.slice(2);
    nodes.push(makeNode(key, label, groupRole.get(key) ?? 'plain', size));
  }
  const edgeWeight = new Map<string, number>();
  for (const [a, b] of graph.edges) {
    const ka = groupOf.get(a)!;
    const kb = groupOf.get(b)!;
    if (ka === kb) continue;
    const key = ka < kb ? `${ka}|${kb}` : `${kb}|${ka}`;
    edgeWeight.set(key, (edgeWeight.get(key) ?? 0) + 1);
  }
  const edges: LayoutEdge[] = [];
  for (const [key, weight] of edgeWeight) {
    const [source, target] = key.split('|');
    edges.push({ source, target, weight });
  }
  return { nodes, edges, collapsed: true };
}

/** One simulation step: spring edges, pairwise repulsion, centering pull. */
export function stepLayout(layout: LayoutGraph, strength = 0.02): void {
  const nodes = layout.nodes;
  const byId = new Map(nodes.map((n) => [n.id, n]));
  const repulsion = strength * 0.004;
  const spring = strength;
  for (let i = 0; i < nodes.length; i++) {
    for (let j = i + 1; j < nodes.length; j++) {
      const a = nodes[i];
      const b = nodes[j];
      const dx = a.x - b.x;
      const dy = a.y - b.y;
      const d2 = dx * dx + dy * dy + 1e-6;
      const f = repulsion / d2;
      a.vx += dx * f;
      a.vy += dy * f;
      b.vx -= dx * f;
      b.vy -= dy * f;
    }
  }
  for (const e of layout.edges) {
    const a = byId.get(e.source)!;
    const b = byId.get(e.target)!;
    const dx = b.x - a.x;
    const dy = b.y - a.y;
    a.vx += dx * spring;
    a.vy += dy * spring;
    b.vx -= dx * spring;
    b.vy -= dy * spring;
  }
  for (const n of nodes) {
    n.vx += (0.5 - n.x) * strength * 0.3;
    n.vy += (0.5 - n.y) * strength * 0.3;
    n.x = Math.min(0.98, Math.max(0.02, n.x + n.vx));
    n.y = Math.min(0.98, Math.max(0.02, n.y + n.vy));
    n.vx *= 0.5;
    n.vy *= 0.5;
  }
}
