// Deterministic force layout: pairwise repulsion, springs along edges,
// and a weak centering pull. No randomness anywhere, so the same payload
// always lands in the same arrangement.

export interface LayoutNode {
  id: number;
  radius: number;
}

export interface LayoutEdge {
  source: number;
  target: number;
  weight: number;
}

export interface Body {
  id: number;
  x: number;
  y: number;
  vx: number;
  vy: number;
  r: number;
}

export interface ForceOptions {
  repulsion: number;
  springLength: number;
  springK: number;
  gravity: number;
  damping: number;
  maxSpeed: number;
}

// springLength must sit well below the repulsion/gravity equilibrium
// spacing (~84px at these constants), otherwise springs push linked
// nodes apart instead of pulling them together.
export const FORCE_DEFAULTS: ForceOptions = {
  repulsion: 6000,
  springLength: 50,
  springK: 0.06,
  gravity: 0.03,
  damping: 0.85,
  maxSpeed: 40,
};

const GOLDEN_ANGLE = 2.399963229728653;

// Start on a golden-angle spiral: deterministic and free of the symmetric
// overlaps that stall a grid or a plain ring.
export function initBodies(nodes: LayoutNode[], width: number, height: number): Body[] {
  const cx = width / 2;
  const cy = height / 2;
  const spread = Math.min(width, height) * 0.38;
  const n = Math.max(nodes.length, 1);
  return nodes.map((node, i) => {
    const angle = i * GOLDEN_ANGLE;
    const dist = spread * Math.sqrt((i + 1) / n);
    return {
      id: node.id,
      x: cx + dist * Math.cos(angle),
      y: cy + dist * Math.sin(angle),
      vx: 0,
      vy: 0,
      r: node.radius,
    };
  });
}

// One integration tick; returns total displacement for convergence checks.
export function step(
  bodies: Body[],
  edges: LayoutEdge[],
  width: number,
  height: number,
  opts: ForceOptions = FORCE_DEFAULTS,
): number {
  const byId = new Map(bodies.map((b) => [b.id, b]));

  for (let i = 0; i < bodies.length; i++) {
    for (let j = i + 1; j < bodies.length; j++) {
      const a = bodies[i];
      const b = bodies[j];
      const dx = b.x - a.x;
      const dy = b.y - a.y;
      const d2 = Math.max(dx * dx + dy * dy, 1);
      const d = Math.sqrt(d2);
      const f = opts.repulsion / d2;
      const fx = (dx / d) * f;
      const fy = (dy / d) * f;
      a.vx -= fx;
      a.vy -= fy;
      b.vx += fx;
      b.vy += fy;
    }
  }

  for (const e of edges) {
    const a = byId.get(e.source);
    const b = byId.get(e.target);
    if (!a || !b || a === b) continue;
    const dx = b.x - a.x;
    const dy = b.y - a.y;
    const d = Math.max(Math.sqrt(dx * dx + dy * dy), 1e-6);
    // heavier edges pull proportionally harder
    const f = opts.springK * (d - opts.springLength) * e.weight;
    const fx = (dx / d) * f;
    const fy = (dy / d) * f;
    a.vx += fx;
    a.vy += fy;
    b.vx -= fx;
    b.vy -= fy;
  }

  const cx = width / 2;
  const cy = height / 2;
  let moved = 0;
  for (const b of bodies) {
    b.vx += (cx - b.x) * opts.gravity;
    b.vy += (cy - b.y) * opts.gravity;
    b.vx *= opts.damping;
    b.vy *= opts.damping;
    const speed = Math.sqrt(b.vx * b.vx + b.vy * b.vy);
    if (speed > opts.maxSpeed) {
      b.vx *= opts.maxSpeed / speed;
      b.vy *= opts.maxSpeed / speed;
    }
    b.x += b.vx;
    b.y += b.vy;
    moved += Math.abs(b.vx) + Math.abs(b.vy);
  }
  return moved;
}

export function runLayout(
  nodes: LayoutNode[],
  edges: LayoutEdge[],
  width: number,
  height: number,
  ticks = 300,
  opts: ForceOptions = FORCE_DEFAULTS,
): Map<number, { x: number; y: number }> {
  const bodies = initBodies(nodes, width, height);
  for (let t = 0; t < ticks; t++) {
    const moved = step(bodies, edges, width, height, opts);
    if (t > 20 && moved < 0.01 * Math.max(bodies.length, 1)) break;
  }
  return new Map(bodies.map((b) => [b.id, { x: b.x, y: b.y }]));
}
