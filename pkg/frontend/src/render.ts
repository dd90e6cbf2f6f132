import { Scene } from "./viewmodel.js";

// The slice of CanvasRenderingContext2D the painter actually uses; tests
// substitute a recording fake. main.ts casts the real context once.
export interface Painter {
  clearRect(x: number, y: number, w: number, h: number): void;
  beginPath(): void;
  moveTo(x: number, y: number): void;
  lineTo(x: number, y: number): void;
  arc(x: number, y: number, r: number, a0: number, a1: number): void;
  fill(): void;
  stroke(): void;
  fillText(text: string, x: number, y: number): void;
  fillStyle: string;
  strokeStyle: string;
  lineWidth: number;
  globalAlpha: number;
  font: string;
  textAlign: string;
}

export const DIM_ALPHA = 0.22;
export const EDGE_ALPHA = 0.55;

export function drawScene(ctx: Painter, scene: Scene, width: number, height: number): void {
  ctx.clearRect(0, 0, width, height);

  const at = new Map(scene.nodes.map((n) => [n.id, n]));
  for (const e of scene.edges) {
    const a = at.get(e.source);
    const b = at.get(e.target);
    if (!a || !b) continue;
    ctx.globalAlpha = e.dimmed ? DIM_ALPHA : EDGE_ALPHA;
    ctx.strokeStyle = "#9a9aa2";
    ctx.lineWidth = e.width;
    ctx.beginPath();
    ctx.moveTo(a.x, a.y);
    ctx.lineTo(b.x, b.y);
    ctx.stroke();
  }

  ctx.textAlign = "center";
  ctx.font = "12px sans-serif";
  for (const n of scene.nodes) {
    ctx.globalAlpha = n.dimmed ? DIM_ALPHA : 1;
    ctx.fillStyle = n.fill;
    ctx.beginPath();
    ctx.arc(n.x, n.y, n.radius, 0, Math.PI * 2);
    ctx.fill();
    if (n.selected) {
      ctx.strokeStyle = "#16161d";
      ctx.lineWidth = 2.5;
      ctx.stroke();
    }
    if (n.label) {
      ctx.fillStyle = "#1b1b22";
      ctx.fillText(n.label, n.x, n.y + n.radius + 14);
    }
  }
  ctx.globalAlpha = 1;
}
