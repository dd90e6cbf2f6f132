import { ApiClient } from "./api.js";
import { runLayout } from "./force.js";
import { drawScene, Painter } from "./render.js";
import { communityColor, DocPanel, ExplorerModel, Positions } from "./viewmodel.js";

const PAGE_SIZE = 10;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

const canvas = el<HTMLCanvasElement>("network");
const banner = el<HTMLDivElement>("banner");
const toast = el<HTMLDivElement>("toast");
const toastText = el<HTMLSpanElement>("toast-text");
const retryBtn = el<HTMLButtonElement>("retry");
const legend = el<HTMLDivElement>("legend");
const panel = el<HTMLDivElement>("panel");
const facetsInput = el<HTMLTextAreaElement>("facets");
const keywordsInput = el<HTMLInputElement>("keywords");
const applyBtn = el<HTMLButtonElement>("apply");
const clearBtn = el<HTMLButtonElement>("clear");
const statusLine = el<HTMLDivElement>("status");

const base = new URLSearchParams(location.search).get("api") ?? "";
const model = new ExplorerModel(new ApiClient(base));
const ctx = canvas.getContext("2d") as unknown as Painter;

let positions: Positions = new Map();
let panelPage = 0;

function draw(): void {
  drawScene(ctx, model.scene(positions), canvas.width, canvas.height);
  toast.style.display = model.error ? "block" : "none";
  toastText.textContent = model.error ?? "";
  const filterNote = model.activeFilterId ? `filter ${model.activeFilterId}` : "no filter";
  statusLine.textContent = `${filterNote} · labels v${model.labelVersion}`;
}

// facets are typed one per line as key=value
function parseFacets(text: string): Record<string, string> {
  const facets: Record<string, string> = {};
  for (const line of text.split("\n")) {
    const eq = line.indexOf("=");
    if (eq <= 0) continue;
    const key = line.slice(0, eq).trim();
    const value = line.slice(eq + 1).trim();
    if (key) facets[key] = value;
  }
  return facets;
}

function parseKeywords(text: string): string[] {
  return text
    .split(/[\s,]+/)
    .map((w) => w.trim())
    .filter((w) => w.length > 0);
}

function buildLegend(): void {
  if (!model.payload) return;
  const seen = [...new Set(model.payload.nodes.map((n) => n.community))].sort(
    (a, b) => a - b,
  );
  legend.replaceChildren();
  for (const community of seen) {
    const chip = document.createElement("button");
    chip.className = "chip";
    chip.textContent = `community ${community}`;
    chip.style.borderColor = communityColor(community);
    chip.addEventListener("click", () => {
      model.selectedCommunity =
        model.selectedCommunity === community ? null : community;
      draw();
    });
    legend.appendChild(chip);
  }
}

function renderPanel(result: DocPanel): void {
  panel.replaceChildren();
  const title = document.createElement("h3");
  title.textContent = `topic ${result.topic} — ${model.labelOf(result.topic) || "(no label)"}`;
  panel.appendChild(title);

  if (result.notice) {
    const note = document.createElement("p");
    note.className = "notice";
    note.textContent = result.notice;
    panel.appendChild(note);
  }
  for (const row of result.rows) {
    const div = document.createElement("div");
    div.className = "doc";
    div.innerHTML = `<b></b><span></span>`;
    (div.children[0] as HTMLElement).textContent = row.id;
    (div.children[1] as HTMLElement).textContent = ` ${row.snippet}`;
    panel.appendChild(div);
  }
  if (result.pages > 1) {
    const nav = document.createElement("div");
    nav.className = "pager";
    for (let p = 0; p < result.pages; p++) {
      const btn = document.createElement("button");
      btn.textContent = String(p + 1);
      btn.disabled = p === result.page;
      btn.addEventListener("click", () => {
        panelPage = p;
        void openTopic(result.topic);
      });
      nav.appendChild(btn);
    }
    panel.appendChild(nav);
  }
}

async function openTopic(topic: number): Promise<void> {
  renderPanel(await model.openTopic(topic, panelPage, PAGE_SIZE));
  draw();
}

canvas.addEventListener("click", (ev) => {
  const rect = canvas.getBoundingClientRect();
  const x = ((ev.clientX - rect.left) / rect.width) * canvas.width;
  const y = ((ev.clientY - rect.top) / rect.height) * canvas.height;
  const scene = model.scene(positions);
  // iterate back to front so overlapping nodes resolve to the one on top
  for (let i = scene.nodes.length - 1; i >= 0; i--) {
    const n = scene.nodes[i];
    const dx = x - n.x;
    const dy = y - n.y;
    if (dx * dx + dy * dy <= n.radius * n.radius) {
      panelPage = 0;
      void openTopic(n.id);
      return;
    }
  }
  model.selectedTopic = null;
  panel.replaceChildren();
  draw();
});

applyBtn.addEventListener("click", async () => {
  await model.applyFilter({
    facets: parseFacets(facetsInput.value),
    keywords: parseKeywords(keywordsInput.value),
  });
  if (model.selectedTopic !== null) {
    panelPage = 0;
    await openTopic(model.selectedTopic);
  }
  draw();
});

clearBtn.addEventListener("click", () => {
  facetsInput.value = "";
  keywordsInput.value = "";
  model.clearFilter();
  draw();
});

retryBtn.addEventListener("click", async () => {
  await model.retry();
  draw();
});

async function boot(): Promise<void> {
  try {
    await model.load();
  } catch (err) {
    banner.style.display = "block";
    banner.textContent = `cannot show the network: ${
      err instanceof Error ? err.message : String(err)
    }`;
    return;
  }
  const payload = model.payload;
  if (!payload) return;
  const scene = model.scene(new Map());
  positions = runLayout(
    scene.nodes.map((n) => ({ id: n.id, radius: n.radius })),
    payload.links.map((e) => ({ source: e.source, target: e.target, weight: e.weight })),
    canvas.width,
    canvas.height,
  );
  buildLegend();
  draw();
}

void boot();
