/** DOM rendering of the view model: SVG schematic, banner, history. */

import type { ViewModel } from "./viewmodel";

const SVG_NS = "http://www.w3.org/2000/svg";
const CELL_W = 90;
const LANE_H = 34;
const PAD = 24;

export interface RenderHandlers {
  onAllocate: (train: string, elementaryRoute: string) => void;
  onUndo: () => void;
}

export function render(root: HTMLElement, vm: ViewModel, handlers: RenderHandlers): void {
  root.textContent = "";

  const banner = document.createElement("div");
  banner.className = vm.banner.cssClass;
  banner.dataset.status = vm.banner.status;
  banner.textContent = vm.banner.label;
  root.appendChild(banner);

  root.appendChild(renderSchematic(vm, handlers));

  const legend = document.createElement("div");
  legend.className = "legend";
  for (const t of vm.trains) {
    const chip = document.createElement("span");
    chip.className = "train-chip";
    chip.style.background = t.color;
    chip.textContent = t.id;
    legend.appendChild(chip);
  }
  root.appendChild(legend);

  const undo = document.createElement("button");
  undo.className = "undo";
  undo.textContent = "Undo";
  undo.disabled = !vm.undoEnabled;
  undo.addEventListener("click", () => handlers.onUndo());
  root.appendChild(undo);

  const history = document.createElement("ol");
  history.className = "history";
  for (const entry of vm.history) {
    const li = document.createElement("li");
    li.textContent = entry;
    history.appendChild(li);
  }
  root.appendChild(history);
}

function renderSchematic(vm: ViewModel, handlers: RenderHandlers): SVGSVGElement {
  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("class", "schematic");
  svg.setAttribute("width", String(vm.layout.layers * CELL_W + 2 * PAD));
  svg.setAttribute("height", String(vm.layout.lanes * LANE_H + 2 * PAD));

  for (const view of vm.routes) {
    const seg = vm.layout.segments.get(view.id);
    if (!seg) continue;
    const y = PAD + seg.lane * LANE_H + LANE_H / 2;
    const x0 = PAD + seg.x0 * CELL_W;
    const x1 = PAD + seg.x1 * CELL_W;

    const g = document.createElementNS(SVG_NS, "g");
    g.dataset.route = view.id;

    const line = document.createElementNS(SVG_NS, "line");
    line.setAttribute("x1", String(x0 + 4));
    line.setAttribute("x2", String(x1 - 4));
    line.setAttribute("y1", String(y));
    line.setAttribute("y2", String(y));
    line.setAttribute("stroke", view.color ?? "#94a3b8");
    line.setAttribute("stroke-width", view.occupiedBy ? "8" : "3");
    g.appendChild(line);

    const label = document.createElementNS(SVG_NS, "text");
    label.setAttribute("x", String((x0 + x1) / 2));
    label.setAttribute("y", String(y - 8));
    label.setAttribute("text-anchor", "middle");
    label.textContent = view.occupiedBy ? `${view.id} (${view.occupiedBy})` : view.id;
    g.appendChild(label);

    if (view.actions.length > 0) {
      g.classList.add("clickable");
      g.addEventListener("click", () => {
        const a = view.actions[0];
        handlers.onAllocate(a.train, a.route);
      });
    }
    svg.appendChild(g);
  }
  return svg;
}
