import init, { hasse, flow_trace, homology_scan } from "./pkg/fk_morse_wasm.js";

const SVG = "http://www.w3.org/2000/svg";

function el(tag, attrs = {}, text) {
  const node = document.createElementNS(SVG, tag);
  for (const [k, v] of Object.entries(attrs)) node.setAttribute(k, v);
  if (text !== undefined) node.textContent = text;
  return node;
}

function fail(target, err) {
  target.innerHTML = "";
  const p = document.createElement("p");
  p.className = "error";
  p.textContent = String(err);
  target.append(p);
}

// Two columns, lower stratum on the left; matched edges point right to left.
function drawHasse(view) {
  const lower = view.nodes.filter((n) => n.dim === view.lower.dim);
  const upper = view.nodes.filter((n) => n.dim === view.upper.dim);
  const row = 16;
  const height = Math.max(lower.length, upper.length) * row + 40;
  const width = 560;
  const xs = { [view.lower.dim]: 150, [view.upper.dim]: width - 150 };
  const pos = new Map();
  for (const col of [lower, upper]) {
    const offset = (height - col.length * row) / 2;
    col.forEach((n, i) => pos.set(n.id, { x: xs[n.dim], y: offset + i * row + row / 2 }));
  }

  const svg = el("svg", { width, height, viewBox: `0 0 ${width} ${height}` });
  const defs = el("defs");
  const marker = el("marker", { id: "arrow", viewBox: "0 0 10 10", refX: 10, refY: 5, markerWidth: 6, markerHeight: 6, orient: "auto" });
  marker.append(el("path", { d: "M0,0 L10,5 L0,10 z", fill: "#c22" }));
  defs.append(marker);
  svg.append(defs);

  for (const e of view.edges) {
    const a = pos.get(e.from);
    const b = pos.get(e.to);
    const line = e.matched
      ? el("line", { x1: b.x + 6, y1: b.y, x2: a.x - 6, y2: a.y, stroke: "#c22", "stroke-width": 2.2, "marker-end": "url(#arrow)" })
      : el("line", {
          x1: a.x - 6, y1: a.y, x2: b.x + 6, y2: b.y,
          stroke: "#bbb", "stroke-width": 0.7, "stroke-dasharray": e.regular ? "" : "3 2",
        });
    line.append(el("title", {}, `d_{${e.indices.join(",")}}`));
    svg.append(line);
  }

  for (const n of view.nodes) {
    const p = pos.get(n.id);
    const fill = n.critical ? (n.degenerate ? "#999" : "#225") : "#fff";
    const stroke = n.degenerate ? "#999" : "#225";
    const dot = el("circle", { cx: p.x, cy: p.y, r: 4.5, fill, stroke, "stroke-width": 1.2 });
    dot.append(el("title", {}, `${n.text}${n.degenerate ? " (degenerate)" : ""}`));
    svg.append(dot);
    const left = n.dim === view.lower.dim;
    svg.append(el("text", {
      x: left ? p.x - 10 : p.x + 10, y: p.y + 3,
      "text-anchor": left ? "end" : "start",
      fill: n.degenerate ? "#999" : "#222",
    }, n.pretty));
  }
  return svg;
}

function renderHasse() {
  const target = document.getElementById("hasse");
  const dim = Number(document.getElementById("hasse-dim").value);
  const len = Number(document.getElementById("hasse-len").value);
  try {
    const view = JSON.parse(hasse(dim, len));
    target.innerHTML = "";
    const critical = view.nodes.filter((n) => n.critical && !n.degenerate).length;
    const summary = document.createElement("p");
    summary.textContent = `strata (${view.lower.dim},${len}) and (${view.upper.dim},${len}): ${view.pairs} pairs, ${critical} nondegenerate critical cells`;
    target.append(summary, drawHasse(view));
  } catch (err) {
    fail(target, err);
  }
}

function renderFlow() {
  const target = document.getElementById("flow");
  try {
    const trace = JSON.parse(flow_trace(document.getElementById("flow-expr").value));
    target.innerHTML = "";
    const list = document.createElement("ol");
    list.className = "iterates";
    list.start = 0;
    trace.iterates.forEach((c, i) => {
      const li = document.createElement("li");
      li.textContent = `Φ^${i}: ${c}`;
      list.append(li);
    });
    const result = document.createElement("p");
    result.innerHTML = trace.converged
      ? `stable chain after ${trace.iterates.length - 1} step(s): <code></code>`
      : "no fixed point within the step limit; last iterate: <code></code>";
    result.querySelector("code").textContent = trace.stable;
    target.append(list, result);
  } catch (err) {
    fail(target, err);
  }
}

function renderScan() {
  const target = document.getElementById("scan");
  const degree = Number(document.getElementById("scan-degree").value);
  const from = Number(document.getElementById("scan-from").value);
  const to = Number(document.getElementById("scan-to").value);
  try {
    const report = JSON.parse(homology_scan(degree, from, to));
    target.innerHTML = "";
    const table = document.createElement("table");
    table.innerHTML = "<tr><th>length ≤</th><th>betti</th><th>torsion</th></tr>";
    for (const e of report.entries) {
      const tr = document.createElement("tr");
      for (const v of [e.scope.max_length, e.betti, e.torsion.join(", ") || "none"]) {
        const td = document.createElement("td");
        td.textContent = v;
        tr.append(td);
      }
      table.append(tr);
    }
    const note = document.createElement("p");
    note.textContent = report.stable_from === null
      ? "empty range"
      : `constant from length ${report.stable_from} on`;
    target.append(table, note);
  } catch (err) {
    fail(target, err);
  }
}

function on(id, fn) {
  document.getElementById(id).addEventListener("submit", (ev) => {
    ev.preventDefault();
    fn();
  });
}

await init();
on("hasse-form", renderHasse);
on("flow-form", renderFlow);
on("scan-form", renderScan);
renderHasse();
renderFlow();
renderScan();
