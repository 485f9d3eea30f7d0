import init, { approximate, classify, scan } from "./pkg/fal_spectrum_web.js";

const $ = (id) => document.getElementById(id);
const digits = () => Number($("digits").value);

function show(id, thunk) {
  const out = $(id);
  try {
    const value = JSON.parse(thunk());
    out.classList.remove("error");
    out.textContent = JSON.stringify(value, null, 2);
    return value;
  } catch (e) {
    out.classList.add("error");
    out.textContent = String(e);
    return null;
  }
}

// Dots for each scanned sum at its vd, with the three boundaries as lines.
function plot(rows) {
  const canvas = $("plot");
  const g = canvas.getContext("2d");
  const w = canvas.width, h = canvas.height;
  g.clearRect(0, 0, w, h);
  const boundaries = JSON.parse(classify("0", digits())).boundaries;
  const lo = 3.0, hi = 10.6;
  const x = (v) => 20 + ((v - lo) / (hi - lo)) * (w - 40);
  g.font = "12px sans-serif";
  for (const b of boundaries) {
    const bx = x(Number(b.value));
    g.strokeStyle = "#c33";
    g.beginPath(); g.moveTo(bx, 10); g.lineTo(bx, h - 20); g.stroke();
    g.fillStyle = "#c33";
    g.fillText(b.name, bx + 3, 22);
  }
  g.fillStyle = "#235";
  rows.forEach((r, i) => {
    const y = h - 30 - ((i % 40) / 40) * (h - 70);
    g.beginPath(); g.arc(x(Number(r.vd_decimal)), y, 2, 0, 2 * Math.PI); g.fill();
  });
  g.fillStyle = "#444";
  for (let t = 4; t <= 10; t++) g.fillText(String(t), x(t) - 3, h - 5);
}

await init();

$("run-approx").onclick = () =>
  show("approx-out", () => approximate($("target").value, $("eps").value, $("mode").value, digits()));

$("run-classify").onclick = () =>
  show("classify-out", () => classify($("density").value, digits()));

$("run-scan").onclick = () => {
  const rows = show("scan-out", () => scan(Number($("budget").value), digits()));
  if (rows) {
    $("scan-out").textContent = `${rows.length} sums\n` +
      rows.slice(0, 20).map((r) => `${r.vd_decimal}  ${r.recipe}`).join("\n") +
      (rows.length > 20 ? "\n..." : "");
    plot(rows);
  }
};
