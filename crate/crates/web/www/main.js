import init, { trajectory, spectrum, time_scan, presets } from "./pkg/lzs_web.js";

const COLORS = ["#1f77b4", "#d62728"];
const $ = (id) => document.getElementById(id);
const num = (id) => parseFloat($(id).value);

// series: array of Float64Array-like columns sharing x.
function plot(canvas, x, series, { ymin, ymax, xlabel } = {}) {
  const ctx = canvas.getContext("2d");
  const w = canvas.width, h = canvas.height, pad = 40;
  ctx.clearRect(0, 0, w, h);
  const finite = series.flat().filter(Number.isFinite);
  let lo = ymin ?? Math.min(...finite), hi = ymax ?? Math.max(...finite);
  if (hi - lo < 1e-12) { lo -= 0.5; hi += 0.5; }
  const x0 = x[0], x1 = x[x.length - 1];
  const sx = (v) => pad + (v - x0) / (x1 - x0) * (w - 2 * pad);
  const sy = (v) => h - pad + (lo - v) / (hi - lo) * (h - 2 * pad);

  ctx.strokeStyle = "#999";
  ctx.strokeRect(pad, pad, w - 2 * pad, h - 2 * pad);
  ctx.fillStyle = "#444";
  ctx.font = "11px sans-serif";
  ctx.fillText(hi.toPrecision(4), 2, pad + 4);
  ctx.fillText(lo.toPrecision(4), 2, h - pad + 4);
  ctx.fillText(x0.toPrecision(3), pad, h - pad + 14);
  ctx.fillText(x1.toPrecision(3), w - pad - 30, h - pad + 14);
  if (xlabel) ctx.fillText(xlabel, w / 2, h - 8);

  series.forEach((ys, k) => {
    ctx.strokeStyle = COLORS[k % COLORS.length];
    ctx.beginPath();
    let pen = false;
    ys.forEach((y, i) => {
      if (!Number.isFinite(y)) { pen = false; return; }
      pen ? ctx.lineTo(sx(x[i]), sy(y)) : ctx.moveTo(sx(x[i]), sy(y));
      pen = true;
    });
    ctx.stroke();
  });
}

function columns(flat, stride) {
  const cols = Array.from({ length: stride }, () => []);
  for (let i = 0; i < flat.length; i += stride) {
    for (let k = 0; k < stride; k++) cols[k].push(flat[i + k]);
  }
  return cols;
}

function guarded(f) {
  return () => {
    $("status").textContent = "";
    try { f(); } catch (e) { $("status").textContent = String(e); }
  };
}

const runTrajectory = guarded(() => {
  const flat = trajectory(num("a"), num("delta0"), num("omega"), num("phi"), num("cycles"), parseInt($("frame").value));
  const [t, pg, pe] = columns(flat, 4);
  plot($("traj"), t, [pg, pe], { ymin: 0, ymax: 1, xlabel: "t" });
});

const runSpectrum = guarded(() => {
  const flat = spectrum(num("a"), num("delta0"), num("omega"), num("periods"), 1000);
  const [t, ep, em] = columns(flat, 3);
  plot($("spec"), t, [ep, em], { xlabel: "t" });
});

const runScan = guarded(() => {
  const flat = time_scan(num("a"), num("delta0"), num("omega"), num("cycles"), num("maxdev"), parseInt($("points").value));
  const [d, f, c] = columns(flat, 3);
  plot($("scan"), d, [f, c], { xlabel: "ΔT/T" });
});

async function main() {
  await init();
  const list = JSON.parse(presets());
  const sel = $("preset");
  for (const p of list) {
    const o = document.createElement("option");
    o.value = p.name;
    o.textContent = `${p.name}: ${p.description}`;
    sel.appendChild(o);
  }
  sel.value = "fig5_ghi";
  sel.addEventListener("change", () => {
    const p = list.find((q) => q.name === sel.value);
    $("a").value = p.a;
    $("delta0").value = p.delta0;
    $("omega").value = p.omega;
    if (p.cycles !== null) $("cycles").value = +p.cycles.toFixed(4);
    runTrajectory(); runSpectrum(); runScan();
  });
  $("run-traj").addEventListener("click", runTrajectory);
  $("run-spec").addEventListener("click", runSpectrum);
  $("run-scan").addEventListener("click", runScan);
  runTrajectory(); runSpectrum(); runScan();
}

main();
