import init, { scaling_sweep, landscape, channel_on_b } from "./pkg/qdiscord_web.js";

const fmt = (x) => x.toFixed(6);

function field(section, name) {
  return section.querySelector(`[name="${name}"]`).value;
}

function guard(section, fn) {
  const out = section.querySelector(".out");
  out.classList.remove("err");
  try {
    fn(out);
  } catch (e) {
    out.textContent = String(e.message ?? e);
    out.classList.add("err");
  }
}

function drawSweep(canvas, sweep) {
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  const pad = 40;
  const ymax = Math.max(sweep.plain, 1e-9) * 1.1;
  const x = (p) => pad + ((p - 0.5) / 0.5) * (w - 2 * pad);
  const y = (v) => h - pad - (v / ymax) * (h - 2 * pad);
  ctx.clearRect(0, 0, w, h);
  ctx.strokeStyle = "#999";
  ctx.strokeRect(pad, pad, w - 2 * pad, h - 2 * pad);
  ctx.fillStyle = "#444";
  ctx.fillText("Tr σ² = 0.5", pad, h - pad + 15);
  ctx.fillText("1", w - pad - 5, h - pad + 15);
  ctx.fillText(fmt(ymax), 2, pad);

  ctx.setLineDash([5, 4]);
  ctx.strokeStyle = "#888";
  ctx.beginPath();
  ctx.moveTo(x(0.5), y(sweep.plain * 0.5));
  ctx.lineTo(x(1), y(sweep.plain));
  ctx.stroke();
  ctx.setLineDash([]);

  ctx.fillStyle = "#1565c0";
  for (const p of sweep.points) {
    ctx.beginPath();
    ctx.arc(x(p.purity), y(p.with_ancilla), 4, 0, 2 * Math.PI);
    ctx.fill();
  }
}

function drawLandscape(canvas, land) {
  const ctx = canvas.getContext("2d");
  const cw = canvas.width / land.n_phi;
  const ch = canvas.height / land.n_theta;
  const span = land.max - land.min || 1;
  land.values.forEach((v, k) => {
    const i = Math.floor(k / land.n_phi);
    const j = k % land.n_phi;
    const t = (v - land.min) / span;
    ctx.fillStyle = `hsl(210, 70%, ${15 + 75 * t}%)`;
    ctx.fillRect(j * cw, i * ch, Math.ceil(cw), Math.ceil(ch));
  });
}

function wire(id, run) {
  const section = document.getElementById(id);
  section.querySelector("button").addEventListener("click", () => guard(section, (out) => run(section, out)));
}

await init();

wire("scaling", (s, out) => {
  const sweep = JSON.parse(scaling_sweep(field(s, "state"), Number(field(s, "steps"))));
  drawSweep(s.querySelector("canvas"), sweep);
  const half = sweep.points[0];
  out.textContent = `D_G(ρ) = ${fmt(sweep.plain)}; at purity 0.5: ${fmt(half.with_ancilla)} (ratio ${fmt(half.with_ancilla / sweep.plain)})`;
});

wire("landscape", (s, out) => {
  const land = JSON.parse(landscape(field(s, "state"), field(s, "measure"), 45, 90));
  drawLandscape(s.querySelector("canvas"), land);
  out.textContent = `min ${fmt(land.min)}, max ${fmt(land.max)}`;
});

wire("channel", (s, out) => {
  const r = JSON.parse(channel_on_b(field(s, "state"), field(s, "channel"), Number(field(s, "dout"))));
  const row = (snap) =>
    `<tr><td>${snap.label}</td><td>${fmt(snap.discord)}</td><td>${fmt(snap.geometric_discord)}</td><td>${fmt(snap.mutual_info)}</td></tr>`;
  s.querySelector("tbody").innerHTML = row(r.before) + row(r.after);
  out.textContent = `channel: ${r.channel}`;
});
