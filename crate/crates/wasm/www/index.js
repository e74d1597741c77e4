import init, { v_product_json, profile_json, trajectory_json } from "./pkg/stp_wasm.js";

const $ = (id) => document.getElementById(id);

function show(id, f) {
  const out = $(id);
  try {
    out.textContent = f();
    out.className = "";
    return true;
  } catch (e) {
    out.textContent = String(e);
    out.className = "err";
    return false;
  }
}

// Plots the V-norm of each state, scaled so states of different dimension compare.
function plot(traj) {
  const c = $("plot");
  const g = c.getContext("2d");
  g.clearRect(0, 0, c.width, c.height);
  const norms = traj.states.map((s) => Math.sqrt(s.reduce((a, v) => a + v * v, 0) / s.length));
  const t = traj.t;
  const pad = 40;
  const tMin = t[0], tMax = t[t.length - 1] || 1;
  const yMax = Math.max(...norms, 1e-12);
  const x = (v) => pad + ((v - tMin) / (tMax - tMin || 1)) * (c.width - 2 * pad);
  const y = (v) => c.height - pad - (v / yMax) * (c.height - 2 * pad);

  g.strokeStyle = "#999";
  g.beginPath();
  g.moveTo(pad, pad);
  g.lineTo(pad, c.height - pad);
  g.lineTo(c.width - pad, c.height - pad);
  g.stroke();
  g.fillStyle = "#333";
  g.fillText(yMax.toPrecision(4), 4, pad);
  g.fillText(String(tMax), c.width - pad - 10, c.height - pad + 16);
  g.fillText("||x(t)||_V", pad + 4, pad - 8);

  g.strokeStyle = "#1565c0";
  g.beginPath();
  norms.forEach((n, i) => (i ? g.lineTo(x(t[i]), y(n)) : g.moveTo(x(t[i]), y(n))));
  g.stroke();
  g.fillStyle = "#1565c0";
  norms.forEach((n, i) => g.fillRect(x(t[i]) - 2, y(n) - 2, 4, 4));
}

await init();

$("vprod").onclick = () => show("vprod-out", () => v_product_json($("matrix").value, $("vector").value));

$("profile").onclick = () =>
  show("profile-out", () => profile_json($("matrix").value, Number($("r0").value)));

$("simulate").onclick = () => {
  let traj;
  const ok = show("simulate-out", () => {
    traj = JSON.parse(
      trajectory_json(
        $("matrix").value,
        $("vector").value,
        $("continuous").checked,
        Number($("samples").value),
        Number($("t-end").value),
      ),
    );
    const last = traj.states[traj.states.length - 1];
    return `final state (dim ${last.length}): [${last.map((v) => +v.toPrecision(6)).join(", ")}]`;
  });
  if (ok) plot(traj);
};
