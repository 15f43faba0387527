import init, { curves, routes, certify } from "./pkg/w1copula_web.js";

const $ = (id) => document.getElementById(id);
const laws = () => [$("x").value, $("y").value];
const samples = () => [$("sa").value, $("sb").value];

function fail(e) {
  $("error").textContent = String(e && e.message ? e.message : e);
}

function clearError() {
  $("error").textContent = "";
}

// rho in [-1, 1] to a blue-grey-red ramp; m and w get fixed colours
function colour(copula) {
  if (copula === "m") return "#000000";
  if (copula === "w") return "#d4a017";
  if (copula === "pi") return "#777777";
  const rho = parseFloat(copula.split(":")[1]);
  const s = (rho + 1) / 2;
  const r = Math.round(40 + 200 * s);
  const b = Math.round(240 - 200 * s);
  return `rgb(${r},60,${b})`;
}

function fmt(v) {
  return Math.abs(v) < 1e-4 && v !== 0 ? v.toExponential(3) : v.toFixed(6);
}

function draw(data) {
  const c = $("canvas");
  const g = c.getContext("2d");
  const pad = { l: 50, r: 10, t: 10, b: 30 };
  const w = c.width - pad.l - pad.r;
  const h = c.height - pad.t - pad.b;
  const t = data.t_grid;
  const lo = t[0];
  const hi = t[t.length - 1];
  const top = Math.max(1e-12, ...data.curves.flatMap((k) => k.values));
  const px = (x) => pad.l + ((x - lo) / (hi - lo)) * w;
  const py = (y) => pad.t + h - (y / top) * h;

  g.clearRect(0, 0, c.width, c.height);
  g.strokeStyle = "#999";
  g.fillStyle = "#444";
  g.font = "12px sans-serif";
  g.beginPath();
  g.moveTo(pad.l, pad.t);
  g.lineTo(pad.l, pad.t + h);
  g.lineTo(pad.l + w, pad.t + h);
  g.stroke();
  for (let i = 0; i <= 4; i++) {
    const y = (top * i) / 4;
    g.fillText(y.toFixed(2), 5, py(y) + 4);
    const x = lo + ((hi - lo) * i) / 4;
    g.fillText(x.toFixed(2), px(x) - 14, pad.t + h + 18);
  }

  for (const k of data.curves) {
    g.strokeStyle = colour(k.copula);
    g.lineWidth = k.copula === "m" || k.copula === "w" ? 2.5 : 1.2;
    g.beginPath();
    k.values.forEach((v, i) => (i ? g.lineTo(px(t[i]), py(v)) : g.moveTo(px(t[i]), py(v))));
    g.stroke();
  }

  const rows = [...data.curves].sort((a, b) => a.area - b.area);
  $("areas").innerHTML =
    "<tr><th>copula</th><th>area</th></tr>" +
    rows
      .map(
        (k) =>
          `<tr><th><span class="swatch" style="background:${colour(k.copula)}"></span>${k.copula}</th>` +
          `<td>${fmt(k.area)}</td></tr>`,
      )
      .join("");
}

function plot() {
  clearError();
  try {
    const [x, y] = laws();
    const [a, b] = samples();
    const grid = parseInt($("grid").value, 10) || 401;
    draw(JSON.parse(curves(x, y, $("copulas").value, grid, a, b)));
  } catch (e) {
    fail(e);
  }
}

// slider: the chosen Gaussian against the two bounds
function slide() {
  const rho = parseFloat($("rho").value);
  $("rho-label").textContent = rho.toFixed(2);
  $("copulas").value = `m,w,gaussian:${rho}`;
  plot();
}

function showRoutes() {
  clearError();
  try {
    const [x, y] = laws();
    const [a, b] = samples();
    const r = JSON.parse(routes(x, y, a, b));
    $("routes-out").innerHTML =
      "<tr><th>route</th><th>value</th><th>error estimate</th><th>method</th></tr>" +
      ["auto", "quantile", "cdf_area"]
        .map((k) => `<tr><th>${k}</th><td>${fmt(r[k].value)}</td><td>${fmt(r[k].error_estimate)}</td><td>${r[k].method}</td></tr>`)
        .join("");
  } catch (e) {
    fail(e);
  }
}

function showCertificate() {
  clearError();
  $("verdict").textContent = "running…";
  // let the label paint before the synchronous call
  setTimeout(() => {
    try {
      const [x, y] = laws();
      const [a, b] = samples();
      const n = parseInt($("n").value, 10);
      const seed = BigInt($("seed").value || 0);
      const r = JSON.parse(certify(x, y, $("copulas").value, n, seed, a, b));
      $("verdict").textContent = r.passed
        ? "passed: m is smallest and w largest within 3 standard errors"
        : `failed: ${r.violations.map((v) => `${v.copula} (${v.claim})`).join(", ")}`;
      $("cert-out").innerHTML =
        "<tr><th>copula</th><th>mean</th><th>std error</th></tr>" +
        r.estimates.map((e) => `<tr><th>${e.copula}</th><td>${fmt(e.mean)}</td><td>${fmt(e.std_error)}</td></tr>`).join("");
    } catch (e) {
      $("verdict").textContent = "";
      fail(e);
    }
  }, 0);
}

await init();
$("plot").addEventListener("click", plot);
$("rho").addEventListener("input", slide);
$("routes").addEventListener("click", showRoutes);
$("certify").addEventListener("click", showCertificate);
plot();
showRoutes();
