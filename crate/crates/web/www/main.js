// SPDX-License-Identifier: Apache-2.0

import init, { reduction_table, round_trip, extract, sample_netlist } from "./pkg/gfextract_web.js";

const $ = (id) => document.getElementById(id);

function esc(s) {
  return String(s).replace(/[&<>]/g, (c) => ({ "&": "&amp;", "<": "&lt;", ">": "&gt;" })[c]);
}

function fail(target, e) {
  target.innerHTML = `<p class="err">${esc(e)}</p>`;
}

function renderTable(t) {
  const head = [...Array(t.m).keys()].reverse().map((i) => `<th>z${i}</th>`).join("");
  const rows = t.rows
    .map((cols, k) => {
      const cells = [...Array(t.m).keys()]
        .reverse()
        .map((i) => (cols.includes(i) ? `<td class="on">s${k}</td>` : "<td>0</td>"))
        .join("");
      return `<tr><th>s${k}</th>${cells}</tr>`;
    })
    .join("");
  return `<p>${esc(t.polynomial)}: irreducible=${t.irreducible}, xor_cost=${t.xor_cost}</p>
    <table><tr><th></th>${head}</tr>${rows}</table>`;
}

function renderReport(r) {
  const bits = r.bits
    .map((b) => {
      const mark = b.in_polynomial ? " *" : "";
      const e = b.expression ? `\n    z${b.index} = ${b.expression}` : "";
      return `bit ${b.index}: monomials=${b.monomials} steps=${b.steps} hits=${b.out_field_hits ?? "-"}${mark}${e}`;
    })
    .join("\n");
  const lines = [
    `recovered P(x) = ${r.recovered ?? "none"}`,
    `verdict: ${r.verdict.status} (${r.verdict.method})`,
    ...r.verdict.notes.map((n) => `note: ${n}`),
    ...r.diagnostics.map((d) => `diagnostic: ${d}`),
    `rewrite_ms=${r.timings.rewrite_ms} peak_monomials=${r.peak_monomials}`,
    "",
    bits,
  ];
  return `<pre>${esc(lines.join("\n"))}</pre>`;
}

function showTable() {
  try {
    $("rt-out").innerHTML = renderTable(JSON.parse(reduction_table($("rt-poly").value)));
  } catch (e) {
    fail($("rt-out"), e);
  }
}

function runRoundTrip() {
  try {
    const r = JSON.parse(
      round_trip($("gx-poly").value, $("gx-share").checked, Number($("gx-seed").value), Number($("gx-budget").value)),
    );
    $("gx-out").innerHTML =
      `<p>${r.gates} gates (${r.and_gates} AND, ${r.xor_gates} XOR); recovered matches input: ${r.matches}</p>` +
      renderReport(r.report) +
      `<details><summary>netlist</summary><pre>${esc(r.netlist)}</pre></details>`;
  } catch (e) {
    fail($("gx-out"), e);
  }
}

function runExtract() {
  try {
    $("ex-out").innerHTML = renderReport(JSON.parse(extract($("ex-text").value)));
  } catch (e) {
    fail($("ex-out"), e);
  }
}

await init();
$("ex-text").value = sample_netlist();
$("rt-go").onclick = showTable;
$("gx-go").onclick = runRoundTrip;
$("ex-go").onclick = runExtract;
showTable();
