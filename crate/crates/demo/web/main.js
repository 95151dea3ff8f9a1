import init, { grade_judgment, toy_corpus, analyze_pair, cluster_demo } from "./pkg/mtqe_demo.js";

const $ = (id) => document.getElementById(id);

function show(el, result, render) {
  if (result.error) {
    el.innerHTML = `<p class="error">${result.error}</p>`;
  } else {
    el.innerHTML = render(result);
  }
}

function setupGrading() {
  const sliders = [];
  for (let i = 1; i <= 10; i++) {
    const label = document.createElement("label");
    label.innerHTML = `p${i} <input type="range" min="0" max="4" value="2"> <span>2</span>`;
    $("sliders").appendChild(label);
    sliders.push(label.querySelector("input"));
  }
  const update = () => {
    sliders.forEach((s) => (s.nextElementSibling.textContent = s.value));
    const r = JSON.parse(grade_judgment(new Uint8Array(sliders.map((s) => Number(s.value)))));
    $("total").textContent = r.total;
    $("score").textContent = r.score.toFixed(3);
    $("grade").textContent = r.grade;
  };
  sliders.forEach((s) => s.addEventListener("input", update));
  update();
}

let corpusSeed = 0;

function loadCorpus() {
  const c = JSON.parse(toy_corpus(60, BigInt(corpusSeed++)));
  $("src-corpus").value = c.source;
  $("tgt-corpus").value = c.target;
  $("src-sentence").value = c.source.split("\n")[0];
  $("tgt-sentence").value = c.target.split("\n")[0];
  analyze();
}

function analyze() {
  const r = JSON.parse(
    analyze_pair(
      $("src-corpus").value.trimEnd(),
      $("tgt-corpus").value.trimEnd(),
      $("src-sentence").value,
      $("tgt-sentence").value,
      Number($("order").value),
      Number($("threshold").value),
    ),
  );
  show($("features"), r, (r) => {
    const rows = r.features
      .map((f, i) => `<tr><td>f${i + 1} ${f.name}</td><td>${+f.value.toFixed(4)}</td></tr>`)
      .join("");
    return `<p>source tokens: ${r.source_tokens.join(" | ")}<br>
      target tokens: ${r.target_tokens.join(" | ")}<br>
      vocabulary ${r.source_vocab} / ${r.target_vocab}, lexicon entries ${r.lexicon_entries}</p>
      <table><tr><th>feature</th><th>value</th></tr>${rows}</table>`;
  });
}

function clusters() {
  const sep = Number($("separation").value);
  $("separation-value").textContent = sep;
  const r = JSON.parse(cluster_demo(sep, 200, BigInt($("seed").value || 0)));
  show($("clusters"), r, (r) => {
    const head = r.grades.map((g) => `<th>${g}</th>`).join("");
    const body = r.confusion
      .map((row, i) => `<tr><td>${r.grades[i]}</td>${row.map((c) => `<td>${c}</td>`).join("")}</tr>`)
      .join("");
    return `<p>held-out accuracy ${(100 * r.accuracy).toFixed(2)}% (${r.same} of ${r.total})</p>
      <table><tr><th>true \\ predicted</th>${head}</tr>${body}</table>`;
  });
}

await init();
setupGrading();
["src-corpus", "tgt-corpus", "src-sentence", "tgt-sentence", "order", "threshold"].forEach((id) =>
  $(id).addEventListener("input", analyze),
);
$("reload-corpus").addEventListener("click", loadCorpus);
loadCorpus();
["separation", "seed"].forEach((id) => $(id).addEventListener("input", clusters));
clusters();
