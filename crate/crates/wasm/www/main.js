import init, { prove, belief, solve } from "./pkg/dbbel_wasm.js";

const $ = (id) => document.getElementById(id);

const gamma = "(Y -> !G & !R) & (R -> !G & !Y) & (G -> !R & !Y) & (Y | G | R)";
const forest = {
  supp: [`(Y | G) & (${gamma})`, `R & (${gamma})`],
  trees: [
    {
      root: `(Y | G) & (${gamma})`,
      nodes: [
        { id: 0, parent: null, branch: null },
        { id: 2, parent: 0, branch: "Y" },
        { id: 3, parent: 0, branch: "!Y" },
      ],
    },
    { root: `R & (${gamma})`, nodes: [{ id: 1, parent: null, branch: null }] },
  ],
};
const problem = {
  depth: 1,
  mode: "gensat",
  raw_constraints: [
    { terms: [["1", "p"]], rel: ">=", bound: "1/2" },
    { terms: [["1", "q"]], rel: ">=", bound: "2/3" },
  ],
};

function show(id, text) {
  $(id).textContent = text;
}

async function main() {
  await init();
  $("status").textContent = "Ready.";
  $("forest").value = JSON.stringify(forest, null, 2);
  $("problem").value = JSON.stringify(problem, null, 2);

  $("prove-run").onclick = () =>
    show("prove-out", prove($("premises").value, $("goal").value, Number($("prove-k").value), $("prove-desugar").checked));
  $("belief-run").onclick = () =>
    show("belief-out", belief($("forest").value, $("mass").value, $("queries").value, true));
  $("solve-run").onclick = () =>
    show("solve-out", solve($("problem").value, $("solve-normalize").checked, false));
}

main().catch((e) => {
  $("status").textContent = `Failed to load: ${e}`;
});
