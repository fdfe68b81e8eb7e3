import init, { HotSeat, evaluate, compare, explore } from "./pkg/headsup_web.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);
let table = null;

function tabs() {
  for (const b of document.querySelectorAll("nav button")) {
    b.onclick = () => {
      for (const x of document.querySelectorAll("nav button, section")) x.classList.remove("on");
      b.classList.add("on");
      $(b.dataset.tab).classList.add("on");
    };
  }
}

function attempt(fn, errorEl) {
  try {
    errorEl.textContent = "";
    return fn();
  } catch (e) {
    errorEl.textContent = e.message ?? String(e);
    return null;
  }
}

function button(label, onclick) {
  const b = document.createElement("button");
  b.textContent = label;
  b.onclick = onclick;
  return b;
}

function render(view) {
  const hand = view.hand;
  const reveal = $("t-reveal").checked;
  const toAct = view.phase === "acting" ? hand.to_act : null;
  for (const s of [0, 1]) {
    const el = $(`seat-${s}`);
    el.classList.toggle("turn", toAct === s);
    let holes = "";
    const hole = hand?.deck?.hole?.[s];
    if (hole) holes = reveal || toAct === s || hand.settlement ? hole.join(" ") : "?? ??";
    const dealer = hand && hand.dealer_seat === s ? " (dealer)" : "";
    const behind = hand ? hand.stacks[s] : view.stacks[s];
    const inFront = hand ? hand.committed[s] : 0;
    el.innerHTML = `<b>seat ${s}${dealer}</b><br>${behind} behind, ${inFront} in<br><span class="cards">${holes}</span>`;
  }
  $("t-board").textContent = hand?.deck?.board?.join(" ") || "-";
  $("t-pot").textContent = hand ? hand.pot : 0;

  const a = hand?.annotations;
  const status = {
    idle: `hands played: ${view.hands_played}`,
    acting: a && `hand ${hand.hand_number}, ${a.current_round}: seat ${a.waiting_for} to act, ${a.amount_to_call} to call` +
      (a.previous_action ? ` (last: ${a.previous_action})` : ""),
    declare: "showdown: agree on the winner",
    over: `match over after ${view.hands_played} hands`,
  };
  $("t-status").textContent = status[view.phase];

  const box = $("actions");
  box.replaceChildren();
  const err = $("t-error");
  const apply = (fn) => { const v = attempt(fn, err); if (v) render(JSON.parse(v)); };
  if (view.phase === "idle") box.append(button("deal next hand", () => apply(() => table.nextHand())));
  if (view.phase === "declare") {
    for (const w of ["0", "1", "chop"]) {
      box.append(button(w === "chop" ? "chop" : `seat ${w} won`, () => apply(() => table.declare(w))));
    }
  }
  for (const spec of view.legal_actions) {
    if (spec.kind === "bet" || spec.kind === "raise") {
      const input = document.createElement("input");
      Object.assign(input, { type: "number", min: spec.min_amount, max: spec.max_amount, value: spec.min_amount });
      const label = `${spec.kind} [${spec.min_amount}, ${spec.max_amount}]`;
      box.append(input, button(label, () => apply(() => table.act(spec.kind, Number(input.value)))));
    } else {
      const label = spec.kind === "call" ? `call ${a.amount_to_call}` : spec.kind;
      box.append(button(label, () => apply(() => table.act(spec.kind, undefined))));
    }
  }
  $("log").textContent = view.log.slice().reverse().join("\n");
}

function newMatch() {
  const t = attempt(
    () => new HotSeat(num("t-stack"), num("t-sb"), num("t-bb"), $("t-physical").checked, num("t-seed")),
    $("t-error"),
  );
  if (!t) return;
  table?.free();
  table = t;
  render(JSON.parse(table.view()));
}

function show(el, fn) {
  try {
    el.textContent = JSON.stringify(JSON.parse(fn()), null, 2);
  } catch (e) {
    el.textContent = e.message ?? String(e);
  }
}

await init();
tabs();
$("t-new").onclick = newMatch;
$("t-reveal").onchange = () => table && render(JSON.parse(table.view()));
$("e-go").onclick = () => show($("e-out"), () => evaluate($("e-cards").value));
$("c-go").onclick = () => show($("e-out"), () => compare($("c-board").value, $("c-a").value, $("c-b").value));
$("x-go").onclick = () =>
  show($("x-out"), () => explore($("x-street").value, num("x-stack"), num("x-sb"), num("x-bb")));
newMatch();
