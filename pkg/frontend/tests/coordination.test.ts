/** Scripted coordination tests: the three acceptance behaviors driven
 * through the real view code against engine-recorded fixtures. */

import { beforeEach, describe, expect, it } from "vitest";

import { Api } from "../src/api.js";
import { Store } from "../src/state.js";
import { ControlPanelView } from "../src/views/controlPanel.js";
import { PerfConfView } from "../src/views/perfConf.js";
import { ReliabilityView } from "../src/views/reliability.js";
import { TrinaryView } from "../src/views/trinary.js";
import { FakeService, until } from "./fake_service.js";

let fake: FakeService;
let store: Store;

beforeEach(async () => {
  document.body.innerHTML = "";
  fake = new FakeService();
  store = new Store(new Api("", fake.fetch));
  await store.connect("fix");
});

describe("slider drag", () => {
  it("issues an operating-point update and the trinary view refreshes within one cycle", async () => {
    new ControlPanelView(store).mount(document.body);
    const trinary = new TrinaryView(store).mount(document.body);
    await until(
      () => trinary.body.querySelector(".trinary-chart") !== null,
      "initial trinary render",
    );

    const before = trinary.body.querySelector('rect[data-category="Rejected"]');
    expect(before).toBeNull(); // nothing rejected at the default point

    const slider = document.querySelector<HTMLInputElement>(
      'input.slider-upper[data-classifier="LR"]',
    )!;
    slider.value = "0.8";
    slider.dispatchEvent(new Event("input", { bubbles: true }));

    await until(() => fake.putCalls.length === 1, "PUT operating-point");
    expect(fake.putCalls[0]).toEqual({
      classifier: "LR",
      body: { lower: 0.5, upper: 0.8 },
    });

    // one refresh cycle later the view shows the service's new counts
    const expected = fake.fixtures.states.afterDrag.trinary.series[0].counts.rejected;
    await until(
      () =>
        trinary.body.querySelector(
          `rect[data-category="Rejected"][data-value="${expected}"]`,
        ) !== null,
      "trinary view showing the rejected segment",
    );
  });
});

describe("perf-conf segment click", () => {
  it("creates a slot selection whose expression and members match the engine", async () => {
    const view = new PerfConfView(store).mount(document.body);
    await until(
      () => view.body.querySelector('rect[data-bin="8"][data-category="FP"]') !== null,
      "perf-conf render",
    );
    const segment = view.body.querySelector<SVGRectElement>(
      'rect[data-bin="8"][data-category="FP"]',
    )!;
    const segmentCount = Number(segment.getAttribute("data-count"));
    segment.dispatchEvent(new Event("click"));

    await until(() => fake.selectionPosts.length === 1, "POST selection");
    const posted = fake.selectionPosts[0].body;
    expect(posted.slot).toBe("A");
    // the predicate the view built is exactly the engine's wire form
    expect(posted.expr).toEqual(fake.fixtures.segmentClick.expr);

    // and the member set the service resolves for it matches the engine
    // evaluation frozen into the fixture (computed by the Python engine)
    const members = await store.api.members("fix", fake.fixtures.segmentClick.selection.id);
    expect(members.members).toEqual(fake.fixtures.segmentClick.members);
    expect(members.members.length).toBe(segmentCount);
    expect(members.members.length).toBe(fake.fixtures.segmentClick.expected_count);
  });
});

describe("focus marker", () => {
  it("lands in the score bin of the focus item across views", async () => {
    await store.setFocus("r29"); // score 0.73
    const perfConf = new PerfConfView(store).mount(document.body);
    const reliability = new ReliabilityView(store).mount(document.body);
    await until(
      () => perfConf.body.querySelector(".focus-marker") !== null,
      "perf-conf focus marker",
    );
    const marker = perfConf.body.querySelector(".focus-marker")!;
    expect(marker.getAttribute("data-bin")).toBe(String(fake.fixtures.focus.perfConfBin));

    await until(
      () => reliability.body.querySelector(".focus-marker") !== null,
      "reliability focus marker",
    );
    const dot = reliability.body.querySelector(".focus-marker")!;
    expect(Number(dot.getAttribute("data-x"))).toBeCloseTo(fake.fixtures.focus.score, 10);
  });
});
