import { describe, expect, it } from "vitest";

import { LAYER_ORDER, composite, paintPresenterCutout } from "../src/layers.js";
import { drawCommands } from "../src/renderer.js";
import { recordingCtx } from "./stub_ctx.js";

const video = { kind: "video" };
const viz = { kind: "viz" };
const presenter = { kind: "presenter" };

describe("composite", () => {
  it("draws video below viz below presenter", () => {
    const ctx = recordingCtx();
    const order = composite(ctx, { video, viz, presenter }, 100, 100);
    expect(order).toEqual([...LAYER_ORDER]);
    const drawn = ctx.calls.filter((c) => c.op === "drawImage").map((c) => (c.args[0] as any).kind);
    expect(drawn).toEqual(["video", "viz", "presenter"]);
  });

  it("degrades to two layers without a presenter cutout", () => {
    const ctx = recordingCtx();
    const order = composite(ctx, { video, viz, presenter: null }, 100, 100);
    expect(order).toEqual(["video", "viz"]);
  });

  it("z-order holds while commands update mid-gesture", () => {
    // interleave visualization redraws with composites; the stacking order
    // of the output frame never changes
    const out = recordingCtx();
    const vizCtx = recordingCtx();
    for (let frame = 0; frame < 4; frame++) {
      drawCommands(
        vizCtx,
        [{ op: "rect", layer: "marks", x: 0.1 * frame, y: 0, w: 0.2, h: 1, color: 0, emphasis: false }],
        100,
        100,
      );
      const order = composite(out, { video, viz, presenter }, 100, 100);
      expect(order).toEqual(["video", "viz", "presenter"]);
    }
    const sources = out.calls.filter((c) => c.op === "drawImage").map((c) => (c.args[0] as any).kind);
    expect(sources).toEqual(Array(4).fill(["video", "viz", "presenter"]).flat());
  });
});

describe("paintPresenterCutout", () => {
  it("stamps the mask then keeps video pixels inside it", () => {
    const ctx = recordingCtx();
    const mask = { kind: "mask" };
    const ok = paintPresenterCutout(ctx, video, mask, 100, 100);
    expect(ok).toBe(true);
    const draws = ctx.calls.filter((c) => c.op === "drawImage").map((c) => (c.args[0] as any).kind);
    expect(draws).toEqual(["mask", "video"]);
  });

  it("all-missing mask leaves the visualization fully visible", () => {
    const ctx = recordingCtx();
    const ok = paintPresenterCutout(ctx, video, null, 100, 100);
    expect(ok).toBe(false);
    expect(ctx.calls.filter((c) => c.op === "drawImage").length).toBe(0);
  });
});
