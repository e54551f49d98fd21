// Three-layer compositing: webcam video at the bottom, the visualization
// canvas in the middle, the segmented presenter cutout on top. The z-order is
// structural (draw order into one output canvas), so it holds under every
// state transition by construction.

import type { Draw2D } from "./renderer.js";

export type DrawableSource = CanvasImageSource | object;

export interface CompositorCtx extends Draw2D {
  drawImage(source: DrawableSource, x: number, y: number, w: number, h: number): void;
  save(): void;
  restore(): void;
}

export interface LayerStack {
  video: DrawableSource;            // live webcam element
  viz: DrawableSource;              // canvas painted from render commands
  presenter: DrawableSource | null; // segmentation-masked cutout, null until ready
}

export const LAYER_ORDER = ["video", "viz", "presenter"] as const;

/** Draw one composited output frame; returns the layer names in draw order. */
export function composite(
  ctx: CompositorCtx,
  stack: LayerStack,
  width: number,
  height: number,
): string[] {
  const drawn: string[] = [];
  ctx.save();
  ctx.clearRect(0, 0, width, height);
  ctx.drawImage(stack.video, 0, 0, width, height);
  drawn.push("video");
  ctx.drawImage(stack.viz, 0, 0, width, height);
  drawn.push("viz");
  if (stack.presenter !== null) {
    ctx.drawImage(stack.presenter, 0, 0, width, height);
    drawn.push("presenter");
  }
  ctx.restore();
  return drawn;
}

export interface MaskCtx extends CompositorCtx {
  globalCompositeOperation: string;
}

/**
 * Paint the presenter cutout: the segmentation mask stamped first, then the
 * video kept only where the mask is opaque (source-in). Degrades to a no-op
 * cutout when the mask is missing, which leaves a two-layer composite.
 */
export function paintPresenterCutout(
  ctx: MaskCtx,
  video: DrawableSource,
  mask: DrawableSource | null,
  width: number,
  height: number,
): boolean {
  ctx.save();
  ctx.clearRect(0, 0, width, height);
  if (mask === null) {
    ctx.restore();
    return false;
  }
  ctx.drawImage(mask, 0, 0, width, height);
  ctx.globalCompositeOperation = "source-in";
  ctx.drawImage(video, 0, 0, width, height);
  ctx.globalCompositeOperation = "source-over";
  ctx.restore();
  return true;
}
