// Draws engine render commands onto a 2D canvas. Geometry arrives in
// normalized screen units [0,1]; the only client-side math is scaling to
// pixels. Command order is already layer-sorted by the engine.

import type { Hud, RenderCommand } from "./protocol.js";

// subset of CanvasRenderingContext2D the renderer touches, so tests can pass
// a recording stub without a DOM
export interface Draw2D {
  fillStyle: string | CanvasGradient | CanvasPattern;
  strokeStyle: string | CanvasGradient | CanvasPattern;
  lineWidth: number;
  font: string;
  globalAlpha: number;
  clearRect(x: number, y: number, w: number, h: number): void;
  fillRect(x: number, y: number, w: number, h: number): void;
  strokeRect(x: number, y: number, w: number, h: number): void;
  beginPath(): void;
  moveTo(x: number, y: number): void;
  lineTo(x: number, y: number): void;
  arc(x: number, y: number, r: number, a0: number, a1: number): void;
  fill(): void;
  stroke(): void;
  fillText(text: string, x: number, y: number): void;
}

export const PALETTE = [
  "#4e79a7", "#f28e2b", "#e15759", "#76b7b2",
  "#59a14f", "#edc948", "#b07aa1", "#9c755f",
];

const OVERLAY_FILL = "rgba(250, 250, 244, 0.92)";
const TEXT_FILL = "#2b2b2b";
const EMPHASIS_STROKE = "#1a1a1a";

export function colorFor(index: number): string {
  return PALETTE[((index % PALETTE.length) + PALETTE.length) % PALETTE.length];
}

export function drawCommands(ctx: Draw2D, commands: RenderCommand[], width: number, height: number): void {
  ctx.clearRect(0, 0, width, height);
  for (const cmd of commands) {
    const color = colorFor(cmd.color);
    switch (cmd.op) {
      case "rect": {
        ctx.fillStyle = cmd.layer === "overlay" ? OVERLAY_FILL : color;
        ctx.fillRect(cmd.x * width, cmd.y * height, cmd.w * width, cmd.h * height);
        if (cmd.emphasis) {
          ctx.strokeStyle = EMPHASIS_STROKE;
          ctx.lineWidth = 3;
          ctx.strokeRect(cmd.x * width, cmd.y * height, cmd.w * width, cmd.h * height);
        }
        break;
      }
      case "circle": {
        ctx.beginPath();
        ctx.arc(cmd.cx * width, cmd.cy * height, Math.max(1, cmd.r * width), 0, Math.PI * 2);
        ctx.fillStyle = color;
        ctx.fill();
        if (cmd.emphasis) {
          ctx.strokeStyle = EMPHASIS_STROKE;
          ctx.lineWidth = 3;
          ctx.stroke();
        }
        break;
      }
      case "polyline": {
        if (cmd.points.length < 2) break;
        ctx.beginPath();
        ctx.moveTo(cmd.points[0][0] * width, cmd.points[0][1] * height);
        for (let i = 1; i < cmd.points.length; i++) {
          ctx.lineTo(cmd.points[i][0] * width, cmd.points[i][1] * height);
        }
        ctx.strokeStyle = cmd.layer === "background" ? "#999999" : color;
        ctx.lineWidth = cmd.emphasis ? 4 : 2;
        ctx.stroke();
        break;
      }
      case "text": {
        ctx.fillStyle = TEXT_FILL;
        ctx.font = `${Math.round(0.022 * height)}px sans-serif`;
        ctx.fillText(cmd.text, cmd.x * width, cmd.y * height);
        break;
      }
    }
  }
}

// presenter feedback for state that is otherwise invisible
export function drawHud(ctx: Draw2D, hud: Hud, width: number, height: number): void {
  if (hud.gesture) {
    ctx.fillStyle = "rgba(30, 30, 30, 0.65)";
    ctx.fillRect(8, 8, 150, 26);
    ctx.fillStyle = "#f2f2f2";
    ctx.font = "14px sans-serif";
    ctx.fillText(hud.gesture, 16, 26);
  }
  if (hud.time_label) {
    ctx.fillStyle = "rgba(30, 30, 30, 0.65)";
    ctx.fillRect(width - 110, 8, 102, 30);
    ctx.fillStyle = "#f2f2f2";
    ctx.font = "18px sans-serif";
    ctx.fillText(hud.time_label, width - 96, 31);
  }
  for (const anchor of hud.anchors) {
    ctx.beginPath();
    ctx.arc(anchor.x * width, anchor.y * height, 7, 0, Math.PI * 2);
    ctx.strokeStyle = "#ffffff";
    ctx.lineWidth = 2;
    ctx.stroke();
  }
}
