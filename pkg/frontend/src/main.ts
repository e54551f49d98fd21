// Presenter console wiring: capture -> socket -> renderer -> compositor,
// plus the story planner panel.

import { startCapture } from "./capture.js";
import { composite, paintPresenterCutout, type LayerStack, type MaskCtx } from "./layers.js";
import {
  editCard,
  markSaved,
  modelFromStory,
  reorder,
  serialize,
  type PlannerModel,
  GESTURE_NAMES,
} from "./planner.js";
import type { SceneStateMsg, StoryDoc, StoryInfoMsg } from "./protocol.js";
import { drawCommands, drawHud } from "./renderer.js";
import { EngineSocket } from "./socket.js";

const WIDTH = 1280;
const HEIGHT = 720;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

const video = el<HTMLVideoElement>("camera");
const output = el<HTMLCanvasElement>("output");
const statusLine = el<HTMLDivElement>("status");
const plannerRoot = el<HTMLDivElement>("planner");
const saveButton = el<HTMLButtonElement>("save-story");
const plannerError = el<HTMLDivElement>("planner-error");

output.width = WIDTH;
output.height = HEIGHT;

const vizCanvas = document.createElement("canvas");
vizCanvas.width = WIDTH;
vizCanvas.height = HEIGHT;
const presenterCanvas = document.createElement("canvas");
presenterCanvas.width = WIDTH;
presenterCanvas.height = HEIGHT;

const outputCtx = output.getContext("2d") as unknown as MaskCtx;
const vizCtx = vizCanvas.getContext("2d")!;
const presenterCtx = presenterCanvas.getContext("2d") as unknown as MaskCtx;

let mask: CanvasImageSource | null = null;
let haveCutout = false;
let lastScene: SceneStateMsg | null = null;
let planner: PlannerModel | null = null;
let knownStory: StoryDoc | null = null;
let awaitingSaveAck = false;

const stack: LayerStack = {
  video,
  viz: vizCanvas,
  presenter: null,
};

function setStatus(text: string): void {
  statusLine.textContent = text;
}

function renderScene(msg: SceneStateMsg): void {
  lastScene = msg;
  drawCommands(vizCtx, msg.commands, WIDTH, HEIGHT);
  drawHud(vizCtx, msg.hud, WIDTH, HEIGHT);
}

function renderPlanner(): void {
  if (!planner) return;
  plannerRoot.textContent = "";
  planner.cards.forEach((card, index) => {
    const bar = document.createElement("div");
    bar.className = "scene-card";
    bar.draggable = true;
    bar.dataset.index = String(index);
    bar.textContent = `${card.id} — ${card.chart.kind}`;

    const gestures = document.createElement("span");
    gestures.className = "gestures";
    for (const name of GESTURE_NAMES) {
      const label = document.createElement("label");
      const box = document.createElement("input");
      box.type = "checkbox";
      box.checked = card.gestures.includes(name);
      box.addEventListener("change", () => {
        const next = box.checked
          ? [...card.gestures, name]
          : card.gestures.filter((g) => g !== name);
        const result = editCard(planner!, index, { gestures: next });
        if (result.ok) {
          planner = result.model;
          plannerError.textContent = "";
        } else {
          box.checked = !box.checked;
          plannerError.textContent = result.error;
        }
      });
      label.append(box, name);
      gestures.append(label);
    }
    bar.append(gestures);

    bar.addEventListener("dragstart", (event) => {
      event.dataTransfer?.setData("text/plain", String(index));
    });
    bar.addEventListener("dragover", (event) => event.preventDefault());
    bar.addEventListener("drop", (event) => {
      event.preventDefault();
      const from = Number(event.dataTransfer?.getData("text/plain"));
      if (!Number.isNaN(from) && planner) {
        planner = reorder(planner, from, index);
        renderPlanner();
      }
    });
    plannerRoot.append(bar);
  });
}

const socket = new EngineSocket({
  url: `ws://${location.host}/ws`,
  role: "presenter",
  onOpen: () => setStatus("connected"),
  onClose: () => setStatus("disconnected — reload to retry"),
  onMessage: (msg) => {
    switch (msg.type) {
      case "scene_state":
        renderScene(msg);
        break;
      case "story_info": {
        setStatus(`${msg.title} — scene ${msg.current + 1}/${msg.scenes.length}`);
        handleStoryInfo(msg);
        break;
      }
      case "transition":
        // the engine switches scenes instantly; fades are a client affair
        if (msg.kind === "fade" && msg.duration_ms > 0) {
          output.style.transition = `opacity ${msg.duration_ms}ms`;
          output.style.opacity = "0.25";
          setTimeout(() => (output.style.opacity = "1"), msg.duration_ms / 2);
        }
        break;
      case "error":
        if (awaitingSaveAck) {
          awaitingSaveAck = false;
          plannerError.textContent = `${msg.code}: ${msg.detail}`;
        } else {
          setStatus(`engine error ${msg.code}: ${msg.detail}`);
        }
        break;
    }
  },
});

function handleStoryInfo(msg: StoryInfoMsg): void {
  if (awaitingSaveAck) {
    // server accepted the planner update and echoed the story
    awaitingSaveAck = false;
    if (planner) planner = markSaved(planner);
    plannerError.textContent = "";
    renderPlanner();
    return;
  }
  if (planner === null || !planner.dirty) {
    // seed the editor from the engine's view of the story
    knownStory = {
      title: msg.title,
      scenes: msg.scenes.map((scene) => ({
        id: scene.id,
        chart: { kind: scene.kind },
        data: "",
        gestures: scene.gestures,
        transition: { kind: "cut", duration_ms: 0 },
      })),
    };
    if (planner === null) {
      planner = modelFromStory(knownStory);
      renderPlanner();
    }
  }
}

saveButton.addEventListener("click", () => {
  if (!planner) return;
  awaitingSaveAck = true;
  socket.sendPlannerUpdate(serialize(planner));
});

document.addEventListener("keydown", (event) => {
  if (event.key === "ArrowRight") socket.sendControl("next");
  if (event.key === "ArrowLeft") socket.sendControl("prev");
});
el<HTMLButtonElement>("next").addEventListener("click", () => socket.sendControl("next"));
el<HTMLButtonElement>("prev").addEventListener("click", () => socket.sendControl("prev"));

function loop(): void {
  haveCutout = paintPresenterCutout(presenterCtx, video, mask, WIDTH, HEIGHT);
  stack.presenter = haveCutout ? presenterCanvas : null;
  composite(outputCtx, stack, WIDTH, HEIGHT);
  requestAnimationFrame(loop);
}

startCapture(video, {
  onFrame: (frame) => socket.sendFrame(frame),
  onMask: (m) => (mask = m),
  onError: (detail) => setStatus(detail),
}).then(() => {
  setStatus("camera running");
  requestAnimationFrame(loop);
});
