// Story planner model: an editable list of scene cards that serializes to the
// engine's story JSON. Pure state + operations; the DOM bits live in main.ts.

import type { SceneDoc, StoryDoc } from "./protocol.js";

export const GESTURE_NAMES = ["point", "pinch", "pan", "zoom"] as const;
const PINCH_KINDS = new Set(["network", "dimpvis"]);

export interface PlannerModel {
  title: string;
  cards: SceneDoc[];
  dirty: boolean;
}

export function modelFromStory(story: StoryDoc): PlannerModel {
  return {
    title: story.title,
    cards: story.scenes.map((scene) => ({
      id: scene.id,
      chart: { ...scene.chart },
      data: scene.data,
      gestures: [...scene.gestures],
      transition: { ...scene.transition },
    })),
    dirty: false,
  };
}

export function serialize(model: PlannerModel): StoryDoc {
  return {
    title: model.title,
    scenes: model.cards.map((card) => ({
      id: card.id,
      chart: { ...card.chart },
      data: card.data,
      gestures: GESTURE_NAMES.filter((g) => card.gestures.includes(g)),
      transition: { ...card.transition },
    })),
  };
}

/** Remove the card at `from`, then insert it at index `to` of the shortened list. */
export function reorder(model: PlannerModel, from: number, to: number): PlannerModel {
  if (from < 0 || from >= model.cards.length) throw new RangeError(`from ${from} out of range`);
  if (to < 0 || to >= model.cards.length) throw new RangeError(`to ${to} out of range`);
  if (from === to) return model;
  const cards = [...model.cards];
  const [moved] = cards.splice(from, 1);
  cards.splice(to, 0, moved);
  return { ...model, cards, dirty: true };
}

export type EditResult = { ok: true; model: PlannerModel } | { ok: false; error: string };

export function editCard(model: PlannerModel, index: number, patch: Partial<SceneDoc>): EditResult {
  const card = model.cards[index];
  if (!card) return { ok: false, error: `no scene card at index ${index}` };
  const next: SceneDoc = {
    ...card,
    ...patch,
    chart: patch.chart ? { ...patch.chart } : card.chart,
    gestures: patch.gestures ? [...patch.gestures] : card.gestures,
    transition: patch.transition ? { ...patch.transition } : card.transition,
  };
  if (!next.id) return { ok: false, error: "scene id must not be empty" };
  if (model.cards.some((other, i) => i !== index && other.id === next.id)) {
    return { ok: false, error: `duplicate scene id "${next.id}"` };
  }
  for (const g of next.gestures) {
    if (!GESTURE_NAMES.includes(g as (typeof GESTURE_NAMES)[number])) {
      return { ok: false, error: `unknown gesture "${g}"` };
    }
  }
  if (next.gestures.includes("pinch") && !PINCH_KINDS.has(next.chart.kind)) {
    return { ok: false, error: `pinch is not supported on ${next.chart.kind} scenes` };
  }
  if (next.transition.duration_ms < 0) {
    return { ok: false, error: "transition duration must be >= 0" };
  }
  const cards = [...model.cards];
  cards[index] = next;
  return { ok: true, model: { ...model, cards, dirty: true } };
}

export function markSaved(model: PlannerModel): PlannerModel {
  return { ...model, dirty: false };
}
