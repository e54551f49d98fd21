// Wire types for the engine's WebSocket protocol. The client never computes
// gestures or geometry; it draws exactly the commands it receives.

export type Handedness = "Left" | "Right";

export interface Landmark {
  x: number;
  y: number;
  z?: number;
}

export interface HandEntry {
  handedness: Handedness;
  confidence: number;
  landmarks: Landmark[]; // 21 points
}

export interface LandmarkFrame {
  timestamp_ms: number;
  hands: HandEntry[];
}

export type RenderLayer = "background" | "marks" | "highlight" | "overlay";

interface CommandBase {
  layer: RenderLayer;
  color: number;
  emphasis: boolean;
}

export interface RectCommand extends CommandBase {
  op: "rect";
  x: number;
  y: number;
  w: number;
  h: number;
}

export interface CircleCommand extends CommandBase {
  op: "circle";
  cx: number;
  cy: number;
  r: number;
}

export interface PolylineCommand extends CommandBase {
  op: "polyline";
  points: [number, number][];
}

export interface TextCommand extends CommandBase {
  op: "text";
  x: number;
  y: number;
  text: string;
}

export type RenderCommand = RectCommand | CircleCommand | PolylineCommand | TextCommand;

export interface Hud {
  gesture: string | null;
  anchors: { x: number; y: number }[];
  time_label: string | null;
}

export interface SceneStateMsg {
  type: "scene_state";
  seq: number;
  scene_id: string;
  transform: { s: number; tx: number; ty: number };
  hud: Hud;
  commands: RenderCommand[];
}

export interface StorySceneSummary {
  id: string;
  kind: string;
  gestures: string[];
}

export interface StoryInfoMsg {
  type: "story_info";
  title: string;
  scenes: StorySceneSummary[];
  current: number;
}

export interface TransitionMsg {
  type: "transition";
  kind: "cut" | "fade";
  duration_ms: number;
}

export interface ErrorMsg {
  type: "error";
  code: string;
  detail: string;
}

export type ServerMessage = SceneStateMsg | StoryInfoMsg | TransitionMsg | ErrorMsg;

// story document, as edited by the planner
export interface ChartSpecDoc {
  kind: string;
  [binding: string]: string | undefined;
}

export interface TransitionDoc {
  kind: "cut" | "fade";
  duration_ms: number;
}

export interface SceneDoc {
  id: string;
  chart: ChartSpecDoc;
  data: string;
  gestures: string[];
  transition: TransitionDoc;
}

export interface StoryDoc {
  title: string;
  scenes: SceneDoc[];
}

export function parseServerMessage(text: string): ServerMessage {
  const msg = JSON.parse(text) as ServerMessage;
  if (!msg || typeof msg !== "object" || typeof msg.type !== "string") {
    throw new Error("malformed server message");
  }
  return msg;
}

export function helloMessage(role: "presenter" | "viewer", session?: string): string {
  return JSON.stringify(session ? { type: "hello", role, session } : { type: "hello", role });
}

export function frameMessage(frame: LandmarkFrame): string {
  return JSON.stringify({ type: "frame", frame });
}

export function controlMessage(command: "next" | "prev" | "goto", sceneId?: string): string {
  return JSON.stringify(
    command === "goto" ? { type: "control", command, scene_id: sceneId } : { type: "control", command },
  );
}

export function plannerUpdateMessage(story: StoryDoc): string {
  return JSON.stringify({ type: "planner_update", story });
}
