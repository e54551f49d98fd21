// Thin WebSocket wrapper around the engine protocol.

import {
  controlMessage,
  frameMessage,
  helloMessage,
  parseServerMessage,
  plannerUpdateMessage,
  type LandmarkFrame,
  type ServerMessage,
  type StoryDoc,
} from "./protocol.js";

export interface EngineSocketOptions {
  url: string;
  role: "presenter" | "viewer";
  session?: string;
  onMessage: (msg: ServerMessage) => void;
  onOpen?: () => void;
  onClose?: () => void;
}

export class EngineSocket {
  private ws: WebSocket;

  constructor(private opts: EngineSocketOptions) {
    this.ws = new WebSocket(opts.url);
    this.ws.addEventListener("open", () => {
      this.ws.send(helloMessage(opts.role, opts.session));
      opts.onOpen?.();
    });
    this.ws.addEventListener("message", (event: MessageEvent) => {
      try {
        opts.onMessage(parseServerMessage(String(event.data)));
      } catch {
        // ignore unparseable frames; the engine never sends them
      }
    });
    this.ws.addEventListener("close", () => opts.onClose?.());
  }

  get open(): boolean {
    return this.ws.readyState === WebSocket.OPEN;
  }

  sendFrame(frame: LandmarkFrame): void {
    if (this.open) this.ws.send(frameMessage(frame));
  }

  sendControl(command: "next" | "prev" | "goto", sceneId?: string): void {
    if (this.open) this.ws.send(controlMessage(command, sceneId));
  }

  sendPlannerUpdate(story: StoryDoc): void {
    if (this.open) this.ws.send(plannerUpdateMessage(story));
  }

  close(): void {
    this.ws.close();
  }
}
