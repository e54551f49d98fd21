// Webcam capture loop: runs the off-the-shelf hand-landmark and selfie
// segmentation models in the browser and emits raw (unmirrored) landmark
// frames with strictly increasing timestamps. Only landmarks cross the wire;
// webcam pixels never leave the machine.

import type { HandEntry, LandmarkFrame } from "./protocol.js";

// CDN globals (loaded from script tags in index.html)
declare const Hands: any;
declare const SelfieSegmentation: any;

export interface CaptureCallbacks {
  onFrame: (frame: LandmarkFrame) => void;
  onMask: (mask: CanvasImageSource | null) => void;
  onError: (detail: string) => void;
}

export interface CaptureHandle {
  stop: () => void;
}

const HANDS_CDN = "https://cdn.jsdelivr.net/npm/@mediapipe/hands/";
const SEGMENTATION_CDN = "https://cdn.jsdelivr.net/npm/@mediapipe/selfie_segmentation/";

export async function startCapture(
  video: HTMLVideoElement,
  callbacks: CaptureCallbacks,
): Promise<CaptureHandle> {
  let stream: MediaStream;
  try {
    stream = await navigator.mediaDevices.getUserMedia({ video: { width: 1280, height: 720 } });
  } catch (err) {
    callbacks.onError(`camera denied: ${String(err)}`);
    return { stop: () => undefined };
  }
  video.srcObject = stream;
  await video.play();

  let lastTimestamp = 0;
  const monotone = () => {
    const now = Math.round(performance.now());
    lastTimestamp = now > lastTimestamp ? now : lastTimestamp + 1;
    return lastTimestamp;
  };

  const hands = new Hands({ locateFile: (file: string) => HANDS_CDN + file });
  hands.setOptions({
    maxNumHands: 2,
    modelComplexity: 1,
    minDetectionConfidence: 0.6,
    minTrackingConfidence: 0.5,
  });
  hands.onResults((results: any) => {
    const entries: HandEntry[] = [];
    const lists = results.multiHandLandmarks ?? [];
    const labels = results.multiHandedness ?? [];
    const seen = new Set<string>();
    for (let i = 0; i < lists.length && entries.length < 2; i++) {
      const label = labels[i]?.label === "Left" ? "Left" : "Right";
      if (seen.has(label)) continue; // the engine rejects duplicate handedness
      seen.add(label);
      entries.push({
        handedness: label,
        confidence: Number(labels[i]?.score ?? 1),
        landmarks: lists[i].map((lm: any) => ({ x: lm.x, y: lm.y, z: lm.z })),
      });
    }
    // empty-hands frames still go out as heartbeats
    callbacks.onFrame({ timestamp_ms: monotone(), hands: entries });
  });

  let segmentation: any = null;
  try {
    segmentation = new SelfieSegmentation({
      locateFile: (file: string) => SEGMENTATION_CDN + file,
    });
    segmentation.setOptions({ modelSelection: 1 });
    segmentation.onResults((results: any) => {
      callbacks.onMask(results.segmentationMask ?? null);
    });
  } catch (err) {
    // degrade to two layers (video + viz) with a visible warning
    callbacks.onError(`segmentation model unavailable: ${String(err)}`);
    callbacks.onMask(null);
  }

  let running = true;
  const pump = async () => {
    if (!running) return;
    try {
      await hands.send({ image: video });
      if (segmentation) await segmentation.send({ image: video });
    } catch (err) {
      callbacks.onError(`model inference failed: ${String(err)}`);
    }
    if (running) requestAnimationFrame(pump);
  };
  requestAnimationFrame(pump);

  return {
    stop: () => {
      running = false;
      stream.getTracks().forEach((track) => track.stop());
    },
  };
}
