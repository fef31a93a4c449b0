/** In-browser pose capture reduced to the body13 joint set.
 *
 * The underlying pose model emits a much richer landmark list (face, hands,
 * feet); everything outside body13 is discarded here, before a frame leaves
 * this module, so no facial or finger data can ever reach the network.
 */

import { BODY13_JOINTS, Body13Frame, BodyJoint, JointName } from './types';

export class CameraUnavailable extends Error {
  constructor(detail: string) {
    super(`camera unavailable: ${detail}`);
    this.name = 'CameraUnavailable';
  }
}

export class PoseModelLoadError extends Error {
  constructor(detail: string) {
    super(`pose model failed to load: ${detail}`);
    this.name = 'PoseModelLoadError';
  }
}

/** One raw model landmark in normalized image coordinates. */
export interface PoseLandmark {
  x: number;
  y: number;
  visibility?: number;
}

/** Anything that can produce the full-body landmark list for a video frame. */
export interface PoseEstimator {
  estimate(video: HTMLVideoElement, timestampMs: number): PoseLandmark[] | null;
}

// BlazePose-family landmark indexes for the 13 joints we keep. Indexes 1-10
// are facial, 17-22 hand/finger, 29-32 foot landmarks: all dropped.
const LANDMARK_INDEX: Record<JointName, number> = {
  head: 0,
  l_shoulder: 11,
  r_shoulder: 12,
  l_elbow: 13,
  r_elbow: 14,
  l_wrist: 15,
  r_wrist: 16,
  l_hip: 23,
  r_hip: 24,
  l_knee: 25,
  r_knee: 26,
  l_ankle: 27,
  r_ankle: 28,
};

const clamp01 = (v: number): number => Math.min(1, Math.max(0, v));

/** Reduce a raw landmark list to a body13 frame.
 *
 * Coordinates are clamped to [0, 1] of the capture viewport. A null or empty
 * landmark list (no person detected) yields a frame with all confidences 0 so
 * the UI can show guidance instead of a skeleton.
 */
export function toBody13Frame(landmarks: PoseLandmark[] | null): Body13Frame {
  const joints: BodyJoint[] = BODY13_JOINTS.map((name) => {
    const landmark = landmarks ? landmarks[LANDMARK_INDEX[name]] : undefined;
    if (!landmark) {
      return { name, x: 0.5, y: 0.5, confidence: 0 };
    }
    return {
      name,
      x: clamp01(landmark.x),
      y: clamp01(landmark.y),
      confidence: clamp01(landmark.visibility ?? 1),
    };
  });
  return { joints };
}

export function frameHasPerson(frame: Body13Frame): boolean {
  return frame.joints.some((joint) => joint.confidence > 0);
}

/** Open the webcam; resolves to a playing stream or throws CameraUnavailable. */
export async function openCamera(): Promise<MediaStream> {
  if (!navigator.mediaDevices?.getUserMedia) {
    throw new CameraUnavailable('media capture is not supported in this browser');
  }
  try {
    return await navigator.mediaDevices.getUserMedia({ video: true, audio: false });
  } catch (error) {
    throw new CameraUnavailable(error instanceof Error ? error.message : String(error));
  }
}

/** Loads the MediaPipe pose landmarker from its CDN bundle at runtime. */
export async function loadMediaPipeEstimator(): Promise<PoseEstimator> {
  // URL kept in a variable so the compiler does not try to resolve it
  const bundleUrl = 'https://cdn.jsdelivr.net/npm/@mediapipe/tasks-vision@0.10.14';
  let vision: any;
  try {
    vision = await import(/* @vite-ignore */ bundleUrl);
  } catch (error) {
    throw new PoseModelLoadError(error instanceof Error ? error.message : String(error));
  }
  try {
    const fileset = await vision.FilesetResolver.forVisionTasks(
      'https://cdn.jsdelivr.net/npm/@mediapipe/tasks-vision@0.10.14/wasm'
    );
    const landmarker = await vision.PoseLandmarker.createFromOptions(fileset, {
      baseOptions: {
        modelAssetPath:
          'https://storage.googleapis.com/mediapipe-models/pose_landmarker/pose_landmarker_lite/float16/1/pose_landmarker_lite.task',
      },
      runningMode: 'VIDEO',
      numPoses: 1,
    });
    return {
      estimate(video: HTMLVideoElement, timestampMs: number): PoseLandmark[] | null {
        const result = landmarker.detectForVideo(video, timestampMs);
        const pose = result?.landmarks?.[0];
        return pose ?? null;
      },
    };
  } catch (error) {
    throw new PoseModelLoadError(error instanceof Error ? error.message : String(error));
  }
}

/** Deterministic estimator for development and tests: a full 33-landmark
 * figure swaying side to side (face/hand/foot landmarks included so the
 * reduction path is exercised). */
export class SyntheticPoseEstimator implements PoseEstimator {
  constructor(private readonly present: boolean = true) {}

  estimate(_video: HTMLVideoElement, timestampMs: number): PoseLandmark[] | null {
    if (!this.present) {
      return null;
    }
    const sway = 0.1 * Math.sin(timestampMs / 500);
    const landmarks: PoseLandmark[] = [];
    for (let i = 0; i < 33; i += 1) {
      landmarks.push({ x: 0.5 + sway + i * 0.001, y: 0.1 + i * 0.025, visibility: 0.95 });
    }
    return landmarks;
  }
}
