/** The skeletal-mirror state machine: practice, countdown, record, replay.
 *
 * The controller is driven from outside (onFrame / tick with a clock value),
 * which keeps the timing logic deterministic and testable. The capture loop
 * is decoupled from rendering through a small bounded frame queue that drops
 * the oldest entry on overflow.
 */

import { Body13Frame, RecordingFrame, SkeletalRecording } from './types';

export type MirrorMode = 'idle' | 'practice' | 'countdown' | 'recording' | 'replay';

export const COUNTDOWN_MS = 3000;
export const MIN_TAKE_FRAMES = 2;

export interface MirrorState {
  mode: MirrorMode;
  countdown_remaining_ms: number;
  live_frame: Body13Frame | null;
  take: SkeletalRecording | null;
  /** set when the last stop or camera loss could not produce a usable take */
  notice: string | null;
}

/** Bounded drop-oldest queue between the capture and render loops. */
export class FrameQueue {
  private frames: Body13Frame[] = [];

  constructor(private readonly capacity: number = 4) {}

  push(frame: Body13Frame): void {
    if (this.frames.length >= this.capacity) {
      this.frames.shift();
    }
    this.frames.push(frame);
  }

  /** Take the newest frame and clear the backlog. */
  drainLatest(): Body13Frame | null {
    const latest = this.frames.length ? this.frames[this.frames.length - 1] : null;
    this.frames = [];
    return latest;
  }

  get size(): number {
    return this.frames.length;
  }
}

export class MirrorController {
  private mode: MirrorMode = 'idle';
  private liveFrame: Body13Frame | null = null;
  private take: SkeletalRecording | null = null;
  private notice: string | null = null;

  private countdownStartedAt = 0;
  private recordingStartedAt = 0;
  private pendingFrames: RecordingFrame[] = [];
  private replayStartedAt = 0;

  constructor(private readonly fpsNominal: number = 30) {}

  get state(): MirrorState {
    return {
      mode: this.mode,
      countdown_remaining_ms:
        this.mode === 'countdown'
          ? Math.max(0, COUNTDOWN_MS - (this.lastNow - this.countdownStartedAt))
          : 0,
      live_frame: this.liveFrame,
      take: this.take,
      notice: this.notice,
    };
  }

  private lastNow = 0;

  /** When, relative to the record request, frame capture actually began. */
  get recordingDelayMs(): number | null {
    return this.recordingStartedAt ? this.recordingStartedAt - this.countdownStartedAt : null;
  }

  startPractice(nowMs: number): void {
    this.lastNow = nowMs;
    this.mode = 'practice';
    this.notice = null;
  }

  /** Record button: a full 3000 ms countdown always precedes capture. */
  requestRecord(nowMs: number): void {
    if (this.mode !== 'practice') {
      return;
    }
    this.lastNow = nowMs;
    this.mode = 'countdown';
    this.countdownStartedAt = nowMs;
    this.recordingStartedAt = 0;
    this.pendingFrames = [];
    this.notice = null;
  }

  /** Stop button: during countdown nothing is produced; while recording the
   * take is finalized and replay starts automatically for review. */
  stop(nowMs: number): void {
    this.lastNow = nowMs;
    if (this.mode === 'countdown') {
      this.mode = 'practice';
      return;
    }
    if (this.mode !== 'recording') {
      return;
    }
    if (this.pendingFrames.length < MIN_TAKE_FRAMES) {
      this.pendingFrames = [];
      this.mode = 'practice';
      this.notice = 'The take was too short to keep; please record again.';
      return;
    }
    // each new take replaces the previous one; only the final take is submitted
    this.take = {
      joint_set: 'body13',
      fps_nominal: this.fpsNominal,
      frames: this.pendingFrames,
    };
    this.pendingFrames = [];
    this.mode = 'replay';
    this.replayStartedAt = nowMs;
  }

  /** Discard the reviewed take and go back to practice for a re-record. */
  discardTake(nowMs: number): void {
    this.lastNow = nowMs;
    this.take = null;
    if (this.mode === 'replay') {
      this.mode = 'practice';
    }
  }

  /** Camera loss mid-take discards the partial recording and tells the user. */
  cameraLost(nowMs: number): void {
    this.lastNow = nowMs;
    if (this.mode === 'recording' || this.mode === 'countdown') {
      this.pendingFrames = [];
      this.notice = 'The camera became unavailable; the take was discarded.';
    }
    this.liveFrame = null;
    this.mode = 'idle';
  }

  /** Advance time-dependent transitions (countdown completion). */
  tick(nowMs: number): void {
    this.lastNow = nowMs;
    if (this.mode === 'countdown' && nowMs - this.countdownStartedAt >= COUNTDOWN_MS) {
      this.mode = 'recording';
      this.recordingStartedAt = nowMs;
    }
  }

  /** Feed one captured frame; during recording it is accumulated with a
   * strictly increasing timestamp relative to recording start. */
  onFrame(frame: Body13Frame, nowMs: number): void {
    this.tick(nowMs);
    this.liveFrame = frame;
    if (this.mode !== 'recording') {
      return;
    }
    const t_ms = Math.round(nowMs - this.recordingStartedAt);
    const last = this.pendingFrames[this.pendingFrames.length - 1];
    if (last && t_ms <= last.t_ms) {
      return; // duplicate clock reading; keep timestamps strictly increasing
    }
    this.pendingFrames.push({ t_ms, joints: frame.joints });
  }

  /** The recorded frame to show at this point of the replay; frames play back
   * at their recorded t_ms spacing and the replay loops. */
  replayFrame(nowMs: number): RecordingFrame | null {
    if (this.mode !== 'replay' || !this.take || this.take.frames.length === 0) {
      return null;
    }
    const span = this.take.frames[this.take.frames.length - 1].t_ms + 1;
    const elapsed = (nowMs - this.replayStartedAt) % span;
    let current = this.take.frames[0];
    for (const frame of this.take.frames) {
      if (frame.t_ms <= elapsed) {
        current = frame;
      } else {
        break;
      }
    }
    return current;
  }
}
