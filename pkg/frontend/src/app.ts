/** Studio wiring: store + API client + mirror + capture loop.
 *
 * One in-flight mutation at a time; every mutation goes through the HTTP API
 * and the resulting stage always matches the server's. A hard refresh
 * reconstructs the panels from GET /sessions/{id} alone.
 */

import { ApiClient, ApiError } from './api';
import { drawGuidance, drawSkeleton } from './draw';
import { FrameQueue, MirrorController } from './mirror';
import { StudioActions } from './panels';
import { Store, deriveStateFromSession } from './store';
import { PoseEstimator, frameHasPerson, toBody13Frame } from './pose';
import { Rating } from './types';

export class StudioApp {
  readonly store = new Store();
  readonly mirror = new MirrorController(30);
  readonly frameQueue = new FrameQueue(4);
  mirrored = true;

  private inflight = false;
  private lastMutation: Promise<void> = Promise.resolve();

  constructor(
    readonly api: ApiClient,
    private readonly now: () => number = () => performance.now()
  ) {}

  /** Resolves once the most recent mutation has settled (used by tests). */
  whenIdle(): Promise<void> {
    return this.lastMutation;
  }

  /** Create a session, or resume one if its id is supplied (hard refresh). */
  async start(resumeId?: string, groupLabel?: string): Promise<void> {
    if (resumeId) {
      const doc = await this.api.getSession(resumeId);
      this.store.set(deriveStateFromSession(doc));
      return;
    }
    const created = await this.api.createSession(groupLabel);
    this.store.set({ sessionId: created.id });
  }

  private sessionId(): string {
    const id = this.store.get().sessionId;
    if (!id) {
      throw new Error('no active session');
    }
    return id;
  }

  /** Run one mutation; panel controls stay locked while it is in flight. */
  private mutate(work: () => Promise<void>): Promise<void> {
    const run = async () => {
      if (this.inflight) {
        return;
      }
      this.inflight = true;
      this.store.set({ pending: true, error: null });
      try {
        await work();
        this.store.set({ pending: false });
      } catch (error) {
        const message =
          error instanceof ApiError ? `${error.code}: ${error.message}` : String(error);
        this.store.set({ pending: false, error: message });
      } finally {
        this.inflight = false;
      }
    };
    this.lastMutation = run();
    return this.lastMutation;
  }

  readonly actions: StudioActions = {
    poseCatalogScenario: (catalogId) =>
      void this.mutate(async () => {
        const response = await this.api.postCatalogScenario(this.sessionId(), catalogId);
        this.applyScenarioResponse(response);
      }),

    poseCustomScenario: (fields) =>
      void this.mutate(async () => {
        const response = await this.api.postCustomScenario(this.sessionId(), fields);
        this.applyScenarioResponse(response);
      }),

    setRatingDraft: (ordinal, patch) => {
      const drafts = { ...this.store.get().ratingDrafts };
      const current = drafts[ordinal] ?? { stars: 0, comment: '' };
      drafts[ordinal] = { ...current, ...patch };
      this.store.set({ ratingDrafts: drafts });
    },

    submitRatings: () =>
      void this.mutate(async () => {
        const state = this.store.get();
        const ratings: Rating[] = state.proposals.map((proposal) => {
          const draft = state.ratingDrafts[proposal.ordinal];
          return {
            proposal_ordinal: proposal.ordinal,
            stars: draft?.stars ?? 0,
            comment: draft?.comment ?? '',
          };
        });
        const response = await this.api.postRatings(this.sessionId(), ratings);
        this.store.set({
          stage: response.stage,
          ratingsSubmitted: true,
          menteeMessages: [...state.menteeMessages, response.mentee_message],
        });
      }),

    mirrorPractice: () => {
      this.mirror.startPractice(this.now());
      this.store.set({}); // refresh panel buttons
    },
    mirrorRecord: () => {
      this.mirror.requestRecord(this.now());
      this.store.set({});
    },
    mirrorStop: () => {
      this.mirror.stop(this.now());
      this.store.set({});
    },
    mirrorDiscard: () => {
      this.mirror.discardTake(this.now());
      this.store.set({});
    },

    submitDemonstration: () =>
      void this.mutate(async () => {
        const take = this.mirror.state.take;
        if (!take) {
          throw new Error('record a take before sending it');
        }
        const response = await this.api.postDemonstration(this.sessionId(), take);
        this.store.set({
          stage: response.stage,
          menteeMessages: [...this.store.get().menteeMessages, response.mentee_message],
        });
      }),

    submitExplanation: (text) =>
      void this.mutate(async () => {
        const response = await this.api.postExplanation(this.sessionId(), text);
        const state = this.store.get();
        this.store.set({
          stage: response.stage,
          menteeMessages: [...state.menteeMessages, response.mentee_message],
          summaries: [...state.summaries, response.summary],
          proposals: [],
          ratingDrafts: {},
          ratingsSubmitted: false,
        });
      }),
  };

  private applyScenarioResponse(response: {
    stage: string;
    no_gesture_needed: boolean;
    proposals: import('./types').GestureProposal[];
    mentee_message: import('./types').MenteeMessage;
  }): void {
    const state = this.store.get();
    this.store.set({
      stage: response.stage as import('./types').Stage,
      proposals: response.proposals,
      ratingDrafts: {},
      ratingsSubmitted: false,
      menteeMessages: [...state.menteeMessages, response.mentee_message],
    });
  }

  /** Capture/render loop: the estimator fills the bounded queue, the render
   * pass drains the newest frame into the mirror and paints skeleton
   * primitives only. */
  attachMirror(
    canvas: HTMLCanvasElement,
    video: HTMLVideoElement,
    estimator: PoseEstimator,
    requestFrame: (cb: () => void) => void = (cb) => requestAnimationFrame(cb)
  ): void {
    const ctx = canvas.getContext('2d');
    if (!ctx) {
      return;
    }
    const loop = () => {
      const nowMs = this.now();
      const landmarks = estimator.estimate(video, nowMs);
      this.frameQueue.push(toBody13Frame(landmarks));

      const latest = this.frameQueue.drainLatest();
      if (latest) {
        this.mirror.onFrame(latest, nowMs);
      } else {
        this.mirror.tick(nowMs);
      }

      const mirrorState = this.mirror.state;
      if (mirrorState.mode === 'replay') {
        const frame = this.mirror.replayFrame(nowMs);
        if (frame) {
          drawSkeleton(ctx, frame, canvas.width, canvas.height, {
            mirrored: this.mirrored,
            color: '#f6ad55',
          });
        }
      } else if (mirrorState.live_frame && frameHasPerson(mirrorState.live_frame)) {
        drawSkeleton(ctx, mirrorState.live_frame, canvas.width, canvas.height, {
          mirrored: this.mirrored,
        });
      } else {
        drawGuidance(ctx, canvas.width, canvas.height);
      }
      requestFrame(loop);
    };
    requestFrame(loop);
  }
}
