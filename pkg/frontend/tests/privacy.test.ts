import { describe, expect, it } from 'vitest';

import { ApiClient } from '../src/api';
import { StudioApp } from '../src/app';
import { drawSkeleton } from '../src/draw';
import { COUNTDOWN_MS } from '../src/mirror';
import { SyntheticPoseEstimator, toBody13Frame } from '../src/pose';
import { BODY13_JOINTS } from '../src/types';
import { FakeEngine } from './fakeEngine';

const RECORDING_KEY_UNION = new Set([
  'recording',
  'joint_set',
  'fps_nominal',
  'frames',
  't_ms',
  'joints',
  'name',
  'x',
  'y',
  'confidence',
]);

function allKeys(value: unknown, into: Set<string> = new Set()): Set<string> {
  if (Array.isArray(value)) {
    for (const item of value) allKeys(item, into);
  } else if (value && typeof value === 'object') {
    for (const [key, item] of Object.entries(value)) {
      into.add(key);
      allKeys(item, into);
    }
  }
  return into;
}

/** A canvas 2D stand-in that records which drawing methods were invoked. */
class RecordingContext {
  calls: string[] = [];
  lineWidth = 0;
  lineCap = '';
  strokeStyle = '';
  fillStyle = '';
  globalAlpha = 1;
  font = '';
  textAlign = '';

  private log(name: string) {
    this.calls.push(name);
  }

  clearRect() {
    this.log('clearRect');
  }
  beginPath() {
    this.log('beginPath');
  }
  moveTo() {
    this.log('moveTo');
  }
  lineTo() {
    this.log('lineTo');
  }
  stroke() {
    this.log('stroke');
  }
  arc() {
    this.log('arc');
  }
  fill() {
    this.log('fill');
  }
  fillText() {
    this.log('fillText');
  }
  drawImage() {
    this.log('drawImage');
  }
  putImageData() {
    this.log('putImageData');
  }
}

const SKELETON_PRIMITIVES = new Set([
  'clearRect',
  'beginPath',
  'moveTo',
  'lineTo',
  'stroke',
  'arc',
  'fill',
]);

async function runFullRound() {
  const engine = new FakeEngine();
  let clock = 0;
  const app = new StudioApp(new ApiClient('', engine.fetch), () => clock);
  const estimator = new SyntheticPoseEstimator();

  await app.start();
  app.actions.poseCatalogScenario('lang-leaves');
  await app.whenIdle();
  expect(app.store.get().stage).toBe('Commentary');

  for (const proposal of app.store.get().proposals) {
    app.actions.setRatingDraft(proposal.ordinal, {
      stars: 4,
      comment: `good movement quality on #${proposal.ordinal}`,
    });
  }
  app.actions.submitRatings();
  await app.whenIdle();
  expect(app.store.get().stage).toBe('Demonstration');

  // practice, record through the countdown, stop: the final take only
  app.actions.mirrorPractice();
  app.actions.mirrorRecord();
  const recordRequestedAt = clock;
  while (clock < recordRequestedAt + COUNTDOWN_MS + 2000) {
    clock += 33;
    app.mirror.onFrame(toBody13Frame(estimator.estimate(null as never, clock)), clock);
  }
  app.actions.mirrorStop();
  expect(app.mirror.state.take).not.toBeNull();

  app.actions.submitDemonstration();
  await app.whenIdle();
  expect(app.store.get().stage).toBe('Explanation');

  app.actions.submitExplanation('A slow, large movement reads well from the back row.');
  await app.whenIdle();
  expect(app.store.get().stage).toBe('PosingQuestion');
  expect(app.store.get().summaries).toHaveLength(1);

  return { engine, app };
}

describe('privacy invariant over a full round', () => {
  it('no request body ever contains image data', async () => {
    const { engine } = await runFullRound();
    expect(engine.requests.length).toBeGreaterThanOrEqual(5);
    for (const request of engine.requests) {
      if (!request.body) continue;
      expect(request.body).not.toContain('data:image');
      expect(request.body).not.toMatch(/"(image|pixels|jpeg|png|bitmap|snapshot)"/i);
      // no base64 blobs hiding anywhere: keep every string value short
      const parsed = JSON.parse(request.body);
      const check = (value: unknown): void => {
        if (typeof value === 'string') {
          expect(value.length).toBeLessThan(4096);
        } else if (Array.isArray(value)) {
          value.forEach(check);
        } else if (value && typeof value === 'object') {
          Object.values(value).forEach(check);
        }
      };
      check(parsed);
    }
  });

  it('the demonstration upload is exactly the skeletal recording document', async () => {
    const { engine } = await runFullRound();
    const upload = engine.requests.find((r) => r.path.endsWith('/demonstration'))!;
    const body = JSON.parse(upload.body!);
    expect(Object.keys(body)).toEqual(['recording']);
    const keys = allKeys(body);
    for (const key of keys) {
      expect(RECORDING_KEY_UNION.has(key)).toBe(true);
    }
    expect(body.recording.joint_set).toBe('body13');
    for (const frame of body.recording.frames) {
      expect(frame.joints.map((j: { name: string }) => j.name).sort()).toEqual(
        [...BODY13_JOINTS].sort()
      );
    }
  });

  it('replay renders only skeleton primitives, never images', async () => {
    const { app } = await runFullRound();
    const take = (await app.api.getSession('fake-session')).rounds[0].recording!;
    const ctx = new RecordingContext();
    for (const frame of [take.frames[0], take.frames[Math.floor(take.frames.length / 2)]]) {
      drawSkeleton(ctx as unknown as CanvasRenderingContext2D, frame, 640, 480, {
        mirrored: true,
      });
    }
    expect(ctx.calls.length).toBeGreaterThan(0);
    for (const call of ctx.calls) {
      expect(SKELETON_PRIMITIVES.has(call)).toBe(true);
    }
    expect(ctx.calls).not.toContain('drawImage');
    expect(ctx.calls).not.toContain('putImageData');
  });
});
