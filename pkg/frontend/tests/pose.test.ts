import { describe, expect, it } from 'vitest';

import { SyntheticPoseEstimator, frameHasPerson, toBody13Frame } from '../src/pose';
import { BODY13_JOINTS } from '../src/types';

const FACIAL_AND_HAND_INDEXES = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 17, 18, 19, 20, 21, 22, 29, 30, 31, 32];

describe('toBody13Frame', () => {
  it('emits exactly the body13 joint names', () => {
    const landmarks = new SyntheticPoseEstimator().estimate(null as never, 0);
    const frame = toBody13Frame(landmarks);
    expect(frame.joints.map((j) => j.name)).toEqual([...BODY13_JOINTS]);
  });

  it('keeps all coordinates inside [0, 1]', () => {
    const estimator = new SyntheticPoseEstimator();
    for (const t of [0, 250, 500, 1234, 9999]) {
      const frame = toBody13Frame(estimator.estimate(null as never, t));
      for (const joint of frame.joints) {
        expect(joint.x).toBeGreaterThanOrEqual(0);
        expect(joint.x).toBeLessThanOrEqual(1);
        expect(joint.y).toBeGreaterThanOrEqual(0);
        expect(joint.y).toBeLessThanOrEqual(1);
      }
    }
  });

  it('clamps out-of-viewport landmarks', () => {
    const landmarks = new SyntheticPoseEstimator().estimate(null as never, 0)!;
    landmarks[0] = { x: 1.4, y: -0.3, visibility: 0.9 };
    const frame = toBody13Frame(landmarks);
    const head = frame.joints.find((j) => j.name === 'head')!;
    expect(head.x).toBe(1);
    expect(head.y).toBe(0);
  });

  it('discards facial, hand, and foot landmarks before the frame leaves', () => {
    const landmarks = new SyntheticPoseEstimator().estimate(null as never, 0)!;
    // plant a sentinel coordinate on every non-body landmark
    for (const index of FACIAL_AND_HAND_INDEXES) {
      landmarks[index] = { x: 0.123456, y: 0.654321, visibility: 1 };
    }
    const frame = toBody13Frame(landmarks);
    for (const joint of frame.joints) {
      expect(joint.x).not.toBe(0.123456);
      expect(joint.y).not.toBe(0.654321);
    }
    expect(frame.joints).toHaveLength(13);
  });

  it('yields an all-zero-confidence frame when no person is detected', () => {
    const frame = toBody13Frame(new SyntheticPoseEstimator(false).estimate(null as never, 0));
    expect(frame.joints).toHaveLength(13);
    expect(frame.joints.every((j) => j.confidence === 0)).toBe(true);
    expect(frameHasPerson(frame)).toBe(false);
  });

  it('recognizes a present person', () => {
    const frame = toBody13Frame(new SyntheticPoseEstimator().estimate(null as never, 0));
    expect(frameHasPerson(frame)).toBe(true);
  });
});
