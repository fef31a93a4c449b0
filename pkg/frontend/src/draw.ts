/** Canvas rendering of the skeletal mirror.
 *
 * Only skeleton primitives are drawn: bone lines and joint dots. The camera
 * image is never painted and never persisted; low-confidence joints render
 * dimmed but are still part of the frame.
 */

import { Body13Frame, BodyJoint, JointName, RecordingFrame } from './types';

export const BONES: [JointName, JointName][] = [
  ['head', 'l_shoulder'],
  ['head', 'r_shoulder'],
  ['l_shoulder', 'r_shoulder'],
  ['l_shoulder', 'l_elbow'],
  ['l_elbow', 'l_wrist'],
  ['r_shoulder', 'r_elbow'],
  ['r_elbow', 'r_wrist'],
  ['l_shoulder', 'l_hip'],
  ['r_shoulder', 'r_hip'],
  ['l_hip', 'r_hip'],
  ['l_hip', 'l_knee'],
  ['l_knee', 'l_ankle'],
  ['r_hip', 'r_knee'],
  ['r_knee', 'r_ankle'],
];

const DIM_CONFIDENCE = 0.3;

export interface DrawOptions {
  mirrored: boolean;
  color?: string;
}

function place(joint: BodyJoint, width: number, height: number, mirrored: boolean) {
  const x = mirrored ? 1 - joint.x : joint.x;
  return { x: x * width, y: joint.y * height };
}

export function drawSkeleton(
  ctx: CanvasRenderingContext2D,
  frame: Body13Frame | RecordingFrame,
  width: number,
  height: number,
  options: DrawOptions
): void {
  const color = options.color ?? '#4fd1c5';
  const byName = new Map(frame.joints.map((joint) => [joint.name, joint]));

  ctx.clearRect(0, 0, width, height);
  ctx.lineWidth = 4;
  ctx.lineCap = 'round';

  for (const [from, to] of BONES) {
    const a = byName.get(from);
    const b = byName.get(to);
    if (!a || !b) continue;
    const dim = a.confidence < DIM_CONFIDENCE || b.confidence < DIM_CONFIDENCE;
    ctx.strokeStyle = color;
    ctx.globalAlpha = dim ? 0.25 : 1;
    const pa = place(a, width, height, options.mirrored);
    const pb = place(b, width, height, options.mirrored);
    ctx.beginPath();
    ctx.moveTo(pa.x, pa.y);
    ctx.lineTo(pb.x, pb.y);
    ctx.stroke();
  }

  for (const joint of frame.joints) {
    const point = place(joint, width, height, options.mirrored);
    ctx.globalAlpha = joint.confidence < DIM_CONFIDENCE ? 0.25 : 1;
    ctx.fillStyle = color;
    ctx.beginPath();
    const radius = joint.name === 'head' ? 14 : 5;
    ctx.arc(point.x, point.y, radius, 0, Math.PI * 2);
    ctx.fill();
  }
  ctx.globalAlpha = 1;
}

export function drawGuidance(
  ctx: CanvasRenderingContext2D,
  width: number,
  height: number
): void {
  ctx.clearRect(0, 0, width, height);
  ctx.globalAlpha = 1;
  ctx.fillStyle = '#8894a8';
  ctx.font = '16px system-ui, sans-serif';
  ctx.textAlign = 'center';
  ctx.fillText('Step into view of the camera', width / 2, height / 2);
}
