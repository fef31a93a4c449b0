/** An in-test double of the engine API, faithful to its wire schemas and
 * error codes, driven through a fetch-compatible function. Every request
 * body is kept for inspection (the privacy tests read them back). */

import {
  GestureProposal,
  MenteeMessage,
  RoundDocument,
  SessionDocument,
  Stage,
} from '../src/types';

export interface CapturedRequest {
  method: string;
  path: string;
  body: string | null;
}

const RECORDING_KEYS = ['joint_set', 'fps_nominal', 'frames'];
const FRAME_KEYS = ['t_ms', 'joints'];
const JOINT_KEYS = ['name', 'x', 'y', 'confidence'];
const BODY13 = [
  'head',
  'l_shoulder',
  'r_shoulder',
  'l_elbow',
  'r_elbow',
  'l_wrist',
  'r_wrist',
  'l_hip',
  'r_hip',
  'l_knee',
  'r_knee',
  'l_ankle',
  'r_ankle',
];

function proposalFixture(): GestureProposal[] {
  return [
    {
      ordinal: 0,
      description: 'Let both hands drift slowly downward, fingers fluttering.',
      intention: 'explain_complex',
      gesture_type: 'iconic',
      references: ['mcneill1992', 'lim2019'],
      few_shot_exemplar_id: 0,
    },
    {
      ordinal: 1,
      description: 'Point with an open palm at the text on the board.',
      intention: 'attract_attention',
      gesture_type: 'deictic',
      references: ['mcneill1992', 'kartchava2020'],
      few_shot_exemplar_id: 1,
    },
    {
      ordinal: 2,
      description: 'Give a clear thumbs-up toward the students.',
      intention: 'positive_feedback',
      gesture_type: 'emblematic',
      references: ['kipp2005', 'yoon2024'],
      few_shot_exemplar_id: 2,
    },
  ];
}

function mentee(text: string, stage: Stage): MenteeMessage {
  return { role: 'mentee', text, stage_hint: stage };
}

export class FakeEngine {
  requests: CapturedRequest[] = [];
  private session: SessionDocument = {
    id: 'fake-session',
    created_at: '2026-01-01T00:00:00+00:00',
    group_label: null,
    stage: 'PosingQuestion',
    rounds: [],
  };

  get lastRound(): RoundDocument | undefined {
    return this.session.rounds[this.session.rounds.length - 1];
  }

  readonly fetch = async (input: RequestInfo | URL, init?: RequestInit): Promise<Response> => {
    const url = typeof input === 'string' ? input : input.toString();
    const path = url.replace(/^https?:\/\/[^/]+/, '');
    const method = init?.method ?? 'GET';
    const body = typeof init?.body === 'string' ? init.body : null;
    this.requests.push({ method, path, body });
    const [status, payload] = this.route(method, path, body ? JSON.parse(body) : null);
    return {
      ok: status >= 200 && status < 300,
      status,
      json: async () => payload,
      text: async () => JSON.stringify(payload),
    } as Response;
  };

  private error(status: number, code: string, message: string): [number, unknown] {
    return [status, { code, message }];
  }

  private route(method: string, path: string, body: any): [number, unknown] {
    if (method === 'POST' && path === '/sessions') {
      return [201, { id: this.session.id, stage: this.session.stage, group_label: null }];
    }
    if (method === 'GET' && path === `/sessions/${this.session.id}`) {
      return [200, this.session];
    }
    if (method === 'GET' && path === '/scenarios') {
      return [
        200,
        {
          scenarios: [
            {
              id: 'lang-leaves',
              subject: 'Language',
              grade_level: 'Grade 3',
              lesson_topic: 'Reading imagery aloud',
              scenario_text: 'The leaves gently fell down.',
            },
          ],
        },
      ];
    }
    if (method === 'GET' && path.startsWith('/knowledge/')) {
      const [, , kind, key] = path.split('/');
      return [
        200,
        {
          kind: kind === 'gesture_types' ? 'gesture_type' : 'intention',
          key,
          definition: `definition of ${key}`,
          citations: [{ key: 'mcneill1992', display: 'McNeill (1992).' }],
        },
      ];
    }
    if (method === 'POST' && path === `/sessions/${this.session.id}/scenario`) {
      if (this.session.stage !== 'PosingQuestion') {
        return this.error(409, 'WrongStage', 'not at PosingQuestion');
      }
      const scenario = body.catalog_id
        ? {
            subject: 'Language',
            grade_level: 'Grade 3',
            lesson_topic: 'Reading imagery aloud',
            scenario_text: 'The leaves gently fell down.',
            source: 'catalog' as const,
          }
        : { ...body.scenario };
      if (!scenario.scenario_text?.trim()) {
        return this.error(422, 'InvalidScenario', 'scenario_text must be non-empty');
      }
      const proposals = proposalFixture();
      const message = mentee('Please rate each of my gesture ideas.', 'Commentary');
      this.session.rounds.push({
        index: this.session.rounds.length,
        scenario,
        proposals,
        mentee_messages: [message],
        ratings: [],
        recording: null,
        explanation: null,
        summary: null,
      });
      this.session.stage = 'Commentary';
      return [
        200,
        { stage: 'Commentary', no_gesture_needed: false, proposals, mentee_message: message },
      ];
    }
    if (method === 'POST' && path === `/sessions/${this.session.id}/ratings`) {
      if (this.session.stage !== 'Commentary') {
        return this.error(409, 'WrongStage', 'not at Commentary');
      }
      const round = this.lastRound!;
      const seen = (body.ratings as any[]).map((r) => r.proposal_ordinal).sort();
      const expected = round.proposals.map((p) => p.ordinal).sort();
      if (JSON.stringify(seen) !== JSON.stringify(expected)) {
        return this.error(422, 'IncompleteRatings', 'every proposal needs a rating');
      }
      for (const rating of body.ratings) {
        if (rating.stars < 1 || rating.stars > 5) {
          return this.error(422, 'InvalidStars', 'stars must be 1..5');
        }
        if (!rating.comment?.trim()) {
          return this.error(422, 'EmptyComment', 'comment must be non-empty');
        }
      }
      round.ratings = body.ratings;
      this.session.stage = 'Demonstration';
      const message = mentee('Thank you! Now show me the gesture you would use.', 'Commentary');
      round.mentee_messages.push(message);
      return [200, { stage: 'Demonstration', mentee_message: message }];
    }
    if (method === 'POST' && path === `/sessions/${this.session.id}/demonstration`) {
      if (this.session.stage !== 'Demonstration') {
        return this.error(409, 'WrongStage', 'not at Demonstration');
      }
      const recording = body.recording;
      const violation = this.checkRecording(recording);
      if (violation) {
        return this.error(422, 'InvalidRecording', violation);
      }
      const round = this.lastRound!;
      round.recording = recording;
      this.session.stage = 'Explanation';
      const message = mentee('I watched closely. Why does this gesture fit?', 'Demonstration');
      round.mentee_messages.push(message);
      return [200, { stage: 'Explanation', mentee_message: message }];
    }
    if (method === 'POST' && path === `/sessions/${this.session.id}/explanation`) {
      if (this.session.stage !== 'Explanation') {
        return this.error(409, 'WrongStage', 'not at Explanation');
      }
      if (!body.text?.trim()) {
        return this.error(422, 'EmptyExplanation', 'text must be non-empty');
      }
      const round = this.lastRound!;
      round.explanation = body.text;
      round.summary = `Summary of: ${body.text}`;
      this.session.stage = 'PosingQuestion';
      const message = mentee('Thank you for teaching me this round!', 'Explanation');
      round.mentee_messages.push(message);
      return [
        200,
        { stage: 'PosingQuestion', summary: round.summary, mentee_message: message },
      ];
    }
    return this.error(404, 'NotFound', `no route ${method} ${path}`);
  }

  private checkRecording(recording: any): string | null {
    if (!recording || typeof recording !== 'object') return 'recording must be an object';
    const extra = Object.keys(recording).filter((k) => !RECORDING_KEYS.includes(k));
    if (extra.length) return `UnexpectedField: ${extra[0]}`;
    if (recording.joint_set !== 'body13') return 'BadJointSet';
    if (!Array.isArray(recording.frames) || recording.frames.length < 2) return 'TooFewFrames';
    let previous = -1;
    for (const frame of recording.frames) {
      const frameExtra = Object.keys(frame).filter((k) => !FRAME_KEYS.includes(k));
      if (frameExtra.length) return `UnexpectedField: ${frameExtra[0]}`;
      if (frame.t_ms <= previous) return 'NonMonotoneTimestamps';
      previous = frame.t_ms;
      const names = frame.joints.map((j: any) => j.name);
      for (const joint of frame.joints) {
        const jointExtra = Object.keys(joint).filter((k) => !JOINT_KEYS.includes(k));
        if (jointExtra.length) return `UnexpectedField: ${jointExtra[0]}`;
        if (!BODY13.includes(joint.name)) return `UnknownJoint: ${joint.name}`;
        if (joint.x < 0 || joint.x > 1 || joint.y < 0 || joint.y > 1) {
          return 'CoordinateOutOfRange';
        }
      }
      if (new Set(names).size !== 13) return 'MissingJoint';
    }
    return null;
  }
}
