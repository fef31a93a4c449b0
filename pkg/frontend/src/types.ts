/** Wire types shared with the engine API (field names are normative). */

export type Stage = 'PosingQuestion' | 'Commentary' | 'Demonstration' | 'Explanation';

export const STAGES: Stage[] = ['PosingQuestion', 'Commentary', 'Demonstration', 'Explanation'];

/** The 13 body joints a recording may carry; facial and hand-finger
 * landmarks never appear. */
export const BODY13_JOINTS = [
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
] as const;

export type JointName = (typeof BODY13_JOINTS)[number];

export interface BodyJoint {
  name: JointName;
  x: number;
  y: number;
  confidence: number;
}

/** One captured pose, normalized to the capture viewport. */
export interface Body13Frame {
  joints: BodyJoint[];
}

export interface RecordingFrame {
  t_ms: number;
  joints: BodyJoint[];
}

export interface SkeletalRecording {
  joint_set: 'body13';
  fps_nominal: number;
  frames: RecordingFrame[];
}

export interface TeachingScenario {
  subject: string;
  grade_level: string;
  lesson_topic: string;
  scenario_text: string;
  source: 'catalog' | 'custom';
}

export interface CatalogEntry {
  id: string;
  subject: string;
  grade_level: string;
  lesson_topic: string;
  scenario_text: string;
}

export interface GestureProposal {
  ordinal: number;
  description: string;
  intention: string;
  gesture_type: string;
  references: string[];
  few_shot_exemplar_id: number | null;
}

export interface MenteeMessage {
  role: 'mentee';
  text: string;
  stage_hint: Stage;
}

export interface Rating {
  proposal_ordinal: number;
  stars: number;
  comment: string;
}

export interface RoundDocument {
  index: number;
  scenario: TeachingScenario;
  proposals: GestureProposal[];
  mentee_messages: MenteeMessage[];
  ratings: Rating[];
  recording: SkeletalRecording | null;
  explanation: string | null;
  summary: string | null;
}

export interface SessionDocument {
  id: string;
  created_at: string;
  group_label: string | null;
  stage: Stage;
  rounds: RoundDocument[];
}

export interface KnowledgeEntry {
  kind: string;
  key: string;
  definition: string;
  origin?: string;
  citations: { key: string; display: string }[];
}

export interface ScenarioResponse {
  stage: Stage;
  no_gesture_needed: boolean;
  proposals: GestureProposal[];
  mentee_message: MenteeMessage;
}

export interface StageResponse {
  stage: Stage;
  mentee_message: MenteeMessage;
}

export interface ExplanationResponse extends StageResponse {
  summary: string;
}
