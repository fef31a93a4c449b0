/** UI state: one observable store, with stage panel state derived from the
 * session document so a hard refresh reconstructs the exact same panels. */

import {
  GestureProposal,
  MenteeMessage,
  SessionDocument,
  Stage,
} from './types';

export interface RatingDraft {
  stars: number; // 0 = unset
  comment: string;
}

export interface AppState {
  sessionId: string | null;
  stage: Stage;
  proposals: GestureProposal[];
  menteeMessages: MenteeMessage[];
  summaries: string[];
  ratingDrafts: Record<number, RatingDraft>;
  ratingsSubmitted: boolean;
  pending: boolean;
  error: string | null;
}

export const initialState: AppState = {
  sessionId: null,
  stage: 'PosingQuestion',
  proposals: [],
  menteeMessages: [],
  summaries: [],
  ratingDrafts: {},
  ratingsSubmitted: false,
  pending: false,
  error: null,
};

type Listener = (state: AppState) => void;

export class Store {
  private state: AppState = { ...initialState };
  private listeners: Listener[] = [];

  get(): AppState {
    return this.state;
  }

  set(patch: Partial<AppState>): void {
    this.state = { ...this.state, ...patch };
    for (const listener of this.listeners) {
      listener(this.state);
    }
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }
}

/** Rebuild the UI slice of state from a session document (hard refresh). */
export function deriveStateFromSession(doc: SessionDocument): Partial<AppState> {
  const lastRound = doc.rounds[doc.rounds.length - 1];
  const drafts: Record<number, RatingDraft> = {};
  if (lastRound) {
    for (const rating of lastRound.ratings) {
      drafts[rating.proposal_ordinal] = { stars: rating.stars, comment: rating.comment };
    }
  }
  return {
    sessionId: doc.id,
    stage: doc.stage,
    proposals: lastRound && !lastRound.summary ? lastRound.proposals : [],
    menteeMessages: doc.rounds.flatMap((round) => round.mentee_messages),
    summaries: doc.rounds
      .map((round) => round.summary)
      .filter((summary): summary is string => summary !== null),
    ratingDrafts: drafts,
    ratingsSubmitted: Boolean(lastRound && lastRound.ratings.length > 0 && !lastRound.summary),
  };
}

export type ControlName =
  | 'scenario_picker'
  | 'scenario_custom'
  | 'rating_stars'
  | 'rating_comment'
  | 'rating_submit'
  | 'mirror_practice'
  | 'mirror_record'
  | 'demonstration_submit'
  | 'explanation_text'
  | 'explanation_submit';

const STAGE_CONTROLS: Record<Stage, ControlName[]> = {
  PosingQuestion: ['scenario_picker', 'scenario_custom'],
  Commentary: ['rating_stars', 'rating_comment', 'rating_submit'],
  Demonstration: ['mirror_practice', 'mirror_record', 'demonstration_submit'],
  Explanation: ['explanation_text', 'explanation_submit'],
};

/** Every proposal needs stars (1..5) and a non-empty comment before the
 * commentary submit control unlocks. */
export function commentarySubmitEnabled(
  proposals: GestureProposal[],
  drafts: Record<number, RatingDraft>
): boolean {
  if (proposals.length === 0) {
    return false;
  }
  return proposals.every((proposal) => {
    const draft = drafts[proposal.ordinal];
    return Boolean(
      draft && draft.stars >= 1 && draft.stars <= 5 && draft.comment.trim().length > 0
    );
  });
}

/** Which controls are live for the current stage; only the current stage's
 * controls are ever enabled, and the rating submit also obeys the coverage
 * gate. */
export function enabledControls(state: AppState): Set<ControlName> {
  if (state.pending) {
    return new Set();
  }
  const controls = new Set<ControlName>(STAGE_CONTROLS[state.stage]);
  if (state.stage === 'Commentary' && !commentarySubmitEnabled(state.proposals, state.ratingDrafts)) {
    controls.delete('rating_submit');
  }
  return controls;
}
