import { describe, expect, it } from 'vitest';

import { ApiClient } from '../src/api';
import { StudioApp } from '../src/app';
import { renderStudio } from '../src/panels';
import { commentarySubmitEnabled, enabledControls, initialState } from '../src/store';
import { GestureProposal } from '../src/types';
import { FakeEngine } from './fakeEngine';

function proposals(count: number): GestureProposal[] {
  return Array.from({ length: count }, (_, i) => ({
    ordinal: i,
    description: `gesture ${i}`,
    intention: 'explain_complex',
    gesture_type: 'iconic',
    references: ['mcneill1992'],
    few_shot_exemplar_id: null,
  }));
}

describe('commentary submit gating', () => {
  it('is disabled with no ratings at all', () => {
    expect(commentarySubmitEnabled(proposals(3), {})).toBe(false);
  });

  it('is disabled when only 2 of 3 proposals are rated', () => {
    const drafts = {
      0: { stars: 5, comment: 'good' },
      1: { stars: 3, comment: 'okay' },
    };
    expect(commentarySubmitEnabled(proposals(3), drafts)).toBe(false);
  });

  it('is disabled while any comment is empty', () => {
    const drafts = {
      0: { stars: 5, comment: 'good' },
      1: { stars: 3, comment: '   ' },
      2: { stars: 4, comment: 'fine' },
    };
    expect(commentarySubmitEnabled(proposals(3), drafts)).toBe(false);
  });

  it('is disabled while any stars are unset', () => {
    const drafts = {
      0: { stars: 0, comment: 'good' },
      1: { stars: 3, comment: 'okay' },
      2: { stars: 4, comment: 'fine' },
    };
    expect(commentarySubmitEnabled(proposals(3), drafts)).toBe(false);
  });

  it('unlocks once every proposal has stars and a non-empty comment', () => {
    const drafts = {
      0: { stars: 5, comment: 'good' },
      1: { stars: 3, comment: 'okay' },
      2: { stars: 4, comment: 'fine' },
    };
    expect(commentarySubmitEnabled(proposals(3), drafts)).toBe(true);
  });
});

describe('stage panel control isolation', () => {
  it('enables only the current stage controls', () => {
    const commentary = enabledControls({
      ...initialState,
      stage: 'Commentary',
      proposals: proposals(1),
      ratingDrafts: { 0: { stars: 4, comment: 'x' } },
    });
    expect(commentary.has('rating_submit')).toBe(true);
    expect(commentary.has('scenario_picker')).toBe(false);
    expect(commentary.has('mirror_record')).toBe(false);

    const demonstration = enabledControls({ ...initialState, stage: 'Demonstration' });
    expect(demonstration.has('mirror_record')).toBe(true);
    expect(demonstration.has('rating_submit')).toBe(false);
  });

  it('disables everything while a mutation is pending', () => {
    expect(enabledControls({ ...initialState, pending: true }).size).toBe(0);
  });
});

describe('commentary panel in the DOM', () => {
  async function mountAtCommentary() {
    const engine = new FakeEngine();
    const app = new StudioApp(new ApiClient('', engine.fetch), () => 0);
    await app.start();
    const root = document.createElement('div');
    renderStudio(root, {
      store: app.store,
      api: app.api,
      actions: app.actions,
      catalog: [],
      mirrorCanvas: document.createElement('canvas'),
    });
    app.store.set({
      stage: 'Commentary',
      proposals: proposals(2),
      ratingDrafts: {},
    });
    return { app, root };
  }

  it('keeps the submit button disabled until drafts are complete', async () => {
    const { app, root } = await mountAtCommentary();
    const submit = () => root.querySelector('#rating-submit') as HTMLButtonElement;
    expect(submit().disabled).toBe(true);

    app.actions.setRatingDraft(0, { stars: 5, comment: 'clear' });
    expect(submit().disabled).toBe(true); // 1 of 2 rated

    app.actions.setRatingDraft(1, { stars: 2 });
    expect(submit().disabled).toBe(true); // missing comment

    app.actions.setRatingDraft(1, { comment: 'too subtle' });
    expect(submit().disabled).toBe(false);
  });

  it('renders one card per proposal with star widgets', async () => {
    const { root } = await mountAtCommentary();
    expect(root.querySelectorAll('.proposal-card')).toHaveLength(2);
    expect(root.querySelectorAll('.star-row')).toHaveLength(2);
  });
});
