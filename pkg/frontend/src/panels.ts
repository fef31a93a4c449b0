/** Stage panels: scenario entry, proposal cards with ratings and knowledge
 * foldables, the mirror controls, and the explanation form. Only the current
 * stage's panel is interactive; everything re-renders from the store. */

import { ApiClient } from './api';
import { AppState, ControlName, Store, enabledControls } from './store';
import { CatalogEntry, GestureProposal } from './types';

export interface StudioActions {
  poseCatalogScenario(catalogId: string): void;
  poseCustomScenario(fields: {
    subject: string;
    grade_level: string;
    lesson_topic: string;
    scenario_text: string;
  }): void;
  setRatingDraft(ordinal: number, patch: { stars?: number; comment?: string }): void;
  submitRatings(): void;
  mirrorPractice(): void;
  mirrorRecord(): void;
  mirrorStop(): void;
  mirrorDiscard(): void;
  submitDemonstration(): void;
  submitExplanation(text: string): void;
}

export interface StudioContext {
  store: Store;
  api: ApiClient;
  actions: StudioActions;
  catalog: CatalogEntry[];
  mirrorCanvas: HTMLCanvasElement;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

/** Attach platform dictation to a text field when the browser offers it. */
export function attachDictation(button: HTMLButtonElement, target: HTMLTextAreaElement): void {
  const Recognition =
    (window as any).SpeechRecognition || (window as any).webkitSpeechRecognition;
  if (!Recognition) {
    button.hidden = true;
    return;
  }
  button.addEventListener('click', () => {
    const recognition = new Recognition();
    recognition.lang = document.documentElement.lang || 'en-US';
    recognition.onresult = (event: any) => {
      const transcript = event.results?.[0]?.[0]?.transcript ?? '';
      target.value = target.value ? `${target.value} ${transcript}` : transcript;
      target.dispatchEvent(new Event('input'));
    };
    recognition.start();
  });
}

function renderMenteeFeed(state: AppState): HTMLElement {
  const feed = el('section', 'mentee-feed');
  feed.appendChild(el('h2', undefined, 'Novobo'));
  if (state.menteeMessages.length === 0) {
    feed.appendChild(
      el(
        'p',
        'mentee-bubble',
        'Hello mentors! I know the theory of instructional gestures but I have ' +
          'never stood in a classroom. Pose a teaching scenario and I will try ' +
          'to suggest gestures for it.'
      )
    );
  }
  for (const message of state.menteeMessages.slice(-4)) {
    const bubble = el('p', 'mentee-bubble', message.text);
    bubble.dataset.stageHint = message.stage_hint;
    feed.appendChild(bubble);
  }
  if (state.error) {
    feed.appendChild(el('p', 'error-line', state.error));
  }
  return feed;
}

function renderScenarioPanel(ctx: StudioContext, controls: Set<ControlName>): HTMLElement {
  const panel = el('section', 'panel panel-scenario');
  panel.appendChild(el('h3', undefined, 'Posing Question'));

  const picker = el('div', 'catalog-picker');
  for (const entry of ctx.catalog) {
    const card = el('button', 'catalog-card');
    card.disabled = !controls.has('scenario_picker');
    card.appendChild(el('strong', undefined, entry.scenario_text));
    card.appendChild(
      el('small', undefined, `${entry.subject} · ${entry.grade_level} · ${entry.lesson_topic}`)
    );
    card.addEventListener('click', () => ctx.actions.poseCatalogScenario(entry.id));
    picker.appendChild(card);
  }
  panel.appendChild(picker);

  panel.appendChild(el('h4', undefined, 'Or describe your own scenario'));
  const form = el('div', 'custom-scenario');
  const subject = el('input') as HTMLInputElement;
  subject.placeholder = 'Subject';
  const grade = el('input') as HTMLInputElement;
  grade.placeholder = 'Grade level';
  const topic = el('input') as HTMLInputElement;
  topic.placeholder = 'Lesson topic';
  const text = el('textarea') as HTMLTextAreaElement;
  text.placeholder = 'What is said or happening in class...';
  const dictate = el('button', 'dictate-btn', '🎤 dictate') as HTMLButtonElement;
  attachDictation(dictate, text);
  const submit = el('button', 'primary', 'Ask Novobo') as HTMLButtonElement;
  submit.disabled = !controls.has('scenario_custom');
  submit.addEventListener('click', () =>
    ctx.actions.poseCustomScenario({
      subject: subject.value,
      grade_level: grade.value,
      lesson_topic: topic.value,
      scenario_text: text.value,
    })
  );
  for (const node of [subject, grade, topic, text, dictate, submit]) {
    form.appendChild(node);
  }
  panel.appendChild(form);
  return panel;
}

function starWidget(
  ctx: StudioContext,
  proposal: GestureProposal,
  stars: number,
  enabled: boolean
): HTMLElement {
  const row = el('div', 'star-row');
  for (let value = 1; value <= 5; value += 1) {
    const star = el('button', value <= stars ? 'star on' : 'star', '★') as HTMLButtonElement;
    star.disabled = !enabled;
    star.setAttribute('aria-label', `${value} stars`);
    star.addEventListener('click', () =>
      ctx.actions.setRatingDraft(proposal.ordinal, { stars: value })
    );
    row.appendChild(star);
  }
  return row;
}

function knowledgeFoldable(ctx: StudioContext, proposal: GestureProposal): HTMLElement {
  const foldable = el('details', 'knowledge-foldable');
  foldable.appendChild(el('summary', undefined, 'Why this gesture? (theory and sources)'));
  const body = el('div', 'knowledge-body', 'Loading...');
  foldable.appendChild(body);
  let loaded = false;
  foldable.addEventListener('toggle', async () => {
    if (!foldable.open || loaded) return;
    loaded = true;
    try {
      const [intention, gestureType] = await Promise.all([
        ctx.api.getKnowledge('intentions', proposal.intention),
        ctx.api.getKnowledge('gesture_types', proposal.gesture_type),
      ]);
      body.textContent = '';
      for (const entry of [intention, gestureType]) {
        body.appendChild(el('h5', undefined, entry.key.replace(/_/g, ' ')));
        body.appendChild(el('p', undefined, entry.definition));
        const sources = el('ul', 'citations');
        for (const citation of entry.citations) {
          sources.appendChild(el('li', undefined, citation.display));
        }
        body.appendChild(sources);
      }
    } catch (error) {
      loaded = false;
      body.textContent = `Could not load the knowledge entry: ${error}`;
    }
  });
  return foldable;
}

function renderCommentaryPanel(ctx: StudioContext, controls: Set<ControlName>): HTMLElement {
  const state = ctx.store.get();
  const panel = el('section', 'panel panel-commentary');
  panel.appendChild(el('h3', undefined, 'Commentary'));
  panel.appendChild(
    el('p', 'hint', 'Rate every gesture and leave a comment before submitting.')
  );
  for (const proposal of state.proposals) {
    const card = el('article', 'proposal-card');
    card.appendChild(
      el('header', undefined, `#${proposal.ordinal + 1} · ${proposal.gesture_type} · ${proposal.intention}`)
    );
    card.appendChild(el('p', undefined, proposal.description));
    card.appendChild(knowledgeFoldable(ctx, proposal));
    const draft = state.ratingDrafts[proposal.ordinal] ?? { stars: 0, comment: '' };
    card.appendChild(starWidget(ctx, proposal, draft.stars, controls.has('rating_stars')));
    const comment = el('textarea', 'comment-box') as HTMLTextAreaElement;
    comment.placeholder = 'Strengths, weaknesses, suggestions...';
    comment.value = draft.comment;
    comment.disabled = !controls.has('rating_comment');
    comment.addEventListener('input', () =>
      ctx.actions.setRatingDraft(proposal.ordinal, { comment: comment.value })
    );
    card.appendChild(comment);
    panel.appendChild(card);
  }
  const submit = el('button', 'primary', 'Submit feedback') as HTMLButtonElement;
  submit.id = 'rating-submit';
  submit.disabled = !controls.has('rating_submit');
  submit.addEventListener('click', () => ctx.actions.submitRatings());
  panel.appendChild(submit);
  return panel;
}

function renderDemonstrationPanel(ctx: StudioContext, controls: Set<ControlName>): HTMLElement {
  const panel = el('section', 'panel panel-demonstration');
  panel.appendChild(el('h3', undefined, 'Demonstration'));
  panel.appendChild(
    el('p', 'hint', 'Practice in the mirror, record your gesture, review the replay, then send it.')
  );
  panel.appendChild(ctx.mirrorCanvas);
  const buttons = el('div', 'mirror-buttons');
  const practice = el('button', undefined, 'Practice') as HTMLButtonElement;
  practice.disabled = !controls.has('mirror_practice');
  practice.addEventListener('click', () => ctx.actions.mirrorPractice());
  const record = el('button', undefined, 'Record') as HTMLButtonElement;
  record.disabled = !controls.has('mirror_record');
  record.addEventListener('click', () => ctx.actions.mirrorRecord());
  const stop = el('button', undefined, 'Stop') as HTMLButtonElement;
  stop.addEventListener('click', () => ctx.actions.mirrorStop());
  const discard = el('button', undefined, 'Re-record') as HTMLButtonElement;
  discard.addEventListener('click', () => ctx.actions.mirrorDiscard());
  const send = el('button', 'primary', 'Send this take to Novobo') as HTMLButtonElement;
  send.id = 'demonstration-submit';
  send.disabled = !controls.has('demonstration_submit');
  send.addEventListener('click', () => ctx.actions.submitDemonstration());
  for (const node of [practice, record, stop, discard, send]) {
    buttons.appendChild(node);
  }
  panel.appendChild(buttons);
  return panel;
}

function renderExplanationPanel(ctx: StudioContext, controls: Set<ControlName>): HTMLElement {
  const panel = el('section', 'panel panel-explanation');
  panel.appendChild(el('h3', undefined, 'Explanation'));
  panel.appendChild(
    el('p', 'hint', 'Describe your gesture and explain why it fits this scenario.')
  );
  const text = el('textarea', 'explanation-box') as HTMLTextAreaElement;
  text.disabled = !controls.has('explanation_text');
  const dictate = el('button', 'dictate-btn', '🎤 dictate') as HTMLButtonElement;
  attachDictation(dictate, text);
  const submit = el('button', 'primary', 'Teach Novobo') as HTMLButtonElement;
  submit.id = 'explanation-submit';
  submit.disabled = !controls.has('explanation_submit');
  submit.addEventListener('click', () => ctx.actions.submitExplanation(text.value));
  panel.appendChild(text);
  panel.appendChild(dictate);
  panel.appendChild(submit);
  return panel;
}

function renderSummaries(state: AppState): HTMLElement {
  const section = el('section', 'summaries');
  if (state.summaries.length) {
    section.appendChild(el('h3', undefined, 'What Novobo has learned'));
    for (const summary of state.summaries) {
      section.appendChild(el('blockquote', 'summary', summary));
    }
  }
  return section;
}

/** Mount the studio; re-renders the stage panel whenever the store changes. */
export function renderStudio(root: HTMLElement, ctx: StudioContext): void {
  const container = el('div', 'studio');
  const feedHost = el('div', 'feed-host');
  const panelHost = el('div', 'panel-host');
  const summaryHost = el('div', 'summary-host');
  container.appendChild(feedHost);
  container.appendChild(panelHost);
  container.appendChild(summaryHost);
  root.appendChild(container);

  const sync = () => {
    const state = ctx.store.get();
    const controls = enabledControls(state);
    feedHost.replaceChildren(renderMenteeFeed(state));
    let panel: HTMLElement;
    switch (state.stage) {
      case 'PosingQuestion':
        panel = renderScenarioPanel(ctx, controls);
        break;
      case 'Commentary':
        panel = renderCommentaryPanel(ctx, controls);
        break;
      case 'Demonstration':
        panel = renderDemonstrationPanel(ctx, controls);
        break;
      case 'Explanation':
        panel = renderExplanationPanel(ctx, controls);
        break;
    }
    panelHost.replaceChildren(panel);
    summaryHost.replaceChildren(renderSummaries(state));
  };

  sync();
  ctx.store.subscribe(sync);
}
