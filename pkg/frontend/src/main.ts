/** Entry point: boot the studio against the engine API.
 *
 * Query params: ?session=<id> resumes a session after a hard refresh,
 * ?synthetic=1 uses the built-in synthetic pose source (no camera needed),
 * ?api=<base> points at a non-default engine URL.
 */

import { ApiClient } from './api';
import { StudioApp } from './app';
import { renderStudio } from './panels';
import {
  CameraUnavailable,
  PoseEstimator,
  SyntheticPoseEstimator,
  loadMediaPipeEstimator,
  openCamera,
} from './pose';

async function boot(): Promise<void> {
  const params = new URLSearchParams(window.location.search);
  const api = new ApiClient(params.get('api') ?? '');
  const app = new StudioApp(api);

  const root = document.getElementById('app');
  if (!root) {
    throw new Error('missing #app mount point');
  }

  const canvas = document.createElement('canvas');
  canvas.className = 'mirror-canvas';
  canvas.width = 640;
  canvas.height = 480;

  const video = document.createElement('video');
  video.muted = true;
  video.playsInline = true;

  let estimator: PoseEstimator;
  if (params.get('synthetic')) {
    estimator = new SyntheticPoseEstimator();
  } else {
    try {
      const stream = await openCamera();
      video.srcObject = stream;
      await video.play();
      estimator = await loadMediaPipeEstimator();
      video.addEventListener('ended', () => app.mirror.cameraLost(performance.now()));
      stream.getVideoTracks()[0]?.addEventListener('ended', () =>
        app.mirror.cameraLost(performance.now())
      );
    } catch (error) {
      if (error instanceof CameraUnavailable) {
        console.warn(`${error.message}; falling back to the synthetic pose source`);
      } else {
        console.warn(`pose model unavailable (${error}); using the synthetic source`);
      }
      estimator = new SyntheticPoseEstimator();
    }
  }

  await app.start(params.get('session') ?? undefined, params.get('group') ?? undefined);
  const sessionId = app.store.get().sessionId;
  if (sessionId && !params.get('session')) {
    params.set('session', sessionId);
    window.history.replaceState(null, '', `?${params.toString()}`);
  }

  const catalog = await api.listScenarios();
  renderStudio(root, {
    store: app.store,
    api,
    actions: app.actions,
    catalog,
    mirrorCanvas: canvas,
  });
  app.attachMirror(canvas, video, estimator);

  const mirrorToggle = document.getElementById('mirror-toggle');
  mirrorToggle?.addEventListener('change', (event) => {
    app.mirrored = (event.target as HTMLInputElement).checked;
  });
}

boot().catch((error) => {
  const root = document.getElementById('app');
  if (root) {
    root.textContent = `Could not start the studio: ${error}`;
  }
});
