/**
 * UI control state: close camera / flip camera / open settings / view history.
 * Settings edits are staged and only apply when the next session starts.
 */

export type Panel = "none" | "settings" | "history";
export type Mode = "live" | "replay";

export interface Settings {
  angleToleranceDeg: number;
  userId: string;
  mode: Mode;
}

export interface UiState {
  cameraOpen: boolean;
  facing: "front" | "rear";
  panel: Panel;
  sessionActive: boolean;
  settings: Settings;
  /** Staged edits; merged into settings when a session starts. */
  pendingSettings: Partial<Settings>;
}

export function initialUiState(userId: string): UiState {
  return {
    cameraOpen: false,
    facing: "front",
    panel: "none",
    sessionActive: false,
    settings: { angleToleranceDeg: 10, userId, mode: "live" },
    pendingSettings: {},
  };
}

export function toggleCamera(state: UiState): UiState {
  if (state.sessionActive) return state; // stop the session before closing
  return { ...state, cameraOpen: !state.cameraOpen };
}

export function flipCamera(state: UiState): UiState {
  return { ...state, facing: state.facing === "front" ? "rear" : "front" };
}

export function togglePanel(state: UiState, panel: Exclude<Panel, "none">): UiState {
  return { ...state, panel: state.panel === panel ? "none" : panel };
}

export function editSettings(state: UiState, edit: Partial<Settings>): UiState {
  return { ...state, pendingSettings: { ...state.pendingSettings, ...edit } };
}

export function startSession(state: UiState): UiState {
  const settings = { ...state.settings, ...state.pendingSettings };
  if (settings.mode === "live" && !state.cameraOpen) return state;
  return { ...state, sessionActive: true, panel: "none", settings, pendingSettings: {} };
}

export function stopSession(state: UiState): UiState {
  return { ...state, sessionActive: false };
}
