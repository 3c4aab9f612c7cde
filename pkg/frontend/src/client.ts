/**
 * Session client: owns the WebSocket, the session token, and the pairing of
 * outbound packets with inbound frame results.
 *
 * The socket is injected so tests (and the replay harness) can drive the
 * client without a network. Packets with non-increasing timestamps are
 * dropped client-side; the service would reject them anyway.
 */

import {
  assemblePacket,
  parseServerMessage,
  type CapturedLandmarks,
  type ClientMessage,
  type FramePacket,
  type FrameResultMessage,
  type SummaryMessage,
} from "./protocol.js";

export interface SocketLike {
  send(data: string): void;
  close(): void;
  onmessage: ((event: { data: string }) => void) | null;
  onclose: (() => void) | null;
  onopen: (() => void) | null;
}

export type SocketFactory = (url: string) => SocketLike;

export interface ClientEvents {
  onFrame?: (packet: FramePacket, message: FrameResultMessage) => void;
  onSummary?: (message: SummaryMessage) => void;
  onError?: (code: string, detail: string) => void;
  onStatus?: (status: "connecting" | "live" | "ended" | "disconnected") => void;
}

export class SessionClient {
  private socket: SocketLike | null = null;
  private token: string | null = null;
  private lastTms = -1;
  private inFlight: FramePacket[] = [];

  constructor(
    private readonly url: string,
    private readonly user: string,
    private readonly events: ClientEvents,
    private readonly makeSocket: SocketFactory,
    private readonly config?: Record<string, unknown>,
  ) {}

  get started(): boolean {
    return this.token !== null;
  }

  connect(): void {
    this.events.onStatus?.("connecting");
    this.socket = this.makeSocket(this.url);
    this.socket.onopen = () => {
      this.sendMessage({ type: "start", user: this.user, config: this.config });
    };
    this.socket.onmessage = (event) => this.handleMessage(event.data);
    this.socket.onclose = () => {
      this.token = null;
      this.inFlight = [];
      this.events.onStatus?.("disconnected");
    };
  }

  /** Reconnect with a fresh session; timestamps restart with the camera clock. */
  reconnect(): void {
    this.socket?.close();
    this.lastTms = -1;
    this.connect();
  }

  sendCapture(tMs: number, captured: CapturedLandmarks): boolean {
    if (!this.socket || this.token === null) return false;
    if (tMs <= this.lastTms) return false;
    const packet = assemblePacket(tMs, captured);
    this.lastTms = tMs;
    this.inFlight.push(packet);
    this.sendMessage({ type: "frame", token: this.token, packet });
    return true;
  }

  end(): void {
    if (!this.socket || this.token === null) return;
    this.sendMessage({ type: "end", token: this.token });
    this.token = null;
  }

  private sendMessage(message: ClientMessage): void {
    this.socket?.send(JSON.stringify(message));
  }

  private handleMessage(raw: string): void {
    const message = parseServerMessage(raw);
    if (message === null) {
      this.events.onError?.("bad_server_message", "unparseable message from service");
      return;
    }
    switch (message.type) {
      case "started":
        this.token = message.token;
        this.events.onStatus?.("live");
        break;
      case "frame_result": {
        // responses arrive in submission order; drop anything older than
        // the answered timestamp in case a rejected frame desynced the queue
        let packet = this.inFlight.shift();
        while (packet && packet.t_ms < message.t_ms) {
          packet = this.inFlight.shift();
        }
        if (packet && packet.t_ms === message.t_ms) {
          this.events.onFrame?.(packet, message);
        }
        break;
      }
      case "summary":
        this.events.onSummary?.(message);
        this.events.onStatus?.("ended");
        break;
      case "error":
        this.events.onError?.(message.code, message.detail);
        break;
    }
  }
}
