/**
 * Line transports carrying the JSON protocol.
 *
 * The browser build talks to a WebSocket bridge in front of the server's
 * TCP port; tests and desktop shells spawn `seqcraft serve --stdio` and
 * speak over its pipes. Both deliver whole lines, in order.
 */

export interface LineTransport {
  send(line: string): void;
  onLine(handler: (line: string) => void): void;
  onClose(handler: () => void): void;
  close(): Promise<void>;
}

/** Reassembles complete lines from arbitrary stream chunks. */
export class LineSplitter {
  private buffer = "";

  constructor(private readonly emit: (line: string) => void) {}

  push(chunk: string): void {
    this.buffer += chunk;
    for (;;) {
      const nl = this.buffer.indexOf("\n");
      if (nl < 0) return;
      const line = this.buffer.slice(0, nl);
      this.buffer = this.buffer.slice(nl + 1);
      if (line.trim().length > 0) this.emit(line);
    }
  }
}

/** Spawns a server process and speaks the protocol over stdin/stdout. */
export class StdioTransport implements LineTransport {
  private readonly lineHandlers: ((line: string) => void)[] = [];
  private readonly closeHandlers: (() => void)[] = [];
  private child: import("node:child_process").ChildProcess | null = null;
  private ready: Promise<void>;

  constructor(command: string, args: string[]) {
    this.ready = (async () => {
      const { spawn } = await import("node:child_process");
      const child = spawn(command, args, { stdio: ["pipe", "pipe", "inherit"] });
      const splitter = new LineSplitter((line) => {
        for (const h of this.lineHandlers) h(line);
      });
      child.stdout!.setEncoding("utf-8");
      child.stdout!.on("data", (chunk: string) => splitter.push(chunk));
      child.on("close", () => {
        for (const h of this.closeHandlers) h();
      });
      this.child = child;
    })();
  }

  send(line: string): void {
    void this.ready.then(() => {
      this.child!.stdin!.write(line + "\n");
    });
  }

  onLine(handler: (line: string) => void): void {
    this.lineHandlers.push(handler);
  }

  onClose(handler: () => void): void {
    this.closeHandlers.push(handler);
  }

  async close(): Promise<void> {
    await this.ready;
    const child = this.child!;
    await new Promise<void>((resolve) => {
      child.once("close", () => resolve());
      child.stdin!.end();
      setTimeout(() => {
        child.kill();
        resolve();
      }, 2000).unref?.();
    });
  }
}

/** Browser-side transport: one protocol line per WebSocket message. */
export class WebSocketTransport implements LineTransport {
  private readonly socket: WebSocket;

  constructor(url: string) {
    this.socket = new WebSocket(url);
  }

  send(line: string): void {
    if (this.socket.readyState === WebSocket.OPEN) {
      this.socket.send(line);
    } else {
      this.socket.addEventListener("open", () => this.socket.send(line), { once: true });
    }
  }

  onLine(handler: (line: string) => void): void {
    this.socket.addEventListener("message", (event) => handler(String(event.data)));
  }

  onClose(handler: () => void): void {
    this.socket.addEventListener("close", () => handler());
  }

  async close(): Promise<void> {
    this.socket.close();
  }
}
