/**
 * WebSocket bridge for the browser UI.
 *
 * Each WebSocket connection gets its own engine process speaking the
 * newline protocol over stdio; the bridge relays lines in both directions
 * and tears the process down when the socket closes. Run with
 * `npm run bridge` and open index.html.
 */

import { spawn } from "node:child_process";
import process from "node:process";
import { pathToFileURL } from "node:url";
import { WebSocketServer } from "ws";

import { LineSplitter } from "./transport.js";

const SERVER = ["python3", "-m", "seqcraft.cli", "serve", "--stdio"];

export interface Bridge {
  port: number;
  close(): Promise<void>;
}

export function startBridge(port = 8765): Promise<Bridge> {
  const wss = new WebSocketServer({ port });

  wss.on("connection", (socket) => {
    const child = spawn(SERVER[0]!, SERVER.slice(1), {
      stdio: ["pipe", "pipe", "inherit"],
    });
    const splitter = new LineSplitter((line) => socket.send(line));
    child.stdout!.setEncoding("utf-8");
    child.stdout!.on("data", (chunk: string) => splitter.push(chunk));
    socket.on("message", (data) => child.stdin!.write(`${String(data)}\n`));
    socket.on("close", () => child.kill());
    child.on("close", () => socket.close());
  });

  return new Promise((resolve, reject) => {
    wss.once("error", reject);
    wss.once("listening", () => {
      const address = wss.address();
      resolve({
        port: typeof address === "object" && address ? address.port : port,
        close: () =>
          new Promise((done) => {
            for (const client of wss.clients) client.terminate();
            wss.close(() => done());
          }),
      });
    });
  });
}

const invokedDirectly =
  typeof process.argv[1] === "string" &&
  import.meta.url === pathToFileURL(process.argv[1]).href;

if (invokedDirectly) {
  const flag = process.argv.indexOf("--port");
  const port = flag >= 0 ? Number.parseInt(process.argv[flag + 1] ?? "", 10) : 8765;
  startBridge(Number.isNaN(port) ? 8765 : port).then(
    (bridge) => console.log(`bridge listening on ws://127.0.0.1:${bridge.port}`),
    (err) => {
      console.error(String(err));
      process.exit(1);
    },
  );
}
