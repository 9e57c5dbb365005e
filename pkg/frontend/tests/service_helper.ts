// Spawns the real behavior service (replay-backed) for integration tests.

import { spawn, type ChildProcess } from "node:child_process";
import { mkdtempSync } from "node:fs";
import { createServer } from "node:net";
import { tmpdir } from "node:os";
import { join } from "node:path";

export interface RunningService {
  baseUrl: string;
  stop: () => void;
}

async function freePort(): Promise<number> {
  return new Promise((resolve, reject) => {
    const server = createServer();
    server.on("error", reject);
    server.listen(0, "127.0.0.1", () => {
      const address = server.address();
      if (address === null || typeof address === "string") {
        reject(new Error("no port"));
        return;
      }
      const port = address.port;
      server.close(() => resolve(port));
    });
  });
}

export async function startService(): Promise<RunningService> {
  const port = await freePort();
  const storeRoot = mkdtempSync(join(tmpdir(), "genem-ui-"));
  const child: ChildProcess = spawn("python3", ["-m", "genem.service"], {
    env: {
      ...process.env,
      GENEM_STORE_ROOT: storeRoot,
      GENEM_PORT: String(port),
      GENEM_BACKEND: "replay",
    },
    stdio: "ignore",
  });
  const baseUrl = `http://127.0.0.1:${port}`;
  for (let attempt = 0; attempt < 100; attempt++) {
    if (child.exitCode !== null) {
      throw new Error(`service exited with ${child.exitCode}`);
    }
    try {
      const response = await fetch(`${baseUrl}/scenarios`);
      if (response.ok) {
        return { baseUrl, stop: () => child.kill("SIGKILL") };
      }
    } catch {
      // not up yet
    }
    await new Promise((r) => setTimeout(r, 100));
  }
  child.kill("SIGKILL");
  throw new Error("service did not start");
}
