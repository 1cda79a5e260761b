/// <reference types="vitest" />
import { defineConfig } from "vite";

export default defineConfig({
  // the game service mounts the built bundle under /app
  base: "/app/",
  build: {
    outDir: "dist",
  },
  test: {
    environment: "jsdom",
    setupFiles: ["test/setup.ts"],
  },
});
