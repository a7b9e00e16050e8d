import assert from "node:assert/strict";
import { test } from "node:test";

import { debounce, MIN_REQUEST_SPACING_MS, VersionGate } from "../src/scheduler.js";

test("debounce collapses a slider drag into one trailing call", () => {
  // Fake timers: capture callbacks, fire only the survivor.
  const pending = new Map<number, () => void>();
  let nextId = 1;
  const timers = {
    set: ((fn: () => void) => {
      const id = nextId++;
      pending.set(id, fn);
      return id as unknown as ReturnType<typeof setTimeout>;
    }) as typeof setTimeout,
    clear: ((id: ReturnType<typeof setTimeout>) => {
      pending.delete(id as unknown as number);
    }) as typeof clearTimeout,
  };

  let calls = 0;
  const bump = debounce(() => {
    calls += 1;
  }, MIN_REQUEST_SPACING_MS, timers);

  for (let i = 0; i < 25; i++) {
    bump();
  }
  assert.equal(pending.size, 1, "only the trailing timer survives");
  for (const fn of pending.values()) {
    fn();
  }
  assert.equal(calls, 1);
});

test("spacing keeps request rate at or below 5 per second", () => {
  assert.ok(1000 / MIN_REQUEST_SPACING_MS <= 5);
});

test("version gate drops stale responses", () => {
  const gate = new VersionGate();
  const first = gate.next();
  const second = gate.next();
  assert.equal(gate.isCurrent(first), false);
  assert.equal(gate.isCurrent(second), true);
  const third = gate.next();
  assert.equal(gate.isCurrent(second), false);
  assert.equal(gate.isCurrent(third), true);
});
