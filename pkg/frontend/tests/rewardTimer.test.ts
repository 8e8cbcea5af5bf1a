import { describe, expect, it } from "vitest";

import { ManualClock } from "../src/clock.js";
import { RewardTimer } from "../src/rewardTimer.js";

function runWithCap(capS: number) {
  const clock = new ManualClock();
  let finishedAt: number | null = null;
  const ticks: number[] = [];
  const timer = new RewardTimer(clock, {
    onTick: (s) => ticks.push(s),
    onFinish: () => {
      finishedAt = clock.now();
    },
  });
  timer.start(capS);
  // Advance well past the cap; playback must have been stopped at the cap.
  clock.advance(capS * 1000 + 30_000);
  return { finishedAt, ticks, timer };
}

describe("RewardTimer", () => {
  it.each([10, 75])("stops at the %ds cap within 0.5s", (capS) => {
    const { finishedAt, timer } = runWithCap(capS);
    expect(finishedAt).not.toBeNull();
    expect(Math.abs(finishedAt! / 1000 - capS)).toBeLessThanOrEqual(0.5);
    expect(timer.running).toBe(false);
  });

  it("fires onFinish exactly once", () => {
    const clock = new ManualClock();
    let finishes = 0;
    const timer = new RewardTimer(clock, { onFinish: () => finishes++ });
    timer.start(10);
    clock.advance(60_000);
    expect(finishes).toBe(1);
  });

  it("counts down through whole seconds", () => {
    const { ticks } = runWithCap(10);
    expect(ticks[0]).toBe(10);
    for (let i = 1; i < ticks.length; i++) {
      expect(ticks[i]).toBeLessThanOrEqual(ticks[i - 1]);
    }
    expect(ticks[ticks.length - 1]).toBe(1);
  });

  it("restart replaces the previous countdown", () => {
    const clock = new ManualClock();
    let finishes = 0;
    const timer = new RewardTimer(clock, { onFinish: () => finishes++ });
    timer.start(75);
    clock.advance(5_000);
    timer.start(10);
    clock.advance(11_000);
    expect(finishes).toBe(1);
  });
});
